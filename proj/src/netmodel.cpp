#include "raftjamsec/netmodel.hpp"

#include <limits>

namespace raftjamsec {

namespace {
constexpr std::uint64_t kFieldStream = 0x11;

double interference_sum(std::span<const double> dists,
                        std::span<const double> fades, double power_mw,
                        double alpha) {
  double total = 0.0;
  for (std::size_t j = 0; j < dists.size(); ++j) {
    total += power_mw * fades[j] * std::pow(dists[j], -alpha);
  }
  return total;
}
}  // namespace

void ChannelParams::validate() const {
  if (!(alpha > 2.0))
    throw std::invalid_argument("ChannelParams: alpha must be > 2");
  if (!std::isfinite(p_leader_dbm) || !std::isfinite(p_follower_dbm) ||
      !std::isfinite(p_jammer_dbm))
    throw std::invalid_argument("ChannelParams: powers must be finite");
  if (!std::isfinite(beta_dl_db) || !std::isfinite(beta_ul_db))
    throw std::invalid_argument("ChannelParams: thresholds must be finite");
}

void DeploymentConfig::validate() const {
  if (!(rho_follower > 0.0))
    throw std::invalid_argument("DeploymentConfig: rho_follower must be > 0");
  if (!(radius > 0.0))
    throw std::invalid_argument("DeploymentConfig: radius must be > 0");
}

void JammerAnnulus::validate() const {
  if (!(z1 >= 0.0) || !(z2 >= z1))
    throw std::invalid_argument("JammerAnnulus: requires 0 <= z1 <= z2");
  if (!(rho_jammer >= 0.0))
    throw std::invalid_argument("JammerAnnulus: rho_jammer must be >= 0");
}

double sample_annulus_radius(const JammerAnnulus& jam, Rng& rng) {
  const double u = rng.uniform();
  return std::sqrt(jam.z1 * jam.z1 + u * (jam.z2 * jam.z2 - jam.z1 * jam.z1));
}

Vec2 sample_annulus_point(const JammerAnnulus& jam, Rng& rng) {
  const double r = sample_annulus_radius(jam, rng);
  const double theta = 2.0 * M_PI * rng.uniform();
  return Vec2{r * std::cos(theta), r * std::sin(theta)};
}

PppField sample_field(const DeploymentConfig& dep, const JammerAnnulus& jam,
                      Rng& rng) {
  dep.validate();
  jam.validate();
  PppField field;
  const std::uint64_t n_followers =
      rng.poisson(dep.rho_follower * M_PI * dep.radius * dep.radius);
  field.followers.reserve(n_followers);
  for (std::uint64_t i = 0; i < n_followers; ++i) {
    const double r = dep.radius * std::sqrt(rng.uniform());
    const double theta = 2.0 * M_PI * rng.uniform();
    field.followers.push_back(Vec2{r * std::cos(theta), r * std::sin(theta)});
  }
  const std::uint64_t n_jammers = rng.poisson(jam.rho_jammer * jam.area());
  field.jammers.reserve(n_jammers);
  for (std::uint64_t i = 0; i < n_jammers; ++i) {
    field.jammers.push_back(sample_annulus_point(jam, rng));
  }
  return field;
}

PppField sample_field(const DeploymentConfig& dep, const JammerAnnulus& jam) {
  Rng rng(substream(dep.seed, kFieldStream, 0));
  return sample_field(dep, jam, rng);
}

double pathloss_db(double d, double alpha) {
  if (!(d > 0.0)) throw std::domain_error("pathloss_db: distance must be > 0");
  return 10.0 * alpha * std::log10(d);
}

double sir_from_components(double tx_power_mw, double signal_dist,
                           double signal_fade, double alpha,
                           std::span<const double> jammer_dists,
                           std::span<const double> jammer_fades,
                           double jammer_power_mw) {
  if (!(signal_dist > 0.0))
    throw std::domain_error("sir: degenerate zero signal distance");
  const double interference =
      interference_sum(jammer_dists, jammer_fades, jammer_power_mw, alpha);
  if (interference <= 0.0) return std::numeric_limits<double>::infinity();
  return tx_power_mw * signal_fade * std::pow(signal_dist, -alpha) /
         interference;
}

namespace {

double sir_at_receiver(const PppField& field, std::size_t follower_index,
                       const ChannelParams& ch, double tx_power_mw,
                       const Vec2& receiver, Rng& fading) {
  if (follower_index >= field.followers.size())
    throw std::out_of_range("sir: follower index out of range");
  const double signal_dist = field.followers[follower_index].norm();
  const double signal_fade = sample_rayleigh_power(fading);
  std::vector<double> dists(field.jammers.size());
  std::vector<double> fades(field.jammers.size());
  for (std::size_t j = 0; j < field.jammers.size(); ++j) {
    dists[j] = distance(field.jammers[j], receiver);
    fades[j] = sample_rayleigh_power(fading);
  }
  return sir_from_components(tx_power_mw, signal_dist, signal_fade, ch.alpha,
                             dists, fades, ch.p_jammer_mw());
}

}  // namespace

double sir_downlink(const PppField& field, std::size_t follower_index,
                    const ChannelParams& ch, Rng& fading) {
  if (follower_index >= field.followers.size())
    throw std::out_of_range("sir_downlink: follower index out of range");
  return sir_at_receiver(field, follower_index, ch, ch.p_leader_mw(),
                         field.followers[follower_index], fading);
}

double sir_uplink(const PppField& field, std::size_t follower_index,
                  const ChannelParams& ch, Rng& fading) {
  return sir_at_receiver(field, follower_index, ch, ch.p_follower_mw(),
                         Vec2{0.0, 0.0}, fading);
}

}  // namespace raftjamsec
