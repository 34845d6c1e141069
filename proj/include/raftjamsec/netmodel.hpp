#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "raftjamsec/rng.hpp"

namespace raftjamsec {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_milliwatts(double dbm) { return std::pow(10.0, dbm / 10.0); }

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  double norm() const { return std::hypot(x, y); }
};

inline double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Transmit powers and SIR thresholds. Powers are stored in dBm as configured
// and converted once to linear milliwatts where the formulas need them.
struct ChannelParams {
  double alpha = 3.0;            // pathloss exponent, > 2
  double p_leader_dbm = 30.0;    // P
  double p_follower_dbm = 20.0;  // P_F
  double p_jammer_dbm = 10.0;    // P_j
  double beta_dl_db = -20.0;     // DL SIR threshold
  double beta_ul_db = -20.0;     // UL SIR threshold

  double p_leader_mw() const { return dbm_to_milliwatts(p_leader_dbm); }
  double p_follower_mw() const { return dbm_to_milliwatts(p_follower_dbm); }
  double p_jammer_mw() const { return dbm_to_milliwatts(p_jammer_dbm); }
  double gamma_dl() const { return p_jammer_mw() / p_leader_mw(); }
  double gamma_ul() const { return p_jammer_mw() / p_follower_mw(); }
  double beta_dl_lin() const { return db_to_linear(beta_dl_db); }
  double beta_ul_lin() const { return db_to_linear(beta_ul_db); }

  void validate() const;
};

struct DeploymentConfig {
  double rho_follower = 15.0 / (M_PI * 500.0 * 500.0);  // nodes per m^2
  double radius = 500.0;                                // deployment disk, m
  std::uint64_t seed = 1;

  void validate() const;
};

// Effective jamming region: an annulus [z1, z2] around the leader.
// z1 == z2 is accepted and means an empty region (no jammers).
struct JammerAnnulus {
  double z1 = 50.0;
  double z2 = 300.0;
  double rho_jammer = 15.0 / (M_PI * 500.0 * 500.0);

  double area() const { return M_PI * (z2 * z2 - z1 * z1); }
  void validate() const;
};

// One sampled realization of node positions. The leader sits at the origin.
struct PppField {
  std::vector<Vec2> followers;
  std::vector<Vec2> jammers;
};

// Poisson counts with uniform positions: followers on the deployment disk,
// jammers on the annulus. Deterministic given the stream state.
PppField sample_field(const DeploymentConfig& dep, const JammerAnnulus& jam,
                      Rng& rng);

// Convenience overload seeding the stream from dep.seed.
PppField sample_field(const DeploymentConfig& dep, const JammerAnnulus& jam);

// Uniform point on the annulus [z1, z2] via inverse-CDF radius sampling.
Vec2 sample_annulus_point(const JammerAnnulus& jam, Rng& rng);

// Radial distance of a uniform point on the annulus (no angle drawn).
double sample_annulus_radius(const JammerAnnulus& jam, Rng& rng);

// Large-scale attenuation in dB at distance d (meters): 10 * alpha * log10(d).
// Throws std::domain_error for d <= 0.
double pathloss_db(double d, double alpha);

// |h|^2 for h ~ CN(0,1): an Exp(1) draw.
inline double sample_rayleigh_power(Rng& rng) { return rng.exponential(); }

// SIR of a single link with every random quantity passed in explicitly:
// signal tx power (mW) over distance signal_dist with fading signal_fade,
// against jammers at the given distances from the receiver with the given
// fading values. Returns +inf when the aggregate interference is zero, so
// the coverage predicate SIR > beta holds at any finite threshold.
double sir_from_components(double tx_power_mw, double signal_dist,
                           double signal_fade, double alpha,
                           std::span<const double> jammer_dists,
                           std::span<const double> jammer_fades,
                           double jammer_power_mw);

// DL SIR of one follower: leader signal over its distance, interference
// measured at the follower (receiver-referenced jammer distances).
// Fresh Exp(1) fading is drawn for the signal and every jammer.
double sir_downlink(const PppField& field, std::size_t follower_index,
                    const ChannelParams& ch, Rng& fading);

// UL SIR of one follower: follower signal over the same distance,
// interference measured at the leader (origin).
double sir_uplink(const PppField& field, std::size_t follower_index,
                  const ChannelParams& ch, Rng& fading);

}  // namespace raftjamsec
