#include "raftjamsec/mc_engine.hpp"

#include <cmath>

#include "raftjamsec/trial_reduce.hpp"

namespace raftjamsec {

namespace {

constexpr std::uint64_t kStreamDl = 0x21;
constexpr std::uint64_t kStreamUl = 0x22;
constexpr std::uint64_t kStreamShared = 0x23;

struct CovTally {
  std::uint64_t dl = 0;
  std::uint64_t ul = 0;
  std::uint64_t joint = 0;
  std::uint64_t resamples = 0;

  CovTally& operator+=(const CovTally& o) {
    dl += o.dl;
    ul += o.ul;
    joint += o.joint;
    resamples += o.resamples;
    return *this;
  }
};

struct TrialParams {
  JammerAnnulus jam;
  DeploymentConfig dep;
  ChannelParams ch;
  double lambda_j;
  double rho_fr;
  double pj_mw;
  double p_dl_mw, beta_dl;
  double p_ul_mw, beta_ul;
};

TrialParams make_params(const CoverageQuery& q) {
  q.validate();
  TrialParams p;
  p.jam = q.jam;
  p.dep = q.dep;
  p.ch = q.ch;
  p.lambda_j = q.jam.rho_jammer * q.jam.area();
  p.rho_fr = q.effective_rho_fr();
  p.pj_mw = q.ch.p_jammer_mw();
  p.p_dl_mw = q.ch.p_leader_mw();
  p.beta_dl = q.ch.beta_dl_lin();
  p.p_ul_mw = q.ch.p_follower_mw();
  p.beta_ul = q.ch.beta_ul_lin();
  return p;
}

// One analytic-model trial: origin-referenced jammer distances, serving
// distance from f_R. Success test is written as signal > beta * interference
// so a zero-interference trial passes at any finite threshold.
bool origin_model_trial(const TrialParams& p, double tx_mw, double beta, Rng& g) {
  double interference = 0.0;
  const std::uint64_t nj = g.poisson(p.lambda_j);
  for (std::uint64_t j = 0; j < nj; ++j) {
    const double radius = sample_annulus_radius(p.jam, g);
    interference += p.pj_mw * g.exponential() * std::pow(radius, -p.ch.alpha);
  }
  const double r = std::sqrt(g.exponential() / (p.rho_fr * M_PI));
  const double signal = tx_mw * g.exponential() * std::pow(r, -p.ch.alpha);
  return signal > beta * interference;
}

struct ReceiverOutcome {
  bool dl_ok;
  bool ul_ok;
  std::uint64_t resamples;
};

// Physical-model trial: one shared field, a uniformly tagged follower, DL
// interference at the follower and UL interference at the leader.
// Both links are always evaluated (in a fixed order) so every entry point
// consumes the stream identically.
ReceiverOutcome receiver_trial(const TrialParams& p, Rng& g) {
  ReceiverOutcome out{false, false, 0};
  PppField field;
  for (;;) {
    field = sample_field(p.dep, p.jam, g);
    if (!field.followers.empty()) break;
    ++out.resamples;
  }
  auto idx = static_cast<std::size_t>(g.uniform() *
                                      static_cast<double>(field.followers.size()));
  if (idx >= field.followers.size()) idx = field.followers.size() - 1;
  out.dl_ok = sir_downlink(field, idx, p.ch, g) > p.beta_dl;
  out.ul_ok = sir_uplink(field, idx, p.ch, g) > p.beta_ul;
  return out;
}

McEstimate finish(std::uint64_t successes, const McConfig& mc,
                  std::uint64_t resamples) {
  McEstimate est;
  est.trials = mc.trials;
  est.resamples = resamples;
  est.mean = static_cast<double>(successes) / static_cast<double>(mc.trials);
  est.std_error =
      std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(mc.trials));
  return est;
}

CovTally run_tally(const CoverageQuery& q, const McConfig& mc,
                   GeometryMode mode, bool want_dl, bool want_ul,
                   int workers) {
  mc.validate();
  const TrialParams p = make_params(q);
  const std::uint64_t seed = mc.seed;
  auto body = [&](std::uint64_t t, CovTally& tally) {
    bool dl_ok = false;
    bool ul_ok = false;
    if (mode == GeometryMode::origin_referenced) {
      if (want_dl) {
        Rng g(substream(seed, kStreamDl, t));
        dl_ok = origin_model_trial(p, p.p_dl_mw, p.beta_dl, g);
      }
      if (want_ul) {
        Rng g(substream(seed, kStreamUl, t));
        ul_ok = origin_model_trial(p, p.p_ul_mw, p.beta_ul, g);
      }
    } else {
      Rng g(substream(seed, kStreamShared, t));
      const ReceiverOutcome out = receiver_trial(p, g);
      dl_ok = out.dl_ok;
      ul_ok = out.ul_ok;
      tally.resamples += out.resamples;
    }
    tally.dl += dl_ok ? 1 : 0;
    tally.ul += ul_ok ? 1 : 0;
    tally.joint += (dl_ok && ul_ok) ? 1 : 0;
  };
  return reduce_trials<CovTally>(mc.trials, workers, body);
}

}  // namespace

McEstimate estimate_coverage(const CoverageQuery& q, const McConfig& mc,
                             GeometryMode mode) {
  const bool want_dl = q.link != Link::ul;
  const bool want_ul = q.link != Link::dl;
  const CovTally tally =
      run_tally(q, mc, mode, want_dl, want_ul, mc.workers_hint);
  const std::uint64_t successes = q.link == Link::dl   ? tally.dl
                                  : q.link == Link::ul ? tally.ul
                                                       : tally.joint;
  return finish(successes, mc, tally.resamples);
}

McEstimate estimate_coverage_serial(const CoverageQuery& q, const McConfig& mc,
                                    GeometryMode mode) {
  McConfig serial = mc;
  serial.workers_hint = 1;
  return estimate_coverage(q, serial, mode);
}

LinkEstimates estimate_all_links(const CoverageQuery& q, const McConfig& mc,
                                 GeometryMode mode) {
  const CovTally tally = run_tally(q, mc, mode, true, true, mc.workers_hint);
  LinkEstimates est;
  est.dl = finish(tally.dl, mc, tally.resamples);
  est.ul = finish(tally.ul, mc, tally.resamples);
  est.joint = finish(tally.joint, mc, tally.resamples);
  return est;
}

JointDependenceReport estimate_joint_dependence(const CoverageQuery& q,
                                                const McConfig& mc) {
  mc.validate();
  const TrialParams p = make_params(q);
  const std::uint64_t seed = mc.seed;
  // Shared geometry per trial (one jammer constellation, one serving
  // distance), independent fading per link: the quantity the independence
  // product approximates.
  auto body = [&](std::uint64_t t, CovTally& tally) {
    Rng g(substream(seed, kStreamShared, t));
    const std::uint64_t nj = g.poisson(p.lambda_j);
    double interf_dl = 0.0;
    double interf_ul = 0.0;
    for (std::uint64_t j = 0; j < nj; ++j) {
      const double radius = sample_annulus_radius(p.jam, g);
      const double loss = std::pow(radius, -p.ch.alpha);
      interf_dl += p.pj_mw * g.exponential() * loss;
      interf_ul += p.pj_mw * g.exponential() * loss;
    }
    const double r = std::sqrt(g.exponential() / (p.rho_fr * M_PI));
    const double loss_r = std::pow(r, -p.ch.alpha);
    const bool dl_ok =
        p.p_dl_mw * g.exponential() * loss_r > p.beta_dl * interf_dl;
    const bool ul_ok =
        p.p_ul_mw * g.exponential() * loss_r > p.beta_ul * interf_ul;
    tally.dl += dl_ok ? 1 : 0;
    tally.ul += ul_ok ? 1 : 0;
    tally.joint += (dl_ok && ul_ok) ? 1 : 0;
  };
  const CovTally tally =
      reduce_trials<CovTally>(mc.trials, mc.workers_hint, body);
  JointDependenceReport rep;
  rep.shared_geometry = finish(tally.joint, mc, 0);
  const McEstimate dl = finish(tally.dl, mc, 0);
  const McEstimate ul = finish(tally.ul, mc, 0);
  rep.independent_product.trials = mc.trials;
  rep.independent_product.mean = dl.mean * ul.mean;
  rep.independent_product.std_error =
      std::sqrt(ul.mean * ul.mean * dl.std_error * dl.std_error +
                dl.mean * dl.mean * ul.std_error * ul.std_error);
  rep.gap = rep.shared_geometry.mean - rep.independent_product.mean;
  return rep;
}

}  // namespace raftjamsec
