#pragma once

#include <cstdint>

#include "raftjamsec/coverage.hpp"
#include "raftjamsec/netmodel.hpp"

namespace raftjamsec {

// origin_referenced reproduces the analytic model exactly: the tagged
// serving distance is drawn from f_R on (0, inf) and jammer distances are
// measured from the origin for both links. receiver_referenced is the
// physical variant: the tagged follower is a uniformly chosen member of the
// sampled finite field and DL interference is measured at that follower.
enum class GeometryMode { origin_referenced, receiver_referenced };

struct McConfig {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  int workers_hint = 0;  // 0: let OpenMP decide; 1 forces the serial path

  void validate() const {
    if (trials < 1) throw std::invalid_argument("McConfig: trials must be >= 1");
  }
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
  // receiver mode only: fields redrawn because no follower was sampled
  std::uint64_t resamples = 0;
};

struct LinkEstimates {
  McEstimate dl;
  McEstimate ul;
  McEstimate joint;
};

// Monte Carlo coverage estimate for the link selected by q.link.
// Deterministic given (seed, trials, query, mode) regardless of workers_hint.
McEstimate estimate_coverage(const CoverageQuery& q, const McConfig& mc,
                             GeometryMode mode);

// Serial reference implementation; bit-identical to estimate_coverage.
McEstimate estimate_coverage_serial(const CoverageQuery& q, const McConfig& mc,
                                    GeometryMode mode);

// One pass over the trial range producing all three link estimates.
// The per-link streams are keyed identically to estimate_coverage, so each
// component matches the single-link entry point bit for bit.
LinkEstimates estimate_all_links(const CoverageQuery& q, const McConfig& mc,
                                 GeometryMode mode);

// Quantifies the independence assumption behind the joint coverage product:
// shared_geometry draws one field + tagged distance per trial and tests both
// links on it (independent fading), independent_product multiplies the two
// marginal estimates. gap = shared - product.
struct JointDependenceReport {
  McEstimate shared_geometry;
  McEstimate independent_product;  // std_error by the delta method
  double gap = 0.0;
};

JointDependenceReport estimate_joint_dependence(const CoverageQuery& q,
                                                const McConfig& mc);

}  // namespace raftjamsec
