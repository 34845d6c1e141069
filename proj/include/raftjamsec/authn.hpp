#pragma once

#include <cstdint>
#include <vector>

#include "raftjamsec/mc_engine.hpp"
#include "raftjamsec/netmodel.hpp"

namespace raftjamsec {

// Leader-side ground truth: one pathloss fingerprint per legitimate follower,
// the measurement-noise scale, the decision threshold, and the pathloss
// support bounds used as the prior for unknown impersonators.
struct AuthRegistry {
  std::vector<double> ground_truth_db;  // Psi_1..Psi_M
  std::vector<double> priors;           // pi(i), sums to 1
  double sigma = 0.316227766016838;     // noise std dev in dB (LQ = 10 dB)
  double epsilon = 0.5;                 // decision threshold in dB
  double psi_min = 0.0;
  double psi_max = 80.0;

  std::size_t size() const { return ground_truth_db.size(); }
  bool has_duplicate_fingerprints() const;
  void validate() const;

  static std::vector<double> equal_priors(std::size_t m);
};

// Impersonator population: either explicit pathloss values or the marker
// "uniform on [psi_min, psi_max]" resolved against a registry's support.
struct EveEnsemble {
  std::vector<double> pathloss_db;
  std::vector<double> priors;
  bool uniform_support = false;
  std::size_t uniform_count = 0;

  static EveEnsemble from_values(std::vector<double> values);
  static EveEnsemble uniform(std::size_t n);
  std::size_t size() const {
    return uniform_support ? uniform_count : pathloss_db.size();
  }
  void validate() const;
};

enum class Hypothesis : std::uint8_t {
  h0_no_impersonation,
  h1_impersonation,
};

struct AuthDecision {
  Hypothesis hypothesis;
  std::size_t identified_index;  // meaningful under H0
  double test_statistic;         // TS*, dB
};

struct MlResult {
  double ts_star;
  std::size_t index;
};

// Nearest-fingerprint search: min_i |z - Psi_i| with its argmin.
// Ties break toward the lowest index.
MlResult ml_identify(double z_db, const AuthRegistry& reg);

// Two-step test: ML identification then TS* vs epsilon. The boundary
// TS* == epsilon decides H0.
AuthDecision decide(double z_db, const AuthRegistry& reg);

// Neyman-Pearson threshold for a false-alarm target: sigma * Qinv(pfa / 2).
double threshold_for_pfa(double target_pfa, double sigma);

// False-alarm probability 2 Q(epsilon / sigma); independent of the
// fingerprint layout (neighbouring-fingerprint acceptance is ignored, which
// slightly overstates P_fa for tightly packed registries).
double pfa_closed_form(const AuthRegistry& reg);

// Missed-detection normalization. fingerprint_averaged carries a 1/M factor next to
// the sum over fingerprints; acceptance_union computes the exact probability
// that the measurement lands in the union of the +-epsilon acceptance
// intervals (the quantity the Monte Carlo oracle measures). The two coincide
// for M = 1.
enum class PmdConvention { fingerprint_averaged, acceptance_union };

double pmd_closed_form(const AuthRegistry& reg, const EveEnsemble& eves,
                       PmdConvention convention = PmdConvention::fingerprint_averaged);

// Expected missed detection for impersonators with pathloss uniform on
// [psi_min, psi_max], by quadrature over the support. The ensemble must be a
// uniform-support one.
double pmd_expected(const AuthRegistry& reg, const EveEnsemble& eves,
                    PmdConvention convention = PmdConvention::fingerprint_averaged);

// Outermost decision-region boundaries for the misclassification formula:
// infinite matches the untruncated ML rule over the whole line; truncated
// clips the first and last regions at [psi_min, psi_max].
enum class PmcBoundary { infinite, truncated_support };

double pmc_closed_form(const AuthRegistry& reg,
                       PmcBoundary boundary = PmcBoundary::infinite);

struct AuthMcResult {
  McEstimate pfa;  // H1 among legitimate transmissions
  McEstimate pmd;  // H0 among impersonator transmissions
  McEstimate pmc;  // wrong ML index among legitimate transmissions
  // wrong index AND accepted (H0) among legitimate transmissions; reported
  // alongside pmc because the closed form describes the ML stage alone
  McEstimate pmc_accepted_wrong;
};

// Empirical oracle: per draw, one legitimate transmission (true node from the
// priors, z = Psi_i + noise) and one impersonator transmission (pathloss from
// the ensemble, z = Psi_E + noise). Deterministic given the seed; trials are
// partition-independent.
AuthMcResult monte_carlo_auth(const AuthRegistry& reg, const EveEnsemble& eves,
                              std::uint64_t draws, std::uint64_t seed,
                              int workers = 0);

// Serial reference implementation; bit-identical to monte_carlo_auth.
AuthMcResult monte_carlo_auth_serial(const AuthRegistry& reg,
                                     const EveEnsemble& eves,
                                     std::uint64_t draws, std::uint64_t seed);

struct RocPoint {
  double pfa_target;
  double epsilon;
  double pd_closed_form;
  double pd_monte_carlo;
  double mc_std_error;
};

// Detection probability P_d = 1 - P_md against the false-alarm target, with
// epsilon set by threshold_for_pfa per point. Closed form uses the union
// convention so the Monte Carlo overlay estimates the same quantity.
std::vector<RocPoint> roc_curve(const AuthRegistry& reg,
                                const EveEnsemble& eves,
                                const std::vector<double>& pfa_grid,
                                std::uint64_t draws, std::uint64_t seed,
                                int workers = 0);

// Builds the leader's registry from a sampled field: fingerprint of follower
// i is its pathloss at the sampled distance, support is the radial extent
// [1 m, radius] of the deployment disk, equal priors.
AuthRegistry registry_from_field(const PppField& field, double alpha,
                                 double sigma, double epsilon, double radius);

// A pinned realization with fixed node counts: m follower and n impersonator
// positions uniform on the deployment disk (with a 1 m exclusion around the
// leader so every pathloss lies inside the registry support), fingerprints
// via the pathloss law, equal priors.
struct AuthScenario {
  PppField field;              // followers populated; jammers empty
  std::vector<Vec2> eve_positions;
  AuthRegistry reg;
  EveEnsemble eves;
};

AuthScenario sample_auth_scenario(std::size_t m, std::size_t n, double alpha,
                                  double radius, double sigma, double epsilon,
                                  std::uint64_t seed);

}  // namespace raftjamsec
