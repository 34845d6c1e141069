#include "raftjamsec/authn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "raftjamsec/quadrature.hpp"
#include "raftjamsec/specfun.hpp"
#include "raftjamsec/trial_reduce.hpp"

namespace raftjamsec {

namespace {

constexpr std::uint64_t kAuthStream = 0x31;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Q extended to the closed real line; region boundaries may be infinite.
double q_ext(double x) {
  if (x == -kInf) return 1.0;
  if (x == kInf) return 0.0;
  return q_function(x);
}

void check_priors(const std::vector<double>& priors, std::size_t n,
                  const char* who) {
  if (priors.size() != n)
    throw std::invalid_argument(std::string(who) + ": prior count mismatch");
  double sum = 0.0;
  for (double p : priors) {
    if (!(p >= 0.0))
      throw std::invalid_argument(std::string(who) + ": negative prior");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument(std::string(who) + ": priors must sum to 1");
}

std::size_t pick_by_prior(const std::vector<double>& priors, double u) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < priors.size(); ++i) {
    acc += priors[i];
    if (u < acc) return i;
  }
  return priors.size() - 1;
}

// P[z lands within epsilon of at least one fingerprint | z ~ N(center, sigma^2)],
// computed over the merged acceptance intervals so overlaps are not
// double-counted.
double union_acceptance_probability(const std::vector<double>& sorted_psis,
                                    double epsilon, double sigma,
                                    double center) {
  double prob = 0.0;
  std::size_t i = 0;
  while (i < sorted_psis.size()) {
    double lo = sorted_psis[i] - epsilon;
    double hi = sorted_psis[i] + epsilon;
    std::size_t j = i + 1;
    while (j < sorted_psis.size() && sorted_psis[j] - epsilon <= hi) {
      hi = sorted_psis[j] + epsilon;
      ++j;
    }
    prob += q_function((lo - center) / sigma) - q_function((hi - center) / sigma);
    i = j;
  }
  return prob;
}

double pmd_for_eve(const AuthRegistry& reg,
                   const std::vector<double>& sorted_psis, double psi_eve,
                   PmdConvention convention) {
  if (convention == PmdConvention::acceptance_union) {
    return union_acceptance_probability(sorted_psis, reg.epsilon, reg.sigma,
                                        psi_eve);
  }
  double sum = 0.0;
  for (double psi : reg.ground_truth_db) {
    sum += q_function((psi - psi_eve - reg.epsilon) / reg.sigma) -
           q_function((psi - psi_eve + reg.epsilon) / reg.sigma);
  }
  return sum / static_cast<double>(reg.size());
}

}  // namespace

std::vector<double> AuthRegistry::equal_priors(std::size_t m) {
  return std::vector<double>(m, 1.0 / static_cast<double>(m));
}

bool AuthRegistry::has_duplicate_fingerprints() const {
  std::vector<double> sorted = ground_truth_db;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

void AuthRegistry::validate() const {
  if (ground_truth_db.empty())
    throw std::invalid_argument("AuthRegistry: needs at least one fingerprint");
  for (double psi : ground_truth_db) {
    if (!std::isfinite(psi))
      throw std::invalid_argument("AuthRegistry: non-finite fingerprint");
  }
  check_priors(priors, ground_truth_db.size(), "AuthRegistry");
  if (!(sigma > 0.0))
    throw std::invalid_argument("AuthRegistry: sigma must be > 0");
  if (!(epsilon >= 0.0))
    throw std::invalid_argument("AuthRegistry: epsilon must be >= 0");
  if (!(psi_min < psi_max))
    throw std::invalid_argument("AuthRegistry: requires psi_min < psi_max");
}

EveEnsemble EveEnsemble::from_values(std::vector<double> values) {
  EveEnsemble e;
  e.priors.assign(values.size(), 1.0 / static_cast<double>(values.size()));
  e.pathloss_db = std::move(values);
  return e;
}

EveEnsemble EveEnsemble::uniform(std::size_t n) {
  EveEnsemble e;
  e.uniform_support = true;
  e.uniform_count = n;
  e.priors.assign(n, 1.0 / static_cast<double>(n));
  return e;
}

void EveEnsemble::validate() const {
  if (size() == 0)
    throw std::invalid_argument("EveEnsemble: needs at least one node");
  check_priors(priors, size(), "EveEnsemble");
}

MlResult ml_identify(double z_db, const AuthRegistry& reg) {
  reg.validate();
  if (!std::isfinite(z_db))
    throw std::domain_error("ml_identify: non-finite measurement");
  MlResult best{std::abs(z_db - reg.ground_truth_db[0]), 0};
  for (std::size_t i = 1; i < reg.size(); ++i) {
    const double residual = std::abs(z_db - reg.ground_truth_db[i]);
    if (residual < best.ts_star) best = MlResult{residual, i};
  }
  return best;
}

AuthDecision decide(double z_db, const AuthRegistry& reg) {
  const MlResult ml = ml_identify(z_db, reg);
  return AuthDecision{ml.ts_star > reg.epsilon ? Hypothesis::h1_impersonation
                                               : Hypothesis::h0_no_impersonation,
                      ml.index, ml.ts_star};
}

double threshold_for_pfa(double target_pfa, double sigma) {
  if (!(target_pfa > 0.0 && target_pfa <= 1.0))
    throw std::domain_error("threshold_for_pfa: target must lie in (0, 1]");
  if (!(sigma > 0.0))
    throw std::domain_error("threshold_for_pfa: sigma must be > 0");
  const double epsilon = sigma * q_inverse(target_pfa / 2.0);
  return epsilon == 0.0 ? 0.0 : epsilon;
}

double pfa_closed_form(const AuthRegistry& reg) {
  reg.validate();
  return 2.0 * q_function(reg.epsilon / reg.sigma);
}

double pmd_closed_form(const AuthRegistry& reg, const EveEnsemble& eves,
                       PmdConvention convention) {
  reg.validate();
  eves.validate();
  if (eves.uniform_support)
    throw std::invalid_argument(
        "pmd_closed_form: needs explicit impersonator pathlosses; use "
        "pmd_expected for the uniform-support ensemble");
  std::vector<double> sorted = reg.ground_truth_db;
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  for (std::size_t j = 0; j < eves.size(); ++j) {
    total +=
        eves.priors[j] * pmd_for_eve(reg, sorted, eves.pathloss_db[j], convention);
  }
  return std::clamp(total, 0.0, 1.0);
}

double pmd_expected(const AuthRegistry& reg, const EveEnsemble& eves,
                    PmdConvention convention) {
  reg.validate();
  eves.validate();
  if (!eves.uniform_support)
    throw std::invalid_argument(
        "pmd_expected: ensemble must be uniform on the pathloss support");
  if (reg.epsilon == 0.0) return 0.0;
  std::vector<double> sorted = reg.ground_truth_db;
  std::sort(sorted.begin(), sorted.end());
  const double delta = reg.psi_max - reg.psi_min;
  // integrate between consecutive fingerprints so the acceptance bumps sit at
  // panel endpoints and cannot be skipped by the adaptive rule
  std::vector<double> cuts{reg.psi_min};
  for (double psi : sorted) {
    if (psi > cuts.back() && psi < reg.psi_max) cuts.push_back(psi);
  }
  cuts.push_back(reg.psi_max);
  const auto integrand = [&](double psi) {
    return pmd_for_eve(reg, sorted, psi, convention);
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] > cuts[i])
      total += integrate(integrand, cuts[i], cuts[i + 1]).value;
  }
  return std::clamp(total / delta, 0.0, 1.0);
}

double pmc_closed_form(const AuthRegistry& reg, PmcBoundary boundary) {
  reg.validate();
  const std::size_t m = reg.size();
  // sort by (value, original index): for duplicated fingerprints the ML
  // tie-break always awards the shared region to the lowest original index
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (reg.ground_truth_db[a] != reg.ground_truth_db[b])
      return reg.ground_truth_db[a] < reg.ground_truth_db[b];
    return a < b;
  });
  const double lo_edge =
      boundary == PmcBoundary::infinite ? -kInf : reg.psi_min;
  const double hi_edge = boundary == PmcBoundary::infinite ? kInf : reg.psi_max;
  double total = 0.0;
  std::size_t i = 0;
  while (i < m) {
    const double value = reg.ground_truth_db[order[i]];
    std::size_t run_end = i + 1;
    while (run_end < m && reg.ground_truth_db[order[run_end]] == value)
      ++run_end;
    const double lower =
        i == 0 ? lo_edge : 0.5 * (reg.ground_truth_db[order[i - 1]] + value);
    const double upper =
        run_end == m ? hi_edge
                     : 0.5 * (value + reg.ground_truth_db[order[run_end]]);
    const double p_correct =
        q_ext((lower - value) / reg.sigma) - q_ext((upper - value) / reg.sigma);
    // whole run region goes to the lowest original index in the run
    total += (1.0 - p_correct) * reg.priors[order[i]];
    for (std::size_t k = i + 1; k < run_end; ++k) total += reg.priors[order[k]];
    i = run_end;
  }
  return std::clamp(total, 0.0, 1.0);
}

namespace {

struct AuthTally {
  std::uint64_t fa = 0;
  std::uint64_t md = 0;
  std::uint64_t wrong = 0;
  std::uint64_t accepted_wrong = 0;

  AuthTally& operator+=(const AuthTally& o) {
    fa += o.fa;
    md += o.md;
    wrong += o.wrong;
    accepted_wrong += o.accepted_wrong;
    return *this;
  }
};

McEstimate to_estimate(std::uint64_t count, std::uint64_t draws) {
  McEstimate est;
  est.trials = draws;
  est.mean = static_cast<double>(count) / static_cast<double>(draws);
  est.std_error =
      std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(draws));
  return est;
}

}  // namespace

AuthMcResult monte_carlo_auth(const AuthRegistry& reg, const EveEnsemble& eves,
                              std::uint64_t draws, std::uint64_t seed,
                              int workers) {
  reg.validate();
  eves.validate();
  if (draws < 1)
    throw std::invalid_argument("monte_carlo_auth: draws must be >= 1");
  const double support = reg.psi_max - reg.psi_min;
  auto body = [&](std::uint64_t t, AuthTally& tally) {
    Rng g(substream(seed, kAuthStream, t));
    // legitimate transmission
    const std::size_t true_i = pick_by_prior(reg.priors, g.uniform());
    const double z_leg = reg.ground_truth_db[true_i] + reg.sigma * g.normal();
    const AuthDecision d_leg = decide(z_leg, reg);
    if (d_leg.hypothesis == Hypothesis::h1_impersonation) ++tally.fa;
    if (d_leg.identified_index != true_i) {
      ++tally.wrong;
      if (d_leg.hypothesis == Hypothesis::h0_no_impersonation)
        ++tally.accepted_wrong;
    }
    // impersonator transmission
    const std::size_t j = pick_by_prior(eves.priors, g.uniform());
    const double psi_eve = eves.uniform_support
                               ? reg.psi_min + support * g.uniform()
                               : eves.pathloss_db[j];
    const double z_eve = psi_eve + reg.sigma * g.normal();
    if (decide(z_eve, reg).hypothesis == Hypothesis::h0_no_impersonation)
      ++tally.md;
  };
  const AuthTally tally = reduce_trials<AuthTally>(draws, workers, body);
  AuthMcResult res;
  res.pfa = to_estimate(tally.fa, draws);
  res.pmd = to_estimate(tally.md, draws);
  res.pmc = to_estimate(tally.wrong, draws);
  res.pmc_accepted_wrong = to_estimate(tally.accepted_wrong, draws);
  return res;
}

AuthMcResult monte_carlo_auth_serial(const AuthRegistry& reg,
                                     const EveEnsemble& eves,
                                     std::uint64_t draws, std::uint64_t seed) {
  return monte_carlo_auth(reg, eves, draws, seed, 1);
}

std::vector<RocPoint> roc_curve(const AuthRegistry& reg,
                                const EveEnsemble& eves,
                                const std::vector<double>& pfa_grid,
                                std::uint64_t draws, std::uint64_t seed,
                                int workers) {
  reg.validate();
  eves.validate();
  std::vector<RocPoint> points;
  points.reserve(pfa_grid.size());
  for (double pfa : pfa_grid) {
    AuthRegistry tuned = reg;
    tuned.epsilon = threshold_for_pfa(pfa, reg.sigma);
    const double pmd =
        eves.uniform_support
            ? pmd_expected(tuned, eves, PmdConvention::acceptance_union)
            : pmd_closed_form(tuned, eves, PmdConvention::acceptance_union);
    const AuthMcResult mc = monte_carlo_auth(tuned, eves, draws, seed, workers);
    points.push_back(RocPoint{pfa, tuned.epsilon, 1.0 - pmd,
                              1.0 - mc.pmd.mean, mc.pmd.std_error});
  }
  return points;
}

AuthScenario sample_auth_scenario(std::size_t m, std::size_t n, double alpha,
                                  double radius, double sigma, double epsilon,
                                  std::uint64_t seed) {
  if (m == 0 || n == 0)
    throw std::invalid_argument("sample_auth_scenario: m and n must be >= 1");
  Rng rng(substream(seed, kAuthStream, 0x5ca1e));
  auto draw_point = [&]() {
    for (;;) {
      const double r = radius * std::sqrt(rng.uniform());
      if (r < 1.0) continue;  // keep pathloss inside the registry support
      const double theta = 2.0 * M_PI * rng.uniform();
      return Vec2{r * std::cos(theta), r * std::sin(theta)};
    }
  };
  AuthScenario sc;
  sc.field.followers.reserve(m);
  for (std::size_t i = 0; i < m; ++i) sc.field.followers.push_back(draw_point());
  sc.eve_positions.reserve(n);
  for (std::size_t j = 0; j < n; ++j) sc.eve_positions.push_back(draw_point());
  sc.reg = registry_from_field(sc.field, alpha, sigma, epsilon, radius);
  std::vector<double> eve_psi;
  eve_psi.reserve(n);
  for (const Vec2& e : sc.eve_positions)
    eve_psi.push_back(pathloss_db(e.norm(), alpha));
  sc.eves = EveEnsemble::from_values(std::move(eve_psi));
  return sc;
}

AuthRegistry registry_from_field(const PppField& field, double alpha,
                                 double sigma, double epsilon, double radius) {
  if (field.followers.empty())
    throw std::invalid_argument("registry_from_field: field has no followers");
  AuthRegistry reg;
  reg.ground_truth_db.reserve(field.followers.size());
  for (const Vec2& f : field.followers) {
    reg.ground_truth_db.push_back(pathloss_db(f.norm(), alpha));
  }
  reg.priors = AuthRegistry::equal_priors(field.followers.size());
  reg.sigma = sigma;
  reg.epsilon = epsilon;
  reg.psi_min = pathloss_db(1.0, alpha);  // 0 dB at the 1 m floor
  reg.psi_max = pathloss_db(radius, alpha);
  reg.validate();
  return reg;
}

}  // namespace raftjamsec
