#include <doctest.h>

#include <cmath>

#include "raftjamsec/authn.hpp"

using namespace raftjamsec;

namespace {

AuthRegistry make_registry(std::vector<double> psis, double sigma,
                           double epsilon) {
  AuthRegistry reg;
  reg.priors = AuthRegistry::equal_priors(psis.size());
  reg.ground_truth_db = std::move(psis);
  reg.sigma = sigma;
  reg.epsilon = epsilon;
  reg.psi_min = 0.0;
  reg.psi_max = 100.0;
  return reg;
}

// per-term evaluation of the missed-detection double sum, written out
// directly in the test
double pmd_terms(const AuthRegistry& reg, double psi_eve) {
  double sum = 0.0;
  for (double psi : reg.ground_truth_db) {
    sum += q_function((psi - psi_eve - reg.epsilon) / reg.sigma) -
           q_function((psi - psi_eve + reg.epsilon) / reg.sigma);
  }
  return sum;
}

}  // namespace

TEST_CASE("ml_identify nearest fingerprint") {
  const AuthRegistry reg = make_registry({60.0, 65.0, 70.0}, 1.0, 0.5);
  SUBCASE("exact hit has zero residual") {
    const MlResult r = ml_identify(70.0, reg);
    CHECK(r.ts_star == 0.0);
    CHECK(r.index == 2);
  }
  SUBCASE("exhaustive-scan example") {
    const MlResult r = ml_identify(66.4, reg);
    CHECK(r.ts_star == doctest::Approx(1.4).epsilon(1e-12));
    CHECK(r.index == 1);
  }
  SUBCASE("single fingerprint always wins") {
    const AuthRegistry one = make_registry({42.0}, 1.0, 0.5);
    const MlResult r = ml_identify(55.5, one);
    CHECK(r.index == 0);
    CHECK(r.ts_star == doctest::Approx(13.5));
  }
  SUBCASE("ties break toward the lowest index") {
    const AuthRegistry reg2 = make_registry({60.0, 64.0}, 1.0, 0.5);
    CHECK(ml_identify(62.0, reg2).index == 0);
  }
  CHECK_THROWS_AS(ml_identify(std::nan(""), reg), std::domain_error);
}

TEST_CASE("decide thresholds the ML residual") {
  const AuthRegistry reg = make_registry({60.0, 65.0}, 1.0, 2.0);
  SUBCASE("on-fingerprint measurements are accepted") {
    const AuthDecision d = decide(65.0, reg);
    CHECK(d.hypothesis == Hypothesis::h0_no_impersonation);
    CHECK(d.identified_index == 1);
  }
  SUBCASE("far measurements are rejected") {
    CHECK(decide(90.0, reg).hypothesis == Hypothesis::h1_impersonation);
  }
  SUBCASE("midpoint measurement exceeds the threshold") {
    const AuthDecision d = decide(62.5, reg);
    CHECK(d.test_statistic == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(d.hypothesis == Hypothesis::h1_impersonation);
  }
  SUBCASE("boundary goes to H0") {
    const AuthDecision d = decide(63.0, reg);  // residual exactly epsilon
    CHECK(d.test_statistic == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(d.hypothesis == Hypothesis::h0_no_impersonation);
  }
}

TEST_CASE("threshold_for_pfa") {
  CHECK(threshold_for_pfa(1.0, 0.7) == 0.0);
  const double sigma = 1.0 / std::sqrt(10.0);
  CHECK(threshold_for_pfa(0.1, sigma) ==
        doctest::Approx(0.5202).epsilon(2e-4));
  // linear in sigma
  CHECK(threshold_for_pfa(0.1, 2.0 * sigma) ==
        doctest::Approx(2.0 * threshold_for_pfa(0.1, sigma)).epsilon(1e-14));
  CHECK_THROWS_AS(threshold_for_pfa(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(threshold_for_pfa(1.5, 1.0), std::domain_error);
  // round trip through the closed form
  for (double p : {1e-4, 1e-3, 1e-2, 0.1, 0.3, 0.5}) {
    AuthRegistry reg = make_registry({50.0}, 0.8, 0.0);
    reg.epsilon = threshold_for_pfa(p, reg.sigma);
    CHECK(std::abs(pfa_closed_form(reg) - p) < 1e-10);
  }
}

TEST_CASE("pfa_closed_form") {
  AuthRegistry reg = make_registry({50.0, 60.0}, 1.0, 0.0);
  CHECK(pfa_closed_form(reg) == 1.0);
  reg.epsilon = 1.6449;
  CHECK(std::abs(pfa_closed_form(reg) - 0.1) < 1e-4);
  reg.epsilon = 8.0;
  CHECK(pfa_closed_form(reg) < 1e-14);
}

TEST_CASE("pmd_closed_form conventions") {
  SUBCASE("M = N = 1 with matching pathloss reduces to 1 - pfa") {
    AuthRegistry reg = make_registry({60.0}, 1.0, 0.9);
    const EveEnsemble eve = EveEnsemble::from_values({60.0});
    const double expected = 1.0 - pfa_closed_form(reg);
    CHECK(pmd_closed_form(reg, eve, PmdConvention::fingerprint_averaged) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(pmd_closed_form(reg, eve, PmdConvention::acceptance_union) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("a far impersonator is essentially always detected") {
    AuthRegistry reg = make_registry({60.0, 65.0, 70.0}, 1.0, 0.52);
    const EveEnsemble eve = EveEnsemble::from_values({200.0});
    CHECK(pmd_closed_form(reg, eve, PmdConvention::acceptance_union) < 1e-8);
  }
  SUBCASE("printed form equals the union sum over M for disjoint intervals") {
    AuthRegistry reg = make_registry({60.0, 65.0, 70.0}, 1.0, 0.52);
    const EveEnsemble eve = EveEnsemble::from_values({63.0});
    const double printed =
        pmd_closed_form(reg, eve, PmdConvention::fingerprint_averaged);
    const double unioned =
        pmd_closed_form(reg, eve, PmdConvention::acceptance_union);
    CHECK(std::abs(printed - pmd_terms(reg, 63.0) / 3.0) < 1e-12);
    CHECK(std::abs(unioned - pmd_terms(reg, 63.0)) < 1e-12);
    CHECK(printed == doctest::Approx(unioned / 3.0).epsilon(1e-12));
    // the Monte Carlo oracle measures the union quantity
    const AuthMcResult mc = monte_carlo_auth(reg, eve, 1000000, 2024);
    CHECK(std::abs(unioned - mc.pmd.mean) <= 3.0 * mc.pmd.std_error);
  }
  SUBCASE("overlapping acceptance intervals are not double counted") {
    AuthRegistry reg = make_registry({60.0, 60.6}, 1.0, 1.0);
    const EveEnsemble eve = EveEnsemble::from_values({60.3});
    const double unioned =
        pmd_closed_form(reg, eve, PmdConvention::acceptance_union);
    CHECK(unioned <= 1.0);
    const AuthMcResult mc = monte_carlo_auth(reg, eve, 1000000, 2025);
    CHECK(std::abs(unioned - mc.pmd.mean) <= 3.0 * mc.pmd.std_error);
  }
  SUBCASE("uniform ensembles are rejected") {
    AuthRegistry reg = make_registry({60.0}, 1.0, 0.5);
    CHECK_THROWS_AS(
        pmd_closed_form(reg, EveEnsemble::uniform(2), PmdConvention::fingerprint_averaged),
        std::invalid_argument);
  }
}

TEST_CASE("pmd_expected") {
  SUBCASE("zero threshold accepts nothing") {
    AuthRegistry reg = make_registry({30.0, 60.0}, 1.0, 0.0);
    CHECK(pmd_expected(reg, EveEnsemble::uniform(3)) == 0.0);
  }
  SUBCASE("a huge support dilutes the acceptance region") {
    AuthRegistry reg = make_registry({30.0, 60.0, 90.0}, 1.0, 1.0);
    reg.psi_min = 0.0;
    reg.psi_max = 1e4 * (reg.epsilon + reg.sigma);
    CHECK(pmd_expected(reg, EveEnsemble::uniform(1),
                       PmdConvention::acceptance_union) < 1e-2);
    // roughly M * 2 epsilon / Delta
    CHECK(pmd_expected(reg, EveEnsemble::uniform(1),
                       PmdConvention::acceptance_union) ==
          doctest::Approx(3.0 * 2.0 / 2e4).epsilon(0.05));
  }
  SUBCASE("agrees with Monte Carlo over uniform impersonators") {
    // five-fingerprint realization on the default disk, sigma^2 = 0.1,
    // threshold from a 10% false-alarm target, support from the disk extent
    AuthScenario sc =
        sample_auth_scenario(5, 5, 3.0, 500.0, std::sqrt(0.1),
                             threshold_for_pfa(0.1, std::sqrt(0.1)), 15);
    const EveEnsemble eves = EveEnsemble::uniform(4);
    const double expected =
        pmd_expected(sc.reg, eves, PmdConvention::acceptance_union);
    const AuthMcResult mc = monte_carlo_auth(sc.reg, eves, 1000000, 99);
    CHECK(std::abs(expected - mc.pmd.mean) <= 3.0 * mc.pmd.std_error);
  }
  SUBCASE("explicit ensembles are rejected") {
    AuthRegistry reg = make_registry({60.0}, 1.0, 0.5);
    CHECK_THROWS_AS(pmd_expected(reg, EveEnsemble::from_values({50.0})),
                    std::invalid_argument);
  }
}

TEST_CASE("pmc_closed_form") {
  SUBCASE("one fingerprint, infinite boundaries: never misclassified") {
    AuthRegistry reg = make_registry({60.0}, 1.0, 0.5);
    CHECK(pmc_closed_form(reg, PmcBoundary::infinite) == 0.0);
    // the truncated variant leaks mass outside the support
    reg.psi_min = 59.0;
    reg.psi_max = 61.0;
    CHECK(pmc_closed_form(reg, PmcBoundary::truncated_support) > 0.0);
  }
  SUBCASE("vanishing noise separates distinct fingerprints") {
    AuthRegistry reg = make_registry({60.0, 65.0, 70.0}, 5.0 / 100.0, 0.5);
    CHECK(pmc_closed_form(reg) < 1e-10);
  }
  SUBCASE("epsilon does not enter") {
    for (double eps : {0.1, 0.5, 1.0}) {
      AuthRegistry reg = make_registry({60.0, 65.0, 70.0}, 1.0, eps);
      const AuthRegistry ref = make_registry({60.0, 65.0, 70.0}, 1.0, 0.1);
      CHECK(pmc_closed_form(reg) == pmc_closed_form(ref));  // bit-identical
    }
  }
  SUBCASE("agrees with the Monte Carlo classification error") {
    AuthRegistry reg = make_registry({60.0, 65.0, 70.0}, 1.0, 0.52);
    const double closed = pmc_closed_form(reg, PmcBoundary::infinite);
    const AuthMcResult mc =
        monte_carlo_auth(reg, EveEnsemble::from_values({64.0}), 1000000, 4242);
    CHECK(std::abs(closed - mc.pmc.mean) <= 3.0 * mc.pmc.std_error);
    // the joint event (accepted AND misattributed) is strictly rarer here
    CHECK(mc.pmc_accepted_wrong.mean < mc.pmc.mean);
  }
  SUBCASE("duplicate fingerprints split mass by the tie-break rule") {
    AuthRegistry reg = make_registry({60.0, 60.0, 70.0}, 1.0, 0.5);
    CHECK(reg.has_duplicate_fingerprints());
    const double closed = pmc_closed_form(reg, PmcBoundary::infinite);
    // the second duplicate can never be identified: it alone contributes 1/3
    CHECK(closed > 1.0 / 3.0 - 1e-9);
    const AuthMcResult mc =
        monte_carlo_auth(reg, EveEnsemble::from_values({100.0}), 1000000, 777);
    CHECK(std::abs(closed - mc.pmc.mean) <= 3.0 * mc.pmc.std_error);
  }
}

TEST_CASE("monte_carlo_auth basics") {
  AuthRegistry reg = make_registry({58.0, 64.0, 71.0}, std::sqrt(0.1), 0.0);
  const EveEnsemble eves = EveEnsemble::from_values({66.0});
  SUBCASE("zero threshold rejects every legitimate draw") {
    const AuthMcResult mc = monte_carlo_auth(reg, eves, 20000, 5);
    CHECK(mc.pfa.mean == 1.0);
  }
  SUBCASE("far impersonators never pass") {
    reg.epsilon = threshold_for_pfa(0.1, reg.sigma);
    const AuthMcResult mc =
        monte_carlo_auth(reg, EveEnsemble::from_values({200.0}), 20000, 6);
    CHECK(mc.pmd.mean == 0.0);
  }
  SUBCASE("false alarm self-consistency at the 10% design point") {
    reg.epsilon = threshold_for_pfa(0.1, reg.sigma);
    const AuthMcResult mc = monte_carlo_auth(reg, eves, 1000000, 7);
    CHECK(std::abs(mc.pfa.mean - 0.1) <= 3.0 * mc.pfa.std_error);
  }
  SUBCASE("deterministic across workers, serial reference identical") {
    reg.epsilon = 0.3;
    const AuthMcResult a = monte_carlo_auth(reg, eves, 50000, 11, 0);
    const AuthMcResult b = monte_carlo_auth(reg, eves, 50000, 11, 3);
    const AuthMcResult c = monte_carlo_auth_serial(reg, eves, 50000, 11);
    CHECK(a.pfa.mean == b.pfa.mean);
    CHECK(a.pmd.mean == b.pmd.mean);
    CHECK(a.pmc.mean == c.pmc.mean);
    CHECK(b.pmd.mean == c.pmd.mean);
  }
}

TEST_CASE("false alarm closed form tracks MC across epsilon/sigma ratios") {
  for (double ratio : {0.1, 0.5, 1.0, 2.0, 4.0}) {
    AuthRegistry reg = make_registry({50.0, 70.0, 90.0}, 1.0, ratio);
    const AuthMcResult mc = monte_carlo_auth(
        reg, EveEnsemble::from_values({60.0}), 1000000, 800 + static_cast<int>(10 * ratio));
    CHECK(std::abs(pfa_closed_form(reg) - mc.pfa.mean) <=
          3.0 * std::max(mc.pfa.std_error, 1e-6));
  }
}

TEST_CASE("roc_curve") {
  const AuthScenario sc =
      sample_auth_scenario(5, 5, 3.0, 500.0, std::sqrt(0.1), 0.5, 10);
  SUBCASE("pfa = 1 forces epsilon 0 and full detection") {
    const auto pts = roc_curve(sc.reg, sc.eves, {1.0}, 20000, 3);
    CHECK(pts[0].epsilon == 0.0);
    CHECK(pts[0].pd_closed_form == 1.0);
    CHECK(pts[0].pd_monte_carlo == 1.0);
  }
  SUBCASE("detection grows with the false-alarm budget") {
    const std::vector<double> grid{0.01, 0.05, 0.1, 0.3, 0.6, 1.0};
    const auto pts = roc_curve(sc.reg, sc.eves, grid, 50000, 3);
    for (std::size_t i = 1; i < pts.size(); ++i) {
      CHECK(pts[i].pd_closed_form >= pts[i - 1].pd_closed_form - 1e-12);
    }
  }
  SUBCASE("vanishing noise separates impersonators at any pfa") {
    AuthRegistry sharp = sc.reg;
    sharp.sigma = 1e-4;
    const auto pts = roc_curve(sharp, sc.eves, {0.05}, 20000, 3);
    CHECK(pts[0].pd_closed_form > 1.0 - 1e-9);
    CHECK(pts[0].pd_monte_carlo == 1.0);
  }
  SUBCASE("detection improves with link quality at fixed pfa") {
    double prev = -1.0;
    for (double lq_db : {0.0, 5.0, 10.0, 15.0}) {
      AuthRegistry reg = sc.reg;
      reg.sigma = std::pow(10.0, -lq_db / 20.0);
      const auto pts = roc_curve(reg, sc.eves, {0.1}, 20000, 3);
      CHECK(pts[0].pd_closed_form >= prev - 1e-12);
      prev = pts[0].pd_closed_form;
    }
  }
}

TEST_CASE("registry construction from geometry") {
  const AuthScenario sc =
      sample_auth_scenario(5, 5, 3.0, 500.0, std::sqrt(0.1), 0.5, 10);
  CHECK(sc.reg.size() == 5);
  CHECK(sc.eves.size() == 5);
  CHECK(sc.reg.psi_min == 0.0);
  CHECK(std::abs(sc.reg.psi_max - 30.0 * std::log10(500.0)) < 1e-12);
  for (double psi : sc.reg.ground_truth_db) {
    CHECK(psi >= sc.reg.psi_min);
    CHECK(psi <= sc.reg.psi_max);
  }
  // deterministic
  const AuthScenario again =
      sample_auth_scenario(5, 5, 3.0, 500.0, std::sqrt(0.1), 0.5, 10);
  CHECK(again.reg.ground_truth_db == sc.reg.ground_truth_db);
  CHECK(again.eves.pathloss_db == sc.eves.pathloss_db);
}

TEST_CASE("registry validation") {
  AuthRegistry reg = make_registry({60.0, 70.0}, 1.0, 0.5);
  reg.priors = {0.9, 0.2};
  CHECK_THROWS_AS(reg.validate(), std::invalid_argument);
  reg = make_registry({60.0, 70.0}, -1.0, 0.5);
  CHECK_THROWS_AS(reg.validate(), std::invalid_argument);
  reg = make_registry({}, 1.0, 0.5);
  CHECK_THROWS_AS(reg.validate(), std::invalid_argument);
}
