#include <doctest.h>

#include <cmath>

#include "raftjamsec/coverage.hpp"
#include "raftjamsec/quadrature.hpp"

using namespace raftjamsec;

namespace {

const double kRhoF = 15.0 / (M_PI * 500.0 * 500.0);

// Pre-hypergeometric form of the Laplace transform, straight from the PGFL
// step: exp(-2 pi rho_J int_{z1}^{z2} (1 - 1/(1 + gb (rj/r)^-alpha)) rj drj).
// Fully independent of the closed-form code path.
double laplace_oracle(double alpha, double gamma_beta, double rho_j, double z1,
                      double z2, double r) {
  if (rho_j <= 0.0 || z2 <= z1) return 1.0;
  QuadratureSpec tight;
  tight.abs_tol = 1e-12;
  tight.rel_tol = 1e-10;
  const auto inner = integrate(
      [&](double rj) {
        const double x = gamma_beta * std::pow(rj / r, -alpha);
        return (1.0 - 1.0 / (1.0 + x)) * rj;
      },
      z1, z2, tight);
  return std::exp(-2.0 * M_PI * rho_j * inner.value);
}

CoverageQuery table1_query(double beta_db, double rho_mult, double z1,
                           double z2) {
  CoverageQuery q;
  q.ch.beta_dl_db = beta_db;
  q.ch.beta_ul_db = beta_db;
  q.jam = JammerAnnulus{z1, z2, rho_mult * kRhoF};
  return q;
}

}  // namespace

TEST_CASE("laplace_interference trivial cases") {
  ChannelParams ch;
  CHECK(laplace_interference(ch, JammerAnnulus{50, 300, 0.0}, Link::dl, 80.0) ==
        1.0);
  CHECK(laplace_interference(ch, JammerAnnulus{120, 120, kRhoF}, Link::dl,
                             80.0) == 1.0);
  CHECK_THROWS_AS(
      laplace_interference(ch, JammerAnnulus{50, 300, kRhoF}, Link::dl, 0.0),
      std::domain_error);
}

TEST_CASE("laplace_interference matches the PGFL quadrature oracle") {
  ChannelParams ch;  // gamma_dl = 0.01
  const JammerAnnulus jam{50.0, 300.0, kRhoF};
  ch.beta_dl_db = -20.0;
  const double value = laplace_interference(ch, jam, Link::dl, 100.0);
  const double oracle =
      laplace_oracle(3.0, ch.gamma_dl() * ch.beta_dl_lin(), kRhoF, 50.0, 300.0,
                     100.0);
  CHECK(std::abs(value - oracle) <= 1e-6 * oracle);
  // frozen reference for the same cell
  CHECK(std::abs(value - 0.999800067930113) < 1e-9);
}

TEST_CASE("closed form vs oracle across a small parameter grid") {
  const double gamma = ChannelParams{}.gamma_dl();
  for (double alpha : {2.5, 3.0, 4.0}) {
    for (double beta_db : {-30.0, -10.0, 0.0}) {
      for (double r : {10.0, 150.0, 400.0}) {
        const double gb = gamma * db_to_linear(beta_db);
        for (auto [z1, z2] : {std::pair{50.0, 300.0}, std::pair{200.0, 400.0}}) {
          const double closed =
              std::exp(detail::laplace_exponent(alpha, gb, kRhoF, z1, z2, r));
          const double oracle = laplace_oracle(alpha, gb, kRhoF, z1, z2, r);
          CAPTURE(alpha);
          CAPTURE(beta_db);
          CAPTURE(r);
          CAPTURE(z1);
          CHECK(std::abs(closed - oracle) <= 1e-6 * oracle);
        }
      }
    }
  }
}

TEST_CASE("z1 = 0 inner-quadrature path agrees with the oracle") {
  const double gamma = ChannelParams{}.gamma_dl();
  for (double alpha : {2.5, 3.0, 4.0}) {
    for (double r : {20.0, 120.0}) {
      const double gb = gamma * db_to_linear(-20.0);
      const double closed =
          std::exp(detail::laplace_exponent(alpha, gb, kRhoF, 0.0, 100.0, r));
      const double oracle = laplace_oracle(alpha, gb, kRhoF, 0.0, 100.0, r);
      CHECK(std::abs(closed - oracle) <= 1e-6 * oracle);
    }
  }
}

TEST_CASE("hypergeometric and inner-quadrature paths agree near the dispatch "
          "threshold") {
  const double gamma = ChannelParams{}.gamma_dl();
  const double gb = gamma * db_to_linear(-20.0);
  for (double alpha : {2.5, 3.0, 3.5, 4.0}) {
    for (double z2 : {100.0, 300.0}) {
      const double z1 = 1e-4 * z2;
      for (double r : {50.0, 200.0}) {
        const double hyp = std::exp(detail::laplace_exponent_hypergeometric(
            alpha, gb, kRhoF, z1, z2, r));
        const double quad = std::exp(detail::laplace_exponent_quadrature(
            alpha, gb, kRhoF, z1, z2, r));
        CHECK(std::abs(hyp - quad) <= 1e-5 * quad);
      }
    }
  }
}

TEST_CASE("coverage is 1 without jammers") {
  for (double beta_db : {-30.0, 0.0, 40.0}) {
    CoverageQuery q = table1_query(beta_db, 0.0, 50.0, 300.0);
    CHECK(coverage_dl(q).probability == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(coverage_ul(q).probability == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(coverage_joint(q).probability == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("coverage collapses at a high threshold") {
  CoverageQuery q = table1_query(60.0, 1.0, 0.0, 300.0);
  const CoverageResult res = coverage_dl(q);
  CHECK(res.probability < 0.01);
  CHECK(res.method == CoverageMethod::quadrature);  // z1 = 0 path
}

TEST_CASE("UL closed form coincides with DL when parameters coincide") {
  CoverageQuery q = table1_query(-20.0, 1.0, 50.0, 300.0);
  q.ch.p_follower_dbm = q.ch.p_leader_dbm;
  const double dl = coverage_dl(q).probability;
  const double ul = coverage_ul(q).probability;
  CHECK(dl == doctest::Approx(ul).epsilon(1e-12));
}

TEST_CASE("joint coverage is the product of the marginals") {
  CoverageQuery q = table1_query(-15.0, 2.0, 50.0, 300.0);
  const double dl = coverage_dl(q).probability;
  const double ul = coverage_ul(q).probability;
  CHECK(coverage_joint(q).probability ==
        doctest::Approx(dl * ul).epsilon(1e-12));
}

TEST_CASE("coverage lies in [0,1] and responds monotonically") {
  // beta sweep: non-increasing
  double prev = 2.0;
  for (double beta_db = -30.0; beta_db <= 0.5; beta_db += 5.0) {
    CoverageQuery q = table1_query(beta_db, 1.0, 50.0, 300.0);
    const double p = coverage_joint(q).probability;
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK(p <= prev + 1e-9);
    prev = p;
  }
  // jammer intensity: non-increasing
  prev = 2.0;
  for (double mult : {0.25, 1.0, 4.0}) {
    const double p =
        coverage_joint(table1_query(-20.0, mult, 50.0, 300.0)).probability;
    CHECK(p <= prev + 1e-9);
    prev = p;
  }
  // jammer power ratio: non-increasing
  prev = 2.0;
  for (double pj : {0.0, 10.0, 20.0}) {
    CoverageQuery q = table1_query(-20.0, 1.0, 50.0, 300.0);
    q.ch.p_jammer_dbm = pj;
    const double p = coverage_joint(q).probability;
    CHECK(p <= prev + 1e-9);
    prev = p;
  }
}

TEST_CASE("UL coverage improves as the jamming ring moves outward") {
  // z2 = z1 + 50, Table-I parameters: interference at the leader falls with z1
  double prev = -1.0;
  for (double z1 = 0.0; z1 <= 300.0; z1 += 50.0) {
    CoverageQuery q = table1_query(-20.0, 1.0, z1, z1 + 50.0);
    const double p = coverage_ul(q).probability;
    CHECK(p >= prev - 1e-9);
    prev = p;
  }
}

TEST_CASE("closed-form overshoot above 1 stays negligible") {
  for (double beta_db : {-30.0, -20.0, -10.0, 0.0}) {
    for (double mult : {0.25, 1.0, 4.0}) {
      for (auto [z1, z2] : {std::pair{0.0, 100.0}, std::pair{50.0, 300.0},
                            std::pair{100.0, 150.0}}) {
        const CoverageQuery q = table1_query(beta_db, mult, z1, z2);
        CHECK(coverage_dl(q).overshoot < 1e-9);
        CHECK(coverage_ul(q).overshoot < 1e-9);
      }
    }
  }
}

TEST_CASE("rho_fr override feeds the serving-distance density") {
  CoverageQuery q = table1_query(-20.0, 1.0, 0.0, 200.0);
  const double base = coverage_dl(q).probability;
  q.rho_fr = 4.0 * kRhoF;  // denser network: the tagged node sits closer
  const double denser = coverage_dl(q).probability;
  CHECK(denser > base);
  q.rho_fr = -1.0;
  CHECK_THROWS_AS(coverage_dl(q), std::invalid_argument);
}
