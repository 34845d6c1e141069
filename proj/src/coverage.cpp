#include "raftjamsec/coverage.hpp"

#include <cmath>

#include "raftjamsec/specfun.hpp"

namespace raftjamsec {

namespace {

constexpr double kZ1QuadratureFraction = 1e-6;

struct LinkTerms {
  double gamma_beta;
};

LinkTerms link_terms(const ChannelParams& ch, Link link) {
  switch (link) {
    case Link::dl:
      return {ch.gamma_dl() * ch.beta_dl_lin()};
    case Link::ul:
      return {ch.gamma_ul() * ch.beta_ul_lin()};
    default:
      throw std::invalid_argument("laplace_interference: link must be dl or ul");
  }
}

CoverageResult clamp_probability(double raw, CoverageMethod method,
                                 double err_bound) {
  CoverageResult res;
  res.method = method;
  res.quadrature_error_bound = err_bound;
  if (raw > 1.0) {
    res.overshoot = raw - 1.0;
    res.probability = 1.0;
  } else if (raw < 0.0) {
    res.overshoot = -raw;
    res.probability = 0.0;
  } else {
    res.probability = raw;
  }
  return res;
}

CoverageResult coverage_single_link(const CoverageQuery& q, Link link) {
  q.validate();
  const double rho = q.effective_rho_fr();
  const LinkTerms lt = link_terms(q.ch, link);
  const double alpha = q.ch.alpha;
  if (q.jam.rho_jammer <= 0.0 || q.jam.z2 <= q.jam.z1 || lt.gamma_beta <= 0.0) {
    // no interference: the serving-distance density integrates to exactly 1
    return CoverageResult{1.0, CoverageMethod::closed_form, 0.0, 0.0};
  }
  const bool quadrature_path =
      q.jam.rho_jammer > 0.0 && q.jam.z2 > q.jam.z1 &&
      q.jam.z1 < kZ1QuadratureFraction * q.jam.z2;
  auto integrand = [&](double r) {
    const double weight = 2.0 * M_PI * rho * r * std::exp(-rho * M_PI * r * r);
    if (weight == 0.0) return 0.0;
    const double exponent = detail::laplace_exponent(
        alpha, lt.gamma_beta, q.jam.rho_jammer, q.jam.z1, q.jam.z2, r);
    return std::exp(exponent) * weight;
  };
  const QuadratureResult quad =
      integrate(integrand, 0.0, std::numeric_limits<double>::infinity());
  return clamp_probability(quad.value,
                           quadrature_path ? CoverageMethod::quadrature
                                           : CoverageMethod::closed_form,
                           quad.error_bound);
}

}  // namespace

void CoverageQuery::validate() const {
  ch.validate();
  dep.validate();
  jam.validate();
  if (rho_fr && !(*rho_fr > 0.0))
    throw std::invalid_argument("CoverageQuery: rho_fr override must be > 0");
}

namespace detail {

double laplace_exponent_hypergeometric(double alpha, double gamma_beta,
                                       double rho_j, double z1, double z2,
                                       double r) {
  if (!(z1 > 0.0))
    throw std::domain_error("laplace_exponent_hypergeometric: needs z1 > 0");
  const double ra = std::pow(r, alpha);
  const auto term_at = [&](double z) {
    const double y = gamma_beta * std::pow(r / z, alpha);
    return std::pow(z, 2.0 - alpha) * hyp2f1_coverage(alpha, y);
  };
  const double bracket = term_at(z2) - term_at(z1);
  return M_PI * rho_j * gamma_beta * ra / (alpha / 2.0 - 1.0) * bracket;
}

double laplace_exponent_quadrature(double alpha, double gamma_beta,
                                   double rho_j, double z1, double z2,
                                   double r) {
  const double scale = std::pow(gamma_beta, 1.0 / alpha) * r;
  const double zl = (z1 / scale) * (z1 / scale);
  const double zu = (z2 / scale) * (z2 / scale);
  const double m = alpha / 2.0;
  const QuadratureSpec tight{1e-13, 1e-11, 4000};
  // int_{zl}^{zu} du / (1 + u^m), split at u = 1; the upper piece is mapped
  // with v = 1/u so very large zu stays cheap:
  // int_1^{zu} du/(1+u^m) = int_{1/zu}^{1} v^{m-2}/(1+v^m) dv.
  double inner = 0.0;
  const double lo_end = std::min(zu, 1.0);
  if (zl < lo_end) {
    inner += integrate([m](double u) { return 1.0 / (1.0 + std::pow(u, m)); },
                       zl, lo_end, tight)
                 .value;
  }
  const double hi_start = std::max(zl, 1.0);
  if (zu > hi_start) {
    inner += integrate(
                 [m](double v) {
                   return std::pow(v, m - 2.0) / (1.0 + std::pow(v, m));
                 },
                 1.0 / zu, 1.0 / hi_start, tight)
                 .value;
  }
  return -M_PI * rho_j * r * r * std::pow(gamma_beta, 2.0 / alpha) * inner;
}

double laplace_exponent(double alpha, double gamma_beta, double rho_j,
                        double z1, double z2, double r) {
  if (rho_j <= 0.0 || z2 <= z1 || gamma_beta <= 0.0) return 0.0;
  if (z1 < kZ1QuadratureFraction * z2)
    return laplace_exponent_quadrature(alpha, gamma_beta, rho_j, z1, z2, r);
  return laplace_exponent_hypergeometric(alpha, gamma_beta, rho_j, z1, z2, r);
}

}  // namespace detail

double laplace_interference(const ChannelParams& ch, const JammerAnnulus& jam,
                            Link link, double r) {
  ch.validate();
  jam.validate();
  if (!(r > 0.0))
    throw std::domain_error("laplace_interference: conditioning distance must be > 0");
  const LinkTerms lt = link_terms(ch, link);
  return std::exp(detail::laplace_exponent(ch.alpha, lt.gamma_beta,
                                           jam.rho_jammer, jam.z1, jam.z2, r));
}

CoverageResult coverage_dl(const CoverageQuery& q) {
  return coverage_single_link(q, Link::dl);
}

CoverageResult coverage_ul(const CoverageQuery& q) {
  return coverage_single_link(q, Link::ul);
}

CoverageResult coverage_joint(const CoverageQuery& q) {
  const CoverageResult dl = coverage_dl(q);
  const CoverageResult ul = coverage_ul(q);
  CoverageResult res;
  res.probability = dl.probability * ul.probability;
  res.method = (dl.method == CoverageMethod::quadrature ||
                ul.method == CoverageMethod::quadrature)
                   ? CoverageMethod::quadrature
                   : CoverageMethod::closed_form;
  res.quadrature_error_bound =
      dl.quadrature_error_bound + ul.quadrature_error_bound;
  res.overshoot = std::max(dl.overshoot, ul.overshoot);
  return res;
}

}  // namespace raftjamsec
