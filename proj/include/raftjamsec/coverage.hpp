#pragma once

#include <optional>

#include "raftjamsec/netmodel.hpp"
#include "raftjamsec/quadrature.hpp"

namespace raftjamsec {

enum class Link { dl, ul, joint };

struct CoverageQuery {
  ChannelParams ch;
  DeploymentConfig dep;
  JammerAnnulus jam;
  Link link = Link::joint;
  // Density used in the serving-distance PDF f_R(r) = 2*pi*rho*r*exp(-rho*pi*r^2).
  // Defaults to the follower intensity; some experiments tie it to the jammer
  // intensity instead.
  std::optional<double> rho_fr;

  double effective_rho_fr() const {
    return rho_fr.value_or(dep.rho_follower);
  }
  void validate() const;
};

enum class CoverageMethod { closed_form, quadrature };

struct CoverageResult {
  double probability = 0.0;
  CoverageMethod method = CoverageMethod::closed_form;
  double quadrature_error_bound = 0.0;
  // Amount by which the raw value escaped [0, 1] before clamping; stays
  // below 1e-9 whenever the closed forms are healthy.
  double overshoot = 0.0;
};

// E[exp(-s I_J)] conditioned on serving distance r, with s = r^alpha beta / P
// folded in through the channel parameters of the requested link. Evaluated
// through the hypergeometric closed form, except that for z1 < 1e-6 * z2 the
// inner interference integral is computed by quadrature (the closed form's
// z1 term is a 0 * inf limit there).
double laplace_interference(const ChannelParams& ch, const JammerAnnulus& jam,
                            Link link, double r);

// Closed-form coverage probabilities: the Laplace kernel averaged over the
// serving distance R ~ f_R by adaptive quadrature on (0, inf).
CoverageResult coverage_dl(const CoverageQuery& q);
CoverageResult coverage_ul(const CoverageQuery& q);
// Independence product of the UL and DL coverages.
CoverageResult coverage_joint(const CoverageQuery& q);

namespace detail {

// Laplace exponent (log of the transform) via the hypergeometric closed form.
// gamma_beta is the product of the jammer power ratio and the linear SIR
// threshold. Requires z1 > 0.
double laplace_exponent_hypergeometric(double alpha, double gamma_beta,
                                       double rho_j, double z1, double z2,
                                       double r);

// Same quantity with the inner integral int du / (1 + u^{alpha/2}) evaluated
// numerically; valid for any z1 >= 0 including exactly 0.
double laplace_exponent_quadrature(double alpha, double gamma_beta,
                                   double rho_j, double z1, double z2,
                                   double r);

// Dispatching exponent used by laplace_interference.
double laplace_exponent(double alpha, double gamma_beta, double rho_j,
                        double z1, double z2, double r);

}  // namespace detail

}  // namespace raftjamsec
