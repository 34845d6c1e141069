#include "raftjamsec/specfun.hpp"

#include <cmath>
#include <limits>

namespace raftjamsec {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;  // 1/sqrt(2*pi)
constexpr int kMaxSeriesTerms = 200000;

// Acklam's rational approximation to the standard normal quantile,
// accurate to ~1.15e-9; refined below by Newton steps against erfc.
double normal_quantile_estimate(double p) {
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

// Direct Gauss series of 2F1(1, b; b+1; -y): sum_k b/(b+k) (-y)^k.
// Converges for y < 1; used for y <= 0.5.
double series_direct(double b, double y) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < kMaxSeriesTerms; ++k) {
    term *= -y;
    const double contrib = b / (b + k) * term;
    sum += contrib;
    if (std::abs(contrib) < 1e-17 * std::abs(sum)) return sum;
  }
  throw std::runtime_error("hyp2f1: direct series failed to converge");
}

// Pfaff-transformed series: 2F1(1, b; b+1; -y) =
// (1+y)^{-1} 2F1(1, 1; b+1; y/(1+y)). All terms positive; converges for any
// finite y but is used only for moderate y where the rate y/(1+y) is decent.
double series_pfaff(double b, double y) {
  const double x = y / (1.0 + y);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < kMaxSeriesTerms; ++k) {
    term *= x * k / (b + k);
    sum += term;
    if (term < 1e-17 * sum) return sum / (1.0 + y);
  }
  throw std::runtime_error("hyp2f1: Pfaff series failed to converge");
}

// Large-argument continuation for b in (0, 1):
// 2F1(1, b; b+1; -y) = b*pi/sin(pi*b) * y^{-b}
//                      - b * sum_{k>=0} (-1)^k y^{-(k+1)} / (k+1-b).
// Convergent for y > 1; used for y >= 8 where the 1/y ratio is small.
double series_large_y(double b, double y) {
  const double head = b * M_PI / std::sin(M_PI * b) * std::pow(y, -b);
  double tail = 0.0;
  double ypow = 1.0 / y;
  for (int k = 0; k < kMaxSeriesTerms; ++k) {
    const double contrib = (k % 2 == 0 ? ypow : -ypow) / (k + 1.0 - b);
    tail += contrib;
    if (std::abs(contrib) < 1e-17 * std::max(std::abs(tail), 1e-300)) break;
    ypow /= y;
  }
  return head - b * tail;
}

}  // namespace

double q_function(double x) {
  if (!std::isfinite(x)) throw std::domain_error("q_function: non-finite input");
  return 0.5 * std::erfc(x / kSqrt2);
}

double q_inverse(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("q_inverse: p must lie in (0, 1)");
  // Q^{-1}(p) = Phi^{-1}(1 - p); Acklam gives Phi^{-1}(p), so negate.
  double x = -normal_quantile_estimate(p);
  // Newton on f(x) = Q(x) - p with f'(x) = -phi(x); two steps reach the
  // precision floor of erfc itself.
  for (int i = 0; i < 3; ++i) {
    const double err = q_function(x) - p;
    if (err == 0.0) break;
    const double pdf = kInvSqrt2Pi * std::exp(-0.5 * x * x);
    if (pdf <= 0.0) break;
    x += err / pdf;
  }
  return x;
}

namespace detail {

double hyp2f1_1_b_bp1(double b, double y) {
  if (!(b > 0.0 && b <= 1.0))
    throw std::domain_error("hyp2f1: b must lie in (0, 1]");
  if (!(y >= 0.0)) throw std::domain_error("hyp2f1: y must be >= 0");
  if (y == 0.0) return 1.0;
  if (y <= 0.5) return series_direct(b, y);
  if (y < 8.0 || b > 0.99) return series_pfaff(b, y);
  return series_large_y(b, y);
}

}  // namespace detail

double hyp2f1_coverage(double alpha, double y) {
  if (!(alpha > 2.0))
    throw std::domain_error(
        "hyp2f1_coverage: pathloss exponent must be > 2 (interference "
        "integral diverges otherwise)");
  if (!(y >= 0.0)) throw std::domain_error("hyp2f1_coverage: y must be >= 0");
  return detail::hyp2f1_1_b_bp1(1.0 - 2.0 / alpha, y);
}

}  // namespace raftjamsec
