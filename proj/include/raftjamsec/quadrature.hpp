#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace raftjamsec {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 2000;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
      throw std::invalid_argument("QuadratureSpec: tolerances must be > 0");
    if (max_subdivisions < 1)
      throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 1");
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error_bound = 0.0;
  int subdivisions = 0;
};

// Thrown when the adaptive scheme cannot reach the requested tolerance.
// Carries the best estimate so callers can degrade gracefully.
class QuadratureFailure : public std::runtime_error {
 public:
  QuadratureFailure(const std::string& what, QuadratureResult best)
      : std::runtime_error(what), best_(best) {}
  const QuadratureResult& best() const { return best_; }

 private:
  QuadratureResult best_;
};

namespace detail {

// 15-point Kronrod extension of 7-point Gauss (nodes/weights on [-1, 1]).
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gauss_kronrod(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double kronrod = 0.0;
  double gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = h * kKronrodNodes[i];
    double fv;
    if (i == 7) {
      fv = f(c);
      kronrod += kKronrodWeights[i] * fv;
      gauss += kGaussWeights[3] * fv;
    } else {
      const double f1 = f(c - dx);
      const double f2 = f(c + dx);
      kronrod += kKronrodWeights[i] * (f1 + f2);
      if (i % 2 == 1) gauss += kGaussWeights[i / 2] * (f1 + f2);
    }
  }
  kronrod *= h;
  gauss *= h;
  return Segment{a, b, kronrod, std::abs(kronrod - gauss)};
}

// Globally adaptive bisection on a finite interval: always refine the segment
// with the largest error estimate.
template <class F>
QuadratureResult adaptive_finite(F&& f, double a, double b,
                                 const QuadratureSpec& spec) {
  std::priority_queue<Segment> queue;
  queue.push(gauss_kronrod(f, a, b));
  double total = queue.top().value;
  double total_err = queue.top().error;
  int subdivisions = 1;
  while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (subdivisions >= spec.max_subdivisions) {
      throw QuadratureFailure(
          "integrate: tolerance not reached in " +
              std::to_string(spec.max_subdivisions) + " subdivisions",
          QuadratureResult{total, total_err, subdivisions});
    }
    Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // interval exhausted at double precision; accept its estimate as-is
      total_err -= worst.error;
      worst.error = 0.0;
      queue.push(worst);
      continue;
    }
    Segment left = gauss_kronrod(f, worst.a, mid);
    Segment right = gauss_kronrod(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++subdivisions;
  }
  return QuadratureResult{total, total_err, subdivisions};
}

}  // namespace detail

// Adaptive Gauss-Kronrod quadrature of f over (a, b). Either endpoint may be
// infinite; half-infinite ranges are mapped to (0, 1) with x = a + t/(1-t),
// which keeps the Rayleigh-weighted integrands of this project well behaved.
// Nodes never touch interval endpoints, so integrable endpoint singularities
// are tolerated. Throws QuadratureFailure (with the best estimate) if the
// subdivision budget is exhausted.
template <class F>
QuadratureResult integrate(F&& f, double a, double b,
                           const QuadratureSpec& spec = {}) {
  spec.validate();
  const bool inf_a = std::isinf(a);
  const bool inf_b = std::isinf(b);
  if (!inf_a && !inf_b) {
    if (!(a < b)) throw std::invalid_argument("integrate: requires a < b");
    return detail::adaptive_finite(f, a, b, spec);
  }
  if (inf_a && inf_b) {
    // split at 0 and report the combined estimate
    QuadratureResult lo = integrate(f, a, 0.0, spec);
    QuadratureResult hi = integrate(f, 0.0, b, spec);
    return QuadratureResult{lo.value + hi.value, lo.error_bound + hi.error_bound,
                            lo.subdivisions + hi.subdivisions};
  }
  if (!inf_a) {
    auto g = [&f, a](double t) {
      const double w = 1.0 - t;
      return f(a + t / w) / (w * w);
    };
    return detail::adaptive_finite(g, 0.0, 1.0, spec);
  }
  // (-inf, b]: mirror of the half-infinite case
  auto g = [&f, b](double t) {
    const double w = 1.0 - t;
    return f(b - t / w) / (w * w);
  };
  return detail::adaptive_finite(g, 0.0, 1.0, spec);
}

}  // namespace raftjamsec
