#pragma once

#include <stdexcept>

namespace raftjamsec {

// Complementary CDF of the standard normal, Q(x) = P[N(0,1) > x].
// Throws std::domain_error for non-finite input.
double q_function(double x);

// Inverse of q_function on (0, 1). q_function(q_inverse(p)) recovers p to
// ~1e-15 relative. Throws std::domain_error for p outside (0, 1).
double q_inverse(double p);

// Gauss hypergeometric 2F1(1, 1 - 2/alpha; 2 - 2/alpha; -y), the parameter
// family produced by the interference integral. Requires alpha > 2 and
// y >= 0; value lies in (0, 1], equals 1 at y = 0, and is strictly
// decreasing in y.
double hyp2f1_coverage(double alpha, double y);

namespace detail {

// 2F1(1, b; b + 1; -y) for b in (0, 1] and y >= 0. hyp2f1_coverage is this
// with b = 1 - 2/alpha; b = 1 degenerates to log1p(y)/y and is kept on the
// same code path so the series machinery can be checked against that
// identity.
double hyp2f1_1_b_bp1(double b, double y);

}  // namespace detail

}  // namespace raftjamsec
