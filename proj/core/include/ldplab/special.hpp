#pragma once

namespace ldp {

// Gamma family. All routines are self-contained (no libm tgamma/lgamma) so the
// values do not depend on the platform's math library beyond exp/log/pow.

/// Gamma function via the Lanczos approximation (g = 7, 9 terms, Godfrey's
/// coefficients); relative error below 1e-13 on (0, 50). Reflection for x < 1/2.
double gamma_fn(double x);

/// log|Gamma(x)| for x > 0.
double log_gamma(double x);

/// Regularized lower incomplete gamma P(a, y), a > 0, y >= 0.
double gamma_p(double a, double y);

/// Regularized upper incomplete gamma Q(a, y) = 1 - P(a, y).
double gamma_q(double a, double y);

/// log Q(a, y), accurate deep into the tail (y in the thousands).
double log_gamma_q(double a, double y);

}  // namespace ldp
