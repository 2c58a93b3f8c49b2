#pragma once

#include <cstdint>

namespace ordident {

// log Beta(a, b) via lgamma. a, b > 0.
double lbeta(double a, double b);

// Regularized incomplete beta I_u(a, b) for a, b > 0, u in [0, 1].
// Continued fraction (modified Lentz), switching to the symmetric
// complement I_u(a,b) = 1 - I_{1-u}(b,a) at u = a/(a+b) so the fraction
// always converges fast. Absolute error below 1e-14 on the parameter
// ranges used here (a, b <= ~60).
double reg_inc_beta(double a, double b, double u);

// Beta(a, b) density at u in (0, 1). Endpoints are rejected: the limits
// are infinite for a < 1 or b < 1 and every caller integrates over open
// intervals anyway.
double beta_pdf(double a, double b, double u);

// Inverse of reg_inc_beta in u: the p-quantile of Beta(a, b).
// Safeguarded Newton (bisection fallback keeps iterates inside the
// current bracket), absolute tolerance 1e-12, at most 200 iterations.
double reg_inc_beta_inv(double a, double b, double p);

// Exact C(n, k) for 0 <= k <= n <= 62. Multiplicative scheme with exact
// stepwise division; C(62,31) < 2^63 so intermediates never overflow.
std::uint64_t binomial(int n, int k);

// Standard normal cdf and quantile. The quantile uses Acklam's rational
// initializer polished by two Newton steps, giving ~1e-15 accuracy.
double std_normal_cdf(double z);
double std_normal_quantile(double p);

}  // namespace ordident
