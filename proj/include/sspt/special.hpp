#pragma once

namespace sspt {

/// ln B(a,b) = lnGamma(a) + lnGamma(b) - lnGamma(a+b), a,b > 0.
double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a,b), the Beta(a,b) CDF at x in [0,1].
/// Continued-fraction evaluation, absolute error below 1e-13.
double reg_inc_beta(double x, double a, double b);

/// Inverse of reg_inc_beta in x: returns t in (0,1) with |I_t(a,b) - p|
/// below 1e-12, for p in (0,1).
double beta_quantile(double p, double a, double b);

/// Regularized lower incomplete gamma P(a,x) = gamma(a,x)/Gamma(a).
double reg_inc_gamma_p(double a, double x);

/// Survival function of the chi-square distribution with k degrees of
/// freedom, Q(k/2, x/2).
double chi_square_sf(double x, int k);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace sspt
