#pragma once

// Special functions for asymptotic p-values, implemented in-repo so results
// do not depend on the platform libm.
//
//   erfc_value        series (|x| < 2.5) or continued fraction (|x| >= 2.5)
//   log_gamma         Lanczos approximation, g = 7, 9 coefficients
//   incomplete_beta   regularized I_x(a, b) by modified Lentz continued fraction
//   normal_cdf        0.5 * erfc(-x / sqrt(2)), |error| <= 1e-12
//   student_t_cdf     via incomplete_beta, |error| <= 1e-10

namespace randcompare {

struct SpecialFunctionConfig {
  double abs_tolerance = 1e-12;
  int max_iterations = 300;

  /// Throws DomainError unless tolerance is in (0, 1e-6] and iterations > 0.
  void validate() const;
};

double erfc_value(double x, const SpecialFunctionConfig& config = {});
double log_gamma(double x);
double incomplete_beta(double a, double b, double x,
                       const SpecialFunctionConfig& config = {});

double normal_cdf(double x, const SpecialFunctionConfig& config = {});
/// 2 * (1 - Phi(|z|)).
double normal_two_sided_p(double z, const SpecialFunctionConfig& config = {});

double student_t_cdf(double x, double df, const SpecialFunctionConfig& config = {});
/// 2 * (1 - F_t(|t|; df)).
double student_t_two_sided_p(double t, double df,
                             const SpecialFunctionConfig& config = {});

}  // namespace randcompare
