#include "randcompare/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "randcompare/error.hpp"

namespace randcompare {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

[[noreturn]] void not_converged(const char* what, double x) {
  throw NumericError(std::string(what) + " did not converge at x=" + std::to_string(x));
}

// erf(x) = 2/sqrt(pi) exp(-x^2) sum_n (2x^2)^n x / (1*3*...*(2n+1)); all terms
// positive so there is no cancellation.
double erf_series(double x, const SpecialFunctionConfig& cfg) {
  const double two_x2 = 2.0 * x * x;
  double term = x;
  double sum = x;
  for (int n = 1; n <= cfg.max_iterations; ++n) {
    term *= two_x2 / (2.0 * n + 1.0);
    sum += term;
    if (term <= sum * kEps) {
      return 2.0 / std::sqrt(std::numbers::pi) * std::exp(-x * x) * sum;
    }
  }
  not_converged("erf series", x);
}

// erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))),
// evaluated by the modified Lentz method; x > 0.
double erfc_continued_fraction(double x, const SpecialFunctionConfig& cfg) {
  double f = x;
  double c = x;
  double d = 0.0;
  for (int k = 1; k <= cfg.max_iterations; ++k) {
    const double a = 0.5 * k;
    d = x + a * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = x + a / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < kEps) {
      return std::exp(-x * x) / std::sqrt(std::numbers::pi) / f;
    }
  }
  not_converged("erfc continued fraction", x);
}

// Continued fraction for the incomplete beta function (Lentz).
double beta_continued_fraction(double a, double b, double x,
                               const SpecialFunctionConfig& cfg) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= cfg.max_iterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h;
  }
  not_converged("incomplete beta continued fraction", x);
}

// I_x(a, b) with y = 1 - x supplied separately to avoid cancellation.
double incomplete_beta_xy(double a, double b, double x, double y,
                          const SpecialFunctionConfig& cfg) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front = a * std::log(x) + b * std::log(y) -
                           (log_gamma(a) + log_gamma(b) - log_gamma(a + b));
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x, cfg) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, y, cfg) / b;
}

}  // namespace

void SpecialFunctionConfig::validate() const {
  if (!(abs_tolerance > 0.0 && abs_tolerance <= 1e-6)) {
    throw DomainError("special-function tolerance must lie in (0, 1e-6]");
  }
  if (max_iterations <= 0) throw DomainError("special-function iteration cap must be positive");
}

double erfc_value(double x, const SpecialFunctionConfig& config) {
  if (std::isnan(x)) throw NumericError("erfc of NaN");
  if (x < 0.0) return 2.0 - erfc_value(-x, config);
  if (x < 2.5) return 1.0 - erf_series(x, config);
  if (x > 27.0) return 0.0;
  return erfc_continued_fraction(x, config);
}

double log_gamma(double x) {
  static constexpr std::array<double, 9> kLanczos = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  if (!(x > 0.0)) throw DomainError("log_gamma requires x > 0");
  if (x < 0.5) {
    // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x).
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double sum = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) sum += kLanczos[i] / (z + static_cast<double>(i));
  const double t = z + 7.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

double incomplete_beta(double a, double b, double x, const SpecialFunctionConfig& config) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete_beta requires a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete_beta requires 0 <= x <= 1");
  return incomplete_beta_xy(a, b, x, 1.0 - x, config);
}

double normal_cdf(double x, const SpecialFunctionConfig& config) {
  return 0.5 * erfc_value(-x / std::numbers::sqrt2, config);
}

double normal_two_sided_p(double z, const SpecialFunctionConfig& config) {
  return std::min(1.0, erfc_value(std::abs(z) / std::numbers::sqrt2, config));
}

double student_t_cdf(double x, double df, const SpecialFunctionConfig& config) {
  if (!(df > 0.0)) throw DomainError("student_t_cdf requires df > 0");
  if (std::isnan(x)) throw NumericError("student_t_cdf of NaN");
  if (x == 0.0) return 0.5;
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  const double x2 = x * x;
  const double denom = df + x2;
  double tail;  // P(T > |x|)
  if (x2 < df) {
    // Central mass P(|T| < |x|) = I_{x^2/(df+x^2)}(1/2, df/2).
    tail = 0.5 * (1.0 - incomplete_beta_xy(0.5, 0.5 * df, x2 / denom, df / denom, config));
  } else {
    tail = 0.5 * incomplete_beta_xy(0.5 * df, 0.5, df / denom, x2 / denom, config);
  }
  return x > 0 ? 1.0 - tail : tail;
}

double student_t_two_sided_p(double t, double df, const SpecialFunctionConfig& config) {
  if (!(df > 0.0)) throw DomainError("student_t_two_sided_p requires df > 0");
  return std::min(1.0, 2.0 * student_t_cdf(-std::abs(t), df, config));
}

}  // namespace randcompare
