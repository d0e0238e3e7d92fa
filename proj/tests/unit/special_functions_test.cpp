#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "../common/reference_values.hpp"
#include "randcompare/error.hpp"
#include "randcompare/special_functions.hpp"

namespace randcompare {
namespace {

TEST(NormalCdf, MatchesReferenceValues) {
  for (const auto& p : reference::kNormalCdf) {
    EXPECT_NEAR(normal_cdf(p.x), p.cdf, 1e-10) << "x=" << p.x;
  }
}

TEST(NormalCdf, RelativeAccuracyInTails) {
  EXPECT_NEAR(normal_cdf(-8.0) / 6.2209605742717841235e-16, 1.0, 1e-9);
  EXPECT_NEAR(normal_cdf(-5.0) / 2.8665157187919391167e-7, 1.0, 1e-10);
}

TEST(NormalCdf, Symmetry) {
  EXPECT_EQ(normal_cdf(0.0), 0.5);
  for (double x : {0.5, 1.0, 3.0}) EXPECT_NEAR(normal_cdf(-x) + normal_cdf(x), 1.0, 1e-15);
}

TEST(NormalCdf, TwoSidedAtCellPhoneStatistic) {
  EXPECT_NEAR(normal_two_sided_p(2.67), 0.0075851246953708, 1e-12);
  EXPECT_NEAR(normal_two_sided_p(-2.67), normal_two_sided_p(2.67), 1e-16);
  EXPECT_EQ(normal_two_sided_p(0.0), 1.0);
}

TEST(Erfc, ContinuityAtSeriesSwitch) {
  const double below = erfc_value(std::nextafter(2.5, 0.0));
  const double at = erfc_value(2.5);
  EXPECT_NEAR(below / at, 1.0, 1e-12);
  EXPECT_NEAR(erfc_value(0.0), 1.0, 1e-16);
  EXPECT_NEAR(erfc_value(-1.0), 2.0 - erfc_value(1.0), 1e-16);
}

TEST(LogGamma, KnownValues) {
  EXPECT_NEAR(log_gamma(1.0), 0.0, 1e-14);
  EXPECT_NEAR(log_gamma(2.0), 0.0, 1e-14);
  EXPECT_NEAR(log_gamma(0.5), 0.5 * std::log(std::numbers::pi), 1e-13);
  EXPECT_NEAR(log_gamma(10.0), std::log(362880.0), 1e-12);
  EXPECT_NEAR(log_gamma(100.0), 359.13420536957539878, 1e-9);
  EXPECT_THROW(log_gamma(0.0), DomainError);
}

TEST(IncompleteBeta, ClosedForms) {
  // I_x(1, b) = 1 - (1 - x)^b and I_x(a, 1) = x^a.
  for (double x : {0.1, 0.37, 0.9}) {
    EXPECT_NEAR(incomplete_beta(1.0, 3.5, x), 1.0 - std::pow(1.0 - x, 3.5), 1e-13);
    EXPECT_NEAR(incomplete_beta(2.5, 1.0, x), std::pow(x, 2.5), 1e-13);
    EXPECT_NEAR(incomplete_beta(2.0, 3.0, x) + incomplete_beta(3.0, 2.0, 1.0 - x), 1.0, 1e-13);
  }
  EXPECT_EQ(incomplete_beta(2.0, 3.0, 0.0), 0.0);
  EXPECT_EQ(incomplete_beta(2.0, 3.0, 1.0), 1.0);
  EXPECT_THROW(incomplete_beta(2.0, 3.0, 1.5), DomainError);
  EXPECT_THROW(incomplete_beta(-1.0, 3.0, 0.5), DomainError);
}

TEST(StudentTCdf, MatchesReferenceValues) {
  for (const auto& p : reference::kStudentCdf) {
    EXPECT_NEAR(student_t_cdf(p.x, p.df), p.cdf, 1e-8) << "x=" << p.x << " df=" << p.df;
  }
}

TEST(StudentTCdf, Examples) {
  for (double df : {0.7, 1.0, 5.0, 300.0}) EXPECT_EQ(student_t_cdf(0.0, df), 0.5);
  EXPECT_NEAR(student_t_cdf(1.0, 1.0), 0.75, 1e-14);
  // Cauchy: F(x) = 1/2 + atan(x)/pi.
  for (double x : {-7.0, -0.3, 2.2, 40.0}) {
    EXPECT_NEAR(student_t_cdf(x, 1.0), 0.5 + std::atan(x) / std::numbers::pi, 1e-13);
  }
  EXPECT_NEAR(student_t_cdf(1.96, 1e6), normal_cdf(1.96), 1e-5);
  EXPECT_THROW(student_t_cdf(1.0, 0.0), DomainError);
}

TEST(StudentTCdf, TwoSided) {
  EXPECT_NEAR(student_t_two_sided_p(2.63, 56.696), 2 * 0.0054865248317164650492, 1e-9);
  EXPECT_EQ(student_t_two_sided_p(0.0, 4.0), 1.0);
}

TEST(SpecialFunctionConfig, Validates) {
  SpecialFunctionConfig c;
  EXPECT_NO_THROW(c.validate());
  c.abs_tolerance = 0.1;
  EXPECT_THROW(c.validate(), DomainError);
  c = {};
  c.max_iterations = 0;
  EXPECT_THROW(c.validate(), DomainError);
}

TEST(SpecialFunctionConfig, IterationCapRaisesNumericError) {
  SpecialFunctionConfig c;
  c.max_iterations = 2;
  EXPECT_THROW(normal_cdf(1.3, c), NumericError);
}

}  // namespace
}  // namespace randcompare
