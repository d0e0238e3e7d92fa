#pragma once

// Test procedures for no-treatment-effect hypotheses.
//
//   process-based        permutation_test, wilcoxon_test, welch_t_test,
//                        pooled_t_test
//   randomization-based  fisher_randomization_test, neyman_randomization_test,
//                        fisher_exact_2x2
//   selection-based      neyman_selection_test, fisher_selection_test (always
//                        raises NoncomputableDistributionError)
//
// Each procedure returns a TestReport naming the hypothesis it tests and the
// assumptions it relies on.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "randcompare/design.hpp"
#include "randcompare/error.hpp"
#include "randcompare/experiment.hpp"
#include "randcompare/rng.hpp"

namespace randcompare {

enum class Assumption { A1, A2, A3, A4, A5, A6, A7, B1, B2, C1, C2 };
std::string_view to_string(Assumption a) noexcept;

enum class PValueKind { Exact, MonteCarlo, Asymptotic };
std::string_view to_string(PValueKind k) noexcept;

inline constexpr std::uint64_t kMinMonteCarloBudget = 1000;

struct PValueEngine {
  enum class Mode {
    Exact,       // full enumeration; EnumerationTooLargeError above the cap
    MonteCarlo,  // `budget` draws from RngStream(seed)
    Asymptotic,  // large-sample reference distribution where one exists
    Auto,        // Exact when the support fits under the cap, else MonteCarlo
  };

  Mode mode = Mode::Exact;
  std::uint64_t budget = 0;
  std::uint64_t seed = 0;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;

  static PValueEngine exact(std::uint64_t cap = kDefaultEnumerationCap);
  static PValueEngine monte_carlo(std::uint64_t budget, std::uint64_t seed);
  static PValueEngine asymptotic();
  static PValueEngine automatic(std::uint64_t budget, std::uint64_t seed,
                                std::uint64_t cap = kDefaultEnumerationCap);

  /// Throws DomainError when a Monte Carlo budget is below 1000.
  void validate() const;
};

struct TestReport {
  std::string test;
  Hypothesis hypothesis = Hypothesis::UP;
  double statistic = 0.0;
  double p_value = 1.0;
  PValueKind p_value_kind = PValueKind::Exact;
  std::optional<double> mc_stderr;
  std::vector<Assumption> assumptions;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  bool degenerate = false;
};

struct MonteCarloPValue {
  double p;
  double standard_error;
};

/// Relative tolerance used when deciding whether a resampled statistic is at
/// least as extreme as the observed one; ties within it count as extreme.
inline constexpr double kTailRelativeTolerance = 1e-9;

/// |stat| >= |observed| up to kTailRelativeTolerance * max(|observed|, scale).
/// `scale` is the magnitude of the data, so an observed statistic at or near
/// zero still gets a tolerance that absorbs roundoff in the responses.
inline bool at_least_as_extreme(double stat, double observed, double scale = 0.0) noexcept {
  const double a = std::abs(observed);
  return std::abs(stat) >= a - kTailRelativeTolerance * std::max(a, scale);
}

/// Add-one Monte Carlo p-value (1 + #{|draw| >= |observed|}) / (budget + 1).
/// The 1000-draw floor is enforced by PValueEngine; here any positive budget
/// is accepted.
template <class Sampler>
MonteCarloPValue monte_carlo_pvalue(double observed_stat, Sampler&& draw,
                                    std::uint64_t budget, RngStream& rng, double scale = 0.0) {
  if (budget == 0) throw DomainError("Monte Carlo budget must be positive");
  std::uint64_t extreme = 0;
  for (std::uint64_t b = 0; b < budget; ++b) {
    if (at_least_as_extreme(draw(rng), observed_stat, scale)) ++extreme;
  }
  const double p = static_cast<double>(extreme + 1) / static_cast<double>(budget + 1);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(budget))};
}

// Process-based ------------------------------------------------------------

TestReport permutation_test(const ObservedExperiment& observed, const PValueEngine& engine);
TestReport wilcoxon_test(const ObservedExperiment& observed, const PValueEngine& engine);
TestReport welch_t_test(const ObservedExperiment& observed);
TestReport pooled_t_test(const ObservedExperiment& observed);

// Randomization-based ------------------------------------------------------

TestReport fisher_randomization_test(const ObservedExperiment& observed,
                                     const AssignmentDesign& design,
                                     const PValueEngine& engine);
TestReport neyman_randomization_test(const ObservedExperiment& observed,
                                     const AssignmentDesign& design);
TestReport fisher_exact_2x2(const ObservedExperiment& observed);

// Selection-based ----------------------------------------------------------

TestReport neyman_selection_test(const ObservedExperiment& observed,
                                 const SelectionDesign& design);

/// Always throws NoncomputableDistributionError: under the population sharp
/// null the potentials of unsampled units are unobserved, so the reference
/// distribution cannot be computed from the data.
[[noreturn]] TestReport fisher_selection_test(const ObservedExperiment& observed,
                                              const SelectionDesign& design);

}  // namespace randcompare
