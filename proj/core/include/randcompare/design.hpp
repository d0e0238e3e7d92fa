#pragma once

// Assignment distributions T | (S = s) and joint selection distributions
// (S, T).
//
// Two representations are supported for each: the uniform completely
// randomized design (every rearrangement of n1 ones and n2 twos equally
// likely) and an explicit finite support with probabilities. Explicit designs
// store the whole support.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "randcompare/experiment.hpp"
#include "randcompare/rng.hpp"

namespace randcompare {

__extension__ using u128 = unsigned __int128;

/// Exact C(n, k), or nullopt when the value does not fit in 128 bits.
/// Throws DomainError when k > n.
std::optional<u128> binomial_coefficient(std::uint64_t n, std::uint64_t k);

/// Decimal rendering of a 128-bit count.
std::string to_decimal(u128 value);

inline constexpr std::uint64_t kDefaultEnumerationCap = 2'000'000;

struct SupportPoint {
  AssignmentVector assignment;
  double probability;
};

class AssignmentDesign {
 public:
  /// Uniform over all rearrangements of n1 ones and n - n1 twos; 0 < n1 < n.
  static AssignmentDesign uniform_crd(std::size_t n, std::size_t n1);

  /// Probabilities must be nonnegative and sum to 1 within 1e-12; support
  /// vectors must be distinct and share one length.
  static AssignmentDesign explicit_support(std::vector<AssignmentVector> support,
                                           std::vector<double> probs);

  bool is_uniform_crd() const noexcept { return uniform_; }
  std::size_t n() const noexcept { return n_; }
  /// Arm-1 size for a uniform CRD (undefined for explicit designs).
  std::size_t crd_n1() const noexcept { return n1_; }

  /// P(T_j = t | S = s) for 1-based position j. Throws DesignInvalidError when
  /// it is zero (positivity of first-order inclusion violated).
  double first_order_inclusion(Treatment t, std::size_t j) const;
  /// Same probability, returning 0 instead of throwing.
  double inclusion_or_zero(Treatment t, std::size_t j) const;

  /// Number of support points; nullopt if it exceeds 2^64 - 1.
  std::optional<std::uint64_t> support_size() const;

  /// Calls visit(labels, probability) once per support point. Throws
  /// EnumerationTooLargeError when the support exceeds `cap`.
  void for_each_support(
      const std::function<void(std::span<const Treatment>, double)>& visit,
      std::uint64_t cap = kDefaultEnumerationCap) const;

  std::vector<SupportPoint> enumerate_support(
      std::uint64_t cap = kDefaultEnumerationCap) const;

  AssignmentVector sample(RngStream& rng) const;

  /// Allocation-free draw into `labels` (resized to n).
  void sample_into(RngStream& rng, std::vector<Treatment>& labels) const;

  std::span<const AssignmentVector> explicit_points() const noexcept {
    return support_;
  }
  std::span<const double> explicit_probs() const noexcept { return probs_; }

 private:
  AssignmentDesign() = default;

  bool uniform_ = true;
  std::size_t n_ = 0;
  std::size_t n1_ = 0;
  std::vector<AssignmentVector> support_;
  std::vector<double> probs_;
  std::vector<double> cumulative_;
};

class SelectionDesign {
 public:
  /// P(S = (1, ..., N)) = 1 and T | S uniform CRD with n1 ones.
  static SelectionDesign census_crd(std::size_t population_size, std::size_t n1);

  static SelectionDesign explicit_joint(
      std::size_t population_size,
      std::vector<std::pair<SampleVector, AssignmentVector>> support,
      std::vector<double> probs);

  std::size_t population_size() const noexcept { return population_; }
  bool is_census_crd() const noexcept { return census_; }

  /// P(T.S contains t.i) for a 1-based unit id. Throws DesignInvalidError when
  /// zero.
  double first_order_inclusion(Treatment t, UnitId unit) const;
  double inclusion_or_zero(Treatment t, UnitId unit) const;

  /// When every support point samples the whole population and the induced
  /// assignment (in unit order) is uniform CRD, returns that CRD's n1.
  std::optional<std::size_t> census_crd_n1() const;

  void for_each_support(
      const std::function<void(const SampleVector&, const AssignmentVector&, double)>& visit,
      std::uint64_t cap = kDefaultEnumerationCap) const;

  std::pair<SampleVector, AssignmentVector> sample(RngStream& rng) const;

 private:
  SelectionDesign() = default;

  bool census_ = true;
  std::size_t population_ = 0;
  std::size_t n1_ = 0;
  std::vector<std::pair<SampleVector, AssignmentVector>> support_;
  std::vector<double> probs_;
  std::vector<double> cumulative_;
};

}  // namespace randcompare
