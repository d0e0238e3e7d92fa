#pragma once

// Potential-outcomes data model.
//
// A population of N units carries two potential responses per unit, y[1.i]
// and y[2.i]. An experiment draws a sample s (distinct unit ids, 1-based) and
// an assignment t (one treatment label per sampled position); only the
// responses y[t_j.s_j] are ever observed.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace randcompare {

using UnitId = std::size_t;  // 1-based

enum class Treatment : std::uint8_t { One = 1, Two = 2 };

constexpr int to_int(Treatment t) noexcept { return static_cast<int>(t); }
Treatment treatment_from_int(int label);

class PotentialTable {
 public:
  PotentialTable(std::vector<double> y1, std::vector<double> y2);

  std::size_t n_units() const noexcept { return y1_.size(); }
  std::span<const double> y1() const noexcept { return y1_; }
  std::span<const double> y2() const noexcept { return y2_; }
  std::span<const double> potentials(Treatment t) const noexcept {
    return t == Treatment::One ? y1() : y2();
  }
  double at(Treatment t, UnitId unit) const;

 private:
  std::vector<double> y1_;
  std::vector<double> y2_;
};

class SampleVector {
 public:
  explicit SampleVector(std::vector<UnitId> indices);

  /// The whole population (1, ..., N) in order.
  static SampleVector census(std::size_t population_size);

  std::size_t size() const noexcept { return indices_.size(); }
  std::span<const UnitId> indices() const noexcept { return indices_; }
  UnitId operator[](std::size_t j) const noexcept { return indices_[j]; }

  friend bool operator==(const SampleVector&, const SampleVector&) = default;

 private:
  std::vector<UnitId> indices_;
};

class AssignmentVector {
 public:
  explicit AssignmentVector(std::vector<Treatment> labels);
  static AssignmentVector from_ints(std::span<const int> labels);
  /// n1 ones followed by n2 twos.
  static AssignmentVector blocks(std::size_t n1, std::size_t n2);

  std::size_t size() const noexcept { return labels_.size(); }
  std::span<const Treatment> labels() const noexcept { return labels_; }
  Treatment operator[](std::size_t j) const noexcept { return labels_[j]; }
  std::size_t count(Treatment t) const noexcept;
  std::size_t n1() const noexcept { return count(Treatment::One); }
  std::size_t n2() const noexcept { return count(Treatment::Two); }

  friend bool operator==(const AssignmentVector&,
                         const AssignmentVector&) = default;
  friend auto operator<=>(const AssignmentVector&,
                          const AssignmentVector&) = default;

 private:
  std::vector<Treatment> labels_;
};

/// The observable part of an experiment: y[t.s].
class ObservedExperiment {
 public:
  ObservedExperiment(SampleVector sample, AssignmentVector assignment,
                     std::vector<double> responses);

  /// Units 1..n1 receive treatment 1, units n1+1..n1+n2 treatment 2.
  static ObservedExperiment from_arms(std::span<const double> arm1,
                                      std::span<const double> arm2);

  const SampleVector& sample() const noexcept { return sample_; }
  const AssignmentVector& assignment() const noexcept { return assignment_; }
  std::span<const double> responses() const noexcept { return responses_; }
  std::size_t size() const noexcept { return responses_.size(); }
  std::size_t n1() const noexcept { return assignment_.n1(); }
  std::size_t n2() const noexcept { return assignment_.n2(); }

  std::vector<double> arm(Treatment t) const;

  /// Throws DataError unless each arm holds at least `minimum` observations.
  void require_arm_sizes(std::size_t minimum) const;

 private:
  SampleVector sample_;
  AssignmentVector assignment_;
  std::vector<double> responses_;
};

/// (y[t_1.s_1], ..., y[t_n.s_n]).
std::vector<double> select_components(const PotentialTable& table,
                                      const SampleVector& sample,
                                      const AssignmentVector& assignment);

ObservedExperiment observe(const PotentialTable& table,
                           const SampleVector& sample,
                           const AssignmentVector& assignment);

struct RealizedEffects {
  std::vector<double> unit_effects;  // y[1.s_j] - y[2.s_j]
  double aggregate_sample = 0.0;     // mean(y[1.s]) - mean(y[2.s])
  double aggregate_population = 0.0; // mean(y[1.P]) - mean(y[2.P])
};

RealizedEffects realized_effects(const PotentialTable& table,
                                 const SampleVector& sample);

// No-treatment-effect hypotheses. Nesting:
//   UP => DUP => EUP
//   UP => RUP => RAP
//         RUP => RUs => RAs
enum class Hypothesis { UP, DUP, EUP, RUP, RAP, RUs, RAs };

inline constexpr Hypothesis kAllHypotheses[] = {
    Hypothesis::UP,  Hypothesis::DUP, Hypothesis::EUP, Hypothesis::RUP,
    Hypothesis::RAP, Hypothesis::RUs, Hypothesis::RAs};

std::string_view to_string(Hypothesis h) noexcept;
std::string_view description(Hypothesis h) noexcept;
std::optional<Hypothesis> parse_hypothesis(std::string_view tag) noexcept;

/// True iff `a` implies `b` (reflexive, transitive).
bool hypothesis_implies(Hypothesis a, Hypothesis b) noexcept;

}  // namespace randcompare
