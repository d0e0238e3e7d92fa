#pragma once

// Statistics shared by the test procedures: the weighted two-arm difference
// statistic and its weight families, midranks, and variance estimators.

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "randcompare/design.hpp"
#include "randcompare/experiment.hpp"

namespace randcompare {

/// Per-observation weights w(t, j); only w(t_j, j) enters the statistic but
/// both are kept so the statistic can be re-evaluated under other assignments.
struct WeightTable {
  std::vector<double> arm1;  // w(1, j)
  std::vector<double> arm2;  // w(2, j)

  double at(Treatment t, std::size_t j) const noexcept {
    return t == Treatment::One ? arm1[j] : arm2[j];
  }
};

class WeightFamily {
 public:
  struct ArmSize {};                          // w[t.i] = n_t
  struct Randomization { AssignmentDesign design; };  // w[t.s_j] = n P(T_j = t | S = s)
  struct Selection { SelectionDesign design; };       // w[t.i]   = N P(T.S contains t.i)

  static WeightFamily w1() { return WeightFamily(ArmSize{}); }
  static WeightFamily w3(AssignmentDesign design) {
    return WeightFamily(Randomization{std::move(design)});
  }
  static WeightFamily w23(SelectionDesign design) {
    return WeightFamily(Selection{std::move(design)});
  }

  const std::variant<ArmSize, Randomization, Selection>& kind() const noexcept {
    return kind_;
  }

 private:
  template <class K>
  explicit WeightFamily(K k) : kind_(std::move(k)) {}

  std::variant<ArmSize, Randomization, Selection> kind_;
};

/// Resolve a family into concrete weights for the given sample. W1 reads the
/// arm sizes from `assignment`; W3 and W23 read inclusion probabilities from
/// their design. Throws DesignInvalidError when a unit's received treatment
/// has zero inclusion probability; a zero for the other arm leaves that
/// weight at zero.
WeightTable resolve_weights(const WeightFamily& family, const SampleVector& sample,
                            const AssignmentVector& assignment);

/// sum_{t_j=1} y_j / w(1,j) - sum_{t_j=2} y_j / w(2,j). Terms whose
/// indicator is zero are skipped outright (the 0/0 = 0 convention), so an
/// empty arm contributes 0.
double d_statistic(std::span<const double> responses, std::span<const Treatment> labels,
                   const WeightTable& weights);
double d_statistic(std::span<const double> responses, const AssignmentVector& assignment,
                   const WeightTable& weights);

/// Ranks 1..n with ties receiving the average of the ranks they span.
std::vector<double> rank_midranks(std::span<const double> values);

/// W = sum of ranks in arm 1.
double rank_sum_statistic(std::span<const double> ranks, const AssignmentVector& assignment);

/// Sample variance with denominator n - ddof. Throws InsufficientDataError
/// when n <= ddof or n < 2 for ddof = 1.
double sample_variance(std::span<const double> values, int ddof = 1);
double mean(std::span<const double> values);

double welch_se(double var1, std::size_t n1, double var2, std::size_t n2);
/// Welch-Satterthwaite degrees of freedom.
double welch_df(double var1, std::size_t n1, double var2, std::size_t n2);
double pooled_se(double var1, std::size_t n1, double var2, std::size_t n2);

/// Neyman's conservative standard error for the difference in means under a
/// uniform CRD: sqrt(v1/n1 + v2/n2) where v_t is the arm variance with
/// denominator n_t. Exact when unit effects are constant. Non-CRD designs
/// raise UnsupportedDesignError.
double neyman_se(const ObservedExperiment& observed, const AssignmentDesign& design);

}  // namespace randcompare
