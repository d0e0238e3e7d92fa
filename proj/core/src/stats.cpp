#include "randcompare/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "randcompare/error.hpp"

namespace randcompare {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive_sizes(std::size_t n1, std::size_t n2) {
  if (n1 == 0 || n2 == 0) throw DomainError("arm sizes must be positive");
}

}  // namespace

WeightTable resolve_weights(const WeightFamily& family, const SampleVector& sample,
                            const AssignmentVector& assignment) {
  const std::size_t n = sample.size();
  if (assignment.size() != n) throw DataError("sample and assignment lengths differ");
  WeightTable w{std::vector<double>(n), std::vector<double>(n)};
  std::visit(
      Overloaded{
          [&](const WeightFamily::ArmSize&) {
            std::fill(w.arm1.begin(), w.arm1.end(), static_cast<double>(assignment.n1()));
            std::fill(w.arm2.begin(), w.arm2.end(), static_cast<double>(assignment.n2()));
          },
          [&](const WeightFamily::Randomization& r) {
            if (r.design.n() != n) {
              throw DesignInvalidError("design is for samples of size " +
                                       std::to_string(r.design.n()) + ", sample has " +
                                       std::to_string(n));
            }
            const double nn = static_cast<double>(n);
            for (std::size_t j = 0; j < n; ++j) {
              // Only the received treatment needs a positive probability; the
              // other weight is never divided by for this assignment.
              r.design.first_order_inclusion(assignment[j], j + 1);
              w.arm1[j] = nn * r.design.inclusion_or_zero(Treatment::One, j + 1);
              w.arm2[j] = nn * r.design.inclusion_or_zero(Treatment::Two, j + 1);
            }
          },
          [&](const WeightFamily::Selection& s) {
            const double big_n = static_cast<double>(s.design.population_size());
            for (std::size_t j = 0; j < n; ++j) {
              s.design.first_order_inclusion(assignment[j], sample[j]);
              w.arm1[j] = big_n * s.design.inclusion_or_zero(Treatment::One, sample[j]);
              w.arm2[j] = big_n * s.design.inclusion_or_zero(Treatment::Two, sample[j]);
            }
          },
      },
      family.kind());
  return w;
}

double d_statistic(std::span<const double> responses, std::span<const Treatment> labels,
                   const WeightTable& weights) {
  if (responses.size() != labels.size() || weights.arm1.size() != responses.size() ||
      weights.arm2.size() != responses.size()) {
    throw DataError("d_statistic: responses, labels and weights differ in length");
  }
  double plus = 0.0;
  double minus = 0.0;
  for (std::size_t j = 0; j < responses.size(); ++j) {
    if (!std::isfinite(responses[j])) throw NumericError("d_statistic: non-finite response");
    if (labels[j] == Treatment::One) {
      plus += responses[j] / weights.arm1[j];
    } else {
      minus += responses[j] / weights.arm2[j];
    }
  }
  return plus - minus;
}

double d_statistic(std::span<const double> responses, const AssignmentVector& assignment,
                   const WeightTable& weights) {
  return d_statistic(responses, assignment.labels(), weights);
}

std::vector<double> rank_midranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t k = i + 1;
    while (k < n && values[order[k]] == values[order[i]]) ++k;
    // Positions i..k-1 share ranks i+1..k; their average is (i + 1 + k) / 2.
    const double midrank = 0.5 * static_cast<double>(i + 1 + k);
    for (std::size_t m = i; m < k; ++m) ranks[order[m]] = midrank;
    i = k;
  }
  return ranks;
}

double rank_sum_statistic(std::span<const double> ranks, const AssignmentVector& assignment) {
  if (ranks.size() != assignment.size()) throw DataError("ranks and assignment differ in length");
  double w = 0.0;
  for (std::size_t j = 0; j < ranks.size(); ++j) {
    if (assignment[j] == Treatment::One) w += ranks[j];
  }
  return w;
}

double mean(std::span<const double> values) {
  if (values.empty()) throw InsufficientDataError("mean of an empty vector");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values, int ddof) {
  const auto n = static_cast<long>(values.size());
  if (n < 2 || n <= ddof) {
    throw InsufficientDataError("sample variance needs at least 2 values; got " +
                                std::to_string(n));
  }
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return ss / static_cast<double>(n - ddof);
}

double welch_se(double var1, std::size_t n1, double var2, std::size_t n2) {
  require_positive_sizes(n1, n2);
  return std::sqrt(var1 / static_cast<double>(n1) + var2 / static_cast<double>(n2));
}

double welch_df(double var1, std::size_t n1, double var2, std::size_t n2) {
  if (n1 < 2 || n2 < 2) throw DomainError("welch_df needs both arms of size >= 2");
  if (var1 == 0.0 && var2 == 0.0) {
    throw DegenerateDataError("welch_df undefined: both arm variances are zero");
  }
  const double r1 = var1 / static_cast<double>(n1);
  const double r2 = var2 / static_cast<double>(n2);
  const double num = (r1 + r2) * (r1 + r2);
  const double den = r1 * r1 / static_cast<double>(n1 - 1) + r2 * r2 / static_cast<double>(n2 - 1);
  return num / den;
}

double pooled_se(double var1, std::size_t n1, double var2, std::size_t n2) {
  require_positive_sizes(n1, n2);
  if (n1 + n2 < 3) throw DomainError("pooled_se needs n1 + n2 >= 3");
  const double a = static_cast<double>(n1);
  const double b = static_cast<double>(n2);
  const double pooled = ((a - 1.0) * var1 + (b - 1.0) * var2) / (a + b - 2.0);
  return std::sqrt(pooled * (1.0 / a + 1.0 / b));
}

double neyman_se(const ObservedExperiment& observed, const AssignmentDesign& design) {
  if (!design.is_uniform_crd()) {
    throw UnsupportedDesignError(
        "Neyman's variance bound is implemented only for the uniform completely randomized "
        "design; a variance estimator for general first- and second-order inclusion "
        "probabilities is not available");
  }
  if (design.n() != observed.size() || design.crd_n1() != observed.n1()) {
    throw DesignInvalidError("design arm sizes do not match the observed experiment");
  }
  observed.require_arm_sizes(2);
  const auto a = observed.arm(Treatment::One);
  const auto b = observed.arm(Treatment::Two);
  return welch_se(sample_variance(a, 0), a.size(), sample_variance(b, 0), b.size());
}

}  // namespace randcompare
