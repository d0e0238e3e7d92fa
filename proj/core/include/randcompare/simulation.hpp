#pragma once

// Size and power simulation over the census data-generation model: the
// population of N = n1 + n2 units is drawn from a process law, the sample is
// the whole population, and the assignment is a uniform CRD.
//
// Two conditioning rows are estimated for every scenario:
//   Randomization  one fixed potential table; the assignment is redrawn.
//   Process        one fixed assignment; the potential table is redrawn.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "randcompare/experiment.hpp"
#include "randcompare/rng.hpp"

namespace randcompare {

struct NormalLaw {
  double mu = 0.0;
  double sigma = 1.0;
};
struct GammaLaw {
  double shape = 1.0;
  double scale = 1.0;
};
/// weight * U(lo1, hi1) + (1 - weight) * U(lo2, hi2).
struct UniformMixtureLaw {
  double weight = 1.0;
  double lo1 = 0.0, hi1 = 1.0;
  double lo2 = 0.0, hi2 = 1.0;
};
struct BernoulliLaw {
  double p = 0.5;
};
/// (Y1, Y2) with Bernoulli(p1), Bernoulli(p2) margins and correlation rho.
struct CorrelatedBernoulliPairLaw {
  double p1 = 0.5;
  double p2 = 0.5;
  double rho = 0.0;

  /// P(Y1 = 1, Y2 = 1) = p1 p2 + rho sqrt(p1 (1 - p1) p2 (1 - p2)).
  double p11() const;
};

using ProcessLaw = std::variant<NormalLaw, GammaLaw, UniformMixtureLaw, BernoulliLaw,
                                CorrelatedBernoulliPairLaw>;

/// Throws DomainError on invalid parameters.
void validate(const ProcessLaw& law);
bool is_binary(const ProcessLaw& law) noexcept;

/// Standard normal deviate, Marsaglia polar method.
double standard_normal(RngStream& rng);
/// Gamma(shape, 1) deviate, Marsaglia-Tsang squeeze; shape < 1 boosted by
/// U^(1/shape).
double standard_gamma(double shape, RngStream& rng);

/// IID draws from a scalar law. Pair laws raise DomainError (see
/// random_bernoulli_pairs).
std::vector<double> random_deviates(const ProcessLaw& law, std::size_t count, RngStream& rng);

struct BernoulliPairs {
  std::vector<double> first;
  std::vector<double> second;
};
/// IID pairs drawn from the 2x2 joint table.
BernoulliPairs random_bernoulli_pairs(const CorrelatedBernoulliPairLaw& law, std::size_t count,
                                      RngStream& rng);

/// y2_i = scale * y1_i + shift + mean_coefficient * mean(y1) + noise_i, with
/// noise_i ~ N(0, noise_sd^2), centered to mean zero when center_noise.
struct LinearEffect {
  double scale = 1.0;
  double shift = 0.0;
  double mean_coefficient = 0.0;
  double noise_sd = 0.0;
  bool center_noise = false;
};

struct Scenario {
  std::string id;
  std::string description;
  std::size_t n1 = 10;
  std::size_t n2 = 10;
  ProcessLaw law = NormalLaw{};
  LinearEffect effect;  // ignored for pair laws, which draw y2 jointly
  /// Redraw until mean(y1) == mean(y2) exactly (pair laws).
  bool equalize_means = false;
  /// Randomization-row population; overrides the generator when present.
  std::optional<PotentialTable> fixed_y;
  /// Mixture laws: the Randomization-row population is drawn until exactly
  /// this many units come from the second component.
  std::optional<std::size_t> fixed_second_component_count;
  std::vector<Hypothesis> true_hypotheses;

  std::size_t population_size() const noexcept { return n1 + n2; }
  bool binary() const noexcept { return is_binary(law); }
  void validate() const;
};

/// Process draw of the full potential table.
PotentialTable generate_population(const Scenario& scenario, RngStream& rng);

/// The table held fixed in the Randomization row.
PotentialTable randomization_population(const Scenario& scenario, RngStream& rng);

/// The fixed 0/1 potential tables of the binary scenarios. Throws
/// NotFoundError for any other (table, scenario) pair.
PotentialTable fixed_binary_vectors(int table_id, int scenario_id);

/// Every scenario of the size (groups t3, t5) and power (groups t4, t6) studies,
/// with ids "t<table>.sc<scenario>".
const std::vector<Scenario>& scenario_registry();
const Scenario& find_scenario(std::string_view id);

enum class TestColumn {
  Permutation,
  Wilcoxon,
  WelchT,
  PooledT,
  FisherRandomization,
  NeymanRandomization,
  NeymanSelection,
};
std::string_view to_string(TestColumn c) noexcept;
std::optional<TestColumn> parse_test_column(std::string_view name) noexcept;

/// The six columns of the standard size/power layout, in order.
inline constexpr TestColumn kStandardColumns[] = {
    TestColumn::Permutation, TestColumn::Wilcoxon,
    TestColumn::WelchT,      TestColumn::PooledT,
    TestColumn::FisherRandomization, TestColumn::NeymanRandomization};

enum class ConditioningRow { Randomization, Process };
std::string_view to_string(ConditioningRow r) noexcept;

struct SimulationConfig {
  std::size_t replicates = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 11;
  unsigned threads = 1;
  /// Per-replicate Monte Carlo budget; 0 selects 10,000 for N <= 20 and
  /// 4,000 otherwise.
  std::uint64_t mc_budget = 0;
  /// Exact enumeration instead of Monte Carlo when N <= 20.
  bool exact_small = false;
  std::vector<ConditioningRow> rows = {ConditioningRow::Randomization, ConditioningRow::Process};

  void validate() const;
  std::uint64_t budget_for(std::size_t population_size) const noexcept;
};

struct PowerEstimate {
  std::string test_name;
  TestColumn column = TestColumn::Permutation;
  ConditioningRow row = ConditioningRow::Randomization;
  bool applicable = true;
  double rejection_rate = 0.0;  // percent
  std::size_t rejections = 0;
  std::size_t replicates = 0;
  double mc_stderr = 0.0;  // percent
};

enum class Decision : std::uint8_t { Accept = 0, Reject = 1, NotApplicable = 2 };

/// Per-replicate decisions, decisions[replicate][column index]. Depends only
/// on (scenario, row, columns, config minus threads).
std::vector<std::vector<Decision>> replicate_decisions(const Scenario& scenario,
                                                       ConditioningRow row,
                                                       std::span<const TestColumn> columns,
                                                       const SimulationConfig& config);

std::vector<PowerEstimate> run_size_power(const Scenario& scenario,
                                          std::span<const TestColumn> columns,
                                          const SimulationConfig& config);

}  // namespace randcompare
