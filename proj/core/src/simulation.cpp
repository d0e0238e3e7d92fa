#include "randcompare/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include "randcompare/design.hpp"
#include "randcompare/error.hpp"
#include "randcompare/procedures.hpp"
#include "randcompare/stats.hpp"

namespace randcompare {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Substream tags under the master seed.
constexpr std::uint64_t kFixedPopulationStream = 1;
constexpr std::uint64_t kFixedAssignmentStream = 2;
constexpr std::uint64_t kRandomizationReplicateStream = 3;
constexpr std::uint64_t kProcessReplicateStream = 4;
constexpr std::uint64_t kEngineSeedOffset = 1000;

double sum_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// Mixture draw that also reports how many units came from the second
// component.
std::pair<std::vector<double>, std::size_t> mixture_draw(const UniformMixtureLaw& law,
                                                         std::size_t count, RngStream& rng) {
  std::vector<double> out(count);
  std::size_t second = 0;
  for (auto& y : out) {
    if (rng.uniform() < law.weight) {
      y = law.lo1 + (law.hi1 - law.lo1) * rng.uniform();
    } else {
      y = law.lo2 + (law.hi2 - law.lo2) * rng.uniform();
      ++second;
    }
  }
  return {std::move(out), second};
}

PotentialTable apply_effect(const Scenario& s, std::vector<double> y1, RngStream& rng) {
  const LinearEffect& e = s.effect;
  const double y1_mean = mean(y1);
  std::vector<double> noise(y1.size(), 0.0);
  if (e.noise_sd > 0.0) {
    for (auto& x : noise) x = e.noise_sd * standard_normal(rng);
    if (e.center_noise) {
      const double m = mean(noise);
      for (auto& x : noise) x -= m;
    }
  }
  std::vector<double> y2(y1.size());
  for (std::size_t i = 0; i < y1.size(); ++i) {
    y2[i] = e.scale * y1[i] + e.shift + e.mean_coefficient * y1_mean + noise[i];
  }
  return PotentialTable(std::move(y1), std::move(y2));
}

PotentialTable draw_pair_population(const Scenario& s, const CorrelatedBernoulliPairLaw& law,
                                    RngStream& rng) {
  // Rejection: about one draw in ten has equal sums for the populations used
  // here, so the loop cap is never approached in practice.
  for (int attempt = 0; attempt < 1'000'000; ++attempt) {
    auto pairs = random_bernoulli_pairs(law, s.population_size(), rng);
    if (!s.equalize_means || sum_of(pairs.first) == sum_of(pairs.second)) {
      return PotentialTable(std::move(pairs.first), std::move(pairs.second));
    }
  }
  throw NumericError("could not draw a population with equal potential means");
}

std::vector<double> parse_bits(std::string_view bits) {
  std::vector<double> out;
  for (char c : bits) {
    if (c == '0' || c == '1') out.push_back(c == '1' ? 1.0 : 0.0);
  }
  return out;
}

// A 0/1 table with the given 2x2 cell counts, units in a fixed shuffled
// order.
PotentialTable binary_table_from_counts(std::size_t n11, std::size_t n10, std::size_t n01,
                                        std::size_t n00, std::uint64_t order_seed) {
  std::vector<std::pair<double, double>> units;
  units.insert(units.end(), n11, {1.0, 1.0});
  units.insert(units.end(), n10, {1.0, 0.0});
  units.insert(units.end(), n01, {0.0, 1.0});
  units.insert(units.end(), n00, {0.0, 0.0});
  RngStream rng(order_seed);
  for (std::size_t i = units.size(); i > 1; --i) {
    std::swap(units[i - 1], units[static_cast<std::size_t>(rng.bounded(i))]);
  }
  std::vector<double> y1;
  std::vector<double> y2;
  for (const auto& [a, b] : units) {
    y1.push_back(a);
    y2.push_back(b);
  }
  return PotentialTable(std::move(y1), std::move(y2));
}

Decision decide(double p, double alpha) { return p <= alpha ? Decision::Reject : Decision::Accept; }

// Zero standard error with a nonzero difference is an infinite statistic.
template <class Run>
Decision decide_guarded(Run&& run, const ObservedExperiment& obs, double alpha) {
  try {
    return decide(run().p_value, alpha);
  } catch (const DegenerateDataError&) {
    const auto a = obs.arm(Treatment::One);
    const auto b = obs.arm(Treatment::Two);
    return mean(a) != mean(b) ? Decision::Reject : Decision::Accept;
  }
}

std::vector<Decision> evaluate_replicate(const Scenario& scenario, const ObservedExperiment& obs,
                                         std::span<const TestColumn> columns,
                                         const PValueEngine& engine,
                                         const AssignmentDesign& crd,
                                         const SelectionDesign& census, double alpha) {
  std::vector<Decision> out;
  out.reserve(columns.size());
  for (TestColumn c : columns) {
    switch (c) {
      case TestColumn::Permutation:
        out.push_back(decide(permutation_test(obs, engine).p_value, alpha));
        break;
      case TestColumn::Wilcoxon:
        out.push_back(scenario.binary() ? Decision::NotApplicable
                                        : decide(wilcoxon_test(obs, engine).p_value, alpha));
        break;
      case TestColumn::WelchT:
        out.push_back(decide_guarded([&] { return welch_t_test(obs); }, obs, alpha));
        break;
      case TestColumn::PooledT:
        out.push_back(decide_guarded([&] { return pooled_t_test(obs); }, obs, alpha));
        break;
      case TestColumn::FisherRandomization:
        out.push_back(decide(fisher_randomization_test(obs, crd, engine).p_value, alpha));
        break;
      case TestColumn::NeymanRandomization:
        out.push_back(
            decide_guarded([&] { return neyman_randomization_test(obs, crd); }, obs, alpha));
        break;
      case TestColumn::NeymanSelection:
        out.push_back(
            decide_guarded([&] { return neyman_selection_test(obs, census); }, obs, alpha));
        break;
    }
  }
  return out;
}

}  // namespace

// Laws ----------------------------------------------------------------------

double CorrelatedBernoulliPairLaw::p11() const {
  return p1 * p2 + rho * std::sqrt(p1 * (1.0 - p1) * p2 * (1.0 - p2));
}

void validate(const ProcessLaw& law) {
  std::visit(
      Overloaded{
          [](const NormalLaw& l) {
            if (!(l.sigma > 0.0) || !std::isfinite(l.mu)) throw DomainError("normal law needs sigma > 0");
          },
          [](const GammaLaw& l) {
            if (!(l.shape > 0.0) || !(l.scale > 0.0)) {
              throw DomainError("gamma law needs shape > 0 and scale > 0");
            }
          },
          [](const UniformMixtureLaw& l) {
            if (!(l.weight >= 0.0 && l.weight <= 1.0)) throw DomainError("mixture weight must lie in [0, 1]");
            if (!(l.hi1 > l.lo1) || !(l.hi2 > l.lo2)) throw DomainError("uniform bounds need hi > lo");
          },
          [](const BernoulliLaw& l) {
            if (!(l.p > 0.0 && l.p < 1.0)) throw DomainError("Bernoulli p must lie in (0, 1)");
          },
          [](const CorrelatedBernoulliPairLaw& l) {
            if (!(l.p1 > 0.0 && l.p1 < 1.0) || !(l.p2 > 0.0 && l.p2 < 1.0)) {
              throw DomainError("Bernoulli margins must lie in (0, 1)");
            }
            const double p11 = l.p11();
            const double p10 = l.p1 - p11;
            const double p01 = l.p2 - p11;
            const double p00 = 1.0 - p11 - p10 - p01;
            if (p11 < 0.0 || p10 < 0.0 || p01 < 0.0 || p00 < 0.0) {
              throw DomainError("correlation " + std::to_string(l.rho) +
                                " gives an invalid 2x2 joint table for these margins");
            }
          },
      },
      law);
}

bool is_binary(const ProcessLaw& law) noexcept {
  return std::holds_alternative<BernoulliLaw>(law) ||
         std::holds_alternative<CorrelatedBernoulliPairLaw>(law);
}

double standard_normal(RngStream& rng) {
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * rng.uniform() - 1.0;
    v = 2.0 * rng.uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  return u * std::sqrt(-2.0 * std::log(s) / s);
}

double standard_gamma(double shape, RngStream& rng) {
  if (!(shape > 0.0)) throw DomainError("gamma shape must be positive");
  if (shape < 1.0) {
    return standard_gamma(shape + 1.0, rng) * std::pow(rng.uniform_open(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::vector<double> random_deviates(const ProcessLaw& law, std::size_t count, RngStream& rng) {
  validate(law);
  std::vector<double> out(count);
  std::visit(
      Overloaded{
          [&](const NormalLaw& l) {
            for (auto& y : out) y = l.mu + l.sigma * standard_normal(rng);
          },
          [&](const GammaLaw& l) {
            for (auto& y : out) y = l.scale * standard_gamma(l.shape, rng);
          },
          [&](const UniformMixtureLaw& l) { out = mixture_draw(l, count, rng).first; },
          [&](const BernoulliLaw& l) {
            for (auto& y : out) y = rng.uniform() < l.p ? 1.0 : 0.0;
          },
          [&](const CorrelatedBernoulliPairLaw&) {
            throw DomainError("pair laws produce two coordinates; use random_bernoulli_pairs");
          },
      },
      law);
  return out;
}

BernoulliPairs random_bernoulli_pairs(const CorrelatedBernoulliPairLaw& law, std::size_t count,
                                      RngStream& rng) {
  validate(ProcessLaw{law});
  const double p11 = law.p11();
  const double p10 = law.p1 - p11;
  const double p01 = law.p2 - p11;
  BernoulliPairs out{std::vector<double>(count), std::vector<double>(count)};
  for (std::size_t i = 0; i < count; ++i) {
    const double u = rng.uniform();
    if (u < p11) {
      out.first[i] = 1.0;
      out.second[i] = 1.0;
    } else if (u < p11 + p10) {
      out.first[i] = 1.0;
    } else if (u < p11 + p10 + p01) {
      out.second[i] = 1.0;
    }
  }
  return out;
}

// Scenarios -----------------------------------------------------------------

void Scenario::validate() const {
  if (n1 < 2 || n2 < 2) throw DomainError("scenario " + id + ": arms need at least 2 units");
  randcompare::validate(law);
  if (fixed_y && fixed_y->n_units() != population_size()) {
    throw DomainError("scenario " + id + ": fixed population has " +
                      std::to_string(fixed_y->n_units()) + " units, expected " +
                      std::to_string(population_size()));
  }
  if (fixed_second_component_count) {
    if (!std::holds_alternative<UniformMixtureLaw>(law)) {
      throw DomainError("scenario " + id + ": component count applies to mixture laws only");
    }
    if (*fixed_second_component_count > population_size()) {
      throw DomainError("scenario " + id + ": component count exceeds population size");
    }
  }
  if (equalize_means && !std::holds_alternative<CorrelatedBernoulliPairLaw>(law)) {
    throw DomainError("scenario " + id + ": equalize_means applies to pair laws only");
  }
}

PotentialTable generate_population(const Scenario& scenario, RngStream& rng) {
  scenario.validate();
  if (const auto* pair = std::get_if<CorrelatedBernoulliPairLaw>(&scenario.law)) {
    return draw_pair_population(scenario, *pair, rng);
  }
  return apply_effect(scenario, random_deviates(scenario.law, scenario.population_size(), rng),
                      rng);
}

PotentialTable randomization_population(const Scenario& scenario, RngStream& rng) {
  scenario.validate();
  if (scenario.fixed_y) return *scenario.fixed_y;
  if (scenario.fixed_second_component_count) {
    const auto& law = std::get<UniformMixtureLaw>(scenario.law);
    for (int attempt = 0; attempt < 1'000'000; ++attempt) {
      auto [y1, second] = mixture_draw(law, scenario.population_size(), rng);
      if (second == *scenario.fixed_second_component_count) {
        return apply_effect(scenario, std::move(y1), rng);
      }
    }
    throw NumericError("scenario " + scenario.id +
                       ": could not draw the requested number of second-component units");
  }
  return generate_population(scenario, rng);
}

PotentialTable fixed_binary_vectors(int table_id, int scenario_id) {
  // Fixed 0/1 vectors given unit by unit (groups t3 and t4).
  if (table_id == 3 && scenario_id == 6) {
    auto y = parse_bits("0 0 0 0 0 1 0 0 0 0 0 0 0 0 0 1 1 0 1 0");
    return PotentialTable(y, y);
  }
  if (table_id == 3 && scenario_id == 7) {
    return PotentialTable(parse_bits("1 0 0 1 0 1 0 1 0 0 1 0 0 1 0 0 0 0 0 0"),
                          parse_bits("0 0 0 0 1 1 0 1 0 0 1 0 0 1 1 0 0 0 0 0"));
  }
  if (table_id == 4 && scenario_id == 6) {
    return PotentialTable(parse_bits("0 0 0 0 0 1 0 0 1 0 1 0 0 0 0 1 1 0 1 0"),
                          parse_bits("0 1 1 1 1 1 1 0 1 0 1 1 0 0 1 1 1 0 1 1"));
  }
  // Groups t5 and t6 describe their fixed vectors only through means and
  // correlation; those pin the 2x2 cell counts, and units are placed in a
  // fixed shuffled order.
  if (table_id == 5 && scenario_id == 6) {
    return binary_table_from_counts(32, 0, 0, 68, 0x5c6);  // mean 32/100, y1 = y2
  }
  if (table_id == 5 && scenario_id == 7) {
    return binary_table_from_counts(15, 18, 18, 49, 0x5c7);  // means 33/100, corr 0.186
  }
  if (table_id == 6 && scenario_id == 6) {
    return binary_table_from_counts(19, 5, 26, 50, 0x6c6);  // means 24/100, 45/100, corr 0.386
  }
  throw NotFoundError("no fixed binary population for table " + std::to_string(table_id) +
                      " scenario " + std::to_string(scenario_id) +
                      "; known: t3.sc6, t3.sc7, t4.sc6, t5.sc6, t5.sc7, t6.sc6");
}

namespace {

using H = Hypothesis;

Scenario make(int table, int sc, std::size_t arm, ProcessLaw law, LinearEffect effect,
              std::string description, std::vector<Hypothesis> truth) {
  Scenario s;
  s.id = "t" + std::to_string(table) + ".sc" + std::to_string(sc);
  s.description = std::move(description);
  s.n1 = arm;
  s.n2 = arm;
  s.law = law;
  s.effect = effect;
  s.true_hypotheses = std::move(truth);
  return s;
}

void add_size_table(std::vector<Scenario>& out, int table, std::size_t arm,
                    std::size_t large_count) {
  const NormalLaw normal{10.0, 2.0};
  const GammaLaw gamma{1.0, 5.0};
  const UniformMixtureLaw mixture{0.9, 0.0, 20.0, 200.0, 201.0};
  out.push_back(make(table, 1, arm, normal, {}, "Y1 ~ N(10, 2^2); Y2 = Y1", {H::UP}));
  out.push_back(make(table, 2, arm, gamma, {}, "Y1 ~ Gamma(shape=1, scale=5); Y2 = Y1", {H::UP}));
  auto sc3 = make(table, 3, arm, mixture, {},
                  "Y1 ~ 0.9 U(0,20) + 0.1 U(200,201); Y2 = Y1", {H::UP});
  sc3.fixed_second_component_count = large_count;
  out.push_back(sc3);
  out.push_back(make(table, 4, arm, normal, {1.0, 0.0, 0.0, 3.0, true},
                     "Y1 ~ N(10, 2^2); Y2 = Y1 + E - mean(E), E ~ N(0, 3^2)", {H::EUP, H::RAs}));
  out.push_back(make(table, 5, arm, gamma, {2.0, 0.0, -1.0, 0.0, false},
                     "Y1 ~ Gamma(shape=1, scale=5); Y2 = 2 Y1 - mean(Y1[P])", {H::EUP, H::RAs}));
  auto sc6 = make(table, 6, arm, BernoulliLaw{0.28}, {}, "Y1 ~ bin(1, 0.28); Y2 = Y1", {H::UP});
  sc6.fixed_y = fixed_binary_vectors(table, 6);
  out.push_back(sc6);
  auto sc7 = make(table, 7, arm, CorrelatedBernoulliPairLaw{0.28, 0.28, 0.37}, {},
                  "Y1, Y2 ~ bin(1, 0.28), corr 0.37, adjusted to equal means", {H::DUP, H::RAs});
  sc7.equalize_means = true;
  sc7.fixed_y = fixed_binary_vectors(table, 7);
  out.push_back(sc7);
}

void add_power_table(std::vector<Scenario>& out, int table, std::size_t arm, double shift,
                     double normal_scale, double gamma_scale, double gamma_noise_scale,
                     CorrelatedBernoulliPairLaw pair) {
  const NormalLaw normal{10.0, 2.0};
  const GammaLaw gamma{1.0, 5.0};
  const auto num = [](double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') s.pop_back();
    return s;
  };
  out.push_back(make(table, 1, arm, normal, {1.0, shift, 0.0, 0.0, false},
                     "Y1 ~ N(10, 2^2); Y2 = Y1 + " + num(shift), {}));
  out.push_back(make(table, 2, arm, normal, {1.0, shift, 0.0, 3.0, true},
                     "Y1 ~ N(10, 2^2); Y2 = Y1 + " + num(shift) + " + E - mean(E), E ~ N(0, 3^2)",
                     {}));
  out.push_back(make(table, 3, arm, normal, {normal_scale, 0.0, 0.0, 0.0, false},
                     "Y1 ~ N(10, 2^2); Y2 = " + num(normal_scale) + " Y1", {}));
  out.push_back(make(table, 4, arm, gamma, {gamma_scale, 0.0, 0.0, 0.0, false},
                     "Y1 ~ Gamma(shape=1, scale=5); Y2 = " + num(gamma_scale) + " Y1", {}));
  out.push_back(make(table, 5, arm, gamma, {gamma_noise_scale, 0.0, 0.0, 5.0, false},
                     "Y1 ~ Gamma(shape=1, scale=5); Y2 = " + num(gamma_noise_scale) +
                         " Y1 + E, E ~ N(0, 5^2)",
                     {}));
  auto sc6 = make(table, 6, arm, pair, {},
                  "Y1 ~ bin(1, " + num(pair.p1) + "), Y2 ~ bin(1, " + num(pair.p2) + "), corr " +
                      num(pair.rho),
                  {});
  sc6.fixed_y = fixed_binary_vectors(table, 6);
  out.push_back(sc6);
}

std::vector<Scenario> build_registry() {
  std::vector<Scenario> out;
  add_size_table(out, 3, 10, 1);
  add_power_table(out, 4, 10, 2.0, 1.2, 2.0, 3.0, {0.28, 0.71, 0.29});
  add_size_table(out, 5, 50, 7);
  add_power_table(out, 6, 50, 1.0, 1.1, 1.5, 1.5, {0.28, 0.50, 0.36});
  for (const auto& s : out) s.validate();
  return out;
}

}  // namespace

const std::vector<Scenario>& scenario_registry() {
  static const std::vector<Scenario> registry = build_registry();
  return registry;
}

const Scenario& find_scenario(std::string_view id) {
  for (const auto& s : scenario_registry()) {
    if (s.id == id) return s;
  }
  std::string known;
  for (const auto& s : scenario_registry()) {
    if (!known.empty()) known += ", ";
    known += s.id;
  }
  throw NotFoundError("unknown scenario '" + std::string(id) + "'; known scenarios: " + known);
}

// Columns and rows ----------------------------------------------------------

std::string_view to_string(TestColumn c) noexcept {
  switch (c) {
    case TestColumn::Permutation: return "Permutation";
    case TestColumn::Wilcoxon: return "Wilcoxon";
    case TestColumn::WelchT: return "t(Welch)";
    case TestColumn::PooledT: return "t(Pooled)";
    case TestColumn::FisherRandomization: return "Fisher";
    case TestColumn::NeymanRandomization: return "Neyman";
    case TestColumn::NeymanSelection: return "NeymanSelection";
  }
  return "?";
}

std::optional<TestColumn> parse_test_column(std::string_view name) noexcept {
  for (TestColumn c : {TestColumn::Permutation, TestColumn::Wilcoxon, TestColumn::WelchT,
                       TestColumn::PooledT, TestColumn::FisherRandomization,
                       TestColumn::NeymanRandomization, TestColumn::NeymanSelection}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

std::string_view to_string(ConditioningRow r) noexcept {
  return r == ConditioningRow::Randomization ? "Randomization" : "Process";
}

// Driver --------------------------------------------------------------------

void SimulationConfig::validate() const {
  if (replicates < 100) throw DomainError("simulation needs at least 100 replicates");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  if (threads == 0) throw DomainError("threads must be positive");
  if (mc_budget != 0 && mc_budget < kMinMonteCarloBudget) {
    throw DomainError("Monte Carlo budget must be at least 1000");
  }
}

std::uint64_t SimulationConfig::budget_for(std::size_t population_size) const noexcept {
  if (mc_budget != 0) return mc_budget;
  return population_size <= 20 ? 10'000 : 4'000;
}

std::vector<std::vector<Decision>> replicate_decisions(const Scenario& scenario,
                                                       ConditioningRow row,
                                                       std::span<const TestColumn> columns,
                                                       const SimulationConfig& config) {
  config.validate();
  scenario.validate();
  const std::size_t big_n = scenario.population_size();
  const auto crd = AssignmentDesign::uniform_crd(big_n, scenario.n1);
  const auto census = SelectionDesign::census_crd(big_n, scenario.n1);
  const SampleVector everyone = SampleVector::census(big_n);
  const bool randomization = row == ConditioningRow::Randomization;

  std::optional<PotentialTable> fixed_table;
  std::optional<AssignmentVector> fixed_assignment;
  if (randomization) {
    RngStream rng = RngStream::substream(config.seed, kFixedPopulationStream);
    fixed_table = randomization_population(scenario, rng);
  } else {
    RngStream rng = RngStream::substream(config.seed, kFixedAssignmentStream);
    fixed_assignment = crd.sample(rng);
  }
  const std::uint64_t stream =
      randomization ? kRandomizationReplicateStream : kProcessReplicateStream;
  const bool exact = config.exact_small && big_n <= 20;
  const std::uint64_t budget = config.budget_for(big_n);

  std::vector<std::vector<Decision>> decisions(config.replicates);
  auto run_one = [&](std::size_t rep) {
    RngStream rng = RngStream::substream(config.seed, stream, rep);
    const auto obs = randomization
                         ? observe(*fixed_table, everyone, crd.sample(rng))
                         : observe(generate_population(scenario, rng), everyone, *fixed_assignment);
    const auto engine =
        exact ? PValueEngine::exact()
              : PValueEngine::monte_carlo(
                    budget, substream_seed(config.seed, stream + kEngineSeedOffset, rep));
    decisions[rep] = evaluate_replicate(scenario, obs, columns, engine, crd, census, config.alpha);
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(config.threads, config.replicates));
  if (workers <= 1) {
    for (std::size_t rep = 0; rep < config.replicates; ++rep) run_one(rep);
    return decisions;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      (void)w;
      for (std::size_t rep = next++; rep < config.replicates && !failed; rep = next++) {
        try {
          run_one(rep);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return decisions;
}

std::vector<PowerEstimate> run_size_power(const Scenario& scenario,
                                          std::span<const TestColumn> columns,
                                          const SimulationConfig& config) {
  std::vector<PowerEstimate> out;
  for (ConditioningRow row : config.rows) {
    const auto decisions = replicate_decisions(scenario, row, columns, config);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      PowerEstimate e;
      e.test_name = std::string(to_string(columns[c]));
      e.column = columns[c];
      e.row = row;
      e.replicates = config.replicates;
      e.applicable = true;
      for (const auto& rep : decisions) {
        if (rep[c] == Decision::NotApplicable) e.applicable = false;
        if (rep[c] == Decision::Reject) ++e.rejections;
      }
      if (e.applicable) {
        const double r = 100.0 * static_cast<double>(e.rejections) /
                         static_cast<double>(e.replicates);
        e.rejection_rate = r;
        e.mc_stderr = std::sqrt(r * (100.0 - r) / static_cast<double>(e.replicates));
      }
      out.push_back(e);
    }
  }
  return out;
}

}  // namespace randcompare
