#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "randcompare/error.hpp"
#include "randcompare/simulation.hpp"
#include "randcompare/stats.hpp"

namespace randcompare {
namespace {

double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance(std::span<const double> v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double correlation(std::span<const double> a, std::span<const double> b) {
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

SimulationConfig quick_config(std::size_t reps = 200) {
  SimulationConfig c;
  c.replicates = reps;
  c.mc_budget = 1000;
  return c;
}

// Deviates -----------------------------------------------------------------

TEST(Deviates, NormalMoments) {
  RngStream rng(1);
  const auto y = random_deviates(NormalLaw{10.0, 2.0}, 1000000, rng);
  EXPECT_NEAR(mean(y), 10.0, 0.01);
  EXPECT_NEAR(variance(y), 4.0, 0.03);
}

TEST(Deviates, GammaMoments) {
  RngStream rng(2);
  const std::size_t n = 400000;
  for (const GammaLaw law : {GammaLaw{1.0, 5.0}, GammaLaw{0.5, 2.0}, GammaLaw{3.5, 1.0}}) {
    const auto y = random_deviates(law, n, rng);
    const double m = law.shape * law.scale;
    const double v = law.shape * law.scale * law.scale;
    EXPECT_NEAR(mean(y), m, 3 * std::sqrt(v / n)) << law.shape;
    // Var of the sample variance for a gamma law: (mu4 - v^2) / n, mu4 = 3v^2 + 6v^2/shape.
    const double mu4 = v * v * (3.0 + 6.0 / law.shape);
    EXPECT_NEAR(variance(y), v, 3 * std::sqrt((mu4 - v * v) / n)) << law.shape;
    for (double x : y) ASSERT_GT(x, 0.0);
  }
}

TEST(Deviates, MixtureAndBernoulli) {
  RngStream rng(3);
  const auto y = random_deviates(UniformMixtureLaw{0.9, 0.0, 20.0, 200.0, 201.0}, 200000, rng);
  std::size_t large = 0;
  for (double x : y) {
    ASSERT_TRUE((x >= 0 && x < 20) || (x >= 200 && x < 201));
    large += x >= 200;
  }
  EXPECT_NEAR(large / 200000.0, 0.1, 3 * std::sqrt(0.09 / 200000));
  const auto b = random_deviates(BernoulliLaw{0.28}, 200000, rng);
  for (double x : b) ASSERT_TRUE(x == 0.0 || x == 1.0);
  EXPECT_NEAR(mean(b), 0.28, 3 * std::sqrt(0.28 * 0.72 / 200000));
}

TEST(Deviates, BernoulliPairCorrelation) {
  RngStream rng(4);
  const CorrelatedBernoulliPairLaw law{0.28, 0.28, 0.37};
  const auto pairs = random_bernoulli_pairs(law, 200000, rng);
  EXPECT_NEAR(correlation(pairs.first, pairs.second), 0.37, 0.01);
  EXPECT_NEAR(mean(pairs.first), 0.28, 0.005);
  EXPECT_NEAR(mean(pairs.second), 0.28, 0.005);
  EXPECT_THROW(random_deviates(law, 3, rng), DomainError);
}

TEST(Deviates, InvalidLaws) {
  EXPECT_THROW(validate(NormalLaw{0.0, -1.0}), DomainError);
  EXPECT_THROW(validate(GammaLaw{0.0, 1.0}), DomainError);
  EXPECT_THROW(validate(BernoulliLaw{1.5}), DomainError);
  // Correlation outside the range reachable with these margins.
  EXPECT_THROW(validate(CorrelatedBernoulliPairLaw{0.1, 0.9, 0.9}), DomainError);
}

// Scenario generators -------------------------------------------------------

TEST(Generator, NullScenarioHasNoEffects) {
  RngStream rng(5);
  const auto table = generate_population(find_scenario("t3.sc1"), rng);
  ASSERT_EQ(table.n_units(), 20u);
  const auto eff = realized_effects(table, SampleVector::census(20));
  for (double e : eff.unit_effects) EXPECT_EQ(e, 0.0);
}

TEST(Generator, AverageNullScenariosHaveEqualMeans) {
  for (const char* id : {"t3.sc4", "t3.sc5", "t5.sc4", "t5.sc5", "t3.sc7", "t5.sc7"}) {
    RngStream rng(6);
    for (int rep = 0; rep < 20; ++rep) {
      const auto table = generate_population(find_scenario(id), rng);
      EXPECT_NEAR(mean(table.y1()), mean(table.y2()), 1e-12) << id;
    }
  }
}

TEST(Generator, RandomizationPopulationHonoursFixedCounts) {
  RngStream rng(7);
  const auto& sc = find_scenario("t5.sc3");
  const auto table = randomization_population(sc, rng);
  std::size_t large = 0;
  for (double y : table.y1()) large += y >= 200;
  EXPECT_EQ(large, 7u);
  const auto fixed = randomization_population(find_scenario("t3.sc6"), rng);
  const auto printed = fixed_binary_vectors(3, 6);
  EXPECT_TRUE(std::ranges::equal(fixed.y1(), printed.y1()));
}

TEST(FixedVectors, MatchStatedSummaries) {
  const auto t36 = fixed_binary_vectors(3, 6);
  EXPECT_EQ(mean(t36.y1()), 4.0 / 20);
  const auto t37 = fixed_binary_vectors(3, 7);
  EXPECT_EQ(mean(t37.y1()), mean(t37.y2()));
  const auto t56 = fixed_binary_vectors(5, 6);
  EXPECT_NEAR(mean(t56.y1()), 0.32, 1e-12);
  const auto t57 = fixed_binary_vectors(5, 7);
  EXPECT_NEAR(mean(t57.y1()), 0.33, 1e-12);
  EXPECT_NEAR(mean(t57.y2()), 0.33, 1e-12);
  EXPECT_NEAR(correlation(t57.y1(), t57.y2()), 0.186, 0.001);
  const auto t66 = fixed_binary_vectors(6, 6);
  EXPECT_NEAR(mean(t66.y1()), 0.24, 1e-12);
  EXPECT_NEAR(mean(t66.y2()), 0.45, 1e-12);
  EXPECT_NEAR(correlation(t66.y1(), t66.y2()), 0.386, 0.001);
  EXPECT_THROW(fixed_binary_vectors(3, 1), NotFoundError);
}

TEST(Registry, AllScenarioIds) {
  const auto& reg = scenario_registry();
  EXPECT_EQ(reg.size(), 26u);
  std::set<std::string> ids;
  for (const auto& s : reg) ids.insert(s.id);
  EXPECT_EQ(ids.size(), 26u);
  EXPECT_TRUE(ids.contains("t3.sc7"));
  EXPECT_TRUE(ids.contains("t6.sc6"));
  EXPECT_EQ(find_scenario("t6.sc1").population_size(), 100u);
  try {
    find_scenario("t9.sc9");
    FAIL() << "expected NotFoundError";
  } catch (const NotFoundError& e) {
    EXPECT_NE(std::string(e.what()).find("t3.sc1"), std::string::npos);
  }
}

// Size and power -----------------------------------------------------------

TEST(SimulationConfig, Validation) {
  auto c = quick_config();
  EXPECT_NO_THROW(c.validate());
  c.replicates = 99;
  EXPECT_THROW(c.validate(), DomainError);
  c = quick_config();
  c.alpha = 0.0;
  EXPECT_THROW(c.validate(), DomainError);
  c = quick_config();
  c.mc_budget = 500;
  EXPECT_THROW(c.validate(), DomainError);
  c = quick_config();
  c.mc_budget = 0;
  EXPECT_EQ(c.budget_for(20), 10000u);
  EXPECT_EQ(c.budget_for(100), 4000u);
}

TEST(SizePower, AlphaOneRejectsEverything) {
  auto c = quick_config(100);
  c.alpha = 1.0;
  for (const auto& e : run_size_power(find_scenario("t3.sc2"), kStandardColumns, c)) {
    EXPECT_DOUBLE_EQ(e.rejection_rate, 100.0) << e.test_name;
    EXPECT_EQ(e.mc_stderr, 0.0);
  }
}

TEST(SizePower, StandardErrorFormula) {
  const auto est = run_size_power(find_scenario("t4.sc1"), kStandardColumns, quick_config());
  ASSERT_EQ(est.size(), 12u);
  for (const auto& e : est) {
    ASSERT_TRUE(e.applicable);
    EXPECT_EQ(e.replicates, 200u);
    EXPECT_DOUBLE_EQ(e.rejection_rate, 100.0 * e.rejections / 200.0);
    EXPECT_NEAR(e.mc_stderr, std::sqrt(e.rejection_rate * (100 - e.rejection_rate) / 200), 1e-12);
  }
}

TEST(SizePower, PermutationAndFisherDecisionsCoincide) {
  const TestColumn cols[] = {TestColumn::Permutation, TestColumn::FisherRandomization,
                             TestColumn::NeymanRandomization, TestColumn::NeymanSelection};
  for (const char* id : {"t3.sc2", "t4.sc4"}) {
    for (auto row : {ConditioningRow::Randomization, ConditioningRow::Process}) {
      const auto d = replicate_decisions(find_scenario(id), row, cols, quick_config());
      for (const auto& rep : d) {
        EXPECT_EQ(rep[0], rep[1]);
        EXPECT_EQ(rep[2], rep[3]);
      }
    }
  }
}

TEST(SizePower, DeterministicAcrossThreadCounts) {
  auto c = quick_config();
  const auto one = run_size_power(find_scenario("t3.sc4"), kStandardColumns, c);
  c.threads = 4;
  const auto four = run_size_power(find_scenario("t3.sc4"), kStandardColumns, c);
  ASSERT_EQ(one.size(), four.size());
  for (std::size_t i = 0; i < one.size(); ++i) EXPECT_EQ(one[i].rejections, four[i].rejections);
}

TEST(SizePower, WilcoxonNotApplicableToBinary) {
  const TestColumn cols[] = {TestColumn::Wilcoxon, TestColumn::FisherRandomization};
  for (const auto& e : run_size_power(find_scenario("t3.sc6"), cols, quick_config())) {
    if (e.column == TestColumn::Wilcoxon) {
      EXPECT_FALSE(e.applicable);
    } else {
      EXPECT_TRUE(e.applicable);
    }
  }
}

// Under y1 = y2 with a fixed table every Randomization-row statistic has the
// same distribution over assignments, so the exact Fisher test has size at
// most alpha up to simulation noise.
TEST(SizePower, ExactFisherSizeOnSharpNull) {
  auto c = quick_config(200);
  c.exact_small = true;
  c.threads = 4;
  c.rows = {ConditioningRow::Randomization};
  const TestColumn cols[] = {TestColumn::FisherRandomization};
  const auto e = run_size_power(find_scenario("t3.sc2"), cols, c).front();
  EXPECT_LE(e.rejection_rate, 5.0 + 3 * std::sqrt(5.0 * 95.0 / 200));
}

TEST(ParseTestColumn, Names) {
  EXPECT_EQ(parse_test_column("Permutation"), TestColumn::Permutation);
  EXPECT_EQ(parse_test_column("t(Welch)"), TestColumn::WelchT);
  EXPECT_FALSE(parse_test_column("bogus").has_value());
}

}  // namespace
}  // namespace randcompare
