#include <benchmark/benchmark.h>

#include "randcompare/io.hpp"
#include "randcompare/procedures.hpp"
#include "randcompare/simulation.hpp"
#include "randcompare/special_functions.hpp"

using namespace randcompare;

namespace {

const ObservedExperiment& cellphone() {
  static const auto obs = read_dataset_csv(RANDCOMPARE_DATA_DIR "/cellphone.csv").observed;
  return obs;
}

ObservedExperiment random_arms(std::size_t n1, std::size_t n2) {
  RngStream rng(5);
  std::vector<double> a(n1);
  std::vector<double> b(n2);
  for (auto& x : a) x = rng.uniform();
  for (auto& x : b) x = rng.uniform();
  return ObservedExperiment::from_arms(a, b);
}

void BM_ExactPermutation(benchmark::State& state) {
  const auto half = static_cast<std::size_t>(state.range(0));
  const auto obs = random_arms(half, half);
  for (auto _ : state) {
    benchmark::DoNotOptimize(permutation_test(obs, PValueEngine::exact()).p_value);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(*AssignmentDesign::uniform_crd(2 * half, half)
                                                         .support_size()));
}
BENCHMARK(BM_ExactPermutation)->Arg(5)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_MonteCarloFisherCellPhone(benchmark::State& state) {
  const auto& obs = cellphone();
  const auto design = AssignmentDesign::uniform_crd(obs.size(), obs.n1());
  const auto budget = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fisher_randomization_test(obs, design, PValueEngine::monte_carlo(budget, 11)).p_value);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarloFisherCellPhone)->Arg(10000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_WilcoxonMonteCarlo(benchmark::State& state) {
  const auto& obs = cellphone();
  for (auto _ : state) {
    benchmark::DoNotOptimize(wilcoxon_test(obs, PValueEngine::monte_carlo(10000, 3)).p_value);
  }
}
BENCHMARK(BM_WilcoxonMonteCarlo)->Unit(benchmark::kMillisecond);

void BM_NormalCdf(benchmark::State& state) {
  double x = -6.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(normal_cdf(x));
    x = x > 6.0 ? -6.0 : x + 0.013;
  }
}
BENCHMARK(BM_NormalCdf);

void BM_StudentTCdf(benchmark::State& state) {
  double x = -6.0;
  const double df = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(student_t_cdf(x, df));
    x = x > 6.0 ? -6.0 : x + 0.013;
  }
}
BENCHMARK(BM_StudentTCdf)->Arg(3)->Arg(18)->Arg(98);

void BM_SimulationRow(benchmark::State& state) {
  SimulationConfig config;
  config.replicates = 100;
  config.rows = {ConditioningRow::Randomization};
  const auto& scenario = find_scenario(state.range(0) == 0 ? "t3.sc1" : "t5.sc1");
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_size_power(scenario, kStandardColumns, config));
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_SimulationRow)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
