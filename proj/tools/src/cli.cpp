#include "randcompare_cli/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "randcompare/design.hpp"
#include "randcompare/error.hpp"
#include "randcompare/io.hpp"
#include "randcompare/procedures.hpp"
#include "randcompare/simulation.hpp"
#include "randcompare/stats.hpp"

namespace randcompare::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 11;
constexpr std::uint64_t kDefaultBudget = 1'000'000;
constexpr std::uint64_t kAutoEnumerationCap = 200'000;

// Report order of the test selectors.
const std::vector<std::string> kSelectors = {"perm",        "wilcoxon",   "welch",
                                             "pooled",      "fisher-rand", "neyman-rand",
                                             "neyman-sel",  "fisher-exact", "fisher-sel"};

const std::map<std::string, std::string> kSelectorAliases = {
    {"permutation", "perm"},
    {"welch-t", "welch"},
    {"pooled-t", "pooled"},
    {"fisher-randomization", "fisher-rand"},
    {"neyman-randomization", "neyman-rand"},
    {"neyman-selection", "neyman-sel"},
    {"fisher-exact-2x2", "fisher-exact"},
    {"fisher-selection", "fisher-sel"},
};

const std::map<std::string, TestColumn> kColumnSelectors = {
    {"perm", TestColumn::Permutation},
    {"wilcoxon", TestColumn::Wilcoxon},
    {"welch", TestColumn::WelchT},
    {"pooled", TestColumn::PooledT},
    {"fisher-rand", TestColumn::FisherRandomization},
    {"neyman-rand", TestColumn::NeymanRandomization},
    {"neyman-sel", TestColumn::NeymanSelection},
};

struct CommonOptions {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "json";
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("RANDCOMPARE_SEED"); env != nullptr && *env != '\0') {
    const std::string_view s(env);
    std::uint64_t seed = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
    if (ec != std::errc() || end != s.data() + s.size()) {
      throw DomainError("RANDCOMPARE_SEED must be an unsigned 64-bit integer, got '" +
                        std::string(s) + "'");
    }
    return seed;
  }
  return kDefaultSeed;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path);
  f << text;
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string general(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string pad(std::string s, std::size_t width, bool left = true) {
  if (s.size() >= width) return s;
  const std::string fill(width - s.size(), ' ');
  return left ? s + fill : fill + s;
}

// test -----------------------------------------------------------------------

struct TestOptions {
  std::string data;
  std::string tests = "perm,wilcoxon,welch,pooled,fisher-rand,neyman-rand";
  std::string design = "crd";
  std::string engine;
  std::optional<std::uint64_t> mc;
};

struct TestRun {
  std::vector<TestReport> reports;
  std::vector<std::string> notices;
  std::optional<double> d3;
  std::optional<double> z3;
};

bool is_binary(std::span<const double> ys) {
  return std::all_of(ys.begin(), ys.end(), [](double y) { return y == 0.0 || y == 1.0; });
}

TestRun run_tests(const Dataset& ds, const TestOptions& opt, std::uint64_t seed) {
  const auto& obs = ds.observed;
  const auto selectors = expand_test_selectors(opt.tests);
  const bool all = opt.tests == "all";
  const std::uint64_t budget = opt.mc.value_or(kDefaultBudget);

  const bool crd = opt.design == "crd";
  const AssignmentDesign design = crd ? AssignmentDesign::uniform_crd(obs.size(), obs.n1())
                                      : read_assignment_design_json(opt.design);

  PValueEngine engine = PValueEngine::automatic(budget, seed, kAutoEnumerationCap);
  if (opt.engine == "exact") {
    engine = PValueEngine::exact();
  } else if (opt.engine == "mc") {
    engine = PValueEngine::monte_carlo(budget, seed);
  } else if (opt.engine == "asymptotic") {
    engine = PValueEngine::asymptotic();
  }
  engine.validate();
  // Difference-in-means tests have no large-sample reference; they keep the
  // default engine when asymptotic is requested.
  const PValueEngine resampling = opt.engine == "asymptotic"
                                      ? PValueEngine::automatic(budget, seed, kAutoEnumerationCap)
                                      : engine;

  TestRun run;
  for (const auto& sel : selectors) {
    if (sel == "perm") {
      run.reports.push_back(permutation_test(obs, resampling));
    } else if (sel == "wilcoxon") {
      run.reports.push_back(wilcoxon_test(obs, engine));
    } else if (sel == "welch") {
      run.reports.push_back(welch_t_test(obs));
    } else if (sel == "pooled") {
      run.reports.push_back(pooled_t_test(obs));
    } else if (sel == "fisher-rand") {
      run.reports.push_back(fisher_randomization_test(obs, design, resampling));
      run.d3 = run.reports.back().statistic;
    } else if (sel == "neyman-rand") {
      run.reports.push_back(neyman_randomization_test(obs, design));
      run.z3 = run.reports.back().statistic;
    } else if (sel == "neyman-sel") {
      if (crd) {
        run.reports.push_back(
            neyman_selection_test(obs, SelectionDesign::census_crd(obs.size(), obs.n1())));
      } else {
        std::vector<std::pair<SampleVector, AssignmentVector>> points;
        const auto everyone = SampleVector::census(obs.size());
        for (const auto& a : design.explicit_points()) points.emplace_back(everyone, a);
        const auto probs = design.explicit_probs();
        run.reports.push_back(neyman_selection_test(
            obs, SelectionDesign::explicit_joint(obs.size(), std::move(points),
                                                 {probs.begin(), probs.end()})));
      }
    } else if (sel == "fisher-exact") {
      if (all && !is_binary(obs.responses())) {
        run.notices.push_back("fisher-exact-2x2 skipped: responses are not binary (0/1)");
        continue;
      }
      run.reports.push_back(fisher_exact_2x2(obs));
    } else if (sel == "fisher-sel") {
      if (!all) {
        fisher_selection_test(obs, SelectionDesign::census_crd(obs.size(), obs.n1()));
      }
      try {
        fisher_selection_test(obs, SelectionDesign::census_crd(obs.size(), obs.n1()));
      } catch (const NoncomputableDistributionError& e) {
        run.notices.push_back(std::string("NoncomputableDistribution: ") + e.what());
      }
    }
  }
  if (!run.d3 && run.z3) {
    run.d3 = d_statistic(obs.responses(), obs.assignment(),
                         resolve_weights(WeightFamily::w3(design), obs.sample(), obs.assignment()));
  }
  return run;
}

std::string tests_table(const Dataset& ds, const std::string& source, const TestRun& run) {
  std::ostringstream os;
  os << "data: " << source << "  (n1 = " << ds.observed.n1() << ", n2 = " << ds.observed.n2()
     << ")\n";
  if (run.d3) os << "D3 = " << fixed(*run.d3, 4) << '\n';
  if (run.z3) os << "Z3 = " << fixed(*run.z3, 4) << '\n';
  os << '\n'
     << pad("test", 22) << pad("hypothesis", 11) << pad("statistic", 14, false)
     << pad("p_value", 11, false) << "  " << pad("kind", 12) << pad("mc_stderr", 10, false)
     << '\n';
  for (const auto& r : run.reports) {
    os << pad(r.test, 22) << pad(std::string(to_string(r.hypothesis)), 11)
       << pad(fixed(r.statistic, 4), 14, false) << pad(fixed(r.p_value, 6), 11, false) << "  "
       << pad(std::string(to_string(r.p_value_kind)), 12)
       << pad(r.mc_stderr ? fixed(*r.mc_stderr, 6) : "-", 10, false)
       << (r.degenerate ? "  (degenerate)" : "") << '\n';
  }
  for (const auto& n : run.notices) os << "note: " << n << '\n';
  return os.str();
}

std::string tests_csv(const TestRun& run) {
  std::ostringstream os;
  os << "test,hypothesis,statistic,p_value,p_value_kind,mc_stderr,n1,n2,degenerate\n";
  for (const auto& r : run.reports) {
    os << r.test << ',' << to_string(r.hypothesis) << ',' << general(r.statistic) << ','
       << general(r.p_value) << ',' << to_string(r.p_value_kind) << ','
       << (r.mc_stderr ? general(*r.mc_stderr) : "") << ',' << r.n1 << ',' << r.n2 << ','
       << (r.degenerate ? "true" : "false") << '\n';
  }
  return os.str();
}

int cmd_test(const TestOptions& opt, const CommonOptions& common, std::ostream& out) {
  const auto ds = read_dataset_csv(opt.data);
  const auto run = run_tests(ds, opt, resolve_seed(common.seed));
  std::string text;
  if (common.format == "table") {
    text = tests_table(ds, opt.data, run);
  } else if (common.format == "csv") {
    text = tests_csv(run);
  } else {
    text = reports_to_json(run.reports, run.notices) + "\n";
  }
  emit(text, common.out, out);
  return kOk;
}

// simulate ---------------------------------------------------------------------

struct SimulateOptions {
  std::string scenario;
  std::string config;
  bool all_tables = false;
  std::size_t replicates = 1000;
  double alpha = 0.05;
  unsigned threads = 1;
  std::uint64_t mc = 0;
  bool exact_small = false;
  std::string tests;
  std::string rows = "both";
};

std::vector<TestColumn> simulation_columns(const std::string& list) {
  if (list.empty()) return {std::begin(kStandardColumns), std::end(kStandardColumns)};
  std::vector<TestColumn> cols;
  for (const auto& sel : expand_test_selectors(list)) {
    const auto it = kColumnSelectors.find(sel);
    if (it == kColumnSelectors.end()) {
      throw DomainError("test '" + sel + "' is not available in simulations");
    }
    cols.push_back(it->second);
  }
  return cols;
}

std::string simulate_table(std::span<const PowerRun> runs, std::span<const TestColumn> cols,
                           const SimulationConfig& config) {
  std::ostringstream os;
  os << "replicates = " << config.replicates << ", alpha = " << general(config.alpha)
     << ", seed = " << config.seed << "; rejection rate % (binomial stderr)\n";
  for (const auto& run : runs) {
    os << '\n' << run.scenario_id << "  " << run.description << '\n' << pad("", 15);
    for (TestColumn c : cols) os << pad(std::string(to_string(c)), 17, false);
    os << '\n';
    for (ConditioningRow row : config.rows) {
      os << pad(std::string(to_string(row)), 15);
      for (TestColumn c : cols) {
        for (const auto& e : run.estimates) {
          if (e.row != row || e.column != c) continue;
          const std::string cell = e.applicable ? fixed(e.rejection_rate, 1) + " (" +
                                                      fixed(e.mc_stderr, 2) + ")"
                                                : "NA";
          os << pad(cell, 17, false);
        }
      }
      os << '\n';
    }
  }
  return os.str();
}

int cmd_simulate(const SimulateOptions& opt, const CommonOptions& common, std::ostream& out) {
  SimulationConfig config;
  config.replicates = opt.replicates;
  config.alpha = opt.alpha;
  config.seed = resolve_seed(common.seed);
  config.threads = opt.threads;
  config.mc_budget = opt.mc;
  config.exact_small = opt.exact_small;
  if (opt.rows == "randomization") {
    config.rows = {ConditioningRow::Randomization};
  } else if (opt.rows == "process") {
    config.rows = {ConditioningRow::Process};
  }
  config.validate();
  const auto cols = simulation_columns(opt.tests);

  std::vector<Scenario> scenarios;
  if (opt.all_tables) {
    scenarios = scenario_registry();
  } else if (!opt.config.empty()) {
    scenarios.push_back(read_scenario_json(opt.config));
  } else if (!opt.scenario.empty()) {
    scenarios.push_back(find_scenario(opt.scenario));
  } else {
    throw DomainError("simulate needs a scenario id, --config or --all-tables");
  }

  std::vector<PowerRun> runs;
  for (const auto& s : scenarios) {
    runs.push_back(PowerRun{s.id, s.description, run_size_power(s, cols, config)});
  }

  std::string text;
  if (common.format == "table") {
    text = simulate_table(runs, cols, config);
  } else if (common.format == "csv") {
    text = power_estimates_csv_header();
    for (const auto& r : runs) text += power_estimates_to_csv_rows(r.scenario_id, r.estimates);
  } else {
    text = power_runs_to_json(runs, config) + "\n";
  }
  emit(text, common.out, out);
  return kOk;
}

// validate ---------------------------------------------------------------------

int cmd_validate(const std::string& data, const CommonOptions& common, std::ostream& out) {
  const auto ds = read_dataset_csv(data);
  const auto& obs = ds.observed;
  struct ArmSummary {
    std::size_t n;
    double mean;
    std::optional<double> variance;
  };
  ArmSummary arms[2];
  for (int k = 0; k < 2; ++k) {
    const auto ys = obs.arm(k == 0 ? Treatment::One : Treatment::Two);
    arms[k] = {ys.size(), mean(ys),
               ys.size() >= 2 ? std::optional<double>(sample_variance(ys)) : std::nullopt};
  }
  const double diff = arms[0].mean - arms[1].mean;
  std::ostringstream os;
  if (common.format == "json") {
    const auto var = [](const std::optional<double>& v) { return v ? general(*v) : "null"; };
    os << "{\n  \"valid\": true,\n  \"units\": " << obs.size() << ",\n  \"arms\": [\n";
    for (int k = 0; k < 2; ++k) {
      os << "    {\"treatment\": " << k + 1 << ", \"n\": " << arms[k].n
         << ", \"mean\": " << general(arms[k].mean) << ", \"variance\": " << var(arms[k].variance)
         << "}" << (k == 0 ? "," : "") << '\n';
    }
    os << "  ],\n  \"mean_difference\": " << general(diff) << "\n}\n";
  } else {
    os << "data: " << data << "  (" << obs.size() << " units, valid)\n"
       << pad("arm", 6) << pad("n", 6, false) << pad("mean", 14, false)
       << pad("variance", 16, false) << '\n';
    for (int k = 0; k < 2; ++k) {
      os << pad(std::to_string(k + 1), 6) << pad(std::to_string(arms[k].n), 6, false)
         << pad(fixed(arms[k].mean, 4), 14, false)
         << pad(arms[k].variance ? fixed(*arms[k].variance, 4) : "NA", 16, false) << '\n';
    }
    os << "mean difference (arm 1 - arm 2) = " << fixed(diff, 4) << '\n';
  }
  emit(os.str(), common.out, out);
  return kOk;
}

void add_common(CLI::App* cmd, CommonOptions& common, const std::string& default_format) {
  common.format = default_format;
  cmd->add_option("--seed", common.seed,
                  "Master seed (falls back to RANDCOMPARE_SEED, then 11)");
  cmd->add_option("--out", common.out, "Write output to this file instead of stdout");
  cmd->add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"json", "table", "csv"}));
}

}  // namespace

int exit_code_for(const std::exception& e) noexcept {
  const auto* err = dynamic_cast<const Error*>(&e);
  if (err == nullptr) return kUsage;
  switch (err->kind()) {
    case ErrorKind::Data:
    case ErrorKind::DegenerateData:
    case ErrorKind::InsufficientData:
    case ErrorKind::NotFound:
    case ErrorKind::Numeric:
    case ErrorKind::Bounds:
      return kDataError;
    case ErrorKind::DesignInvalid:
    case ErrorKind::UnsupportedDesign:
    case ErrorKind::NoncomputableDistribution:
      return kUnsupportedDesign;
    case ErrorKind::EnumerationTooLarge:
      return kEnumerationTooLarge;
    case ErrorKind::Domain:
      return kUsage;
  }
  return kUsage;
}

std::vector<std::string> expand_test_selectors(std::string_view list) {
  std::vector<bool> chosen(kSelectors.size(), false);
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    const auto end = comma == std::string_view::npos ? list.size() : comma;
    std::string name(list.substr(start, end - start));
    name.erase(0, name.find_first_not_of(' '));
    name.erase(name.find_last_not_of(' ') + 1);
    if (const auto alias = kSelectorAliases.find(name); alias != kSelectorAliases.end()) {
      name = alias->second;
    }
    if (name == "all") {
      std::fill(chosen.begin(), chosen.end(), true);
    } else {
      const auto it = std::find(kSelectors.begin(), kSelectors.end(), name);
      if (it == kSelectors.end()) {
        std::string known = "all";
        for (const auto& s : kSelectors) known += ", " + s;
        throw DomainError("unknown test '" + name + "'; known: " + known);
      }
      chosen[static_cast<std::size_t>(it - kSelectors.begin())] = true;
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < kSelectors.size(); ++i) {
    if (chosen[i]) out.push_back(kSelectors[i]);
  }
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomization, selection and process-based tests for two-treatment experiments",
               "randcompare"};
  app.require_subcommand(1);

  CommonOptions test_common;
  TestOptions test_opt;
  auto* test = app.add_subcommand("test", "Run test procedures on a dataset");
  test->add_option("--data", test_opt.data, "CSV with unit_id,treatment,response")->required();
  test->add_option("--tests", test_opt.tests,
                   "Comma-separated: perm, wilcoxon, welch, pooled, fisher-rand, neyman-rand, "
                   "neyman-sel, fisher-exact, fisher-sel, all");
  test->add_option("--design", test_opt.design,
                   "'crd' or a JSON file {\"support\": [[...]], \"probs\": [...]}");
  test->add_option("--engine", test_opt.engine,
                   "p-value engine (default: exact when the support has at most 200,000 points, "
                   "else Monte Carlo)")
      ->check(CLI::IsMember({"exact", "mc", "asymptotic"}));
  test->add_option("--mc", test_opt.mc, "Monte Carlo budget (default 1000000)");
  add_common(test, test_common, "json");

  CommonOptions sim_common;
  SimulateOptions sim_opt;
  auto* sim = app.add_subcommand("simulate", "Size and power simulation");
  sim->add_option("scenario", sim_opt.scenario, "Scenario id, e.g. t3.sc1");
  sim->add_option("--config", sim_opt.config, "Scenario config JSON file");
  sim->add_flag("--all-tables", sim_opt.all_tables, "Run every built-in scenario");
  sim->add_option("--replicates", sim_opt.replicates, "Replicates per row (>= 100)");
  sim->add_option("--alpha", sim_opt.alpha, "Nominal level");
  sim->add_option("--threads", sim_opt.threads, "Worker threads");
  sim->add_option("--mc", sim_opt.mc,
                  "Per-replicate Monte Carlo budget (default 10000 for N <= 20, else 4000)");
  sim->add_flag("--exact-small", sim_opt.exact_small, "Exact enumeration when N <= 20");
  sim->add_option("--tests", sim_opt.tests,
                  "Columns (default: perm,wilcoxon,welch,pooled,fisher-rand,neyman-rand)");
  sim->add_option("--rows", sim_opt.rows, "Conditioning rows")
      ->check(CLI::IsMember({"both", "randomization", "process"}));
  add_common(sim, sim_common, "json");

  CommonOptions val_common;
  std::string val_data;
  auto* val = app.add_subcommand("validate", "Check a dataset and summarize its arms");
  val->add_option("--data", val_data, "CSV with unit_id,treatment,response")->required();
  add_common(val, val_common, "table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*test) return cmd_test(test_opt, test_common, out);
    if (*sim) return cmd_simulate(sim_opt, sim_common, out);
    if (*val) return cmd_validate(val_data, val_common, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kUsage;
}

}  // namespace randcompare::cli
