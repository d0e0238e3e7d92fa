#pragma once

// Reading datasets, designs and scenario configs; writing reports.

#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "randcompare/design.hpp"
#include "randcompare/experiment.hpp"
#include "randcompare/procedures.hpp"
#include "randcompare/simulation.hpp"

namespace randcompare {

/// A two-arm dataset. Position j of `observed` is the j-th data row; its
/// unit id is unit_ids[j].
struct Dataset {
  std::vector<std::string> unit_ids;
  ObservedExperiment observed;
};

/// CSV with header unit_id,treatment,response (columns in any order, extra
/// columns ignored). Throws DataError naming the source and line on malformed
/// input, duplicate ids, labels outside {1, 2} or an empty arm.
Dataset parse_dataset_csv(std::istream& in, std::string_view source = "<input>");
Dataset read_dataset_csv(const std::filesystem::path& path);

/// {"support": [[1,2,...],...], "probs": [...]}. Throws DataError on malformed
/// JSON and DesignInvalidError when the support or probabilities are invalid.
AssignmentDesign parse_assignment_design_json(std::string_view text);
AssignmentDesign read_assignment_design_json(const std::filesystem::path& path);

/// Scenario config, e.g.
///   {"id": "my.sc", "n1": 10, "n2": 10,
///    "law": {"kind": "normal", "mu": 10, "sigma": 2},
///    "effect": {"scale": 1, "shift": 2, "noise_sd": 3, "center_noise": true},
///    "hypotheses": ["EUP"]}
/// Law kinds: normal(mu, sigma), gamma(shape, scale),
/// mixture(weight, lo1, hi1, lo2, hi2), bernoulli(p), bernoulli_pair(p1, p2,
/// rho). Optional keys: description, equalize_means, second_component_count,
/// fixed_y {"y1": [...], "y2": [...]}.
Scenario parse_scenario_json(std::string_view text);
Scenario read_scenario_json(const std::filesystem::path& path);

/// Fields: test, hypothesis, statistic, p_value, p_value_kind, mc_stderr
/// (null unless Monte Carlo), assumptions, n1, n2, degenerate.
std::string report_to_json(const TestReport& report, int indent = 2);

/// {"reports": [...], "notices": [...]}.
std::string reports_to_json(std::span<const TestReport> reports,
                            std::span<const std::string> notices, int indent = 2);

/// One scenario's estimates, for report writers.
struct PowerRun {
  std::string scenario_id;
  std::string description;
  std::vector<PowerEstimate> estimates;
};

/// {"replicates": R, "alpha": a, "seed": s, "runs": [{"scenario": id,
/// "description": ..., "estimates": [...]}, ...]}.
std::string power_runs_to_json(std::span<const PowerRun> runs, const SimulationConfig& config,
                               int indent = 2);

/// Header scenario,test,row,applicable,rejection_rate,rejections,replicates,mc_stderr.
std::string power_estimates_csv_header();
std::string power_estimates_to_csv_rows(std::string_view scenario_id,
                                        std::span<const PowerEstimate> estimates);

}  // namespace randcompare
