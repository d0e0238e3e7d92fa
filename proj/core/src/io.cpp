#include "randcompare/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "randcompare/error.hpp"

namespace randcompare {

namespace {

using Json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Comma-separated fields; a field may be double-quoted with "" as an escaped
// quote. Returns nullopt on an unterminated quote.
std::optional<std::vector<std::string>> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && trim(cur).empty()) {
      cur.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.emplace_back(was_quoted ? cur : std::string(trim(cur)));
      cur.clear();
      was_quoted = false;
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) return std::nullopt;
  fields.emplace_back(was_quoted ? cur : std::string(trim(cur)));
  return fields;
}

std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw DataError(std::string(what) + ": malformed JSON: " + e.what());
  }
}

template <class T>
T get_field(const Json& obj, const char* key, std::string_view what) {
  if (!obj.contains(key)) throw DataError(std::string(what) + ": missing key '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const Json::exception&) {
    throw DataError(std::string(what) + ": key '" + key + "' has the wrong type");
  }
}

template <class T>
T get_or(const Json& obj, const char* key, T fallback, std::string_view what) {
  return obj.contains(key) ? get_field<T>(obj, key, what) : fallback;
}

ProcessLaw parse_law(const Json& j) {
  constexpr std::string_view what = "scenario law";
  if (!j.is_object()) throw DataError("scenario: 'law' must be an object");
  const auto kind = get_field<std::string>(j, "kind", what);
  if (kind == "normal") {
    return NormalLaw{get_field<double>(j, "mu", what), get_field<double>(j, "sigma", what)};
  }
  if (kind == "gamma") {
    return GammaLaw{get_field<double>(j, "shape", what), get_field<double>(j, "scale", what)};
  }
  if (kind == "mixture") {
    return UniformMixtureLaw{get_field<double>(j, "weight", what), get_field<double>(j, "lo1", what),
                             get_field<double>(j, "hi1", what), get_field<double>(j, "lo2", what),
                             get_field<double>(j, "hi2", what)};
  }
  if (kind == "bernoulli") return BernoulliLaw{get_field<double>(j, "p", what)};
  if (kind == "bernoulli_pair") {
    return CorrelatedBernoulliPairLaw{get_field<double>(j, "p1", what),
                                      get_field<double>(j, "p2", what),
                                      get_field<double>(j, "rho", what)};
  }
  throw DataError("scenario law: unknown kind '" + kind +
                  "' (expected normal, gamma, mixture, bernoulli or bernoulli_pair)");
}

Json report_json(const TestReport& r) {
  Json j;
  j["test"] = r.test;
  j["hypothesis"] = std::string(to_string(r.hypothesis));
  j["statistic"] = r.statistic;
  j["p_value"] = r.p_value;
  j["p_value_kind"] = std::string(to_string(r.p_value_kind));
  j["mc_stderr"] = r.mc_stderr ? Json(*r.mc_stderr) : Json(nullptr);
  Json assumptions = Json::array();
  for (Assumption a : r.assumptions) assumptions.push_back(std::string(to_string(a)));
  j["assumptions"] = std::move(assumptions);
  j["n1"] = r.n1;
  j["n2"] = r.n2;
  j["degenerate"] = r.degenerate;
  return j;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << v;
  return os.str();
}

}  // namespace

Dataset parse_dataset_csv(std::istream& in, std::string_view source) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> id_col;
  std::optional<std::size_t> treat_col;
  std::optional<std::size_t> resp_col;
  std::size_t columns = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto header = split_csv_line(line);
    if (!header) throw DataError(where(source, line_no) + "unterminated quoted field");
    columns = header->size();
    for (std::size_t c = 0; c < header->size(); ++c) {
      const auto& name = (*header)[c];
      if (name == "unit_id") id_col = c;
      if (name == "treatment") treat_col = c;
      if (name == "response") resp_col = c;
    }
    break;
  }
  if (columns == 0) throw DataError(std::string(source) + ": empty file, expected a CSV header");
  if (!id_col || !treat_col || !resp_col) {
    throw DataError(where(source, line_no) +
                    "header must contain unit_id, treatment and response columns");
  }

  std::vector<std::string> ids;
  std::vector<int> labels;
  std::vector<double> responses;
  std::unordered_set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (!fields) throw DataError(where(source, line_no) + "unterminated quoted field");
    if (fields->size() != columns) {
      throw DataError(where(source, line_no) + "expected " + std::to_string(columns) +
                      " fields, found " + std::to_string(fields->size()));
    }
    const std::string& id = (*fields)[*id_col];
    if (id.empty()) throw DataError(where(source, line_no) + "empty unit_id");
    if (!seen.insert(id).second) {
      throw DataError(where(source, line_no) + "duplicate unit_id '" + id + "'");
    }
    const std::string& t = (*fields)[*treat_col];
    if (t != "1" && t != "2") {
      throw DataError(where(source, line_no) + "treatment must be 1 or 2, got '" + t + "'");
    }
    const std::string& r = (*fields)[*resp_col];
    double value = 0.0;
    const auto [end, ec] = std::from_chars(r.data(), r.data() + r.size(), value);
    if (r.empty() || ec != std::errc() || end != r.data() + r.size() || !std::isfinite(value)) {
      throw DataError(where(source, line_no) + "response '" + r + "' is not a finite number");
    }
    ids.push_back(id);
    labels.push_back(t == "1" ? 1 : 2);
    responses.push_back(value);
  }
  const auto assignment = AssignmentVector::from_ints(labels);
  if (assignment.n1() == 0 || assignment.n2() == 0) {
    throw DataError(std::string(source) + ": each treatment arm needs at least one unit (arm 1: " +
                    std::to_string(assignment.n1()) +
                    ", arm 2: " + std::to_string(assignment.n2()) + ")");
  }
  auto sample = SampleVector::census(responses.size());
  return Dataset{std::move(ids),
                 ObservedExperiment(std::move(sample), assignment, std::move(responses))};
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_dataset_csv(in, path.string());
}

AssignmentDesign parse_assignment_design_json(std::string_view text) {
  constexpr std::string_view what = "design";
  const Json j = parse_json(text, what);
  if (!j.is_object()) throw DataError("design: expected a JSON object");
  const auto support = get_field<std::vector<std::vector<int>>>(j, "support", what);
  const auto probs = get_field<std::vector<double>>(j, "probs", what);
  if (support.size() != probs.size()) {
    throw DesignInvalidError("design: support has " + std::to_string(support.size()) +
                             " points but probs has " + std::to_string(probs.size()));
  }
  std::vector<AssignmentVector> points;
  points.reserve(support.size());
  for (const auto& labels : support) {
    try {
      points.push_back(AssignmentVector::from_ints(labels));
    } catch (const Error& e) {
      throw DesignInvalidError(std::string("design: invalid support point: ") + e.what());
    }
  }
  return AssignmentDesign::explicit_support(std::move(points), probs);
}

AssignmentDesign read_assignment_design_json(const std::filesystem::path& path) {
  return parse_assignment_design_json(read_file(path));
}

Scenario parse_scenario_json(std::string_view text) {
  constexpr std::string_view what = "scenario";
  const Json j = parse_json(text, what);
  if (!j.is_object()) throw DataError("scenario: expected a JSON object");
  Scenario s;
  s.id = get_field<std::string>(j, "id", what);
  s.description = get_or<std::string>(j, "description", "", what);
  s.n1 = get_field<std::size_t>(j, "n1", what);
  s.n2 = get_field<std::size_t>(j, "n2", what);
  s.law = parse_law(j.at("law"));
  if (j.contains("effect")) {
    const Json& e = j.at("effect");
    if (!e.is_object()) throw DataError("scenario: 'effect' must be an object");
    s.effect.scale = get_or(e, "scale", 1.0, what);
    s.effect.shift = get_or(e, "shift", 0.0, what);
    s.effect.mean_coefficient = get_or(e, "mean_coefficient", 0.0, what);
    s.effect.noise_sd = get_or(e, "noise_sd", 0.0, what);
    s.effect.center_noise = get_or(e, "center_noise", false, what);
  }
  s.equalize_means = get_or(j, "equalize_means", false, what);
  if (j.contains("second_component_count")) {
    s.fixed_second_component_count = get_field<std::size_t>(j, "second_component_count", what);
  }
  if (j.contains("fixed_y")) {
    const Json& f = j.at("fixed_y");
    s.fixed_y = PotentialTable(get_field<std::vector<double>>(f, "y1", what),
                               get_field<std::vector<double>>(f, "y2", what));
  }
  for (const auto& tag : get_or<std::vector<std::string>>(j, "hypotheses", {}, what)) {
    const auto h = parse_hypothesis(tag);
    if (!h) throw DataError("scenario: unknown hypothesis tag '" + tag + "'");
    s.true_hypotheses.push_back(*h);
  }
  s.validate();
  return s;
}

Scenario read_scenario_json(const std::filesystem::path& path) {
  return parse_scenario_json(read_file(path));
}

std::string report_to_json(const TestReport& report, int indent) {
  return report_json(report).dump(indent);
}

std::string reports_to_json(std::span<const TestReport> reports,
                            std::span<const std::string> notices, int indent) {
  Json j;
  j["reports"] = Json::array();
  for (const auto& r : reports) j["reports"].push_back(report_json(r));
  j["notices"] = Json::array();
  for (const auto& n : notices) j["notices"].push_back(n);
  return j.dump(indent);
}

std::string power_runs_to_json(std::span<const PowerRun> runs, const SimulationConfig& config,
                               int indent) {
  Json j;
  j["replicates"] = config.replicates;
  j["alpha"] = config.alpha;
  j["seed"] = config.seed;
  j["runs"] = Json::array();
  for (const auto& run : runs) {
    Json r;
    r["scenario"] = run.scenario_id;
    r["description"] = run.description;
    r["estimates"] = Json::array();
    for (const auto& e : run.estimates) {
      Json row;
      row["test"] = e.test_name;
      row["row"] = std::string(to_string(e.row));
      row["applicable"] = e.applicable;
      row["rejection_rate"] = e.applicable ? Json(e.rejection_rate) : Json(nullptr);
      row["rejections"] = e.rejections;
      row["replicates"] = e.replicates;
      row["mc_stderr"] = e.applicable ? Json(e.mc_stderr) : Json(nullptr);
      r["estimates"].push_back(std::move(row));
    }
    j["runs"].push_back(std::move(r));
  }
  return j.dump(indent);
}

std::string power_estimates_csv_header() {
  return "scenario,test,row,applicable,rejection_rate,rejections,replicates,mc_stderr\n";
}

std::string power_estimates_to_csv_rows(std::string_view scenario_id,
                                        std::span<const PowerEstimate> estimates) {
  std::string out;
  for (const auto& e : estimates) {
    out += std::string(scenario_id) + "," + e.test_name + "," + std::string(to_string(e.row)) +
           "," + (e.applicable ? "true" : "false") + "," +
           (e.applicable ? format_number(e.rejection_rate) : "NA") + "," +
           std::to_string(e.rejections) + "," + std::to_string(e.replicates) + "," +
           (e.applicable ? format_number(e.mc_stderr) : "NA") + "\n";
  }
  return out;
}

}  // namespace randcompare
