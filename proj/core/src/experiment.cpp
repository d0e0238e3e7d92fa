#include "randcompare/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "randcompare/error.hpp"

namespace randcompare {

namespace {

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void require_finite(std::span<const double> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw NumericError(std::string(what) + ": non-finite value at position " +
                         std::to_string(i + 1));
    }
  }
}

}  // namespace

Treatment treatment_from_int(int label) {
  if (label == 1) return Treatment::One;
  if (label == 2) return Treatment::Two;
  throw DomainError("treatment label must be 1 or 2, got " + std::to_string(label));
}

// PotentialTable ------------------------------------------------------------

PotentialTable::PotentialTable(std::vector<double> y1, std::vector<double> y2)
    : y1_(std::move(y1)), y2_(std::move(y2)) {
  if (y1_.empty()) throw DataError("potential table needs at least one unit");
  if (y1_.size() != y2_.size()) {
    throw DataError("potential table: y1 has " + std::to_string(y1_.size()) +
                    " units but y2 has " + std::to_string(y2_.size()));
  }
  require_finite(y1_, "potential table y1");
  require_finite(y2_, "potential table y2");
}

double PotentialTable::at(Treatment t, UnitId unit) const {
  if (unit < 1 || unit > n_units()) {
    throw BoundsError("unit " + std::to_string(unit) + " outside 1.." +
                      std::to_string(n_units()));
  }
  return potentials(t)[unit - 1];
}

// SampleVector --------------------------------------------------------------

SampleVector::SampleVector(std::vector<UnitId> indices) : indices_(std::move(indices)) {
  if (indices_.empty()) throw DataError("sample must contain at least one unit");
  std::unordered_set<UnitId> seen;
  seen.reserve(indices_.size());
  for (UnitId id : indices_) {
    if (id < 1) throw DataError("unit ids are 1-based; got 0");
    if (!seen.insert(id).second) {
      throw DataError("sample contains unit " + std::to_string(id) + " twice");
    }
  }
}

SampleVector SampleVector::census(std::size_t population_size) {
  std::vector<UnitId> ids(population_size);
  std::iota(ids.begin(), ids.end(), UnitId{1});
  return SampleVector(std::move(ids));
}

// AssignmentVector ----------------------------------------------------------

AssignmentVector::AssignmentVector(std::vector<Treatment> labels)
    : labels_(std::move(labels)) {
  for (Treatment t : labels_) {
    if (t != Treatment::One && t != Treatment::Two) {
      throw DomainError("assignment labels must be 1 or 2");
    }
  }
}

AssignmentVector AssignmentVector::from_ints(std::span<const int> labels) {
  std::vector<Treatment> out;
  out.reserve(labels.size());
  for (int l : labels) out.push_back(treatment_from_int(l));
  return AssignmentVector(std::move(out));
}

AssignmentVector AssignmentVector::blocks(std::size_t n1, std::size_t n2) {
  std::vector<Treatment> out(n1, Treatment::One);
  out.insert(out.end(), n2, Treatment::Two);
  return AssignmentVector(std::move(out));
}

std::size_t AssignmentVector::count(Treatment t) const noexcept {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), t));
}

// ObservedExperiment --------------------------------------------------------

ObservedExperiment::ObservedExperiment(SampleVector sample, AssignmentVector assignment,
                                       std::vector<double> responses)
    : sample_(std::move(sample)),
      assignment_(std::move(assignment)),
      responses_(std::move(responses)) {
  if (sample_.size() != assignment_.size() || sample_.size() != responses_.size()) {
    throw DataError("observed experiment: sample, assignment and responses differ in length (" +
                    std::to_string(sample_.size()) + ", " +
                    std::to_string(assignment_.size()) + ", " +
                    std::to_string(responses_.size()) + ")");
  }
  require_finite(responses_, "responses");
}

ObservedExperiment ObservedExperiment::from_arms(std::span<const double> arm1,
                                                 std::span<const double> arm2) {
  std::vector<double> y(arm1.begin(), arm1.end());
  y.insert(y.end(), arm2.begin(), arm2.end());
  auto sample = SampleVector::census(y.size());
  return ObservedExperiment(std::move(sample), AssignmentVector::blocks(arm1.size(), arm2.size()),
                            std::move(y));
}

std::vector<double> ObservedExperiment::arm(Treatment t) const {
  std::vector<double> out;
  for (std::size_t j = 0; j < responses_.size(); ++j) {
    if (assignment_[j] == t) out.push_back(responses_[j]);
  }
  return out;
}

void ObservedExperiment::require_arm_sizes(std::size_t minimum) const {
  if (n1() < minimum || n2() < minimum) {
    throw DataError("each arm needs at least " + std::to_string(minimum) +
                    " observation(s); got n1=" + std::to_string(n1()) +
                    ", n2=" + std::to_string(n2()));
  }
}

// Operations ----------------------------------------------------------------

std::vector<double> select_components(const PotentialTable& table,
                                      const SampleVector& sample,
                                      const AssignmentVector& assignment) {
  if (sample.size() != assignment.size()) {
    throw DataError("sample and assignment lengths differ");
  }
  if (sample.size() > table.n_units()) {
    throw BoundsError("sample larger than population");
  }
  std::vector<double> out;
  out.reserve(sample.size());
  for (std::size_t j = 0; j < sample.size(); ++j) {
    out.push_back(table.at(assignment[j], sample[j]));
  }
  return out;
}

ObservedExperiment observe(const PotentialTable& table, const SampleVector& sample,
                           const AssignmentVector& assignment) {
  return ObservedExperiment(sample, assignment,
                            select_components(table, sample, assignment));
}

RealizedEffects realized_effects(const PotentialTable& table,
                                 const SampleVector& sample) {
  RealizedEffects out;
  out.unit_effects.reserve(sample.size());
  double sum1 = 0.0;
  double sum2 = 0.0;
  for (UnitId id : sample.indices()) {
    const double a = table.at(Treatment::One, id);
    const double b = table.at(Treatment::Two, id);
    out.unit_effects.push_back(a - b);
    sum1 += a;
    sum2 += b;
  }
  const double n = static_cast<double>(sample.size());
  out.aggregate_sample = sum1 / n - sum2 / n;
  out.aggregate_population = mean_of(table.y1()) - mean_of(table.y2());
  return out;
}

// Hypotheses ----------------------------------------------------------------

std::string_view to_string(Hypothesis h) noexcept {
  switch (h) {
    case Hypothesis::UP: return "UP";
    case Hypothesis::DUP: return "DUP";
    case Hypothesis::EUP: return "EUP";
    case Hypothesis::RUP: return "RUP";
    case Hypothesis::RAP: return "RAP";
    case Hypothesis::RUs: return "RUs";
    case Hypothesis::RAs: return "RAs";
  }
  return "?";
}

std::string_view description(Hypothesis h) noexcept {
  switch (h) {
    case Hypothesis::UP:
      return "Y[1.P] = Y[2.P] with probability 1";
    case Hypothesis::DUP:
      return "Y[1.i] and Y[2.i] identically distributed for every unit";
    case Hypothesis::EUP:
      return "E(Y[1.i]) = E(Y[2.i]) for every unit";
    case Hypothesis::RUP:
      return "realized y[1.P] = y[2.P] (sharp null on the population)";
    case Hypothesis::RAP:
      return "realized population means equal: mean(y[1.P]) = mean(y[2.P])";
    case Hypothesis::RUs:
      return "realized y[1.s] = y[2.s] (sharp null on the sample)";
    case Hypothesis::RAs:
      return "realized sample means equal: mean(y[1.s]) = mean(y[2.s])";
  }
  return "";
}

std::optional<Hypothesis> parse_hypothesis(std::string_view tag) noexcept {
  for (Hypothesis h : kAllHypotheses) {
    if (to_string(h) == tag) return h;
  }
  return std::nullopt;
}

namespace {

// Direct parent links; implication is the reflexive-transitive closure.
bool directly_implies(Hypothesis a, Hypothesis b) noexcept {
  using H = Hypothesis;
  switch (a) {
    case H::UP: return b == H::DUP || b == H::RUP;
    case H::DUP: return b == H::EUP;
    case H::RUP: return b == H::RAP || b == H::RUs;
    case H::RUs: return b == H::RAs;
    default: return false;
  }
}

}  // namespace

bool hypothesis_implies(Hypothesis a, Hypothesis b) noexcept {
  if (a == b) return true;
  for (Hypothesis mid : kAllHypotheses) {
    if (directly_implies(a, mid) && hypothesis_implies(mid, b)) return true;
  }
  return false;
}

}  // namespace randcompare
