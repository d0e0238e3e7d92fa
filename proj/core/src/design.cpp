#include "randcompare/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "randcompare/error.hpp"

namespace randcompare {

namespace {

constexpr double kProbabilitySumTolerance = 1e-12;

void validate_probabilities(std::span<const double> probs) {
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw DesignInvalidError("design probabilities must be finite and nonnegative");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kProbabilitySumTolerance) {
    throw DesignInvalidError("design probabilities sum to " + std::to_string(total) +
                             ", not 1");
  }
}

std::vector<double> cumulative_of(std::span<const double> probs) {
  std::vector<double> c(probs.size());
  std::partial_sum(probs.begin(), probs.end(), c.begin());
  if (!c.empty()) c.back() = 1.0;
  return c;
}

std::size_t draw_index(std::span<const double> cumulative, RngStream& rng) {
  const double u = rng.uniform();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) --it;
  return static_cast<std::size_t>(it - cumulative.begin());
}

// Partial Fisher-Yates: choose n1 positions uniformly for treatment 1.
void draw_crd(std::size_t n, std::size_t n1, RngStream& rng,
              std::vector<Treatment>& labels) {
  labels.assign(n, Treatment::Two);
  std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(n1),
            Treatment::One);
  for (std::size_t i = 0; i < n1; ++i) {
    const std::size_t k = i + static_cast<std::size_t>(rng.bounded(n - i));
    std::swap(labels[i], labels[k]);
  }
}

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    const u128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

std::string too_large_message(const std::string& size) {
  return "design support has " + size +
         " points, above the enumeration cap; use a Monte Carlo engine";
}

void check_cap(std::optional<std::uint64_t> size, std::uint64_t cap,
               std::size_t n, std::size_t n1) {
  if (!size || *size > cap) {
    auto c = binomial_coefficient(n, n1);
    throw EnumerationTooLargeError(too_large_message(c ? to_decimal(*c) : "> 2^128"));
  }
}

}  // namespace

std::optional<u128> binomial_coefficient(std::uint64_t n, std::uint64_t k) {
  if (k > n) {
    throw DomainError("binomial_coefficient: k=" + std::to_string(k) +
                      " exceeds n=" + std::to_string(n));
  }
  k = std::min(k, n - k);
  u128 result = 1;
  constexpr u128 kMax = ~u128{0};
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i is integral; divide out gcd(result, i) first so
    // the intermediate product is as small as the answer allows.
    const std::uint64_t factor = n - k + i;
    const auto g = static_cast<std::uint64_t>(gcd128(result, u128{i}));
    const u128 reduced = result / g;
    const std::uint64_t rest = factor / (i / g);
    if (reduced != 0 && rest > kMax / reduced) return std::nullopt;
    result = reduced * rest;
  }
  return result;
}

std::string to_decimal(u128 value) {
  if (value == 0) return "0";
  std::string digits;
  while (value > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  return {digits.rbegin(), digits.rend()};
}

// AssignmentDesign ----------------------------------------------------------

AssignmentDesign AssignmentDesign::uniform_crd(std::size_t n, std::size_t n1) {
  if (n1 == 0 || n1 >= n) {
    throw DesignInvalidError("uniform CRD needs 0 < n1 < n; got n=" + std::to_string(n) +
                             ", n1=" + std::to_string(n1));
  }
  AssignmentDesign d;
  d.uniform_ = true;
  d.n_ = n;
  d.n1_ = n1;
  return d;
}

AssignmentDesign AssignmentDesign::explicit_support(std::vector<AssignmentVector> support,
                                                    std::vector<double> probs) {
  if (support.empty()) throw DesignInvalidError("explicit design has empty support");
  if (support.size() != probs.size()) {
    throw DesignInvalidError("explicit design: " + std::to_string(support.size()) +
                             " support points but " + std::to_string(probs.size()) +
                             " probabilities");
  }
  validate_probabilities(probs);
  const std::size_t n = support.front().size();
  std::set<AssignmentVector> seen;
  for (const auto& a : support) {
    if (a.size() != n) throw DesignInvalidError("explicit design: support vectors differ in length");
    if (!seen.insert(a).second) throw DesignInvalidError("explicit design: duplicate support vector");
  }
  AssignmentDesign d;
  d.uniform_ = false;
  d.n_ = n;
  d.cumulative_ = cumulative_of(probs);
  d.support_ = std::move(support);
  d.probs_ = std::move(probs);
  return d;
}

double AssignmentDesign::first_order_inclusion(Treatment t, std::size_t j) const {
  const double p = inclusion_or_zero(t, j);
  if (!(p > 0.0)) {
    throw DesignInvalidError("zero first-order inclusion probability for treatment " +
                             std::to_string(to_int(t)) + " at position " + std::to_string(j));
  }
  return p;
}

double AssignmentDesign::inclusion_or_zero(Treatment t, std::size_t j) const {
  if (j < 1 || j > n_) {
    throw BoundsError("position " + std::to_string(j) + " outside 1.." + std::to_string(n_));
  }
  double p = 0.0;
  if (uniform_) {
    const std::size_t nt = t == Treatment::One ? n1_ : n_ - n1_;
    p = static_cast<double>(nt) / static_cast<double>(n_);
  } else {
    for (std::size_t k = 0; k < support_.size(); ++k) {
      if (support_[k][j - 1] == t) p += probs_[k];
    }
  }
  return std::min(p, 1.0);
}

std::optional<std::uint64_t> AssignmentDesign::support_size() const {
  if (!uniform_) return support_.size();
  auto c = binomial_coefficient(n_, n1_);
  if (!c || *c > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  return static_cast<std::uint64_t>(*c);
}

void AssignmentDesign::for_each_support(
    const std::function<void(std::span<const Treatment>, double)>& visit,
    std::uint64_t cap) const {
  const auto size = support_size();
  if (!uniform_) {
    if (*size > cap) throw EnumerationTooLargeError(too_large_message(std::to_string(*size)));
    for (std::size_t k = 0; k < support_.size(); ++k) visit(support_[k].labels(), probs_[k]);
    return;
  }
  check_cap(size, cap, n_, n1_);
  const double p = 1.0 / static_cast<double>(*size);
  // Ones sort before twos; next_permutation walks every distinct arrangement
  // of the multiset exactly once.
  std::vector<Treatment> labels(n_, Treatment::Two);
  std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(n1_), Treatment::One);
  do {
    visit(labels, p);
  } while (std::next_permutation(labels.begin(), labels.end()));
}

std::vector<SupportPoint> AssignmentDesign::enumerate_support(std::uint64_t cap) const {
  std::vector<SupportPoint> out;
  for_each_support(
      [&](std::span<const Treatment> labels, double p) {
        out.push_back({AssignmentVector({labels.begin(), labels.end()}), p});
      },
      cap);
  return out;
}

AssignmentVector AssignmentDesign::sample(RngStream& rng) const {
  std::vector<Treatment> labels;
  sample_into(rng, labels);
  return AssignmentVector(std::move(labels));
}

void AssignmentDesign::sample_into(RngStream& rng, std::vector<Treatment>& labels) const {
  if (uniform_) {
    draw_crd(n_, n1_, rng, labels);
    return;
  }
  const auto& chosen = support_[draw_index(cumulative_, rng)].labels();
  labels.assign(chosen.begin(), chosen.end());
}

// SelectionDesign -----------------------------------------------------------

SelectionDesign SelectionDesign::census_crd(std::size_t population_size, std::size_t n1) {
  if (n1 == 0 || n1 >= population_size) {
    throw DesignInvalidError("census CRD needs 0 < n1 < N; got N=" +
                             std::to_string(population_size) + ", n1=" + std::to_string(n1));
  }
  SelectionDesign d;
  d.census_ = true;
  d.population_ = population_size;
  d.n1_ = n1;
  return d;
}

SelectionDesign SelectionDesign::explicit_joint(
    std::size_t population_size,
    std::vector<std::pair<SampleVector, AssignmentVector>> support,
    std::vector<double> probs) {
  if (support.empty()) throw DesignInvalidError("explicit joint design has empty support");
  if (support.size() != probs.size()) {
    throw DesignInvalidError("explicit joint design: support and probabilities differ in length");
  }
  validate_probabilities(probs);
  for (const auto& [s, t] : support) {
    if (s.size() != t.size()) {
      throw DesignInvalidError("explicit joint design: sample and assignment lengths differ");
    }
    for (UnitId id : s.indices()) {
      if (id > population_size) {
        throw DesignInvalidError("explicit joint design: unit " + std::to_string(id) +
                                 " outside population of " + std::to_string(population_size));
      }
    }
  }
  SelectionDesign d;
  d.census_ = false;
  d.population_ = population_size;
  d.cumulative_ = cumulative_of(probs);
  d.support_ = std::move(support);
  d.probs_ = std::move(probs);
  return d;
}

double SelectionDesign::first_order_inclusion(Treatment t, UnitId unit) const {
  const double p = inclusion_or_zero(t, unit);
  if (!(p > 0.0)) {
    throw DesignInvalidError("zero first-order inclusion probability for " +
                             std::to_string(to_int(t)) + "." + std::to_string(unit));
  }
  return p;
}

double SelectionDesign::inclusion_or_zero(Treatment t, UnitId unit) const {
  if (unit < 1 || unit > population_) {
    throw BoundsError("unit " + std::to_string(unit) + " outside 1.." + std::to_string(population_));
  }
  double p = 0.0;
  if (census_) {
    const std::size_t nt = t == Treatment::One ? n1_ : population_ - n1_;
    p = static_cast<double>(nt) / static_cast<double>(population_);
  } else {
    for (std::size_t k = 0; k < support_.size(); ++k) {
      const auto& [s, a] = support_[k];
      for (std::size_t j = 0; j < s.size(); ++j) {
        if (s[j] == unit && a[j] == t) {
          p += probs_[k];
          break;
        }
      }
    }
  }
  return std::min(p, 1.0);
}

std::optional<std::size_t> SelectionDesign::census_crd_n1() const {
  if (census_) return n1_;
  std::map<std::vector<Treatment>, double> induced;
  std::optional<std::size_t> n1;
  for (std::size_t k = 0; k < support_.size(); ++k) {
    const auto& [s, a] = support_[k];
    if (s.size() != population_) return std::nullopt;
    std::vector<Treatment> by_unit(population_);
    for (std::size_t j = 0; j < s.size(); ++j) by_unit[s[j] - 1] = a[j];
    const std::size_t ones = a.n1();
    if (n1 && *n1 != ones) return std::nullopt;
    n1 = ones;
    induced[by_unit] += probs_[k];
  }
  if (!n1 || *n1 == 0 || *n1 >= population_) return std::nullopt;
  const auto count = binomial_coefficient(population_, *n1);
  if (!count || induced.size() != static_cast<std::size_t>(*count)) return std::nullopt;
  const double expected = 1.0 / static_cast<double>(*count);
  for (const auto& [labels, p] : induced) {
    if (std::abs(p - expected) > 1e-12) return std::nullopt;
  }
  return n1;
}

void SelectionDesign::for_each_support(
    const std::function<void(const SampleVector&, const AssignmentVector&, double)>& visit,
    std::uint64_t cap) const {
  if (census_) {
    const SampleVector everyone = SampleVector::census(population_);
    AssignmentDesign::uniform_crd(population_, n1_).for_each_support(
        [&](std::span<const Treatment> labels, double p) {
          visit(everyone, AssignmentVector({labels.begin(), labels.end()}), p);
        },
        cap);
    return;
  }
  if (support_.size() > cap) {
    throw EnumerationTooLargeError(too_large_message(std::to_string(support_.size())));
  }
  for (std::size_t k = 0; k < support_.size(); ++k) {
    visit(support_[k].first, support_[k].second, probs_[k]);
  }
}

std::pair<SampleVector, AssignmentVector> SelectionDesign::sample(RngStream& rng) const {
  if (census_) {
    std::vector<Treatment> labels;
    draw_crd(population_, n1_, rng, labels);
    return {SampleVector::census(population_), AssignmentVector(std::move(labels))};
  }
  return support_[draw_index(cumulative_, rng)];
}

}  // namespace randcompare
