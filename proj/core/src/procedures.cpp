#include "randcompare/procedures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "randcompare/special_functions.hpp"
#include "randcompare/stats.hpp"

namespace randcompare {

namespace {

double max_abs(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

using A = Assumption;

enum class Route { Exact, MonteCarlo, Asymptotic };

Route resolve_route(const PValueEngine& engine, std::optional<std::uint64_t> support_size) {
  engine.validate();
  const bool fits = support_size && *support_size <= engine.enumeration_cap;
  switch (engine.mode) {
    case PValueEngine::Mode::Exact:
      if (!fits) {
        throw EnumerationTooLargeError(
            "exact p-value needs " +
            (support_size ? std::to_string(*support_size) : std::string("more than 2^64")) +
            " support points, above the enumeration cap of " +
            std::to_string(engine.enumeration_cap) + "; use a Monte Carlo engine");
      }
      return Route::Exact;
    case PValueEngine::Mode::MonteCarlo:
      return Route::MonteCarlo;
    case PValueEngine::Mode::Asymptotic:
      return Route::Asymptotic;
    case PValueEngine::Mode::Auto:
      if (fits) return Route::Exact;
      if (engine.budget >= kMinMonteCarloBudget) return Route::MonteCarlo;
      throw EnumerationTooLargeError(
          "support exceeds the enumeration cap and no Monte Carlo budget was given");
  }
  return Route::Exact;
}

bool all_equal(std::span<const double> v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

// Draws the arm-1 sum of `values` under a uniform CRD with n1 ones. Partial
// Fisher-Yates over the smaller arm; the scratch order carries over between
// draws, which leaves each draw a uniform subset.
class CrdSumSampler {
 public:
  CrdSumSampler(std::span<const double> values, std::size_t n1)
      : scratch_(values.begin(), values.end()),
        n1_(n1),
        pick_(std::min(n1, values.size() - n1)),
        total_(std::accumulate(values.begin(), values.end(), 0.0)) {}

  double draw(RngStream& rng) {
    const std::size_t n = scratch_.size();
    double picked = 0.0;
    for (std::size_t i = 0; i < pick_; ++i) {
      const std::size_t k = i + static_cast<std::size_t>(rng.bounded(n - i));
      std::swap(scratch_[i], scratch_[k]);
      picked += scratch_[i];
    }
    return pick_ == n1_ ? picked : total_ - picked;
  }

 private:
  std::vector<double> scratch_;
  std::size_t n1_;
  std::size_t pick_;
  double total_;
};

template <class Visit>
void for_each_crd_sum(std::span<const double> values, std::size_t n1, std::uint64_t cap,
                      Visit&& visit) {
  AssignmentDesign::uniform_crd(values.size(), n1).for_each_support(
      [&](std::span<const Treatment> labels, double) {
        double s = 0.0;
        for (std::size_t j = 0; j < labels.size(); ++j) {
          if (labels[j] == Treatment::One) s += values[j];
        }
        visit(s);
      },
      cap);
}

struct PValue {
  double p = 1.0;
  PValueKind kind = PValueKind::Exact;
  std::optional<double> stderr_estimate;
};

// Two-sided |D| tail of the difference in arm means over a uniform CRD on
// `values`. Shared by the permutation test and the Fisher randomization test
// under a uniform design, which is why their p-values coincide.
PValue crd_mean_difference_pvalue(std::span<const double> values, std::size_t n1,
                                  double observed, const PValueEngine& engine) {
  const std::size_t n = values.size();
  const double a = static_cast<double>(n1);
  const double b = static_cast<double>(n - n1);
  const double total = std::accumulate(values.begin(), values.end(), 0.0);
  auto diff = [&](double s1) { return s1 / a - (total - s1) / b; };
  const double scale = max_abs(values);

  const auto support = AssignmentDesign::uniform_crd(n, n1).support_size();
  const Route route = resolve_route(engine, support);
  if (route == Route::Asymptotic) {
    throw DomainError("no asymptotic reference distribution for the difference-in-means "
                      "randomization distribution; use exact or Monte Carlo");
  }
  if (route == Route::Exact) {
    std::uint64_t extreme = 0;
    for_each_crd_sum(values, n1, engine.enumeration_cap, [&](double s1) {
      if (at_least_as_extreme(diff(s1), observed, scale)) ++extreme;
    });
    return {static_cast<double>(extreme) / static_cast<double>(*support), PValueKind::Exact, {}};
  }
  RngStream rng(engine.seed);
  CrdSumSampler sampler(values, n1);
  const auto mc = monte_carlo_pvalue(
      observed, [&](RngStream& r) { return diff(sampler.draw(r)); }, engine.budget, rng, scale);
  return {mc.p, PValueKind::MonteCarlo, mc.standard_error};
}

// |D| tail over an arbitrary assignment design with fixed weights.
PValue design_pvalue(std::span<const double> values, const AssignmentDesign& design,
                     const WeightTable& weights, double observed,
                     const PValueEngine& engine) {
  const Route route = resolve_route(engine, design.support_size());
  // D3 weights are n times inclusion probabilities, so D3 lives on the scale
  // of n times the largest response over the smallest weight.
  double min_weight = std::numeric_limits<double>::infinity();
  for (double w : weights.arm1) if (w > 0.0) min_weight = std::min(min_weight, w);
  for (double w : weights.arm2) if (w > 0.0) min_weight = std::min(min_weight, w);
  const double scale = max_abs(values) * static_cast<double>(values.size()) / min_weight;
  if (route == Route::Asymptotic) {
    throw DomainError("no asymptotic reference distribution for the Fisher randomization "
                      "test; use exact or Monte Carlo");
  }
  if (route == Route::Exact) {
    double p = 0.0;
    design.for_each_support(
        [&](std::span<const Treatment> labels, double prob) {
          if (at_least_as_extreme(d_statistic(values, labels, weights), observed, scale)) p += prob;
        },
        engine.enumeration_cap);
    return {std::min(p, 1.0), PValueKind::Exact, {}};
  }
  RngStream rng(engine.seed);
  std::vector<Treatment> labels;
  const auto mc = monte_carlo_pvalue(
      observed,
      [&](RngStream& r) {
        design.sample_into(r, labels);
        return d_statistic(values, labels, weights);
      },
      engine.budget, rng, scale);
  return {mc.p, PValueKind::MonteCarlo, mc.standard_error};
}

TestReport base_report(std::string name, Hypothesis h, std::vector<Assumption> assumptions,
                       const ObservedExperiment& observed) {
  TestReport r;
  r.test = std::move(name);
  r.hypothesis = h;
  r.assumptions = std::move(assumptions);
  r.n1 = observed.n1();
  r.n2 = observed.n2();
  return r;
}

void apply(TestReport& report, const PValue& p) {
  report.p_value = std::clamp(p.p, 0.0, 1.0);
  report.p_value_kind = p.kind;
  report.mc_stderr = p.stderr_estimate;
}

double mean_difference(const ObservedExperiment& observed) {
  return d_statistic(observed.responses(), observed.assignment(),
                     resolve_weights(WeightFamily::w1(), observed.sample(), observed.assignment()));
}

void require_design_matches(const ObservedExperiment& observed, const AssignmentDesign& design) {
  if (design.n() != observed.size()) {
    throw DesignInvalidError("design covers samples of size " + std::to_string(design.n()) +
                             " but " + std::to_string(observed.size()) + " units were observed");
  }
  if (design.is_uniform_crd()) {
    if (design.crd_n1() != observed.n1()) {
      throw DesignInvalidError("observed assignment has n1=" + std::to_string(observed.n1()) +
                               " but the design assigns " + std::to_string(design.crd_n1()) +
                               " units to treatment 1");
    }
    return;
  }
  const auto points = design.explicit_points();
  const auto probs = design.explicit_probs();
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (points[k] == observed.assignment() && probs[k] > 0.0) return;
  }
  throw DesignInvalidError("observed assignment has zero probability under the design");
}

struct TStatistic {
  double d;
  double se;
};

TStatistic arm_summary_t(const ObservedExperiment& observed, bool pooled, double& df) {
  observed.require_arm_sizes(2);
  const auto a = observed.arm(Treatment::One);
  const auto b = observed.arm(Treatment::Two);
  const double v1 = sample_variance(a);
  const double v2 = sample_variance(b);
  const double d = mean_difference(observed);
  if (pooled) {
    df = static_cast<double>(a.size() + b.size() - 2);
    return {d, pooled_se(v1, a.size(), v2, b.size())};
  }
  const double se = welch_se(v1, a.size(), v2, b.size());
  if (se == 0.0) throw DegenerateDataError("Welch t test: both arms are constant (zero SE)");
  df = welch_df(v1, a.size(), v2, b.size());
  return {d, se};
}

}  // namespace

// Enumerations --------------------------------------------------------------

std::string_view to_string(Assumption a) noexcept {
  switch (a) {
    case A::A1: return "A1";
    case A::A2: return "A2";
    case A::A3: return "A3";
    case A::A4: return "A4";
    case A::A5: return "A5";
    case A::A6: return "A6";
    case A::A7: return "A7";
    case A::B1: return "B1";
    case A::B2: return "B2";
    case A::C1: return "C1";
    case A::C2: return "C2";
  }
  return "?";
}

std::string_view to_string(PValueKind k) noexcept {
  switch (k) {
    case PValueKind::Exact: return "exact";
    case PValueKind::MonteCarlo: return "monte_carlo";
    case PValueKind::Asymptotic: return "asymptotic";
  }
  return "?";
}

PValueEngine PValueEngine::exact(std::uint64_t cap) {
  return {Mode::Exact, 0, 0, cap};
}

PValueEngine PValueEngine::monte_carlo(std::uint64_t budget, std::uint64_t seed) {
  PValueEngine e{Mode::MonteCarlo, budget, seed, kDefaultEnumerationCap};
  e.validate();
  return e;
}

PValueEngine PValueEngine::asymptotic() { return {Mode::Asymptotic, 0, 0, kDefaultEnumerationCap}; }

PValueEngine PValueEngine::automatic(std::uint64_t budget, std::uint64_t seed, std::uint64_t cap) {
  PValueEngine e{Mode::Auto, budget, seed, cap};
  e.validate();
  return e;
}

void PValueEngine::validate() const {
  const bool needs_budget = mode == Mode::MonteCarlo || (mode == Mode::Auto && budget != 0);
  if (needs_budget && budget < kMinMonteCarloBudget) {
    throw DomainError("Monte Carlo budget must be at least 1000, got " + std::to_string(budget));
  }
}

// Process-based -------------------------------------------------------------

TestReport permutation_test(const ObservedExperiment& observed, const PValueEngine& engine) {
  observed.require_arm_sizes(1);
  TestReport r = base_report("permutation", Hypothesis::DUP, {A::A1, A::A2, A::A3}, observed);
  r.statistic = mean_difference(observed);
  r.degenerate = all_equal(observed.responses());
  apply(r, crd_mean_difference_pvalue(observed.responses(), observed.n1(), r.statistic, engine));
  return r;
}

TestReport wilcoxon_test(const ObservedExperiment& observed, const PValueEngine& engine) {
  observed.require_arm_sizes(1);
  TestReport r =
      base_report("wilcoxon", Hypothesis::DUP, {A::A1, A::A2, A::A3, A::A4}, observed);
  const auto ranks = rank_midranks(observed.responses());
  const double w = rank_sum_statistic(ranks, observed.assignment());
  r.statistic = w;
  if (all_equal(observed.responses())) {
    r.degenerate = true;
    r.p_value = 1.0;
    r.p_value_kind = engine.mode == PValueEngine::Mode::Asymptotic ? PValueKind::Asymptotic
                                                                   : PValueKind::Exact;
    return r;
  }
  const std::size_t n = observed.size();
  const std::size_t n1 = observed.n1();
  const double tol = kTailRelativeTolerance * std::abs(w);
  const auto support = AssignmentDesign::uniform_crd(n, n1).support_size();
  const Route route = resolve_route(engine, support);

  if (route == Route::Asymptotic) {
    // Normal approximation with tie and continuity corrections.
    const double nn = static_cast<double>(n);
    const double a = static_cast<double>(n1);
    const double b = static_cast<double>(n - n1);
    auto sorted = std::vector<double>(observed.responses().begin(), observed.responses().end());
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0.0;
    for (std::size_t i = 0; i < n;) {
      std::size_t k = i;
      while (k < n && sorted[k] == sorted[i]) ++k;
      const double t = static_cast<double>(k - i);
      tie_term += t * t * t - t;
      i = k;
    }
    const double expected = a * (nn + 1.0) / 2.0;
    const double variance = a * b / 12.0 * ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
    const double centered = w - expected;
    const double corrected = centered - std::copysign(0.5, centered);
    const double z = centered == 0.0 ? 0.0 : corrected / std::sqrt(variance);
    r.p_value = std::min(1.0, 2.0 * std::min(normal_cdf(z), normal_cdf(-z)));
    r.p_value_kind = PValueKind::Asymptotic;
    return r;
  }

  if (route == Route::Exact) {
    std::uint64_t upper = 0;
    std::uint64_t lower = 0;
    for_each_crd_sum(ranks, n1, engine.enumeration_cap, [&](double s) {
      if (s >= w - tol) ++upper;
      if (s <= w + tol) ++lower;
    });
    const double m = static_cast<double>(*support);
    r.p_value = std::min(1.0, 2.0 * static_cast<double>(std::min(upper, lower)) / m);
    r.p_value_kind = PValueKind::Exact;
    return r;
  }

  if (engine.budget < kMinMonteCarloBudget) throw DomainError("Monte Carlo budget must be at least 1000");
  RngStream rng(engine.seed);
  CrdSumSampler sampler(ranks, n1);
  std::uint64_t upper = 0;
  std::uint64_t lower = 0;
  for (std::uint64_t i = 0; i < engine.budget; ++i) {
    const double s = sampler.draw(rng);
    if (s >= w - tol) ++upper;
    if (s <= w + tol) ++lower;
  }
  const double denom = static_cast<double>(engine.budget + 1);
  const double tail = static_cast<double>(std::min(upper, lower) + 1) / denom;
  r.p_value = std::min(1.0, 2.0 * tail);
  r.p_value_kind = PValueKind::MonteCarlo;
  r.mc_stderr = 2.0 * std::sqrt(tail * (1.0 - tail) / static_cast<double>(engine.budget));
  return r;
}

TestReport welch_t_test(const ObservedExperiment& observed) {
  TestReport r =
      base_report("welch-t", Hypothesis::EUP, {A::A1, A::A2, A::A3, A::A5}, observed);
  double df = 0.0;
  const auto t = arm_summary_t(observed, false, df);
  r.statistic = t.d / t.se;
  r.p_value = student_t_two_sided_p(r.statistic, df);
  r.p_value_kind = PValueKind::Asymptotic;
  return r;
}

TestReport pooled_t_test(const ObservedExperiment& observed) {
  TestReport r =
      base_report("pooled-t", Hypothesis::EUP, {A::A1, A::A2, A::A3, A::A6}, observed);
  double df = 0.0;
  const auto t = arm_summary_t(observed, true, df);
  if (t.se == 0.0) throw DegenerateDataError("pooled t test: both arms are constant (zero SE)");
  r.statistic = t.d / t.se;
  r.p_value = student_t_two_sided_p(r.statistic, df);
  // Exact t reference under normal errors with a common variance.
  r.p_value_kind = PValueKind::Exact;
  return r;
}

// Randomization-based -------------------------------------------------------

TestReport fisher_randomization_test(const ObservedExperiment& observed,
                                     const AssignmentDesign& design,
                                     const PValueEngine& engine) {
  observed.require_arm_sizes(1);
  require_design_matches(observed, design);
  TestReport r =
      base_report("fisher-randomization", Hypothesis::RUs, {A::B1, A::B2}, observed);
  const auto weights =
      resolve_weights(WeightFamily::w3(design), observed.sample(), observed.assignment());
  r.statistic = d_statistic(observed.responses(), observed.assignment(), weights);
  r.degenerate = all_equal(observed.responses());
  // Under the sample sharp null both potentials of every sampled unit equal
  // its observed response, so the imputed response vector is the observed
  // one under every reassignment.
  if (design.is_uniform_crd()) {
    apply(r, crd_mean_difference_pvalue(observed.responses(), observed.n1(), r.statistic, engine));
  } else {
    apply(r, design_pvalue(observed.responses(), design, weights, r.statistic, engine));
  }
  return r;
}

TestReport neyman_randomization_test(const ObservedExperiment& observed,
                                     const AssignmentDesign& design) {
  if (!design.is_uniform_crd()) {
    // neyman_se raises the structured error; call it for the message.
    neyman_se(observed, design);
  }
  require_design_matches(observed, design);
  TestReport r =
      base_report("neyman-randomization", Hypothesis::RAs, {A::B1, A::B2}, observed);
  const auto weights =
      resolve_weights(WeightFamily::w3(design), observed.sample(), observed.assignment());
  const double d = d_statistic(observed.responses(), observed.assignment(), weights);
  const double se = neyman_se(observed, design);
  r.p_value_kind = PValueKind::Asymptotic;
  if (se == 0.0) {
    if (d != 0.0) {
      throw DegenerateDataError("Neyman randomization test: both arms constant with unequal "
                                "means (zero standard error)");
    }
    r.statistic = 0.0;
    r.p_value = 1.0;
    r.degenerate = true;
    return r;
  }
  r.statistic = d / se;
  r.p_value = normal_two_sided_p(r.statistic);
  return r;
}

TestReport fisher_exact_2x2(const ObservedExperiment& observed) {
  observed.require_arm_sizes(1);
  for (double y : observed.responses()) {
    if (y != 0.0 && y != 1.0) {
      throw DomainError("fisher_exact_2x2 requires binary (0/1) responses");
    }
  }
  TestReport r = base_report("fisher-exact-2x2", Hypothesis::RUs, {A::B1, A::B2}, observed);
  const auto n = static_cast<long>(observed.size());
  const auto n1 = static_cast<long>(observed.n1());
  long successes = 0;
  long arm1_successes = 0;
  for (std::size_t j = 0; j < observed.size(); ++j) {
    if (observed.responses()[j] == 1.0) {
      ++successes;
      if (observed.assignment()[j] == Treatment::One) ++arm1_successes;
    }
  }
  r.statistic = static_cast<double>(arm1_successes);
  // Hypergeometric law of the arm-1 success count given both margins.
  auto log_choose = [](long a, long b) {
    return log_gamma(static_cast<double>(a + 1)) - log_gamma(static_cast<double>(b + 1)) -
           log_gamma(static_cast<double>(a - b + 1));
  };
  const long lo = std::max(0L, n1 - (n - successes));
  const long hi = std::min(n1, successes);
  std::vector<double> probs;
  for (long x = lo; x <= hi; ++x) {
    probs.push_back(std::exp(log_choose(successes, x) + log_choose(n - successes, n1 - x) -
                             log_choose(n, n1)));
  }
  const double observed_prob = probs[static_cast<std::size_t>(arm1_successes - lo)];
  // Tables no more probable than the observed one; the relative slack keeps
  // tables of equal probability from being dropped by rounding.
  const double cutoff = observed_prob * (1.0 + 1e-7);
  double p = 0.0;
  for (double q : probs) {
    if (q <= cutoff) p += q;
  }
  r.p_value = std::min(1.0, p);
  r.p_value_kind = PValueKind::Exact;
  r.degenerate = successes == 0 || successes == n;
  return r;
}

// Selection-based -----------------------------------------------------------

TestReport neyman_selection_test(const ObservedExperiment& observed,
                                 const SelectionDesign& design) {
  const auto n1 = design.census_crd_n1();
  if (!n1) {
    throw UnsupportedDesignError(
        "Neyman selection test is implemented only when the sample is the whole population "
        "(census) with a uniform completely randomized assignment; no variance estimator is "
        "available for other selection designs");
  }
  if (observed.size() != design.population_size() ||
      observed.sample().size() != design.population_size()) {
    throw DesignInvalidError("census design: the observed sample must contain all " +
                             std::to_string(design.population_size()) + " units");
  }
  if (observed.n1() != *n1) {
    throw DesignInvalidError("observed assignment has n1=" + std::to_string(observed.n1()) +
                             " but the design assigns " + std::to_string(*n1));
  }
  TestReport r = base_report("neyman-selection", Hypothesis::RAP, {A::C1, A::C2}, observed);
  const auto weights =
      resolve_weights(WeightFamily::w23(design), observed.sample(), observed.assignment());
  const double d = d_statistic(observed.responses(), observed.assignment(), weights);
  // With S = P the selection variance reduces to the randomization one.
  const double se =
      neyman_se(observed, AssignmentDesign::uniform_crd(observed.size(), observed.n1()));
  r.p_value_kind = PValueKind::Asymptotic;
  if (se == 0.0) {
    if (d != 0.0) {
      throw DegenerateDataError("Neyman selection test: both arms constant with unequal means");
    }
    r.statistic = 0.0;
    r.p_value = 1.0;
    r.degenerate = true;
    return r;
  }
  r.statistic = d / se;
  r.p_value = normal_two_sided_p(r.statistic);
  return r;
}

TestReport fisher_selection_test(const ObservedExperiment&, const SelectionDesign&) {
  throw NoncomputableDistributionError(
      "Fisher selection test: under the population sharp null H0^RUP the reference "
      "distribution is known but noncomputable, because y[1.P, 2.P] is not determined by the "
      "observed data (both potentials of every unsampled unit are unobserved). Use "
      "fisher_randomization_test (sample sharp null H0^RUs) or neyman_selection_test "
      "(population average null H0^RAP) instead.");
}

}  // namespace randcompare
