#include <gtest/gtest.h>

#include <numeric>

#include "randcompare/error.hpp"
#include "randcompare/experiment.hpp"
#include "randcompare/io.hpp"
#include "randcompare/rng.hpp"

namespace randcompare {
namespace {

TEST(PotentialTable, RejectsMismatchedOrEmptyOrNonFinite) {
  EXPECT_THROW(PotentialTable({1, 2}, {1}), DataError);
  EXPECT_THROW(PotentialTable({}, {}), DataError);
  EXPECT_THROW(PotentialTable({1, std::nan("")}, {1, 2}), Error);
}

TEST(PotentialTable, AtIsOneBasedAndBoundsChecked) {
  const PotentialTable y({1, 2, 3}, {4, 5, 6});
  EXPECT_EQ(y.at(Treatment::One, 1), 1);
  EXPECT_EQ(y.at(Treatment::Two, 3), 6);
  EXPECT_THROW(y.at(Treatment::One, 0), BoundsError);
  EXPECT_THROW(y.at(Treatment::One, 4), BoundsError);
}

TEST(SampleVector, RejectsDuplicatesAndZero) {
  EXPECT_THROW(SampleVector({1, 1}), DataError);
  EXPECT_THROW(SampleVector({0, 1}), Error);
  EXPECT_THROW(SampleVector(std::vector<UnitId>{}), Error);
  EXPECT_EQ(SampleVector::census(4).size(), 4u);
}

TEST(AssignmentVector, FromIntsRejectsOtherLabels) {
  const std::vector<int> bad{1, 3};
  EXPECT_THROW(AssignmentVector::from_ints(bad), Error);
  const auto b = AssignmentVector::blocks(2, 3);
  EXPECT_EQ(b.n1(), 2u);
  EXPECT_EQ(b.n2(), 3u);
  EXPECT_EQ(b[0], Treatment::One);
  EXPECT_EQ(b[4], Treatment::Two);
}

TEST(SelectComponents, IndexesByAssignmentAndSample) {
  const PotentialTable y({1, 2, 3}, {4, 5, 6});
  const std::vector<int> t{1, 2};
  const auto r = select_components(y, SampleVector({1, 3}), AssignmentVector::from_ints(t));
  EXPECT_EQ(r, (std::vector<double>{1, 6}));
}

TEST(SelectComponents, ConstantTableGivesConstantVector) {
  const PotentialTable y(std::vector<double>(5, 7.5), std::vector<double>(5, -1.0));
  const std::vector<int> t(3, 1);
  const auto r = select_components(y, SampleVector({5, 2, 4}), AssignmentVector::from_ints(t));
  EXPECT_EQ(r, std::vector<double>(3, 7.5));
}

TEST(SelectComponents, RejectsLengthMismatchAndOutOfRangeUnits) {
  const PotentialTable y({1, 2, 3}, {4, 5, 6});
  const std::vector<int> t{1, 2, 1};
  EXPECT_THROW(select_components(y, SampleVector({1, 2}), AssignmentVector::from_ints(t)),
               DataError);
  const std::vector<int> t2{1, 2};
  EXPECT_THROW(select_components(y, SampleVector({1, 9}), AssignmentVector::from_ints(t2)),
               BoundsError);
}

// Applying the selection through a nested sample equals composing the index
// maps first.
TEST(SelectComponents, NestedSelectionComposes) {
  RngStream rng(3);
  std::vector<double> y1(9);
  std::vector<double> y2(9);
  for (std::size_t i = 0; i < 9; ++i) {
    y1[i] = rng.uniform();
    y2[i] = rng.uniform();
  }
  const PotentialTable y(y1, y2);
  const SampleVector outer({9, 4, 7, 1, 2});
  const std::vector<UnitId> inner_pos{3, 5, 1};
  const std::vector<int> t{2, 1, 2};
  const auto a = AssignmentVector::from_ints(t);

  std::vector<double> z1;
  std::vector<double> z2;
  for (UnitId u : outer.indices()) {
    z1.push_back(y.at(Treatment::One, u));
    z2.push_back(y.at(Treatment::Two, u));
  }
  const auto nested = select_components(PotentialTable(z1, z2), SampleVector(inner_pos), a);
  std::vector<UnitId> composed;
  for (UnitId p : inner_pos) composed.push_back(outer[p - 1]);
  EXPECT_EQ(nested, select_components(y, SampleVector(composed), a));
}

TEST(Observe, CellPhoneFirstValue) {
  const auto ds = read_dataset_csv(RANDCOMPARE_DATA_DIR "/cellphone.csv");
  EXPECT_EQ(ds.observed.responses()[0], 636.0);
  EXPECT_EQ(ds.observed.n1(), 32u);
  EXPECT_EQ(ds.observed.n2(), 32u);
}

TEST(ObservedExperiment, FromArmsAndArmAccess) {
  const std::vector<double> a{1, 2};
  const std::vector<double> b{3, 4, 5};
  const auto obs = ObservedExperiment::from_arms(a, b);
  EXPECT_EQ(obs.arm(Treatment::One), a);
  EXPECT_EQ(obs.arm(Treatment::Two), b);
  EXPECT_THROW(obs.require_arm_sizes(3), DataError);
  EXPECT_NO_THROW(obs.require_arm_sizes(2));
}

TEST(RealizedEffects, Examples) {
  const PotentialTable same({1, 2, 3}, {1, 2, 3});
  const auto e0 = realized_effects(same, SampleVector::census(3));
  for (double d : e0.unit_effects) EXPECT_EQ(d, 0.0);

  const PotentialTable shifted({3, 4, 7}, {1, 2, 5});
  const auto e2 = realized_effects(shifted, SampleVector({1, 3}));
  for (double d : e2.unit_effects) EXPECT_EQ(d, 2.0);
  EXPECT_DOUBLE_EQ(e2.aggregate_sample, 2.0);
  EXPECT_DOUBLE_EQ(e2.aggregate_population, 2.0);

  const PotentialTable hand({1, 5}, {2, 2});
  const auto e = realized_effects(hand, SampleVector({1, 2}));
  EXPECT_EQ(e.unit_effects, (std::vector<double>{-1, 3}));
  EXPECT_DOUBLE_EQ(e.aggregate_sample, 1.0);
}

TEST(RealizedEffects, AggregateIsMeanOfUnitEffects) {
  RngStream rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> y1(12);
    std::vector<double> y2(12);
    for (std::size_t i = 0; i < 12; ++i) {
      y1[i] = 100 * rng.uniform();
      y2[i] = 100 * rng.uniform();
    }
    const SampleVector s({2, 5, 6, 11, 12});
    const auto e = realized_effects(PotentialTable(y1, y2), s);
    const double m = std::accumulate(e.unit_effects.begin(), e.unit_effects.end(), 0.0) /
                     static_cast<double>(e.unit_effects.size());
    EXPECT_NEAR(e.aggregate_sample, m, 1e-12);
  }
}

TEST(Hypothesis, ImplicationExamples) {
  EXPECT_TRUE(hypothesis_implies(Hypothesis::UP, Hypothesis::EUP));
  EXPECT_TRUE(hypothesis_implies(Hypothesis::RUs, Hypothesis::RAs));
  EXPECT_FALSE(hypothesis_implies(Hypothesis::RAP, Hypothesis::RAs));
  EXPECT_TRUE(hypothesis_implies(Hypothesis::UP, Hypothesis::RAs));
  EXPECT_FALSE(hypothesis_implies(Hypothesis::EUP, Hypothesis::DUP));
  EXPECT_FALSE(hypothesis_implies(Hypothesis::DUP, Hypothesis::RUP));
}

TEST(Hypothesis, ImplicationIsReflexiveAndTransitive) {
  for (Hypothesis a : kAllHypotheses) {
    EXPECT_TRUE(hypothesis_implies(a, a));
    for (Hypothesis b : kAllHypotheses) {
      for (Hypothesis c : kAllHypotheses) {
        if (hypothesis_implies(a, b) && hypothesis_implies(b, c)) {
          EXPECT_TRUE(hypothesis_implies(a, c))
              << to_string(a) << " " << to_string(b) << " " << to_string(c);
        }
      }
      if (a != b && hypothesis_implies(a, b)) EXPECT_FALSE(hypothesis_implies(b, a));
    }
  }
}

TEST(Hypothesis, TagsRoundTrip) {
  for (Hypothesis h : kAllHypotheses) {
    EXPECT_EQ(parse_hypothesis(to_string(h)), h);
    EXPECT_FALSE(description(h).empty());
  }
  EXPECT_FALSE(parse_hypothesis("XYZ").has_value());
}

}  // namespace
}  // namespace randcompare
