#include <gtest/gtest.h>

#include <set>

#include "matchmix/matching.hpp"
#include "oracles.hpp"

using namespace matchmix::core;

namespace {

PerfectMatching pm_of(std::int32_t n, std::vector<Pair> pairs) { return PerfectMatching::from_pairs(n, pairs); }

}  // namespace

TEST(PerfectMatching, RejectsInvalidPartnerArrays) {
  EXPECT_THROW(PerfectMatching({1, 2}), std::invalid_argument);  // fixed points
  EXPECT_THROW(PerfectMatching({2, 3, 1, 4}), std::invalid_argument);
  EXPECT_THROW(PerfectMatching({2, 1, 4}), std::invalid_argument);
  EXPECT_NO_THROW(PerfectMatching({2, 1, 4, 3}));
  EXPECT_THROW(pm_of(2, {{1, 2}, {1, 3}}), std::invalid_argument);
}

TEST(PerfectMatching, IdentityAndPairs) {
  auto id = PerfectMatching::identity(3);
  EXPECT_EQ(id.pairs(), (std::vector<Pair>{{1, 2}, {3, 4}, {5, 6}}));
  auto m = pm_of(2, {{4, 1}, {3, 2}});
  EXPECT_EQ(m.pairs(), (std::vector<Pair>{{1, 4}, {2, 3}}));
  EXPECT_TRUE(m.contains({1, 4}));
  EXPECT_FALSE(m.contains({1, 2}));
}

TEST(CycleStructure, WorkedExamples) {
  EXPECT_EQ(cycle_structure(pm_of(4, {{1, 3}, {2, 4}, {5, 7}, {6, 8}})).counts(), (std::vector<std::int64_t>{0, 2}));
  EXPECT_EQ(cycle_structure(pm_of(4, {{1, 4}, {2, 6}, {3, 5}, {7, 8}})).counts(),
            (std::vector<std::int64_t>{1, 0, 1}));
  EXPECT_EQ(cycle_structure(PerfectMatching::identity(7)).counts(), (std::vector<std::int64_t>{7}));
}

TEST(CycleStructure, SupportAndDistance) {
  EXPECT_EQ(support(CycleStructure({0, 2})), 4);
  EXPECT_EQ(support(CycleStructure({1, 0, 1})), 3);
  EXPECT_EQ(support(CycleStructure({9})), 0);
  EXPECT_EQ(swap_distance(CycleStructure({0, 0, 0, 1})), 3);
  EXPECT_EQ(swap_distance(CycleStructure({1, 0, 1})), 2);
  EXPECT_EQ(swap_distance(CycleStructure({9})), 0);
  EXPECT_EQ(CycleStructure({0, 2}), CycleStructure({0, 2, 0, 0}));  // trailing zeros dropped
}

TEST(CycleStructure, MatchesUnionFindOracleOnAllOfM5) {
  for (const auto& p : oracle::all_matchings(5)) {
    auto lengths = oracle::cycle_lengths(5, p);
    auto c = cycle_structure(oracle::to_pm(5, p));
    std::vector<std::int32_t> blocks(lengths.begin(), lengths.end());
    ASSERT_EQ(partition_of(c), Partition(blocks));
    EXPECT_EQ(c.n(), 5);
    EXPECT_EQ(c.support() + c.count(1), 5);
    EXPECT_EQ(c.swap_distance(), c.support() - c.nontrivial_cycles());
  }
}

TEST(PartitionOf, Examples) {
  EXPECT_EQ(partition_of(pm_of(4, {{1, 4}, {2, 6}, {3, 5}, {7, 8}})), Partition({3, 1}));
  EXPECT_EQ(partition_of(PerfectMatching::identity(4)), Partition::ones(4));
  EXPECT_EQ(partition_of(CycleStructure({0, 2})), Partition({2, 2}));
}

TEST(SwapDistance, Examples) {
  auto a = pm_of(4, {{1, 3}, {2, 4}, {5, 7}, {6, 8}});
  EXPECT_EQ(swap_distance_between(a, a), 0);
  EXPECT_EQ(swap_distance_between(PerfectMatching::identity(4), a), 2);
  EXPECT_THROW(swap_distance_between(a, PerfectMatching::identity(3)), std::invalid_argument);
}

TEST(SwapDistance, EqualsSwapGraphDistanceOnM3AndM4) {
  for (int n : {3, 4}) {
    auto all = oracle::all_matchings(n);
    auto d = oracle::swap_graph_distances(all);
    for (std::size_t i = 0; i < all.size(); ++i)
      for (std::size_t j = 0; j < all.size(); ++j)
        ASSERT_EQ(swap_distance_between(oracle::to_pm(n, all[i]), oracle::to_pm(n, all[j])), d[i][j]);
  }
}

TEST(SwapDistance, IsAMetricOnM3) {
  auto all = enumerate_matchings(3);
  for (const auto& a : all)
    for (const auto& b : all) {
      auto dab = swap_distance_between(a, b);
      EXPECT_EQ(dab, swap_distance_between(b, a));
      EXPECT_EQ(dab == 0, a == b);
      for (const auto& c : all) EXPECT_LE(swap_distance_between(a, c), dab + swap_distance_between(b, c));
    }
}

TEST(Relabel, SendsReferenceToIdentity) {
  auto b = pm_of(3, {{1, 5}, {2, 3}, {4, 6}});
  auto sigma = relabel_to_identity(b);
  EXPECT_EQ(conjugate(b, sigma), PerfectMatching::identity(3));
  auto a = pm_of(3, {{1, 2}, {3, 4}, {5, 6}});
  EXPECT_EQ(cycle_structure(conjugate(a, sigma)), relative_cycle_structure(a, b));
  EXPECT_EQ(conjugate(conjugate(a, sigma), sigma.inverse()), a);
}

TEST(ApplySwap, FigureExamples) {
  auto m = PerfectMatching::identity(2);
  EXPECT_EQ(apply_swap(m, {1, 2}, {3, 4}, SwapChoice::kCross), pm_of(2, {{1, 4}, {2, 3}}));
  EXPECT_EQ(apply_swap(m, {1, 2}, {3, 4}, SwapChoice::kBar), pm_of(2, {{1, 3}, {2, 4}}));
}

TEST(ApplySwap, TwoSwapsOnTheSamePairsStayWithinThreePairings) {
  auto start = PerfectMatching::identity(2);
  std::set<std::vector<Pair>> seen;
  for (auto c1 : {SwapChoice::kBar, SwapChoice::kCross}) {
    auto m1 = apply_swap(start, {1, 2}, {3, 4}, c1);
    auto ps = m1.pairs();
    for (auto c2 : {SwapChoice::kBar, SwapChoice::kCross}) seen.insert(apply_swap(m1, ps[0], ps[1], c2).pairs());
  }
  EXPECT_EQ(seen.size(), 3u);
}

TEST(ApplySwap, Errors) {
  auto m = PerfectMatching::identity(3);
  EXPECT_THROW(apply_swap(m, {1, 3}, {2, 4}, SwapChoice::kBar), std::invalid_argument);
  EXPECT_THROW(apply_swap(m, {1, 2}, {1, 2}, SwapChoice::kBar), std::invalid_argument);
}

TEST(Enumeration, CountsAreDoubleFactorials) {
  EXPECT_EQ(enumerate_matchings(1), std::vector<PerfectMatching>{PerfectMatching::identity(1)});
  EXPECT_EQ(enumerate_matchings(2).size(), 3u);
  EXPECT_EQ(enumerate_matchings(4).size(), 105u);
  for (int n = 1; n <= 8; ++n) {
    std::uint64_t count = 0;
    for_each_matching(n, [&](const PerfectMatching&) { ++count; });
    EXPECT_EQ(count, oracle::double_factorial_odd(n));
    EXPECT_EQ(matching_count(n), oracle::double_factorial_odd(n));
  }
}

TEST(Enumeration, CapIsEnforced) {
  EXPECT_THROW(enumerate_matchings(9), std::length_error);
  EXPECT_THROW(for_each_matching(9, [](const PerfectMatching&) {}), std::length_error);
  EXPECT_THROW(matching_count(40), std::overflow_error);
}

TEST(Enumeration, DistinctAndRankedInOrder) {
  auto all = enumerate_matchings(5);
  std::set<std::vector<Pair>> distinct;
  for (std::size_t i = 0; i < all.size(); ++i) {
    distinct.insert(all[i].pairs());
    EXPECT_EQ(matching_rank(all[i]), i);
    EXPECT_EQ(matching_unrank(5, i), all[i]);
  }
  EXPECT_EQ(distinct.size(), all.size());
  EXPECT_EQ(matching_rank(PerfectMatching::identity(5)), 0u);
}

TEST(IntegerPartitions, CountsAndOrder) {
  const std::size_t p[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42};
  for (int n = 1; n <= 10; ++n) {
    auto parts = integer_partitions(n);
    EXPECT_EQ(parts.size(), p[n]);
    EXPECT_EQ(parts.back(), Partition::ones(n));
    EXPECT_EQ(parts.front(), Partition({n}));
  }
}

TEST(LabelPermutation, RejectsNonBijections) {
  EXPECT_THROW(LabelPermutation({1, 1}), std::invalid_argument);
  EXPECT_NO_THROW(LabelPermutation({2, 1}));
}
