#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "matchmix/sampling.hpp"
#include "matchmix/stats.hpp"
#include "oracles.hpp"

using namespace matchmix;
using namespace matchmix::sampling;
using core::CycleStructure;
using core::PerfectMatching;

namespace {

// Ranks of the matchings of M_n with the given structure, by brute force.
std::map<std::uint64_t, std::size_t> class_of(std::int32_t n, const CycleStructure& c) {
  std::map<std::uint64_t, std::size_t> idx;
  for (const auto& p : oracle::all_matchings(n)) {
    auto lengths = oracle::cycle_lengths(n, p);
    std::vector<std::int64_t> l(lengths.begin(), lengths.end());
    if (CycleStructure::from_lengths(l) == c) idx.emplace(core::matching_rank(oracle::to_pm(n, p)), idx.size());
  }
  return idx;
}

double uniform_p(const std::vector<std::uint64_t>& obs) {
  return stats::chi_square(obs, std::vector<double>(obs.size(), 1.0 / static_cast<double>(obs.size()))).p_value;
}

}  // namespace

TEST(UniformMatching, TrivialAndUniformOnM2) {
  Rng rng = derive_stream(11, 0);
  EXPECT_EQ(sample_uniform_matching(1, rng), PerfectMatching::identity(1));
  std::vector<std::uint64_t> obs(3, 0);
  for (int i = 0; i < 300000; ++i) ++obs[core::matching_rank(sample_uniform_matching(2, rng))];
  EXPECT_GT(uniform_p(obs), 1e-3);
}

TEST(UniformMatching, FixedPointMeanOnM4) {
  Rng rng = derive_stream(11, 1);
  double sum = 0;
  const int N = 200000;
  for (int i = 0; i < N; ++i) sum += static_cast<double>(core::fixed_points(sample_uniform_matching(4, rng)));
  // k/(2k-1) = 4/7; the fixed-point count is at most 4 so sd < 1.
  EXPECT_NEAR(sum / N, 4.0 / 7.0, 4.0 / std::sqrt(N));
}

TEST(CycleViaSwaps, SmallCases) {
  Rng rng = derive_stream(12, 0);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(sample_uniform_cycle_via_swaps(1, rng), PerfectMatching::identity(1));
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    auto pm = sample_uniform_cycle_via_swaps(2, rng);
    EXPECT_EQ(core::cycle_structure(pm), CycleStructure({0, 1}));
    seen.insert(core::matching_rank(pm));
  }
  EXPECT_EQ(seen.size(), 2u);
}

TEST(CycleViaSwaps, UniformOnSingleCycleClass) {
  Rng rng = derive_stream(12, 1);
  for (int l : {3, 4, 5}) {
    auto idx = class_of(l, CycleStructure::from_lengths(std::vector<std::int64_t>{l}));
    // 2^(l-1) (l-1)! single cycles.
    std::size_t expect = 1;
    for (int i = 1; i < l; ++i) expect *= 2 * static_cast<std::size_t>(i);
    ASSERT_EQ(idx.size(), expect);
    std::vector<std::uint64_t> obs(idx.size(), 0);
    for (int i = 0; i < 200000; ++i) {
      auto it = idx.find(core::matching_rank(sample_uniform_cycle_via_swaps(l, rng)));
      ASSERT_NE(it, idx.end());
      ++obs[it->second];
    }
    EXPECT_GT(uniform_p(obs), 1e-3) << "l=" << l;
  }
}

TEST(KRematch, SupportLawForTwoOfFour) {
  Rng rng = derive_stream(13, 0);
  const int N = 300000;
  int zero = 0;
  for (int i = 0; i < N; ++i) {
    auto s = core::cycle_structure(sample_k_rematch(4, 2, rng)).support();
    ASSERT_TRUE(s == 0 || s == 2);
    zero += s == 0;
  }
  EXPECT_NEAR(static_cast<double>(zero) / N, 1.0 / 3.0, 4 * std::sqrt(2.0 / 9.0 / N));
}

TEST(KRematch, FullRematchIsUniform) {
  Rng rng = derive_stream(13, 1);
  std::vector<std::uint64_t> obs(15, 0);
  for (int i = 0; i < 300000; ++i) ++obs[core::matching_rank(sample_k_rematch(3, 3, rng))];
  EXPECT_GT(uniform_p(obs), 1e-3);
}

TEST(KRematch, MeanSupportMatchesKappa) {
  Rng rng = derive_stream(13, 2);
  std::vector<double> s(100000);
  for (auto& x : s) x = static_cast<double>(core::cycle_structure(sample_k_rematch(6, 3, rng)).support());
  auto m = stats::mean_se(s);
  EXPECT_LE(std::fabs(m.mean - 12.0 / 5.0), 3 * m.se);
}

TEST(KRematch, Errors) {
  Rng rng = derive_stream(13, 3);
  EXPECT_THROW(sample_k_rematch(3, 4, rng), std::invalid_argument);
  EXPECT_THROW(sample_k_rematch(3, 1, rng), std::invalid_argument);
}

TEST(RefreshTimes, Examples) {
  EXPECT_EQ(refresh_times(CycleStructure({0, 2})), (std::vector<std::int64_t>{1, 2}));
  EXPECT_EQ(refresh_times(CycleStructure({0, 0, 1})), (std::vector<std::int64_t>{1}));
  EXPECT_TRUE(refresh_times(CycleStructure({6})).empty());
  // Longest cycle first: a 4-cycle then a 2-cycle.
  EXPECT_EQ(refresh_times(CycleStructure({1, 1, 0, 1})), (std::vector<std::int64_t>{1, 4}));
}

TEST(ConditionalSequence, ShapeAndMarkerRules) {
  Rng rng = derive_stream(14, 0);
  for (int rep = 0; rep < 2000; ++rep) {
    CycleStructure c({0, 2});
    auto seq = swap_sequence_conditional(c, 4, rng);
    ASSERT_EQ(seq.steps.size(), 2u);
    EXPECT_TRUE(seq.refresh[0]);
    EXPECT_TRUE(seq.refresh[1]);
    std::set<std::int32_t> first{seq.steps[0].first, seq.steps[0].second};
    EXPECT_FALSE(first.count(seq.steps[1].first));
    EXPECT_FALSE(first.count(seq.steps[1].second));
    EXPECT_EQ(core::cycle_structure(apply_swap_sequence(seq, 4)), c);
  }
}

TEST(ConditionalSequence, SingleSwapUsesTwoDistinctSlots) {
  Rng rng = derive_stream(14, 1);
  std::map<std::pair<int, int>, int> seen;
  for (int rep = 0; rep < 20000; ++rep) {
    auto seq = swap_sequence_conditional(CycleStructure({3, 1}), 5, rng);
    ASSERT_EQ(seq.steps.size(), 1u);
    ASSERT_NE(seq.steps[0].first, seq.steps[0].second);
    ++seen[{std::min(seq.steps[0].first, seq.steps[0].second), std::max(seq.steps[0].first, seq.steps[0].second)}];
  }
  EXPECT_EQ(seen.size(), 10u);
}

TEST(ConditionalSequence, UniformOnItsClass) {
  Rng rng = derive_stream(14, 2);
  struct Case {
    int n;
    CycleStructure c;
  };
  for (const auto& [n, c] : {Case{3, CycleStructure({0, 0, 1})}, Case{5, CycleStructure({3, 1})},
                             Case{5, CycleStructure({0, 1, 1})}}) {
    auto idx = class_of(n, c);
    std::vector<std::uint64_t> obs(idx.size(), 0);
    for (int i = 0; i < 200000; ++i) {
      auto it = idx.find(core::matching_rank(apply_swap_sequence(swap_sequence_conditional(c, n, rng), n)));
      ASSERT_NE(it, idx.end());
      ++obs[it->second];
    }
    EXPECT_GT(uniform_p(obs), 1e-3) << c.to_string();
  }
}

TEST(RelaxedSequence, SingleSwapNeverViolates) {
  Rng rng = derive_stream(15, 0);
  for (int i = 0; i < 5000; ++i) {
    auto seq = swap_sequence_relaxed(CycleStructure({8, 1}), 10, rng);
    ASSERT_EQ(seq.steps.size(), 1u);
    EXPECT_FALSE(seq.violation);
    EXPECT_NE(seq.steps[0].first, seq.steps[0].second);
  }
}

TEST(RelaxedSequence, WithoutViolationItIsUniformOnTheClass) {
  // Conditioned on no violation the relaxed law is the conditional one,
  // which is uniform on the class.
  Rng rng = derive_stream(15, 1);
  const int n = 5;
  CycleStructure c({0, 1, 1});
  auto idx = class_of(n, c);
  std::vector<std::uint64_t> obs(idx.size(), 0);
  for (int i = 0; i < 300000; ++i) {
    auto seq = swap_sequence_relaxed(c, n, rng);
    if (seq.violation) continue;
    auto it = idx.find(core::matching_rank(apply_swap_sequence(seq, n)));
    ASSERT_NE(it, idx.end());
    ++obs[it->second];
  }
  EXPECT_GT(uniform_p(obs), 1e-3);
}

TEST(RelaxedSequence, ViolationFrequencyWithinBound) {
  Rng rng = derive_stream(15, 2);
  const int trials = 20000;
  int hits = 0;
  for (int i = 0; i < trials; ++i) hits += relaxed_window_violates(100, 10, 1, rng);
  double f = static_cast<double>(hits) / trials;
  EXPECT_LE(f, 0.2 + 3 * std::sqrt(0.2 * 0.8 / trials));
}

TEST(ExpectedSupport, ExactValues) {
  EXPECT_EQ(expected_support(2), (Rational{4, 3}));
  EXPECT_EQ(expected_support(3), (Rational{12, 5}));
  EXPECT_EQ(expected_support(1), (Rational{0, 1}));
  EXPECT_THROW(expected_support(0), std::invalid_argument);
  for (int k : {50, 100, 1000}) {
    double e = k - 0.5 - 0.25 / k;
    EXPECT_NEAR(expected_support(k).value(), e, 2.0 / (static_cast<double>(k) * k));
  }
}

TEST(RematchLaw, ExactForSmallK) {
  auto l2 = rematch_law(2);
  EXPECT_TRUE(l2.rho_exact);
  EXPECT_EQ(l2.rho_rational, (Rational{2, 3}));
  // Mean of d over M_3 by brute force.
  double total = 0;
  auto all = oracle::all_matchings(3);
  for (const auto& p : all) {
    auto lengths = oracle::cycle_lengths(3, p);
    for (int l : lengths) total += l - 1;
  }
  EXPECT_NEAR(rematch_law(3).rho, total / static_cast<double>(all.size()), 1e-12);
  EXPECT_EQ(rematch_law(3).kappa, (Rational{12, 5}));
}

TEST(RematchLaw, MonteCarloForLargeK) {
  auto l = rematch_law(10, 50000, 3);
  EXPECT_FALSE(l.rho_exact);
  EXPECT_GT(l.rho_se, 0.0);
  EXPECT_GT(l.rho, 0.0);
  EXPECT_LT(l.rho, l.kappa.value());
}
