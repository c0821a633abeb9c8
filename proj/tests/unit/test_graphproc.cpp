#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "matchmix/graphproc.hpp"
#include "matchmix/stats.hpp"

using namespace matchmix;
using namespace matchmix::graphproc;
using core::CycleStructure;

TEST(CliqueGraph, StartsAsSingletons) {
  CliqueGraph g(7);
  EXPECT_EQ(g.component_sizes(), std::vector<std::int32_t>(7, 1));
  EXPECT_EQ(g.largest(), 1);
  EXPECT_DOUBLE_EQ(giant_fraction(g), 1.0 / 7);
}

TEST(CliqueGraph, UniteCountsCallsAndTracksLargest) {
  CliqueGraph g(6);
  g.unite(0, 1);
  g.unite(2, 3);
  g.unite(1, 3);
  g.unite(0, 2);  // already joined
  EXPECT_EQ(g.union_calls(), 4u);
  EXPECT_EQ(g.largest(), 4);
  EXPECT_EQ(g.find(0), g.find(3));
  EXPECT_NE(g.find(0), g.find(4));
  auto s = g.component_sizes();
  std::sort(s.begin(), s.end(), std::greater<>());
  EXPECT_EQ(s, (std::vector<std::int32_t>{4, 1, 1}));
}

TEST(CliqueGraph, StepJoinsOneCliquePerCycle) {
  Rng rng = derive_stream(41, 0);
  CliqueGraph g(20);
  g.step(CycleStructure({9, 1, 0, 1}), rng);  // a 2-clique and a 4-clique
  auto s = g.component_sizes();
  std::sort(s.begin(), s.end(), std::greater<>());
  EXPECT_EQ(s[0], 4);
  EXPECT_EQ(s[1], 2);
  EXPECT_EQ(s[2], 1);
  EXPECT_EQ(g.union_calls(), 4u);
  EXPECT_EQ(g.rounds_applied(), 1u);
  EXPECT_THROW(g.step(CycleStructure({0, 11}), rng), std::invalid_argument);
  auto h = graph_step(g, CycleStructure({10}), rng);
  EXPECT_EQ(h.rounds_applied(), 2u);
  EXPECT_EQ(g.rounds_applied(), 1u);
}

TEST(CliqueGraph, CliqueMembersAreUniform) {
  Rng rng = derive_stream(41, 1);
  const int n = 6;
  std::vector<std::uint64_t> obs(n, 0);
  for (int i = 0; i < 60000; ++i) {
    CliqueGraph g(n);
    g.step(CycleStructure({4, 1}), rng);
    for (int v = 0; v < n; ++v)
      if (g.component_size(v) == 2) ++obs[static_cast<std::size_t>(v)];
  }
  EXPECT_GT(stats::chi_square(obs, std::vector<double>(n, 1.0 / n)).p_value, 1e-3);
}

TEST(ErGiant, FixedPoint) {
  EXPECT_EQ(er_giant_fraction(0.5), 0.0);
  EXPECT_EQ(er_giant_fraction(1.0), 0.0);
  for (double c : {1.5, 2.0, 4.0}) {
    double t = er_giant_fraction(c);
    EXPECT_NEAR(t, 1.0 - std::exp(-c * t), 1e-12);
    EXPECT_GT(t, 0.0);
  }
  EXPECT_NEAR(er_giant_fraction(2.0), 0.7968121300, 1e-9);
}

TEST(TranspositionGiant, MatchesErdosRenyi) {
  // gamma n random edges give mean degree 2 gamma.
  auto e = transposition_giant(20000, 1.0, 20, 3);
  EXPECT_NEAR(e.mean, er_giant_fraction(2.0), 0.01);
  EXPECT_EQ(e.rounds, 20000u);
}

TEST(ThetaHat, MonotoneInBetaAndBounded) {
  double prev = 0.0;
  for (double beta : {0.5, 1.0, 2.0, 4.0}) {
    auto e = theta_hat(5000, 3, beta, 8, 9);
    EXPECT_EQ(e.samples.size(), 8u);
    EXPECT_GE(e.mean + 3 * e.se() + 0.01, prev);
    EXPECT_LE(e.mean, 1.0);
    prev = e.mean;
  }
  EXPECT_GT(prev, 0.9);
  EXPECT_LT(theta_hat(5000, 3, 0.5, 8, 9).mean, 0.05);
}

TEST(ThetaHat, RoundsFollowTheTimeScale) {
  auto e = theta_hat(300, 2, 2.0, 1, 1);
  EXPECT_EQ(e.rounds, static_cast<std::uint64_t>(std::floor(2.0 * 300 / (4.0 / 3.0))));
  EXPECT_THROW(theta_hat(10, 1, 1.0, 1, 1), std::invalid_argument);
  EXPECT_THROW(theta_hat(10, 2, 0.0, 1, 1), std::invalid_argument);
}

TEST(QuenchedRun, TrajectoryIsNonDecreasing) {
  Rng rng = derive_stream(41, 2);
  std::vector<CycleStructure> sched(400, CycleStructure({97, 0, 1}));
  auto traj = quenched_graph_run(100, sched, rng);
  ASSERT_EQ(traj.size(), 400u);
  for (std::size_t i = 1; i < traj.size(); ++i) EXPECT_GE(traj[i], traj[i - 1]);
  EXPECT_DOUBLE_EQ(traj.back(), 1.0);
}

TEST(GiantEstimate, Summary) {
  auto e = summarize(1.0, 5, {0.2, 0.4, 0.6});
  EXPECT_DOUBLE_EQ(e.mean, 0.4);
  EXPECT_NEAR(e.sd, 0.2, 1e-12);
  EXPECT_NEAR(e.se(), 0.2 / std::sqrt(3.0), 1e-12);
  EXPECT_EQ(summarize(1.0, 0, {}).mean, 0.0);
}
