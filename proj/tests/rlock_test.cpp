#include <gtest/gtest.h>

#include "rme/explore.hpp"
#include "rme/rlock.hpp"
#include "rme/runtime.hpp"
#include "rme/stats.hpp"

namespace rme {
namespace {

Options rlock_options(int n, int k, int sp) {
  Options o;
  o.algo = Algo::RLock;
  o.n = n;
  o.k = k;
  o.max_super_passages = sp;
  return o;
}

TEST(RLockLayout, TournamentGeometryOracle) {
  Memory mem(CostModel::DSM, 4);
  RLockLayout L = build_rlock(mem, 4, 0, 4);
  EXPECT_EQ(L.depth, 2);
  EXPECT_EQ(L.leaves, 4);
  // Heap order: ports 0,1 meet at node 2, ports 2,3 at node 3, winners at node 1.
  EXPECT_EQ(L.node_index(0, 0), 2);
  EXPECT_EQ(L.node_index(0, 1), 2);
  EXPECT_EQ(L.node_index(0, 3), 3);
  EXPECT_EQ(L.node_index(1, 2), 1);
  EXPECT_EQ(L.side(0, 0), 0);
  EXPECT_EQ(L.side(0, 1), 1);
  EXPECT_EQ(L.side(1, 1), 0);
  EXPECT_EQ(L.side(1, 2), 1);
  EXPECT_EQ(L.go.size(), 4u);
  for (Pid p = 0; p < 4; ++p) EXPECT_EQ(mem.owner(L.go_cell(p)), p);
}

TEST(RLockLayout, NonPowerOfTwoRoundsUp) {
  Memory mem(CostModel::DSM, 3);
  RLockLayout L = build_rlock(mem, 3, 0, 3);
  EXPECT_EQ(L.depth, 2);
  EXPECT_EQ(L.leaves, 4);
}

TEST(RLockStep, SinglePortIsOneFreeStep) {
  Memory mem(CostModel::DSM, 1);
  RLockLayout L = build_rlock(mem, 1, 0, 1);
  EXPECT_EQ(L.depth, 0);
  TraceEvent ev;
  StepCtx c{mem, 0, ev};
  LockRegs r;
  EXPECT_TRUE(rlock_acquire_step(c, L, r, 0));
  r = {};
  EXPECT_TRUE(rlock_release_step(c, L, r, 0));
  EXPECT_EQ(ev.rmr, 0);
  EXPECT_EQ(ev.nops, 0);
}

TEST(RLockStep, SoloAcquireHoldsEveryLevel) {
  Memory mem(CostModel::DSM, 4);
  RLockLayout L = build_rlock(mem, 4, 0, 4);
  LockRegs r;
  int steps = 0;
  bool held = false;
  while (!held && steps < 100) {
    TraceEvent ev;
    StepCtx c{mem, 2, ev};
    held = rlock_acquire_step(c, L, r, 2);
    ++steps;
  }
  ASSERT_TRUE(held);
  for (int lvl = 0; lvl < L.depth; ++lvl) {
    EXPECT_EQ(mem.peek(L.phase_cell(lvl, 2)), Value::integer(kPhaseAcquired)) << lvl;
    EXPECT_TRUE(mem.peek(L.flag(lvl, 2, L.side(lvl, 2))).is_true()) << lvl;
  }
  r = {};
  bool released = false;
  for (int i = 0; i < 100 && !released; ++i) {
    TraceEvent ev;
    StepCtx c{mem, 2, ev};
    released = rlock_release_step(c, L, r, 2);
  }
  ASSERT_TRUE(released);
  for (int lvl = 0; lvl < L.depth; ++lvl) {
    EXPECT_FALSE(mem.peek(L.flag(lvl, 2, L.side(lvl, 2))).is_true()) << lvl;
  }
}

TEST(RLockExplore, TwoPortsTwoSuperPassagesOneCrash) {
  ExploreBounds b;
  b.max_crashes_per_proc = 1;
  ExploreReport r = explore(make_world(rlock_options(2, 2, 2)), b, MonitorLimits{}, {});
  EXPECT_FALSE(r.truncated);
  EXPECT_FALSE(r.violation.has_value()) << r.violation->kind << ": " << r.violation->detail;
  EXPECT_GT(r.states, 1000u);
}

TEST(RLockExplore, SharedPortIsExplored) {
  ExploreBounds b;
  b.max_crashes_per_proc = 1;
  ExploreReport r = explore(make_world(rlock_options(2, 1, 2)), b, MonitorLimits{}, {});
  EXPECT_FALSE(r.truncated);
  EXPECT_FALSE(r.violation.has_value()) << r.violation->kind << ": " << r.violation->detail;
}

class RLockRandom : public ::testing::TestWithParam<std::tuple<int, int, uint64_t>> {};

TEST_P(RLockRandom, MutualExclusionAndProgressUnderCrashes) {
  auto [n, k, seed] = GetParam();
  RunOptions ro;
  ro.steps = 50000;
  ro.seed = seed;
  ro.crash_prob = 0.01;
  ro.crash_stop = 30000;
  RunResult r = run_random(make_world(rlock_options(n, k, 0)), ro);
  EXPECT_TRUE(r.violations.empty()) << r.violations.front().kind << ": " << r.violations.front().detail;
  EXPECT_TRUE(r.starved.empty());
  Stats s = stats_of(r.trace);
  for (Pid p = 0; p < n; ++p) EXPECT_GT(s.cs_by_pid.at(static_cast<size_t>(p)), 0u) << "p" << p;
}

INSTANTIATE_TEST_SUITE_P(Sizes, RLockRandom,
                         ::testing::Values(std::tuple{4, 4, 1ull}, std::tuple{4, 4, 2ull}, std::tuple{8, 8, 3ull},
                                           std::tuple{8, 3, 4ull}, std::tuple{5, 5, 5ull}));

TEST(RLockWorld, RejectsMorePortsThanProcesses) {
  EXPECT_THROW(make_world(rlock_options(2, 3, 1)), std::invalid_argument);
  EXPECT_THROW(make_world(rlock_options(2, 0, 1)), std::invalid_argument);
}

}  // namespace
}  // namespace rme
