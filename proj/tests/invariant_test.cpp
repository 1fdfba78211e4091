#include <gtest/gtest.h>

#include "fault_cases.hpp"
#include "rme/explore.hpp"
#include "rme/invariant.hpp"
#include "rme/runtime.hpp"

namespace rme {
namespace {

Options queue_options(int n, int k, int sp = 0) {
  Options o;
  o.algo = Algo::Queue;
  o.n = n;
  o.k = k;
  o.max_super_passages = sp;
  return o;
}

TEST(InvariantLevels, ParseAndCount) {
  EXPECT_EQ(parse_check_level("off"), CheckLevel::Off);
  EXPECT_EQ(parse_check_level("core"), CheckLevel::Core);
  EXPECT_EQ(parse_check_level("extended"), CheckLevel::Extended);
  EXPECT_THROW(parse_check_level("all"), std::invalid_argument);
  EXPECT_EQ(invariant_check(CheckLevel::Off), nullptr);
  Configuration c = make_world(queue_options(2, 2));
  EXPECT_TRUE(check(c, CheckLevel::Off).empty());
  EXPECT_EQ(check(c, CheckLevel::Core).size(), static_cast<size_t>(kCoreConditions));
  EXPECT_EQ(check(c, CheckLevel::Extended).size(), static_cast<size_t>(kAllConditions));
}

TEST(InvariantLevels, LabelsKeepOriginalNames) {
  EXPECT_STREQ(condition_label(0), "tree");
  EXPECT_STREQ(condition_label(1), "cond1");
  EXPECT_STREQ(condition_label(3), "cond54");
  EXPECT_STREQ(condition_label(kAllConditions), "cond45");
  EXPECT_THROW(condition_label(kAllConditions + 1), std::out_of_range);
}

TEST(InvariantInitial, EveryConditionHoldsInTheInitialConfiguration) {
  for (int k : {1, 2, 3}) {
    Configuration c = make_world(queue_options(3, k));
    for (const ConditionReport& r : check(c, CheckLevel::Extended)) {
      EXPECT_TRUE(r.pass) << "k=" << k << " " << r.label << ": " << r.witness;
    }
  }
}

TEST(InvariantInitial, MidRepairStateIsValid) {
  Configuration c = testing::mid_repair_state();
  auto f = first_failure(c, CheckLevel::Extended);
  EXPECT_FALSE(f.has_value()) << f->label << ": " << f->witness;
}

TEST(InvariantInitial, NonQueueWorldsHaveNoQueueConditions) {
  Options o = queue_options(2, 2);
  o.algo = Algo::RLock;
  EXPECT_TRUE(check(make_world(o), CheckLevel::Extended).empty());
  o.algo = Algo::Tree;
  o.n = 4;
  auto r = check(make_world(o), CheckLevel::Core);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].id, 0);
  EXPECT_TRUE(r[0].pass);
}

class FaultCase : public ::testing::TestWithParam<size_t> {};

TEST_P(FaultCase, SingleFieldCorruptionTripsACondition) {
  testing::Corruption fault = testing::corruptions().at(GetParam());
  Configuration c = testing::mid_repair_state();
  fault.apply(c);
  auto f = first_failure(c, CheckLevel::Extended);
  EXPECT_TRUE(f.has_value()) << fault.name;
  // The full report agrees with the early-exit search.
  if (f) {
    bool listed = false;
    for (const ConditionReport& r : check(c, CheckLevel::Extended)) listed |= !r.pass && r.id == f->id;
    EXPECT_TRUE(listed) << fault.name;
  }
}

INSTANTIATE_TEST_SUITE_P(Corruptions, FaultCase, ::testing::Range<size_t>(0, testing::corruptions().size()),
                         [](const ::testing::TestParamInfo<size_t>& info) {
                           const auto all = testing::corruptions();
                           std::string s;
                           for (char ch : all[info.param].name) {
                             s += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_';
                           }
                           return s;
                         });

TEST(FaultCases, AtLeastTwentyDistinctCorruptions) {
  EXPECT_GE(testing::corruptions().size(), 20u);
}

struct PropertyCase {
  int n, k;
  CostModel model;
  uint64_t seed;
};

class InvariantProperty : public ::testing::TestWithParam<PropertyCase> {};

TEST_P(InvariantProperty, HoldsAfterEveryStepOfACrashyRun) {
  const PropertyCase& pc = GetParam();
  Options o = queue_options(pc.n, pc.k);
  o.model = pc.model;
  RunOptions ro;
  ro.steps = 15000;
  ro.seed = pc.seed;
  ro.crash_prob = 0.02;
  ro.check = invariant_check(CheckLevel::Extended);
  ro.check_stride = 1;
  ro.limits.exit_steps = 6;
  ro.limits.csr_steps = 5;
  RunResult r = run_random(make_world(o), ro);
  ASSERT_TRUE(r.violations.empty()) << r.violations.front().kind << " at " << r.violations.front().step << ": "
                                    << r.violations.front().detail;
  EXPECT_EQ(r.steps, ro.steps);
}

INSTANTIATE_TEST_SUITE_P(Runs, InvariantProperty,
                         ::testing::Values(PropertyCase{2, 1, CostModel::DSM, 1}, PropertyCase{2, 2, CostModel::DSM, 2},
                                           PropertyCase{3, 2, CostModel::CC, 3}, PropertyCase{3, 3, CostModel::DSM, 4},
                                           PropertyCase{4, 2, CostModel::DSM, 5}, PropertyCase{4, 4, CostModel::CC, 6},
                                           PropertyCase{5, 3, CostModel::DSM, 7}, PropertyCase{6, 6, CostModel::DSM, 8}));

TEST(InvariantExplore, ExtendedHoldsInEveryReachableStateOfASmallQueue) {
  ExploreBounds b;
  b.max_crashes_per_proc = 1;
  MonitorLimits lim;
  lim.exit_steps = 6;
  lim.csr_steps = 5;
  ExploreReport r = explore(make_world(queue_options(2, 2, 1)), b, lim, invariant_check(CheckLevel::Extended));
  EXPECT_FALSE(r.truncated);
  EXPECT_FALSE(r.violation.has_value()) << r.violation->kind << ": " << r.violation->detail;
}

TEST(NodeHat, FollowsThePortAnnouncement) {
  Configuration c = make_world(queue_options(2, 2, 1));
  EXPECT_TRUE(node_hat(c, 0).is_nil());
  TraceEvent ev;
  // try:1, try:2 (alloc), try:3 (announce).
  for (int i = 0; i < 3; ++i) apply_step(c, 0, StepKind::Normal, ev);
  EXPECT_EQ(node_hat(c, 0), c.procs[0].q.mynode);
  EXPECT_EQ(queued_set(c), std::vector<Pid>{});
  while (!c.procs[0].in_cs) apply_step(c, 0, StepKind::Normal, ev);
  EXPECT_EQ(queued_set(c), std::vector<Pid>{0});
  EXPECT_FALSE(describe_queue(c, c.layout->queue).empty());
}

}  // namespace
}  // namespace rme
