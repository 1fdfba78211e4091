#include <gtest/gtest.h>

#include "rme/invariant.hpp"
#include "rme/scenarios.hpp"
#include "rme/trace_io.hpp"

namespace rme {
namespace {

TEST(Fixtures, RepairFileMatchesTheBuilder) {
  EXPECT_EQ(load_schedule(fixture_path(RME_FIXTURE_DIR, "repair.sched")), build_repair_schedule());
}

TEST(Fixtures, HandoffFileMatchesTheBuilder) {
  EXPECT_EQ(load_schedule(fixture_path(RME_FIXTURE_DIR, "handoff.sched")), build_handoff_schedule());
}

TEST(RepairScenario, SixShapesInOrder) {
  std::vector<ShapeCheck> got = replay_repair(build_repair_schedule());
  std::vector<ShapeCheck> want = repair_expected();
  ASSERT_EQ(got.size(), 6u);
  ASSERT_EQ(want.size(), 6u);
  for (size_t i = 0; i < got.size(); ++i) {
    EXPECT_TRUE(got[i].ok) << got[i].title << ": got " << got[i].got << " want " << got[i].want;
    EXPECT_EQ(got[i].want, want[i].want);
  }
  EXPECT_EQ(got.back().got, "[p1 p2 p7 p5 p6 p8 p3 p4] Tail=p4");
}

TEST(RepairScenario, InitialShapeOracle) {
  EXPECT_EQ(repair_expected().front().want, "[p1 p2] [p3 p4] [p5 p6] [p7] [p8] Tail=p6");
}

TEST(RepairScenario, ExtendedInvariantHoldsThroughoutTheReplay) {
  Configuration c = make_world(repair_options());
  for (const ScheduleEntry& e : build_repair_schedule()) {
    TraceEvent ev;
    apply_step(c, e.pid, e.kind, ev);
    auto f = first_failure(c, CheckLevel::Extended);
    ASSERT_FALSE(f.has_value()) << "step " << c.steps << " " << where(ev) << ": " << f->label << " " << f->witness;
  }
}

TEST(RepairScenario, TruncatedScheduleMissesShapes) {
  Schedule s = build_repair_schedule();
  s.resize(s.size() / 2);
  std::vector<ShapeCheck> got = replay_repair(s);
  bool all = got.size() == 6;
  for (const ShapeCheck& c : got) all = all && c.ok;
  EXPECT_FALSE(all);
}

TEST(Handoff, BlockedThenEnters) {
  HandoffResult h = replay_handoff(build_handoff_schedule());
  EXPECT_TRUE(h.p1_blocked_while_p0_in_cs);
  EXPECT_TRUE(h.p1_entered_after_p0_exit);
  EXPECT_TRUE(h.violations.empty());
}

TEST(ScheduleBuilder, DisabledStepThrows) {
  Options o;
  o.algo = Algo::Queue;
  o.n = 2;
  o.k = 2;
  ScheduleBuilder b(make_world(o));
  EXPECT_THROW(b.step(0, StepKind::Crash), SimFault);
  EXPECT_THROW(b.run_until(0, [](const Configuration&, const TraceEvent&) { return false; }, 50), SimFault);
}

TEST(Sweep, QueueRecoversFromACrashAtEveryPoint) {
  std::vector<SweepCase> cases = solo_crash_sweep(Algo::Queue, 2, invariant_check(CheckLevel::Extended));
  // One case per step of the 18-step crash-free super-passage, bar the last.
  EXPECT_GE(cases.size(), 17u);
  for (const SweepCase& c : cases) {
    EXPECT_TRUE(c.completed) << c.crash_line;
    EXPECT_TRUE(c.violations.empty()) << c.crash_line << ": " << c.violations.front().detail;
  }
}

TEST(Sweep, RLockRecoversFromACrashAtEveryPoint) {
  for (const SweepCase& c : solo_crash_sweep(Algo::RLock, 1, {})) {
    EXPECT_TRUE(c.completed) << c.crash_line;
    EXPECT_TRUE(c.violations.empty()) << c.crash_line;
  }
}

TEST(FixturePath, JoinsDirectoryAndName) {
  EXPECT_EQ(fixture_path("/a/b", "x.sched"), "/a/b/x.sched");
}

}  // namespace
}  // namespace rme
