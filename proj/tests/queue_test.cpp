#include <gtest/gtest.h>

#include "rme/invariant.hpp"
#include "rme/queue.hpp"
#include "rme/runtime.hpp"
#include "rme/scenarios.hpp"
#include "rme/trace_io.hpp"

namespace rme {
namespace {

Options solo_options(int k = 1) {
  Options o;
  o.algo = Algo::Queue;
  o.n = 1;
  o.k = k;
  o.max_super_passages = 1;
  return o;
}

std::vector<std::string> lines_of(const std::vector<TraceEvent>& t, size_t from = 0) {
  std::vector<std::string> out;
  for (size_t i = from; i < t.size(); ++i) out.push_back(where(t[i]));
  return out;
}

bool finished_p0(const Configuration& c, const TraceEvent&) { return finished(c, 0); }

TEST(QueueSolo, CrashFreePassageFollowsTheListing) {
  ScheduleBuilder b(make_world(solo_options()));
  b.run_until(0, finished_p0);
  const std::vector<std::string> want = {
      "try:1",        "try:2",        "try:3",        "try:4",         "try:5",        "try:6/set:1",
      "try:6/set:2",  "try:6/set:3",  "try:16/wait:1", "try:16/wait:2", "try:16/wait:3", "try:16/wait:4",
      "try:17",       "exit:1",       "exit:2/set:1", "exit:2/set:2",  "exit:2/set:3", "exit:3"};
  EXPECT_EQ(lines_of(b.trace()), want);
}

TEST(QueueSolo, DsmPassageRmrOracle) {
  // Remote: Node[p] read, node install, Tail FAS, GoAddr write, Bit read,
  // Node[p] clear. The node, its signals and the spin cell are local.
  ScheduleBuilder b(make_world(solo_options()));
  b.run_until(0, finished_p0);
  int rmr = 0;
  for (const TraceEvent& ev : b.trace()) rmr += ev.rmr;
  EXPECT_EQ(rmr, 6);
  EXPECT_EQ(b.cfg().procs[0].rmr_total, 6u);
}

TEST(QueueSolo, ExitEffects) {
  ScheduleBuilder b(make_world(solo_options()));
  b.run_to_line(0, Line::X1);
  Value mine = b.cfg().procs[0].q.mynode;
  ASSERT_TRUE(mine.is_node());
  EXPECT_EQ(b.cfg().mem.peek(b.cfg().layout->queue.node(0)), mine);
  b.run_until(0, finished_p0);
  const Configuration& c = b.cfg();
  EXPECT_TRUE(c.mem.peek(c.layout->queue.node(0)).is_nil());
  EXPECT_TRUE(c.mem.peek(mine.cell() + kCs).is_present());
  EXPECT_EQ(c.mem.peek(c.layout->queue.tail), mine);
  EXPECT_EQ(b.trace().back().exit_len, 5);
}

TEST(QueueSolo, CrashInCsReentersWithinFiveSteps) {
  ScheduleBuilder b(make_world(solo_options()));
  b.run_until_cs(0);
  size_t mark = b.trace().size();
  b.step(0, StepKind::Crash);
  b.run_until_cs(0);
  const std::vector<std::string> want = {"crash", "try:1", "try:8", "try:9", "try:10", "try:11"};
  EXPECT_EQ(lines_of(b.trace(), mark), want);
  EXPECT_EQ(b.trace().back().csr_len, 5);
  EXPECT_TRUE(b.trace().back().cs_enter);
}

TEST(QueueSolo, CrashAfterFasRepairsThenEnters) {
  ScheduleBuilder b(make_world(solo_options()));
  b.run_to_line(0, Line::T5);
  size_t mark = b.trace().size();
  b.step(0, StepKind::Crash);
  b.run_until(0, finished_p0);
  auto got = lines_of(b.trace(), mark);
  auto has = [&](const std::string& s) { return std::find(got.begin(), got.end(), s) != got.end(); };
  EXPECT_EQ(got[1], "try:1");
  EXPECT_EQ(got[2], "try:8");
  EXPECT_TRUE(has("rep:18") || has("rep:19"));
  EXPECT_TRUE(has("rep:20"));
  EXPECT_TRUE(has("try:17"));
  EXPECT_TRUE(b.cfg().mem.peek(b.cfg().layout->queue.node(0)).is_nil());
}

TEST(QueueSolo, EveryStepOfARecoveryPassesTheExtendedInvariant) {
  for (Line at : {Line::T2, Line::T4, Line::T5, Line::T6, Line::T16, Line::X2, Line::X3}) {
    ScheduleBuilder b(make_world(solo_options()));
    b.run_to_line(0, at);
    b.step(0, StepKind::Crash);
    while (!finished(b.cfg(), 0)) {
      b.step(0);
      auto f = first_failure(b.cfg(), CheckLevel::Extended);
      ASSERT_FALSE(f.has_value()) << "crash at " << line_name(at) << ": " << f->label << " " << f->witness;
    }
  }
}

TEST(QueueRegs, CrashResetsRegistersToBottom) {
  QueueRegs r;
  r.pc = Line::R14;
  r.in_try = true;
  r.mynode = Value::node(4);
  r.idx = 3;
  r.V = {Value::node(4)};
  r.paths = {{Value::node(4)}};
  r.mypath = 0;
  queue_crash(r);
  EXPECT_EQ(r.pc, Line::T1);
  EXPECT_FALSE(r.in_try);
  EXPECT_EQ(r.sub, Sub::None);
  EXPECT_TRUE(r.mynode.is_bot());
  EXPECT_EQ(r.idx, kRegBot);
  EXPECT_TRUE(r.V.empty());
  EXPECT_TRUE(r.paths.empty());
  EXPECT_EQ(r.mypath, kRegBot);
  EXPECT_TRUE(in_remainder(r));
}

TEST(QueueRegs, LogicalLineAfterTheLinearizationPoint) {
  QueueRegs r;
  EXPECT_EQ(logical_line(r), Line::T1);
  r.pc = Line::T6;
  r.sub = Sub::Set1;
  EXPECT_EQ(logical_line(r), Line::T6);
  r.sub = Sub::Set2;
  EXPECT_EQ(logical_line(r), Line::T16);
  r.pc = Line::T14;
  r.sub = Sub::Set3;
  EXPECT_EQ(logical_line(r), Line::T15);
  r.pc = Line::X2;
  r.sub = Sub::Set1;
  EXPECT_EQ(logical_line(r), Line::X2);
  r.sub = Sub::Set4;
  EXPECT_EQ(logical_line(r), Line::X3);
  r.pc = Line::T15;
  r.sub = Sub::LkAq4;
  EXPECT_EQ(logical_line(r), Line::T15);
  r.pc = Line::T16;
  r.sub = Sub::Wait2;
  EXPECT_EQ(logical_line(r), Line::T16);
}

TEST(QueueMemory, PredOfNonNodeIsBottom) {
  Configuration c = make_world(solo_options());
  EXPECT_TRUE(pred_of(c.mem, Value::nil()).is_bot());
  EXPECT_TRUE(pred_of(c.mem, Value::integer(3)).is_bot());
  const QueueLayout& L = c.layout->queue;
  EXPECT_EQ(pred_of(c.mem, Value::node(L.special)), c.mem.peek(L.special + kPred));
}

TEST(QueueMemory, InitialTailIsSpecialNode) {
  Options o = solo_options(3);
  o.n = 3;
  Configuration c = make_world(o);
  const QueueLayout& L = c.layout->queue;
  EXPECT_EQ(c.mem.peek(L.tail), Value::node(L.special));
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(c.mem.peek(L.node(i)).is_nil());
  EXPECT_TRUE(L.is_sentinel(Value::node(L.crash)));
  EXPECT_FALSE(L.is_sentinel(Value::node(L.special)));
}

TEST(QueueFragments, RepairScenarioInitialFragments) {
  Configuration c = make_world(repair_options());
  Schedule s = build_repair_schedule();
  for (const ScheduleEntry& e : s) {
    TraceEvent ev;
    apply_step(c, e.pid, e.kind, ev);
    if (ev.area == Area::Queue && is_rep(ev.line)) break;
  }
  auto nodes = [&](std::initializer_list<Pid> ps) {
    std::vector<Value> v;
    for (Pid p : ps) v.push_back(c.procs[static_cast<size_t>(p)].q.mynode);
    return v;
  };
  const QueueLayout& L = c.layout->queue;
  Fragment f = fragment_of(c.mem, L, c.procs[1].q.mynode);
  EXPECT_TRUE(f.ok);
  EXPECT_EQ(f.nodes, nodes({0, 1}));
  f = fragment_of(c.mem, L, c.procs[4].q.mynode);
  EXPECT_EQ(f.nodes, nodes({4, 5}));
  // Crashed before the FAS: a singleton headed by the Crash sentinel.
  Value p7 = c.mem.peek(L.node(6));
  f = fragment_of(c.mem, L, p7);
  ASSERT_EQ(f.nodes.size(), 1u);
  EXPECT_EQ(f.nodes[0], p7);
}

TEST(QueueFragments, LinkageCycleIsReported) {
  Options o = solo_options(2);
  o.n = 2;
  Configuration c = make_world(o);
  const QueueLayout& L = c.layout->queue;
  CellId a = c.mem.alloc_block(0, {Value::nil(), Value::bot(), Value::bot(), Value::bot(), Value::bot()},
                               BlockKind::QNode);
  CellId b = c.mem.alloc_block(1, {Value::nil(), Value::bot(), Value::bot(), Value::bot(), Value::bot()},
                               BlockKind::QNode);
  c.mem.poke(a + kPred, Value::node(b));
  c.mem.poke(b + kPred, Value::node(a));
  c.mem.poke(L.node(0), Value::node(a));
  c.mem.poke(L.node(1), Value::node(b));
  EXPECT_FALSE(fragment_of(c.mem, L, Value::node(a)).ok);
}

TEST(QueueRandom, SharedPortsWithCrashesStayClean) {
  Options o;
  o.algo = Algo::Queue;
  o.n = 4;
  o.k = 2;
  for (uint64_t seed = 1; seed <= 4; ++seed) {
    RunOptions ro;
    ro.steps = 40000;
    ro.seed = seed;
    ro.crash_prob = 0.005;
    ro.crash_stop = 30000;
    ro.limits.exit_steps = 6;
    ro.limits.csr_steps = 5;
    ro.check = invariant_check(CheckLevel::Extended);
    ro.check_stride = 1;
    RunResult r = run_random(make_world(o), ro);
    ASSERT_TRUE(r.violations.empty()) << "seed " << seed << ": " << r.violations.front().kind << " "
                                      << r.violations.front().detail;
    EXPECT_TRUE(r.starved.empty()) << "seed " << seed;
  }
}

}  // namespace
}  // namespace rme
