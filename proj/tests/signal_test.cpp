#include <gtest/gtest.h>

#include "rme/explore.hpp"
#include "rme/runtime.hpp"
#include "rme/signal.hpp"

namespace rme {
namespace {

constexpr Pid kSignaler = 0;
constexpr Pid kWaiter = 1;

struct Bench {
  Memory mem{CostModel::DSM, 2};
  CellId obj = mem.alloc_block(kGlobal, {Value::sig(Sig::Absent), Value::nil()});
  TraceEvent ev;

  int signal_step(Sub& sub, SigRegs& r, bool& done) {
    ev = {};
    StepCtx c{mem, kSignaler, ev};
    done = signal_dsm_step(c, obj, sub, r);
    return ev.rmr;
  }
  int wait_step(Sub& sub, SigRegs& r, WaitResult& res) {
    ev = {};
    StepCtx c{mem, kWaiter, ev};
    res = wait_dsm_step(c, obj, sub, r);
    return ev.rmr;
  }
};

TEST(SignalDsm, WaitBeforeSignalCostsOracle) {
  Bench b;
  Sub ws = Sub::Wait1, ss = Sub::Set1;
  SigRegs wr, sr;
  WaitResult res;
  bool done = false;
  // Wait1 alloc, Wait2 local write, Wait3 remote write, Wait4 remote read.
  EXPECT_EQ(b.wait_step(ws, wr, res), 0);
  EXPECT_EQ(b.wait_step(ws, wr, res), 0);
  EXPECT_EQ(b.wait_step(ws, wr, res), 1);
  EXPECT_EQ(b.wait_step(ws, wr, res), 1);
  EXPECT_EQ(res, WaitResult::Progress);
  // Spinning on the local go cell is free and blocked.
  EXPECT_EQ(b.wait_step(ws, wr, res), 0);
  EXPECT_EQ(res, WaitResult::Blocked);
  EXPECT_TRUE(b.ev.blocked);
  // Signal: Bit, GoAddr, branch, remote go write.
  EXPECT_EQ(b.signal_step(ss, sr, done), 1);
  EXPECT_EQ(b.signal_step(ss, sr, done), 1);
  EXPECT_EQ(b.signal_step(ss, sr, done), 0);
  EXPECT_FALSE(done);
  EXPECT_EQ(b.signal_step(ss, sr, done), 1);
  EXPECT_TRUE(done);
  EXPECT_EQ(b.wait_step(ws, wr, res), 0);
  EXPECT_EQ(res, WaitResult::Returned);
}

TEST(SignalDsm, SignalBeforeWaitReturnsWithoutSpinning) {
  Bench b;
  Sub ws = Sub::Wait1, ss = Sub::Set1;
  SigRegs wr, sr;
  WaitResult res;
  bool done = false;
  int sig_rmr = 0;
  while (!done) sig_rmr += b.signal_step(ss, sr, done);
  // GoAddr was nil, so the call stops after the branch.
  EXPECT_EQ(sig_rmr, 2);
  int wait_rmr = 0, steps = 0;
  do {
    wait_rmr += b.wait_step(ws, wr, res);
    ++steps;
  } while (res == WaitResult::Progress);
  EXPECT_EQ(res, WaitResult::Returned);
  EXPECT_EQ(steps, 4);
  EXPECT_EQ(wait_rmr, 2);
}

TEST(SignalDsm, RestartedWaitAllocatesAFreshSpinCell) {
  Bench b;
  Sub ws = Sub::Wait1;
  SigRegs wr;
  WaitResult res;
  for (int i = 0; i < 3; ++i) b.wait_step(ws, wr, res);
  Value first = wr.go;
  // A crash discards the registers; the call starts over.
  ws = Sub::Wait1;
  wr = {};
  for (int i = 0; i < 3; ++i) b.wait_step(ws, wr, res);
  EXPECT_NE(wr.go, first);
  EXPECT_EQ(b.mem.peek(b.obj + kSigGoAddr), wr.go);
  EXPECT_EQ(b.mem.owner(wr.go.cell()), kWaiter);
}

TEST(SignalCc, SingleStepCalls) {
  Memory mem(CostModel::CC, 2, 4);
  CellId obj = mem.alloc_block(kGlobal, {Value::sig(Sig::Absent), Value::nil()});
  TraceEvent ev;
  StepCtx w{mem, kWaiter, ev};
  Sub s = Sub::Wait1;
  EXPECT_EQ(wait_cc_step(w, obj, s), WaitResult::Blocked);
  EXPECT_EQ(ev.rmr, 1);
  ev = {};
  EXPECT_EQ(wait_cc_step(w, obj, s), WaitResult::Blocked);
  EXPECT_EQ(ev.rmr, 0);  // cache hit while spinning
  ev = {};
  StepCtx sc{mem, kSignaler, ev};
  Sub ss = Sub::Set1;
  EXPECT_TRUE(signal_cc_step(sc, obj, ss));
  EXPECT_EQ(ev.rmr, 1);
  ev = {};
  EXPECT_EQ(wait_cc_step(w, obj, s), WaitResult::Returned);
  EXPECT_EQ(ev.rmr, 1);  // invalidated by the write
}

struct SignalCase {
  SignalImpl impl;
  CostModel model;
  int crashes;
};

class SignalExplore : public ::testing::TestWithParam<SignalCase> {};

TEST_P(SignalExplore, NoViolationWithinFourRmr) {
  Options o;
  o.algo = Algo::Signal;
  o.n = 2;
  o.signal_impl = GetParam().impl;
  o.model = GetParam().model;
  ExploreBounds b;
  b.max_crashes_per_proc = GetParam().crashes;
  b.with_caches = true;
  ExploreReport r = explore(make_world(o), b, MonitorLimits{}, {});
  EXPECT_FALSE(r.truncated);
  EXPECT_FALSE(r.violation.has_value()) << r.violation->kind << ": " << r.violation->detail;
  EXPECT_GE(r.states, 3u);
}

INSTANTIATE_TEST_SUITE_P(AllVariants, SignalExplore,
                         ::testing::Values(SignalCase{SignalImpl::Dsm, CostModel::DSM, 0},
                                           SignalCase{SignalImpl::Dsm, CostModel::DSM, 1},
                                           SignalCase{SignalImpl::Dsm, CostModel::CC, 0},
                                           SignalCase{SignalImpl::Dsm, CostModel::CC, 1},
                                           SignalCase{SignalImpl::Cc, CostModel::CC, 0},
                                           SignalCase{SignalImpl::Cc, CostModel::CC, 1},
                                           SignalCase{SignalImpl::Cc, CostModel::DSM, 0},
                                           SignalCase{SignalImpl::Cc, CostModel::DSM, 1}));

TEST(SignalMonitor, TighterRmrLimitIsCaught) {
  // The DSM signal call costs three RMRs when the waiter registered first.
  Options o;
  o.algo = Algo::Signal;
  o.n = 2;
  MonitorLimits lim;
  lim.signal_rmr = 2;
  ExploreBounds b;
  b.max_crashes_per_proc = 0;
  b.with_caches = true;
  ExploreReport r = explore(make_world(o), b, lim, {});
  ASSERT_TRUE(r.violation.has_value());
  auto again = replay_violation(make_world(o), r.counterexample, lim, {}, true);
  ASSERT_TRUE(again.has_value());
  EXPECT_EQ(again->kind, r.violation->kind);
}

TEST(SignalWorld, RejectsOtherProcessCounts) {
  Options o;
  o.algo = Algo::Signal;
  o.n = 3;
  EXPECT_THROW(make_world(o), std::invalid_argument);
}

}  // namespace
}  // namespace rme
