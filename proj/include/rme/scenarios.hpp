#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rme/runtime.hpp"

namespace rme {

// Drives processes one step at a time and records the schedule.
class ScheduleBuilder {
 public:
  explicit ScheduleBuilder(Configuration init) : cfg_(std::move(init)) {}

  const TraceEvent& step(Pid p, StepKind k = StepKind::Normal);
  // Normal steps of p until `done` holds after a step. Throws SimFault
  // when the cap is reached first.
  void run_until(Pid p, const std::function<bool(const Configuration&, const TraceEvent&)>& done,
                 int cap = 10000);
  void run_to_line(Pid p, Line l, int cap = 10000);
  void run_until_blocked(Pid p, int cap = 10000);
  void run_until_cs(Pid p, int cap = 10000);

  const Configuration& cfg() const { return cfg_; }
  const Schedule& schedule() const { return sched_; }
  const std::vector<TraceEvent>& trace() const { return trace_; }

 private:
  Configuration cfg_;
  Schedule sched_;
  std::vector<TraceEvent> trace_;
};

// Pred-linked fragments of the flat queue rendered with labels: "x" for
// SpecialNode and "pN" for the node of process N-1. Fragments are listed
// head first, sorted, followed by the Tail owner, e.g.
// "[p1 p2] [p3 p4] [x] Tail=p6".
std::string queue_shape(const Configuration& cfg);

struct ShapeCheck {
  std::string title;
  std::string want;
  std::string got;
  bool ok = false;
};

// Eight processes on eight ports. p1, p3, p5 crash after their FAS, p2,
// p4, p6 wait behind them, p7 and p8 crash before their FAS; p1, p7, p5,
// p8, p3 then repair in that order.
Options repair_options();
Schedule build_repair_schedule();
// Expected shapes: initial, then after each of the five repairs.
std::vector<ShapeCheck> repair_expected();
// Replays the schedule and compares the shape before the first repair
// line and after each rep:20.
std::vector<ShapeCheck> replay_repair(const Schedule& s);

// p0 enters the CS, p1 enqueues behind it and blocks, p0 exits and p1
// enters.
Options handoff_options();
Schedule build_handoff_schedule();

struct HandoffResult {
  bool p1_blocked_while_p0_in_cs = false;
  bool p1_entered_after_p0_exit = false;
  std::vector<Violation> violations;
};
HandoffResult replay_handoff(const Schedule& s);

// Solo process: crash once after each prefix of a crash-free super-passage,
// then run to completion. Every run must finish without violations.
struct SweepCase {
  int crash_after = 0;
  std::string crash_line;
  bool completed = false;
  uint64_t steps = 0;
  std::vector<Violation> violations;
};
std::vector<SweepCase> solo_crash_sweep(Algo algo, int k, const StateCheck& check);

std::string fixture_path(const std::string& dir, const std::string& name);

}  // namespace rme
