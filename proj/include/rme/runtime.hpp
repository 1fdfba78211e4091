#pragma once

#include <climits>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rme/step.hpp"
#include "rme/world.hpp"

namespace rme {

struct ScheduleEntry {
  Pid pid = 0;
  StepKind kind = StepKind::Normal;
  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};
using Schedule = std::vector<ScheduleEntry>;

struct Violation {
  std::string kind;
  std::string detail;
  uint64_t step = 0;
  Pid pid = -1;
};

// True once a process has completed its allowed super-passages.
bool finished(const Configuration& cfg, Pid p);
bool all_finished(const Configuration& cfg);
bool normal_enabled(const Configuration& cfg, Pid p);
bool crash_enabled(const Configuration& cfg, Pid p);
bool enabled(const Configuration& cfg, Pid p, StepKind k);

// Applies one step in place and fills `ev`. Throws SimFault when the step
// is not enabled.
void apply_step(Configuration& cfg, Pid p, StepKind k, TraceEvent& ev);

// Value-semantics wrapper.
Configuration step(const Configuration& cfg, Pid p, StepKind k, TraceEvent* ev = nullptr);

// Applies the hidden-variable updates an event carries.
Hidden track(const TraceEvent& ev, Hidden h);

struct MonitorLimits {
  int exit_steps = -1;  // -1: unchecked
  int csr_steps = -1;
  int signal_steps = 4;
  int signal_rmr = 4;
  int wait_rmr = 4;
  int wait_after_signal = 4;
};

// Per-step safety monitors: mutual exclusion, CSR exclusivity, step
// bounds on Exit and CS re-entry, and the Signal object's guarantees.
std::optional<Violation> monitor(const Configuration& after, const TraceEvent& ev,
                                 const MonitorLimits& lim);

using StateCheck = std::function<std::optional<Violation>(const Configuration&)>;

struct RunOptions {
  uint64_t steps = 100000;
  uint64_t seed = 1;
  double crash_prob = 0.0;
  uint64_t crash_stop = UINT64_MAX;  // no crash at step index >= crash_stop
  int max_crashes_per_proc = INT_MAX;
  MonitorLimits limits;
  StateCheck check;           // optional extra state predicate
  uint64_t check_stride = 64;
  bool keep_trace = true;
  bool stop_on_violation = true;
};

struct RunResult {
  Configuration final;
  std::vector<TraceEvent> trace;
  Schedule schedule;
  std::vector<Violation> violations;
  // Processes in Try when crash injection stopped that never reached the
  // CS afterwards.
  std::vector<Pid> starved;
  uint64_t steps = 0;
};

// Random scheduler: uniform over unfinished processes, crash with the
// given probability when enabled.
RunResult run_random(const Configuration& init, const RunOptions& opt);

// Scripted run. Stops early on the first violation when requested.
RunResult run_script(const Configuration& init, const Schedule& sched, const RunOptions& opt);

// Derived schedule of a trace.
Schedule schedule_of(const std::vector<TraceEvent>& trace);

}  // namespace rme
