#pragma once

#include <cstdint>
#include <optional>

#include "rme/runtime.hpp"

namespace rme {

struct ExploreBounds {
  int max_crashes_per_proc = 1;
  uint64_t max_states = 50'000'000;
  uint64_t max_depth = 1'000'000;
  bool with_caches = false;      // fingerprint caches and per-call RMR
  bool check_deadlock = true;
  bool minimize = true;
};

struct ExploreReport {
  uint64_t states = 0;
  uint64_t transitions = 0;
  uint64_t max_depth = 0;
  bool truncated = false;
  std::optional<Violation> violation;
  Schedule counterexample;
  int max_exit_len = 0;
  int max_csr_len = 0;
  double seconds = 0;
};

// Depth-first search over every interleaving of normal and crash steps
// within the bounds. Blocked steps are no-op edges and are not followed.
// Stops at the first violation of the monitors or of `check`, whose
// schedule is then shrunk by delta debugging over replays.
ExploreReport explore(const Configuration& init, const ExploreBounds& bounds,
                      const MonitorLimits& limits, const StateCheck& check);

// Replays a schedule and reports the first violation, if any. Entries that
// are not enabled make the replay fail.
std::optional<Violation> replay_violation(const Configuration& init, const Schedule& s,
                                          const MonitorLimits& limits, const StateCheck& check,
                                          bool check_deadlock);

}  // namespace rme
