#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rme/runtime.hpp"
#include "rme/world.hpp"

namespace rme {

enum class CheckLevel : uint8_t { Off, Core, Extended };

CheckLevel parse_check_level(const std::string& s);
const char* to_string(CheckLevel l);

// Conditions are numbered 1..39 in order of appearance; `label` keeps the
// original condition name (cond1, cond54, ...). Id 0 is the tree's
// per-instance structural check.
struct ConditionReport {
  int id = 0;
  std::string label;
  bool pass = true;
  bool applicable = true;
  std::string witness;  // set on failure: processes, nodes, clause
};

inline constexpr int kCoreConditions = 19;
inline constexpr int kAllConditions = 39;

const char* condition_label(int id);

// Evaluates every condition of the level. Pure over the configuration.
std::vector<ConditionReport> check(const Configuration& cfg, CheckLevel level);

// First failing condition, or nothing. Stops early.
std::optional<ConditionReport> first_failure(const Configuration& cfg, CheckLevel level);

// Adapter for run and explore.
StateCheck invariant_check(CheckLevel level);

// Hidden node of a process of the flat queue (nil when none).
Value node_hat(const Configuration& cfg, Pid p);

// Multi-line dump of one queue instance and the processes' registers.
std::string describe_queue(const Configuration& cfg, const QueueLayout& L);

// Queued processes of the flat queue.
std::vector<Pid> queued_set(const Configuration& cfg);

}  // namespace rme
