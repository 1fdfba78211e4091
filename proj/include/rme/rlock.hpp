#pragma once

#include "rme/step.hpp"

namespace rme {

// Recoverable tournament lock. Each level is a two-contender Peterson
// lock with local spinning on a per-process go cell. Per-port phase cells
// persist acquisition progress so a restarted acquire skips levels it
// already holds.
//
// Acquire starts with r.st == Sub::None and returns true on the step that
// makes the port hold the root. Release starts with r.st == Sub::None and
// returns true on the step that finishes it. With depth 0 each call is a
// single step with no memory access.
bool rlock_acquire_step(StepCtx& c, const RLockLayout& L, LockRegs& r, int port);
bool rlock_release_step(StepCtx& c, const RLockLayout& L, LockRegs& r, int port);

}  // namespace rme
