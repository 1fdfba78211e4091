#pragma once

#include "rme/queue.hpp"

namespace rme {

// Leaf-to-root climb over per-node queue locks. The climb record
// (level, releasing) persists in the process's own partition: acquire
// resumes at the recorded level, release walks back down from it.
QEvent tree_step(StepCtx& c, const TreeLayout& T, ProcState& ps);

void tree_crash(ProcState& ps);

const char* tree_pc_name(TreePc pc);

}  // namespace rme
