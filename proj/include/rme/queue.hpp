#pragma once

#include <vector>

#include "rme/repair_graph.hpp"
#include "rme/step.hpp"

namespace rme {

enum class QEvent : uint8_t { None, EnteredCS, ExitDone };

// Executes the line (or sub-line) at r.pc for a process on `port`.
// Signal calls, the try:13 tail and the RLock run as sub-lines tracked in
// r.sub / r.lk. Hidden-variable updates are recorded on c.ev.
QEvent queue_step(StepCtx& c, const QueueLayout& L, QueueRegs& r, int port);

// Crash transition: pc back to try:1 outside Try, every register bottom.
void queue_crash(QueueRegs& r);

// Line the invariant reasons about. Inside a Signal call at try:6,
// try:14 or exit:2, the line is the one after the call once set:1 has
// executed (the call's linearization point). RLock sub-lines map to try:15.
Line logical_line(const QueueRegs& r);

inline bool in_remainder(const QueueRegs& r) { return r.pc == Line::T1 && !r.in_try; }

// Pred of a QNode, bottom for anything that is not a node address.
Value pred_of(const Memory& m, Value node);

struct Fragment {
  std::vector<Value> nodes;  // head first
  bool ok = true;            // false: linkage cycle or ambiguous successor
};

// Maximal Pred-linked sequence containing `node`. The head is the first
// node whose Pred is nil or a sentinel; successors are found among the
// nodes currently announced in Node[0..k-1].
Fragment fragment_of(const Memory& m, const QueueLayout& L, Value node);

}  // namespace rme
