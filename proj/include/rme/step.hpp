#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rme/lines.hpp"
#include "rme/memory.hpp"
#include "rme/value.hpp"
#include "rme/world.hpp"

namespace rme {

enum class StepKind : uint8_t { Normal, Crash };
enum class OpKind : uint8_t { Read, Write, Fas, Alloc };

struct MemOp {
  OpKind kind = OpKind::Read;
  CellId cell = kNoCell;
  Value val;  // value read, written, or installed
  Value old;  // fas only
  uint8_t cost = 0;
  friend bool operator==(const MemOp&, const MemOp&) = default;
};

// Program area of a trace event, used only for rendering.
enum class Area : uint8_t { Queue, Tree, RLock, Signal };

struct TraceEvent {
  uint64_t index = 0;
  Pid pid = 0;
  StepKind kind = StepKind::Normal;
  Area area = Area::Queue;
  Line line = Line::None;
  Sub sub = Sub::None;
  int8_t level = -1;           // tree level of a queue line
  TreePc tpc = TreePc::Rem;    // tree lines outside a queue
  uint8_t nops = 0;
  std::array<MemOp, 3> ops{};
  int rmr = 0;
  bool blocked = false;
  bool branch = false;         // wait returned, rep:1 short-cut taken
  bool pch_set = false;
  Line pch = Line::None;
  bool porth_set = false;
  int porth = -1;
  bool passage_begin = false;
  bool passage_end = false;
  bool super_end = false;
  bool cs_enter = false;
  bool cs_leave = false;
  int exit_len = -1;
  int csr_len = -1;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

// Funnel for every memory access a line performs.
struct StepCtx {
  Memory& mem;
  Pid pid;
  TraceEvent& ev;

  void record(OpKind k, CellId c, Value v, Value old, int cost) {
    if (ev.nops < ev.ops.size()) ev.ops[ev.nops++] = MemOp{k, c, v, old, static_cast<uint8_t>(cost)};
    ev.rmr += cost;
  }
  Value read(CellId c) {
    auto [v, cost] = mem.read(pid, c);
    record(OpKind::Read, c, v, Value::bot(), cost);
    return v;
  }
  void write(CellId c, Value v) { record(OpKind::Write, c, v, Value::bot(), mem.write(pid, c, v)); }
  Value fas(CellId c, Value v) {
    auto [old, cost] = mem.fas(pid, c, v);
    record(OpKind::Fas, c, v, old, cost);
    return old;
  }
  CellId alloc(std::initializer_list<Value> init, BlockKind kind) {
    CellId c = mem.alloc_block(pid, init, kind);
    record(OpKind::Alloc, c, Value::integer(static_cast<uint32_t>(init.size())), Value::bot(), 0);
    return c;
  }
  void pch(Line l) {
    ev.pch_set = true;
    ev.pch = l;
  }
};

}  // namespace rme
