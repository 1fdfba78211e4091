#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rme/lines.hpp"
#include "rme/memory.hpp"
#include "rme/value.hpp"

namespace rme {

enum class Algo : uint8_t { Signal, RLock, Queue, Tree };
enum class SignalImpl : uint8_t { Dsm, Cc };

const char* to_string(Algo a);
Algo parse_algo(const std::string& s);

// QNode block: [Pred, NonNil.Bit, NonNil.GoAddr, CS.Bit, CS.GoAddr].
inline constexpr uint32_t kPred = 0;
inline constexpr uint32_t kNonNil = 1;
inline constexpr uint32_t kCs = 3;
inline constexpr uint32_t kQNodeCells = 5;

// A Signal object is two consecutive cells: Bit then GoAddr.
inline constexpr uint32_t kSigBit = 0;
inline constexpr uint32_t kSigGoAddr = 1;

// Tournament of two-contender sub-locks. Node i (1 .. leaves-1, heap order)
// owns five cells: flag[0], flag[1], victim, wake[0], wake[1].
struct RLockLayout {
  int k = 1;
  int depth = 0;
  int leaves = 1;
  CellId nodes = kNoCell;
  CellId phase = kNoCell;  // phase[port * depth + level]
  Pid pid_base = 0;
  std::vector<CellId> go;  // spin cell per process, in its own partition

  int node_index(int level, int port) const { return (leaves + port) >> (level + 1); }
  int side(int level, int port) const { return ((leaves + port) >> level) & 1; }
  CellId flag(int level, int port, int s) const { return nodes + (node_index(level, port) - 1) * 5 + s; }
  CellId victim(int level, int port) const { return nodes + (node_index(level, port) - 1) * 5 + 2; }
  CellId wake(int level, int port, int s) const { return nodes + (node_index(level, port) - 1) * 5 + 3 + s; }
  CellId phase_cell(int level, int port) const { return phase + port * depth + level; }
  CellId go_cell(Pid p) const { return go.at(static_cast<size_t>(p - pid_base)); }
};

inline constexpr uint32_t kPhaseIdle = 0;
inline constexpr uint32_t kPhaseAcquiring = 1;
inline constexpr uint32_t kPhaseAcquired = 2;

struct QueueLayout {
  int k = 1;
  CellId tail = kNoCell;
  CellId node0 = kNoCell;
  CellId crash = kNoCell, incs = kNoCell, exit = kNoCell, special = kNoCell;
  RLockLayout rlock;

  CellId node(int port) const { return node0 + static_cast<CellId>(port); }
  bool is_sentinel(Value v) const {
    return v.is_node() && (v.x == crash || v.x == incs || v.x == exit);
  }
};

struct TreeLayout {
  int n = 1, k = 1, h = 1;
  std::vector<size_t> level_start;  // index into queues of the first node at each level
  std::vector<QueueLayout> queues;
  std::vector<CellId> record;  // climb record per process, in its own partition

  int port(int level, Pid p) const;
  size_t node_of(int level, Pid p) const;
  const QueueLayout& at(int level, Pid p) const { return queues[node_of(level, p)]; }
};

// Climb record encoding: Int(level * 2 + releasing).
inline constexpr Value climb_record(int level, bool releasing) {
  return Value::integer(static_cast<uint32_t>(level * 2 + (releasing ? 1 : 0)));
}

struct SignalLayout {
  CellId obj = kNoCell;  // Bit, GoAddr
};

struct Options {
  Algo algo = Algo::Queue;
  int n = 2;
  int k = 2;
  CostModel model = CostModel::DSM;
  int cache = 8;
  SignalImpl signal_impl = SignalImpl::Dsm;
  int max_super_passages = 0;  // 0: unbounded
};

struct Layout {
  Options opt;
  QueueLayout queue;
  RLockLayout rlock;
  TreeLayout tree;
  SignalLayout sig;
  CellId static_end = 0;  // cells below this are created with the world
};

struct Hidden {
  Line pch = Line::T2;
  int porth = -1;
  friend bool operator==(const Hidden&, const Hidden&) = default;
};

struct SigRegs {
  Value addr;
  Value go;
  friend bool operator==(const SigRegs&, const SigRegs&) = default;
};

struct LockRegs {
  Sub st = Sub::None;
  int8_t lvl = 0;
  Value w;
  friend bool operator==(const LockRegs&, const LockRegs&) = default;
};

inline constexpr int16_t kRegBot = -2;
inline constexpr int16_t kRegNil = -1;

using Path = std::vector<Value>;  // rear first, front last

struct QueueRegs {
  Line pc = Line::T1;
  bool in_try = false;
  Sub sub = Sub::None;
  bool lk_release = false;
  Value mynode, mypred, tail, cur, curpred;
  SigRegs sig;
  LockRegs lk;
  int16_t idx = kRegBot;
  bool graph_set = false;  // V, E assigned since the last crash
  std::vector<Value> V;
  std::vector<std::pair<Value, Value>> E;
  bool paths_set = false;
  std::vector<Path> paths;
  int16_t mypath = kRegBot, tailpath = kRegBot, headpath = kRegBot, seq = kRegBot;

  friend bool operator==(const QueueRegs&, const QueueRegs&) = default;
};

enum class TreePc : uint8_t { Rem, Climb, Up, CS, Rec1, Rec2, Exit, Down };

struct ProcState {
  // Harness state (persistent, fingerprinted).
  bool active = false;
  int port = -1;
  int sp_done = 0;
  int crashes = 0;
  // Registers.
  QueueRegs q;
  TreePc tpc = TreePc::Rem;
  int level = -1;
  // Hidden variables.
  Hidden h;
  // Monitors (fingerprinted; all bounded).
  bool in_cs = false;
  bool csr_pending = false;
  int csr_steps = 0;
  int exit_steps = -1;
  int call_steps = 0;
  int call_rmr = 0;
  // Metrics (not fingerprinted).
  uint64_t rmr_total = 0;
  uint64_t rmr_passage = 0;
  uint64_t rmr_super = 0;
  int f_super = 0;
  uint64_t cs_entries = 0;
};

struct Observer {
  bool set1_done = false;
  bool signal_done = false;
  int waiter_steps_after_signal = 0;
};

struct Configuration {
  std::shared_ptr<const Layout> layout;
  Memory mem;
  std::vector<ProcState> procs;
  Observer obs;
  uint64_t steps = 0;

  const Options& opt() const { return layout->opt; }
  int n() const { return static_cast<int>(procs.size()); }
};

// Tree shape for n processes: degree k and height h.
std::pair<int, int> tree_shape(int n);

RLockLayout build_rlock(Memory& mem, int k, Pid pid_base, int npids);
QueueLayout build_queue(Memory& mem, int k, Pid pid_base, int npids);

Configuration make_world(const Options& opt);

}  // namespace rme
