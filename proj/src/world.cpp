#include "rme/world.hpp"

#include <cmath>
#include <stdexcept>

namespace rme {

const char* to_string(Algo a) {
  switch (a) {
    case Algo::Signal: return "signal";
    case Algo::RLock: return "rlock";
    case Algo::Queue: return "queue";
    case Algo::Tree: return "tree";
  }
  return "?";
}

Algo parse_algo(const std::string& s) {
  if (s == "signal") return Algo::Signal;
  if (s == "rlock") return Algo::RLock;
  if (s == "queue") return Algo::Queue;
  if (s == "tree") return Algo::Tree;
  throw std::invalid_argument("unknown algo: " + s);
}

std::pair<int, int> tree_shape(int n) {
  if (n < 4) return {n, 1};
  double lg = std::log2(static_cast<double>(n));
  int k = std::max(2, static_cast<int>(std::ceil(lg / std::log2(lg) - 1e-9)));
  int h = 0;
  long long reach = 1;
  while (reach < n) {
    reach *= k;
    ++h;
  }
  return {k, h};
}

int TreeLayout::port(int level, Pid p) const {
  long long d = 1;
  for (int i = 0; i < level; ++i) d *= k;
  return static_cast<int>((p / d) % k);
}

size_t TreeLayout::node_of(int level, Pid p) const {
  long long d = k;
  for (int i = 0; i < level; ++i) d *= k;
  return level_start[static_cast<size_t>(level)] + static_cast<size_t>(p / d);
}

RLockLayout build_rlock(Memory& mem, int k, Pid pid_base, int npids) {
  RLockLayout L;
  L.k = k;
  while ((1 << L.depth) < k) ++L.depth;
  L.leaves = 1 << L.depth;
  L.pid_base = pid_base;
  if (L.depth > 0) {
    std::vector<Value> cells;
    for (int i = 1; i < L.leaves; ++i) {
      cells.insert(cells.end(), {Value::boolean(false), Value::boolean(false), Value::integer(0),
                                 Value::nil(), Value::nil()});
    }
    L.nodes = mem.alloc_block(kGlobal, cells);
    L.phase = mem.alloc_block(
        kGlobal, std::vector<Value>(static_cast<size_t>(k * L.depth), Value::integer(kPhaseIdle)));
  }
  for (int i = 0; i < npids; ++i) {
    L.go.push_back(L.depth > 0 ? mem.alloc_block(pid_base + i, {Value::boolean(false)}) : kNoCell);
  }
  return L;
}

QueueLayout build_queue(Memory& mem, int k, Pid pid_base, int npids) {
  QueueLayout Q;
  Q.k = k;
  auto absent = Value::sig(Sig::Absent);
  auto present = Value::sig(Sig::Present);
  auto sentinel = [&] {
    CellId c = mem.alloc_block(kGlobal, {Value::nil(), absent, Value::nil(), absent, Value::nil()},
                               BlockKind::Sentinel);
    mem.poke(c + kPred, Value::node(c));
    return c;
  };
  Q.crash = sentinel();
  Q.incs = sentinel();
  Q.exit = sentinel();
  Q.special = mem.alloc_block(
      kGlobal, {Value::node(Q.exit), present, Value::nil(), present, Value::nil()}, BlockKind::QNode);
  Q.tail = mem.alloc_block(kGlobal, {Value::node(Q.special)});
  Q.node0 = mem.alloc_block(kGlobal, std::vector<Value>(static_cast<size_t>(k), Value::nil()));
  Q.rlock = build_rlock(mem, k, pid_base, npids);
  return Q;
}

Configuration make_world(const Options& opt) {
  if (opt.n < 1) throw std::invalid_argument("need at least one process");
  auto layout = std::make_shared<Layout>();
  layout->opt = opt;
  Configuration cfg;
  cfg.mem = Memory(opt.model, opt.n, opt.cache);
  Memory& mem = cfg.mem;
  switch (opt.algo) {
    case Algo::Signal:
      if (opt.n != 2) throw std::invalid_argument("signal harness uses one signaler and one waiter");
      layout->sig.obj = mem.alloc_block(kGlobal, {Value::sig(Sig::Absent), Value::nil()});
      break;
    case Algo::RLock:
      if (opt.k < 1 || opt.k > opt.n) throw std::invalid_argument("need 1 <= ports <= procs");
      layout->rlock = build_rlock(mem, opt.k, 0, opt.n);
      break;
    case Algo::Queue:
      if (opt.k < 1) throw std::invalid_argument("need at least one port");
      layout->queue = build_queue(mem, opt.k, 0, opt.n);
      break;
    case Algo::Tree: {
      auto [k, h] = tree_shape(opt.n);
      TreeLayout& T = layout->tree;
      T.n = opt.n;
      T.k = k;
      T.h = h;
      long long span = 1;
      for (int L = 0; L < h; ++L) {
        span *= k;
        T.level_start.push_back(T.queues.size());
        for (long long j = 0; j * span < opt.n; ++j) {
          Pid base = static_cast<Pid>(j * span);
          int cnt = static_cast<int>(std::min<long long>(span, opt.n - base));
          T.queues.push_back(build_queue(mem, k, base, cnt));
        }
      }
      for (Pid p = 0; p < opt.n; ++p) T.record.push_back(mem.alloc_block(p, {climb_record(0, false)}));
      break;
    }
  }
  layout->static_end = static_cast<CellId>(mem.size());
  cfg.layout = std::move(layout);
  cfg.procs.resize(static_cast<size_t>(opt.n));
  return cfg;
}

}  // namespace rme
