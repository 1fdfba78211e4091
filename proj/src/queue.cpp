#include "rme/queue.hpp"

#include <algorithm>

#include "rme/rlock.hpp"
#include "rme/signal.hpp"

namespace rme {

namespace {

CellId field(Value node, uint32_t off) {
  if (!node.is_node()) throw SimFault("dereference of non-node value " + to_string(node));
  return node.cell() + off;
}

void add_vertex(std::vector<Value>& V, Value v) {
  if (std::find(V.begin(), V.end(), v) == V.end()) V.push_back(v);
}

bool in_cs_or_exit(const QueueLayout& L, Value v) {
  return v == Value::node(L.incs) || v == Value::node(L.exit);
}

void begin_release(QueueRegs& r) {
  r.pc = Line::T15;
  r.lk_release = true;
  r.lk = LockRegs{};
}

}  // namespace

Value pred_of(const Memory& m, Value node) {
  if (!node.is_node() || !m.allocated(node.cell())) return Value::bot();
  return m.peek(node.cell() + kPred);
}

void queue_crash(QueueRegs& r) { r = QueueRegs{}; }

Line logical_line(const QueueRegs& r) {
  switch (r.pc) {
    case Line::T6: return r.sub == Sub::Set1 ? Line::T6 : Line::T16;
    case Line::T14: return r.sub == Sub::Set1 ? Line::T14 : Line::T15;
    case Line::X2: return r.sub == Sub::Set1 ? Line::X2 : Line::X3;
    default: return r.pc;
  }
}

QEvent queue_step(StepCtx& c, const QueueLayout& L, QueueRegs& r, int port) {
  c.ev.line = r.pc;
  const Value crash = Value::node(L.crash);
  const Value incs = Value::node(L.incs);
  const Value exit = Value::node(L.exit);
  switch (r.pc) {
    case Line::T1: {
      r.in_try = true;
      r.pc = c.read(L.node(port)).is_nil() ? Line::T2 : Line::T8;
      return QEvent::None;
    }
    case Line::T2: {
      CellId b = c.alloc({Value::nil(), Value::sig(Sig::Absent), Value::nil(), Value::sig(Sig::Absent),
                          Value::nil()},
                         BlockKind::QNode);
      r.mynode = Value::node(b);
      c.pch(Line::T3);
      r.pc = Line::T3;
      return QEvent::None;
    }
    case Line::T3:
      c.write(L.node(port), r.mynode);
      c.pch(Line::T4);
      r.pc = Line::T4;
      return QEvent::None;
    case Line::T4:
      r.mypred = c.fas(L.tail, r.mynode);
      c.pch(Line::T5);
      r.pc = Line::T5;
      return QEvent::None;
    case Line::T5:
      c.write(field(r.mynode, kPred), r.mypred);
      c.pch(Line::T6);
      r.pc = Line::T6;
      r.sub = Sub::Set1;
      return QEvent::None;
    case Line::T6: {
      if (r.sub == Sub::Set1) c.pch(Line::T16);
      if (signal_dsm_step(c, field(r.mynode, kNonNil), r.sub, r.sig)) {
        r.pc = Line::T16;
        r.sub = Sub::Wait1;
      }
      return QEvent::None;
    }
    case Line::T8:
      r.mynode = c.read(L.node(port));
      r.pc = Line::T9;
      return QEvent::None;
    case Line::T9: {
      CellId pc = field(r.mynode, kPred);
      if (c.read(pc).is_nil()) c.write(pc, crash);
      r.pc = Line::T10;
      return QEvent::None;
    }
    case Line::T10:
      r.mypred = c.read(field(r.mynode, kPred));
      r.pc = Line::T11;
      return QEvent::None;
    case Line::T11:
      if (r.mypred == incs) {
        r.pc = Line::X1;
        return QEvent::EnteredCS;
      }
      r.pc = Line::T12;
      return QEvent::None;
    case Line::T12:
      r.pc = r.mypred == exit ? Line::T13 : Line::T14;
      r.sub = Sub::Set1;
      return QEvent::None;
    case Line::T13: {
      if (r.sub == Sub::ClearNode) {
        c.ev.sub = Sub::ClearNode;
        c.write(L.node(port), Value::nil());
        c.pch(Line::T2);
        r.pc = Line::T1;
        r.sub = Sub::None;
        return QEvent::None;
      }
      if (r.sub == Sub::Set1) c.pch(Line::X3);
      if (signal_dsm_step(c, field(r.mynode, kCs), r.sub, r.sig)) r.sub = Sub::ClearNode;
      return QEvent::None;
    }
    case Line::T14:
      if (signal_dsm_step(c, field(r.mynode, kNonNil), r.sub, r.sig)) {
        r.pc = Line::T15;
        r.sub = Sub::None;
        r.lk_release = false;
        r.lk = LockRegs{};
      }
      return QEvent::None;
    case Line::T15:
      if (!r.lk_release) {
        if (rlock_acquire_step(c, L.rlock, r.lk, port)) r.pc = Line::R1;
      } else if (rlock_release_step(c, L.rlock, r.lk, port)) {
        r.pc = Line::T16;
        r.sub = Sub::Wait1;
        r.lk_release = false;
        r.lk = LockRegs{};
      }
      return QEvent::None;
    case Line::T16:
      if (wait_dsm_step(c, field(r.mypred, kCs), r.sub, r.sig) == WaitResult::Returned) {
        c.ev.branch = true;
        c.pch(Line::T17);
        r.pc = Line::T17;
        r.sub = Sub::None;
      }
      return QEvent::None;
    case Line::T17:
      c.write(field(r.mynode, kPred), incs);
      c.pch(Line::X1);
      r.pc = Line::X1;
      return QEvent::EnteredCS;
    case Line::X1:
      c.write(field(r.mynode, kPred), exit);
      c.pch(Line::X2);
      r.pc = Line::X2;
      r.sub = Sub::Set1;
      return QEvent::None;
    case Line::X2:
      if (r.sub == Sub::Set1) c.pch(Line::X3);
      if (signal_dsm_step(c, field(r.mynode, kCs), r.sub, r.sig)) {
        r.pc = Line::X3;
        r.sub = Sub::None;
      }
      return QEvent::None;
    case Line::X3:
      c.write(L.node(port), Value::nil());
      c.pch(Line::T2);
      r.pc = Line::T1;
      r.in_try = false;
      return QEvent::ExitDone;

    // Repair, run while holding the RLock.
    case Line::R1:
      if (r.mypred != crash) {
        c.ev.branch = true;
        c.pch(Line::T16);
        begin_release(r);
      } else {
        r.pc = Line::R2;
      }
      return QEvent::None;
    case Line::R2:
      r.tail = c.read(L.tail);
      r.V.clear();
      r.E.clear();
      r.graph_set = true;
      r.paths.clear();
      r.paths_set = false;
      r.tailpath = kRegNil;
      r.headpath = kRegNil;
      r.idx = 0;
      r.pc = Line::R3;
      return QEvent::None;
    case Line::R3:
      r.pc = r.idx < L.k ? Line::R4 : Line::R10;
      return QEvent::None;
    case Line::R4:
      r.cur = c.read(L.node(r.idx));
      r.pc = Line::R5;
      return QEvent::None;
    case Line::R5:
      if (r.cur.is_nil()) {
        ++r.idx;
        r.pc = Line::R3;
      } else {
        r.pc = Line::R6;
        r.sub = Sub::Wait1;
      }
      return QEvent::None;
    case Line::R6:
      if (wait_dsm_step(c, field(r.cur, kNonNil), r.sub, r.sig) == WaitResult::Returned) {
        c.ev.branch = true;
        r.pc = Line::R7;
        r.sub = Sub::None;
      }
      return QEvent::None;
    case Line::R7:
      r.curpred = c.read(field(r.cur, kPred));
      r.pc = Line::R8;
      return QEvent::None;
    case Line::R8:
      if (L.is_sentinel(r.curpred)) {
        add_vertex(r.V, r.cur);
        ++r.idx;
        r.pc = Line::R3;
      } else {
        r.pc = Line::R9;
      }
      return QEvent::None;
    case Line::R9: {
      add_vertex(r.V, r.cur);
      add_vertex(r.V, r.curpred);
      Edge e{r.cur, r.curpred};
      if (std::find(r.E.begin(), r.E.end(), e) == r.E.end()) r.E.push_back(e);
      ++r.idx;
      r.pc = Line::R3;
      return QEvent::None;
    }
    case Line::R10:
      r.paths = compute_maximal_paths(r.V, r.E).paths;
      r.paths_set = true;
      r.pc = Line::R11;
      return QEvent::None;
    case Line::R11:
      r.mypath = static_cast<int16_t>(path_containing(r.paths, r.mynode));
      r.pc = Line::R12;
      return QEvent::None;
    case Line::R12:
      if (std::find(r.V.begin(), r.V.end(), r.tail) != r.V.end()) {
        r.tailpath = static_cast<int16_t>(path_containing(r.paths, r.tail));
      }
      r.seq = 0;
      r.pc = Line::R13;
      return QEvent::None;
    case Line::R13:
      r.pc = r.seq < static_cast<int>(r.paths.size()) ? Line::R14 : Line::R17;
      return QEvent::None;
    case Line::R14:
      if (in_cs_or_exit(L, c.read(field(front(r.paths[r.seq]), kPred)))) {
        r.pc = Line::R15;
      } else {
        ++r.seq;
        r.pc = Line::R13;
      }
      return QEvent::None;
    case Line::R15:
      if (c.read(field(rear(r.paths[r.seq]), kPred)) != exit) {
        r.pc = Line::R16;
      } else {
        ++r.seq;
        r.pc = Line::R13;
      }
      return QEvent::None;
    case Line::R16:
      r.headpath = r.seq;
      ++r.seq;
      r.pc = Line::R13;
      return QEvent::None;
    case Line::R17: {
      bool fas_tail = r.tailpath == kRegNil ||
                      in_cs_or_exit(L, c.read(field(front(r.paths.at(r.tailpath)), kPred)));
      r.pc = fas_tail ? Line::R18 : Line::R19;
      return QEvent::None;
    }
    case Line::R18:
      if (r.mypath < 0) throw SimFault("rep:18 without mypath");
      r.mypred = c.fas(L.tail, rear(r.paths[r.mypath]));
      c.pch(Line::T5);
      r.pc = Line::R20;
      return QEvent::None;
    case Line::R19:
      r.mypred = r.headpath >= 0 ? rear(r.paths[r.headpath]) : Value::node(L.special);
      c.pch(Line::T5);
      r.pc = Line::R20;
      return QEvent::None;
    case Line::R20:
      c.write(field(r.mynode, kPred), r.mypred);
      c.pch(Line::T16);
      begin_release(r);
      return QEvent::None;
    default:
      throw SimFault("queue: bad pc " + line_name(r.pc));
  }
}

Fragment fragment_of(const Memory& m, const QueueLayout& L, Value node) {
  Fragment f;
  if (!node.is_node()) return f;
  auto is_head_pred = [&](Value p) { return p.is_nil() || L.is_sentinel(p); };
  Value head = node;
  for (int hops = 0;; ++hops) {
    Value p = pred_of(m, head);
    if (is_head_pred(p)) break;
    if (!p.is_node() || m.kind(p.cell()) != BlockKind::QNode || hops > L.k + 2) {
      f.ok = false;
      break;
    }
    head = p;
  }
  f.nodes.push_back(head);
  for (int hops = 0; hops <= L.k + 1; ++hops) {
    Value succ = Value::nil();
    for (int q = 0; q < L.k; ++q) {
      Value nq = m.peek(L.node(q));
      if (!nq.is_node() || pred_of(m, nq) != f.nodes.back()) continue;
      if (succ.is_nil()) succ = nq;
      else if (nq != succ) f.ok = false;
    }
    if (succ.is_nil()) return f;
    if (std::find(f.nodes.begin(), f.nodes.end(), succ) != f.nodes.end()) {
      f.ok = false;
      return f;
    }
    f.nodes.push_back(succ);
  }
  f.ok = false;
  return f;
}

}  // namespace rme
