#include "rme/tree.hpp"

namespace rme {

const char* tree_pc_name(TreePc pc) {
  switch (pc) {
    case TreePc::Rem: return "tree:record";
    case TreePc::Climb: return "tree:climb";
    case TreePc::Up: return "tree:up";
    case TreePc::CS: return "tree:cs";
    case TreePc::Rec1: return "tree:node";
    case TreePc::Rec2: return "tree:pred";
    case TreePc::Exit: return "tree:exit";
    case TreePc::Down: return "tree:down";
  }
  return "?";
}

void tree_crash(ProcState& ps) {
  ps.tpc = TreePc::Rem;
  ps.level = -1;
  queue_crash(ps.q);
}

QEvent tree_step(StepCtx& c, const TreeLayout& T, ProcState& ps) {
  c.ev.area = Area::Tree;
  c.ev.tpc = ps.tpc;
  c.ev.level = static_cast<int8_t>(ps.level);
  const CellId rec = T.record[static_cast<size_t>(c.pid)];
  switch (ps.tpc) {
    case TreePc::Rem: {
      auto v = c.read(rec).x;
      int level = static_cast<int>(v / 2);
      bool releasing = (v & 1) != 0;
      ps.level = level;
      c.ev.level = static_cast<int8_t>(level);
      if (releasing) {
        ps.tpc = TreePc::Rec1;
      } else if (level == T.h) {
        ps.tpc = TreePc::CS;
        return QEvent::EnteredCS;
      } else {
        ps.tpc = TreePc::Climb;
        queue_crash(ps.q);
      }
      return QEvent::None;
    }
    case TreePc::Climb: {
      QEvent e = queue_step(c, T.at(ps.level, c.pid), ps.q, T.port(ps.level, c.pid));
      if (e == QEvent::EnteredCS) ps.tpc = TreePc::Up;
      return QEvent::None;
    }
    case TreePc::Up:
      c.write(rec, climb_record(ps.level + 1, false));
      if (++ps.level == T.h) {
        ps.tpc = TreePc::CS;
        return QEvent::EnteredCS;
      }
      ps.tpc = TreePc::Climb;
      queue_crash(ps.q);
      return QEvent::None;
    case TreePc::CS:
      c.write(rec, climb_record(T.h - 1, true));
      ps.level = T.h - 1;
      ps.tpc = TreePc::Rec1;
      return QEvent::None;
    case TreePc::Rec1: {
      const QueueLayout& L = T.at(ps.level, c.pid);
      queue_crash(ps.q);
      ps.q.mynode = c.read(L.node(T.port(ps.level, c.pid)));
      ps.tpc = ps.q.mynode.is_nil() ? TreePc::Down : TreePc::Rec2;
      return QEvent::None;
    }
    case TreePc::Rec2: {
      const QueueLayout& L = T.at(ps.level, c.pid);
      Value p = c.read(ps.q.mynode.cell() + kPred);
      ps.q.in_try = true;
      if (p == Value::node(L.incs)) {
        ps.q.pc = Line::X1;
      } else if (p == Value::node(L.exit)) {
        ps.q.pc = Line::X2;
        ps.q.sub = Sub::Set1;
      } else {
        throw SimFault("tree release: level not held");
      }
      ps.tpc = TreePc::Exit;
      return QEvent::None;
    }
    case TreePc::Exit: {
      QEvent e = queue_step(c, T.at(ps.level, c.pid), ps.q, T.port(ps.level, c.pid));
      if (e == QEvent::ExitDone) ps.tpc = TreePc::Down;
      return QEvent::None;
    }
    case TreePc::Down:
      if (ps.level == 0) {
        c.write(rec, climb_record(0, false));
        ps.tpc = TreePc::Rem;
        ps.level = -1;
        return QEvent::ExitDone;
      }
      c.write(rec, climb_record(ps.level - 1, true));
      --ps.level;
      ps.tpc = TreePc::Rec1;
      return QEvent::None;
  }
  return QEvent::None;
}

}  // namespace rme
