#include "rme/rlock.hpp"

namespace rme {

namespace {

// Wakes the opponent if it has registered a spin cell.
bool read_wake(StepCtx& c, const RLockLayout& L, LockRegs& r, int port) {
  int s = L.side(r.lvl, port);
  r.w = c.read(L.wake(r.lvl, port, 1 - s));
  return r.w.is_ref();
}

}  // namespace

bool rlock_acquire_step(StepCtx& c, const RLockLayout& L, LockRegs& r, int port) {
  if (r.st == Sub::None) {
    c.ev.sub = Sub::LkStart;
    if (L.depth == 0) return true;
    r.lvl = 0;
    r.st = Sub::LkScan;
  }
  c.ev.sub = r.st;
  int s = L.side(r.lvl, port);
  CellId go = L.go_cell(c.pid);
  switch (r.st) {
    case Sub::LkScan: {
      Value ph = c.read(L.phase_cell(r.lvl, port));
      r.st = ph == Value::integer(kPhaseAcquired) ? Sub::LkScanFlag : Sub::LkAq1;
      return false;
    }
    case Sub::LkScanFlag:
      if (c.read(L.flag(r.lvl, port, s)).is_true()) {
        if (++r.lvl == L.depth) return true;
        r.st = Sub::LkScan;
      } else {
        // Released before the crash: the opponent may be parked on us.
        r.st = Sub::LkRecWake;
      }
      return false;
    case Sub::LkRecWake:
      r.st = read_wake(c, L, r, port) ? Sub::LkRecWakeWrite : Sub::LkAq1;
      return false;
    case Sub::LkRecWakeWrite:
      c.write(r.w.cell(), Value::boolean(true));
      r.st = Sub::LkAq1;
      return false;
    case Sub::LkAq1:
      c.write(L.phase_cell(r.lvl, port), Value::integer(kPhaseAcquiring));
      r.st = Sub::LkAq2;
      return false;
    case Sub::LkAq2:
      c.write(L.flag(r.lvl, port, s), Value::boolean(true));
      r.st = Sub::LkAq3;
      return false;
    case Sub::LkAq3:
      c.write(L.victim(r.lvl, port), Value::integer(static_cast<uint32_t>(s)));
      r.st = Sub::LkAq4;
      return false;
    case Sub::LkAq4:
      r.st = read_wake(c, L, r, port) ? Sub::LkAq5 : Sub::LkAq6;
      return false;
    case Sub::LkAq5:
      c.write(r.w.cell(), Value::boolean(true));
      r.st = Sub::LkAq6;
      return false;
    case Sub::LkAq6:
      c.write(go, Value::boolean(false));
      r.st = Sub::LkAq7;
      return false;
    case Sub::LkAq7:
      c.write(L.wake(r.lvl, port, s), Value::ref(go));
      r.st = Sub::LkAq8;
      return false;
    case Sub::LkAq8:
      r.st = c.read(L.flag(r.lvl, port, 1 - s)).is_true() ? Sub::LkAq9 : Sub::LkAq11;
      return false;
    case Sub::LkAq9:
      r.st = c.read(L.victim(r.lvl, port)) == Value::integer(static_cast<uint32_t>(s)) ? Sub::LkAq10
                                                                                     : Sub::LkAq11;
      return false;
    case Sub::LkAq10:
      if (c.read(go).is_true()) {
        r.st = Sub::LkAq6;
      } else {
        c.ev.blocked = true;
      }
      return false;
    case Sub::LkAq11:
      c.write(L.phase_cell(r.lvl, port), Value::integer(kPhaseAcquired));
      if (++r.lvl == L.depth) return true;
      r.st = Sub::LkAq1;
      return false;
    default:
      throw SimFault("rlock acquire: bad state");
  }
}

bool rlock_release_step(StepCtx& c, const RLockLayout& L, LockRegs& r, int port) {
  if (r.st == Sub::None) {
    c.ev.sub = Sub::LkRelStart;
    if (L.depth == 0) return true;
    r.lvl = static_cast<int8_t>(L.depth - 1);
    r.st = Sub::LkRl1;
  }
  c.ev.sub = r.st;
  auto next_level = [&] {
    if (--r.lvl < 0) return true;
    r.st = Sub::LkRl1;
    return false;
  };
  switch (r.st) {
    case Sub::LkRl1:
      c.write(L.flag(r.lvl, port, L.side(r.lvl, port)), Value::boolean(false));
      r.st = Sub::LkRl2;
      return false;
    case Sub::LkRl2:
      if (read_wake(c, L, r, port)) {
        r.st = Sub::LkRl3;
        return false;
      }
      return next_level();
    case Sub::LkRl3:
      c.write(r.w.cell(), Value::boolean(true));
      return next_level();
    default:
      throw SimFault("rlock release: bad state");
  }
}

}  // namespace rme
