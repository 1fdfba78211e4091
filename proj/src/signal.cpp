#include "rme/signal.hpp"

namespace rme {

bool signal_dsm_step(StepCtx& c, CellId obj, Sub& sub, SigRegs& r) {
  c.ev.sub = sub;
  switch (sub) {
    case Sub::Set1:
      c.write(obj + kSigBit, Value::sig(Sig::Present));
      sub = Sub::Set2;
      return false;
    case Sub::Set2:
      r.addr = c.read(obj + kSigGoAddr);
      sub = Sub::Set3;
      return false;
    case Sub::Set3:
      if (r.addr.is_nil()) return true;
      sub = Sub::Set4;
      return false;
    case Sub::Set4:
      if (!r.addr.is_ref()) throw SimFault("signal: GoAddr is not a reference");
      c.write(r.addr.cell(), Value::boolean(true));
      return true;
    default:
      throw SimFault("signal: bad sub-line");
  }
}

WaitResult wait_dsm_step(StepCtx& c, CellId obj, Sub& sub, SigRegs& r) {
  c.ev.sub = sub;
  switch (sub) {
    case Sub::Wait1:
      r.go = Value::ref(c.alloc({Value::bot()}, BlockKind::Plain));
      sub = Sub::Wait2;
      return WaitResult::Progress;
    case Sub::Wait2:
      c.write(r.go.cell(), Value::boolean(false));
      sub = Sub::Wait3;
      return WaitResult::Progress;
    case Sub::Wait3:
      c.write(obj + kSigGoAddr, r.go);
      sub = Sub::Wait4;
      return WaitResult::Progress;
    case Sub::Wait4:
      if (c.read(obj + kSigBit).is_present()) return WaitResult::Returned;
      sub = Sub::Wait5;
      return WaitResult::Progress;
    case Sub::Wait5:
      if (c.read(r.go.cell()).is_true()) return WaitResult::Returned;
      c.ev.blocked = true;
      return WaitResult::Blocked;
    default:
      throw SimFault("wait: bad sub-line");
  }
}

bool signal_cc_step(StepCtx& c, CellId obj, Sub& sub) {
  c.ev.sub = sub;
  if (sub != Sub::Set1) throw SimFault("signal: bad sub-line");
  c.write(obj + kSigBit, Value::sig(Sig::Present));
  return true;
}

WaitResult wait_cc_step(StepCtx& c, CellId obj, Sub& sub) {
  c.ev.sub = sub;
  if (sub != Sub::Wait1) throw SimFault("wait: bad sub-line");
  if (c.read(obj + kSigBit).is_present()) return WaitResult::Returned;
  c.ev.blocked = true;
  return WaitResult::Blocked;
}

}  // namespace rme
