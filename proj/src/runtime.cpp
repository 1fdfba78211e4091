#include "rme/runtime.hpp"

#include <algorithm>
#include <random>

#include "rme/queue.hpp"
#include "rme/rlock.hpp"
#include "rme/signal.hpp"
#include "rme/tree.hpp"

namespace rme {

namespace {

constexpr Pid kSignaler = 0;

int free_port(const Configuration& cfg, int k) {
  for (int p = 0; p < k; ++p) {
    bool used = std::any_of(cfg.procs.begin(), cfg.procs.end(),
                            [&](const ProcState& ps) { return ps.active && ps.port == p; });
    if (!used) return p;
  }
  return -1;
}

bool started(const Configuration& cfg, const ProcState& ps) {
  switch (cfg.opt().algo) {
    case Algo::Tree: return ps.tpc != TreePc::Rem;
    default: return !in_remainder(ps.q);
  }
}

// Starts a super-passage. Returns false when no port is free.
bool begin_super_passage(Configuration& cfg, ProcState& ps, TraceEvent& ev, int k) {
  if (k > 0) {
    int port = free_port(cfg, k);
    if (port < 0) return false;
    ps.port = port;
    ps.h.porth = port;
    ev.porth_set = true;
    ev.porth = port;
  }
  ps.active = true;
  ps.rmr_super = 0;
  ps.f_super = 0;
  return true;
}

QEvent step_signal(Configuration& cfg, StepCtx& c, ProcState& ps) {
  c.ev.area = Area::Signal;
  const Layout& L = *cfg.layout;
  CellId obj = L.sig.obj;
  bool dsm = L.opt.signal_impl == SignalImpl::Dsm;
  if (c.pid == kSignaler) {
    if (ps.q.sub == Sub::Set1) cfg.obs.set1_done = true;
    bool done = dsm ? signal_dsm_step(c, obj, ps.q.sub, ps.q.sig) : signal_cc_step(c, obj, ps.q.sub);
    if (done) {
      cfg.obs.signal_done = true;
      return QEvent::ExitDone;
    }
    return QEvent::None;
  }
  if (cfg.obs.signal_done) ++cfg.obs.waiter_steps_after_signal;
  WaitResult w = dsm ? wait_dsm_step(c, obj, ps.q.sub, ps.q.sig) : wait_cc_step(c, obj, ps.q.sub);
  if (w == WaitResult::Returned) {
    c.ev.branch = true;
    return QEvent::ExitDone;
  }
  return QEvent::None;
}

QEvent step_rlock(Configuration& cfg, StepCtx& c, ProcState& ps) {
  c.ev.area = Area::RLock;
  const RLockLayout& L = cfg.layout->rlock;
  QueueRegs& r = ps.q;
  c.ev.line = r.pc;
  if (r.pc == Line::X1) {
    r.pc = Line::T15;
    r.lk_release = true;
    r.lk = LockRegs{};
    return QEvent::None;
  }
  if (!r.lk_release) {
    if (rlock_acquire_step(c, L, r.lk, ps.port)) {
      r.pc = Line::X1;
      return QEvent::EnteredCS;
    }
    return QEvent::None;
  }
  if (rlock_release_step(c, L, r.lk, ps.port)) {
    queue_crash(r);
    return QEvent::ExitDone;
  }
  return QEvent::None;
}

void start_call(Configuration& cfg, Pid p, ProcState& ps) {
  QueueRegs& r = ps.q;
  r.in_try = true;
  switch (cfg.opt().algo) {
    case Algo::Signal:
      r.sub = p == kSignaler ? Sub::Set1 : Sub::Wait1;
      ps.call_steps = 0;
      ps.call_rmr = 0;
      break;
    case Algo::RLock:
      r.pc = Line::T15;
      r.lk_release = false;
      r.lk = LockRegs{};
      break;
    default:
      break;
  }
}

}  // namespace

bool finished(const Configuration& cfg, Pid p) {
  const ProcState& ps = cfg.procs[static_cast<size_t>(p)];
  int max_sp = cfg.opt().algo == Algo::Signal ? 1 : cfg.opt().max_super_passages;
  return !ps.active && max_sp > 0 && ps.sp_done >= max_sp;
}

bool all_finished(const Configuration& cfg) {
  for (Pid p = 0; p < cfg.n(); ++p) {
    if (!finished(cfg, p)) return false;
  }
  return true;
}

bool normal_enabled(const Configuration& cfg, Pid p) {
  return p >= 0 && p < cfg.n() && !finished(cfg, p);
}

bool crash_enabled(const Configuration& cfg, Pid p) {
  if (p < 0 || p >= cfg.n()) return false;
  const ProcState& ps = cfg.procs[static_cast<size_t>(p)];
  if (cfg.opt().algo == Algo::Signal && p == kSignaler) return false;
  return ps.active && started(cfg, ps);
}

bool enabled(const Configuration& cfg, Pid p, StepKind k) {
  return k == StepKind::Normal ? normal_enabled(cfg, p) : crash_enabled(cfg, p);
}

void apply_step(Configuration& cfg, Pid p, StepKind k, TraceEvent& ev) {
  ev = TraceEvent{};
  ev.index = cfg.steps;
  ev.pid = p;
  ev.kind = k;
  if (!enabled(cfg, p, k)) {
    throw SimFault("step not enabled: pid " + std::to_string(p) +
                   (k == StepKind::Crash ? " crash" : " normal"));
  }
  ProcState& ps = cfg.procs[static_cast<size_t>(p)];
  const Layout& L = *cfg.layout;
  ++cfg.steps;

  if (k == StepKind::Crash) {
    cfg.mem.crash_wipe_cache(p);
    switch (L.opt.algo) {
      case Algo::Tree: tree_crash(ps); break;
      default: queue_crash(ps.q); break;
    }
    ev.area = L.opt.algo == Algo::Tree ? Area::Tree
              : L.opt.algo == Algo::RLock ? Area::RLock
              : L.opt.algo == Algo::Signal ? Area::Signal
                                           : Area::Queue;
    ++ps.crashes;
    ++ps.f_super;
    ev.passage_end = true;
    if (ps.in_cs) {
      ps.csr_pending = true;
      ps.csr_steps = 0;
    }
    ps.exit_steps = -1;
    ps.call_steps = 0;
    ps.call_rmr = 0;
    if (L.opt.algo == Algo::Signal) cfg.obs.waiter_steps_after_signal = 0;
    ps.rmr_passage = 0;
    return;
  }

  int k_ports = L.opt.algo == Algo::Queue ? L.opt.k : L.opt.algo == Algo::RLock ? L.opt.k : 0;
  if (!ps.active) {
    if (!begin_super_passage(cfg, ps, ev, k_ports)) {
      // Every port is in use: the Remainder waits.
      ev.blocked = true;
      ev.area = L.opt.algo == Algo::RLock ? Area::RLock : Area::Queue;
      ev.line = Line::T1;
      return;
    }
  }
  bool fresh = !started(cfg, ps);
  if (fresh) {
    ev.passage_begin = true;
    ps.rmr_passage = 0;
    if (L.opt.algo != Algo::Tree) start_call(cfg, p, ps);
  }

  StepCtx c{cfg.mem, p, ev};
  QEvent e = QEvent::None;
  switch (L.opt.algo) {
    case Algo::Queue: e = queue_step(c, L.queue, ps.q, ps.port); break;
    case Algo::Tree: e = tree_step(c, L.tree, ps); break;
    case Algo::RLock: e = step_rlock(cfg, c, ps); break;
    case Algo::Signal: e = step_signal(cfg, c, ps); break;
  }

  ps.rmr_total += static_cast<uint64_t>(ev.rmr);
  ps.rmr_passage += static_cast<uint64_t>(ev.rmr);
  ps.rmr_super += static_cast<uint64_t>(ev.rmr);
  ++ps.call_steps;
  ps.call_rmr += ev.rmr;
  if (ev.pch_set) ps.h.pch = ev.pch;

  if (e == QEvent::EnteredCS) {
    ev.cs_enter = true;
    ps.in_cs = true;
    ++ps.cs_entries;
    if (ps.csr_pending) {
      ev.csr_len = ps.csr_steps + 1;
      ps.csr_pending = false;
    }
  } else if (ps.csr_pending) {
    ++ps.csr_steps;
  } else if (ps.in_cs) {
    ps.in_cs = false;
    ev.cs_leave = true;
    ps.exit_steps = 1;
  } else if (ps.exit_steps >= 0) {
    ++ps.exit_steps;
  }

  if (e == QEvent::ExitDone) {
    ev.exit_len = ps.exit_steps;
    ps.exit_steps = -1;
    ev.passage_end = true;
    ev.super_end = true;
    ps.active = false;
    ++ps.sp_done;
    if (k_ports > 0) {
      ps.port = -1;
      ps.h.porth = -1;
      ev.porth_set = true;
      ev.porth = -1;
    }
    if (L.opt.algo == Algo::Signal) ps.q.in_try = false;
  }
}

Configuration step(const Configuration& cfg, Pid p, StepKind k, TraceEvent* ev) {
  Configuration next = cfg;
  TraceEvent local;
  apply_step(next, p, k, ev ? *ev : local);
  return next;
}

Hidden track(const TraceEvent& ev, Hidden h) {
  if (ev.pch_set) h.pch = ev.pch;
  if (ev.porth_set) h.porth = ev.porth;
  return h;
}

std::optional<Violation> monitor(const Configuration& cfg, const TraceEvent& ev,
                                 const MonitorLimits& lim) {
  auto fail = [&](std::string kind, std::string detail) {
    return Violation{std::move(kind), std::move(detail), ev.index, ev.pid};
  };
  const Algo algo = cfg.opt().algo;
  if (algo != Algo::Signal) {
    int in_cs = 0;
    int at_exit1 = 0;
    for (const ProcState& ps : cfg.procs) {
      in_cs += ps.in_cs ? 1 : 0;
      at_exit1 += (algo == Algo::Queue && ps.h.pch == Line::X1) ? 1 : 0;
    }
    if (in_cs > 1 || at_exit1 > 1) {
      return fail("mutual-exclusion", std::to_string(std::max(in_cs, at_exit1)) + " processes in the CS");
    }
    if (ev.cs_enter) {
      for (Pid q = 0; q < cfg.n(); ++q) {
        if (q != ev.pid && cfg.procs[static_cast<size_t>(q)].csr_pending) {
          return fail("csr", "pid " + std::to_string(ev.pid) + " entered the CS while pid " +
                                 std::to_string(q) + " owes a CS re-entry");
        }
      }
    }
    if (lim.exit_steps >= 0 && ev.exit_len > lim.exit_steps) {
      return fail("wait-free-exit", "exit took " + std::to_string(ev.exit_len) + " steps");
    }
    if (lim.csr_steps >= 0 && ev.csr_len > lim.csr_steps) {
      return fail("wait-free-csr", "CS re-entry took " + std::to_string(ev.csr_len) + " steps");
    }
    if (cfg.procs[static_cast<size_t>(ev.pid)].csr_pending && lim.csr_steps >= 0 &&
        cfg.procs[static_cast<size_t>(ev.pid)].csr_steps >= lim.csr_steps) {
      return fail("wait-free-csr", "no CS re-entry within " + std::to_string(lim.csr_steps) + " steps");
    }
    return std::nullopt;
  }
  // Signal object: pid 0 signals once, pid 1 waits.
  const ProcState& ps = cfg.procs[static_cast<size_t>(ev.pid)];
  if (ev.kind == StepKind::Crash) return std::nullopt;
  if (ev.pid == 0) {
    if (ps.call_steps > lim.signal_steps) return fail("signal-steps", "signal() exceeded its step bound");
    if (ps.call_rmr > lim.signal_rmr) return fail("signal-rmr", "signal() exceeded its RMR bound");
    if (ev.super_end && !cfg.mem.peek(cfg.layout->sig.obj + kSigBit).is_present()) {
      return fail("signal-state", "signal() returned with Bit absent");
    }
    return std::nullopt;
  }
  if (ev.super_end && !cfg.obs.set1_done) return fail("wait-early", "wait() returned before set:1");
  if (ps.call_rmr > lim.wait_rmr) return fail("wait-rmr", "wait() exceeded its RMR bound");
  if (ps.active && cfg.obs.waiter_steps_after_signal >= lim.wait_after_signal) {
    return fail("wait-bounded", "wait() still running after signal() completed");
  }
  return std::nullopt;
}

namespace {

struct Driver {
  RunResult res;
  const RunOptions& opt;
  std::vector<bool> in_try_at_stop;
  std::vector<bool> reached_cs;
  bool stop_recorded = false;

  Driver(const Configuration& init, const RunOptions& o) : opt(o) {
    res.final = init;
    in_try_at_stop.assign(static_cast<size_t>(init.n()), false);
    reached_cs.assign(static_cast<size_t>(init.n()), false);
  }

  void note_crash_stop() {
    if (stop_recorded) return;
    stop_recorded = true;
    for (Pid p = 0; p < res.final.n(); ++p) {
      const ProcState& ps = res.final.procs[static_cast<size_t>(p)];
      in_try_at_stop[static_cast<size_t>(p)] = ps.active && !ps.in_cs;
    }
  }

  // Returns false when the run must stop.
  bool take(Pid p, StepKind k) {
    if (res.final.steps >= opt.crash_stop) note_crash_stop();
    TraceEvent ev;
    apply_step(res.final, p, k, ev);
    res.schedule.push_back({p, k});
    ++res.steps;
    if (stop_recorded && ev.cs_enter) reached_cs[static_cast<size_t>(p)] = true;
    bool ok = true;
    if (auto v = monitor(res.final, ev, opt.limits)) {
      res.violations.push_back(*v);
      ok = false;
    }
    if (ok && opt.check && (opt.check_stride <= 1 || res.steps % opt.check_stride == 0)) {
      if (auto v = opt.check(res.final)) {
        v->step = ev.index;
        res.violations.push_back(*v);
        ok = false;
      }
    }
    if (opt.keep_trace) res.trace.push_back(ev);
    return ok || !opt.stop_on_violation;
  }

  void finish() {
    if (!stop_recorded) return;
    for (Pid p = 0; p < res.final.n(); ++p) {
      if (in_try_at_stop[static_cast<size_t>(p)] && !reached_cs[static_cast<size_t>(p)]) {
        res.starved.push_back(p);
      }
    }
  }
};

}  // namespace

RunResult run_random(const Configuration& init, const RunOptions& opt) {
  Driver d(init, opt);
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<Pid> live;
  for (uint64_t i = 0; i < opt.steps; ++i) {
    const Configuration& cfg = d.res.final;
    live.clear();
    for (Pid p = 0; p < cfg.n(); ++p) {
      if (normal_enabled(cfg, p)) live.push_back(p);
    }
    if (live.empty()) break;
    Pid p = live[std::uniform_int_distribution<size_t>(0, live.size() - 1)(rng)];
    StepKind k = StepKind::Normal;
    double toss = coin(rng);
    if (cfg.steps < opt.crash_stop && crash_enabled(cfg, p) &&
        cfg.procs[static_cast<size_t>(p)].crashes < opt.max_crashes_per_proc && toss < opt.crash_prob) {
      k = StepKind::Crash;
    }
    if (!d.take(p, k)) break;
  }
  if (opt.crash_stop != UINT64_MAX && d.res.final.steps >= opt.crash_stop) d.note_crash_stop();
  d.finish();
  return std::move(d.res);
}

RunResult run_script(const Configuration& init, const Schedule& sched, const RunOptions& opt) {
  Driver d(init, opt);
  for (const ScheduleEntry& e : sched) {
    if (!d.take(e.pid, e.kind)) break;
  }
  d.finish();
  return std::move(d.res);
}

Schedule schedule_of(const std::vector<TraceEvent>& trace) {
  Schedule s;
  s.reserve(trace.size());
  for (const TraceEvent& ev : trace) s.push_back({ev.pid, ev.kind});
  return s;
}

}  // namespace rme
