#include "rme/scenarios.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "rme/queue.hpp"
#include "rme/trace_io.hpp"

namespace rme {

const TraceEvent& ScheduleBuilder::step(Pid p, StepKind k) {
  if (!enabled(cfg_, p, k)) {
    throw SimFault("builder: step " + std::to_string(sched_.size()) + " of p" + std::to_string(p) + " not enabled");
  }
  TraceEvent ev;
  apply_step(cfg_, p, k, ev);
  sched_.push_back({p, k});
  trace_.push_back(ev);
  return trace_.back();
}

void ScheduleBuilder::run_until(
    Pid p, const std::function<bool(const Configuration&, const TraceEvent&)>& done, int cap) {
  for (int i = 0; i < cap; ++i) {
    const TraceEvent& ev = step(p);
    if (done(cfg_, ev)) return;
  }
  throw SimFault("builder: p" + std::to_string(p) + " did not reach its target");
}

void ScheduleBuilder::run_to_line(Pid p, Line l, int cap) {
  if (cfg_.procs[static_cast<size_t>(p)].q.pc == l) return;
  run_until(p, [&](const Configuration& c, const TraceEvent&) {
    return c.procs[static_cast<size_t>(p)].q.pc == l;
  }, cap);
}

void ScheduleBuilder::run_until_blocked(Pid p, int cap) {
  run_until(p, [](const Configuration&, const TraceEvent& ev) { return ev.blocked; }, cap);
}

void ScheduleBuilder::run_until_cs(Pid p, int cap) {
  run_until(p, [](const Configuration&, const TraceEvent& ev) { return ev.cs_enter; }, cap);
}

namespace {

std::string label(const Configuration& cfg, Value v) {
  const QueueLayout& L = cfg.layout->queue;
  if (!v.is_node()) return to_string(v);
  if (v.cell() == L.special) return "x";
  Pid o = cfg.mem.owner(v.cell());
  if (o < 0) return to_string(v);
  return "p" + std::to_string(o + 1);
}

std::string render(const std::vector<std::vector<std::string>>& frags, const std::string& tail) {
  std::vector<std::string> parts;
  for (const auto& f : frags) {
    std::string s = "[";
    for (size_t i = 0; i < f.size(); ++i) s += (i ? " " : "") + f[i];
    parts.push_back(s + "]");
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& s : parts) out += s + " ";
  return out + "Tail=" + tail;
}

ShapeCheck expect(std::string title, std::vector<std::vector<std::string>> frags, std::string tail) {
  ShapeCheck c;
  c.title = std::move(title);
  c.want = render(frags, tail);
  return c;
}

}  // namespace

std::string queue_shape(const Configuration& cfg) {
  const QueueLayout& L = cfg.layout->queue;
  std::set<std::vector<std::string>> seen;
  for (int q = 0; q < L.k; ++q) {
    Value nq = cfg.mem.peek(L.node(q));
    if (!nq.is_node()) continue;
    Fragment f = fragment_of(cfg.mem, L, nq);
    std::vector<std::string> names;
    for (Value v : f.nodes) names.push_back(label(cfg, v));
    if (!f.ok) names.push_back("!");
    seen.insert(names);
  }
  return render({seen.begin(), seen.end()}, label(cfg, cfg.mem.peek(L.tail)));
}

Options repair_options() {
  Options o;
  o.algo = Algo::Queue;
  o.n = 8;
  o.k = 8;
  o.model = CostModel::DSM;
  o.max_super_passages = 1;
  return o;
}

Schedule build_repair_schedule() {
  ScheduleBuilder b(make_world(repair_options()));
  // pN is pid N-1.
  for (Pid crashed : {0, 2, 4}) {
    b.run_to_line(crashed, Line::T5);
    b.step(crashed, StepKind::Crash);
    b.run_until_blocked(crashed + 1);
  }
  for (Pid early : {6, 7}) {
    b.run_to_line(early, Line::T4);
    b.step(early, StepKind::Crash);
  }
  // Recovery announces NonNil before the RLock; repairs wait on it.
  for (Pid p : {0, 2, 4, 6, 7}) b.run_to_line(p, Line::T15);
  b.run_until_cs(0);
  for (Pid p : {6, 4, 7, 2}) b.run_until_blocked(p);
  return b.schedule();
}

std::vector<ShapeCheck> repair_expected() {
  return {
      expect("initial", {{"p1", "p2"}, {"p3", "p4"}, {"p5", "p6"}, {"p7"}, {"p8"}}, "p6"),
      expect("after p1", {{"x", "p1", "p2"}, {"p3", "p4"}, {"p5", "p6"}, {"p7"}, {"p8"}}, "p6"),
      expect("after p7", {{"p1", "p2", "p7"}, {"p3", "p4"}, {"p5", "p6"}, {"p8"}}, "p6"),
      expect("after p5", {{"p1", "p2", "p7", "p5", "p6"}, {"p3", "p4"}, {"p8"}}, "p6"),
      expect("after p8", {{"p1", "p2", "p7", "p5", "p6", "p8"}, {"p3", "p4"}}, "p8"),
      expect("after p3", {{"p1", "p2", "p7", "p5", "p6", "p8", "p3", "p4"}}, "p4"),
  };
}

std::vector<ShapeCheck> replay_repair(const Schedule& s) {
  std::vector<ShapeCheck> want = repair_expected();
  Configuration cfg = make_world(repair_options());
  size_t next = 0;
  bool repairing = false;
  for (const ScheduleEntry& e : s) {
    if (!enabled(cfg, e.pid, e.kind)) break;
    TraceEvent ev;
    apply_step(cfg, e.pid, e.kind, ev);
    if (ev.kind != StepKind::Normal || next >= want.size()) continue;
    // rep:1 only reads, so the state after it is the state before repairs.
    bool first_rep = !repairing && is_rep(ev.line);
    if (first_rep) repairing = true;
    if (first_rep || ev.line == Line::R20) {
      want[next].got = queue_shape(cfg);
      want[next].ok = want[next].got == want[next].want;
      ++next;
    }
  }
  return want;
}

Options handoff_options() {
  Options o;
  o.algo = Algo::Queue;
  o.n = 2;
  o.k = 2;
  o.max_super_passages = 1;
  return o;
}

Schedule build_handoff_schedule() {
  ScheduleBuilder b(make_world(handoff_options()));
  b.run_until_cs(0);
  b.run_until_blocked(1);
  b.run_until(0, [](const Configuration& c, const TraceEvent&) { return finished(c, 0); });
  b.run_until_cs(1);
  b.run_until(1, [](const Configuration& c, const TraceEvent&) { return finished(c, 1); });
  return b.schedule();
}

HandoffResult replay_handoff(const Schedule& s) {
  HandoffResult r;
  RunOptions opt;
  opt.limits.exit_steps = 6;
  opt.limits.csr_steps = 5;
  RunResult run = run_script(make_world(handoff_options()), s, opt);
  r.violations = run.violations;
  bool p0_in_cs = false, p0_left = false;
  for (const TraceEvent& ev : run.trace) {
    if (ev.pid == 0 && ev.cs_enter) p0_in_cs = true;
    if (ev.pid == 0 && ev.cs_leave) p0_in_cs = false, p0_left = true;
    if (ev.pid == 1 && ev.blocked && p0_in_cs) r.p1_blocked_while_p0_in_cs = true;
    if (ev.pid == 1 && ev.cs_enter) r.p1_entered_after_p0_exit = p0_left;
  }
  if (!all_finished(run.final)) r.p1_entered_after_p0_exit = false;
  return r;
}

std::vector<SweepCase> solo_crash_sweep(Algo algo, int k, const StateCheck& check) {
  Options o;
  o.algo = algo;
  o.n = 1;
  o.k = algo == Algo::RLock ? 1 : k;
  o.max_super_passages = 1;
  const Configuration init = make_world(o);
  MonitorLimits lim;
  // The step bounds are those of the flat queue.
  if (algo == Algo::Queue) {
    lim.exit_steps = 6;
    lim.csr_steps = 5;
  }

  uint64_t len = 0;
  {
    Configuration c = init;
    TraceEvent ev;
    while (!finished(c, 0) && len < 100000) apply_step(c, 0, StepKind::Normal, ev), ++len;
  }
  std::vector<SweepCase> out;
  for (uint64_t i = 0; i < len; ++i) {
    SweepCase sc;
    sc.crash_after = static_cast<int>(i);
    Configuration c = init;
    TraceEvent ev;
    for (uint64_t j = 0; j < i; ++j) apply_step(c, 0, StepKind::Normal, ev);
    if (!crash_enabled(c, 0)) continue;
    {
      Configuration peek = c;
      TraceEvent next;
      apply_step(peek, 0, StepKind::Normal, next);
      sc.crash_line = where(next);
    }
    apply_step(c, 0, StepKind::Crash, ev);
    for (int j = 0; j < 100000 && !finished(c, 0); ++j) {
      apply_step(c, 0, StepKind::Normal, ev);
      ++sc.steps;
      if (auto v = monitor(c, ev, lim)) sc.violations.push_back(*v);
      if (check) {
        if (auto v = check(c)) sc.violations.push_back(*v);
      }
      if (!sc.violations.empty()) break;
    }
    sc.completed = finished(c, 0);
    out.push_back(std::move(sc));
  }
  return out;
}

std::string fixture_path(const std::string& dir, const std::string& name) { return dir + "/" + name; }

}  // namespace rme
