#include "rme/explore.hpp"

#include <chrono>
#include <unordered_set>

#include "rme/canon.hpp"

namespace rme {

namespace {

struct Move {
  Pid pid;
  StepKind kind;
};

std::vector<Move> moves(const Configuration& cfg, int max_crashes) {
  std::vector<Move> out;
  for (Pid p = 0; p < cfg.n(); ++p) {
    if (normal_enabled(cfg, p)) out.push_back({p, StepKind::Normal});
    if (crash_enabled(cfg, p) && cfg.procs[static_cast<size_t>(p)].crashes < max_crashes) {
      out.push_back({p, StepKind::Crash});
    }
  }
  return out;
}

// True when every unfinished process can only take blocked steps.
bool deadlocked(const Configuration& cfg) {
  bool any = false;
  for (Pid p = 0; p < cfg.n(); ++p) {
    if (!normal_enabled(cfg, p)) continue;
    any = true;
    Configuration probe = cfg;
    TraceEvent ev;
    apply_step(probe, p, StepKind::Normal, ev);
    if (!ev.blocked) return false;
  }
  return any;
}

std::optional<Violation> judge(const Configuration& cfg, const TraceEvent& ev,
                               const MonitorLimits& limits, const StateCheck& check) {
  if (auto v = monitor(cfg, ev, limits)) return v;
  if (check) {
    if (auto v = check(cfg)) {
      v->step = ev.index;
      return v;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Violation> replay_violation(const Configuration& init, const Schedule& s,
                                          const MonitorLimits& limits, const StateCheck& check,
                                          bool check_deadlock) {
  Configuration cfg = init;
  TraceEvent ev;
  for (const ScheduleEntry& e : s) {
    if (!enabled(cfg, e.pid, e.kind)) return std::nullopt;
    apply_step(cfg, e.pid, e.kind, ev);
    if (auto v = judge(cfg, ev, limits, check)) return v;
  }
  if (check_deadlock && deadlocked(cfg)) return Violation{"deadlock", "all unfinished processes blocked", cfg.steps, -1};
  return std::nullopt;
}

namespace {

// Removes chunks of the schedule while the same kind of violation persists.
Schedule minimize(const Configuration& init, Schedule s, const std::string& kind,
                  const MonitorLimits& limits, const StateCheck& check, bool check_deadlock) {
  auto still_fails = [&](const Schedule& cand) {
    auto v = replay_violation(init, cand, limits, check, check_deadlock);
    return v && v->kind == kind;
  };
  size_t chunk = s.size() / 2;
  while (chunk >= 1) {
    bool progress = false;
    for (size_t start = 0; start + chunk <= s.size();) {
      Schedule cand;
      cand.reserve(s.size() - chunk);
      cand.insert(cand.end(), s.begin(), s.begin() + static_cast<long>(start));
      cand.insert(cand.end(), s.begin() + static_cast<long>(start + chunk), s.end());
      if (still_fails(cand)) {
        s = std::move(cand);
        progress = true;
      } else {
        start += chunk;
      }
    }
    if (!progress) chunk /= 2;
  }
  return s;
}

}  // namespace

ExploreReport explore(const Configuration& init, const ExploreBounds& bounds,
                      const MonitorLimits& limits, const StateCheck& check) {
  auto t0 = std::chrono::steady_clock::now();
  ExploreReport rep;
  std::unordered_set<uint64_t> seen;
  seen.reserve(1 << 20);

  struct Frame {
    Configuration cfg;
    std::vector<Move> todo;
    size_t next = 0;
    Move via{0, StepKind::Normal};
    bool progress = false;  // some normal step was not blocked
  };
  std::vector<Frame> stack;

  auto path_here = [&] {
    Schedule s;
    for (size_t i = 1; i < stack.size(); ++i) s.push_back({stack[i].via.pid, stack[i].via.kind});
    return s;
  };
  auto path_to = [&](Move last) {
    Schedule s = path_here();
    s.push_back({last.pid, last.kind});
    return s;
  };
  auto report = [&](Violation v, Schedule s) {
    if (bounds.minimize) s = minimize(init, std::move(s), v.kind, limits, check, v.kind == "deadlock");
    if (auto again = replay_violation(init, s, limits, check, v.kind == "deadlock")) v = *again;
    rep.violation = std::move(v);
    rep.counterexample = std::move(s);
  };

  if (check) {
    if (auto v = check(init)) {
      rep.violation = *v;
      rep.states = 1;
      return rep;
    }
  }
  seen.insert(fingerprint(init, bounds.with_caches));
  rep.states = 1;
  stack.push_back(Frame{init, moves(init, bounds.max_crashes_per_proc), 0, {}, false});

  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.next == top.todo.size()) {
      if (bounds.check_deadlock && !top.progress && !all_finished(top.cfg)) {
        report(Violation{"deadlock", "all unfinished processes blocked", top.cfg.steps, -1}, path_here());
        break;
      }
      stack.pop_back();
      continue;
    }
    Move m = top.todo[top.next++];
    Configuration next = top.cfg;
    TraceEvent ev;
    apply_step(next, m.pid, m.kind, ev);
    if (ev.blocked) continue;
    if (m.kind == StepKind::Normal) top.progress = true;
    ++rep.transitions;
    rep.max_exit_len = std::max(rep.max_exit_len, ev.exit_len);
    rep.max_csr_len = std::max(rep.max_csr_len, ev.csr_len);
    if (auto v = judge(next, ev, limits, check)) {
      report(*v, path_to(m));
      break;
    }
    if (!seen.insert(fingerprint(next, bounds.with_caches)).second) continue;
    ++rep.states;
    if (rep.states >= bounds.max_states || stack.size() >= bounds.max_depth) {
      rep.truncated = true;
      break;
    }
    auto todo = moves(next, bounds.max_crashes_per_proc);
    stack.push_back(Frame{std::move(next), std::move(todo), 0, m, false});
    rep.max_depth = std::max<uint64_t>(rep.max_depth, stack.size() - 1);
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace rme
