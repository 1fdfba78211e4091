// rmesim: run, explore, replay and measure the recoverable locks.
//
// Exit codes: 0 ok, 1 violation (or truncated exploration), 2 usage.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <string>

#include "rme/explore.hpp"
#include "rme/invariant.hpp"
#include "rme/runtime.hpp"
#include "rme/scenarios.hpp"
#include "rme/stats.hpp"
#include "rme/trace_io.hpp"

namespace fs = std::filesystem;
using namespace rme;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct WorldFlags {
  std::string algo = "queue";
  int procs = 2;
  int ports = 2;
  std::string model = "dsm";
  int cache = 8;
  std::string signal = "dsm";
  int max_sp = 0;

  void add(CLI::App* app) {
    app->add_option("--algo", algo, "signal|rlock|queue|tree")
        ->check(CLI::IsMember({"signal", "rlock", "queue", "tree"}));
    app->add_option("--procs,-n", procs, "number of processes")->check(CLI::PositiveNumber);
    app->add_option("--ports,-k", ports, "number of ports (queue, rlock)")->check(CLI::PositiveNumber);
    app->add_option("--model", model, "cost model")->check(CLI::IsMember({"cc", "dsm"}));
    app->add_option("--cache", cache, "cache capacity under cc")->check(CLI::PositiveNumber);
    app->add_option("--signal", signal, "signal implementation")->check(CLI::IsMember({"cc", "dsm"}));
    app->add_option("--max-sp", max_sp, "super-passages per process, 0 for unbounded");
  }

  Options options() const {
    Options o;
    o.algo = parse_algo(algo);
    o.n = procs;
    o.k = ports;
    o.model = model == "cc" ? CostModel::CC : CostModel::DSM;
    o.cache = cache;
    o.signal_impl = signal == "cc" ? SignalImpl::Cc : SignalImpl::Dsm;
    o.max_super_passages = max_sp;
    return o;
  }
};

struct CheckFlags {
  std::string level = "off";
  int exit_steps = 6;
  int csr_steps = 5;

  void add(CLI::App* app) {
    app->add_option("--check-invariants", level, "off|core|extended")
        ->check(CLI::IsMember({"off", "core", "extended"}));
    app->add_option("--exit-bound", exit_steps, "Exit step bound, -1 to disable");
    app->add_option("--csr-bound", csr_steps, "CS re-entry step bound, -1 to disable");
  }

  MonitorLimits limits(const Options& o) const {
    MonitorLimits lim;
    // The bounds are stated for one queue; the tree stacks several.
    if (o.algo == Algo::Queue) {
      lim.exit_steps = exit_steps;
      lim.csr_steps = csr_steps;
    }
    return lim;
  }
  StateCheck check() const {
    CheckLevel l = parse_check_level(level);
    return l == CheckLevel::Off ? StateCheck{} : invariant_check(l);
  }
};

std::string out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("RMESIM_OUT")) return env;
  return {};
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream os(fs::path(dir) / name);
  if (!os) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
  return os;
}

void print_violation(const Violation& v) {
  std::cout << "VIOLATION " << v.kind << " at step " << v.step;
  if (v.pid >= 0) std::cout << " p" << v.pid;
  std::cout << ": " << v.detail << "\n";
}

void emit_stats(const Stats& s, const std::string& dir, bool jsonl) {
  std::cout << stats_table(s);
  if (jsonl) std::cout << stats_records(s);
  if (!dir.empty()) open_out(dir, "stats.jsonl") << stats_records(s);
}

int finish_run(const RunResult& r, const std::string& dir, bool jsonl) {
  Stats s = stats_of(r.trace);
  emit_stats(s, dir, jsonl);
  if (!dir.empty()) {
    auto os = open_out(dir, "trace.jsonl");
    write_trace(os, r.trace);
    save_schedule((fs::path(dir) / "run.sched").string(), r.schedule);
  }
  for (const Violation& v : r.violations) print_violation(v);
  for (Pid p : r.starved) std::cout << "STARVED p" << p << "\n";
  return r.violations.empty() && r.starved.empty() ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator and model checker for recoverable mutual exclusion"};
  app.require_subcommand(1);

  WorldFlags world;
  CheckFlags checks;
  std::string out;
  bool jsonl = false;

  // run
  auto* run = app.add_subcommand("run", "random or scripted run");
  world.add(run);
  checks.add(run);
  std::string schedule = "random";
  uint64_t seed = 1, steps = 100000, crash_stop = UINT64_MAX, stride = 64;
  double crash_prob = 0.0;
  int max_crashes = INT_MAX;
  run->add_option("--schedule", schedule, "'random' or a schedule file");
  run->add_option("--seed", seed);
  run->add_option("--steps", steps, "step budget");
  run->add_option("--crash-prob", crash_prob)->check(CLI::Range(0.0, 1.0));
  run->add_option("--crash-stop", crash_stop, "no crash at or after this step");
  run->add_option("--max-crashes", max_crashes, "crashes per process");
  run->add_option("--check-stride", stride, "invariant check every N steps");
  run->add_option("--out", out, "output directory (default $RMESIM_OUT)");
  run->add_flag("--jsonl", jsonl, "also print stats records");

  // explore
  auto* ex = app.add_subcommand("explore", "exhaustive exploration");
  world.add(ex);
  checks.add(ex);
  ExploreBounds bounds;
  ex->add_option("--max-crashes", bounds.max_crashes_per_proc, "crashes per process");
  ex->add_option("--max-states", bounds.max_states);
  ex->add_option("--max-depth", bounds.max_depth);
  ex->add_flag("--with-caches", bounds.with_caches, "fingerprint caches too");
  ex->add_option("--out", out, "output directory (default $RMESIM_OUT)");

  // replay
  auto* rp = app.add_subcommand("replay", "replay a schedule file");
  world.add(rp);
  checks.add(rp);
  std::string sched_file;
  rp->add_option("schedule", sched_file, "schedule file")->required();
  rp->add_option("--out", out, "output directory (default $RMESIM_OUT)");
  rp->add_flag("--jsonl", jsonl, "also print stats records");

  // stats
  auto* st = app.add_subcommand("stats", "metrics of a trace file");
  std::string trace_file;
  st->add_option("trace", trace_file, "trace file (JSONL)")->required()->check(CLI::ExistingFile);
  st->add_flag("--jsonl", jsonl, "also print stats records");

  // scenario
  auto* sc = app.add_subcommand("scenario", "built-in scenario fixtures");
  std::string which;
  std::string write_to;
  sc->add_option("name", which, "repair|handoff|sweep")
      ->required()
      ->check(CLI::IsMember({"repair", "handoff", "sweep"}));
  sc->add_option("--write", write_to, "write the schedule file here");
  sc->add_option("--schedule", sched_file, "replay this schedule instead of the built one");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    std::string dir = out_dir(out);
    if (*run) {
      Options o = world.options();
      Configuration init = make_world(o);
      RunOptions ro;
      ro.steps = steps;
      ro.seed = seed;
      ro.crash_prob = crash_prob;
      ro.crash_stop = crash_stop;
      ro.max_crashes_per_proc = max_crashes;
      ro.limits = checks.limits(o);
      ro.check = checks.check();
      ro.check_stride = stride;
      RunResult r = schedule == "random" ? run_random(init, ro) : run_script(init, load_schedule(schedule), ro);
      return finish_run(r, dir, jsonl);
    }
    if (*rp) {
      Options o = world.options();
      RunOptions ro;
      ro.limits = checks.limits(o);
      ro.check = checks.check();
      ro.check_stride = 1;
      return finish_run(run_script(make_world(o), load_schedule(sched_file), ro), dir, jsonl);
    }
    if (*ex) {
      Options o = world.options();
      if (o.max_super_passages == 0) o.max_super_passages = 1;
      ExploreReport rep = explore(make_world(o), bounds, checks.limits(o), checks.check());
      nlohmann::json j = {{"algo", world.algo},         {"procs", o.n},
                          {"ports", o.k},               {"max_sp", o.max_super_passages},
                          {"max_crashes", bounds.max_crashes_per_proc},
                          {"states", rep.states},       {"transitions", rep.transitions},
                          {"max_depth", rep.max_depth}, {"truncated", rep.truncated},
                          {"max_exit_len", rep.max_exit_len}, {"max_csr_len", rep.max_csr_len},
                          {"seconds", rep.seconds},     {"violation", nullptr}};
      if (rep.violation) {
        j["violation"] = {{"kind", rep.violation->kind}, {"detail", rep.violation->detail}};
        print_violation(*rep.violation);
        std::cout << "counterexample (" << rep.counterexample.size() << " steps):\n";
        write_schedule(std::cout, rep.counterexample);
        if (!dir.empty()) save_schedule((fs::path(dir) / "counterexample.sched").string(), rep.counterexample);
      }
      std::cout << j.dump() << "\n";
      if (!dir.empty()) open_out(dir, "explore.json") << j.dump(2) << "\n";
      if (rep.truncated) std::cout << "TRUNCATED\n";
      return rep.violation || rep.truncated ? kViolation : kOk;
    }
    if (*st) {
      std::ifstream is(trace_file);
      emit_stats(stats_of(read_trace(is)), {}, jsonl);
      return kOk;
    }
    if (*sc) {
      if (which == "repair") {
        Schedule s = sched_file.empty() ? build_repair_schedule() : load_schedule(sched_file);
        if (!write_to.empty()) save_schedule(write_to, s);
        bool ok = true;
        for (const ShapeCheck& c : replay_repair(s)) {
          std::cout << (c.ok ? "ok   " : "FAIL ") << c.title << ": " << c.got;
          if (!c.ok) std::cout << " (want " << c.want << ")";
          std::cout << "\n";
          ok = ok && c.ok;
        }
        return ok ? kOk : kViolation;
      }
      if (which == "handoff") {
        Schedule s = sched_file.empty() ? build_handoff_schedule() : load_schedule(sched_file);
        if (!write_to.empty()) save_schedule(write_to, s);
        HandoffResult h = replay_handoff(s);
        std::cout << "p1 blocked while p0 in CS: " << (h.p1_blocked_while_p0_in_cs ? "yes" : "no") << "\n"
                  << "p1 entered after p0 exit: " << (h.p1_entered_after_p0_exit ? "yes" : "no") << "\n";
        for (const Violation& v : h.violations) print_violation(v);
        bool ok = h.p1_blocked_while_p0_in_cs && h.p1_entered_after_p0_exit && h.violations.empty();
        return ok ? kOk : kViolation;
      }
      int bad = 0;
      for (Algo a : {Algo::Queue, Algo::Tree}) {
        StateCheck chk = a == Algo::Queue ? invariant_check(CheckLevel::Extended) : invariant_check(CheckLevel::Core);
        for (const SweepCase& c : solo_crash_sweep(a, 2, chk)) {
          bool ok = c.completed && c.violations.empty();
          bad += ok ? 0 : 1;
          std::cout << to_string(a) << " crash before " << c.crash_line << ": "
                    << (ok ? "recovered in " + std::to_string(c.steps) + " steps" : "FAIL") << "\n";
          for (const Violation& v : c.violations) print_violation(v);
        }
      }
      return bad == 0 ? kOk : kViolation;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
