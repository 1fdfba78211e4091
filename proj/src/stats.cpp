#include "rme/stats.hpp"

#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace rme {

StatsBuilder::Track& StatsBuilder::track(Pid p) {
  auto i = static_cast<size_t>(p);
  if (tracks_.size() <= i) tracks_.resize(i + 1);
  if (s_.cs_by_pid.size() <= i) s_.cs_by_pid.resize(i + 1, 0);
  return tracks_[i];
}

void StatsBuilder::add(const TraceEvent& ev) {
  Track& t = track(ev.pid);
  ++s_.events;
  s_.rmr_total += static_cast<uint64_t>(ev.rmr);
  if (ev.passage_begin) {
    t.in_passage = true;
    t.passage_rmr = 0;
    if (!t.in_super) {
      t.in_super = true;
      t.super_rmr = 0;
      t.f = 0;
    }
  }
  t.passage_rmr += static_cast<uint64_t>(ev.rmr);
  t.super_rmr += static_cast<uint64_t>(ev.rmr);
  if (ev.kind == StepKind::Crash) {
    ++s_.crashes;
    ++t.f;
  }
  if (ev.cs_enter) {
    ++s_.cs_entries;
    ++s_.cs_by_pid[static_cast<size_t>(ev.pid)];
  }
  s_.max_exit_len = std::max(s_.max_exit_len, ev.exit_len);
  s_.max_csr_len = std::max(s_.max_csr_len, ev.csr_len);
  if (ev.passage_end && t.in_passage) {
    ++s_.passages;
    ++s_.passage_rmr_hist[t.passage_rmr];
    if (ev.super_end && t.f == 0) {
      ++s_.clean_passages;
      s_.max_clean_passage_rmr = std::max(s_.max_clean_passage_rmr, t.passage_rmr);
    }
    t.in_passage = false;
  }
  if (ev.super_end && t.in_super) {
    ++s_.super_passages;
    ++s_.supers_by_f[t.f];
    auto& worst = s_.max_super_rmr_by_f[t.f];
    worst = std::max(worst, t.super_rmr);
    t.in_super = false;
  }
}

Stats stats_of(const std::vector<TraceEvent>& trace) {
  StatsBuilder b;
  for (const TraceEvent& ev : trace) b.add(ev);
  return b.stats();
}

std::string stats_table(const Stats& s) {
  std::ostringstream os;
  os << "events            " << s.events << '\n'
     << "crashes           " << s.crashes << '\n'
     << "rmr total         " << s.rmr_total << '\n'
     << "passages          " << s.passages << '\n'
     << "super-passages    " << s.super_passages << '\n'
     << "cs entries        " << s.cs_entries << '\n'
     << "max exit steps    " << s.max_exit_len << '\n'
     << "max csr steps     " << s.max_csr_len << '\n'
     << "max clean passage " << s.max_clean_passage_rmr << " rmr over " << s.clean_passages << " passages\n";
  os << "super-passage rmr by crash count\n";
  for (const auto& [f, worst] : s.max_super_rmr_by_f) {
    os << "  f=" << std::setw(3) << f << "  max " << std::setw(6) << worst << "  n=" << s.supers_by_f.at(f)
       << '\n';
  }
  os << "passage rmr histogram\n";
  for (const auto& [rmr, count] : s.passage_rmr_hist) {
    os << "  " << std::setw(6) << rmr << "  " << count << '\n';
  }
  return os.str();
}

std::string stats_records(const Stats& s) {
  using nlohmann::json;
  std::ostringstream os;
  os << json{{"record", "summary"},
             {"events", s.events},
             {"crashes", s.crashes},
             {"rmr_total", s.rmr_total},
             {"passages", s.passages},
             {"super_passages", s.super_passages},
             {"cs_entries", s.cs_entries},
             {"max_exit_steps", s.max_exit_len},
             {"max_csr_steps", s.max_csr_len},
             {"clean_passages", s.clean_passages},
             {"max_clean_passage_rmr", s.max_clean_passage_rmr}}
            .dump()
     << '\n';
  for (const auto& [f, worst] : s.max_super_rmr_by_f) {
    os << json{{"record", "super_by_f"}, {"f", f}, {"max_rmr", worst}, {"count", s.supers_by_f.at(f)}}.dump()
       << '\n';
  }
  for (const auto& [rmr, count] : s.passage_rmr_hist) {
    os << json{{"record", "passage_hist"}, {"rmr", rmr}, {"count", count}}.dump() << '\n';
  }
  for (size_t p = 0; p < s.cs_by_pid.size(); ++p) {
    os << json{{"record", "cs_by_pid"}, {"pid", p}, {"cs_entries", s.cs_by_pid[p]}}.dump() << '\n';
  }
  return os.str();
}

}  // namespace rme
