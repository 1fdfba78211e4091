#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rme/step.hpp"

namespace rme {

struct Stats {
  uint64_t events = 0;
  uint64_t crashes = 0;
  uint64_t rmr_total = 0;
  uint64_t passages = 0;
  uint64_t super_passages = 0;
  uint64_t cs_entries = 0;
  std::map<uint64_t, uint64_t> passage_rmr_hist;  // RMR -> passages
  // Passages of super-passages without crashes.
  uint64_t clean_passages = 0;
  uint64_t max_clean_passage_rmr = 0;
  // Completed super-passages: crash count f -> worst RMR / count.
  std::map<int, uint64_t> max_super_rmr_by_f;
  std::map<int, uint64_t> supers_by_f;
  int max_exit_len = 0;
  int max_csr_len = 0;
  std::vector<uint64_t> cs_by_pid;

  friend bool operator==(const Stats&, const Stats&) = default;
};

// Folds events into a Stats record using only the trace.
class StatsBuilder {
 public:
  void add(const TraceEvent& ev);
  const Stats& stats() const { return s_; }

 private:
  struct Track {
    bool in_passage = false;
    bool in_super = false;
    uint64_t passage_rmr = 0;
    uint64_t super_rmr = 0;
    int f = 0;
  };
  Track& track(Pid p);
  Stats s_;
  std::vector<Track> tracks_;
};

Stats stats_of(const std::vector<TraceEvent>& trace);

std::string stats_table(const Stats& s);
// Line-delimited JSON records, one per metric row.
std::string stats_records(const Stats& s);

}  // namespace rme
