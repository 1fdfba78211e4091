#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rme/runtime.hpp"

namespace rme {

// Human-readable location of an event, e.g. "try:6/set:1" or "L1/exit:2".
std::string where(const TraceEvent& ev);

// One JSON object per line. Round-trips every TraceEvent field.
std::string trace_line(const TraceEvent& ev);
TraceEvent parse_trace_line(const std::string& line);
void write_trace(std::ostream& os, const std::vector<TraceEvent>& trace);
// Throws std::runtime_error naming the offending line number.
std::vector<TraceEvent> read_trace(std::istream& is);

// Schedule script: one "<step-index> <pid> N|C" triple per line; blank
// lines and lines starting with '#' are ignored.
void write_schedule(std::ostream& os, const Schedule& s);
Schedule read_schedule(std::istream& is);
Schedule load_schedule(const std::string& path);
void save_schedule(const std::string& path, const Schedule& s);

}  // namespace rme
