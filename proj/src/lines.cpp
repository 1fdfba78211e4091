#include "rme/lines.hpp"

#include <array>
#include <stdexcept>

namespace rme {

std::string line_name(Line l) {
  auto v = static_cast<int>(l);
  if (l == Line::None) return "-";
  if (in_range(l, Line::T1, Line::T17)) return "try:" + std::to_string(v - static_cast<int>(Line::T1) + 1);
  if (in_range(l, Line::X1, Line::X3)) return "exit:" + std::to_string(v - static_cast<int>(Line::X1) + 1);
  return "rep:" + std::to_string(v - static_cast<int>(Line::R1) + 1);
}

Line parse_line(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) {
    if (s == "-") return Line::None;
    throw std::invalid_argument("bad line: " + s);
  }
  std::string sec = s.substr(0, colon);
  int i = std::stoi(s.substr(colon + 1));
  if (sec == "try" && i >= 1 && i <= 17) return try_line(i);
  if (sec == "exit" && i >= 1 && i <= 3) return exit_line(i);
  if (sec == "rep" && i >= 1 && i <= 20) return rep_line(i);
  throw std::invalid_argument("bad line: " + s);
}

std::string sub_name(Sub s) {
  static const std::array<const char*, 31> names = {
      "",        "set:1",   "set:2",   "set:3",   "set:4",   "wait:1",  "wait:2", "wait:3",
      "wait:4",  "wait:5",  "clear",   "lk:start", "lk:scan", "lk:scanf", "lk:rw1", "lk:rw2",
      "lk:aq1",  "lk:aq2",  "lk:aq3",  "lk:aq4",  "lk:aq5",  "lk:aq6",  "lk:aq7", "lk:aq8",
      "lk:aq9",  "lk:aq10", "lk:aq11", "lk:rstart", "lk:rl1", "lk:rl2",  "lk:rl3"};
  auto i = static_cast<size_t>(s);
  return i < names.size() ? names[i] : "?";
}

}  // namespace rme
