#pragma once

#include <cstdint>
#include <string>

namespace rme {

// Numbered lines of the queue algorithm. Try and Exit lines are contiguous
// so ranges such as [try:9, exit:3] are plain numeric intervals.
enum class Line : uint8_t {
  None = 0,
  T1, T2, T3, T4, T5, T6, T7, T8, T9, T10, T11, T12, T13, T14, T15, T16, T17,
  X1, X2, X3,
  R1, R2, R3, R4, R5, R6, R7, R8, R9, R10,
  R11, R12, R13, R14, R15, R16, R17, R18, R19, R20,
};

inline constexpr Line try_line(int i) { return static_cast<Line>(static_cast<int>(Line::T1) + i - 1); }
inline constexpr Line exit_line(int i) { return static_cast<Line>(static_cast<int>(Line::X1) + i - 1); }
inline constexpr Line rep_line(int i) { return static_cast<Line>(static_cast<int>(Line::R1) + i - 1); }

inline constexpr bool in_range(Line l, Line lo, Line hi) {
  return static_cast<uint8_t>(lo) <= static_cast<uint8_t>(l) &&
         static_cast<uint8_t>(l) <= static_cast<uint8_t>(hi);
}
inline constexpr bool is_rep(Line l) { return in_range(l, Line::R1, Line::R20); }

// Sub-lines of inlined procedures: Signal calls, the try:13 tail, and the
// RLock state machine.
enum class Sub : uint8_t {
  None = 0,
  Set1, Set2, Set3, Set4,
  Wait1, Wait2, Wait3, Wait4, Wait5,
  ClearNode,
  LkStart, LkScan, LkScanFlag, LkRecWake, LkRecWakeWrite,
  LkAq1, LkAq2, LkAq3, LkAq4, LkAq5, LkAq6, LkAq7, LkAq8, LkAq9, LkAq10, LkAq11,
  LkRelStart, LkRl1, LkRl2, LkRl3,
};

std::string line_name(Line l);
std::string sub_name(Sub s);
Line parse_line(const std::string& s);

}  // namespace rme
