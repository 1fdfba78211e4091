#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rme {

using CellId = uint32_t;
using Pid = int32_t;

inline constexpr Pid kGlobal = -1;
inline constexpr CellId kNoCell = UINT32_MAX;

// Raised on harness misuse (unallocated cell, disabled step). Never an
// algorithm failure: those are reported as violations.
struct SimFault : std::logic_error {
  using std::logic_error::logic_error;
};

enum class Tag : uint8_t { Bot, Nil, Node, Bool, Sig, Port, Ref, Int };

enum class Sig : uint8_t { Absent = 0, Present = 1 };

// One memory word. Node values carry the base cell of a QNode block; the
// sentinels are ordinary Node values whose blocks the layout records.
struct Value {
  Tag tag = Tag::Bot;
  uint32_t x = 0;

  static constexpr Value bot() { return {Tag::Bot, 0}; }
  static constexpr Value nil() { return {Tag::Nil, 0}; }
  static constexpr Value node(CellId c) { return {Tag::Node, c}; }
  static constexpr Value boolean(bool b) { return {Tag::Bool, b ? 1u : 0u}; }
  static constexpr Value sig(Sig s) { return {Tag::Sig, static_cast<uint32_t>(s)}; }
  static constexpr Value port(uint32_t p) { return {Tag::Port, p}; }
  static constexpr Value ref(CellId c) { return {Tag::Ref, c}; }
  static constexpr Value integer(uint32_t i) { return {Tag::Int, i}; }

  constexpr bool is_bot() const { return tag == Tag::Bot; }
  constexpr bool is_nil() const { return tag == Tag::Nil; }
  constexpr bool is_node() const { return tag == Tag::Node; }
  constexpr bool is_ref() const { return tag == Tag::Ref; }
  constexpr bool is_true() const { return tag == Tag::Bool && x == 1; }
  constexpr bool is_present() const { return tag == Tag::Sig && x == 1; }
  constexpr CellId cell() const { return x; }

  friend constexpr bool operator==(Value, Value) = default;
};

std::string to_string(Value v);
Value value_from_string(const std::string& s);

}  // namespace rme
