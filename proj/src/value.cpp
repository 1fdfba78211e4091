#include "rme/value.hpp"

#include <cstdlib>

namespace rme {

std::string to_string(Value v) {
  switch (v.tag) {
    case Tag::Bot: return "bot";
    case Tag::Nil: return "nil";
    case Tag::Node: return "n" + std::to_string(v.x);
    case Tag::Bool: return v.x ? "true" : "false";
    case Tag::Sig: return v.x ? "present" : "absent";
    case Tag::Port: return "p" + std::to_string(v.x);
    case Tag::Ref: return "r" + std::to_string(v.x);
    case Tag::Int: return "i" + std::to_string(v.x);
  }
  return "?";
}

Value value_from_string(const std::string& s) {
  if (s == "bot") return Value::bot();
  if (s == "nil") return Value::nil();
  if (s == "true") return Value::boolean(true);
  if (s == "false") return Value::boolean(false);
  if (s == "present") return Value::sig(Sig::Present);
  if (s == "absent") return Value::sig(Sig::Absent);
  if (s.size() < 2) throw std::invalid_argument("bad value: " + s);
  char* end = nullptr;
  unsigned long n = std::strtoul(s.c_str() + 1, &end, 10);
  if (*end != '\0') throw std::invalid_argument("bad value: " + s);
  auto x = static_cast<uint32_t>(n);
  switch (s[0]) {
    case 'n': return Value::node(x);
    case 'p': return Value::port(x);
    case 'r': return Value::ref(x);
    case 'i': return Value::integer(x);
    default: throw std::invalid_argument("bad value: " + s);
  }
}

}  // namespace rme
