#include "rme/trace_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rme/tree.hpp"

namespace rme {

using nlohmann::json;

namespace {

const char* area_name(Area a) {
  switch (a) {
    case Area::Queue: return "queue";
    case Area::Tree: return "tree";
    case Area::RLock: return "rlock";
    case Area::Signal: return "signal";
  }
  return "?";
}

Area parse_area(const std::string& s) {
  if (s == "queue") return Area::Queue;
  if (s == "tree") return Area::Tree;
  if (s == "rlock") return Area::RLock;
  if (s == "signal") return Area::Signal;
  throw std::invalid_argument("bad area: " + s);
}

const char* op_name(OpKind k) {
  switch (k) {
    case OpKind::Read: return "read";
    case OpKind::Write: return "write";
    case OpKind::Fas: return "fas";
    case OpKind::Alloc: return "alloc";
  }
  return "?";
}

OpKind parse_op(const std::string& s) {
  if (s == "read") return OpKind::Read;
  if (s == "write") return OpKind::Write;
  if (s == "fas") return OpKind::Fas;
  if (s == "alloc") return OpKind::Alloc;
  throw std::invalid_argument("bad op: " + s);
}

Sub parse_sub(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(Sub::LkRl3); ++i) {
    if (sub_name(static_cast<Sub>(i)) == s) return static_cast<Sub>(i);
  }
  throw std::invalid_argument("bad sub-line: " + s);
}

TreePc parse_tpc(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(TreePc::Down); ++i) {
    if (s == tree_pc_name(static_cast<TreePc>(i))) return static_cast<TreePc>(i);
  }
  throw std::invalid_argument("bad tree line: " + s);
}

}  // namespace

std::string where(const TraceEvent& ev) {
  if (ev.kind == StepKind::Crash) return "crash";
  std::string s;
  if (ev.area == Area::Tree) {
    if (ev.line == Line::None) return tree_pc_name(ev.tpc);
    s = "L" + std::to_string(ev.level) + "/";
  }
  if (ev.area == Area::Signal) return sub_name(ev.sub);
  if (ev.area == Area::RLock) {
    if (ev.line == Line::X1) return "cs";
    return sub_name(ev.sub);
  }
  s += line_name(ev.line);
  if (ev.sub != Sub::None) s += "/" + sub_name(ev.sub);
  return s;
}

std::string trace_line(const TraceEvent& ev) {
  json j;
  j["i"] = ev.index;
  j["pid"] = ev.pid;
  j["kind"] = ev.kind == StepKind::Crash ? "C" : "N";
  j["at"] = where(ev);
  j["area"] = area_name(ev.area);
  j["line"] = line_name(ev.line);
  j["sub"] = sub_name(ev.sub);
  j["level"] = ev.level;
  j["tpc"] = tree_pc_name(ev.tpc);
  json ops = json::array();
  for (uint8_t i = 0; i < ev.nops; ++i) {
    const MemOp& op = ev.ops[i];
    json o{{"op", op_name(op.kind)}, {"cell", op.cell}, {"val", to_string(op.val)}, {"cost", op.cost}};
    if (op.kind == OpKind::Fas) o["old"] = to_string(op.old);
    ops.push_back(o);
  }
  j["ops"] = ops;
  j["rmr"] = ev.rmr;
  j["blocked"] = ev.blocked;
  j["branch"] = ev.branch;
  if (ev.pch_set) j["pch"] = line_name(ev.pch);
  if (ev.porth_set) j["porth"] = ev.porth;
  j["pb"] = ev.passage_begin;
  j["pe"] = ev.passage_end;
  j["se"] = ev.super_end;
  j["cs_in"] = ev.cs_enter;
  j["cs_out"] = ev.cs_leave;
  j["exit_len"] = ev.exit_len;
  j["csr_len"] = ev.csr_len;
  return j.dump();
}

TraceEvent parse_trace_line(const std::string& line) {
  json j = json::parse(line);
  TraceEvent ev;
  ev.index = j.at("i").get<uint64_t>();
  ev.pid = j.at("pid").get<Pid>();
  ev.kind = j.at("kind").get<std::string>() == "C" ? StepKind::Crash : StepKind::Normal;
  ev.area = parse_area(j.at("area").get<std::string>());
  ev.line = parse_line(j.at("line").get<std::string>());
  ev.sub = parse_sub(j.at("sub").get<std::string>());
  ev.level = j.at("level").get<int8_t>();
  ev.tpc = parse_tpc(j.at("tpc").get<std::string>());
  for (const json& o : j.at("ops")) {
    if (ev.nops >= ev.ops.size()) throw std::invalid_argument("too many ops");
    MemOp& op = ev.ops[ev.nops++];
    op.kind = parse_op(o.at("op").get<std::string>());
    op.cell = o.at("cell").get<CellId>();
    op.val = value_from_string(o.at("val").get<std::string>());
    op.cost = o.at("cost").get<uint8_t>();
    if (o.contains("old")) op.old = value_from_string(o.at("old").get<std::string>());
  }
  ev.rmr = j.at("rmr").get<int>();
  ev.blocked = j.at("blocked").get<bool>();
  ev.branch = j.at("branch").get<bool>();
  if (j.contains("pch")) {
    ev.pch_set = true;
    ev.pch = parse_line(j["pch"].get<std::string>());
  }
  if (j.contains("porth")) {
    ev.porth_set = true;
    ev.porth = j["porth"].get<int>();
  }
  ev.passage_begin = j.at("pb").get<bool>();
  ev.passage_end = j.at("pe").get<bool>();
  ev.super_end = j.at("se").get<bool>();
  ev.cs_enter = j.at("cs_in").get<bool>();
  ev.cs_leave = j.at("cs_out").get<bool>();
  ev.exit_len = j.at("exit_len").get<int>();
  ev.csr_len = j.at("csr_len").get<int>();
  return ev;
}

void write_trace(std::ostream& os, const std::vector<TraceEvent>& trace) {
  for (const TraceEvent& ev : trace) os << trace_line(ev) << '\n';
}

std::vector<TraceEvent> read_trace(std::istream& is) {
  std::vector<TraceEvent> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(parse_trace_line(line));
    } catch (const std::exception& e) {
      throw std::runtime_error("trace line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_schedule(std::ostream& os, const Schedule& s) {
  for (size_t i = 0; i < s.size(); ++i) {
    os << i << ' ' << s[i].pid << ' ' << (s[i].kind == StepKind::Crash ? 'C' : 'N') << '\n';
  }
}

Schedule read_schedule(std::istream& is) {
  Schedule s;
  std::string line;
  size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    uint64_t idx = 0;
    Pid pid = 0;
    std::string kind;
    if (!(ls >> idx >> pid >> kind) || (kind != "N" && kind != "C") || idx != s.size()) {
      throw std::runtime_error("schedule line " + std::to_string(lineno) + ": expected '" +
                               std::to_string(s.size()) + " <pid> N|C'");
    }
    s.push_back({pid, kind == "C" ? StepKind::Crash : StepKind::Normal});
  }
  return s;
}

Schedule load_schedule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_schedule(in);
}

void save_schedule(const std::string& path, const Schedule& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_schedule(out, s);
}

}  // namespace rme
