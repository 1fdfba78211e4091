#include "rme/invariant.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "rme/queue.hpp"

namespace rme {

namespace {

using L_ = Line;

constexpr std::array<const char*, kAllConditions + 1> kLabels = {
    "tree",   "cond1",  "cond2",  "cond54", "cond3",  "cond57", "cond47", "cond4",
    "cond5",  "cond7",  "cond8",  "cond52", "cond53", "cond9",  "cond10", "cond11",
    "cond15", "cond14", "cond16", "cond17", "cond33", "cond22", "cond55", "cond32",
    "cond28", "cond58", "cond59", "cond25", "cond35", "cond56", "cond13", "cond63",
    "cond12", "cond60", "cond26", "cond27", "cond61", "cond43", "cond44", "cond45",
};

bool rng(Line l, Line a, Line b) { return in_range(l, a, b); }
bool one_of(Line l, std::initializer_list<Line> s) {
  return std::find(s.begin(), s.end(), l) != s.end();
}

using Res = std::optional<std::string>;

struct Frag {
  std::vector<Value> nodes;
  bool ok = true;
  Value head() const { return nodes.empty() ? Value::nil() : nodes.front(); }
  Value tail() const { return nodes.empty() ? Value::nil() : nodes.back(); }
  bool has(Value v) const { return std::find(nodes.begin(), nodes.end(), v) != nodes.end(); }
  friend bool operator==(const Frag& a, const Frag& b) { return a.nodes == b.nodes; }
};

struct Proc {
  Pid id = 0;
  Line pc = Line::T1;
  Line pch = Line::T2;
  int porth = -1;
  Value np;  // Node[porth]
  Value nh;  // hidden node
  const QueueRegs* r = nullptr;
};

class Ctx {
 public:
  Ctx(const Configuration& cfg, const QueueLayout& L) : cfg_(cfg), m_(cfg.mem), L_(L) {
    crash_ = Value::node(L.crash);
    incs_ = Value::node(L.incs);
    exit_ = Value::node(L.exit);
    special_ = Value::node(L.special);
    tailv_ = m_.peek(L.tail);
    for (int q = 0; q < L.k; ++q) nodes_.push_back(m_.peek(L.node(q)));
    for (Pid i = 0; i < cfg.n(); ++i) {
      const ProcState& ps = cfg.procs[static_cast<size_t>(i)];
      Proc p;
      p.id = i;
      p.r = &ps.q;
      p.pc = logical_line(ps.q);
      p.pch = ps.h.pch;
      p.porth = ps.h.porth;
      p.np = node_at(p.porth);
      if (rng(p.pch, L_::T4, L_::T6) || rng(p.pch, L_::T16, L_::X3)) {
        p.nh = p.np;
      } else if (p.pc == L_::T3) {
        p.nh = ps.q.mynode;
      } else {
        p.nh = Value::nil();
      }
      procs_.push_back(p);
    }
    for (const Proc& p : procs_) {
      if (in_q(p)) q_.push_back(p.id);
    }
  }

  Res run(int id);
  bool applicable(int id) const;
  const std::vector<Pid>& q() const { return q_; }
  Value nh(Pid p) const { return procs_[static_cast<size_t>(p)].nh; }

 private:
  // Values.
  Value node_at(int port) const {
    return port >= 0 && port < L_.k ? nodes_[static_cast<size_t>(port)] : Value::nil();
  }
  bool in_n(Value v) const {
    return v.is_node() && m_.allocated(v.cell()) && m_.kind(v.cell()) == BlockKind::QNode &&
           m_.block_base(v.cell()) == v.cell();
  }
  Value pred(Value v) const { return pred_of(m_, v); }
  bool ie(Value v) const { return v == incs_ || v == exit_; }
  bool nil_or_crash(Value v) const { return v.is_nil() || v == crash_; }
  bool present(Value node, uint32_t field) const {
    return node.is_node() && m_.peek(node.cell() + field).is_present();
  }
  bool absent(Value node, uint32_t field) const {
    return node.is_node() && m_.peek(node.cell() + field) == Value::sig(Sig::Absent);
  }
  bool announced(Value v) const {
    return std::find(nodes_.begin(), nodes_.end(), v) != nodes_.end();
  }
  bool some_pred_is(Value v) const {
    for (Value n : nodes_) {
      if (n.is_node() && pred(n) == v) return true;
    }
    return false;
  }

  const Frag& frag(Value v) {
    for (auto& [key, f] : frags_) {
      if (key == v) return f;
    }
    Frag f;
    if (v.is_node()) {
      Fragment raw = fragment_of(m_, L_, v);
      f.nodes = std::move(raw.nodes);
      f.ok = raw.ok && std::find(f.nodes.begin(), f.nodes.end(), v) != f.nodes.end();
      for (Value x : f.nodes) f.ok = f.ok && in_n(x);
    }
    frags_.emplace_back(v, std::move(f));
    return frags_.back().second;
  }
  // x is in the fragment of v at or before v.
  bool ahead(Value v, Value x) {
    for (Value y : frag(v).nodes) {
      if (y == x) return true;
      if (y == v) return false;
    }
    return false;
  }
  Value head_pred(Value v) { return v.is_node() ? pred(frag(v).head()) : Value::bot(); }

  const std::vector<Value>& all_nodes() {
    if (!n_ready_) {
      for (CellId c = 0; c < m_.size(); c += m_.block_len(c)) {
        if (m_.kind(c) == BlockKind::QNode) n_set_.push_back(Value::node(c));
      }
      n_ready_ = true;
    }
    return n_set_;
  }

  bool in_q(const Proc& p) {
    if (p.pch == L_::X1) return true;
    if (!one_of(p.pch, {L_::T6, L_::T16, L_::T17}) || !p.nh.is_node()) return false;
    return ie(head_pred(p.nh));
  }

  template <class F>
  bool other(const Proc& p, F f) const {
    for (const Proc& o : procs_) {
      if (o.id != p.id && f(o)) return true;
    }
    return false;
  }
  template <class F>
  bool any(F f) const {
    for (const Proc& o : procs_) {
      if (f(o)) return true;
    }
    return false;
  }

  std::string nm(Value v) const {
    if (v == crash_) return "Crash";
    if (v == incs_) return "InCS";
    if (v == exit_) return "Exit";
    if (v == special_) return "SpecialNode";
    return to_string(v);
  }
  void put(std::ostringstream& os, Value v) const { os << nm(v); }
  void put(std::ostringstream& os, Line l) const { os << line_name(l); }
  void put(std::ostringstream& os, const Proc& p) const {
    os << "p" << p.id << "(pc=" << line_name(p.pc) << ",pch=" << line_name(p.pch)
       << ",porth=" << p.porth << ",node=" << nm(p.nh) << ")";
  }
  template <class T>
  void put(std::ostringstream& os, const T& t) const { os << t; }
  template <class... A>
  Res fail(const A&... a) const {
    std::ostringstream os;
    (put(os, a), ...);
    return os.str();
  }

  // Shared clause family on a node x that someone waits on or that Tail
  // points to: signals, exit ownership and the queued set.
  Res pred_family(const Proc* self, Value x, bool exit_clauses, bool head_clause,
                  bool strict_other, const char* what);

  std::optional<PathSet> graph(const Proc& p) const {
    if (!p.r->graph_set) return std::nullopt;
    return compute_maximal_paths(p.r->V, p.r->E);
  }
  bool in_v(const Proc& p, Value v) const {
    return std::find(p.r->V.begin(), p.r->V.end(), v) != p.r->V.end();
  }
  bool in_e(const Proc& p, Value a, Value b) const {
    return std::find(p.r->E.begin(), p.r->E.end(), Edge{a, b}) != p.r->E.end();
  }
  Value tail_hp(const Proc& p) { return head_pred(p.r->tail); }
  bool qualifying(const Path& s) const { return ie(pred(front(s))) && pred(rear(s)) != exit_; }
  // x = rear of a qualifying path that ends a fragment whose head is in CS
  // or exited, apart from p's fragment.
  bool handoff_target(const Proc& p, Value x) {
    return in_n(x) && x == frag(x).tail() && ie(head_pred(x)) && !(frag(p.nh) == frag(x));
  }

  Res c1(), c2(), c3(), c4(), c5(), c6(), c7(), c8(), c9(), c10(), c11(), c12(), c13(), c14(),
      c15(), c16(), c17(), c18(), c19(), c20(), c21(), c22(), c23(), c24(), c25(), c26(), c27(),
      c28(), c29(), c30(), c31(), c32(), c33(), c34(), c35(), c36(), c37(), c38(), c39();

  const Configuration& cfg_;
  const Memory& m_;
  const QueueLayout& L_;
  Value crash_, incs_, exit_, special_, tailv_;
  std::vector<Value> nodes_;
  std::vector<Proc> procs_;
  std::vector<Pid> q_;
  std::deque<std::pair<Value, Frag>> frags_;
  std::vector<Value> n_set_;
  bool n_ready_ = false;
};

Res Ctx::pred_family(const Proc* self, Value x, bool exit_clauses, bool head_clause,
                     bool strict_other, const char* what) {
  auto others = [&](auto f) {
    for (const Proc& o : procs_) {
      if ((!strict_other || self == nullptr || o.id != self->id) && f(o)) return true;
    }
    return false;
  };
  Value xp = pred(x);
  if (!(present(x, kCs) || others([&](const Proc& o) {
        return o.nh == x && (one_of(o.pch, {L_::T5, L_::T6}) || rng(o.pch, L_::T16, L_::X2));
      }))) {
    return fail(what, " ", x, ": CS_Signal absent and no owner in [try:5,exit:2]");
  }
  if (xp == incs_ && !others([&](const Proc& o) { return o.pch == L_::X1 && o.nh == x; })) {
    return fail(what, " ", x, ": Pred=InCS without owner at exit:1");
  }
  if (xp == exit_) {
    bool owner = others([&](const Proc& o) { return rng(o.pch, L_::X2, L_::X3) && o.nh == x; });
    if (!owner && announced(x)) return fail(what, " ", x, ": Pred=Exit, announced, no owner exiting");
    if (exit_clauses && !q_.empty()) return fail(what, " ", x, ": Pred=Exit but |Q|=", q_.size());
  }
  if (!ie(xp) && !others([&](const Proc& o) {
        return o.nh == x && (rng(o.pch, L_::T5, L_::T6) || rng(o.pch, L_::T16, L_::T17));
      })) {
    return fail(what, " ", x, ": Pred=", xp, " and no owner in [try:5,try:6]u[try:16,try:17]");
  }
  if (head_clause && nil_or_crash(head_pred(x))) {
    bool ok = others([&](const Proc& o) {
      return o.pch == L_::T5 && o.nh.is_node() && frag(o.nh).tail() == x &&
             frag(o.nh).head() == o.nh;
    });
    if (!ok) return fail(what, " ", x, ": fragment head unlinked and no try:5 owner heading it");
  }
  return std::nullopt;
}

// ---- Core conditions ----

Res Ctx::c1() {
  for (const Proc& p : procs_) {
    bool early = one_of(p.pch, {L_::T2, L_::T3});
    if (early != p.np.is_nil()) return fail(p, ": pch in {try:2,try:3} <=> Node[porth]=NIL fails");
    if (p.np.is_nil()) continue;
    Value pr = pred(p.nh);
    if (one_of(p.pch, {L_::T4, L_::T5}) != nil_or_crash(pr))
      return fail(p, ": pch in {try:4,try:5} <=> Pred in {NIL,Crash} fails, Pred=", pr);
    if (one_of(p.pch, {L_::T6, L_::T16, L_::T17}) != in_n(pr))
      return fail(p, ": pch in {try:6,try:16,try:17} <=> Pred in N' fails, Pred=", pr);
    if ((p.pch == L_::X1) != (pr == incs_))
      return fail(p, ": pch=exit:1 <=> Pred=InCS fails, Pred=", pr);
    if (one_of(p.pch, {L_::X2, L_::X3}) != (pr == exit_))
      return fail(p, ": pch in {exit:2,exit:3} <=> Pred=Exit fails, Pred=", pr);
  }
  return std::nullopt;
}

Res Ctx::c2() {
  for (const Proc& p : procs_) {
    Line pc = p.pc;
    if ((rng(pc, L_::T4, L_::T6) || rng(pc, L_::T9, L_::X3) || rng(pc, L_::R1, L_::R19)) &&
        p.r->mynode != p.np)
      return fail(p, ": mynode=", p.r->mynode, " differs from Node[porth]");
    if ((pc == L_::T6 || rng(pc, L_::T11, L_::T17) || rng(pc, L_::R1, L_::R19)) &&
        p.r->mypred != pred(p.np))
      return fail(p, ": mypred=", p.r->mypred, " differs from Node[porth].Pred=", pred(p.np));
    if ((rng(pc, L_::T11, L_::T15) || rng(pc, L_::R1, L_::R19)) &&
        one_of(p.pch, {L_::T4, L_::T5}) && p.r->mypred != crash_)
      return fail(p, ": mypred=", p.r->mypred, " should be Crash");
  }
  return std::nullopt;
}

Res Ctx::c3() {
  for (const Proc& p : procs_) {
    if (p.np.is_nil()) continue;
    if (!in_n(p.np)) return fail(p, ": Node[porth]=", p.np, " not in N'");
    Value pr = pred(p.np);
    bool ok = other(p, [&](const Proc& o) { return o.np.is_node() && pr == o.np; }) ||
              (in_n(pr) && pred(pr) == exit_) || pr.is_nil() || pr == crash_ || ie(pr);
    if (!ok) return fail(p, ": Node[porth].Pred=", pr, " is none of the allowed shapes");
    for (const Proc& o : procs_) {
      if (o.id == p.id) continue;
      if (p.np == o.np) return fail(p, " and p", o.id, " announce the same node");
      if (pr == pred(o.np) && !(pr.is_nil() || pr == crash_ || pr == exit_))
        return fail(p, " and p", o.id, " share Pred=", pr);
    }
  }
  return std::nullopt;
}

Res Ctx::c4() {
  for (const Proc& p : procs_) {
    if (p.nh.is_nil()) continue;
    for (const Proc& o : procs_) {
      if (o.id == p.id || o.nh.is_nil()) continue;
      if (p.nh == o.nh) return fail(p, " and ", o, " share a hidden node");
      Value a = pred(p.nh);
      if (a == pred(o.nh) && !(a.is_nil() || a == crash_ || a == exit_))
        return fail(p, " and ", o, " hidden nodes share Pred=", a);
    }
    Value v = p.nh;
    bool reached = false;
    for (int b = 1; b <= L_.k + 1; ++b) {
      v = pred(v);
      if (v.is_nil() || v == crash_ || ie(v)) {
        reached = true;
        break;
      }
      if (!in_n(v)) break;
    }
    if (!reached) return fail(p, ": Pred chain does not reach a sentinel within k+1 hops");
  }
  return std::nullopt;
}

Res Ctx::c5() {
  for (Value x : all_nodes()) {
    Value xp = pred(x);
    if (!(xp.is_nil() || xp == crash_ || ie(xp) || in_n(xp)))
      return fail("node ", x, ": Pred=", xp, " outside the allowed set");
    bool no_hat = !any([&](const Proc& o) { return o.nh == x; });
    bool no_ref = !announced(x) && !any([&](const Proc& o) {
      return o.r->mynode == x && !one_of(o.pc, {L_::T1, L_::T2});
    });
    if (no_hat != no_ref)
      return fail("node ", x, ": hidden-node ownership ", !no_hat, " vs reference ", !no_ref);
    if (present(x, kCs)) {
      if (xp != exit_) return fail("node ", x, ": CS_Signal present but Pred=", xp);
      for (const Proc& o : procs_) {
        if (o.nh == x && o.pch != L_::X3) return fail("node ", x, ": CS_Signal present, owner ", o);
      }
    }
    if (present(x, kNonNil)) {
      if (xp.is_nil()) return fail("node ", x, ": NonNil_Signal present but Pred=NIL");
      for (const Proc& o : procs_) {
        if (o.nh == x && !(rng(o.pch, L_::T4, L_::T6) || rng(o.pch, L_::T16, L_::X3)))
          return fail("node ", x, ": NonNil_Signal present, owner ", o);
      }
    }
    // Read as the converse of the printed implications (see notes).
    if ((xp.is_nil() || xp == crash_ || xp == incs_) && !absent(x, kCs))
      return fail("node ", x, ": Pred=", xp, " but CS_Signal not absent");
    if (xp.is_nil() && !absent(x, kNonNil))
      return fail("node ", x, ": Pred=NIL but NonNil_Signal not absent");
  }
  return std::nullopt;
}

Res Ctx::c6() {
  for (const Proc& p : procs_) {
    Line pc = p.pc, h = p.pch;
    auto bad = [&](const char* clause) { return fail(p, ": ", clause); };
    bool h_live = rng(h, L_::T2, L_::T6) || rng(h, L_::T16, L_::X3);
    if (pc == L_::T1 && !h_live) return bad("pc=try:1 with pch outside [try:2,try:6]u[try:16,exit:3]");
    if (pc == L_::T2 && !rng(h, L_::T2, L_::T3)) return bad("pc=try:2 with pch outside [try:2,try:3]");
    if ((rng(pc, L_::T3, L_::T6) || pc == L_::T16) && h != pc) return bad("pch differs from pc");
    bool h_q = rng(h, L_::T4, L_::T6) || rng(h, L_::T16, L_::X3);
    if (rng(pc, L_::T7, L_::T11) && !h_q) return bad("pc in [try:7,try:11] with pch outside");
    if (pc == L_::T12 && !(rng(h, L_::T4, L_::T6) || rng(h, L_::T16, L_::T17) || rng(h, L_::X2, L_::X3)))
      return bad("pc=try:12 with pch outside");
    if (pc == L_::T13 && !rng(h, L_::X2, L_::X3)) return bad("pc=try:13 with pch outside [exit:2,exit:3]");
    bool h_w = rng(h, L_::T4, L_::T6) || rng(h, L_::T16, L_::T17);
    if ((rng(pc, L_::T14, L_::T15) || pc == L_::R1) && !h_w) return bad("pc in [try:14,try:15]u{rep:1} with pch outside");
    if (rng(pc, L_::R2, L_::R19) && !rng(h, L_::T4, L_::T5)) return bad("pc in [rep:2,rep:19] with pch outside [try:4,try:5]");
    if (h == L_::T2 && !rng(pc, L_::T1, L_::T2)) return bad("pch=try:2 with pc outside [try:1,try:2]");
    if (h == L_::T3 && !rng(pc, L_::T1, L_::T3)) return bad("pch=try:3 with pc outside [try:1,try:3]");
    if (rng(h, L_::T4, L_::T5) &&
        !(pc == h || pc == L_::T1 || rng(pc, L_::T7, L_::T12) || rng(pc, L_::T14, L_::T15) ||
          rng(pc, L_::R1, L_::R20)))
      return bad("pch in {try:4,try:5} with pc outside");
    if (one_of(h, {L_::T6, L_::T16, L_::T17}) &&
        !(pc == h || pc == L_::T1 || rng(pc, L_::T7, L_::T12) || rng(pc, L_::T14, L_::T15) ||
          pc == L_::R1))
      return bad("pch in {try:6,try:16,try:17} with pc outside");
    if (h == L_::X1 && !(pc == h || pc == L_::T1 || rng(pc, L_::T7, L_::T11)))
      return bad("pch=exit:1 with pc outside");
    if (rng(h, L_::X2, L_::X3) && !(pc == h || pc == L_::T1 || rng(pc, L_::T7, L_::T13)))
      return bad("pch in {exit:2,exit:3} with pc outside");
  }
  return std::nullopt;
}

Res Ctx::c7() {
  for (const Proc& p : procs_) {
    if (p.nh.is_nil()) continue;
    const Frag& fp = frag(p.nh);
    if (!fp.ok) return fail(p, ": fragment of ", p.nh, " is ill-formed");
    for (const Proc& o : procs_) {
      if (o.nh.is_nil()) continue;
      const Frag& fo = frag(o.nh);
      if (!(fp == fo)) {
        for (const Proc& x : procs_) {
          if (x.nh.is_node() && fp.has(x.nh) && fo.has(x.nh))
            return fail("distinct fragments of ", p, " and ", o, " share ", x.nh);
        }
      }
      if (o.id != p.id) {
        Value hp = pred(fp.head()), ho = pred(fo.head());
        if (hp == incs_ && ho == incs_ && !fp.has(o.nh))
          return fail(p, " and ", o, ": two fragments headed by InCS");
        if (hp == exit_ && !rng(p.pch, L_::X2, L_::X3) && ho == exit_ &&
            !rng(o.pch, L_::X2, L_::X3) && !fp.has(o.nh))
          return fail(p, " and ", o, ": two fragments headed by Exit");
      }
      if (fp.nodes.size() > 1 && fp.has(o.nh) && o.nh != fp.head() &&
          !one_of(o.pch, {L_::T6, L_::T16, L_::T17}))
        return fail(o, ": inside the fragment of ", p, " but pch not in {try:6,try:16,try:17}");
    }
  }
  return std::nullopt;
}

Res Ctx::c8() {
  for (const Proc& p : procs_) {
    if (!one_of(p.pc, {L_::T3, L_::T4})) continue;
    Value x = p.r->mynode;
    if (!in_n(x)) return fail(p, ": mynode not in N'");
    for (int q = 0; q < L_.k; ++q) {
      Value nq = nodes_[static_cast<size_t>(q)];
      if (q != p.porth && nq == x) return fail(p, ": mynode announced at Node[", q, "]");
      if (nq.is_node() && pred(nq) == x) return fail(p, ": Node[", q, "].Pred is mynode");
    }
    if (!absent(x, kCs) || !absent(x, kNonNil)) return fail(p, ": mynode signals not absent");
    const Frag& f = frag(x);
    if (f.head() != x || f.nodes.size() != 1) return fail(p, ": mynode not a singleton fragment");
    if (f == frag(tailv_)) return fail(p, ": mynode in the fragment of Tail");
    if (!pred(x).is_nil()) return fail(p, ": mynode.Pred=", pred(x));
  }
  return std::nullopt;
}

Res Ctx::c9() {
  for (const Proc& p : procs_) {
    if (p.pc != L_::T5) continue;
    Value x = p.nh, mp = p.r->mypred;
    if (!in_n(x) || !pred(x).is_nil() || frag(x).head() != x)
      return fail(p, ": hidden node not an unlinked head");
    if (!absent(x, kCs) || !absent(x, kNonNil)) return fail(p, ": signals not absent");
    for (const Proc& o : procs_) {
      if (o.id != p.id && o.nh.is_node() && frag(x).has(o.nh) && !one_of(o.pch, {L_::T6, L_::T16}))
        return fail(o, ": behind ", p, " with pch not in {try:6,try:16}");
    }
    if (!in_n(mp) || frag(mp).tail() != mp) return fail(p, ": mypred=", mp, " not a fragment tail");
    if (auto r = pred_family(&p, mp, true, true, true, "mypred")) return fail(p, ": ", *r);
    if (frag(x) == frag(mp)) return fail(p, ": hidden node and mypred in one fragment");
  }
  return std::nullopt;
}

Res Ctx::c10() {
  for (const Proc& p : procs_) {
    if (!one_of(p.pch, {L_::T4, L_::T5})) continue;
    Value pr = pred(p.nh);
    if (pr.is_nil() && !(p.pc == p.pch || p.pc == L_::T1 || rng(p.pc, L_::T7, L_::T9)))
      return fail(p, ": Pred=NIL with pc outside");
    if (pr == crash_ && !(p.pc == L_::T1 || rng(p.pc, L_::T7, L_::T12) ||
                          rng(p.pc, L_::T14, L_::T15) || rng(p.pc, L_::R1, L_::R20)))
      return fail(p, ": Pred=Crash with pc outside");
  }
  return std::nullopt;
}

Res Ctx::c11() {
  for (const Proc& p : procs_) {
    if ((rng(p.pc, L_::T10, L_::T12) || rng(p.pc, L_::T14, L_::T15) || rng(p.pc, L_::R1, L_::R19)) &&
        one_of(p.pch, {L_::T4, L_::T5}) && pred(p.nh) != crash_)
      return fail(p, ": Pred=", pred(p.nh), " should be Crash");
  }
  return std::nullopt;
}

Res Ctx::c12() {
  for (const Proc& p : procs_) {
    if (p.pch == L_::T4 && frag(p.nh).nodes.size() != 1) return fail(p, ": fragment size not 1");
    if (one_of(p.pch, {L_::T4, L_::T5}) && frag(p.nh).head() != p.nh)
      return fail(p, ": hidden node not its fragment head");
    if (p.pch == L_::T4 && frag(p.nh) == frag(tailv_))
      return fail(p, ": hidden node in the fragment of Tail");
    if (p.pch == L_::T5) {
      for (const Proc& o : procs_) {
        if (o.id != p.id && o.nh.is_node() && frag(p.nh).has(o.nh) &&
            !one_of(o.pch, {L_::T6, L_::T16}))
          return fail(o, ": behind ", p, " with pch not in {try:6,try:16}");
      }
    }
  }
  return std::nullopt;
}

Res Ctx::c13() {
  for (const Proc& p : procs_) {
    if (!one_of(p.pc, {L_::T6, L_::T16})) continue;
    if (!in_n(p.nh) || pred(p.nh) != p.r->mypred || !in_n(p.r->mypred))
      return fail(p, ": hidden node Pred ", pred(p.nh), " vs mypred ", p.r->mypred);
  }
  return std::nullopt;
}

Res Ctx::c14() {
  for (const Proc& p : procs_) {
    if (!one_of(p.pch, {L_::T6, L_::T16})) continue;
    if (!in_n(p.nh) || !in_n(pred(p.nh))) return fail(p, ": Pred not a node");
    // The Exit clause's |Q|=0 cannot hold here: p itself is queued.
    if (auto r = pred_family(&p, pred(p.nh), false, false, true, "pred")) return fail(p, ": ", *r);
  }
  return std::nullopt;
}

Res Ctx::c15() {
  for (const Proc& p : procs_) {
    if (!one_of(p.pch, {L_::T6, L_::T16}) || !nil_or_crash(head_pred(p.nh))) continue;
    const Frag& f = frag(p.nh);
    const Proc* first = nullptr;
    for (const Proc& o : procs_) {
      if (o.id != p.id && o.pch == L_::T5 && o.nh == f.head()) first = &o;
    }
    if (first == nullptr) return fail(p, ": unlinked fragment head has no try:5 owner");
    for (const Proc& o : procs_) {
      if (o.id == first->id || !o.nh.is_node() || !f.has(o.nh)) continue;
      if (!one_of(o.pch, {L_::T6, L_::T16}) || !absent(o.nh, kCs))
        return fail(o, ": in an unlinked fragment but not waiting");
    }
  }
  return std::nullopt;
}

Res Ctx::c16() {
  if (!in_n(tailv_)) return fail("Tail=", tailv_, " not in N'");
  if (frag(tailv_).tail() != tailv_) return fail("Tail=", tailv_, " not its fragment tail");
  if (!announced(tailv_) && pred(tailv_) != exit_)
    return fail("Tail=", tailv_, " neither announced nor exited");
  if (auto r = pred_family(nullptr, tailv_, true, true, false, "Tail")) return r;
  // Read as an implication whose premise leaves out exiting and crashed processes.
  bool lhs = any([&](const Proc& o) {
    return (rng(o.pch, L_::T5, L_::T6) || rng(o.pch, L_::T16, L_::X1)) && pred(o.nh) != crash_;
  });
  bool rhs = any([&](const Proc& o) {
    return o.nh == tailv_ && (rng(o.pch, L_::T5, L_::T6) || rng(o.pch, L_::T16, L_::X3));
  });
  if (lhs && !rhs) return fail("Tail=", tailv_, ": a process is enqueued but Tail has no live owner");
  return std::nullopt;
}

Res Ctx::c17() {
  for (const Proc& p : procs_) {
    bool req = rng(p.pc, L_::T15, L_::X3) || rng(p.pc, L_::R1, L_::R20) || rng(p.pch, L_::T16, L_::X3);
    if (req && !present(p.nh, kNonNil)) return fail(p, ": NonNil_Signal not present");
    if (p.pch == L_::X3 && !present(p.nh, kCs)) return fail(p, ": CS_Signal not present");
  }
  return std::nullopt;
}

Res Ctx::c18() {
  if (!q_.empty()) return std::nullopt;
  bool ok = pred(tailv_) == exit_ || any([&](const Proc& o) {
              return o.pch == L_::T5 && frag(o.nh).tail() == tailv_ && frag(o.nh).head() == o.nh;
            });
  if (!ok) return fail("|Q|=0 but Tail=", tailv_, " is neither exited nor behind a try:5 head");
  for (const Proc& o : procs_) {
    if (!(rng(o.pch, L_::T2, L_::T6) || o.pch == L_::T16 || rng(o.pch, L_::X2, L_::X3)))
      return fail("|Q|=0 but ", o, " has pch outside [try:2,try:6]u{try:16}u[exit:2,exit:3]");
  }
  return std::nullopt;
}

Res Ctx::c19() {
  if (q_.empty()) return std::nullopt;
  auto P = [&](Pid i) -> const Proc& { return procs_[static_cast<size_t>(i)]; };
  std::vector<Pid> order;
  for (Pid i : q_) {
    Value pr = pred(P(i).nh);
    bool behind = std::any_of(q_.begin(), q_.end(), [&](Pid j) { return j != i && P(j).nh == pr; });
    if (!behind) order.push_back(i);
  }
  if (order.size() != 1) return fail("|Q|=", q_.size(), " with ", order.size(), " candidate first processes");
  while (order.size() < q_.size()) {
    Value last = P(order.back()).nh;
    std::vector<Pid> next;
    for (Pid j : q_) {
      if (pred(P(j).nh) == last) next.push_back(j);
    }
    if (next.size() != 1) return fail("queued order breaks after p", order.back());
    if (std::find(order.begin(), order.end(), next[0]) != order.end())
      return fail("queued order cycles at p", next[0]);
    order.push_back(next[0]);
  }
  const Proc& p1 = P(order[0]);
  if (!(p1.pch == L_::T6 || rng(p1.pch, L_::T16, L_::X1))) return fail("first ", p1, ": pch outside");
  Value pr1 = pred(p1.nh);
  if (p1.pch != L_::X1) {
    bool b = any([&](const Proc& o) { return rng(o.pch, L_::X2, L_::X3) && o.nh == pr1; }) ||
             (in_n(pr1) && !any([&](const Proc& o) { return o.nh.is_node() && o.nh == pr1; }));
    if (!b) return fail("first ", p1, ": Pred=", pr1, " neither exiting nor abandoned");
  }
  if (one_of(p1.pch, {L_::T6, L_::T16}) &&
      !(present(pr1, kCs) ||
        other(p1, [&](const Proc& o) { return o.nh == pr1 && o.pch == L_::X2; })))
    return fail("first ", p1, ": predecessor has not signalled");
  for (size_t i = 1; i < order.size(); ++i) {
    const Proc& pi = P(order[i]);
    if (!one_of(pi.pch, {L_::T6, L_::T16})) return fail("queued ", pi, ": pch not in {try:6,try:16}");
  }
  if (P(order.back()).nh != frag(p1.nh).tail()) return fail("last queued is not the fragment tail");
  if (!(p1.nh == frag(p1.nh).head() || pred(pr1) == exit_))
    return fail("first ", p1, ": neither fragment head nor behind an exited node");
  for (const Proc& o : procs_) {
    if (o.id == p1.id) continue;
    if (!(rng(o.pch, L_::T2, L_::T6) || o.pch == L_::T16 || rng(o.pch, L_::X2, L_::X3)))
      return fail(o, ": pch outside while ", p1, " is first");
    if (o.nh.is_node() && in_n(pred(o.nh)) && !absent(pred(o.nh), kCs))
      return fail(o, ": predecessor signalled while ", p1, " is first");
  }
  return std::nullopt;
}

// ---- Extended conditions: the repair registers ----

Res Ctx::c20() {
  for (const Proc& p : procs_) {
    if (p.pc == L_::R2 && ie(head_pred(tailv_)) && frag(p.nh) == frag(tailv_))
      return fail(p, ": own fragment is the fragment of Tail");
  }
  return std::nullopt;
}

Res Ctx::c21() {
  const int k = L_.k;
  for (const Proc& p : procs_) {
    const QueueRegs& r = *p.r;
    if (rng(p.pc, L_::R3, L_::R12) && (r.tailpath != kRegNil || r.headpath != kRegNil))
      return fail(p, ": tailpath/headpath set early");
    if (p.pc == L_::R3 && !(r.idx >= 0 && r.idx <= k)) return fail(p, ": idx=", r.idx);
    if (rng(p.pc, L_::R4, L_::R9) && !(r.idx >= 0 && r.idx < k)) return fail(p, ": idx=", r.idx);
    if (rng(p.pc, L_::R10, L_::R20) && r.idx != k) return fail(p, ": idx=", r.idx);
    if (rng(p.pc, L_::R3, L_::R20) && !in_n(r.tail)) return fail(p, ": tail=", r.tail);
  }
  return std::nullopt;
}

Res Ctx::c22() {
  for (const Proc& p : procs_) {
    if (!rng(p.pc, L_::R3, L_::R20)) continue;
    const QueueRegs& r = *p.r;
    bool ok = in_v(p, r.tail) || pred(r.tail) == exit_;
    for (int i = std::max<int>(r.idx, 0); i < L_.k && !ok; ++i) ok = node_at(i) == r.tail;
    if (!ok) return fail(p, ": tail=", r.tail, " unaccounted for");
  }
  return std::nullopt;
}

Res Ctx::c23() {
  for (const Proc& p : procs_) {
    if (!rng(p.pc, L_::R3, L_::R20)) continue;
    auto g = graph(p);
    if (!g || !g->ok) return fail(p, ": repair graph not a set of disjoint paths: ", g ? g->error : "unset");
  }
  return std::nullopt;
}

Res Ctx::c24() {
  for (const Proc& p : procs_) {
    if (!rng(p.pc, L_::R3, L_::R20)) continue;
    if (ie(tail_hp(p)) || q_.empty()) continue;
    auto g = graph(p);
    int nq = 0;
    if (g) {
      for (const Path& s : g->paths) nq += qualifying(s) ? 1 : 0;
    }
    if (nq == 1) continue;
    bool c = false;
    for (int i = std::max<int>(p.r->idx, 0); i < L_.k && !c; ++i) {
      Value n = node_at(i);
      c = n.is_node() && ie(pred(pred(n))) && pred(frag(n).tail()) != exit_;
    }
    if (!c) return fail(p, ": no way to find the queue head (", nq, " candidate paths)");
  }
  return std::nullopt;
}

Res Ctx::c25() {
  for (const Proc& p : procs_) {
    if (!rng(p.pc, L_::R3, L_::R10) || !ie(tail_hp(p))) continue;
    for (Value x : frag(p.nh).nodes) {
      if (!any([&](const Proc& o) { return o.nh == x; })) continue;
      bool later = false;
      for (int i = std::max<int>(p.r->idx, 0); i < L_.k; ++i) later = later || node_at(i) == x;
      if (later) continue;
      if (!in_v(p, x) || (x != p.nh && !in_e(p, x, pred(x))))
        return fail(p, ": fragment node ", x, " neither pending nor recorded");
    }
  }
  return std::nullopt;
}

Res Ctx::c26() {
  for (const Proc& p : procs_) {
    if (!rng(p.pc, L_::R3, L_::R12)) continue;
    auto g = graph(p);
    if (!g) continue;
    for (const Path& s : g->paths) {
      if (!ie(pred(front(s)))) continue;
      for (Value v : s) {
        // Nodes from the fragment head up to v; later arrivals join behind.
        for (Value x : frag(v).nodes) {
          if (x == v) break;
          bool later = false;
          for (int i = std::max<int>(p.r->idx, 0); i < L_.k; ++i) later = later || node_at(i) == x;
          if (later) continue;
          if (!in_v(p, x) || (!ie(pred(x)) && !in_e(p, x, pred(x))))
            return fail(p, ": node ", x, " on a head path neither pending nor recorded");
        }
        for (Value w : s) {
          if (!(frag(v) == frag(w)) && !ie(pred(v)) && !ie(pred(w)))
            return fail(p, ": path joins fragments of ", v, " and ", w, " without a head");
        }
      }
    }
  }
  return std::nullopt;
}

Res Ctx::c27() {
  for (const Proc& p : procs_) {
    if (!rng(p.pc, L_::R3, L_::R20)) continue;
    const QueueRegs& r = *p.r;
    int idx = std::max<int>(r.idx, 0);
    for (Value v : r.V) {
      if (!in_n(v)) return fail(p, ": V holds ", v);
    }
    if (idx > p.porth && !in_v(p, r.mynode)) return fail(p, ": mynode missing from V");
    bool split = !(frag(r.tail) == frag(p.nh));
    for (int i = 0; i < idx && i < L_.k; ++i) {
      Value ni = node_at(i);
      if (ni.is_node() && ahead(p.nh, ni) && split && !in_v(p, ni))
        return fail(p, ": Node[", i, "] of own fragment missing from V");
      for (Value v : r.V) {
        Pid o = m_.owner(v.cell());
        if (o < 0 || o >= cfg_.n()) continue;
        if (procs_[static_cast<size_t>(o)].porth == i && v != ni &&
            !(pred(v) == exit_ && !announced(v)))
          return fail(p, ": V holds stale node ", v, " of port ", i);
      }
      Value np = pred(ni);
      // A node announced after its port was scanned can enter V as a predecessor only.
      bool rescanned = std::any_of(r.E.begin(), r.E.end(), [&](const Edge& e) { return e.second == ni; });
      if (ni.is_node() && !(np == crash_ || ie(np)) && in_v(p, ni) && !in_e(p, ni, np) && !rescanned)
        return fail(p, ": edge of Node[", i, "] missing");
      if (ni.is_node() && !in_v(p, ni)) {
        // A node that joined behind the tail fragment detaches on CS entry.
        bool ok = (ie(tail_hp(p)) && (frag(r.tail).has(ni) || ie(head_pred(ni)))) ||
                  nil_or_crash(head_pred(ni));
        if (!ok) return fail(p, ": Node[", i, "] skipped without cause");
      }
    }
    auto g = graph(p);
    if (g && g->ok) {
      for (Value v : r.V) {
        int pi = path_containing(g->paths, v);
        if (pi >= 0 && pred(front(g->paths[static_cast<size_t>(pi)])) == crash_ && head_pred(v) != crash_)
          return fail(p, ": path of ", v, " ends at Crash but its fragment head does not");
      }
    }
    for (const Edge& e : r.E) {
      if (!in_v(p, e.second)) return fail(p, ": edge target ", e.second, " not in V");
      Value vp = pred(e.first);
      if (!(vp == e.second || ie(vp))) return fail(p, ": edge ", e.first, "->", e.second, " stale");
      if (!announced(e.first) && some_pred_is(e.second))
        return fail(p, ": edge from unannounced ", e.first, " onto a live predecessor");
      if (ie(vp) && pred(e.second) != exit_)
        return fail(p, ": edge from finished ", e.first, " onto a non-exited node");
      if (e.first == r.mynode) return fail(p, ": edge out of mynode");
    }
    if (idx > p.porth) {
      if (!in_v(p, r.mynode)) return fail(p, ": no path ends at mynode");
    }
  }
  return std::nullopt;
}

Res Ctx::c28() {
  for (const Proc& p : procs_) {
    const QueueRegs& r = *p.r;
    if (rng(p.pc, L_::R3, L_::R18) && ie(tail_hp(p)) && frag(p.nh) == frag(tailv_))
      return fail(p, ": own fragment is the fragment of Tail");
    if (rng(p.pc, L_::R10, L_::R18) && !in_v(p, r.tail) && !ie(tail_hp(p)))
      return fail(p, ": tail outside V and not behind a head");
    if (rng(p.pc, L_::R13, L_::R18) && ((r.tailpath != kRegNil) != in_v(p, r.tail)))
      return fail(p, ": tailpath set iff tail in V fails");
  }
  return std::nullopt;
}

Res Ctx::c29() {
  for (const Proc& p : procs_) {
    if (rng(p.pc, L_::R3, L_::R20) && !ie(tail_hp(p)) && ie(head_pred(tailv_)))
      return fail(p, ": queue head appeared behind Tail during repair");
  }
  return std::nullopt;
}

Res Ctx::c30() {
  for (const Proc& p : procs_) {
    const QueueRegs& r = *p.r;
    Value cur = r.cur;
    auto here = [&] { return in_n(cur) && (cur == node_at(r.idx) || pred(cur) == exit_); };
    if (p.pc == L_::R5 && !(cur.is_nil() || here())) return fail(p, ": cur=", cur);
    if (p.pc == L_::R6 && !present(cur, kNonNil) &&
        !other(p, [&](const Proc& o) { return o.nh == cur && rng(o.pch, L_::T4, L_::T6); }))
      return fail(p, ": waiting on ", cur, " whose owner will never signal");
    if (rng(p.pc, L_::R6, L_::R9) && !here()) return fail(p, ": cur=", cur);
    if (rng(p.pc, L_::R7, L_::R8)) {
      Value cp = pred(cur);
      if (!(cp == crash_ || ie(cp) || in_n(cp))) return fail(p, ": cur.Pred=", cp);
    }
    if (p.pc == L_::R9 && !in_n(r.curpred)) return fail(p, ": curpred=", r.curpred);
  }
  return std::nullopt;
}

Res Ctx::c31() {
  for (const Proc& p : procs_) {
    const QueueRegs& r = *p.r;
    bool pre = p.pc == L_::R19;
    if (rng(p.pc, L_::R13, L_::R18) && r.tailpath >= 0 &&
        static_cast<size_t>(r.tailpath) < r.paths.size() &&
        !ie(pred(front(r.paths[static_cast<size_t>(r.tailpath)]))))
      pre = true;
    if (pre && ie(tail_hp(p))) return fail(p, ": tail path unheaded but tail fragment headed");
  }
  return std::nullopt;
}

Res Ctx::c32() {
  for (const Proc& p : procs_) {
    if (!rng(p.pc, L_::R10, L_::R12) || !ie(tail_hp(p))) continue;
    auto g = graph(p);
    bool ok = false;
    if (g) {
      for (const Path& s : g->paths) {
        ok = ok || (front(s) == p.r->mynode && rear(s) == frag(p.r->mynode).tail());
      }
    }
    if (!ok) return fail(p, ": no path from the own fragment tail to mynode");
  }
  return std::nullopt;
}

Res Ctx::c33() {
  for (const Proc& p : procs_) {
    if (!rng(p.pc, L_::R12, L_::R20)) continue;
    const QueueRegs& r = *p.r;
    int hits = 0;
    for (const Path& s : r.paths) hits += std::count(s.begin(), s.end(), r.mynode) > 0 ? 1 : 0;
    if (hits != 1 || r.mypath < 0 || static_cast<size_t>(r.mypath) >= r.paths.size() ||
        std::count(r.paths[static_cast<size_t>(r.mypath)].begin(),
                   r.paths[static_cast<size_t>(r.mypath)].end(), r.mynode) == 0)
      return fail(p, ": mypath does not identify the unique path holding mynode");
  }
  return std::nullopt;
}

Res Ctx::c34() {
  for (const Proc& p : procs_) {
    if (p.pc != L_::R10) continue;
    auto g = graph(p);
    bool some = false;
    if (g) {
      for (const Path& s : g->paths) some = some || qualifying(s);
    }
    if (!some && !ie(tail_hp(p)) && !q_.empty())
      return fail(p, ": no head path, tail unheaded and |Q|=", q_.size());
  }
  return std::nullopt;
}

Res Ctx::c35() {
  for (const Proc& p : procs_) {
    if (p.pc != L_::R10 || ie(tail_hp(p))) continue;
    auto g = graph(p);
    if (!g) continue;
    for (const Path& s : g->paths) {
      if (qualifying(s) && !handoff_target(p, rear(s)))
        return fail(p, ": head path rear ", rear(s), " is not a usable predecessor");
    }
  }
  return std::nullopt;
}

Res Ctx::c36() {
  for (const Proc& p : procs_) {
    if (!one_of(p.pc, {L_::R15, L_::R16})) continue;
    const QueueRegs& r = *p.r;
    if (r.seq < 0 || static_cast<size_t>(r.seq) >= r.paths.size()) return fail(p, ": seq=", r.seq);
    const Path& s = r.paths[static_cast<size_t>(r.seq)];
    if (!ie(pred(front(s)))) return fail(p, ": path front ", front(s), " not headed");
  }
  return std::nullopt;
}

Res Ctx::c37() {
  for (const Proc& p : procs_) {
    if (!rng(p.pc, L_::R11, L_::R19) || p.r->headpath != kRegNil) continue;
    if (ie(tail_hp(p)) || q_.empty()) continue;
    auto g = graph(p);
    bool ok = false;
    if (g) {
      for (const Path& s : g->paths) ok = ok || (qualifying(s) && handoff_target(p, rear(s)));
    }
    if (!ok) return fail(p, ": headpath unset with |Q|=", q_.size(), " and no head path");
  }
  return std::nullopt;
}

Res Ctx::c38() {
  for (const Proc& p : procs_) {
    const QueueRegs& r = *p.r;
    if (!rng(p.pc, L_::R11, L_::R19) || r.headpath == kRegNil) continue;
    bool valid = r.headpath >= 0 && static_cast<size_t>(r.headpath) < r.paths.size();
    if (valid && ie(tail_hp(p))) continue;
    if (!valid) return fail(p, ": headpath=", r.headpath);
    Value x = rear(r.paths[static_cast<size_t>(r.headpath)]);
    Value xp = pred(x);
    bool ok = handoff_target(p, x);
    ok = ok && (xp != incs_ || other(p, [&](const Proc& o) { return o.pch == L_::X1 && o.nh == x; }));
    ok = ok && (xp != exit_ || q_.empty());
    ok = ok && (ie(xp) || other(p, [&](const Proc& o) {
                  return o.nh == x && (o.pch == L_::T6 || rng(o.pch, L_::T16, L_::T17));
                }));
    if (!ok) return fail(p, ": headpath rear ", x, " is not a usable predecessor");
  }
  return std::nullopt;
}

Res Ctx::c39() {
  for (const Proc& p : procs_) {
    if (p.pc != L_::R20) continue;
    Value mp = p.r->mypred;
    if (p.pch != L_::T5) return fail(p, ": pch should be try:5");
    if (!in_n(mp) || frag(mp).tail() != mp) return fail(p, ": mypred=", mp, " not a fragment tail");
    if (auto r = pred_family(&p, mp, true, true, true, "mypred")) return fail(p, ": ", *r);
    if (frag(p.nh) == frag(mp)) return fail(p, ": own fragment equals the fragment of mypred");
  }
  return std::nullopt;
}

Res Ctx::run(int id) {
  switch (id) {
    case 1: return c1();
    case 2: return c2();
    case 3: return c3();
    case 4: return c4();
    case 5: return c5();
    case 6: return c6();
    case 7: return c7();
    case 8: return c8();
    case 9: return c9();
    case 10: return c10();
    case 11: return c11();
    case 12: return c12();
    case 13: return c13();
    case 14: return c14();
    case 15: return c15();
    case 16: return c16();
    case 17: return c17();
    case 18: return c18();
    case 19: return c19();
    case 20: return c20();
    case 21: return c21();
    case 22: return c22();
    case 23: return c23();
    case 24: return c24();
    case 25: return c25();
    case 26: return c26();
    case 27: return c27();
    case 28: return c28();
    case 29: return c29();
    case 30: return c30();
    case 31: return c31();
    case 32: return c32();
    case 33: return c33();
    case 34: return c34();
    case 35: return c35();
    case 36: return c36();
    case 37: return c37();
    case 38: return c38();
    case 39: return c39();
  }
  throw std::out_of_range("condition id");
}

bool Ctx::applicable(int id) const {
  if (id <= kCoreConditions) return true;
  return any([](const Proc& o) { return is_rep(o.pc); });
}

// Tree: every instance keeps at most one node marked InCS, and only the
// process holding the root CS may have its root node marked so.
Res tree_check(const Configuration& cfg) {
  const Memory& m = cfg.mem;
  for (size_t i = 0; i < cfg.layout->tree.queues.size(); ++i) {
    const QueueLayout& L = cfg.layout->tree.queues[i];
    int incs = 0;
    for (int q = 0; q < L.k; ++q) {
      Value n = m.peek(L.node(q));
      if (n.is_node() && pred_of(m, n) == Value::node(L.incs)) ++incs;
    }
    if (incs > 1) return "tree node " + std::to_string(i) + " has " + std::to_string(incs) + " nodes in CS";
  }
  return std::nullopt;
}

int last_id(CheckLevel level) {
  return level == CheckLevel::Extended ? kAllConditions : level == CheckLevel::Core ? kCoreConditions : 0;
}

}  // namespace

CheckLevel parse_check_level(const std::string& s) {
  if (s == "off") return CheckLevel::Off;
  if (s == "core") return CheckLevel::Core;
  if (s == "extended") return CheckLevel::Extended;
  throw std::invalid_argument("unknown invariant level: " + s);
}

const char* to_string(CheckLevel l) {
  switch (l) {
    case CheckLevel::Off: return "off";
    case CheckLevel::Core: return "core";
    case CheckLevel::Extended: return "extended";
  }
  return "?";
}

const char* condition_label(int id) {
  if (id < 0 || id > kAllConditions) throw std::out_of_range("condition id");
  return kLabels[static_cast<size_t>(id)];
}

std::vector<ConditionReport> check(const Configuration& cfg, CheckLevel level) {
  std::vector<ConditionReport> out;
  if (level == CheckLevel::Off) return out;
  if (cfg.opt().algo == Algo::Tree) {
    ConditionReport r{0, kLabels[0], true, true, {}};
    if (auto w = tree_check(cfg)) {
      r.pass = false;
      r.witness = *w;
    }
    out.push_back(r);
    return out;
  }
  if (cfg.opt().algo != Algo::Queue) return out;
  Ctx ctx(cfg, cfg.layout->queue);
  for (int id = 1; id <= last_id(level); ++id) {
    ConditionReport r{id, kLabels[static_cast<size_t>(id)], true, ctx.applicable(id), {}};
    if (auto w = ctx.run(id)) {
      r.pass = false;
      r.witness = *w;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::optional<ConditionReport> first_failure(const Configuration& cfg, CheckLevel level) {
  if (level == CheckLevel::Off) return std::nullopt;
  if (cfg.opt().algo == Algo::Tree) {
    if (auto w = tree_check(cfg)) return ConditionReport{0, kLabels[0], false, true, *w};
    return std::nullopt;
  }
  if (cfg.opt().algo != Algo::Queue) return std::nullopt;
  Ctx ctx(cfg, cfg.layout->queue);
  for (int id = 1; id <= last_id(level); ++id) {
    if (id > kCoreConditions && !ctx.applicable(id)) break;
    if (auto w = ctx.run(id)) return ConditionReport{id, kLabels[static_cast<size_t>(id)], false, true, *w};
  }
  return std::nullopt;
}

StateCheck invariant_check(CheckLevel level) {
  if (level == CheckLevel::Off) return nullptr;
  return [level](const Configuration& cfg) -> std::optional<Violation> {
    if (auto r = first_failure(cfg, level)) {
      return Violation{"invariant", std::string(r->label) + " (#" + std::to_string(r->id) + "): " + r->witness,
                       cfg.steps, -1};
    }
    return std::nullopt;
  };
}

std::string describe_queue(const Configuration& cfg, const QueueLayout& L) {
  const Memory& m = cfg.mem;
  auto nm = [&](Value v) -> std::string {
    if (v == Value::node(L.crash)) return "Crash";
    if (v == Value::node(L.incs)) return "InCS";
    if (v == Value::node(L.exit)) return "Exit";
    if (v == Value::node(L.special)) return "SpecialNode";
    return to_string(v);
  };
  std::ostringstream os;
  os << "Tail=" << nm(m.peek(L.tail)) << " Node=[";
  for (int q = 0; q < L.k; ++q) os << (q ? "," : "") << nm(m.peek(L.node(q)));
  os << "]\n";
  // Nodes reachable from Tail, Node[] and the registers, one Pred hop out.
  std::vector<Value> refs{m.peek(L.tail), Value::node(L.special)};
  for (int q = 0; q < L.k; ++q) refs.push_back(m.peek(L.node(q)));
  for (const ProcState& ps : cfg.procs) {
    const QueueRegs& r = ps.q;
    refs.insert(refs.end(), {r.mynode, r.mypred, r.tail, r.cur, r.curpred});
    refs.insert(refs.end(), r.V.begin(), r.V.end());
  }
  for (size_t i = 0, e = refs.size(); i < e; ++i) refs.push_back(pred_of(m, refs[i]));
  for (CellId c = 0; c < m.size(); c += m.block_len(c)) {
    if (m.kind(c) != BlockKind::QNode) continue;
    Value v = Value::node(c);
    if (std::find(refs.begin(), refs.end(), v) == refs.end()) continue;
    os << "  " << nm(v) << " owner=" << m.owner(c) << " Pred=" << nm(m.peek(c + kPred))
       << " NonNil=" << (m.peek(c + kNonNil).is_present() ? "P" : "A")
       << " CS=" << (m.peek(c + kCs).is_present() ? "P" : "A") << "\n";
  }
  for (Pid i = 0; i < cfg.n(); ++i) {
    const ProcState& ps = cfg.procs[static_cast<size_t>(i)];
    const QueueRegs& r = ps.q;
    os << "  p" << i << " pc=" << line_name(r.pc) << (r.sub != Sub::None ? "/" + sub_name(r.sub) : "")
       << " pch=" << line_name(ps.h.pch) << " porth=" << ps.h.porth << " mynode=" << nm(r.mynode)
       << " mypred=" << nm(r.mypred);
    if (is_rep(r.pc) || r.graph_set) {
      os << " tail=" << nm(r.tail) << " idx=" << r.idx << " V={";
      for (Value v : r.V) os << nm(v) << " ";
      os << "} E={";
      for (const Edge& e : r.E) os << nm(e.first) << "->" << nm(e.second) << " ";
      os << "} tailpath=" << r.tailpath << " headpath=" << r.headpath << " mypath=" << r.mypath
         << " seq=" << r.seq;
    }
    os << "\n";
  }
  return os.str();
}

Value node_hat(const Configuration& cfg, Pid p) {
  Ctx ctx(cfg, cfg.layout->queue);
  return ctx.nh(p);
}

std::vector<Pid> queued_set(const Configuration& cfg) {
  Ctx ctx(cfg, cfg.layout->queue);
  return ctx.q();
}

}  // namespace rme
