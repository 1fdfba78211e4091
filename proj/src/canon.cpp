#include "rme/canon.hpp"

#include <deque>
#include <unordered_map>

namespace rme {

namespace {

constexpr uint32_t kDynamic = 0x80000000u;

class Canon {
 public:
  Canon(const Configuration& cfg) : cfg_(cfg), static_end_(cfg.layout->static_end) {}

  void word(uint32_t w) { out_.push_back(w); }

  void value(Value v) {
    word(static_cast<uint32_t>(v.tag));
    if ((v.tag != Tag::Node && v.tag != Tag::Ref) || v.x < static_end_) {
      word(v.x);
      return;
    }
    word(dynamic_id(v.x));
  }

  uint32_t dynamic_id(CellId c) {
    CellId base = cfg_.mem.block_base(c);
    auto [it, fresh] = ids_.try_emplace(base, static_cast<uint32_t>(ids_.size()));
    if (fresh) pending_.push_back(base);
    return kDynamic | (it->second << 8) | (c - base);
  }

  void flush_blocks() {
    while (!pending_.empty()) {
      CellId base = pending_.front();
      pending_.pop_front();
      word(0xB10C0000u);
      word(static_cast<uint32_t>(cfg_.mem.owner(base)));
      word(static_cast<uint32_t>(cfg_.mem.kind(base)));
      uint32_t len = cfg_.mem.block_len(base);
      word(len);
      for (uint32_t i = 0; i < len; ++i) value(cfg_.mem.peek(base + i));
    }
  }

  void cell_name(CellId c) {
    if (c < static_end_) {
      word(c);
    } else {
      auto it = ids_.find(cfg_.mem.block_base(c));
      word(it == ids_.end() ? 0xFFFFFFFFu : (kDynamic | (it->second << 8) | (c - it->first)));
    }
  }

  std::vector<uint32_t> take() { return std::move(out_); }

 private:
  const Configuration& cfg_;
  CellId static_end_;
  std::vector<uint32_t> out_;
  std::unordered_map<CellId, uint32_t> ids_;
  std::deque<CellId> pending_;
};

void regs(Canon& c, const QueueRegs& r) {
  c.word(static_cast<uint32_t>(r.pc) | (r.in_try ? 0x100u : 0) | (r.lk_release ? 0x200u : 0) |
         (r.graph_set ? 0x400u : 0) | (r.paths_set ? 0x800u : 0) |
         (static_cast<uint32_t>(r.sub) << 16));
  for (Value v : {r.mynode, r.mypred, r.tail, r.cur, r.curpred, r.sig.addr, r.sig.go, r.lk.w}) c.value(v);
  c.word(static_cast<uint32_t>(r.lk.st) | (static_cast<uint32_t>(static_cast<uint8_t>(r.lk.lvl)) << 8));
  c.word(static_cast<uint16_t>(r.idx) | (static_cast<uint32_t>(static_cast<uint16_t>(r.mypath)) << 16));
  c.word(static_cast<uint16_t>(r.tailpath) | (static_cast<uint32_t>(static_cast<uint16_t>(r.headpath)) << 16));
  c.word(static_cast<uint16_t>(r.seq));
  c.word(static_cast<uint32_t>(r.V.size()));
  for (Value v : r.V) c.value(v);
  c.word(static_cast<uint32_t>(r.E.size()));
  for (const auto& [a, b] : r.E) {
    c.value(a);
    c.value(b);
  }
  c.word(static_cast<uint32_t>(r.paths.size()));
  for (const Path& p : r.paths) {
    c.word(static_cast<uint32_t>(p.size()));
    for (Value v : p) c.value(v);
  }
}

}  // namespace

std::vector<uint32_t> canonical_words(const Configuration& cfg, bool with_caches) {
  Canon c(cfg);
  const CellId static_end = cfg.layout->static_end;
  for (CellId i = 0; i < static_end; ++i) c.value(cfg.mem.peek(i));
  for (const ProcState& ps : cfg.procs) {
    c.word(0x9C0C0000u);
    c.word((ps.active ? 1u : 0u) | (ps.in_cs ? 2u : 0u) | (ps.csr_pending ? 4u : 0u) |
           (static_cast<uint32_t>(ps.tpc) << 8) | (static_cast<uint32_t>(ps.h.pch) << 16));
    c.word(static_cast<uint32_t>(ps.port + 1) | (static_cast<uint32_t>(ps.h.porth + 1) << 8) |
           (static_cast<uint32_t>(ps.level + 1) << 16));
    c.word(static_cast<uint32_t>(ps.sp_done) | (static_cast<uint32_t>(ps.crashes) << 16));
    c.word(static_cast<uint32_t>(ps.csr_steps) | (static_cast<uint32_t>(ps.exit_steps + 1) << 16));
    if (with_caches) {
      c.word(static_cast<uint32_t>(ps.call_steps) | (static_cast<uint32_t>(ps.call_rmr) << 16));
    }
    regs(c, ps.q);
  }
  c.word(static_cast<uint32_t>(cfg.obs.set1_done) | (static_cast<uint32_t>(cfg.obs.signal_done) << 1) |
         (static_cast<uint32_t>(cfg.obs.waiter_steps_after_signal) << 8));
  c.flush_blocks();
  if (with_caches) {
    for (Pid p = 0; p < cfg.n(); ++p) {
      c.word(0xCAC80000u);
      for (CellId id : cfg.mem.cache(p)) c.cell_name(id);
    }
  }
  return c.take();
}

uint64_t fingerprint(const Configuration& cfg, bool with_caches) {
  uint64_t h = 0x9E3779B97F4A7C15ull;
  for (uint32_t w : canonical_words(cfg, with_caches)) {
    h ^= w;
    h *= 0xBF58476D1CE4E5B9ull;
    h ^= h >> 31;
  }
  return h;
}

}  // namespace rme
