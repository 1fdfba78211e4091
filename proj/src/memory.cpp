#include "rme/memory.hpp"

#include <algorithm>

namespace rme {

const char* to_string(CostModel m) { return m == CostModel::CC ? "cc" : "dsm"; }

Memory::Memory(CostModel model, int nprocs, int cache_capacity)
    : model_(model), capacity_(cache_capacity), caches_(static_cast<size_t>(nprocs)) {}

CellId Memory::alloc_block(Pid owner, std::initializer_list<Value> init, BlockKind kind) {
  return alloc_block(owner, std::vector<Value>(init), kind);
}

CellId Memory::alloc_block(Pid owner, const std::vector<Value>& init, BlockKind kind) {
  if (init.empty()) throw SimFault("empty block");
  auto base = static_cast<CellId>(cells_.size());
  for (Value v : init) {
    cells_.push_back(v);
    owner_.push_back(owner);
    base_.push_back(base);
    kind_.push_back(kind);
  }
  return base;
}

uint32_t Memory::block_len(CellId base) const {
  check(base);
  uint32_t n = 0;
  while (base + n < cells_.size() && base_[base + n] == base) ++n;
  return n;
}

bool Memory::cached(Pid p, CellId c) const {
  const auto& cc = caches_[p];
  return std::find(cc.begin(), cc.end(), c) != cc.end();
}

void Memory::touch(Pid p, CellId c) {
  auto& cc = caches_[p];
  auto it = std::find(cc.begin(), cc.end(), c);
  if (it != cc.end()) cc.erase(it);
  else if (static_cast<int>(cc.size()) >= capacity_ && !cc.empty()) cc.erase(cc.begin());
  if (capacity_ > 0) cc.push_back(c);
}

int Memory::charge_read(Pid p, CellId c) {
  if (model_ == CostModel::DSM) return owner_[c] == p ? 0 : 1;
  bool hit = cached(p, c);
  touch(p, c);
  return hit ? 0 : 1;
}

int Memory::charge_update(Pid p, CellId c) {
  if (model_ == CostModel::DSM) return owner_[c] == p ? 0 : 1;
  for (size_t q = 0; q < caches_.size(); ++q) {
    if (static_cast<Pid>(q) == p) continue;
    auto& cc = caches_[q];
    cc.erase(std::remove(cc.begin(), cc.end(), c), cc.end());
  }
  // The writer keeps a valid copy of what it just wrote.
  touch(p, c);
  return 1;
}

std::pair<Value, int> Memory::read(Pid p, CellId c) {
  check(c);
  return {cells_[c], charge_read(p, c)};
}

int Memory::write(Pid p, CellId c, Value v) {
  check(c);
  cells_[c] = v;
  return charge_update(p, c);
}

std::pair<Value, int> Memory::fas(Pid p, CellId c, Value v) {
  check(c);
  Value old = cells_[c];
  cells_[c] = v;
  return {old, charge_update(p, c)};
}

void Memory::crash_wipe_cache(Pid p) { caches_[p].clear(); }

}  // namespace rme
