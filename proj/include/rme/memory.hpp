#pragma once

#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

#include "rme/value.hpp"

namespace rme {

enum class CostModel : uint8_t { CC, DSM };

enum class BlockKind : uint8_t { Plain, QNode, Sentinel };

const char* to_string(CostModel m);

// Word-addressable persistent memory with RMR accounting. Cells are never
// freed. Caches hold cell ids in LRU order (most recent last).
class Memory {
 public:
  Memory() = default;
  Memory(CostModel model, int nprocs, int cache_capacity = 8);

  CellId alloc_block(Pid owner, std::initializer_list<Value> init,
                     BlockKind kind = BlockKind::Plain);
  CellId alloc_block(Pid owner, const std::vector<Value>& init,
                     BlockKind kind = BlockKind::Plain);

  std::pair<Value, int> read(Pid p, CellId c);
  int write(Pid p, CellId c, Value v);
  std::pair<Value, int> fas(Pid p, CellId c, Value v);
  void crash_wipe_cache(Pid p);

  // Cost-free access for checkers, scenario setup and fault injection.
  Value peek(CellId c) const { check(c); return cells_[c]; }
  void poke(CellId c, Value v) { check(c); cells_[c] = v; }

  size_t size() const { return cells_.size(); }
  Pid owner(CellId c) const { check(c); return owner_[c]; }
  CellId block_base(CellId c) const { check(c); return base_[c]; }
  uint32_t block_len(CellId base) const;
  BlockKind kind(CellId c) const { check(c); return kind_[base_[c]]; }
  bool allocated(CellId c) const { return c < cells_.size(); }
  bool cached(Pid p, CellId c) const;
  const std::vector<CellId>& cache(Pid p) const { return caches_[p]; }

  CostModel model() const { return model_; }
  int cache_capacity() const { return capacity_; }
  int nprocs() const { return static_cast<int>(caches_.size()); }

 private:
  void check(CellId c) const {
    if (c >= cells_.size()) throw SimFault("access to unallocated cell " + std::to_string(c));
  }
  int charge_read(Pid p, CellId c);
  int charge_update(Pid p, CellId c);
  void touch(Pid p, CellId c);

  CostModel model_ = CostModel::DSM;
  int capacity_ = 8;
  std::vector<Value> cells_;
  std::vector<Pid> owner_;
  std::vector<CellId> base_;
  std::vector<BlockKind> kind_;
  std::vector<std::vector<CellId>> caches_;
};

}  // namespace rme
