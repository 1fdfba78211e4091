#include <gtest/gtest.h>

#include "rme/memory.hpp"
#include "rme/value.hpp"

namespace rme {
namespace {

TEST(Value, RoundTripsThroughText) {
  for (Value v : {Value::bot(), Value::nil(), Value::node(17), Value::boolean(true), Value::boolean(false),
                  Value::sig(Sig::Present), Value::sig(Sig::Absent), Value::port(3), Value::ref(9),
                  Value::integer(42)}) {
    EXPECT_EQ(value_from_string(to_string(v)), v) << to_string(v);
  }
}

TEST(Value, SentinelsAreOrdinaryNodes) {
  EXPECT_TRUE(Value::node(3).is_node());
  EXPECT_NE(Value::node(3), Value::ref(3));
  EXPECT_FALSE(Value::nil().is_node());
}

TEST(Memory, BlocksRecordOwnerKindAndLength) {
  Memory m(CostModel::DSM, 2);
  CellId a = m.alloc_block(0, {Value::nil(), Value::nil(), Value::nil()}, BlockKind::QNode);
  CellId b = m.alloc_block(kGlobal, {Value::integer(1)});
  EXPECT_EQ(a, 0u);
  EXPECT_EQ(b, 3u);
  EXPECT_EQ(m.block_len(a), 3u);
  EXPECT_EQ(m.block_len(b), 1u);
  EXPECT_EQ(m.block_base(a + 2), a);
  EXPECT_EQ(m.kind(a + 1), BlockKind::QNode);
  EXPECT_EQ(m.kind(b), BlockKind::Plain);
  EXPECT_EQ(m.owner(a + 1), 0);
  EXPECT_EQ(m.owner(b), kGlobal);
}

TEST(Memory, UnallocatedAccessIsAHarnessFault) {
  Memory m(CostModel::DSM, 1);
  EXPECT_THROW(m.read(0, 5), SimFault);
  EXPECT_THROW(m.alloc_block(0, std::vector<Value>{}), SimFault);
}

TEST(Memory, DsmChargesRemoteAccessOnly) {
  Memory m(CostModel::DSM, 2);
  CellId mine = m.alloc_block(0, {Value::integer(1)});
  CellId shared = m.alloc_block(kGlobal, {Value::integer(2)});
  EXPECT_EQ(m.read(0, mine).second, 0);
  EXPECT_EQ(m.read(1, mine).second, 1);
  EXPECT_EQ(m.read(0, shared).second, 1);
  EXPECT_EQ(m.write(0, mine, Value::integer(5)), 0);
  EXPECT_EQ(m.write(1, mine, Value::integer(6)), 1);
  auto [old, cost] = m.fas(0, shared, Value::integer(7));
  EXPECT_EQ(old, Value::integer(2));
  EXPECT_EQ(cost, 1);
  EXPECT_EQ(m.peek(shared), Value::integer(7));
  // Repeated remote reads are charged every time.
  EXPECT_EQ(m.read(1, mine).second, 1);
}

TEST(Memory, CcChargesMissesAndInvalidates) {
  Memory m(CostModel::CC, 2, 8);
  CellId c = m.alloc_block(kGlobal, {Value::integer(0)});
  EXPECT_EQ(m.read(0, c).second, 1);
  EXPECT_EQ(m.read(0, c).second, 0);
  EXPECT_EQ(m.read(1, c).second, 1);
  // A write by p1 invalidates p0's copy and leaves p1 with a valid one.
  EXPECT_EQ(m.write(1, c, Value::integer(3)), 1);
  EXPECT_FALSE(m.cached(0, c));
  EXPECT_TRUE(m.cached(1, c));
  EXPECT_EQ(m.read(1, c).second, 0);
  EXPECT_EQ(m.read(0, c).second, 1);
  // Updates are always charged.
  EXPECT_EQ(m.fas(1, c, Value::integer(4)).second, 1);
}

TEST(Memory, CcEvictsLeastRecentlyUsed) {
  Memory m(CostModel::CC, 1, 2);
  CellId a = m.alloc_block(kGlobal, {Value::nil()});
  CellId b = m.alloc_block(kGlobal, {Value::nil()});
  CellId c = m.alloc_block(kGlobal, {Value::nil()});
  m.read(0, a);
  m.read(0, b);
  m.read(0, a);  // a is now most recent
  m.read(0, c);  // evicts b
  EXPECT_TRUE(m.cached(0, a));
  EXPECT_FALSE(m.cached(0, b));
  EXPECT_TRUE(m.cached(0, c));
  EXPECT_EQ(m.cache(0).back(), c);
  EXPECT_EQ(m.read(0, b).second, 1);
}

TEST(Memory, CrashWipesOnlyTheCrashedCache) {
  Memory m(CostModel::CC, 2, 4);
  CellId c = m.alloc_block(kGlobal, {Value::nil()});
  m.read(0, c);
  m.read(1, c);
  m.crash_wipe_cache(0);
  EXPECT_FALSE(m.cached(0, c));
  EXPECT_TRUE(m.cached(1, c));
  // Memory contents survive.
  EXPECT_EQ(m.peek(c), Value::nil());
}

TEST(Memory, PeekAndPokeAreFree) {
  Memory m(CostModel::CC, 1, 4);
  CellId c = m.alloc_block(kGlobal, {Value::nil()});
  m.poke(c, Value::integer(9));
  EXPECT_EQ(m.peek(c), Value::integer(9));
  EXPECT_TRUE(m.cache(0).empty());
}

}  // namespace
}  // namespace rme
