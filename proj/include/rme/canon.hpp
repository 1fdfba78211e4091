#pragma once

#include <cstdint>
#include <vector>

#include "rme/world.hpp"

namespace rme {

// Canonical serialization of the behaviour-relevant state. Blocks created
// after world construction are renamed in discovery order of a traversal
// from the static cells and the registers, so unreachable blocks drop out
// and equal states reached through different allocation histories match.
// RMR counters are excluded; caches are included only when requested.
std::vector<uint32_t> canonical_words(const Configuration& cfg, bool with_caches);

uint64_t fingerprint(const Configuration& cfg, bool with_caches);

}  // namespace rme
