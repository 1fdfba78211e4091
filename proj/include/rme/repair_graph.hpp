#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rme/value.hpp"
#include "rme/world.hpp"

namespace rme {

using Edge = std::pair<Value, Value>;  // (node, predecessor)

struct PathSet {
  std::vector<Path> paths;  // ordered by the position of the rear in V
  bool ok = true;           // false: cycle, branching, or dangling edge
  std::string error;
};

// Splits (V, E) into vertex-disjoint maximal paths. Edges point from a
// node to its predecessor, so a path starts at its rear (in-degree 0) and
// ends at its front (out-degree 0).
PathSet compute_maximal_paths(const std::vector<Value>& V, const std::vector<Edge>& E);

inline Value rear(const Path& p) { return p.front(); }
inline Value front(const Path& p) { return p.back(); }

// Index of the path containing v, or -1.
int path_containing(const std::vector<Path>& paths, Value v);

}  // namespace rme
