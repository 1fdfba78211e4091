#include "rme/repair_graph.hpp"

#include <algorithm>

namespace rme {

namespace {

int index_of(const std::vector<Value>& V, Value v) {
  auto it = std::find(V.begin(), V.end(), v);
  return it == V.end() ? -1 : static_cast<int>(it - V.begin());
}

}  // namespace

PathSet compute_maximal_paths(const std::vector<Value>& V, const std::vector<Edge>& E) {
  PathSet out;
  auto fail = [&](std::string msg) {
    if (out.ok) out.error = std::move(msg);
    out.ok = false;
  };
  const size_t n = V.size();
  std::vector<int> next(n, -1);
  std::vector<int> indeg(n, 0);
  for (const auto& [from, to] : E) {
    int a = index_of(V, from);
    int b = index_of(V, to);
    if (a < 0 || b < 0) {
      fail("edge endpoint outside V: " + to_string(from) + "->" + to_string(to));
      continue;
    }
    if (next[a] >= 0 && next[a] != b) fail("out-degree 2 at " + to_string(from));
    if (next[a] == b) continue;
    next[a] = b;
    if (++indeg[b] > 1) fail("in-degree 2 at " + to_string(to));
  }
  std::vector<bool> seen(n, false);
  for (size_t i = 0; i < n; ++i) {
    if (indeg[i] != 0) continue;
    Path p;
    for (int v = static_cast<int>(i); v >= 0 && !seen[v]; v = next[v]) {
      seen[v] = true;
      p.push_back(V[v]);
    }
    out.paths.push_back(std::move(p));
  }
  for (size_t i = 0; i < n; ++i) {
    if (!seen[i]) {
      fail("cycle through " + to_string(V[i]));
      break;
    }
  }
  return out;
}

int path_containing(const std::vector<Path>& paths, Value v) {
  for (size_t i = 0; i < paths.size(); ++i) {
    if (std::find(paths[i].begin(), paths[i].end(), v) != paths[i].end()) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace rme
