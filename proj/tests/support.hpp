#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "ssg/kgraph.hpp"

namespace ssg::test {

// Edge by 1-based color and label, as written in model files.
inline EdgeId edge(const KGraph& g, int color, std::uint32_t label) { return *g.find_edge(color - 1, label); }

// Path from (color, label) pairs in any composable order.
inline Path path(const KGraph& g, std::initializer_list<std::pair<int, std::uint32_t>> seq) {
  std::vector<EdgeId> edges;
  for (auto [c, l] : seq) edges.push_back(edge(g, c, l));
  return g.path_from_edges(edges);
}

}  // namespace ssg::test
