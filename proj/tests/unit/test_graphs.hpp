#pragma once

#include "gasnet/network.hpp"

namespace gasnet::fixtures {

// Star with one inflow pipe and two outflow pipes meeting at vertex 1.
inline NetworkGraph junction_graph(double a = 0.0, double b = 100.0) {
  return NetworkGraph(4, {Edge{0, 0, 1, 1.0, a, b, 0.5, 0.0}, Edge{1, 1, 2, 1.0, a, b, 0.5, 1.0},
                          Edge{2, 1, 3, 1.0, a, b, 0.5, 1.0}});
}

inline NetworkGraph single_pipe(double length = 10.0, double a = 0.0, double b = 0.0) {
  return NetworkGraph(2, {Edge{0, 0, 1, length, a, b, 0.5, -0.5 * length}});
}

}  // namespace gasnet::fixtures
