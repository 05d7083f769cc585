#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gasnet {

/// Thrown when a graph, mesh or parameter set violates its construction invariants.
class InvalidInput : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

using VertexId = int;
using EdgeId = int;

struct Vertex {
  VertexId id = 0;
};

/// A pipe. `from` is the inflow vertex (orientation -1), `to` the outflow vertex (+1).
struct Edge {
  EdgeId id = 0;
  VertexId from = 0;
  VertexId to = 0;
  double length = 1.0;
  double visc_a = 0.0;
  double fric_b = 0.0;
  double eos_c = 1.0;
  /// Display coordinate of the `from` end; only used when writing snapshots.
  double x_start = 0.0;

  bool operator==(const Edge&) const = default;
};

/// Finite, directed, connected geometric graph. Immutable after construction.
class NetworkGraph {
public:
  /// Edges must carry ids 0..m-1 (in any order). Throws InvalidInput on
  /// self-loops, bad parameters, isolated vertices or a disconnected graph.
  NetworkGraph(int num_vertices, std::vector<Edge> edges);

  int num_vertices() const { return num_vertices_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const;

  /// Incident edges of v in ascending edge id.
  const std::vector<EdgeId>& incident(VertexId v) const;
  int degree(VertexId v) const { return static_cast<int>(incident(v).size()); }

  double total_length() const;

private:
  int num_vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> incident_;
};

/// n_e(v): -1 at the inflow vertex, +1 at the outflow vertex, 0 otherwise.
int incidence_sign(const NetworkGraph& graph, EdgeId e, VertexId v);

/// Dense incidence matrix N (num_vertices x num_edges), row-major.
std::vector<std::vector<int>> incidence_matrix(const NetworkGraph& graph);

struct VertexClasses {
  std::vector<VertexId> interior;  // degree >= 2
  std::vector<VertexId> boundary;  // degree 1
};

VertexClasses classify_vertices(const NetworkGraph& graph);

/// Uniform mesh per edge.
struct Mesh {
  std::vector<int> n_elems;  // per edge
  std::vector<double> h;     // per edge, length / n_elems

  bool operator==(const Mesh&) const = default;

  int num_edges() const { return static_cast<int>(n_elems.size()); }
  int total_elements() const;
};

/// n_elems = max(1, round(length / target_h)). Throws InvalidInput if target_h <= 0.
Mesh build_mesh(const NetworkGraph& graph, double target_h);

/// Per-edge element counts given explicitly.
Mesh build_mesh(const NetworkGraph& graph, const std::vector<int>& n_elems);

}  // namespace gasnet
