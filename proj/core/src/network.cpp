#include "gasnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace gasnet {

NetworkGraph::NetworkGraph(int num_vertices, std::vector<Edge> edges)
    : num_vertices_(num_vertices), edges_(std::move(edges)) {
  if (num_vertices_ < 2) throw InvalidInput("network needs at least two vertices");
  if (edges_.empty()) throw InvalidInput("network needs at least one edge");

  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    const std::string tag = "edge " + std::to_string(e.id) + ": ";
    if (e.id != static_cast<EdgeId>(i))
      throw InvalidInput("edge ids must be 0..m-1 without gaps or duplicates");
    if (e.from < 0 || e.from >= num_vertices_ || e.to < 0 || e.to >= num_vertices_)
      throw InvalidInput(tag + "vertex out of range");
    if (e.from == e.to) throw InvalidInput(tag + "self-loop");
    if (!(e.length > 0.0) || !std::isfinite(e.length))
      throw InvalidInput(tag + "length must be positive");
    if (!(e.visc_a >= 0.0)) throw InvalidInput(tag + "visc_a must be nonnegative");
    if (!(e.fric_b >= 0.0)) throw InvalidInput(tag + "fric_b must be nonnegative");
    if (!(e.eos_c > 0.0)) throw InvalidInput(tag + "eos_c must be positive");
  }

  incident_.assign(num_vertices_, {});
  for (const Edge& e : edges_) {
    incident_[e.from].push_back(e.id);
    incident_[e.to].push_back(e.id);
  }
  for (VertexId v = 0; v < num_vertices_; ++v)
    if (incident_[v].empty())
      throw InvalidInput("vertex " + std::to_string(v) + " has no incident edge");

  // connectivity by BFS over vertices
  std::vector<char> seen(num_vertices_, 0);
  std::queue<VertexId> queue;
  queue.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop();
    for (EdgeId eid : incident_[v]) {
      const Edge& e = edges_[eid];
      const VertexId w = (e.from == v) ? e.to : e.from;
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        queue.push(w);
      }
    }
  }
  if (reached != num_vertices_) throw InvalidInput("network graph is not connected");
}

const Edge& NetworkGraph::edge(EdgeId e) const {
  if (e < 0 || e >= num_edges()) throw std::out_of_range("edge id out of range");
  return edges_[e];
}

const std::vector<EdgeId>& NetworkGraph::incident(VertexId v) const {
  if (v < 0 || v >= num_vertices_) throw std::out_of_range("vertex id out of range");
  return incident_[v];
}

double NetworkGraph::total_length() const {
  return std::accumulate(edges_.begin(), edges_.end(), 0.0,
                         [](double s, const Edge& e) { return s + e.length; });
}

int incidence_sign(const NetworkGraph& graph, EdgeId e, VertexId v) {
  const Edge& edge = graph.edge(e);
  if (v == edge.from) return -1;
  if (v == edge.to) return 1;
  return 0;
}

std::vector<std::vector<int>> incidence_matrix(const NetworkGraph& graph) {
  std::vector<std::vector<int>> n(graph.num_vertices(), std::vector<int>(graph.num_edges(), 0));
  for (const Edge& e : graph.edges()) {
    n[e.from][e.id] = -1;
    n[e.to][e.id] = 1;
  }
  return n;
}

VertexClasses classify_vertices(const NetworkGraph& graph) {
  VertexClasses out;
  for (VertexId v = 0; v < graph.num_vertices(); ++v)
    (graph.degree(v) >= 2 ? out.interior : out.boundary).push_back(v);
  return out;
}

int Mesh::total_elements() const {
  return std::accumulate(n_elems.begin(), n_elems.end(), 0);
}

Mesh build_mesh(const NetworkGraph& graph, double target_h) {
  if (!(target_h > 0.0) || !std::isfinite(target_h))
    throw InvalidInput("mesh size must be positive");
  std::vector<int> counts;
  counts.reserve(graph.num_edges());
  for (const Edge& e : graph.edges())
    counts.push_back(std::max(1, static_cast<int>(std::lround(e.length / target_h))));
  return build_mesh(graph, counts);
}

Mesh build_mesh(const NetworkGraph& graph, const std::vector<int>& n_elems) {
  if (static_cast<int>(n_elems.size()) != graph.num_edges())
    throw InvalidInput("one element count per edge required");
  Mesh mesh;
  mesh.n_elems = n_elems;
  for (const Edge& e : graph.edges()) {
    if (n_elems[e.id] < 1) throw InvalidInput("element count must be positive");
    mesh.h.push_back(e.length / n_elems[e.id]);
  }
  return mesh;
}

}  // namespace gasnet
