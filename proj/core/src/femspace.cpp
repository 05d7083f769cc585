#include "gasnet/femspace.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace gasnet {

BoundaryCondition BoundaryCondition::table(std::vector<std::pair<double, double>> points) {
  if (points.empty()) throw InvalidInput("boundary table needs at least one point");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (!(points[i].first > points[i - 1].first))
      throw InvalidInput("boundary table times must be strictly increasing");
  return BoundaryCondition(Kind::Table, 0.0, std::move(points));
}

double BoundaryCondition::value(double t) const {
  switch (kind_) {
    case Kind::Closed:
      return 0.0;
    case Kind::Constant:
      return value_;
    case Kind::Table:
      break;
  }
  if (t <= points_.front().first) return points_.front().second;
  if (t >= points_.back().first) return points_.back().second;
  const auto hi = std::upper_bound(points_.begin(), points_.end(), t,
                                   [](double x, const auto& p) { return x < p.first; });
  const auto lo = hi - 1;
  const double s = (t - lo->first) / (hi->first - lo->first);
  return (1.0 - s) * lo->second + s * hi->second;
}

DofMap::DofMap(NetworkGraph graph, Mesh mesh, BoundarySpec boundary)
    : graph_(std::move(graph)), mesh_(std::move(mesh)) {
  if (mesh_.num_edges() != graph_.num_edges())
    throw InvalidInput("mesh does not match graph");

  const int m = graph_.num_edges();
  for (EdgeId e = 0; e < m; ++e) {
    element_offset_.push_back(num_elements_);
    node_offset_.push_back(num_nodes_);
    num_elements_ += mesh_.n_elems[e];
    num_nodes_ += mesh_.n_elems[e] + 1;
    element_edge_.insert(element_edge_.end(), mesh_.n_elems[e], e);
  }

  for (const auto& [v, bc] : boundary) {
    if (v < 0 || v >= graph_.num_vertices())
      throw InvalidInput("boundary condition on unknown vertex " + std::to_string(v));
    if (graph_.degree(v) >= 2 && bc.kind() != BoundaryCondition::Kind::Closed)
      throw InvalidInput("flux prescribed on interior vertex " + std::to_string(v));
  }

  // Classify nodes: 0 = free, 1 = dependent (junction), 2 = boundary.
  std::vector<int> role(num_nodes_, 0);
  for (VertexId v = 0; v < graph_.num_vertices(); ++v) {
    const auto& inc = graph_.incident(v);
    if (inc.size() == 1) {
      BoundarySlot slot;
      slot.vertex = v;
      slot.edge = inc.front();
      slot.node = endpoint_node(slot.edge, v);
      slot.sign = incidence_sign(graph_, slot.edge, v);
      if (auto it = boundary.find(v); it != boundary.end()) slot.condition = it->second;
      role[slot.node] = 2;
      boundary_.push_back(std::move(slot));
    } else {
      // smallest incident edge id carries the dependent DOF
      VertexConstraint c;
      c.vertex = v;
      c.dependent_edge = inc.front();
      c.dependent_node = endpoint_node(c.dependent_edge, v);
      const int sign_dep = incidence_sign(graph_, c.dependent_edge, v);
      for (std::size_t k = 1; k < inc.size(); ++k) {
        const EdgeId e = inc[k];
        c.combination.emplace_back(endpoint_node(e, v),
                                   -static_cast<double>(sign_dep * incidence_sign(graph_, e, v)));
      }
      role[c.dependent_node] = 1;
      constraints_.push_back(std::move(c));
    }
  }

  node_maps_.assign(num_nodes_, {});
  for (int node = 0; node < num_nodes_; ++node) {
    if (role[node] != 0) continue;
    node_maps_[node].terms.push_back({static_cast<int>(free_nodes_.size()), 1.0});
    free_nodes_.push_back(node);
  }
  for (const auto& c : constraints_) {
    NodeMap& dep = node_maps_[c.dependent_node];
    for (const auto& [node, coeff] : c.combination) {
      // the other endpoint nodes at a junction are always free
      const FreeTerm& t = node_maps_[node].terms.front();
      dep.terms.push_back({t.free, coeff});
    }
  }
  for (std::size_t s = 0; s < boundary_.size(); ++s)
    node_maps_[boundary_[s].node].boundary_slot = static_cast<int>(s);
}

int DofMap::endpoint_node(EdgeId e, VertexId v) const {
  const Edge& edge = graph_.edge(e);
  if (v == edge.from) return node_offset_[e];
  if (v == edge.to) return node_offset_[e] + mesh_.n_elems[e];
  throw std::invalid_argument("vertex is not an endpoint of edge");
}

std::vector<double> DofMap::boundary_values(double t) const {
  std::vector<double> g;
  g.reserve(boundary_.size());
  for (const auto& slot : boundary_) g.push_back(slot.condition.value(t));
  return g;
}

DofMap build_dofmap(const NetworkGraph& graph, const Mesh& mesh, const BoundarySpec& boundary) {
  return DofMap(graph, mesh, boundary);
}

std::vector<double> expand_flux(const DofMap& dofs, std::span<const double> free,
                                std::span<const double> boundary_values) {
  if (static_cast<int>(free.size()) != dofs.num_free())
    throw std::invalid_argument("free vector has wrong length");
  if (static_cast<int>(boundary_values.size()) != dofs.num_boundary())
    throw std::invalid_argument("boundary vector has wrong length");
  std::vector<double> nodal(dofs.num_nodes(), 0.0);
  const auto& maps = dofs.node_maps();
  for (int node = 0; node < dofs.num_nodes(); ++node) {
    double v = 0.0;
    for (const FreeTerm& t : maps[node].terms) v += t.coeff * free[t.free];
    if (maps[node].boundary_slot >= 0) v += boundary_values[maps[node].boundary_slot];
    nodal[node] = v;
  }
  return nodal;
}

std::vector<double> expand_flux(const DofMap& dofs, std::span<const double> free, double t) {
  const std::vector<double> g = dofs.boundary_values(t);
  return expand_flux(dofs, free, g);
}

std::vector<double> restrict_flux(const DofMap& dofs, std::span<const double> nodal) {
  if (static_cast<int>(nodal.size()) != dofs.num_nodes())
    throw std::invalid_argument("nodal vector has wrong length");
  std::vector<double> free;
  free.reserve(dofs.num_free());
  for (int node : dofs.free_nodes()) free.push_back(nodal[node]);
  return free;
}

double kirchhoff_residual(const DofMap& dofs, std::span<const double> nodal, VertexId v) {
  // The dependent endpoint (first incident edge at a junction) is added last,
  // matching the order in which it was formed.
  const auto& inc = dofs.graph().incident(v);
  auto term = [&](EdgeId e) {
    return nodal[dofs.endpoint_node(e, v)] * incidence_sign(dofs.graph(), e, v);
  };
  double sum = 0.0;
  for (std::size_t k = 1; k < inc.size(); ++k) sum += term(inc[k]);
  return sum + term(inc.front());
}

namespace {

// Element index on edge e containing local coordinate x and the offset inside it.
std::pair<int, double> locate(const DofMap& dofs, EdgeId e, double x) {
  const double len = dofs.graph().edge(e).length;
  if (!(x >= 0.0 && x <= len))
    throw std::out_of_range("coordinate " + std::to_string(x) + " outside edge " +
                            std::to_string(e));
  const int n = dofs.mesh().n_elems[e];
  const double h = dofs.mesh().h[e];
  const int k = std::min(n - 1, static_cast<int>(x / h));
  return {k, x - k * h};
}

}  // namespace

double eval_rho(const DofMap& dofs, std::span<const double> rho, EdgeId e, double x) {
  const auto [k, dx] = locate(dofs, e, x);
  (void)dx;
  return rho[dofs.element_index(e, k)];
}

double eval_m(const DofMap& dofs, std::span<const double> nodal, EdgeId e, double x) {
  const auto [k, dx] = locate(dofs, e, x);
  const double s = dx / dofs.mesh().h[e];
  const int left = dofs.node_index(e, k);
  return (1.0 - s) * nodal[left] + s * nodal[left + 1];
}

}  // namespace gasnet
