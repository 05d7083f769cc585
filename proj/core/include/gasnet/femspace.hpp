#pragma once

#include <array>
#include <cmath>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "gasnet/network.hpp"

namespace gasnet {

/// Flux condition at a boundary vertex. The value is m itself (not m * n_e).
class BoundaryCondition {
public:
  enum class Kind { Closed, Constant, Table };

  static BoundaryCondition closed() { return BoundaryCondition(Kind::Closed, 0.0, {}); }
  static BoundaryCondition constant(double value) {
    return BoundaryCondition(Kind::Constant, value, {});
  }
  /// Piecewise linear in t through (t, value) pairs, held constant outside.
  /// Times must be strictly increasing.
  static BoundaryCondition table(std::vector<std::pair<double, double>> points);

  Kind kind() const { return kind_; }
  double constant_value() const { return value_; }
  const std::vector<std::pair<double, double>>& points() const { return points_; }

  double value(double t) const;

  bool operator==(const BoundaryCondition&) const = default;

private:
  BoundaryCondition(Kind kind, double value, std::vector<std::pair<double, double>> points)
      : kind_(kind), value_(value), points_(std::move(points)) {}

  Kind kind_;
  double value_;
  std::vector<std::pair<double, double>> points_;
};

/// Boundary vertices not listed are closed.
using BoundarySpec = std::map<VertexId, BoundaryCondition>;

/// One summand of a nodal value expressed through free DOFs.
struct FreeTerm {
  int free = 0;
  double coeff = 0.0;
};

/// How a P1 node's value is obtained: sum of free DOF terms, plus the prescribed
/// boundary value when `boundary_slot >= 0`.
struct NodeMap {
  std::vector<FreeTerm> terms;
  int boundary_slot = -1;
};

struct VertexConstraint {
  VertexId vertex = 0;
  EdgeId dependent_edge = 0;
  int dependent_node = 0;
  /// m(dependent_node) = sum coeff * m(node)
  std::vector<std::pair<int, double>> combination;
};

struct BoundarySlot {
  VertexId vertex = 0;
  EdgeId edge = 0;
  int node = 0;
  int sign = 0;  // n_e(v)
  BoundaryCondition condition = BoundaryCondition::closed();
};

/// Global numbering for Q_h = P0 and V_h = P1 with Kirchhoff and boundary
/// constraints eliminated. Density DOFs are element indices, flux nodes are
/// numbered edge by edge (n_elems + 1 per edge, from the inflow end).
class DofMap {
public:
  DofMap(NetworkGraph graph, Mesh mesh, BoundarySpec boundary);

  const NetworkGraph& graph() const { return graph_; }
  const Mesh& mesh() const { return mesh_; }

  int num_elements() const { return num_elements_; }
  int num_nodes() const { return num_nodes_; }
  int num_free() const { return static_cast<int>(free_nodes_.size()); }
  int num_boundary() const { return static_cast<int>(boundary_.size()); }

  int element_offset(EdgeId e) const { return element_offset_.at(e); }
  int node_offset(EdgeId e) const { return node_offset_.at(e); }
  int element_index(EdgeId e, int k) const { return element_offset_.at(e) + k; }
  int node_index(EdgeId e, int i) const { return node_offset_.at(e) + i; }
  /// Node at vertex v on edge e (v must be an endpoint of e).
  int endpoint_node(EdgeId e, VertexId v) const;
  EdgeId element_edge(int elem) const { return element_edge_.at(elem); }

  const std::vector<int>& free_nodes() const { return free_nodes_; }
  const std::vector<NodeMap>& node_maps() const { return node_maps_; }
  const std::vector<VertexConstraint>& vertex_constraints() const { return constraints_; }
  const std::vector<BoundarySlot>& boundary() const { return boundary_; }

  /// Prescribed boundary values at time t, one per boundary slot.
  std::vector<double> boundary_values(double t) const;

  /// Element length of element `elem`.
  double h(int elem) const { return mesh_.h[element_edge_[elem]]; }

private:
  NetworkGraph graph_;
  Mesh mesh_;
  int num_elements_ = 0;
  int num_nodes_ = 0;
  std::vector<int> element_offset_;
  std::vector<int> node_offset_;
  std::vector<EdgeId> element_edge_;
  std::vector<int> free_nodes_;
  std::vector<NodeMap> node_maps_;
  std::vector<VertexConstraint> constraints_;
  std::vector<BoundarySlot> boundary_;
};

/// Throws InvalidInput for a non-closed condition on an interior vertex or an
/// unknown vertex id.
DofMap build_dofmap(const NetworkGraph& graph, const Mesh& mesh, const BoundarySpec& boundary);

/// Full nodal flux from free DOFs and explicit boundary slot values.
std::vector<double> expand_flux(const DofMap& dofs, std::span<const double> free,
                                std::span<const double> boundary_values);
/// Full nodal flux with the boundary values prescribed at time t.
std::vector<double> expand_flux(const DofMap& dofs, std::span<const double> free, double t);

/// Picks the free DOFs out of a full nodal vector.
std::vector<double> restrict_flux(const DofMap& dofs, std::span<const double> nodal);

/// Sum_e m_e(v) n_e(v) at vertex v.
double kirchhoff_residual(const DofMap& dofs, std::span<const double> nodal, VertexId v);

/// P0 value on edge e at local coordinate x in [0, length]. At an interior
/// element boundary the element to the right is used.
double eval_rho(const DofMap& dofs, std::span<const double> rho, EdgeId e, double x);
/// P1 value on edge e at local coordinate x in [0, length].
double eval_m(const DofMap& dofs, std::span<const double> nodal, EdgeId e, double x);

/// Two-point Gauss rule on the reference element [0,1]; exact up to degree 3.
struct QuadratureRule {
  std::array<double, 2> points;
  std::array<double, 2> weights;
};

inline constexpr QuadratureRule kGauss2{
    {0.5 - 0.28867513459481288225, 0.5 + 0.28867513459481288225}, {0.5, 0.5}};

/// Integral of f over [x0, x0 + h] by 2-point Gauss.
template <class F>
double element_integrate(F&& f, double x0, double h) {
  double sum = 0.0;
  for (std::size_t q = 0; q < kGauss2.points.size(); ++q)
    sum += kGauss2.weights[q] * f(x0 + kGauss2.points[q] * h);
  return sum * h;
}

/// Integral over the reference element of |m(xi)| * g(xi), m linear with end
/// values (m0, m1), g a polynomial of degree <= 2 in xi. The element is split at
/// the root of m so that each piece is integrated exactly. Not scaled by h.
template <class G>
double integrate_abs_linear(double m0, double m1, G&& g) {
  auto piece = [&](double a, double b) {
    double sum = 0.0;
    for (std::size_t q = 0; q < kGauss2.points.size(); ++q) {
      const double xi = a + kGauss2.points[q] * (b - a);
      sum += kGauss2.weights[q] * std::abs(m0 + (m1 - m0) * xi) * g(xi);
    }
    return sum * (b - a);
  };
  if ((m0 < 0.0 && m1 > 0.0) || (m0 > 0.0 && m1 < 0.0)) {
    const double root = m0 / (m0 - m1);
    return piece(0.0, root) + piece(root, 1.0);
  }
  return piece(0.0, 1.0);
}

}  // namespace gasnet
