#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gasnet/femspace.hpp"
#include "test_graphs.hpp"

using namespace gasnet;

namespace {

int dense_rank(std::vector<std::vector<double>> a) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size(), cols = a[0].size();
  int rank = 0;
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows); ++c) {
    std::size_t piv = rank;
    for (std::size_t r = rank; r < rows; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) < 1e-12) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      const double f = a[r][c] / a[rank][c];
      for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

// Rows of the homogeneous constraints on the full nodal flux: Kirchhoff at every
// interior vertex, vanishing endpoint value at every boundary vertex.
std::vector<std::vector<double>> constraint_rows(const DofMap& dofs) {
  const NetworkGraph& g = dofs.graph();
  std::vector<std::vector<double>> rows;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    std::vector<double> row(dofs.num_nodes(), 0.0);
    if (g.degree(v) == 1) {
      row[dofs.endpoint_node(g.incident(v)[0], v)] = 1.0;
    } else {
      for (EdgeId e : g.incident(v)) row[dofs.endpoint_node(e, v)] = incidence_sign(g, e, v);
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<NetworkGraph> sample_graphs() {
  std::vector<NetworkGraph> out;
  out.push_back(fixtures::junction_graph());
  out.push_back(fixtures::single_pipe());
  // triangle with a tail: a cycle and two junctions
  out.emplace_back(4, std::vector<Edge>{Edge{0, 0, 1, 1.0, 0, 0, 1, 0}, Edge{1, 1, 2, 2.0, 0, 0, 1, 0},
                                        Edge{2, 2, 0, 1.5, 0, 0, 1, 0}, Edge{3, 3, 2, 1.0, 0, 0, 1, 0}});
  // two junctions in series, degree 4 and 3
  out.emplace_back(7, std::vector<Edge>{Edge{0, 0, 1, 1, 0, 0, 1, 0}, Edge{1, 2, 1, 1, 0, 0, 1, 0},
                                        Edge{2, 1, 3, 1, 0, 0, 1, 0}, Edge{3, 1, 4, 1, 0, 0, 1, 0},
                                        Edge{4, 4, 5, 1, 0, 0, 1, 0}, Edge{5, 6, 4, 1, 0, 0, 1, 0}});
  return out;
}

}  // namespace

TEST(DofMap, JunctionWithTwoElementsPerEdge) {
  const NetworkGraph g = fixtures::junction_graph();
  const DofMap dofs = build_dofmap(g, build_mesh(g, 0.5), {});
  EXPECT_EQ(dofs.num_elements(), 6);
  EXPECT_EQ(dofs.num_nodes(), 9);
  EXPECT_EQ(dofs.num_free(), 5);
  EXPECT_EQ(dofs.num_boundary(), 3);
  ASSERT_EQ(dofs.vertex_constraints().size(), 1u);
  EXPECT_EQ(dofs.vertex_constraints()[0].dependent_edge, 0);
}

TEST(DofMap, FreeCountMatchesNullspaceDimension) {
  for (const NetworkGraph& g : sample_graphs())
    for (double h : {1.0, 0.5, 0.25}) {
      const DofMap dofs = build_dofmap(g, build_mesh(g, h), {});
      const auto rows = constraint_rows(dofs);
      EXPECT_EQ(dofs.num_free(), dofs.num_nodes() - dense_rank(rows));

      // every basis function satisfies the constraints; the basis is independent
      std::vector<std::vector<double>> basis;
      const std::vector<double> zero_bnd(dofs.num_boundary(), 0.0);
      for (int f = 0; f < dofs.num_free(); ++f) {
        std::vector<double> unit(dofs.num_free(), 0.0);
        unit[f] = 1.0;
        const auto nodal = expand_flux(dofs, unit, zero_bnd);
        for (const auto& row : rows) {
          double s = 0.0;
          for (int n = 0; n < dofs.num_nodes(); ++n) s += row[n] * nodal[n];
          EXPECT_EQ(s, 0.0);
        }
        basis.push_back(nodal);
      }
      EXPECT_EQ(dense_rank(basis), dofs.num_free());
    }
}

TEST(DofMap, KirchhoffHoldsExactlyForRandomFluxes) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const NetworkGraph& g : sample_graphs()) {
    BoundarySpec spec;
    for (VertexId v : classify_vertices(g).boundary) spec.emplace(v, BoundaryCondition::constant(u(rng)));
    const DofMap dofs = build_dofmap(g, build_mesh(g, 0.25), spec);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> free(dofs.num_free());
      for (double& x : free) x = u(rng);
      const auto nodal = expand_flux(dofs, free, 0.0);
      for (VertexId v : classify_vertices(g).interior)
        EXPECT_EQ(kirchhoff_residual(dofs, nodal, v), 0.0);
      for (const BoundarySlot& s : dofs.boundary())
        EXPECT_EQ(nodal[s.node], s.condition.value(0.0));
      EXPECT_EQ(restrict_flux(dofs, nodal), free);
    }
  }
}

TEST(DofMap, RejectsFluxOnInteriorVertex) {
  const NetworkGraph g = fixtures::junction_graph();
  EXPECT_THROW(build_dofmap(g, build_mesh(g, 0.5), {{1, BoundaryCondition::constant(1.0)}}),
               InvalidInput);
  EXPECT_THROW(build_dofmap(g, build_mesh(g, 0.5), {{9, BoundaryCondition::closed()}}), InvalidInput);
  EXPECT_NO_THROW(build_dofmap(g, build_mesh(g, 0.5), {{1, BoundaryCondition::closed()}}));
}

TEST(BoundaryCondition, TableInterpolation) {
  const auto bc = BoundaryCondition::table({{0.0, 0.0}, {1.0, 2.0}, {3.0, 2.0}});
  EXPECT_DOUBLE_EQ(bc.value(-1.0), 0.0);
  EXPECT_DOUBLE_EQ(bc.value(0.25), 0.5);
  EXPECT_DOUBLE_EQ(bc.value(2.0), 2.0);
  EXPECT_DOUBLE_EQ(bc.value(10.0), 2.0);
  EXPECT_THROW(BoundaryCondition::table({{1.0, 0.0}, {1.0, 1.0}}), InvalidInput);
  EXPECT_THROW(BoundaryCondition::table({}), InvalidInput);
}

TEST(Evaluation, PiecewiseValues) {
  const NetworkGraph g = fixtures::single_pipe(2.0);
  const DofMap dofs = build_dofmap(g, build_mesh(g, 0.5), {});
  const std::vector<double> rho{1, 2, 3, 4};
  EXPECT_EQ(eval_rho(dofs, rho, 0, 0.25), 1.0);
  EXPECT_EQ(eval_rho(dofs, rho, 0, 0.5), 2.0);
  EXPECT_EQ(eval_rho(dofs, rho, 0, 2.0), 4.0);
  const std::vector<double> free{1.0, 3.0, -1.0};
  const auto nodal = expand_flux(dofs, free, 0.0);
  EXPECT_DOUBLE_EQ(eval_m(dofs, nodal, 0, 0.25), 0.5);
  EXPECT_DOUBLE_EQ(eval_m(dofs, nodal, 0, 0.75), 2.0);
  EXPECT_DOUBLE_EQ(eval_m(dofs, nodal, 0, 2.0), 0.0);
  EXPECT_THROW(eval_m(dofs, nodal, 0, 2.5), std::out_of_range);
}

TEST(Quadrature, ExactForCubics) {
  const double got = element_integrate([](double x) { return x * x * x - 2 * x + 1; }, 1.0, 0.5);
  const double exact = (std::pow(1.5, 4) - 1.0) / 4 - (1.5 * 1.5 - 1.0) + 0.5;
  EXPECT_NEAR(got, exact, 1e-14);
}

TEST(Quadrature, AbsoluteValueSplitAtRoot) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double m0 = u(rng), m1 = u(rng), c = u(rng);
    auto g = [&](double xi) { return 1.0 + c * xi * xi; };
    // reference: composite midpoint with many panels
    const int n = 200000;
    double ref = 0.0;
    for (int k = 0; k < n; ++k) {
      const double xi = (k + 0.5) / n;
      ref += std::abs(m0 + (m1 - m0) * xi) * g(xi) / n;
    }
    EXPECT_NEAR(integrate_abs_linear(m0, m1, g), ref, 1e-9);
  }
}
