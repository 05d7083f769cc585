#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gasnet/eos.hpp"
#include "gasnet/femspace.hpp"
#include "gasnet/network.hpp"
#include "gasnet/scheme.hpp"

namespace gasnet {

struct SchemaIssue {
  std::string path;  // JSON pointer, e.g. "/network/edges/0/length"
  std::string reason;
};

/// Scenario text that does not satisfy the schema. what() lists every issue.
class SchemaError : public std::runtime_error {
public:
  explicit SchemaError(std::vector<SchemaIssue> issues);
  const std::vector<SchemaIssue>& issues() const { return issues_; }

private:
  std::vector<SchemaIssue> issues_;
};

struct FlowValue {
  double rho = 1.0;
  double m = 0.0;

  bool operator==(const FlowValue&) const = default;
};

/// Initial data on one edge, in the edge's display coordinate x_start + s.
struct InitialCondition {
  enum class Kind { Constant, Step, Table };

  Kind kind = Kind::Constant;
  FlowValue value;            // Constant
  double x_split = 0.0;       // Step: left for x < x_split, right for x > x_split,
  FlowValue left, right;      //       their average at x == x_split
  std::vector<double> table_x;  // Table: piecewise linear, held constant outside
  std::vector<FlowValue> table_values;

  FlowValue at(double x) const;

  bool operator==(const InitialCondition&) const = default;
};

enum class OracleKind { None, DamBreak, SteadyPipe, JunctionSteady };

struct Scenario {
  std::string name;
  int num_vertices = 0;
  std::vector<Edge> edges;
  double gamma = 2.0;
  double mesh_h = 0.01;
  double tau = 0.005;
  double t_end = 0.0;
  std::optional<double> steady_tol;
  int sweeps = 2;
  std::optional<double> fixpoint_tol;
  int max_sweeps = 100;
  double rho_floor = 0.0;
  std::map<EdgeId, InitialCondition> initial;
  BoundarySpec boundary;
  std::vector<double> snapshots;
  std::string out_dir = "out";
  OracleKind oracle = OracleKind::None;

  bool operator==(const Scenario&) const = default;
};

/// Parses and validates scenario JSON. Unknown keys are rejected.
/// Throws SchemaError listing every violation.
Scenario parse_scenario(const std::string& text);

/// Pretty-printed JSON that parse_scenario reads back to an equal Scenario.
std::string serialize_scenario(const Scenario& scenario);

std::vector<std::string> preset_names();
/// Throws std::out_of_range for an unknown name.
Scenario preset(const std::string& name);

std::string to_string(OracleKind kind);

/// Everything needed to run a scenario.
struct Simulation {
  NetworkGraph graph;
  GasLaw law;
  DofMap dofs;
  State initial;
  RunConfig config;
};

/// Builds graph, mesh, DOFs and the projected initial state.
Simulation make_simulation(const Scenario& scenario);

}  // namespace gasnet
