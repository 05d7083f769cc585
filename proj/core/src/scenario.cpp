#include "gasnet/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"

namespace gasnet {

using nlohmann::json;

SchemaError::SchemaError(std::vector<SchemaIssue> issues)
    : std::runtime_error([&] {
        std::string msg = "scenario schema error";
        for (const auto& i : issues) msg += "\n  " + (i.path.empty() ? "/" : i.path) + ": " + i.reason;
        return msg;
      }()),
      issues_(std::move(issues)) {}

FlowValue InitialCondition::at(double x) const {
  switch (kind) {
    case Kind::Constant:
      return value;
    case Kind::Step:
      if (x < x_split) return left;
      if (x > x_split) return right;
      return {0.5 * (left.rho + right.rho), 0.5 * (left.m + right.m)};
    case Kind::Table:
      break;
  }
  if (x <= table_x.front()) return table_values.front();
  if (x >= table_x.back()) return table_values.back();
  const auto hi = std::upper_bound(table_x.begin(), table_x.end(), x);
  const auto i = static_cast<std::size_t>(hi - table_x.begin()) - 1;
  const double s = (x - table_x[i]) / (table_x[i + 1] - table_x[i]);
  return {(1 - s) * table_values[i].rho + s * table_values[i + 1].rho,
          (1 - s) * table_values[i].m + s * table_values[i + 1].m};
}

std::string to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::None: return "none";
    case OracleKind::DamBreak: return "dam_break";
    case OracleKind::SteadyPipe: return "steady_pipe";
    case OracleKind::JunctionSteady: return "junction_steady";
  }
  return "none";
}

namespace {

// Collects schema issues while walking a JSON document.
class Reader {
public:
  std::vector<SchemaIssue> issues;

  void fail(const std::string& path, const std::string& reason) { issues.push_back({path, reason}); }

  bool object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
      fail(path, "expected an object");
      return false;
    }
    for (const auto& [key, _] : j.items())
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
        fail(path + "/" + key, "unknown key");
    return true;
  }

  const json* child(const json& j, const char* key, const std::string& path, bool required) {
    if (j.is_object() && j.contains(key) && !j.at(key).is_null()) return &j.at(key);
    if (required) fail(path + "/" + key, "missing required key");
    return nullptr;
  }

  std::optional<double> number(const json& j, const char* key, const std::string& path,
                               bool required) {
    const json* c = child(j, key, path, required);
    if (!c) return std::nullopt;
    if (!c->is_number()) {
      fail(path + "/" + key, "expected a number");
      return std::nullopt;
    }
    const double v = c->get<double>();
    if (!std::isfinite(v)) {
      fail(path + "/" + key, "must be finite");
      return std::nullopt;
    }
    return v;
  }

  std::optional<int> integer(const json& j, const char* key, const std::string& path, bool required) {
    const json* c = child(j, key, path, required);
    if (!c) return std::nullopt;
    if (!c->is_number_integer()) {
      fail(path + "/" + key, "expected an integer");
      return std::nullopt;
    }
    return c->get<int>();
  }

  template <class Pred>
  void check(const std::optional<double>& v, const std::string& path, Pred pred, const char* reason) {
    if (v && !pred(*v)) fail(path, reason);
  }
};

FlowValue read_flow(Reader& r, const json& j, const std::string& path) {
  FlowValue f;
  if (!r.object(j, path, {"rho", "m"})) return f;
  const auto rho = r.number(j, "rho", path, true);
  r.check(rho, path + "/rho", [](double v) { return v > 0.0; }, "density must be positive");
  f.rho = rho.value_or(1.0);
  f.m = r.number(j, "m", path, false).value_or(0.0);
  return f;
}

json write_flow(const FlowValue& f) { return json{{"rho", f.rho}, {"m", f.m}}; }

OracleKind parse_oracle(Reader& r, const std::string& s, const std::string& path) {
  for (auto k : {OracleKind::None, OracleKind::DamBreak, OracleKind::SteadyPipe,
                 OracleKind::JunctionSteady})
    if (to_string(k) == s) return k;
  r.fail(path, "unknown oracle '" + s + "'");
  return OracleKind::None;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& ex) {
    throw SchemaError({{"", std::string("malformed JSON: ") + ex.what()}});
  }

  Reader r;
  Scenario s;
  if (!r.object(doc, "", {"name", "network", "eos", "mesh", "time", "fixed_point", "initial",
                          "boundary", "snapshots", "output", "oracle"}))
    throw SchemaError(r.issues);

  if (const json* name = r.child(doc, "name", "", false)) {
    if (name->is_string()) s.name = name->get<std::string>();
    else r.fail("/name", "expected a string");
  }

  // network
  if (const json* net = r.child(doc, "network", "", true);
      net && r.object(*net, "/network", {"vertices", "edges"})) {
    s.num_vertices = r.integer(*net, "vertices", "/network", true).value_or(0);
    if (s.num_vertices < 2 && net->contains("vertices"))
      r.fail("/network/vertices", "need at least two vertices");
    if (const json* edges = r.child(*net, "edges", "/network", true)) {
      if (!edges->is_array() || edges->empty()) {
        r.fail("/network/edges", "expected a nonempty array");
      } else {
        for (std::size_t i = 0; i < edges->size(); ++i) {
          const std::string p = "/network/edges/" + std::to_string(i);
          const json& ej = (*edges)[i];
          if (!r.object(ej, p, {"id", "from", "to", "length", "a", "b", "c", "x_start"})) continue;
          Edge e;
          e.id = r.integer(ej, "id", p, false).value_or(static_cast<int>(i));
          e.from = r.integer(ej, "from", p, true).value_or(0);
          e.to = r.integer(ej, "to", p, true).value_or(0);
          const auto len = r.number(ej, "length", p, true);
          r.check(len, p + "/length", [](double v) { return v > 0.0; }, "must be positive");
          e.length = len.value_or(1.0);
          const auto a = r.number(ej, "a", p, false);
          r.check(a, p + "/a", [](double v) { return v >= 0.0; }, "must be nonnegative");
          e.visc_a = a.value_or(0.0);
          const auto b = r.number(ej, "b", p, false);
          r.check(b, p + "/b", [](double v) { return v >= 0.0; }, "must be nonnegative");
          e.fric_b = b.value_or(0.0);
          const auto c = r.number(ej, "c", p, true);
          r.check(c, p + "/c", [](double v) { return v > 0.0; }, "must be positive");
          e.eos_c = c.value_or(1.0);
          e.x_start = r.number(ej, "x_start", p, false).value_or(0.0);
          if (e.from < 0 || e.from >= s.num_vertices) r.fail(p + "/from", "unknown vertex");
          if (e.to < 0 || e.to >= s.num_vertices) r.fail(p + "/to", "unknown vertex");
          if (e.from == e.to) r.fail(p, "self-loop");
          s.edges.push_back(e);
        }
      }
    }
  }

  if (const json* eos = r.child(doc, "eos", "", true); eos && r.object(*eos, "/eos", {"gamma"})) {
    const auto g = r.number(*eos, "gamma", "/eos", true);
    r.check(g, "/eos/gamma", [](double v) { return v > 1.0; }, "must exceed 1");
    s.gamma = g.value_or(2.0);
  }

  if (const json* mesh = r.child(doc, "mesh", "", true); mesh && r.object(*mesh, "/mesh", {"h"})) {
    const auto h = r.number(*mesh, "h", "/mesh", true);
    r.check(h, "/mesh/h", [](double v) { return v > 0.0; }, "must be positive");
    s.mesh_h = h.value_or(0.01);
  }

  if (const json* time = r.child(doc, "time", "", true);
      time && r.object(*time, "/time", {"tau", "t_end", "steady_tol"})) {
    const auto tau = r.number(*time, "tau", "/time", true);
    r.check(tau, "/time/tau", [](double v) { return v > 0.0; }, "must be positive");
    s.tau = tau.value_or(0.005);
    const auto t_end = r.number(*time, "t_end", "/time", true);
    r.check(t_end, "/time/t_end", [](double v) { return v >= 0.0; }, "must be nonnegative");
    s.t_end = t_end.value_or(0.0);
    s.steady_tol = r.number(*time, "steady_tol", "/time", false);
    r.check(s.steady_tol, "/time/steady_tol", [](double v) { return v > 0.0; }, "must be positive");
  }

  if (const json* fp = r.child(doc, "fixed_point", "", false);
      fp && r.object(*fp, "/fixed_point", {"sweeps", "tol", "max_sweeps", "rho_floor"})) {
    s.sweeps = r.integer(*fp, "sweeps", "/fixed_point", false).value_or(2);
    if (s.sweeps < 1) r.fail("/fixed_point/sweeps", "must be at least 1");
    s.fixpoint_tol = r.number(*fp, "tol", "/fixed_point", false);
    r.check(s.fixpoint_tol, "/fixed_point/tol", [](double v) { return v > 0.0; }, "must be positive");
    s.max_sweeps = r.integer(*fp, "max_sweeps", "/fixed_point", false).value_or(100);
    if (s.max_sweeps < 1) r.fail("/fixed_point/max_sweeps", "must be at least 1");
    const auto floor = r.number(*fp, "rho_floor", "/fixed_point", false);
    r.check(floor, "/fixed_point/rho_floor", [](double v) { return v >= 0.0; }, "must be nonnegative");
    s.rho_floor = floor.value_or(0.0);
  }

  if (const json* init = r.child(doc, "initial", "", true)) {
    if (!init->is_array()) {
      r.fail("/initial", "expected an array");
    } else {
      for (std::size_t i = 0; i < init->size(); ++i) {
        const std::string p = "/initial/" + std::to_string(i);
        const json& ij = (*init)[i];
        if (!r.object(ij, p, {"edge", "type", "rho", "m", "x_split", "left", "right", "points"}))
          continue;
        const int edge = r.integer(ij, "edge", p, true).value_or(-1);
        InitialCondition ic;
        const json* type = r.child(ij, "type", p, true);
        const std::string t = (type && type->is_string()) ? type->get<std::string>() : "";
        auto forbid = [&](std::initializer_list<const char*> keys) {
          for (const char* k : keys)
            if (ij.contains(k)) r.fail(p + "/" + k, "not allowed for type '" + t + "'");
        };
        if (t == "constant") {
          forbid({"x_split", "left", "right", "points"});
          ic.kind = InitialCondition::Kind::Constant;
          const auto rho = r.number(ij, "rho", p, true);
          r.check(rho, p + "/rho", [](double v) { return v > 0.0; }, "density must be positive");
          ic.value = {rho.value_or(1.0), r.number(ij, "m", p, false).value_or(0.0)};
        } else if (t == "step") {
          forbid({"rho", "m", "points"});
          ic.kind = InitialCondition::Kind::Step;
          ic.x_split = r.number(ij, "x_split", p, false).value_or(0.0);
          if (const json* l = r.child(ij, "left", p, true)) ic.left = read_flow(r, *l, p + "/left");
          if (const json* rr = r.child(ij, "right", p, true))
            ic.right = read_flow(r, *rr, p + "/right");
        } else if (t == "table") {
          forbid({"rho", "m", "x_split", "left", "right"});
          ic.kind = InitialCondition::Kind::Table;
          const json* pts = r.child(ij, "points", p, true);
          if (pts && (!pts->is_array() || pts->empty())) {
            r.fail(p + "/points", "expected a nonempty array of [x, rho, m]");
          } else if (pts) {
            for (std::size_t k = 0; k < pts->size(); ++k) {
              const json& row = (*pts)[k];
              const std::string pk = p + "/points/" + std::to_string(k);
              if (!row.is_array() || row.size() != 3 ||
                  !std::all_of(row.begin(), row.end(), [](const json& v) { return v.is_number(); })) {
                r.fail(pk, "expected [x, rho, m]");
                continue;
              }
              const double x = row[0].get<double>();
              if (!ic.table_x.empty() && !(x > ic.table_x.back()))
                r.fail(pk, "x must be strictly increasing");
              if (!(row[1].get<double>() > 0.0)) r.fail(pk, "density must be positive");
              ic.table_x.push_back(x);
              ic.table_values.push_back({row[1].get<double>(), row[2].get<double>()});
            }
          }
        } else {
          r.fail(p + "/type", "expected 'constant', 'step' or 'table'");
        }
        if (edge < 0 || edge >= static_cast<int>(s.edges.size()))
          r.fail(p + "/edge", "unknown edge");
        else if (!s.initial.emplace(edge, ic).second)
          r.fail(p + "/edge", "duplicate initial condition for edge");
      }
      for (const Edge& e : s.edges)
        if (!s.initial.count(e.id))
          r.fail("/initial", "no initial condition for edge " + std::to_string(e.id));
    }
  }

  if (const json* bnd = r.child(doc, "boundary", "", false)) {
    if (!bnd->is_array()) {
      r.fail("/boundary", "expected an array");
    } else {
      for (std::size_t i = 0; i < bnd->size(); ++i) {
        const std::string p = "/boundary/" + std::to_string(i);
        const json& bj = (*bnd)[i];
        if (!r.object(bj, p, {"vertex", "type", "value", "points"})) continue;
        const int v = r.integer(bj, "vertex", p, true).value_or(-1);
        const json* type = r.child(bj, "type", p, true);
        const std::string t = (type && type->is_string()) ? type->get<std::string>() : "";
        std::optional<BoundaryCondition> bc;
        if (t == "closed") {
          if (bj.contains("value") || bj.contains("points")) r.fail(p, "closed takes no value");
          bc = BoundaryCondition::closed();
        } else if (t == "constant") {
          if (bj.contains("points")) r.fail(p + "/points", "not allowed for type 'constant'");
          if (auto val = r.number(bj, "value", p, true)) bc = BoundaryCondition::constant(*val);
        } else if (t == "table") {
          if (bj.contains("value")) r.fail(p + "/value", "not allowed for type 'table'");
          const json* pts = r.child(bj, "points", p, true);
          std::vector<std::pair<double, double>> points;
          bool ok = pts && pts->is_array() && !pts->empty();
          if (ok)
            for (const json& row : *pts) {
              if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number()) {
                ok = false;
                break;
              }
              points.emplace_back(row[0].get<double>(), row[1].get<double>());
            }
          if (!ok) {
            if (pts) r.fail(p + "/points", "expected a nonempty array of [t, value]");
          } else {
            try {
              bc = BoundaryCondition::table(std::move(points));
            } catch (const InvalidInput& ex) {
              r.fail(p + "/points", ex.what());
            }
          }
        } else {
          r.fail(p + "/type", "expected 'closed', 'constant' or 'table'");
        }
        if (v < 0 || v >= s.num_vertices) {
          r.fail(p + "/vertex", "unknown vertex");
        } else if (bc) {
          if (!s.boundary.emplace(v, *bc).second) r.fail(p + "/vertex", "duplicate boundary entry");
        }
      }
    }
  }

  if (const json* snaps = r.child(doc, "snapshots", "", false)) {
    if (!snaps->is_array()) {
      r.fail("/snapshots", "expected an array of times");
    } else {
      for (std::size_t i = 0; i < snaps->size(); ++i) {
        const json& t = (*snaps)[i];
        const std::string p = "/snapshots/" + std::to_string(i);
        if (!t.is_number()) {
          r.fail(p, "expected a number");
          continue;
        }
        const double tv = t.get<double>();
        if (!(tv >= 0.0 && tv <= s.t_end)) r.fail(p, "snapshot time outside [0, t_end]");
        s.snapshots.push_back(tv);
      }
    }
  }

  if (const json* out = r.child(doc, "output", "", false); out && r.object(*out, "/output", {"dir"})) {
    if (const json* dir = r.child(*out, "dir", "/output", false)) {
      if (dir->is_string()) s.out_dir = dir->get<std::string>();
      else r.fail("/output/dir", "expected a string");
    }
  }

  if (const json* oracle = r.child(doc, "oracle", "", false)) {
    if (oracle->is_string()) s.oracle = parse_oracle(r, oracle->get<std::string>(), "/oracle");
    else r.fail("/oracle", "expected a string");
  }

  // Cross checks that need the whole document.
  if (r.issues.empty()) {
    try {
      const NetworkGraph graph(s.num_vertices, s.edges);
      for (const auto& [v, bc] : s.boundary)
        if (graph.degree(v) >= 2 && bc.kind() != BoundaryCondition::Kind::Closed)
          r.fail("/boundary", "flux prescribed on interior vertex " + std::to_string(v));
      if (s.oracle == OracleKind::DamBreak) {
        const auto& ic = s.initial.at(0);
        if (graph.num_edges() != 1 || ic.kind != InitialCondition::Kind::Step ||
            !(ic.left.rho > ic.right.rho) || ic.left.m != 0.0 || ic.right.m != 0.0)
          r.fail("/oracle", "dam_break needs one edge with a left-high step at rest");
        for (const Edge& e : s.edges)
          if (e.visc_a != 0.0 || e.fric_b != 0.0 || e.eos_c != 0.5 || s.gamma != 2.0)
            r.fail("/oracle", "dam_break needs a = b = 0, c = 1/2, gamma = 2");
      }
      if (s.oracle == OracleKind::SteadyPipe && graph.num_edges() != 1)
        r.fail("/oracle", "steady_pipe needs a single edge");
      if (s.oracle == OracleKind::JunctionSteady)
        for (const auto& [v, bc] : s.boundary)
          if (bc.kind() != BoundaryCondition::Kind::Closed)
            r.fail("/oracle", "junction_steady needs a closed network");
    } catch (const InvalidInput& ex) {
      r.fail("/network", ex.what());
    }
  }

  if (!r.issues.empty()) throw SchemaError(r.issues);
  return s;
}

std::string serialize_scenario(const Scenario& s) {
  json doc;
  doc["name"] = s.name;
  json edges = json::array();
  for (const Edge& e : s.edges)
    edges.push_back({{"id", e.id}, {"from", e.from}, {"to", e.to}, {"length", e.length},
                     {"a", e.visc_a}, {"b", e.fric_b}, {"c", e.eos_c}, {"x_start", e.x_start}});
  doc["network"] = {{"vertices", s.num_vertices}, {"edges", edges}};
  doc["eos"] = {{"gamma", s.gamma}};
  doc["mesh"] = {{"h", s.mesh_h}};
  doc["time"] = {{"tau", s.tau}, {"t_end", s.t_end}};
  if (s.steady_tol) doc["time"]["steady_tol"] = *s.steady_tol;
  doc["fixed_point"] = {{"sweeps", s.sweeps}, {"max_sweeps", s.max_sweeps},
                        {"rho_floor", s.rho_floor}};
  if (s.fixpoint_tol) doc["fixed_point"]["tol"] = *s.fixpoint_tol;

  json init = json::array();
  for (const auto& [edge, ic] : s.initial) {
    json j{{"edge", edge}};
    switch (ic.kind) {
      case InitialCondition::Kind::Constant:
        j["type"] = "constant";
        j["rho"] = ic.value.rho;
        j["m"] = ic.value.m;
        break;
      case InitialCondition::Kind::Step:
        j["type"] = "step";
        j["x_split"] = ic.x_split;
        j["left"] = write_flow(ic.left);
        j["right"] = write_flow(ic.right);
        break;
      case InitialCondition::Kind::Table: {
        j["type"] = "table";
        json pts = json::array();
        for (std::size_t k = 0; k < ic.table_x.size(); ++k)
          pts.push_back({ic.table_x[k], ic.table_values[k].rho, ic.table_values[k].m});
        j["points"] = pts;
        break;
      }
    }
    init.push_back(j);
  }
  doc["initial"] = init;

  json bnd = json::array();
  for (const auto& [v, bc] : s.boundary) {
    json j{{"vertex", v}};
    switch (bc.kind()) {
      case BoundaryCondition::Kind::Closed:
        j["type"] = "closed";
        break;
      case BoundaryCondition::Kind::Constant:
        j["type"] = "constant";
        j["value"] = bc.constant_value();
        break;
      case BoundaryCondition::Kind::Table: {
        j["type"] = "table";
        json pts = json::array();
        for (const auto& [t, val] : bc.points()) pts.push_back({t, val});
        j["points"] = pts;
        break;
      }
    }
    bnd.push_back(j);
  }
  doc["boundary"] = bnd;
  doc["snapshots"] = s.snapshots;
  doc["output"] = {{"dir", s.out_dir}};
  doc["oracle"] = to_string(s.oracle);
  return doc.dump(2);
}

std::vector<std::string> preset_names() { return {"shock_tube", "friction_pipe", "junction"}; }

Scenario preset(const std::string& name) {
  Scenario s;
  s.name = name;
  s.gamma = 2.0;
  s.mesh_h = 0.01;
  s.tau = 0.005;
  s.sweeps = 2;
  if (name == "shock_tube") {
    s.num_vertices = 2;
    s.edges = {Edge{0, 0, 1, 10.0, 0.0, 0.0, 0.5, -5.0}};
    InitialCondition ic;
    ic.kind = InitialCondition::Kind::Step;
    ic.x_split = 0.0;
    ic.left = {3.0, 0.0};
    ic.right = {1.0, 0.0};
    s.initial[0] = ic;
    s.boundary = {{0, BoundaryCondition::closed()}, {1, BoundaryCondition::closed()}};
    s.t_end = 2.0;
    s.snapshots = {0.0, 0.5, 1.0, 1.5, 2.0};
    s.out_dir = "out/shock_tube";
    s.oracle = OracleKind::DamBreak;
  } else if (name == "friction_pipe") {
    s.num_vertices = 2;
    s.edges = {Edge{0, 0, 1, 10.0, 0.0, 100.0, 0.5, -5.0}};
    InitialCondition ic;
    ic.value = {11.0, 0.0};
    s.initial[0] = ic;
    s.boundary = {{0, BoundaryCondition::constant(1.0)}, {1, BoundaryCondition::constant(1.0)}};
    s.t_end = 400.0;
    s.steady_tol = 1e-8;
    s.snapshots = {0.0, 0.1, 0.5, 1.0, 5.0, 20.0, 100.0, 400.0};
    s.out_dir = "out/friction_pipe";
    s.oracle = OracleKind::SteadyPipe;
  } else if (name == "junction") {
    s.num_vertices = 4;
    s.edges = {Edge{0, 0, 1, 1.0, 0.0, 100.0, 0.5, 0.0}, Edge{1, 1, 2, 1.0, 0.0, 100.0, 0.5, 1.0},
               Edge{2, 1, 3, 1.0, 0.0, 100.0, 0.5, 1.0}};
    const double rho0[3] = {5.0, 3.0, 1.0};
    for (int e = 0; e < 3; ++e) {
      InitialCondition ic;
      ic.value = {rho0[e], 0.0};
      s.initial[e] = ic;
    }
    for (int v : {0, 2, 3}) s.boundary.emplace(v, BoundaryCondition::closed());
    s.t_end = 1000.0;
    s.steady_tol = 1e-10;
    s.snapshots = {0.0, 0.1, 0.5, 1.0, 5.0, 20.0, 100.0, 1000.0};
    s.out_dir = "out/junction";
    s.oracle = OracleKind::JunctionSteady;
  } else {
    throw std::out_of_range("unknown preset '" + name + "'");
  }
  return s;
}

Simulation make_simulation(const Scenario& s) {
  NetworkGraph graph(s.num_vertices, s.edges);
  GasLaw law(s.gamma, graph);
  Mesh mesh = build_mesh(graph, s.mesh_h);
  DofMap dofs = build_dofmap(graph, mesh, s.boundary);

  auto display = [&graph](EdgeId e, double x) { return graph.edge(e).x_start + x; };
  const EdgeFunction rho0 = [&](EdgeId e, double x) { return s.initial.at(e).at(display(e, x)).rho; };
  const EdgeFunction m0 = [&](EdgeId e, double x) { return s.initial.at(e).at(display(e, x)).m; };
  State initial = project_initial(dofs, rho0, m0, 0.0);

  RunConfig config;
  config.step.tau = s.tau;
  config.step.fixpoint_iters = s.sweeps;
  config.step.fixpoint_tol = s.fixpoint_tol;
  config.step.fixpoint_max_iters = s.max_sweeps;
  config.step.rho_floor = s.rho_floor;
  config.t_end = s.t_end;
  config.snapshot_times = s.snapshots;
  config.steady_tol = s.steady_tol;
  config.step.validate();

  return Simulation{std::move(graph), std::move(law), std::move(dofs), std::move(initial),
                    std::move(config)};
}

}  // namespace gasnet
