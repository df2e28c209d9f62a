#include "mf/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "mf/error.hpp"

namespace mf {
namespace {

template <class T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad field '") + key + "': " + e.what());
  }
}

Eigen::VectorXd vector_from(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Index>(v.size()));
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json types_json(const std::vector<AxisAssignment>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(v.type_string());
  return out;
}

Json rationals_json(const RationalVector& v) {
  Json out = Json::array();
  for (const auto& q : v) out.push_back(to_string(q));
  return out;
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Json grid_to_json(const GridSpec& grid) {
  Json out = Json::array();
  for (const auto& a : grid.axes()) out.push_back({{"q", a.q}, {"p", a.p}});
  return out;
}

GridSpec grid_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("'grids' must be an array");
  std::vector<AxisGrid> axes;
  for (const auto& g : j) axes.push_back({field<std::vector<double>>(g, "q"), field<std::vector<double>>(g, "p")});
  try {
    return GridSpec(std::move(axes));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

Json chain_to_json(const Chain& chain) {
  Json members = Json::array();
  for (const auto& m : chain.members())
    members.push_back({{"type", m.type.qp_string()}, {"values", to_std(m.values.values())}});
  return {{"schema_version", kSchemaVersion},
          {"N", chain.dimension()},
          {"grids", grid_to_json(chain.grid())},
          {"members", members}};
}

Chain chain_from_json(const Json& j) {
  const int n = field<int>(j, "N");
  auto grid = grid_from_json(j.contains("grids") ? j.at("grids") : Json());
  if (grid.dimension() != n) throw ParseError("'grids' has " + std::to_string(grid.dimension()) + " axes, N is " + std::to_string(n));
  if (!j.contains("members") || !j.at("members").is_array()) throw ParseError("missing 'members' array");
  std::vector<MarginalTensor> members;
  for (const auto& m : j.at("members")) {
    const auto type = parse_qp(field<std::string>(m, "type"));
    if (type.dimension() != n) throw ParseError("member type has wrong length");
    try {
      members.push_back(make_marginal(grid, type, vector_from(field<std::vector<double>>(m, "values"))));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
  }
  try {
    return Chain(std::move(grid), std::move(members));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

Json phase_to_json(const PhaseTensor& rho, const GridSpec& grid) {
  return {{"schema_version", kSchemaVersion},
          {"N", grid.dimension()},
          {"grids", grid_to_json(grid)},
          {"values", to_std(rho.values())}};
}

PhaseTensor phase_from_json(const Json& j, const GridSpec& expected) {
  auto grid = grid_from_json(j.contains("grids") ? j.at("grids") : Json());
  if (!(grid == expected)) throw ParseError("phase tensor grid differs from the chain grid");
  try {
    return make_phase_tensor(grid, vector_from(field<std::vector<double>>(j, "values")));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

Json wavefunction_to_json(const WaveFunction& psi) {
  const auto& v = psi.amplitudes().values();
  std::vector<double> re, im;
  for (Index i = 0; i < v.size(); ++i) {
    re.push_back(v[i].real());
    im.push_back(v[i].imag());
  }
  return {{"schema_version", kSchemaVersion},
          {"N", psi.dimension()},
          {"sizes", psi.sizes()},
          {"re", re},
          {"im", im}};
}

WaveFunction wavefunction_from_json(const Json& j) {
  const int n = field<int>(j, "N");
  const auto sizes = field<std::vector<Index>>(j, "sizes");
  const auto re = field<std::vector<double>>(j, "re");
  const auto im = field<std::vector<double>>(j, "im");
  if (static_cast<int>(sizes.size()) != n) throw ParseError("'sizes' must have N entries");
  if (re.size() != im.size()) throw ParseError("'re' and 'im' differ in length");
  Eigen::VectorXcd amp(static_cast<Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i) amp[static_cast<Index>(i)] = Complex(re[i], im[i]);
  try {
    return WaveFunction(quantum_grid(sizes), std::move(amp));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

Json ensemble_to_json(const Ensemble& ens) {
  Json weights = Json::array(), states = Json::array();
  for (const auto& [w, psi] : ens.members) {
    weights.push_back(w);
    states.push_back(wavefunction_to_json(psi));
  }
  return {{"schema_version", kSchemaVersion}, {"weights", weights}, {"states", states}};
}

Ensemble ensemble_from_json(const Json& j) {
  const auto weights = field<std::vector<double>>(j, "weights");
  if (!j.contains("states") || !j.at("states").is_array() || j.at("states").size() != weights.size())
    throw ParseError("'states' must list one wavefunction per weight");
  Ensemble ens;
  for (std::size_t i = 0; i < weights.size(); ++i)
    ens.members.emplace_back(weights[i], wavefunction_from_json(j.at("states")[i]));
  try {
    validate_ensemble(ens);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return ens;
}

bool is_ensemble_json(const Json& j) { return j.is_object() && j.contains("weights"); }

Json classification_to_json(const ChainGraph& graph, const Classification& c) {
  Json out = {{"schema_version", kSchemaVersion},
              {"N", graph.dimension()},
              {"types", types_json(graph.vertices())},
              {"verdict", std::string(verdict_name(c.verdict))},
              {"proper", is_proper(graph)},
              {"connected", is_connected(graph)}};
  if (c.quartet) {
    out["quartet"] = {{"axes", {c.quartet->first_axis + 1, c.quartet->second_axis + 1}},
                      {"types", types_json({c.quartet->vertices.begin(), c.quartet->vertices.end()})}};
  }
  if (c.diagram) {
    Json segments = Json::array();
    for (const auto& s : c.diagram->segments) {
      std::vector<int> axes;
      for (int a : s.axes) axes.push_back(a + 1);
      segments.push_back({{"from", s.from.type_string()},
                          {"to", s.to.type_string()},
                          {"axes", axes},
                          {"insertions", types_json(s.insertions)}});
    }
    out["completed"] = types_json(c.diagram->completed.vertices());
    out["insertions"] = types_json(c.diagram->insertions());
    out["segments"] = segments;
    out["non_simple_insertions"] = types_json(c.non_simple_insertions);
  }
  return out;
}

Json compatibility_to_json(const CompatibilityReport& r, double tol) {
  Json pairs = Json::array();
  for (const auto& p : r.pairs)
    pairs.push_back({{"a", p.a.type_string()}, {"b", p.b.type_string()}, {"deviation", p.deviation}});
  return {{"schema_version", kSchemaVersion},
          {"compatible", r.compatible},
          {"tolerance", tol},
          {"max_deviation", r.max_deviation},
          {"pairs", pairs}};
}

Json feasibility_to_json(const FeasibilityResult& r) {
  Json out = {{"schema_version", kSchemaVersion},
              {"status", r.feasible() ? "feasible" : "infeasible"},
              {"denominator", r.denominator.get_str()},
              {"repair", r.repair},
              {"dependent_rows", r.dependent_rows},
              {"pivots", r.pivots}};
  if (r.feasible())
    out["witness"] = rationals_json(r.witness);
  else
    out["certificate"] = rationals_json(r.certificate);
  return out;
}

Json lemma3_to_json(const Lemma3Certificate& c) {
  auto affine = [](const AffineCoefficient& a) {
    return Json{{"constant", to_string(a.constant)}, {"lambda", to_string(a.slope)}};
  };
  return {{"schema_version", kSchemaVersion},
          {"k", c.k},
          {"first", affine(c.first)},
          {"second", affine(c.second)},
          {"sum", to_string(c.sum)},
          {"sum_value", c.sum.get_d()},
          {"system_rank", c.system_rank},
          {"family_dimension", c.family_dimension},
          {"family_verified", c.family_verified}};
}

Json family_to_json(const SolutionFamily& s) {
  return {{"schema_version", kSchemaVersion},
          {"m_plus", s.m_plus},
          {"m_minus", s.m_minus},
          {"lambda_min", finite_or_null(s.lambda_min)},
          {"lambda_max", finite_or_null(s.lambda_max)},
          {"h_vanishes", s.h_vanishes}};
}

}  // namespace mf
