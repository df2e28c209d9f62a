#include "mf/cli.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "mf/error.hpp"
#include "mf/io.hpp"

namespace mf::cli {
namespace fs = std::filesystem;

namespace {

struct Options {
  double tol = kCompatTolerance;
  std::optional<std::uint64_t> seed;
  std::string zeta_file;
  std::string f_file;
  std::string lambdas;
  bool extend = false;
  bool general = false;
  std::string state_file;
  std::string denominator = "4294967296";
  Index cell_cap = 1'000'000;
  std::string out_dir;
  std::string input;
  std::vector<std::string> types;
  int dimension = 0;
  int k = 0;
};

// Axis tokens in a type-string: single digits or bracketed numbers.
int count_axes(const std::string& type) {
  int n = 0;
  for (std::size_t i = 0; i < type.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(type[i]))) {
      ++n;
    } else if (type[i] == '[') {
      ++n;
      while (i < type.size() && type[i] != ']') ++i;
    }
  }
  return n;
}

ChainGraph graph_from_types(const std::vector<std::string>& types, int dimension) {
  if (types.empty()) throw ParseError("no types given");
  const int n = dimension > 0 ? dimension : count_axes(types.front());
  std::vector<AxisAssignment> vs;
  for (const auto& t : types) vs.push_back(parse_type(t, n));
  std::sort(vs.begin(), vs.end());
  if (std::adjacent_find(vs.begin(), vs.end()) != vs.end()) throw ParseError("duplicate type");
  return ChainGraph(n, std::move(vs));
}

std::vector<double> parse_lambdas(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("bad lambda value '" + item + "'");
    }
  }
  return out;
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

double max_marginal_residual(const PhaseTensor& rho, const Chain& chain, Json* per_member) {
  double worst = 0.0;
  for (const auto& m : chain.members()) {
    const auto marg = marginalize(rho, chain.grid(), m.type);
    const double r = (marg.values.values() - m.values.values()).cwiseAbs().maxCoeff();
    if (per_member) (*per_member)[m.type.type_string()] = r;
    worst = std::max(worst, r);
  }
  return worst;
}

int cmd_classify(const Options& o, std::ostream& out) {
  const auto graph = graph_from_types(o.types, o.dimension);
  const auto c = classify(graph);
  emit(out, classification_to_json(graph, c));
  switch (c.verdict) {
    case Verdict::FullyAdmissible: return kExitFully;
    case Verdict::QuantumAdmissible: return kExitQuantumOnly;
    case Verdict::NonAdmissible: return kExitNonAdmissible;
  }
  return kExitNonAdmissible;
}

int cmd_compat(const Options& o, std::ostream& out) {
  const auto chain = chain_from_json(read_json_file(o.input));
  const auto r = check_compatibility(chain, o.tol);
  emit(out, compatibility_to_json(r, o.tol));
  return r.compatible ? kExitFully : kExitIncompatible;
}

PhaseTensor random_f(const GridSpec& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PhaseTensor f(grid.phase_vars(), grid.phase_dims());
  for (Index i = 0; i < f.size(); ++i) f[i] = unit_interval(rng());
  return f;
}

int cmd_reconstruct(const Options& o, std::ostream& out, std::ostream& err) {
  const auto input = chain_from_json(read_json_file(o.input));
  const auto compat = check_compatibility(input, o.tol);
  if (!compat.compatible) {
    err << "chain is not compatible (max deviation " << compat.max_deviation << ")\n";
    return kExitIncompatible;
  }
  const auto graph = input.graph();
  const auto c = classify(graph);
  if (c.verdict == Verdict::NonAdmissible) {
    err << "type set is not admissible; no density can reproduce a generic chain of this type\n";
    emit(out, classification_to_json(graph, c));
    return kExitNonAdmissible;
  }

  Chain chain = input;
  LinkTree tree;
  if (c.verdict == Verdict::QuantumAdmissible) {
    if (!o.extend || o.state_file.empty()) {
      err << "type set is only quantum admissible: reconstruction needs the extended chain.\n"
             "Rerun with --extend --state FILE (wavefunction or ensemble that produced the chain).\n";
      return kExitQuantumOnly;
    }
    const auto sj = read_json_file(o.state_file);
    chain = is_ensemble_json(sj) ? extend_chain(ensemble_from_json(sj), *c.diagram)
                                 : extend_chain(wavefunction_from_json(sj), *c.diagram);
    if (!(chain.grid() == input.grid())) {
      err << "state grid differs from the chain grid\n";
      return kExitIncompatible;
    }
    double dev = 0;
    for (const auto& m : input.members())
      dev = std::max(dev, (chain.member(m.type).values.values() - m.values.values()).cwiseAbs().maxCoeff());
    if (dev > o.tol) {
      err << "state does not reproduce the chain (deviation " << dev << ")\n";
      return kExitIncompatible;
    }
    tree = tree_from_graph(chain.graph());
  } else {
    tree = tree_from_diagram(*c.diagram);
  }

  PassiveFactor zeta = o.zeta_file.empty()
                           ? uniform_passive_factor(chain.grid(), tree)
                           : make_passive_factor(chain.grid(), tree,
                                                 [&] {
                                                   const auto zj = read_json_file(o.zeta_file);
                                                   if (!zj.contains("values")) throw ParseError("zeta file needs 'values'");
                                                   auto v = zj.at("values").get<std::vector<double>>();
                                                   return Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Index>(v.size())));
                                                 }());
  const auto rho0 = build_rho0(chain, tree, zeta, o.tol);

  Json residuals = Json::object();
  const double worst = max_marginal_residual(rho0, input, &residuals);
  Json links = Json::array();
  for (const auto& l : tree.links) {
    std::vector<int> axes;
    for (int a : l.axes) axes.push_back(a + 1);
    links.push_back({{"a", l.a.type_string()}, {"b", l.b.type_string()}, {"axes", axes}});
  }
  std::vector<int> passive;
  for (int a : tree.passive_axes()) passive.push_back(a + 1);
  Json summary = {{"schema_version", kSchemaVersion},
                  {"verdict", std::string(verdict_name(c.verdict))},
                  {"extended", c.verdict == Verdict::QuantumAdmissible},
                  {"links", links},
                  {"passive_axes", passive},
                  {"sum", rho0.values().sum()},
                  {"max_marginal_residual", worst},
                  {"marginal_residuals", residuals}};
  if (!o.out_dir.empty()) write_json_file(fs::path(o.out_dir) / "rho0.json", phase_to_json(rho0, chain.grid()));

  if (o.general) {
    PhaseTensor f;
    if (!o.f_file.empty()) {
      f = phase_from_json(read_json_file(o.f_file), chain.grid());
    } else if (o.seed) {
      f = random_f(chain.grid(), *o.seed);
    } else {
      throw ParseError("--general needs --f FILE or an explicit --seed");
    }
    const auto family = solution_family(chain, tree, zeta, f, o.tol);
    Json general = family_to_json(family);
    Json solutions = Json::array();
    const auto lambdas = parse_lambdas(o.lambdas);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const double l = lambdas[i];
      const bool ok = l >= family.lambda_min && l <= family.lambda_max;
      Json s = {{"lambda", l}, {"in_range", ok}};
      if (ok) {
        const auto rho = solution_at(family, l);
        s["min"] = rho.values().minCoeff();
        s["max_marginal_residual"] = max_marginal_residual(rho, input, nullptr);
        if (!o.out_dir.empty()) {
          const auto name = "rho_" + std::to_string(i) + ".json";
          write_json_file(fs::path(o.out_dir) / name, phase_to_json(rho, chain.grid()));
          s["file"] = name;
        }
      }
      solutions.push_back(s);
    }
    general["solutions"] = solutions;
    if (!o.out_dir.empty()) write_json_file(fs::path(o.out_dir) / "h.json", phase_to_json(family.h, chain.grid()));
    summary["general"] = general;
  }
  emit(out, summary);
  return kExitFully;
}

int cmd_oracle(const Options& o, std::ostream& out) {
  const auto chain = chain_from_json(read_json_file(o.input));
  LpOptions lp;
  try {
    lp.denominator = mpz_class(o.denominator, 10);
  } catch (const std::exception&) {
    throw ParseError("bad --denominator");
  }
  if (lp.denominator <= 0) throw ParseError("--denominator must be positive");
  lp.cell_cap = o.cell_cap;
  const auto r = lp_feasible(chain, lp);
  auto j = feasibility_to_json(r);
  if (!o.out_dir.empty()) {
    if (r.feasible()) {
      write_json_file(fs::path(o.out_dir) / "witness.json", phase_to_json(witness_tensor(chain, r), chain.grid()));
      j["witness_file"] = "witness.json";
    }
    write_json_file(fs::path(o.out_dir) / "feasibility.json", j);
  }
  emit(out, j);
  return r.feasible() ? kExitFully : kExitNonAdmissible;
}

int cmd_quantum(const Options& o, std::ostream& out, std::ostream& err) {
  const auto sj = read_json_file(o.input);
  const bool ensemble = is_ensemble_json(sj);
  const Ensemble ens = ensemble ? ensemble_from_json(sj) : Ensemble{};
  const WaveFunction psi = ensemble ? WaveFunction{} : wavefunction_from_json(sj);
  const int n = ensemble ? ens.members.front().second.dimension() : psi.dimension();
  if (o.dimension > 0 && o.dimension != n) throw ParseError("-N does not match the state dimension");
  const auto graph = graph_from_types(o.types, n);
  if (graph.dimension() != n) throw ParseError("types do not match the state dimension");
  const auto chain = ensemble ? mixed_state_chain(ens, graph) : quantum_chain(psi, graph);
  Json result = chain_to_json(chain);
  if (!o.out_dir.empty()) write_json_file(fs::path(o.out_dir) / "chain.json", result);
  if (o.extend) {
    const auto c = classify(graph);
    if (!c.diagram) {
      err << "type set is not admissible; there is no extended graph\n";
      return kExitNonAdmissible;
    }
    const auto ext = ensemble ? extend_chain(ens, *c.diagram) : extend_chain(psi, *c.diagram);
    result = chain_to_json(ext);
    if (!o.out_dir.empty()) write_json_file(fs::path(o.out_dir) / "extended_chain.json", result);
  }
  emit(out, result);
  return kExitFully;
}

int cmd_counterexample(const Options& o, std::ostream& out) {
  if (o.k < 3) throw ParseError("-k must be at least 3");
  const auto chain = lemma3_chain(o.k);
  const auto cert = lemma3_certificate(o.k);
  Json j = {{"schema_version", kSchemaVersion}, {"chain", chain_to_json(chain)}, {"certificate", lemma3_to_json(cert)}};
  if (!o.out_dir.empty()) {
    write_json_file(fs::path(o.out_dir) / "chain.json", chain_to_json(chain));
    write_json_file(fs::path(o.out_dir) / "certificate.json", lemma3_to_json(cert));
  }
  emit(out, j);
  return kExitFully;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase-space reconstruction of quantum marginal chains", "mf"};
  app.require_subcommand(1);
  Options o;

  auto add_tol = [&](CLI::App* c) {
    c->add_option("--tol", o.tol, "Compatibility tolerance")->check(CLI::PositiveNumber);
  };
  auto* classify_cmd = app.add_subcommand("classify", "Classify a type set");
  classify_cmd->add_option("-N,--dimension", o.dimension, "Number of axes (default: from the first type)");
  classify_cmd->add_option("types", o.types, "Type-strings such as 12'3")->required();

  auto* compat_cmd = app.add_subcommand("compat-check", "Check mutual compatibility of a chain");
  compat_cmd->add_option("chain", o.input)->required()->check(CLI::ExistingFile);
  add_tol(compat_cmd);

  auto* rec_cmd = app.add_subcommand("reconstruct", "Build rho0 and optionally the general solution");
  rec_cmd->add_option("chain", o.input)->required()->check(CLI::ExistingFile);
  add_tol(rec_cmd);
  rec_cmd->add_option("--zeta", o.zeta_file, "Passive factor file")->check(CLI::ExistingFile);
  rec_cmd->add_flag("--general", o.general, "Also build the general solution family");
  rec_cmd->add_option("--f", o.f_file, "Bounded phase tensor f")->check(CLI::ExistingFile);
  rec_cmd->add_option("--lambda", o.lambdas, "Comma-separated lambda values");
  rec_cmd->add_option("--seed", o.seed, "Seed for a random f");
  rec_cmd->add_flag("--extend", o.extend, "Use the extended chain of a quantum source");
  rec_cmd->add_option("--state", o.state_file, "Wavefunction or ensemble file")->check(CLI::ExistingFile);
  rec_cmd->add_option("--out", o.out_dir, "Output directory");

  auto* oracle_cmd = app.add_subcommand("oracle", "Exact feasibility of a chain");
  oracle_cmd->add_option("chain", o.input)->required()->check(CLI::ExistingFile);
  oracle_cmd->add_option("--denominator", o.denominator, "Quantization denominator");
  oracle_cmd->add_option("--cap", o.cell_cap, "Phase-grid cell cap")->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--out", o.out_dir, "Output directory");

  auto* quantum_cmd = app.add_subcommand("quantum", "Quantum chain of a state");
  quantum_cmd->add_option("state", o.input)->required()->check(CLI::ExistingFile);
  quantum_cmd->add_option("types", o.types)->required();
  quantum_cmd->add_option("-N,--dimension", o.dimension);
  quantum_cmd->add_flag("--extend", o.extend, "Emit the chain on the extended graph");
  quantum_cmd->add_option("--out", o.out_dir, "Output directory");

  auto* cex_cmd = app.add_subcommand("counterexample", "Inadmissible compatible k-chain");
  cex_cmd->add_option("-k", o.k, "Number of axes (>= 3)")->required();
  cex_cmd->add_option("--out", o.out_dir, "Output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitParse;
  }

  try {
    if (classify_cmd->parsed()) return cmd_classify(o, out);
    if (compat_cmd->parsed()) return cmd_compat(o, out);
    if (rec_cmd->parsed()) return cmd_reconstruct(o, out, err);
    if (oracle_cmd->parsed()) return cmd_oracle(o, out);
    if (quantum_cmd->parsed()) return cmd_quantum(o, out, err);
    if (cex_cmd->parsed()) return cmd_counterexample(o, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const IncompatibleChain& e) {
    err << "incompatible chain: " << e.what() << '\n';
    return kExitIncompatible;
  } catch (const CellCapExceeded& e) {
    err << "cell cap exceeded: " << e.what() << '\n';
    return kExitCellCap;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitParse;
  }
  return kExitParse;
}

}  // namespace mf::cli
