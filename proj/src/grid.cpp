#include "mf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "mf/error.hpp"

namespace mf {

GridSpec::GridSpec(std::vector<AxisGrid> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw std::invalid_argument("grid needs at least one axis");
  for (const auto& a : axes_)
    if (a.q.empty() || a.p.empty()) throw std::invalid_argument("grid axis with no points");
}

GridSpec GridSpec::uniform(int dimension, Index points) {
  return uniform(dimension, points, points);
}

GridSpec GridSpec::uniform(int dimension, Index q_points, Index p_points) {
  std::vector<AxisGrid> axes(static_cast<std::size_t>(dimension));
  for (auto& a : axes) {
    for (Index k = 0; k < q_points; ++k) a.q.push_back(static_cast<double>(k));
    for (Index k = 0; k < p_points; ++k) a.p.push_back(static_cast<double>(k));
  }
  return GridSpec(std::move(axes));
}

Index GridSpec::points(Var v) const {
  if (v < 0 || v >= 2 * dimension()) throw std::out_of_range("variable out of range");
  const auto& a = axes_[static_cast<std::size_t>(axis_of(v))];
  return static_cast<Index>(v < dimension() ? a.q.size() : a.p.size());
}

std::vector<Index> GridSpec::dims(const std::vector<Var>& vars) const {
  std::vector<Index> d;
  d.reserve(vars.size());
  for (Var v : vars) d.push_back(points(v));
  return d;
}

std::vector<Var> GridSpec::vertex_vars(const AxisAssignment& a) const {
  if (a.dimension() != dimension()) throw std::invalid_argument("assignment/grid dimension mismatch");
  std::vector<Var> vars;
  for (int i = 0; i < dimension(); ++i) vars.push_back(var_of(a, i));
  return vars;
}

std::vector<Var> GridSpec::phase_vars() const {
  std::vector<Var> vars(static_cast<std::size_t>(2 * dimension()));
  std::iota(vars.begin(), vars.end(), 0);
  return vars;
}

MarginalTensor make_marginal(const GridSpec& grid, const AxisAssignment& type,
                             Eigen::VectorXd values) {
  auto vars = grid.vertex_vars(type);
  auto dims = grid.dims(vars);
  return {type, Tensor<double>(std::move(vars), std::move(dims), std::move(values))};
}

PhaseTensor make_phase_tensor(const GridSpec& grid, Eigen::VectorXd values) {
  return PhaseTensor(grid.phase_vars(), grid.phase_dims(), std::move(values));
}

Chain::Chain(GridSpec grid, std::vector<MarginalTensor> members, double norm_tol)
    : grid_(std::move(grid)), members_(std::move(members)) {
  if (members_.empty()) throw std::invalid_argument("chain needs at least one member");
  std::sort(members_.begin(), members_.end(),
            [](const MarginalTensor& a, const MarginalTensor& b) { return a.type < b.type; });
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const auto& m = members_[i];
    if (i > 0 && members_[i - 1].type == m.type)
      throw std::invalid_argument("duplicate chain member type " + m.type.type_string());
    const auto vars = grid_.vertex_vars(m.type);
    if (m.values.vars() != vars || m.values.dims() != grid_.dims(vars))
      throw std::invalid_argument("member " + m.type.type_string() + " is not shaped per its type");
    if ((m.values.values().array() < 0.0).any() || !m.values.values().allFinite())
      throw std::invalid_argument("member " + m.type.type_string() + " has negative mass");
    if (std::abs(m.values.values().sum() - 1.0) > norm_tol)
      throw std::invalid_argument("member " + m.type.type_string() + " is not normalized");
  }
}

std::vector<AxisAssignment> Chain::types() const {
  std::vector<AxisAssignment> out;
  for (const auto& m : members_) out.push_back(m.type);
  return out;
}

bool Chain::contains(const AxisAssignment& type) const {
  return std::any_of(members_.begin(), members_.end(),
                     [&](const MarginalTensor& m) { return m.type == type; });
}

const MarginalTensor& Chain::member(const AxisAssignment& type) const {
  for (const auto& m : members_)
    if (m.type == type) return m;
  throw std::out_of_range("no chain member of type " + type.type_string());
}

Chain Chain::restricted(const std::vector<AxisAssignment>& types) const {
  std::vector<MarginalTensor> out;
  for (const auto& t : types) out.push_back(member(t));
  return Chain(grid_, std::move(out));
}

MarginalTensor marginalize(const PhaseTensor& rho, const GridSpec& grid,
                           const AxisAssignment& type) {
  if (rho.vars() != grid.phase_vars() || rho.dims() != grid.phase_dims())
    throw std::invalid_argument("marginalize: phase tensor does not match grid");
  return {type, sum_onto(rho, grid.vertex_vars(type))};
}

Chain chain_from_phase(const PhaseTensor& rho, const GridSpec& grid, const ChainGraph& graph) {
  std::vector<MarginalTensor> members;
  for (const auto& v : graph.vertices()) members.push_back(marginalize(rho, grid, v));
  return Chain(grid, std::move(members));
}

namespace {

std::pair<Tensor<double>, Tensor<double>> shared_sums(const GridSpec& grid,
                                                      const MarginalTensor& a,
                                                      const MarginalTensor& b) {
  std::vector<Var> common;
  for (int i = 0; i < grid.dimension(); ++i)
    if (a.type.momentum(i) == b.type.momentum(i)) common.push_back(grid.var_of(a.type, i));
  return {sum_onto(a.values, common), sum_onto(b.values, common)};
}

}  // namespace

CompatibilityReport check_compatibility(const Chain& chain, double tol) {
  CompatibilityReport report;
  const auto& ms = chain.members();
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i + 1; j < ms.size(); ++j) {
      auto [sa, sb] = shared_sums(chain.grid(), ms[i], ms[j]);
      const double dev = (sa.values() - sb.values()).cwiseAbs().maxCoeff();
      report.pairs.push_back({ms[i].type, ms[j].type, dev});
      report.max_deviation = std::max(report.max_deviation, dev);
    }
  report.compatible = report.max_deviation <= tol;
  return report;
}

Tensor<double> integrated_distribution(const GridSpec& grid, const MarginalTensor& a,
                                       const MarginalTensor& b, double tol) {
  if (a.type == b.type) throw std::invalid_argument("integrated_distribution: identical types");
  auto [sa, sb] = shared_sums(grid, a, b);
  const double dev = (sa.values() - sb.values()).cwiseAbs().maxCoeff();
  if (dev > tol)
    throw IncompatibleChain("members " + a.type.type_string() + " and " + b.type.type_string() +
                            " disagree by " + std::to_string(dev));
  sa.values() = 0.5 * (sa.values() + sb.values());
  return sa;
}

PhaseTensor random_phase_tensor(const GridSpec& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  PhaseTensor rho(grid.phase_vars(), grid.phase_dims());
  for (Index i = 0; i < rho.size(); ++i) rho[i] = 0.1 + 0.9 * unit_interval(rng());
  rho.values() /= rho.values().sum();

  // Largest-remainder rounding to multiples of 2^-32 with an exact total.
  constexpr double kScale = 4294967296.0;
  const auto n = static_cast<std::size_t>(rho.size());
  std::vector<double> floors(n), rems(n);
  double assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double scaled = rho[static_cast<Index>(i)] * kScale;
    floors[i] = std::floor(scaled);
    rems[i] = scaled - floors[i];
    assigned += floors[i];
  }
  auto missing = static_cast<std::int64_t>(std::llround(kScale - assigned));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return rems[x] > rems[y]; });
  for (std::size_t k = 0; k < n && missing > 0; ++k, --missing) floors[order[k]] += 1;
  for (std::size_t i = 0; i < n; ++i) rho[static_cast<Index>(i)] = floors[i] / kScale;
  return rho;
}

Chain random_chain(const ChainGraph& graph, const GridSpec& grid, std::uint64_t seed) {
  if (graph.dimension() != grid.dimension())
    throw std::invalid_argument("random_chain: graph/grid dimension mismatch");
  return chain_from_phase(random_phase_tensor(grid, seed), grid, graph);
}

}  // namespace mf
