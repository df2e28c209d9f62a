#include "mf/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mf/error.hpp"

namespace mf {

std::vector<int> LinkTree::legs(const AxisAssignment& v) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < links.size(); ++i)
    if (links[i].a == v || links[i].b == v) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> LinkTree::passive_axes() const {
  std::vector<bool> used(static_cast<std::size_t>(dimension), false);
  for (const auto& l : links)
    for (int y : l.axes) used[static_cast<std::size_t>(y)] = true;
  std::vector<int> out;
  for (int i = 0; i < dimension; ++i)
    if (!used[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

void validate_tree(const LinkTree& tree) {
  const auto& vs = tree.vertices;
  if (vs.empty()) throw std::invalid_argument("tree has no vertices");
  if (!std::is_sorted(vs.begin(), vs.end()) ||
      std::adjacent_find(vs.begin(), vs.end()) != vs.end())
    throw std::invalid_argument("tree vertices must be sorted and distinct");
  if (tree.links.size() + 1 != vs.size()) throw std::invalid_argument("tree link count is not n-1");
  std::vector<std::size_t> parent(vs.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<bool> used(static_cast<std::size_t>(tree.dimension), false);
  for (const auto& l : tree.links) {
    auto ia = std::lower_bound(vs.begin(), vs.end(), l.a);
    auto ib = std::lower_bound(vs.begin(), vs.end(), l.b);
    if (ia == vs.end() || *ia != l.a || ib == vs.end() || *ib != l.b)
      throw std::invalid_argument("tree link endpoint is not a tree vertex");
    if (l.axes.empty() || l.axes != differing_axes(l.a, l.b))
      throw std::invalid_argument("tree link axes do not match its endpoints");
    for (int y : l.axes) {
      if (used[static_cast<std::size_t>(y)]) throw std::invalid_argument("tree is not proper");
      used[static_cast<std::size_t>(y)] = true;
    }
    const auto ra = find(static_cast<std::size_t>(ia - vs.begin()));
    const auto rb = find(static_cast<std::size_t>(ib - vs.begin()));
    if (ra == rb) throw std::invalid_argument("tree links form a cycle");
    parent[ra] = rb;
  }
}

LinkTree tree_from_graph(const ChainGraph& graph) {
  if (!is_proper(graph) || !is_connected(graph))
    throw std::invalid_argument("reconstruction needs a proper connected graph");
  LinkTree t{graph.dimension(), graph.vertices(), {}};
  for (const auto& l : graph.links()) t.links.push_back({l.a, l.b, {l.axis}});
  validate_tree(t);
  return t;
}

LinkTree tree_from_diagram(const ConnectifiedDiagram& diagram) {
  const auto& gc = diagram.completed;
  const auto& g = diagram.original;
  if (!is_proper(gc) || !is_connected(gc))
    throw std::invalid_argument("diagram completion is not a proper tree");
  LinkTree t{g.dimension(), g.vertices(), {}};
  for (const auto& u : g.vertices())
    for (const auto& first : gc.neighbours(u)) {
      AxisAssignment prev = u, cur = first;
      while (!g.contains(cur)) {
        auto nb = gc.neighbours(cur);
        if (nb.size() != 2)
          throw std::invalid_argument("insertion " + cur.type_string() +
                                      " is not simple; the diagram is not G-simple");
        AxisAssignment next = nb[0] == prev ? nb[1] : nb[0];
        prev = cur;
        cur = next;
      }
      if (u < cur) t.links.push_back({u, cur, differing_axes(u, cur)});
    }
  validate_tree(t);
  return t;
}

namespace {

std::vector<Var> passive_vars(const GridSpec& grid, const LinkTree& tree) {
  std::vector<Var> vars;
  for (int t : tree.passive_axes()) vars.push_back(grid.conjugate(grid.var_of(tree.vertices.front(), t)));
  return vars;
}

void require_same_shape(const Tensor<double>& a, const Tensor<double>& b) {
  if (a.vars() != b.vars() || a.dims() != b.dims())
    throw std::invalid_argument("tensor shapes differ");
}

Tensor<double> hadamard(const Tensor<double>& a, const Tensor<double>& b) {
  require_same_shape(a, b);
  Tensor<double> out = a;
  out.values().array() *= b.values().array();
  return out;
}

// num / den where den is on support (den > eps), 0 elsewhere.
Tensor<double> divide_on_support(Tensor<double> num, const Tensor<double>& den, double eps) {
  require_same_shape(num, den);
  for (Index i = 0; i < num.size(); ++i) num[i] = den[i] > eps ? num[i] / den[i] : 0.0;
  return num;
}

}  // namespace

PassiveFactor uniform_passive_factor(const GridSpec& grid, const LinkTree& tree) {
  auto vars = passive_vars(grid, tree);
  auto dims = grid.dims(vars);
  Tensor<double> z(vars, dims);
  z.values().setConstant(1.0 / static_cast<double>(z.size()));
  return {tree.passive_axes(), std::move(z)};
}

PassiveFactor make_passive_factor(const GridSpec& grid, const LinkTree& tree,
                                  Eigen::VectorXd values) {
  auto vars = passive_vars(grid, tree);
  auto dims = grid.dims(vars);
  Tensor<double> z(vars, dims, std::move(values));
  if ((z.values().array() < 0.0).any()) throw std::invalid_argument("zeta has negative entries");
  if (std::abs(z.values().sum() - 1.0) > kNormTolerance)
    throw std::invalid_argument("zeta is not normalized");
  return {tree.passive_axes(), std::move(z)};
}

double support_threshold(const Tensor<double>& sigma_ab) {
  return sigma_ab.size() == 0 ? 0.0 : kSupportRelative * sigma_ab.values().maxCoeff();
}

Tensor<double> build_propagator(const Tensor<double>& sigma_ab, double eps) {
  Tensor<double> out = sigma_ab;
  for (Index i = 0; i < out.size(); ++i) out[i] = sigma_ab[i] > eps ? 1.0 / sigma_ab[i] : 0.0;
  return out;
}

Propagator link_propagator(const Chain& chain, const TreeLink& link, double tol) {
  auto sigma = integrated_distribution(chain.grid(), chain.member(link.a), chain.member(link.b), tol);
  return {link, build_propagator(sigma, support_threshold(sigma))};
}

Tensor<double> tree_product(const Chain& chain, const LinkTree& tree, const PassiveFactor& zeta,
                            const std::vector<Var>& vars, double tol) {
  const auto dims = chain.grid().dims(vars);
  Tensor<double> out(vars, dims);
  out.values().setConstant(1.0);
  auto multiply = [&](const Tensor<double>& factor) {
    out.values().array() *= broadcast(factor, vars, dims).values().array();
  };
  for (const auto& v : tree.vertices) multiply(chain.member(v).values);
  for (const auto& l : tree.links) multiply(link_propagator(chain, l, tol).values);
  multiply(zeta.zeta);
  return out;
}

PhaseTensor build_rho0(const Chain& chain, const LinkTree& tree, const PassiveFactor& zeta,
                       double tol) {
  validate_tree(tree);
  if (tree.dimension != chain.dimension()) throw std::invalid_argument("tree/chain dimension mismatch");
  if (zeta.axes != tree.passive_axes())
    throw std::invalid_argument("zeta does not cover the passive axes of the tree");
  return tree_product(chain, tree, zeta, chain.grid().phase_vars(), tol);
}

PhaseTensor build_rho0(const Chain& chain, const LinkTree& tree, double tol) {
  return build_rho0(chain, tree, uniform_passive_factor(chain.grid(), tree), tol);
}

PeelState initial_peel_state(const GridSpec& grid, const LinkTree& tree) {
  return {tree, grid.phase_vars()};
}

PeelResult peel(const Tensor<double>& rho, const PeelState& state, const GridSpec& grid,
                const AxisAssignment& leaf) {
  const auto legs = state.tree.legs(leaf);
  if (legs.size() != 1)
    throw std::invalid_argument("peel: " + leaf.type_string() + " is not a one-leg vertex");
  const TreeLink link = state.tree.links[static_cast<std::size_t>(legs.front())];
  if (rho.vars() != state.vars) throw std::invalid_argument("peel: tensor does not match state");

  std::vector<Var> drop;
  for (int y : link.axes) drop.push_back(grid.var_of(leaf, y));
  PeelState next = state;
  next.vars.clear();
  for (Var v : state.vars)
    if (std::find(drop.begin(), drop.end(), v) == drop.end()) next.vars.push_back(v);
  next.tree.links.erase(next.tree.links.begin() + legs.front());
  next.tree.vertices.erase(std::find(next.tree.vertices.begin(), next.tree.vertices.end(), leaf));
  return {sum_onto(rho, next.vars), std::move(next)};
}

std::vector<AxisAssignment> canonical_peel_order(const LinkTree& tree) {
  LinkTree t = tree;
  std::vector<AxisAssignment> order;
  while (t.vertices.size() > 1) {
    auto it = std::find_if(t.vertices.begin(), t.vertices.end(),
                           [&](const AxisAssignment& v) { return t.legs(v).size() == 1; });
    if (it == t.vertices.end()) throw std::invalid_argument("tree has no leaf");
    t.links.erase(t.links.begin() + t.legs(*it).front());
    order.push_back(*it);
    t.vertices.erase(it);
  }
  order.push_back(t.vertices.front());
  return order;
}

PhaseTensor apply_P(const Chain& chain, const PhaseTensor& rho0, const AxisAssignment& alpha,
                    const PhaseTensor& f) {
  const auto& sigma = chain.member(alpha).values;
  auto num = sum_onto(hadamard(rho0, f), sigma.vars());
  auto proj = divide_on_support(std::move(num), sigma, support_threshold(sigma));
  return broadcast_like(proj, rho0);
}

PhaseTensor apply_link_pair(const Chain& chain, const PhaseTensor& rho0, const TreeLink& link,
                            const PhaseTensor& f, double tol) {
  auto sigma = integrated_distribution(chain.grid(), chain.member(link.a), chain.member(link.b), tol);
  auto num = sum_onto(hadamard(rho0, f), sigma.vars());
  auto proj = divide_on_support(std::move(num), sigma, support_threshold(sigma));
  return broadcast_like(proj, rho0);
}

PhaseTensor apply_Pi(const Chain& chain, const PhaseTensor& rho0, const LinkTree& tree,
                     const PhaseTensor& f, double tol) {
  require_same_shape(rho0, f);
  PhaseTensor out = f;
  for (const auto& v : tree.vertices) out.values() -= apply_P(chain, rho0, v, f).values();
  for (const auto& l : tree.links) out.values() += apply_link_pair(chain, rho0, l, f, tol).values();
  return out;
}

SolutionFamily solution_family(const Chain& chain, const LinkTree& tree,
                               const PassiveFactor& zeta, const PhaseTensor& f, double tol) {
  SolutionFamily s;
  s.rho0 = build_rho0(chain, tree, zeta, tol);
  if (!f.values().allFinite()) throw std::invalid_argument("f must be bounded");
  s.h = apply_Pi(chain, s.rho0, tree, f, tol);
  bool any_support = false;
  double hi = 0.0, lo = 0.0;
  for (Index i = 0; i < s.h.size(); ++i) {
    if (s.rho0[i] <= 0.0) {
      s.h[i] = 0.0;
      continue;
    }
    hi = any_support ? std::max(hi, s.h[i]) : s.h[i];
    lo = any_support ? std::min(lo, s.h[i]) : s.h[i];
    any_support = true;
  }
  // Rounding residue of an exact kernel element is treated as h = 0.
  const double scale = std::max(1.0, f.values().cwiseAbs().maxCoeff());
  if (s.h.values().cwiseAbs().maxCoeff() <= 1e-12 * scale) {
    s.h.values().setZero();
    s.h_vanishes = true;
    return s;
  }
  s.m_plus = std::max(0.0, hi);
  s.m_minus = std::max(0.0, -lo);
  if (s.m_plus > 0) s.lambda_min = -1.0 / s.m_plus;
  if (s.m_minus > 0) s.lambda_max = 1.0 / s.m_minus;
  return s;
}

PhaseTensor solution_at(const SolutionFamily& family, double lambda) {
  PhaseTensor rho = family.rho0;
  rho.values().array() *= 1.0 + lambda * family.h.values().array();
  return rho;
}

GeneralSolution general_solution(const Chain& chain, const LinkTree& tree,
                                 const PassiveFactor& zeta, const PhaseTensor& f, double lambda,
                                 double tol) {
  GeneralSolution g;
  g.family = solution_family(chain, tree, zeta, f, tol);
  g.lambda = lambda;
  g.lambda_in_range = lambda >= g.family.lambda_min && lambda <= g.family.lambda_max;
  if (g.lambda_in_range) g.rho = solution_at(g.family, lambda);
  return g;
}

Membership solution_membership(const PhaseTensor& candidate, const PhaseTensor& rho0,
                               const Chain& chain, const LinkTree& tree, double threshold,
                               double tol) {
  require_same_shape(candidate, rho0);
  PhaseTensor h = rho0;
  for (Index i = 0; i < h.size(); ++i) {
    if (rho0[i] > 0.0) {
      h[i] = candidate[i] / rho0[i] - 1.0;
    } else {
      if (candidate[i] != 0.0)
        throw std::invalid_argument("candidate has mass outside the support of rho0");
      h[i] = 0.0;
    }
  }
  double residual = 0.0;
  for (const auto& v : tree.vertices)
    residual = std::max(residual, apply_P(chain, rho0, v, h).values().cwiseAbs().maxCoeff());
  const auto pi_h = apply_Pi(chain, rho0, tree, h, tol);
  for (Index i = 0; i < h.size(); ++i)
    if (rho0[i] > 0.0) residual = std::max(residual, std::abs(pi_h[i] - h[i]));
  return {residual <= threshold, residual};
}

}  // namespace mf
