#include "mf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mf/error.hpp"

namespace mf {

MarginalSystem marginal_system(const Chain& chain) {
  const auto& grid = chain.grid();
  MarginalSystem sys;
  const auto vars = grid.phase_vars();
  const auto dims = grid.phase_dims();
  sys.cells = Tensor<double>::cell_count(dims);
  for (const auto& m : chain.members()) {
    sys.types.push_back(m.type);
    sys.offsets.push_back(sys.rows);
    sys.maps.push_back(projection_map(vars, dims, m.values.vars()));
    sys.rows += m.values.size();
  }
  return sys;
}

RationalVector quantized_rhs(const Chain& chain, const mpz_class& denominator) {
  RationalVector b;
  for (const auto& m : chain.members())
    for (Index i = 0; i < m.values.size(); ++i) b.push_back(quantize(m.values[i], denominator));
  return b;
}

RationalVector apply_system(const MarginalSystem& sys, const RationalVector& x) {
  if (static_cast<Index>(x.size()) != sys.cells) throw std::invalid_argument("witness size mismatch");
  RationalVector out(static_cast<std::size_t>(sys.rows), 0);
  for (std::size_t m = 0; m < sys.maps.size(); ++m)
    for (Index c = 0; c < sys.cells; ++c) {
      const auto& xc = x[static_cast<std::size_t>(c)];
      if (xc != 0) out[static_cast<std::size_t>(sys.offsets[m] + sys.maps[m][static_cast<std::size_t>(c)])] += xc;
    }
  return out;
}

RationalVector apply_transpose(const MarginalSystem& sys, const RationalVector& y) {
  if (static_cast<Index>(y.size()) != sys.rows) throw std::invalid_argument("certificate size mismatch");
  RationalVector out(static_cast<std::size_t>(sys.cells), 0);
  for (std::size_t m = 0; m < sys.maps.size(); ++m)
    for (Index c = 0; c < sys.cells; ++c)
      out[static_cast<std::size_t>(c)] +=
          y[static_cast<std::size_t>(sys.offsets[m] + sys.maps[m][static_cast<std::size_t>(c)])];
  return out;
}

bool verify_witness(const MarginalSystem& sys, const RationalVector& x, const RationalVector& b) {
  if (static_cast<Index>(x.size()) != sys.cells) return false;
  if (std::any_of(x.begin(), x.end(), [](const Rational& v) { return v < 0; })) return false;
  return apply_system(sys, x) == b;
}

bool verify_certificate(const MarginalSystem& sys, const RationalVector& y, const RationalVector& b) {
  if (static_cast<Index>(y.size()) != sys.rows || b.size() != y.size()) return false;
  const auto aty = apply_transpose(sys, y);
  if (std::any_of(aty.begin(), aty.end(), [](const Rational& v) { return v < 0; })) return false;
  Rational dot = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] != 0) dot += b[i] * y[i];
  return dot < 0;
}

namespace {

// Dense rows of the constraint matrix.
std::vector<RationalVector> dense_rows(const MarginalSystem& sys) {
  std::vector<RationalVector> rows(static_cast<std::size_t>(sys.rows),
                                   RationalVector(static_cast<std::size_t>(sys.cells), 0));
  for (std::size_t m = 0; m < sys.maps.size(); ++m)
    for (Index c = 0; c < sys.cells; ++c)
      rows[static_cast<std::size_t>(sys.offsets[m] + sys.maps[m][static_cast<std::size_t>(c)])]
          [static_cast<std::size_t>(c)] = 1;
  return rows;
}

struct Independence {
  std::vector<std::size_t> independent;  // row indices, ascending
  RationalVector rhs;                    // repaired right-hand side
  double repair = 0.0;
  std::size_t dependent = 0;
};

// Forward elimination row by row. A row that reduces to zero is dependent;
// the reduced right-hand side is its deviation from the implied value.
Independence find_independent_rows(const std::vector<RationalVector>& rows, const RationalVector& b) {
  Independence out;
  out.rhs = b;
  struct BasisRow {
    std::size_t pivot;
    RationalVector coeffs;
    Rational rhs;
  };
  std::vector<BasisRow> basis;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    RationalVector row = rows[r];
    Rational rhs = b[r];
    for (const auto& br : basis) {
      if (row[br.pivot] == 0) continue;
      const Rational f = row[br.pivot];
      for (std::size_t k = 0; k < row.size(); ++k)
        if (br.coeffs[k] != 0) row[k] -= f * br.coeffs[k];
      rhs -= f * br.rhs;
    }
    auto nz = std::find_if(row.begin(), row.end(), [](const Rational& v) { return v != 0; });
    if (nz == row.end()) {
      out.rhs[r] -= rhs;
      out.repair = std::max(out.repair, std::abs(rhs.get_d()));
      ++out.dependent;
      continue;
    }
    const Rational inv = 1 / *nz;
    for (auto& v : row)
      if (v != 0) v *= inv;
    rhs *= inv;
    basis.push_back({static_cast<std::size_t>(nz - row.begin()), std::move(row), std::move(rhs)});
    out.independent.push_back(r);
  }
  return out;
}

}  // namespace

FeasibilityResult lp_feasible(const Chain& chain, const LpOptions& options) {
  const auto sys = marginal_system(chain);
  if (sys.cells > options.cell_cap)
    throw CellCapExceeded("phase grid has " + std::to_string(sys.cells) + " cells, cap is " +
                          std::to_string(options.cell_cap));
  FeasibilityResult res;
  res.denominator = options.denominator;
  const auto b = quantized_rhs(chain, options.denominator);
  const auto rows = dense_rows(sys);
  auto ind = find_independent_rows(rows, b);
  if (ind.repair > options.repair_tolerance)
    throw IncompatibleChain("marginal constraints are inconsistent by " + std::to_string(ind.repair));
  res.rhs = ind.rhs;
  res.repair = ind.repair;
  res.dependent_rows = ind.dependent;

  // Phase-one tableau [A | I | b] over the independent rows.
  const std::size_t m = ind.independent.size();
  const auto n = static_cast<std::size_t>(sys.cells);
  const std::size_t width = n + m + 1;
  const std::size_t rhs_col = n + m;
  std::vector<RationalVector> t(m, RationalVector(width, 0));
  std::vector<int> sign(m, 1);
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto r = ind.independent[i];
    const Rational& bi = b[r];
    sign[i] = bi < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j)
      if (rows[r][j] != 0) t[i][j] = sign[i] * rows[r][j];
    t[i][n + i] = 1;
    t[i][rhs_col] = sign[i] * bi;
    basis[i] = n + i;
  }
  // Reduced costs; z[rhs_col] holds minus the objective.
  RationalVector z(width, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (t[i][j] != 0) z[j] -= t[i][j];
  for (std::size_t i = 0; i < m; ++i) z[rhs_col] -= t[i][rhs_col];

  std::vector<std::size_t> nonzero;
  while (true) {
    std::size_t enter = width;
    for (std::size_t j = 0; j < rhs_col; ++j)
      if (z[j] < 0) {
        enter = j;
        break;
      }
    if (enter == width) break;
    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      Rational ratio = t[i][rhs_col] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = std::move(ratio);
      }
    }
    if (leave == m) throw InternalDefect("phase-one simplex is unbounded");

    auto& prow = t[leave];
    const Rational inv = 1 / prow[enter];
    nonzero.clear();
    for (std::size_t j = 0; j < width; ++j)
      if (prow[j] != 0) {
        prow[j] *= inv;
        nonzero.push_back(j);
      }
    auto eliminate = [&](RationalVector& row) {
      if (row[enter] == 0) return;
      const Rational f = row[enter];
      for (auto j : nonzero) row[j] -= f * prow[j];
    };
    for (std::size_t i = 0; i < m; ++i)
      if (i != leave) eliminate(t[i]);
    eliminate(z);
    basis[leave] = enter;
    ++res.pivots;
  }

  if (z[rhs_col] == 0) {
    res.status = FeasibilityStatus::Feasible;
    res.witness.assign(n, 0);
    for (std::size_t i = 0; i < m; ++i)
      if (basis[i] < n) res.witness[basis[i]] = t[i][rhs_col];
    if (!verify_witness(sys, res.witness, res.rhs))
      throw InternalDefect("simplex witness does not reproduce the marginals");
  } else {
    res.status = FeasibilityStatus::Infeasible;
    // Dual of phase one: u_i = 1 - (reduced cost of artificial i).
    res.certificate.assign(static_cast<std::size_t>(sys.rows), 0);
    for (std::size_t i = 0; i < m; ++i)
      res.certificate[ind.independent[i]] = -(1 - z[n + i]) * sign[i];
    if (!verify_certificate(sys, res.certificate, res.rhs))
      throw InternalDefect("simplex certificate does not separate");
  }
  return res;
}

PhaseTensor witness_tensor(const Chain& chain, const FeasibilityResult& result) {
  if (!result.feasible()) throw std::invalid_argument("no witness for an infeasible chain");
  const auto& grid = chain.grid();
  PhaseTensor rho(grid.phase_vars(), grid.phase_dims());
  for (Index i = 0; i < rho.size(); ++i) rho[i] = result.witness[static_cast<std::size_t>(i)].get_d();
  return rho;
}

Chain j_reduce(const Chain& chain, const std::vector<int>& axes) {
  if (axes.empty()) throw std::invalid_argument("j_reduce: empty axis set");
  if (!std::is_sorted(axes.begin(), axes.end()) ||
      std::adjacent_find(axes.begin(), axes.end()) != axes.end() || axes.front() < 0 ||
      axes.back() >= chain.dimension())
    throw std::invalid_argument("j_reduce: axes must be distinct, ascending and in range");
  const auto& grid = chain.grid();
  std::vector<AxisGrid> sub_axes;
  for (int a : axes) sub_axes.push_back(grid.axis(a));
  GridSpec sub(std::move(sub_axes));
  const int r = static_cast<int>(axes.size());

  std::vector<MarginalTensor> out;
  for (const auto& m : chain.members()) {
    std::vector<bool> flags;
    std::vector<Var> keep;
    for (int a : axes) {
      flags.push_back(m.type.momentum(a));
      keep.push_back(grid.var_of(m.type, a));
    }
    const auto type = AxisAssignment::from_flags(flags);
    if (std::any_of(out.begin(), out.end(), [&](const MarginalTensor& o) { return o.type == type; }))
      continue;
    auto summed = sum_onto(m.values, keep);
    std::vector<Var> vars;
    for (int i = 0; i < r; ++i) vars.push_back(flags[static_cast<std::size_t>(i)] ? r + i : i);
    out.push_back({type, Tensor<double>(vars, summed.dims(), summed.values())});
  }
  return Chain(std::move(sub), std::move(out));
}

namespace {

// Configuration cell index: axis 0 most significant, bit 0 means q = -1.
int eps_of(std::size_t cell, int axis, int k) { return ((cell >> (k - 1 - axis)) & 1u) ? 1 : -1; }

// Reduced configuration distribution of member j at the configuration with
// q_r = eps_r (r != j): 2^-(k-1) (1 -/+ prod_{r != j} eps_r), minus for j = 0.
Rational tau_bar(int j, std::size_t cell, int k) {
  int prod = 1;
  for (int r = 0; r < k; ++r)
    if (r != j) prod *= eps_of(cell, r, k);
  const int sign = j == 0 ? -1 : 1;
  Rational out(1 + sign * prod, mpz_class(1) << (k - 1));
  out.canonicalize();
  return out;
}

}  // namespace

Chain lemma3_chain(int k, const std::vector<Eigen::VectorXd>& gammas) {
  if (k == 2)
    throw std::invalid_argument(
        "lemma3_chain: k = 2 is not supported, the construction needs k >= 3 for the two "
        "witnessing monomials to exist");
  if (k < 3) throw std::invalid_argument("lemma3_chain: k must be at least 3");
  if (k > 20) throw std::invalid_argument("lemma3_chain: k too large");
  std::vector<Eigen::VectorXd> g = gammas;
  if (g.empty()) g.assign(static_cast<std::size_t>(k), Eigen::VectorXd::Constant(2, 0.5));
  if (static_cast<int>(g.size()) != k) throw std::invalid_argument("lemma3_chain: one gamma per axis");
  std::vector<AxisGrid> axes;
  for (const auto& gj : g) {
    if ((gj.array() < 0).any() || std::abs(gj.sum() - 1.0) > kNormTolerance)
      throw std::invalid_argument("lemma3_chain: gamma must be a normalized distribution");
    AxisGrid a;
    a.q = {-1.0, 1.0};
    for (Index i = 0; i < gj.size(); ++i) a.p.push_back(static_cast<double>(i));
    axes.push_back(std::move(a));
  }
  GridSpec grid(std::move(axes));

  std::vector<MarginalTensor> members;
  for (int j = 0; j < k; ++j) {
    std::vector<bool> flags(static_cast<std::size_t>(k), false);
    flags[static_cast<std::size_t>(j)] = true;
    const auto type = AxisAssignment::from_flags(flags);
    auto vars = grid.vertex_vars(type);
    Tensor<double> t(vars, grid.dims(vars));
    std::vector<Index> idx(static_cast<std::size_t>(k));
    for (Index cell = 0; cell < t.size(); ++cell) {
      Index rem = cell;
      for (int r = k; r-- > 0;) {
        idx[static_cast<std::size_t>(r)] = rem % t.dims()[static_cast<std::size_t>(r)];
        rem /= t.dims()[static_cast<std::size_t>(r)];
      }
      std::size_t config = 0;
      for (int r = 0; r < k; ++r)
        config = (config << 1) | (r == j ? 0u : static_cast<std::size_t>(idx[static_cast<std::size_t>(r)]));
      t[cell] = g[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]] * tau_bar(j, config, k).get_d();
    }
    members.push_back({type, std::move(t)});
  }
  return Chain(std::move(grid), std::move(members));
}

Lemma3Certificate lemma3_certificate(int k) {
  if (k < 3) throw std::invalid_argument("lemma3_certificate: k must be at least 3");
  if (k > 12) throw std::invalid_argument("lemma3_certificate: k too large");
  const std::size_t cells = std::size_t{1} << k;
  const Rational unit(1, mpz_class(1) << k);

  // Configuration-space system: summing P over q_j reproduces tau_bar_j.
  RationalMatrix a;
  RationalVector b;
  for (int j = 0; j < k; ++j) {
    const std::size_t bit = std::size_t{1} << (k - 1 - j);
    for (std::size_t cell = 0; cell < cells; ++cell) {
      if (cell & bit) continue;
      RationalVector row(cells, 0);
      row[cell] = 1;
      row[cell | bit] = 1;
      a.push_back(std::move(row));
      b.push_back(tau_bar(j, cell, k));
    }
  }

  // Closed-form family P0 + lambda v, evaluated per configuration.
  RationalVector p0(cells), v(cells);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    int all = 1, rest = 1;
    for (int r = 0; r < k; ++r) all *= eps_of(cell, r, k);
    for (int r = 1; r < k; ++r) rest *= eps_of(cell, r, k);
    int sum = 1 - rest;
    for (int j = 1; j < k; ++j) {
      int prod = 1;
      for (int r = 0; r < k; ++r)
        if (r != j) prod *= eps_of(cell, r, k);
      sum += prod;
    }
    p0[cell] = sum * unit;
    v[cell] = all * unit;
  }

  Lemma3Certificate c;
  c.k = k;
  c.system_rank = rank(a);
  const auto null = nullspace(a, cells);
  c.family_dimension = null.size();

  bool ok = c.family_dimension == 1;
  for (std::size_t r = 0; r < a.size() && ok; ++r) {
    Rational lhs = 0, hom = 0;
    for (std::size_t x = 0; x < cells; ++x)
      if (a[r][x] != 0) {
        lhs += p0[x];
        hom += v[x];
      }
    ok = lhs == b[r] && hom == 0;
  }
  if (ok) {
    // v must span the nullspace.
    const auto& n0 = null.front();
    std::size_t ref = 0;
    while (n0[ref] == 0) ++ref;
    const Rational scale = v[ref] / n0[ref];
    for (std::size_t x = 0; x < cells && ok; ++x) ok = v[x] == scale * n0[x];
  }
  c.family_verified = ok;

  // (-, +, ..., +) and (+, -, -, +, ..., +).
  const std::size_t first = (cells - 1) & ~(std::size_t{1} << (k - 1));
  const std::size_t second = ((cells - 1) & ~(std::size_t{1} << (k - 2))) & ~(std::size_t{1} << (k - 3));
  c.first = {p0[first], v[first]};
  c.second = {p0[second], v[second]};
  c.sum = c.first.constant + c.second.constant;
  if (c.first.slope + c.second.slope != 0) throw InternalDefect("certificate coefficient sum depends on lambda");
  return c;
}

std::optional<QuantumCounterexample> search_quantum_counterexample(
    const ChainGraph& graph, const std::vector<Index>& sizes, std::uint64_t seed,
    int max_attempts, const LpOptions& options) {
  for (int i = 0; i < max_attempts; ++i) {
    const auto s = seed + static_cast<std::uint64_t>(i);
    auto psi = random_wavefunction(sizes, s);
    const auto chain = quantum_chain(psi, graph);
    if (!lp_feasible(chain, options).feasible())
      return QuantumCounterexample{std::move(psi), graph, s, i + 1};
  }
  return std::nullopt;
}

}  // namespace mf
