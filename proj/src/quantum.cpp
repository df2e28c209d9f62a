#include "mf/quantum.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace mf {

GridSpec quantum_grid(const std::vector<Index>& sizes) {
  std::vector<AxisGrid> axes;
  for (Index m : sizes) {
    if (m < 1) throw std::invalid_argument("grid size must be positive");
    AxisGrid a;
    const double mid = 0.5 * static_cast<double>(m - 1);
    for (Index k = 0; k < m; ++k) {
      const double c = static_cast<double>(k) - mid;
      a.q.push_back(c);
      a.p.push_back(2.0 * std::numbers::pi * c / static_cast<double>(m));
    }
    axes.push_back(std::move(a));
  }
  return GridSpec(std::move(axes));
}

WaveFunction::WaveFunction(GridSpec grid, Tensor<Complex>::Vector amplitudes)
    : grid_(std::move(grid)) {
  for (int i = 0; i < grid_.dimension(); ++i)
    if (grid_.axis(i).q.size() != grid_.axis(i).p.size())
      throw std::invalid_argument("wavefunction axis " + std::to_string(i + 1) +
                                  " has unequal q and p grid sizes");
  auto vars = grid_.vertex_vars(AxisAssignment::all_position(grid_.dimension()));
  auto dims = grid_.dims(vars);
  amplitudes_ = Tensor<Complex>(std::move(vars), std::move(dims), std::move(amplitudes));
  if (std::abs(amplitudes_.values().squaredNorm() - 1.0) > kNormTolerance)
    throw std::invalid_argument("wavefunction is not normalized");
}

std::vector<Index> WaveFunction::sizes() const { return amplitudes_.dims(); }

WaveFunction random_wavefunction(const std::vector<Index>& sizes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Index n = 1;
  for (Index m : sizes) n *= m;
  Eigen::VectorXcd amp(n);
  // Box-Muller on our own uniform stream keeps the output library-independent.
  for (Index i = 0; i < n; ++i) {
    const double u1 = 1.0 - unit_interval(rng());
    const double u2 = unit_interval(rng());
    const double r = std::sqrt(-2.0 * std::log(u1));
    amp[i] = Complex(r * std::cos(2 * std::numbers::pi * u2), r * std::sin(2 * std::numbers::pi * u2));
  }
  amp /= amp.norm();
  return WaveFunction(quantum_grid(sizes), std::move(amp));
}

WaveFunction product_state(const std::vector<Eigen::VectorXcd>& factors) {
  std::vector<Index> sizes;
  Eigen::VectorXcd amp = Eigen::VectorXcd::Ones(1);
  for (const auto& f : factors) {
    sizes.push_back(f.size());
    Eigen::VectorXcd next(amp.size() * f.size());
    for (Index i = 0; i < amp.size(); ++i) next.segment(i * f.size(), f.size()) = amp[i] * f;
    amp = std::move(next);
  }
  return WaveFunction(quantum_grid(sizes), std::move(amp));
}

void validate_ensemble(const Ensemble& ens) {
  if (ens.members.empty()) throw std::invalid_argument("empty ensemble");
  double total = 0;
  for (const auto& [w, psi] : ens.members) {
    if (!(w >= 0.0)) throw std::invalid_argument("ensemble weight is negative");
    if (psi.grid() != ens.members.front().second.grid())
      throw std::invalid_argument("ensemble states live on different grids");
    total += w;
  }
  if (std::abs(total - 1.0) > kNormTolerance) throw std::invalid_argument("ensemble weights do not sum to 1");
}

Eigen::MatrixXcd centered_dft(Index m) {
  Eigen::MatrixXcd u(m, m);
  const double mid = 0.5 * static_cast<double>(m - 1);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (Index k = 0; k < m; ++k)
    for (Index j = 0; j < m; ++j) {
      const double phase = -2.0 * std::numbers::pi * (static_cast<double>(k) - mid) *
                           (static_cast<double>(j) - mid) / static_cast<double>(m);
      u(k, j) = std::polar(scale, phase);
    }
  return u;
}

Tensor<Complex> to_mixed_basis(const WaveFunction& psi, const AxisAssignment& a) {
  const auto& grid = psi.grid();
  if (a.dimension() != grid.dimension()) throw std::invalid_argument("assignment/state dimension mismatch");
  const auto& src = psi.amplitudes();
  Eigen::VectorXcd values = src.values();
  const auto& dims = src.dims();
  using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  for (int i = 0; i < grid.dimension(); ++i) {
    if (!a.momentum(i)) continue;
    const Index m = dims[static_cast<std::size_t>(i)];
    Index outer = 1, inner = 1;
    for (int k = 0; k < i; ++k) outer *= dims[static_cast<std::size_t>(k)];
    for (int k = i + 1; k < grid.dimension(); ++k) inner *= dims[static_cast<std::size_t>(k)];
    const Eigen::MatrixXcd u = centered_dft(m);
    for (Index o = 0; o < outer; ++o) {
      Eigen::Map<RowMajor> block(values.data() + o * m * inner, m, inner);
      block = (u * block).eval();
    }
  }
  auto vars = grid.vertex_vars(a);
  return Tensor<Complex>(std::move(vars), dims, std::move(values));
}

Chain quantum_chain(const WaveFunction& psi, const ChainGraph& graph) {
  if (graph.dimension() != psi.dimension()) throw std::invalid_argument("graph/state dimension mismatch");
  std::vector<MarginalTensor> members;
  for (const auto& v : graph.vertices()) {
    auto amp = to_mixed_basis(psi, v);
    Eigen::VectorXd prob = amp.values().cwiseAbs2();
    members.push_back(make_marginal(psi.grid(), v, std::move(prob)));
  }
  return Chain(psi.grid(), std::move(members));
}

Chain mixed_state_chain(const Ensemble& ens, const ChainGraph& graph) {
  validate_ensemble(ens);
  const auto& grid = ens.members.front().second.grid();
  std::vector<MarginalTensor> members;
  for (const auto& v : graph.vertices()) {
    Eigen::VectorXd prob;
    for (const auto& [w, psi] : ens.members) {
      Eigen::VectorXd p = to_mixed_basis(psi, v).values().cwiseAbs2();
      if (prob.size() == 0) prob = Eigen::VectorXd::Zero(p.size());
      prob += w * p;
    }
    members.push_back(make_marginal(grid, v, std::move(prob)));
  }
  return Chain(grid, std::move(members));
}

Chain extend_chain(const WaveFunction& psi, const ConnectifiedDiagram& diagram) {
  if (!is_proper(diagram.completed) || !is_connected(diagram.completed))
    throw std::invalid_argument("extended graph is not a proper tree");
  return quantum_chain(psi, diagram.completed);
}

Chain extend_chain(const Ensemble& ens, const ConnectifiedDiagram& diagram) {
  if (!is_proper(diagram.completed) || !is_connected(diagram.completed))
    throw std::invalid_argument("extended graph is not a proper tree");
  return mixed_state_chain(ens, diagram.completed);
}

}  // namespace mf
