#ifndef MF_QUANTUM_HPP
#define MF_QUANTUM_HPP

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "mf/classifier.hpp"
#include "mf/grid.hpp"

namespace mf {

using Complex = std::complex<double>;

/// Grid for M_i-point discrete wavefunctions: position labels j - (M-1)/2,
/// momentum labels 2 pi (k - (M-1)/2) / M.
GridSpec quantum_grid(const std::vector<Index>& sizes);

/// Amplitudes over the position grids (axis 1 outermost).
class WaveFunction {
 public:
  WaveFunction() = default;
  WaveFunction(GridSpec grid, Tensor<Complex>::Vector amplitudes);

  const GridSpec& grid() const { return grid_; }
  int dimension() const { return grid_.dimension(); }
  std::vector<Index> sizes() const;
  const Tensor<Complex>& amplitudes() const { return amplitudes_; }

 private:
  GridSpec grid_;
  Tensor<Complex> amplitudes_;
};

/// Deterministic random state with Gaussian amplitudes, normalized.
WaveFunction random_wavefunction(const std::vector<Index>& sizes, std::uint64_t seed);
/// Tensor product of single-axis states (each normalized on its own).
WaveFunction product_state(const std::vector<Eigen::VectorXcd>& factors);

struct Ensemble {
  std::vector<std::pair<double, WaveFunction>> members;
};

void validate_ensemble(const Ensemble& ens);

/// Centered unitary DFT of size M: U(k, j) = exp(-2 pi i k_c j_c / M) / sqrt(M)
/// with k_c = k - (M-1)/2, j_c = j - (M-1)/2.
Eigen::MatrixXcd centered_dft(Index m);

/// Applies the centered DFT along every momentum-assigned axis.
Tensor<Complex> to_mixed_basis(const WaveFunction& psi, const AxisAssignment& a);

Chain quantum_chain(const WaveFunction& psi, const ChainGraph& graph);
Chain mixed_state_chain(const Ensemble& ens, const ChainGraph& graph);

/// The source's chain on every vertex of G_c, insertions included.
Chain extend_chain(const WaveFunction& psi, const ConnectifiedDiagram& diagram);
Chain extend_chain(const Ensemble& ens, const ConnectifiedDiagram& diagram);

}  // namespace mf

#endif  // MF_QUANTUM_HPP
