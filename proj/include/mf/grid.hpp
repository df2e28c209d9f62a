#ifndef MF_GRID_HPP
#define MF_GRID_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "mf/assignment.hpp"
#include "mf/chain_graph.hpp"
#include "mf/tensor.hpp"

namespace mf {

inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kCompatTolerance = 1e-9;

/// Grid labels for one axis. Labels are for reporting only; all
/// computation works on probability masses per grid point.
struct AxisGrid {
  std::vector<double> q;
  std::vector<double> p;

  friend bool operator==(const AxisGrid&, const AxisGrid&) = default;
};

class GridSpec {
 public:
  GridSpec() = default;
  explicit GridSpec(std::vector<AxisGrid> axes);

  // Labels 0..points-1 on every q- and p-grid.
  static GridSpec uniform(int dimension, Index points);
  static GridSpec uniform(int dimension, Index q_points, Index p_points);

  int dimension() const { return static_cast<int>(axes_.size()); }
  const AxisGrid& axis(int i) const { return axes_.at(static_cast<std::size_t>(i)); }
  const std::vector<AxisGrid>& axes() const { return axes_; }

  Var q_var(int axis) const { return axis; }
  Var p_var(int axis) const { return dimension() + axis; }
  Var var_of(const AxisAssignment& a, int axis) const {
    return a.momentum(axis) ? p_var(axis) : q_var(axis);
  }
  Var conjugate(Var v) const { return v < dimension() ? v + dimension() : v - dimension(); }
  int axis_of(Var v) const { return v < dimension() ? v : v - dimension(); }

  Index points(Var v) const;
  std::vector<Index> dims(const std::vector<Var>& vars) const;

  // Variables of a vertex distribution, axis 1 outermost.
  std::vector<Var> vertex_vars(const AxisAssignment& a) const;
  // (q_1..q_N, p_1..p_N).
  std::vector<Var> phase_vars() const;
  std::vector<Index> phase_dims() const { return dims(phase_vars()); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  std::vector<AxisGrid> axes_;
};

/// Distribution of one CCS type: masses over the grids selected by `type`.
struct MarginalTensor {
  AxisAssignment type;
  Tensor<double> values;
};

/// Masses over the full phase-space grid, axes (q_1..q_N, p_1..p_N).
using PhaseTensor = Tensor<double>;

MarginalTensor make_marginal(const GridSpec& grid, const AxisAssignment& type,
                             Eigen::VectorXd values);
PhaseTensor make_phase_tensor(const GridSpec& grid, Eigen::VectorXd values);

/// Distinct-type distributions on a common grid. Members are kept in
/// canonical type order; the chain graph is derived from the type set.
class Chain {
 public:
  Chain() = default;
  Chain(GridSpec grid, std::vector<MarginalTensor> members, double norm_tol = kNormTolerance);

  const GridSpec& grid() const { return grid_; }
  int dimension() const { return grid_.dimension(); }
  const std::vector<MarginalTensor>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  std::vector<AxisAssignment> types() const;
  ChainGraph graph() const { return {dimension(), types()}; }

  bool contains(const AxisAssignment& type) const;
  const MarginalTensor& member(const AxisAssignment& type) const;

  // Members whose type is in `types`.
  Chain restricted(const std::vector<AxisAssignment>& types) const;

 private:
  GridSpec grid_;
  std::vector<MarginalTensor> members_;
};

/// Sums out the conjugate of each axis's selected variable.
MarginalTensor marginalize(const PhaseTensor& rho, const GridSpec& grid,
                           const AxisAssignment& type);

Chain chain_from_phase(const PhaseTensor& rho, const GridSpec& grid, const ChainGraph& graph);

struct PairDeviation {
  AxisAssignment a;
  AxisAssignment b;
  double deviation = 0.0;
};

struct CompatibilityReport {
  std::vector<PairDeviation> pairs;  // every member pair, canonical order
  double max_deviation = 0.0;
  bool compatible = true;
};

/// Compares, for each pair, both sides summed over their conflicting axes.
CompatibilityReport check_compatibility(const Chain& chain, double tol = kCompatTolerance);

/// Distribution shared by two members: each summed over the axes where their
/// types differ. Stores the mean of both sums; throws IncompatibleChain when
/// they differ by more than `tol`. Axes follow the members' axis order.
Tensor<double> integrated_distribution(const GridSpec& grid, const MarginalTensor& a,
                                       const MarginalTensor& b, double tol = kCompatTolerance);

/// Random phase tensor with positive masses that are exact multiples of
/// 2^-32 summing to exactly 1 (all marginals are then exact in double).
PhaseTensor random_phase_tensor(const GridSpec& grid, std::uint64_t seed);

/// Marginals of random_phase_tensor(grid, seed) on every vertex of `graph`.
Chain random_chain(const ChainGraph& graph, const GridSpec& grid, std::uint64_t seed);

/// Deterministic uniform double in [0, 1) from a 64-bit generator word.
inline double unit_interval(std::uint64_t word) {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

}  // namespace mf

#endif  // MF_GRID_HPP
