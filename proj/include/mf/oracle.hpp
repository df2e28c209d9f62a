#ifndef MF_ORACLE_HPP
#define MF_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "mf/grid.hpp"
#include "mf/quantum.hpp"
#include "mf/rational.hpp"

namespace mf {

/// Linear map from phase-grid cells to the stacked member cells: row
/// offsets[m] + maps[m][cell] of the constraint matrix has a 1 in column cell.
struct MarginalSystem {
  std::vector<AxisAssignment> types;
  std::vector<Index> offsets;
  std::vector<std::vector<Index>> maps;
  Index rows = 0;
  Index cells = 0;
};

MarginalSystem marginal_system(const Chain& chain);

/// Member values, quantized and stacked in constraint-row order.
RationalVector quantized_rhs(const Chain& chain, const mpz_class& denominator);

RationalVector apply_system(const MarginalSystem& sys, const RationalVector& x);
RationalVector apply_transpose(const MarginalSystem& sys, const RationalVector& y);

/// x >= 0 and A x = b exactly.
bool verify_witness(const MarginalSystem& sys, const RationalVector& x, const RationalVector& b);
/// A^T y >= 0 on every cell and b . y < 0, exactly.
bool verify_certificate(const MarginalSystem& sys, const RationalVector& y, const RationalVector& b);

inline mpz_class default_denominator() { return mpz_class(1) << 32; }

struct LpOptions {
  mpz_class denominator = default_denominator();
  Index cell_cap = 1'000'000;
  double repair_tolerance = 1e-8;
};

enum class FeasibilityStatus { Feasible, Infeasible };

struct FeasibilityResult {
  FeasibilityStatus status = FeasibilityStatus::Infeasible;
  mpz_class denominator;
  RationalVector rhs;          // quantized right-hand side after repair
  double repair = 0.0;         // largest change made by the repair
  std::size_t dependent_rows = 0;
  RationalVector witness;      // per phase cell, when feasible
  RationalVector certificate;  // per constraint row, when infeasible
  std::size_t pivots = 0;

  bool feasible() const { return status == FeasibilityStatus::Feasible; }
};

/// Exact phase-one simplex (Bland's rule) for: rho >= 0 over the phase grid
/// with every member reproduced as a marginal.
///
/// Member values are quantized to multiples of 1/denominator. Constraint rows
/// that are linear combinations of earlier rows are dropped and their
/// right-hand sides replaced by the implied values; if that changes any
/// value by more than repair_tolerance the chain is rejected as
/// incompatible. Throws CellCapExceeded above the cell cap.
FeasibilityResult lp_feasible(const Chain& chain, const LpOptions& options = {});

PhaseTensor witness_tensor(const Chain& chain, const FeasibilityResult& result);

/// Each member summed onto the axes in `axes` (ascending, 0-based), on the
/// sub-grid of those axes; members that reduce to an already present type
/// are dropped.
Chain j_reduce(const Chain& chain, const std::vector<int>& axes);

/// Compatible but inadmissible k-chain: member j has momentum on axis j only, mass
/// gamma_j(p_j) times the reduced configuration distribution on {-1, +1}
/// q-grids. Default gammas are uniform on two points.
Chain lemma3_chain(int k, const std::vector<Eigen::VectorXd>& gammas = {});

/// Affine coefficient c0 + c1 * lambda.
struct AffineCoefficient {
  Rational constant;
  Rational slope;
};

struct Lemma3Certificate {
  int k = 0;
  AffineCoefficient first;   // configuration (-, +, ..., +)
  AffineCoefficient second;  // configuration (+, -, -, +, ..., +)
  Rational sum;              // first + second, independent of lambda
  std::size_t system_rank = 0;
  std::size_t family_dimension = 0;
  bool family_verified = false;
};

Lemma3Certificate lemma3_certificate(int k);

struct QuantumCounterexample {
  WaveFunction psi;
  ChainGraph graph;
  std::uint64_t seed = 0;
  int attempts = 0;
};

/// Tries random_wavefunction(sizes, seed + i) for i < max_attempts and
/// returns the first whose quantum chain on `graph` is infeasible.
std::optional<QuantumCounterexample> search_quantum_counterexample(
    const ChainGraph& graph, const std::vector<Index>& sizes, std::uint64_t seed,
    int max_attempts, const LpOptions& options = {});

}  // namespace mf

#endif  // MF_ORACLE_HPP
