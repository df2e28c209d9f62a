#ifndef MF_RECONSTRUCT_HPP
#define MF_RECONSTRUCT_HPP

#include <limits>
#include <optional>
#include <vector>

#include "mf/classifier.hpp"
#include "mf/grid.hpp"

namespace mf {

/// Link of a reconstruction tree. `axes` is the set Y on which the end
/// vertices differ: one axis for a simple link, several for a composite link
/// standing in for a segment of simple insertions.
struct TreeLink {
  AxisAssignment a;
  AxisAssignment b;
  std::vector<int> axes;
  bool composite() const { return axes.size() > 1; }
};

/// Spanning tree over chain members. Link axis sets are pairwise disjoint.
struct LinkTree {
  int dimension = 0;
  std::vector<AxisAssignment> vertices;  // sorted
  std::vector<TreeLink> links;

  std::vector<int> legs(const AxisAssignment& v) const;  // indices into links
  // Axes carried by no link; every vertex agrees on them.
  std::vector<int> passive_axes() const;
};

/// Tree of a connected proper graph (all links simple).
LinkTree tree_from_graph(const ChainGraph& graph);

/// Tree over the original vertices of a G-simple diagram: each run of
/// two-legged insertions becomes one composite link. Throws if some
/// insertion has more than two legs.
LinkTree tree_from_diagram(const ConnectifiedDiagram& diagram);

/// Throws std::invalid_argument unless `tree` is a proper spanning tree.
void validate_tree(const LinkTree& tree);

/// Free factor over the conjugates of the passive axes, axes ascending.
struct PassiveFactor {
  std::vector<int> axes;
  Tensor<double> zeta;
};

PassiveFactor uniform_passive_factor(const GridSpec& grid, const LinkTree& tree);
/// Wraps flat values (row-major over the passive conjugate grids).
PassiveFactor make_passive_factor(const GridSpec& grid, const LinkTree& tree,
                                  Eigen::VectorXd values);

struct Propagator {
  TreeLink link;
  Tensor<double> values;  // 1/sigma on support, 0 elsewhere
};

inline constexpr double kSupportRelative = 1e-12;

/// Reciprocal where sigma > eps, exactly 0 elsewhere.
Tensor<double> build_propagator(const Tensor<double>& sigma_ab, double eps);
/// Threshold kSupportRelative * max(sigma_ab).
double support_threshold(const Tensor<double>& sigma_ab);

Propagator link_propagator(const Chain& chain, const TreeLink& link,
                           double tol = kCompatTolerance);

/// Product of the member distributions of `tree`, its propagators and zeta,
/// laid out over `vars` (which must cover every factor's variables).
Tensor<double> tree_product(const Chain& chain, const LinkTree& tree, const PassiveFactor& zeta,
                            const std::vector<Var>& vars, double tol = kCompatTolerance);

PhaseTensor build_rho0(const Chain& chain, const LinkTree& tree, const PassiveFactor& zeta,
                       double tol = kCompatTolerance);
PhaseTensor build_rho0(const Chain& chain, const LinkTree& tree, double tol = kCompatTolerance);

/// Current tree and variable layout during peeling.
struct PeelState {
  LinkTree tree;
  std::vector<Var> vars;
};

struct PeelResult {
  Tensor<double> reduced;
  PeelState state;
};

PeelState initial_peel_state(const GridSpec& grid, const LinkTree& tree);
/// Sums `rho` over the leaf's own variables on its link axes and drops the
/// leaf from the tree. Throws unless `leaf` has exactly one leg.
PeelResult peel(const Tensor<double>& rho, const PeelState& state, const GridSpec& grid,
                const AxisAssignment& leaf);
/// Leaves in canonical removal order (smallest current leaf first) until one
/// vertex remains; the survivor is last.
std::vector<AxisAssignment> canonical_peel_order(const LinkTree& tree);

/// Measure projector: (P_a f)(Z_a) = sum over Z'_a of rho0 f, divided by
/// sigma_a; zero off sigma_a's support. Returned over the full phase grid.
PhaseTensor apply_P(const Chain& chain, const PhaseTensor& rho0, const AxisAssignment& alpha,
                    const PhaseTensor& f);

/// P_a P_b f for a tree link in closed form (division by the link's
/// integrated distribution).
PhaseTensor apply_link_pair(const Chain& chain, const PhaseTensor& rho0, const TreeLink& link,
                            const PhaseTensor& f, double tol = kCompatTolerance);

/// f - sum_a P_a f + sum_links P_a P_b f.
PhaseTensor apply_Pi(const Chain& chain, const PhaseTensor& rho0, const LinkTree& tree,
                     const PhaseTensor& f, double tol = kCompatTolerance);

struct SolutionFamily {
  PhaseTensor rho0;
  PhaseTensor h;  // zero off rho0's support
  double m_plus = 0.0;
  double m_minus = 0.0;
  double lambda_min = -std::numeric_limits<double>::infinity();
  double lambda_max = std::numeric_limits<double>::infinity();
  bool h_vanishes = false;  // lambda range unbounded, rho = rho0 for all lambda
};

struct GeneralSolution {
  SolutionFamily family;
  double lambda = 0.0;
  bool lambda_in_range = false;
  std::optional<PhaseTensor> rho;  // present iff lambda_in_range
};

SolutionFamily solution_family(const Chain& chain, const LinkTree& tree,
                               const PassiveFactor& zeta, const PhaseTensor& f,
                               double tol = kCompatTolerance);
GeneralSolution general_solution(const Chain& chain, const LinkTree& tree,
                                 const PassiveFactor& zeta, const PhaseTensor& f, double lambda,
                                 double tol = kCompatTolerance);
/// rho0 (1 + lambda h); no range check.
PhaseTensor solution_at(const SolutionFamily& family, double lambda);

struct Membership {
  bool member = false;
  double residual = 0.0;
};

/// Forms h = candidate/rho0 - 1 on rho0's support and measures how far it is
/// from satisfying P_a h = 0 for all a and Pi h = h. Throws if the candidate
/// has mass outside rho0's support.
Membership solution_membership(const PhaseTensor& candidate, const PhaseTensor& rho0,
                               const Chain& chain, const LinkTree& tree,
                               double threshold = 1e-8, double tol = kCompatTolerance);

}  // namespace mf

#endif  // MF_RECONSTRUCT_HPP
