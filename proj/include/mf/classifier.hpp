#ifndef MF_CLASSIFIER_HPP
#define MF_CLASSIFIER_HPP

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "mf/chain_graph.hpp"

namespace mf {

/// Linear chain of inserted vertices joining `from` (already connected) to
/// `to` (a vertex of the newly attached component). `axes[k]` is the axis
/// flipped on the k-th link; insertions are the intermediate vertices.
struct Segment {
  AxisAssignment from;
  AxisAssignment to;
  std::vector<int> axes;
  std::vector<AxisAssignment> insertions;

  int length() const { return static_cast<int>(axes.size()); }
};

/// Result of connectifying a proper graph: the spanning tree diagram
/// (component trees plus segments) and its completion G_c.
struct ConnectifiedDiagram {
  ChainGraph original;
  std::vector<AxisAssignment> tree_vertices;
  std::vector<std::pair<AxisAssignment, AxisAssignment>> tree_edges;
  std::vector<Segment> segments;
  ChainGraph completed;

  std::vector<AxisAssignment> insertions() const;
};

/// Recursive connectification by shortest segments. Among the minimal
/// choices (attachment pair, order of flips along the segment) the first one,
/// in lexicographic order, that admits a proper completion is taken; if none
/// does, the all-ascending greedy construction is returned.
/// Precondition: `graph` is proper and nonempty.
ConnectifiedDiagram connectify(const ChainGraph& graph);

/// True iff every vertex of `completed` missing from `graph` has exactly two
/// derived links. Throws if `graph` is not contained in `completed`.
bool is_g_simple(const ChainGraph& graph, const ChainGraph& completed);

/// Exhaustive enumeration guard for the brute-force supergraph search.
inline constexpr int kMaxEnumerationDimension = 6;

/// Every connected proper supergraph of `graph` with at most N+1 vertices in
/// which each insertion has at least two legs, ordered by (size, vertices).
std::vector<ChainGraph> enumerate_proper_supergraphs(const ChainGraph& graph);

/// First element of enumerate_proper_supergraphs, if any.
std::optional<ChainGraph> find_proper_supergraph_exhaustive(const ChainGraph& graph);

enum class Verdict { FullyAdmissible, QuantumAdmissible, NonAdmissible };

std::string_view verdict_name(Verdict v);  // "fully" | "quantum" | "non"

struct Classification {
  Verdict verdict = Verdict::NonAdmissible;
  std::optional<CriticalQuartet> quartet;  // NonAdmissible evidence
  bool non_proper = false;
  std::optional<ConnectifiedDiagram> diagram;  // admissible evidence (G_c)
  std::vector<AxisAssignment> non_simple_insertions;
};

Classification classify(const ChainGraph& graph);

/// Checks that the evidence carried by `c` is consistent with `graph`.
bool evidence_is_valid(const Classification& c, const ChainGraph& graph);

}  // namespace mf

#endif  // MF_CLASSIFIER_HPP
