#ifndef MF_CHAIN_GRAPH_HPP
#define MF_CHAIN_GRAPH_HPP

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mf/assignment.hpp"

namespace mf {

/// Contiguous pair of vertices; `axis` is the single axis on which they differ.
struct Link {
  AxisAssignment a;  // a < b
  AxisAssignment b;
  int axis = 0;

  friend bool operator==(const Link&, const Link&) = default;
};

/// Four vertices realizing all four q/p combinations on axes (first, second).
struct CriticalQuartet {
  std::array<AxisAssignment, 4> vertices;  // canonical order
  int first_axis = 0;
  int second_axis = 0;
};

/// All contiguous pairs among `vertices`, ordered by (a, b).
std::vector<Link> derive_links(std::span<const AxisAssignment> vertices);

/// Vertex set of the N-cube with its derived links. Links are a function of
/// the vertex set and are never supplied independently.
class ChainGraph {
 public:
  ChainGraph() = default;
  ChainGraph(int dimension, std::vector<AxisAssignment> vertices);

  static ChainGraph parse(int dimension, std::span<const std::string> type_strings);

  int dimension() const { return dimension_; }
  const std::vector<AxisAssignment>& vertices() const { return vertices_; }
  const std::vector<Link>& links() const { return links_; }
  std::size_t size() const { return vertices_.size(); }

  bool contains(const AxisAssignment& v) const;
  std::size_t index_of(const AxisAssignment& v) const;
  // Number of derived links incident to v.
  int degree(const AxisAssignment& v) const;
  std::vector<AxisAssignment> neighbours(const AxisAssignment& v) const;

  friend bool operator==(const ChainGraph& a, const ChainGraph& b) {
    return a.dimension_ == b.dimension_ && a.vertices_ == b.vertices_;
  }

 private:
  int dimension_ = 0;
  std::vector<AxisAssignment> vertices_;  // sorted, distinct
  std::vector<Link> links_;
};

bool is_proper(const ChainGraph& graph);
bool is_connected(const ChainGraph& graph);

/// Components in order of their smallest vertex; vertices sorted within each.
std::vector<std::vector<AxisAssignment>> connected_components(const ChainGraph& graph);

std::optional<CriticalQuartet> find_critical_quartet(const ChainGraph& graph);

std::vector<std::string> type_strings(std::span<const AxisAssignment> vertices);

}  // namespace mf

#endif  // MF_CHAIN_GRAPH_HPP
