#include "mf/chain_graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mf {

std::vector<Link> derive_links(std::span<const AxisAssignment> vertices) {
  std::vector<AxisAssignment> sorted(vertices.begin(), vertices.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<Link> links;
  for (std::size_t i = 0; i < sorted.size(); ++i)
    for (std::size_t j = i + 1; j < sorted.size(); ++j)
      if (auto axis = contiguity_index(sorted[i], sorted[j]))
        links.push_back({sorted[i], sorted[j], *axis});
  return links;
}

ChainGraph::ChainGraph(int dimension, std::vector<AxisAssignment> vertices)
    : dimension_(dimension), vertices_(std::move(vertices)) {
  if (dimension < 1 || dimension > AxisAssignment::kMaxDimension)
    throw std::invalid_argument("graph dimension must be in 1..63");
  for (const auto& v : vertices_)
    if (v.dimension() != dimension) throw std::invalid_argument("vertex dimension mismatch");
  std::sort(vertices_.begin(), vertices_.end());
  if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
    throw std::invalid_argument("duplicate vertex in chain graph");
  links_ = derive_links(vertices_);
}

ChainGraph ChainGraph::parse(int dimension, std::span<const std::string> type_strings) {
  std::vector<AxisAssignment> vertices;
  for (const auto& s : type_strings) vertices.push_back(parse_type(s, dimension));
  return {dimension, std::move(vertices)};
}

bool ChainGraph::contains(const AxisAssignment& v) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

std::size_t ChainGraph::index_of(const AxisAssignment& v) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end() || *it != v) throw std::out_of_range("vertex not in graph");
  return static_cast<std::size_t>(it - vertices_.begin());
}

int ChainGraph::degree(const AxisAssignment& v) const {
  return static_cast<int>(std::count_if(links_.begin(), links_.end(),
                                        [&](const Link& l) { return l.a == v || l.b == v; }));
}

std::vector<AxisAssignment> ChainGraph::neighbours(const AxisAssignment& v) const {
  std::vector<AxisAssignment> out;
  for (const auto& l : links_) {
    if (l.a == v) out.push_back(l.b);
    if (l.b == v) out.push_back(l.a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_proper(const ChainGraph& graph) {
  std::vector<int> used(graph.dimension(), 0);
  for (const auto& l : graph.links())
    if (used[l.axis]++) return false;
  return true;
}

std::vector<std::vector<AxisAssignment>> connected_components(const ChainGraph& graph) {
  const auto& vs = graph.vertices();
  std::vector<std::size_t> parent(vs.size());
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& l : graph.links()) {
    auto ra = find(graph.index_of(l.a));
    auto rb = find(graph.index_of(l.b));
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  // Roots are the smallest index of each component, so iterating in vertex
  // order yields components ordered by their smallest vertex.
  std::vector<std::vector<AxisAssignment>> components;
  std::vector<std::size_t> slot(vs.size(), vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    auto r = find(i);
    if (slot[r] == vs.size()) {
      slot[r] = components.size();
      components.emplace_back();
    }
    components[slot[r]].push_back(vs[i]);
  }
  return components;
}

bool is_connected(const ChainGraph& graph) {
  return graph.size() > 0 && connected_components(graph).size() == 1;
}

std::optional<CriticalQuartet> find_critical_quartet(const ChainGraph& graph) {
  const int n = graph.dimension();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      std::array<std::optional<AxisAssignment>, 4> pick;
      for (const auto& v : graph.vertices()) {  // ascending, so first hit is smallest
        const int combo = (v.momentum(i) ? 1 : 0) + (v.momentum(j) ? 2 : 0);
        if (!pick[combo]) pick[combo] = v;
      }
      if (pick[0] && pick[1] && pick[2] && pick[3]) {
        CriticalQuartet q{{*pick[0], *pick[1], *pick[2], *pick[3]}, i, j};
        std::sort(q.vertices.begin(), q.vertices.end());
        return q;
      }
    }
  }
  return std::nullopt;
}

std::vector<std::string> type_strings(std::span<const AxisAssignment> vertices) {
  std::vector<std::string> out;
  out.reserve(vertices.size());
  for (const auto& v : vertices) out.push_back(v.type_string());
  return out;
}

}  // namespace mf
