#ifndef MF_TESTS_SUPPORT_HPP
#define MF_TESTS_SUPPORT_HPP

// Hand-rolled generators and brute-force oracles shared by the test binaries.

#include <algorithm>
#include <map>
#include <queue>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mf/chain_graph.hpp"
#include "mf/grid.hpp"
#include "mf/reconstruct.hpp"

namespace mf::test {

using Rng = std::mt19937_64;

inline ChainGraph graph_of(int n, std::initializer_list<const char*> types) {
  std::vector<AxisAssignment> vs;
  for (const char* t : types) vs.push_back(parse_type(t, n));
  return ChainGraph(n, std::move(vs));
}

// Type sets used throughout: five-vertex tree (N=4), a disconnected set with
// a critical quartet, a disconnected set joined by one simple insertion, and
// the three-axis set whose only completion has a three-legged insertion.
inline ChainGraph five_vertex_tree() { return graph_of(4, {"1234", "1'234", "1'2'34", "1'23'4'", "1'23'4"}); }
inline ChainGraph quartet_set() { return graph_of(4, {"1234", "1'234", "1'2'34", "12'3'4'"}); }
inline ChainGraph composite_set() { return graph_of(4, {"1234", "1'234", "1'2'34", "1'23'4'"}); }
inline ChainGraph quantum_only_set() { return graph_of(3, {"1'23", "12'3", "123'"}); }

inline AxisAssignment random_vertex(int n, Rng& rng) {
  return AxisAssignment(n, rng() & ((std::uint64_t{1} << n) - 1));
}

// Distinct random vertices.
inline ChainGraph random_graph(int n, std::size_t count, Rng& rng) {
  std::set<std::uint64_t> codes;
  count = std::min<std::size_t>(count, std::size_t{1} << n);
  while (codes.size() < count) codes.insert(random_vertex(n, rng).code());
  std::vector<AxisAssignment> vs;
  for (auto c : codes) vs.emplace_back(n, c);
  return ChainGraph(n, std::move(vs));
}

// Random proper tree with `count` <= n+1 vertices: grow by flipping unused axes.
inline ChainGraph random_proper_tree(int n, std::size_t count, Rng& rng) {
  std::vector<AxisAssignment> vs{random_vertex(n, rng)};
  std::vector<int> axes(static_cast<std::size_t>(n));
  std::iota(axes.begin(), axes.end(), 0);
  std::shuffle(axes.begin(), axes.end(), rng);
  for (std::size_t k = 1; k < count && k <= static_cast<std::size_t>(n); ++k) {
    const auto& from = vs[rng() % vs.size()];
    vs.push_back(from.flipped(axes[k - 1]));
  }
  return ChainGraph(n, std::move(vs));
}

// Quartet existence by trying every 4-subset and every axis pair.
inline bool brute_force_has_quartet(const ChainGraph& g) {
  const auto& v = g.vertices();
  const std::size_t m = v.size();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      for (std::size_t c = b + 1; c < m; ++c)
        for (std::size_t d = c + 1; d < m; ++d)
          for (int i = 0; i < g.dimension(); ++i)
            for (int j = i + 1; j < g.dimension(); ++j) {
              std::set<int> combos;
              for (auto idx : {a, b, c, d}) combos.insert(v[idx].momentum(i) * 2 + v[idx].momentum(j));
              if (combos.size() == 4) return true;
            }
  return false;
}

// Codes of the 2^n * n! images of a vertex set under axis permutations and
// per-axis q/p exchanges; returns the smallest sorted code list.
inline std::vector<std::uint64_t> canonical_form(int n, const std::vector<std::uint64_t>& codes) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::uint64_t> best;
  do {
    for (std::uint64_t flip = 0; flip < (std::uint64_t{1} << n); ++flip) {
      std::vector<std::uint64_t> image;
      for (auto c : codes) {
        std::uint64_t out = 0;
        for (int i = 0; i < n; ++i)
          if ((c >> i) & 1u) out |= std::uint64_t{1} << perm[static_cast<std::size_t>(i)];
        image.push_back(out ^ flip);
      }
      std::sort(image.begin(), image.end());
      if (best.empty() || image < best) best = image;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Every connected proper tree on the n-cube, one representative per
// symmetry class.
inline std::vector<ChainGraph> proper_trees_up_to_symmetry(int n) {
  std::set<std::vector<std::uint64_t>> seen;
  std::vector<ChainGraph> out;
  const std::uint64_t total = std::uint64_t{1} << n;
  const std::size_t max_size = static_cast<std::size_t>(n) + 1;
  std::vector<std::uint64_t> current;
  auto dfs = [&](auto&& self, std::uint64_t start) -> void {
    if (!current.empty()) {
      std::vector<AxisAssignment> vs;
      for (auto c : current) vs.emplace_back(n, c);
      ChainGraph g(n, vs);
      if (is_proper(g) && is_connected(g)) {
        auto key = canonical_form(n, current);
        if (seen.insert(key).second) out.push_back(g);
      }
      if (!is_proper(g)) return;
    }
    if (current.size() == max_size) return;
    for (std::uint64_t c = start; c < total; ++c) {
      current.push_back(c);
      self(self, c + 1);
      current.pop_back();
    }
  };
  dfs(dfs, 0);
  return out;
}

// Marginal by explicit index arithmetic over every phase cell, independent
// of the tensor helpers.
inline std::vector<double> nested_marginal(const PhaseTensor& rho, const GridSpec& grid,
                                           const AxisAssignment& type) {
  const int n = grid.dimension();
  std::vector<Index> dims = grid.phase_dims();
  std::vector<Index> out_dims;
  for (int i = 0; i < n; ++i) out_dims.push_back(type.momentum(i) ? dims[static_cast<std::size_t>(n + i)] : dims[static_cast<std::size_t>(i)]);
  Index out_size = 1;
  for (auto d : out_dims) out_size *= d;
  std::vector<double> out(static_cast<std::size_t>(out_size), 0.0);
  for (Index cell = 0; cell < rho.size(); ++cell) {
    std::vector<Index> idx(dims.size());
    Index rem = cell;
    for (std::size_t k = dims.size(); k-- > 0;) {
      idx[k] = rem % dims[k];
      rem /= dims[k];
    }
    Index o = 0;
    for (int i = 0; i < n; ++i) {
      const Index x = type.momentum(i) ? idx[static_cast<std::size_t>(n + i)] : idx[static_cast<std::size_t>(i)];
      o = o * out_dims[static_cast<std::size_t>(i)] + x;
    }
    out[static_cast<std::size_t>(o)] += rho[cell];
  }
  return out;
}

inline PhaseTensor random_bounded(const GridSpec& grid, double lo, double hi, Rng& rng) {
  PhaseTensor f(grid.phase_vars(), grid.phase_dims());
  for (Index i = 0; i < f.size(); ++i) f[i] = lo + (hi - lo) * unit_interval(rng());
  return f;
}

// Vertices on the tree path from a to b, both ends included.
inline std::vector<AxisAssignment> tree_path(const LinkTree& t, const AxisAssignment& a, const AxisAssignment& b) {
  std::map<AxisAssignment, AxisAssignment> parent;
  std::queue<AxisAssignment> q;
  q.push(a);
  parent[a] = a;
  while (!q.empty()) {
    auto v = q.front();
    q.pop();
    for (int li : t.legs(v)) {
      const auto& l = t.links[static_cast<std::size_t>(li)];
      const auto w = l.a == v ? l.b : l.a;
      if (parent.count(w)) continue;
      parent[w] = v;
      q.push(w);
    }
  }
  std::vector<AxisAssignment> path{b};
  while (path.back() != a) path.push_back(parent.at(path.back()));
  return path;
}

inline bool adjacent(const LinkTree& t, const AxisAssignment& a, const AxisAssignment& b) {
  for (const auto& l : t.links)
    if ((l.a == a && l.b == b) || (l.a == b && l.b == a)) return true;
  return false;
}

inline double sup_diff(const Tensor<double>& a, const Tensor<double>& b) {
  return (a.values() - b.values()).cwiseAbs().maxCoeff();
}

}  // namespace mf::test

#endif  // MF_TESTS_SUPPORT_HPP
