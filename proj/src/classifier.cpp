#include "mf/classifier.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <tuple>

#include "mf/error.hpp"

namespace mf {
namespace {

using Vertices = std::vector<AxisAssignment>;

// Derived-graph properness of a vertex set, on raw codes.
bool proper_codes(const std::vector<std::uint64_t>& codes) {
  std::uint64_t used = 0;
  for (std::size_t i = 0; i < codes.size(); ++i)
    for (std::size_t j = i + 1; j < codes.size(); ++j) {
      const auto diff = codes[i] ^ codes[j];
      if (std::popcount(diff) != 1) continue;
      if (used & diff) return false;
      used |= diff;
    }
  return true;
}

struct BuildState {
  Vertices gamma;
  std::vector<std::pair<AxisAssignment, AxisAssignment>> edges;
  std::vector<Segment> segments;
  std::vector<Vertices> remaining;
};

void absorb_component(BuildState& s, const Vertices& component) {
  for (const auto& l : derive_links(component)) s.edges.emplace_back(l.a, l.b);
  s.gamma.insert(s.gamma.end(), component.begin(), component.end());
}

struct Candidate {
  AxisAssignment from;
  AxisAssignment to;
  std::size_t component;
};

std::vector<Candidate> shortest_candidates(const BuildState& s) {
  int best = -1;
  std::vector<Candidate> out;
  for (std::size_t c = 0; c < s.remaining.size(); ++c)
    for (const auto& u : s.gamma)
      for (const auto& w : s.remaining[c]) {
        const int d = distance(u, w);
        if (best < 0 || d < best) {
          best = d;
          out.clear();
        }
        if (d == best) out.push_back({u, w, c});
      }
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.from, a.to) < std::tie(b.from, b.to);
  });
  return out;
}

// Depth-first over shortest-segment choices. With `checked`, a choice is
// kept only while the accumulated vertex set (including components still to
// be attached) has a proper derived graph.
bool extend(BuildState& s, bool checked) {
  if (s.remaining.empty()) return true;
  for (const auto& cand : shortest_candidates(s)) {
    auto axes = differing_axes(cand.from, cand.to);
    do {
      Segment seg{cand.from, cand.to, axes, {}};
      AxisAssignment v = cand.from;
      for (std::size_t k = 0; k + 1 < axes.size(); ++k) {
        v = v.flipped(axes[k]);
        seg.insertions.push_back(v);
      }
      if (checked) {
        std::vector<std::uint64_t> codes;
        for (const auto& u : s.gamma) codes.push_back(u.code());
        for (const auto& u : seg.insertions) codes.push_back(u.code());
        for (const auto& comp : s.remaining)
          for (const auto& u : comp) codes.push_back(u.code());
        if (!proper_codes(codes)) continue;
      }
      BuildState next = s;
      AxisAssignment prev = cand.from;
      for (const auto& ins : seg.insertions) {
        next.edges.emplace_back(prev, ins);
        next.gamma.push_back(ins);
        prev = ins;
      }
      next.edges.emplace_back(prev, cand.to);
      absorb_component(next, s.remaining[cand.component]);
      next.remaining.erase(next.remaining.begin() + static_cast<std::ptrdiff_t>(cand.component));
      next.segments.push_back(std::move(seg));
      if (extend(next, checked)) {
        s = std::move(next);
        return true;
      }
    } while (std::next_permutation(axes.begin(), axes.end()));
  }
  return false;
}

}  // namespace

std::vector<AxisAssignment> ConnectifiedDiagram::insertions() const {
  Vertices out;
  for (const auto& v : completed.vertices())
    if (!original.contains(v)) out.push_back(v);
  return out;
}

ConnectifiedDiagram connectify(const ChainGraph& graph) {
  if (graph.size() == 0) throw std::invalid_argument("connectify: empty graph");
  auto components = connected_components(graph);
  BuildState init;
  absorb_component(init, components.front());
  init.remaining.assign(components.begin() + 1, components.end());

  BuildState state = init;
  if (!extend(state, true)) {
    state = init;
    extend(state, false);
  }
  std::sort(state.gamma.begin(), state.gamma.end());
  ConnectifiedDiagram d;
  d.original = graph;
  d.tree_vertices = state.gamma;
  d.tree_edges = std::move(state.edges);
  d.segments = std::move(state.segments);
  d.completed = ChainGraph(graph.dimension(), std::move(state.gamma));
  return d;
}

bool is_g_simple(const ChainGraph& graph, const ChainGraph& completed) {
  if (graph.dimension() != completed.dimension())
    throw std::invalid_argument("is_g_simple: dimension mismatch");
  for (const auto& v : graph.vertices())
    if (!completed.contains(v)) throw std::invalid_argument("is_g_simple: graph not contained");
  for (const auto& v : completed.vertices())
    if (!graph.contains(v) && completed.degree(v) != 2) return false;
  return true;
}

std::vector<ChainGraph> enumerate_proper_supergraphs(const ChainGraph& graph) {
  const int n = graph.dimension();
  if (n > kMaxEnumerationDimension)
    throw std::invalid_argument("exhaustive supergraph search limited to N <= 6");
  if (graph.size() == 0) throw std::invalid_argument("empty graph");
  std::vector<ChainGraph> found;
  if (!is_proper(graph) || graph.size() > static_cast<std::size_t>(n) + 1) return found;

  // Insertions of a tree whose leaves are all in G lie on paths between G
  // vertices, and a proper path never flips an axis on which its ends agree.
  std::uint64_t varying = 0;
  for (const auto& v : graph.vertices()) varying |= v.code() ^ graph.vertices().front().code();
  const std::uint64_t base = graph.vertices().front().code() & ~varying;
  std::vector<std::uint64_t> candidates;
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << n); ++c)
    if ((c & ~varying) == base && !graph.contains(AxisAssignment(n, c))) candidates.push_back(c);

  std::vector<std::uint64_t> current;
  for (const auto& v : graph.vertices()) current.push_back(v.code());
  const std::size_t max_size = static_cast<std::size_t>(n) + 1;

  const auto accept = [&]() {
    Vertices vs;
    for (auto c : current) vs.emplace_back(n, c);
    ChainGraph g(n, std::move(vs));
    if (!is_connected(g)) return;
    for (const auto& v : g.vertices())
      if (!graph.contains(v) && g.degree(v) < 2) return;
    found.push_back(std::move(g));
  };
  const auto dfs = [&](auto&& self, std::size_t start) -> void {
    accept();
    if (current.size() == max_size) return;
    for (std::size_t i = start; i < candidates.size(); ++i) {
      current.push_back(candidates[i]);
      if (proper_codes(current)) self(self, i + 1);
      current.pop_back();
    }
  };
  dfs(dfs, 0);
  std::sort(found.begin(), found.end(), [](const ChainGraph& a, const ChainGraph& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.vertices() < b.vertices();
  });
  return found;
}

std::optional<ChainGraph> find_proper_supergraph_exhaustive(const ChainGraph& graph) {
  auto all = enumerate_proper_supergraphs(graph);
  if (all.empty()) return std::nullopt;
  return std::move(all.front());
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::FullyAdmissible: return "fully";
    case Verdict::QuantumAdmissible: return "quantum";
    case Verdict::NonAdmissible: return "non";
  }
  return "non";
}

Classification classify(const ChainGraph& graph) {
  if (graph.size() == 0) throw std::invalid_argument("classify: empty graph");
  Classification c;
  if (!is_proper(graph)) {
    c.verdict = Verdict::NonAdmissible;
    c.quartet = find_critical_quartet(graph);
    c.non_proper = !c.quartet.has_value();
    return c;
  }
  if (is_connected(graph)) {
    c.verdict = Verdict::FullyAdmissible;
    c.diagram = connectify(graph);
    return c;
  }
  if (auto q = find_critical_quartet(graph)) {
    c.verdict = Verdict::NonAdmissible;
    c.quartet = q;
    return c;
  }
  auto d = connectify(graph);
  if (!is_proper(d.completed))
    throw InternalDefect("connectify produced a non-proper G_c for a quartet-free proper graph");
  for (const auto& v : d.insertions())
    if (d.completed.degree(v) != 2) c.non_simple_insertions.push_back(v);
  c.verdict = c.non_simple_insertions.empty() ? Verdict::FullyAdmissible
                                              : Verdict::QuantumAdmissible;
  c.diagram = std::move(d);
  return c;
}

bool evidence_is_valid(const Classification& c, const ChainGraph& graph) {
  if (c.verdict == Verdict::NonAdmissible) {
    if (c.quartet) {
      bool combos[4] = {false, false, false, false};
      for (const auto& v : c.quartet->vertices) {
        if (!graph.contains(v)) return false;
        combos[(v.momentum(c.quartet->first_axis) ? 1 : 0) +
               (v.momentum(c.quartet->second_axis) ? 2 : 0)] = true;
      }
      return combos[0] && combos[1] && combos[2] && combos[3];
    }
    return c.non_proper && !is_proper(graph);
  }
  if (!c.diagram) return false;
  const auto& gc = c.diagram->completed;
  for (const auto& v : graph.vertices())
    if (!gc.contains(v)) return false;
  if (!is_proper(gc) || !is_connected(gc)) return false;
  return is_g_simple(graph, gc) == (c.verdict == Verdict::FullyAdmissible);
}

}  // namespace mf
