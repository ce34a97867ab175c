#pragma once

#include <optional>

#include "feynhopf/canonical.hpp"

namespace feynhopf {

inline int omega(const TheorySpec& t, const FeynmanGraph& g) { return superficial_degree(t, g); }

namespace detail {

// one hanging incidence of a subgraph component: a parent external leg or one
// end of an internal edge left outside the contracted subset
struct Hang {
  bool is_ext;
  int index;
  int end = 0;  // edge incidences: 0 = v1, 1 = v2
};

inline std::string hang_color(const FeynmanGraph& g, const Hang& h) {
  return h.is_ext ? g.externals[h.index].color : g.edges[h.index].color;
}

// slot direction the incidence occupies at its vertex: +1 in, -1 out
inline int hang_dir(const FeynmanGraph& g, const Hang& h) {
  if (h.is_ext) return g.externals[h.index].dir;
  const Edge& e = g.edges[h.index];
  if (!e.directed) return 0;
  return h.end == 1 ? +1 : -1;
}

inline int hang_vertex(const FeynmanGraph& g, const Hang& h) {
  if (h.is_ext) return g.externals[h.index].vertex;
  const Edge& e = g.edges[h.index];
  return h.end == 1 ? e.v2 : e.v1;
}

struct Pieces {
  std::vector<int> comp_of;                    // vertex -> component id, -1 outside
  std::vector<std::vector<int>> comp_vertices; // sorted per component
  std::vector<std::vector<Hang>> hangs;        // per component: externals, then edge ends
};

inline Pieces split_subset(const FeynmanGraph& g, const std::vector<int>& sub) {
  int n = static_cast<int>(g.vertices.size());
  std::vector<int> parent(n);
  for (int v = 0; v < n; ++v) parent[v] = v;
  std::function<int(int)> find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::vector<bool> in_sub(g.edges.size(), false);
  std::vector<bool> touched(n, false);
  for (int ei : sub) {
    in_sub[ei] = true;
    const Edge& e = g.edges[ei];
    touched[e.v1] = touched[e.v2] = true;
    parent[find(e.v1)] = find(e.v2);
  }
  Pieces p;
  p.comp_of.assign(n, -1);
  std::map<int, int> id;
  for (int v = 0; v < n; ++v) {
    if (!touched[v]) continue;
    int r = find(v);
    auto [it, fresh] = id.emplace(r, static_cast<int>(p.comp_vertices.size()));
    if (fresh) p.comp_vertices.emplace_back();
    p.comp_of[v] = it->second;
    p.comp_vertices[it->second].push_back(v);
  }
  p.hangs.resize(p.comp_vertices.size());
  for (int x = 0; x < static_cast<int>(g.externals.size()); ++x) {
    int c = g.externals[x].vertex >= 0 ? p.comp_of[g.externals[x].vertex] : -1;
    if (c >= 0) p.hangs[c].push_back({true, x});
  }
  for (int ei = 0; ei < static_cast<int>(g.edges.size()); ++ei) {
    if (in_sub[ei]) continue;
    const Edge& e = g.edges[ei];
    if (p.comp_of[e.v1] >= 0) p.hangs[p.comp_of[e.v1]].push_back({false, ei, 0});
    if (p.comp_of[e.v2] >= 0) p.hangs[p.comp_of[e.v2]].push_back({false, ei, 1});
  }
  return p;
}

}  // namespace detail

// Components of an internal-edge subset, cut with full corollas: every leg of
// a member vertex not inside the subset becomes an external leg.
inline std::vector<FeynmanGraph> subgraph_components(const FeynmanGraph& g,
                                                     const std::vector<int>& sub) {
  auto p = detail::split_subset(g, sub);
  std::vector<FeynmanGraph> out;
  for (std::size_t c = 0; c < p.comp_vertices.size(); ++c) {
    FeynmanGraph part;
    std::map<int, int> remap;
    for (int v : p.comp_vertices[c]) {
      remap[v] = static_cast<int>(part.vertices.size());
      part.vertices.push_back(g.vertices[v]);
    }
    for (int ei : sub) {
      const Edge& e = g.edges[ei];
      if (p.comp_of[e.v1] != static_cast<int>(c)) continue;
      part.edges.push_back({e.color, remap[e.v1], remap[e.v2], e.directed});
    }
    for (const auto& h : p.hangs[c]) {
      char tau = h.is_ext ? g.externals[h.index].tau : 'T';
      part.externals.push_back({detail::hang_color(g, h), remap[detail::hang_vertex(g, h)],
                                detail::hang_dir(g, h), tau});
    }
    out.push_back(std::move(part));
  }
  return out;
}

// Contract the components of an edge subset. Components with two hanging legs
// fuse into a propagator line; larger ones collapse onto the vertex type with
// the matching legs. Returns nothing when a component has no matching vertex,
// a fusion is color or orientation inconsistent, or no vertex remains.
inline std::optional<FeynmanGraph> contract_subgraph(const TheorySpec& t, const FeynmanGraph& g,
                                                     const std::vector<int>& sub) {
  if (sub.empty()) return g;
  auto p = detail::split_subset(g, sub);
  int ncomp = static_cast<int>(p.comp_vertices.size());

  // classify components; wires join their two hanging incidences
  std::vector<int> comp_new(ncomp, -1);
  std::vector<bool> is_wire(ncomp, false);
  FeynmanGraph out;
  std::map<int, int> remap;
  for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v)
    if (p.comp_of[v] < 0) {
      remap[v] = static_cast<int>(out.vertices.size());
      out.vertices.push_back(g.vertices[v]);
    }
  for (int c = 0; c < ncomp; ++c) {
    const auto& hs = p.hangs[c];
    if (hs.size() < 2) return std::nullopt;
    if (hs.size() == 2) {
      const auto* col = t.color(detail::hang_color(g, hs[0]));
      if (detail::hang_color(g, hs[0]) != detail::hang_color(g, hs[1])) return std::nullopt;
      if (col && col->oriented &&
          detail::hang_dir(g, hs[0]) + detail::hang_dir(g, hs[1]) != 0)
        return std::nullopt;
      is_wire[c] = true;
      continue;
    }
    std::vector<LegSpec> legs;
    for (const auto& h : hs) legs.push_back({detail::hang_color(g, h), detail::hang_dir(g, h)});
    std::sort(legs.begin(), legs.end());
    const VertexType* vt = t.vertex_by_legs(legs);
    if (!vt) return std::nullopt;
    comp_new[c] = static_cast<int>(out.vertices.size());
    out.vertices.push_back(vt->name);
  }
  if (out.vertices.empty()) return std::nullopt;

  // walk a hanging incidence through wire components until it lands on a kept
  // vertex, a collapsed component, or a parent external
  std::vector<bool> in_sub(g.edges.size(), false);
  for (int ei : sub) in_sub[ei] = true;

  struct End {
    int vertex = -1;  // resolved attachment
    int ext = -1;     // parent external index when the chain ends outside
  };
  int guard = static_cast<int>(g.edges.size() + g.externals.size()) + 1;
  std::vector<bool> consumed(g.edges.size(), false);
  auto resolve = [&](detail::Hang h) -> std::optional<End> {
    for (int steps = 0; steps <= guard; ++steps) {
      int v = detail::hang_vertex(g, h);
      int c = v >= 0 ? p.comp_of[v] : -1;
      if (c < 0) return End{remap.at(v), -1};
      if (!is_wire[c]) return End{comp_new[c], -1};
      // cross the wire: continue from its other hanging incidence
      const auto& hs = p.hangs[c];
      detail::Hang other = (hs[0].is_ext == h.is_ext && hs[0].index == h.index &&
                            hs[0].end == h.end)
                               ? hs[1]
                               : hs[0];
      if (other.is_ext) return End{-1, other.index};
      consumed[other.index] = true;  // chain interior, emitted with the chain
      h = {false, other.index, 1 - other.end};
    }
    return std::nullopt;  // closed circle of wires
  };

  std::vector<std::optional<End>> ext_target(g.externals.size());
  std::vector<bool> ext_done(g.externals.size(), false);

  for (int ei = 0; ei < static_cast<int>(g.edges.size()); ++ei) {
    if (in_sub[ei] || consumed[ei]) continue;
    const Edge& e = g.edges[ei];
    // an edge fully absorbed between wire crossings is walked from outside
    int c1 = p.comp_of[e.v1], c2 = p.comp_of[e.v2];
    bool w1 = c1 >= 0 && is_wire[c1], w2 = c2 >= 0 && is_wire[c2];
    if (w1 && w2) continue;  // interior of a chain, reached from its ends
    consumed[ei] = true;
    auto a = w1 ? resolve({false, ei, 0}) : std::optional<End>(End{
                  c1 < 0 ? remap.at(e.v1) : comp_new[c1], -1});
    auto b = w2 ? resolve({false, ei, 1}) : std::optional<End>(End{
                  c2 < 0 ? remap.at(e.v2) : comp_new[c2], -1});
    if (!a || !b) return std::nullopt;
    if (a->ext >= 0 && b->ext >= 0) return std::nullopt;
    if (a->ext >= 0 || b->ext >= 0) {
      // the chain ends in a parent external: reattach it at the far vertex
      int x = a->ext >= 0 ? a->ext : b->ext;
      int vat = a->ext >= 0 ? b->vertex : a->vertex;
      ext_target[x] = End{vat, -1};
      ext_done[x] = true;
      continue;
    }
    Edge ne;
    ne.color = e.color;
    ne.directed = e.directed;
    if (e.directed) {
      ne.v1 = a->vertex;  // walk preserves flow: v1 end stays the tail
      ne.v2 = b->vertex;
    } else {
      ne.v1 = std::min(a->vertex, b->vertex);
      ne.v2 = std::max(a->vertex, b->vertex);
    }
    out.edges.push_back(ne);
  }

  for (int x = 0; x < static_cast<int>(g.externals.size()); ++x) {
    if (ext_done[x]) continue;
    int v = g.externals[x].vertex;
    int c = v >= 0 ? p.comp_of[v] : -1;
    if (c < 0) {
      ext_target[x] = End{v >= 0 ? remap.at(v) : -1, -1};
    } else if (!is_wire[c]) {
      ext_target[x] = End{comp_new[c], -1};
    } else {
      const auto& hs = p.hangs[c];
      detail::Hang other =
          (hs[0].is_ext && hs[0].index == x) ? hs[1] : hs[0];
      if (other.is_ext) return std::nullopt;  // two externals fused directly
      consumed[other.index] = true;
      auto r = resolve({false, other.index, 1 - other.end});
      if (!r || r->ext >= 0) return std::nullopt;
      ext_target[x] = End{r->vertex, -1};
    }
  }
  for (int x = 0; x < static_cast<int>(g.externals.size()); ++x) {
    const auto& src = g.externals[x];
    out.externals.push_back({src.color, ext_target[x]->vertex, src.dir, src.tau});
  }
  return out;
}

// Membership of one proper edge subset in the divergent-subgraph family:
// every component one-particle irreducible with nonnegative superficial
// degree, every component contractible, and the contraction keeps a vertex.
inline bool subset_admissible(const TheorySpec& t, const FeynmanGraph& g,
                              const std::vector<int>& sub) {
  if (sub.empty()) return false;
  for (const auto& part : subgraph_components(g, sub)) {
    if (!is_1pi(part)) return false;
    if (omega(t, part) < 0) return false;
  }
  return contract_subgraph(t, g, sub).has_value();
}

// Proper members of the divergent-subgraph family of a 1PI graph. The empty
// set (identity on the left) and the full contraction (identity on the right,
// admitted when the graph itself diverges) are handled by the coproduct.
inline std::vector<std::vector<int>> divergent_subsets(const TheorySpec& t,
                                                       const FeynmanGraph& g) {
  std::vector<std::vector<int>> out;
  int m = static_cast<int>(g.edges.size());
  if (m > 24) throw GraphError("divergent_subsets: graph too large");
  for (unsigned mask = 1; mask + 1 < (1u << m); ++mask) {
    std::vector<int> sub;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) sub.push_back(i);
    if (subset_admissible(t, g, sub)) out.push_back(std::move(sub));
  }
  return out;
}

inline bool is_cograph_divergent(const TheorySpec& t, const FeynmanGraph& g,
                                 const std::vector<int>& sub) {
  auto co = contract_subgraph(t, g, sub);
  return co && !co->is_bare_line() && omega(t, *co) >= 0;
}

}  // namespace feynhopf
