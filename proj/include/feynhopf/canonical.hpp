#pragma once

#include <tuple>

#include "feynhopf/graph.hpp"

namespace feynhopf {

// Leg handling during canonicalization.
//   fixed:   external legs are distinguishable labeled points (amplitudes
//            with an external ordering; symmetry factors).
//   classed: legs of equal (color, direction, label) are interchangeable
//            (unlabeled amplitude atoms).
enum class LegMode { fixed, classed };

struct Canonical {
  std::string certificate;
  FeynmanGraph graph;           // relabeled representative
  unsigned long long aut = 1;   // half-edge automorphism count
};

namespace detail {

inline unsigned long long factorial_u(int n) {
  unsigned long long r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Multiplicity factor: permutations of parallel edges, plus the end swap of
// each undirected self-loop.
inline unsigned long long edge_kernel(const FeynmanGraph& g) {
  std::map<std::tuple<std::string, int, int, bool>, int> mult;
  std::map<std::tuple<std::string, int, bool>, int> selfmult;
  for (const auto& e : g.edges) {
    if (e.v1 == e.v2) {
      ++selfmult[{e.color, e.v1, e.directed}];
    } else if (e.directed) {
      ++mult[{e.color, e.v1, e.v2, true}];
    } else {
      ++mult[{e.color, std::min(e.v1, e.v2), std::max(e.v1, e.v2), false}];
    }
  }
  unsigned long long k = 1;
  for (const auto& [key, m] : mult) k *= factorial_u(m);
  for (const auto& [key, m] : selfmult) {
    k *= factorial_u(m);
    if (!std::get<2>(key)) k <<= m;  // undirected self-loop end swaps
  }
  return k;
}

inline std::string leg_class(const ExternalLeg& x) {
  std::string s = x.color;
  s += ',';
  s += std::to_string(x.dir);
  s += ',';
  s += x.tau;
  return s;
}

}  // namespace detail

inline Canonical canonical_form(const TheorySpec& t, FeynmanGraph g,
                                LegMode mode = LegMode::fixed,
                                bool forget_ghost_orientation = false) {
  if (forget_ghost_orientation) {
    for (auto& e : g.edges)
      if (t.color(e.color) && t.color(e.color)->kind == Kind::ghost) e.directed = false;
    for (auto& x : g.externals)
      if (t.color(x.color) && t.color(x.color)->kind == Kind::ghost) x.dir = 0;
  }

  Canonical out;
  if (g.vertices.empty()) {
    if (g.is_bare_line()) {
      auto a = g.externals[0], b = g.externals[1];
      if (mode == LegMode::classed) {
        auto ka = detail::leg_class(a), kb = detail::leg_class(b);
        if (kb < ka) std::swap(a, b);
        g.externals = {a, b};
      }
      out.certificate = "B|" + detail::leg_class(g.externals[0]) + "|" +
                        detail::leg_class(g.externals[1]);
      out.graph = g;
      out.aut = 1;
      if (mode == LegMode::classed &&
          detail::leg_class(g.externals[0]) == detail::leg_class(g.externals[1]))
        out.aut = 2;
      return out;
    }
    out.certificate = "EMPTY";
    out.graph = g;
    out.aut = 1;
    return out;
  }

  const int nv = g.n_vertices();

  // iterated refinement of a vertex coloring; colors are compacted to rank
  // ids after each round (ranks assigned by sorted order, so the partition
  // sequence is independent of the input labeling)
  std::vector<std::string> color(nv);
  for (int v = 0; v < nv; ++v) color[v] = "T:" + g.vertices[v];
  if (mode == LegMode::fixed) {
    for (std::size_t i = 0; i < g.externals.size(); ++i)
      color[g.externals[i].vertex] += "|X" + std::to_string(i);
  } else {
    std::vector<std::vector<std::string>> toks(nv);
    for (const auto& x : g.externals) toks[x.vertex].push_back(detail::leg_class(x));
    for (int v = 0; v < nv; ++v) {
      std::sort(toks[v].begin(), toks[v].end());
      for (const auto& s : toks[v]) color[v] += "|Xc:" + s;
    }
  }

  auto compact = [&]() {
    std::vector<std::string> uniq = color;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    for (int v = 0; v < nv; ++v) {
      auto r = std::lower_bound(uniq.begin(), uniq.end(), color[v]) - uniq.begin();
      color[v] = "C" + std::to_string(r);
    }
    return static_cast<int>(uniq.size());
  };
  int nclasses = compact();
  while (true) {
    std::vector<std::string> next(nv);
    for (int v = 0; v < nv; ++v) {
      std::vector<std::string> toks;
      for (const auto& e : g.edges) {
        if (e.v1 == e.v2) {
          if (e.v1 == v)
            toks.push_back("S," + e.color + (e.directed ? ",d" : ",u"));
          continue;
        }
        if (e.v1 == v)
          toks.push_back("E," + e.color + (e.directed ? ",o," : ",u,") + color[e.v2]);
        else if (e.v2 == v)
          toks.push_back("E," + e.color + (e.directed ? ",i," : ",u,") + color[e.v1]);
      }
      std::sort(toks.begin(), toks.end());
      next[v] = color[v];
      for (const auto& s : toks) next[v] += "#" + s;
    }
    color = std::move(next);
    int nc = compact();
    if (nc == nclasses) break;  // splits only, so equal count means stable
    nclasses = nc;
  }

  // order the classes by color string, enumerate class-respecting orderings
  std::vector<int> order(nv);
  for (int v = 0; v < nv; ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return color[a] < color[b] || (color[a] == color[b] && a < b);
  });
  std::vector<std::vector<int>> classes;
  for (int idx = 0; idx < nv; ++idx) {
    if (idx == 0 || color[order[idx]] != color[order[idx - 1]]) classes.push_back({});
    classes.back().push_back(order[idx]);
  }

  std::vector<int> newidx(nv, -1);
  std::vector<bool> used(nv, false);
  std::string best;
  unsigned long long best_count = 0;
  FeynmanGraph best_graph;

  auto build_cert = [&]() {
    std::string cert = "V|";
    std::vector<int> inv(nv);
    for (int v = 0; v < nv; ++v) inv[newidx[v]] = v;
    for (int p = 0; p < nv; ++p) cert += g.vertices[inv[p]] + ";";
    std::vector<std::string> etoks;
    for (const auto& e : g.edges) {
      int a = newidx[e.v1], b = newidx[e.v2];
      if (e.directed)
        etoks.push_back("d," + e.color + "," + std::to_string(a) + "," + std::to_string(b));
      else
        etoks.push_back("u," + e.color + "," + std::to_string(std::min(a, b)) + "," +
                        std::to_string(std::max(a, b)));
    }
    std::sort(etoks.begin(), etoks.end());
    cert += "E|";
    for (const auto& s : etoks) cert += s + ";";
    cert += "X|";
    if (mode == LegMode::fixed) {
      for (const auto& x : g.externals)
        cert += detail::leg_class(x) + "@" + std::to_string(newidx[x.vertex]) + ";";
    } else {
      std::map<std::string, std::vector<int>> cls;
      for (const auto& x : g.externals) cls[detail::leg_class(x)].push_back(newidx[x.vertex]);
      for (auto& [k, vs] : cls) {
        std::sort(vs.begin(), vs.end());
        cert += k + "@";
        for (int v : vs) cert += std::to_string(v) + ",";
        cert += ";";
      }
    }
    return cert;
  };

  auto rebuild = [&]() {
    FeynmanGraph h;
    std::vector<int> inv(nv);
    for (int v = 0; v < nv; ++v) inv[newidx[v]] = v;
    for (int p = 0; p < nv; ++p) h.vertices.push_back(g.vertices[inv[p]]);
    for (const auto& e : g.edges) {
      Edge f = e;
      f.v1 = newidx[e.v1];
      f.v2 = newidx[e.v2];
      if (!f.directed && f.v1 > f.v2) std::swap(f.v1, f.v2);
      h.edges.push_back(f);
    }
    std::sort(h.edges.begin(), h.edges.end());
    h.externals = g.externals;
    for (auto& x : h.externals) x.vertex = newidx[x.vertex];
    if (mode == LegMode::classed)
      std::sort(h.externals.begin(), h.externals.end(),
                [](const ExternalLeg& a, const ExternalLeg& b) {
                  return std::tie(a.color, a.dir, a.tau, a.vertex) <
                         std::tie(b.color, b.dir, b.tau, b.vertex);
                });
    return h;
  };

  std::function<void(std::size_t, int)> rec = [&](std::size_t ci, int pos) {
    if (ci == classes.size()) {
      std::string cert = build_cert();
      if (best.empty() || cert < best) {
        best = cert;
        best_count = 1;
        best_graph = rebuild();
      } else if (cert == best) {
        ++best_count;
      }
      return;
    }
    int filled = 0;
    for (int v : classes[ci])
      if (used[v]) ++filled;
    if (filled == static_cast<int>(classes[ci].size())) {
      rec(ci + 1, pos);
      return;
    }
    for (int v : classes[ci]) {
      if (used[v]) continue;
      used[v] = true;
      newidx[v] = pos;
      rec(ci, pos + 1);
      used[v] = false;
      newidx[v] = -1;
    }
  };
  rec(0, 0);

  out.certificate = best;
  out.graph = best_graph;
  out.aut = best_count * detail::edge_kernel(g);
  if (mode == LegMode::classed) {
    std::map<std::pair<int, std::string>, int> n;
    for (const auto& x : g.externals) ++n[{x.vertex, detail::leg_class(x)}];
    for (const auto& [k, m] : n) out.aut *= detail::factorial_u(m);
  }
  return out;
}

inline std::string canonical_key(const TheorySpec& t, const FeynmanGraph& g,
                                 LegMode mode = LegMode::fixed,
                                 bool forget_ghost_orientation = false) {
  return canonical_form(t, g, mode, forget_ghost_orientation).certificate;
}

// Symmetry factor of a labeled amplitude graph.
inline unsigned long long sym_factor(const TheorySpec& t, const FeynmanGraph& g) {
  return canonical_form(t, g, LegMode::fixed).aut;
}

}  // namespace feynhopf
