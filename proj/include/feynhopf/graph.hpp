#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "feynhopf/theory.hpp"

namespace feynhopf {

struct GraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Internal edge. For an oriented color, directed=true means the arrow runs
// v1 -> v2; directed=false on an oriented color marks a forgotten orientation
// (used by the graph complex, where basis classes sum over orientations).
struct Edge {
  std::string color;
  int v1 = 0;
  int v2 = 0;
  bool directed = false;
  auto operator<=>(const Edge&) const = default;
};

// External leg. dir: +1 arrow into the graph, -1 out, 0 unoriented color.
// tau is the transversal/longitudinal marker on gauge legs: 'T', 'L' or 'I'
// (I = unexpanded sum T+L, accepted on input and expanded by consumers).
// vertex = -1 only in the degenerate bare line (a single propagator with no
// vertices, both legs being the two ends of one edge).
struct ExternalLeg {
  std::string color;
  int vertex = 0;
  int dir = 0;
  char tau = 'T';
  auto operator<=>(const ExternalLeg&) const = default;
};

struct FeynmanGraph {
  std::vector<std::string> vertices;  // vertex type names, id = index
  std::vector<Edge> edges;
  std::vector<ExternalLeg> externals;
  auto operator<=>(const FeynmanGraph&) const = default;

  bool is_bare_line() const {
    return vertices.empty() && edges.empty() && externals.size() == 2;
  }
  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int n_legs() const { return static_cast<int>(externals.size()); }
};

inline int graph_loops(const FeynmanGraph& g) {
  if (g.vertices.empty()) return 0;
  // E - V + C over internal structure
  std::vector<int> parent(g.vertices.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int comps = static_cast<int>(g.vertices.size());
  for (const auto& e : g.edges) {
    int a = find(e.v1), b = find(e.v2);
    if (a != b) {
      parent[a] = b;
      --comps;
    }
  }
  return g.n_edges() - g.n_vertices() + comps;
}

inline bool graph_connected(const FeynmanGraph& g) {
  if (g.is_bare_line()) return true;
  if (g.vertices.empty()) return false;
  std::vector<std::vector<int>> adj(g.vertices.size());
  for (const auto& e : g.edges) {
    adj[e.v1].push_back(e.v2);
    adj[e.v2].push_back(e.v1);
  }
  std::vector<bool> seen(g.vertices.size(), false);
  std::vector<int> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

namespace detail {
// Connectivity after deleting edge index skip (self-loops never disconnect).
inline bool connected_without(const FeynmanGraph& g, int skip) {
  std::vector<std::vector<int>> adj(g.vertices.size());
  for (int i = 0; i < g.n_edges(); ++i) {
    if (i == skip) continue;
    adj[g.edges[i].v1].push_back(g.edges[i].v2);
    adj[g.edges[i].v2].push_back(g.edges[i].v1);
  }
  std::vector<bool> seen(g.vertices.size(), false);
  std::vector<int> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}
}  // namespace detail

inline std::vector<int> bridge_edges(const FeynmanGraph& g) {
  std::vector<int> out;
  if (g.vertices.empty()) return out;
  for (int i = 0; i < g.n_edges(); ++i) {
    if (g.edges[i].v1 == g.edges[i].v2) continue;
    if (!detail::connected_without(g, i)) out.push_back(i);
  }
  return out;
}

// One-particle irreducible: connected and no internal edge is a bridge.
// The bare line has no internal edge, so the condition holds vacuously.
inline bool is_1pi(const FeynmanGraph& g) {
  if (g.is_bare_line()) return true;
  return graph_connected(g) && bridge_edges(g).empty();
}

// A pendant (tadpole stick) is a bridge with all external legs on one side.
// Series of graphs use the pendant-free restriction.
inline bool is_pendant_free(const FeynmanGraph& g) {
  if (g.is_bare_line()) return true;
  if (!graph_connected(g)) return false;
  for (int b : bridge_edges(g)) {
    std::vector<std::vector<int>> adj(g.vertices.size());
    for (int i = 0; i < g.n_edges(); ++i) {
      if (i == b) continue;
      adj[g.edges[i].v1].push_back(g.edges[i].v2);
      adj[g.edges[i].v2].push_back(g.edges[i].v1);
    }
    std::vector<bool> side(g.vertices.size(), false);
    std::vector<int> stack{g.edges[b].v1};
    side[g.edges[b].v1] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v])
        if (!side[w]) {
          side[w] = true;
          stack.push_back(w);
        }
    }
    int on_side = 0;
    for (const auto& x : g.externals)
      if (side[x.vertex]) ++on_side;
    if (on_side == 0 || on_side == g.n_legs()) return false;
  }
  return true;
}

// Multiset of external (color, kind) counts: (gauge, ghost, matter).
struct LegCounts {
  int gauge = 0, ghost = 0, matter = 0;
  auto operator<=>(const LegCounts&) const = default;
};

inline LegCounts leg_counts(const TheorySpec& t, const FeynmanGraph& g) {
  LegCounts n;
  for (const auto& x : g.externals) {
    const auto* c = t.color(x.color);
    if (!c) throw GraphError("unknown color " + x.color);
    if (c->kind == Kind::gauge) ++n.gauge;
    else if (c->kind == Kind::ghost) ++n.ghost;
    else ++n.matter;
  }
  return n;
}

inline std::map<std::string, int> coupling_order(const TheorySpec& t, const FeynmanGraph& g) {
  std::map<std::string, int> out;
  for (const auto& vn : g.vertices) {
    const auto* v = t.vertex(vn);
    if (!v) throw GraphError("unknown vertex type " + vn);
    for (const auto& [k, e] : v->coupling) out[k] += e;
  }
  return out;
}

// Total coupling degree (sum over couplings); single-coupling theories use
// this as the grading.
inline int coupling_degree(const TheorySpec& t, const FeynmanGraph& g) {
  int d = 0;
  for (const auto& [k, e] : coupling_order(t, g)) d += e;
  return d;
}

inline Profile residue(const FeynmanGraph& g) {
  Profile p;
  for (const auto& x : g.externals) p.legs.push_back({x.color, x.dir});
  return p;
}

// Structural validity against a theory: every vertex carries exactly the slot
// multiset of its type, with oriented colors balanced per slot direction.
// Edges with forgotten orientation count toward in and out slots jointly, so
// the check degrades to color counts on those vertices; callers building
// orientation classes guarantee orientability by construction.
inline void check_valid(const TheorySpec& t, const FeynmanGraph& g) {
  if (g.is_bare_line()) {
    if (g.externals[0].color != g.externals[1].color)
      throw GraphError("bare line with mismatched colors");
    const auto* c = t.color(g.externals[0].color);
    if (!c) throw GraphError("unknown color " + g.externals[0].color);
    if (c->oriented && g.externals[0].dir + g.externals[1].dir != 0)
      throw GraphError("bare line with unbalanced orientation");
    return;
  }
  struct Slot {
    std::map<std::pair<std::string, int>, int> want, have;
    int loose = 0;  // forgotten-orientation incidences
  };
  std::vector<Slot> slots(g.vertices.size());
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    const auto* v = t.vertex(g.vertices[i]);
    if (!v) throw GraphError("unknown vertex type " + g.vertices[i]);
    for (const auto& l : v->legs) ++slots[i].want[{l.color, l.dir}];
  }
  auto add = [&](const std::string& color, int vertex, int dir, bool loose) {
    if (vertex < 0 || vertex >= g.n_vertices())
      throw GraphError("edge references missing vertex");
    if (loose) {
      ++slots[vertex].loose;
      ++slots[vertex].have[{color, 0}];
    } else {
      ++slots[vertex].have[{color, dir}];
    }
  };
  for (const auto& e : g.edges) {
    const auto* c = t.color(e.color);
    if (!c) throw GraphError("unknown color " + e.color);
    if (!c->oriented && e.directed) throw GraphError("direction on unoriented color");
    if (c->oriented && e.directed) {
      add(e.color, e.v1, -1, false);  // arrow leaves v1
      add(e.color, e.v2, +1, false);
    } else if (c->oriented) {
      add(e.color, e.v1, 0, true);
      add(e.color, e.v2, 0, true);
    } else {
      add(e.color, e.v1, 0, false);
      add(e.color, e.v2, 0, false);
    }
  }
  for (const auto& x : g.externals) {
    const auto* c = t.color(x.color);
    if (!c) throw GraphError("unknown color " + x.color);
    if (c->oriented && x.dir == 0) {
      add(x.color, x.vertex, 0, true);
    } else if (!c->oriented && x.dir != 0) {
      throw GraphError("direction on unoriented external");
    } else {
      add(x.color, x.vertex, x.dir, false);
    }
  }
  for (std::size_t i = 0; i < slots.size(); ++i) {
    auto& s = slots[i];
    if (s.loose == 0) {
      if (s.want != s.have)
        throw GraphError("slot mismatch at vertex " + std::to_string(i));
      continue;
    }
    // collapse oriented slots to color counts where orientation is loose
    std::map<std::string, int> wantc, havec;
    for (const auto& [k, n] : s.want) wantc[k.first] += n;
    for (const auto& [k, n] : s.have) havec[k.first] += n;
    if (wantc != havec)
      throw GraphError("slot mismatch at vertex " + std::to_string(i));
  }
}

inline bool is_valid(const TheorySpec& t, const FeynmanGraph& g) {
  try {
    check_valid(t, g);
    return true;
  } catch (const GraphError&) {
    return false;
  }
}

// Text format, one item per line:
//   v <id> <vertex-type>
//   e <id> <color> <v1> <v2> [>]
//   x <index> <color>[>|<] <v> [T|L|I]
// '>' on an edge: arrow v1 -> v2. On an external color token: '>' arrow into
// the graph, '<' out of it. Ids must be sequential from 0.
inline std::string print_graph(const FeynmanGraph& g) {
  std::ostringstream os;
  for (std::size_t i = 0; i < g.vertices.size(); ++i)
    os << "v " << i << " " << g.vertices[i] << "\n";
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    os << "e " << i << " " << g.edges[i].color << " " << g.edges[i].v1 << " "
       << g.edges[i].v2;
    if (g.edges[i].directed) os << " >";
    os << "\n";
  }
  for (std::size_t i = 0; i < g.externals.size(); ++i) {
    const auto& x = g.externals[i];
    os << "x " << i << " " << x.color;
    if (x.dir == +1) os << ">";
    if (x.dir == -1) os << "<";
    os << " " << x.vertex;
    if (x.tau != 'T') os << " " << x.tau;
    os << "\n";
  }
  return os.str();
}

inline FeynmanGraph parse_graph(const std::string& text) {
  FeynmanGraph g;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      int id;
      std::string type;
      if (!(ls >> id >> type)) throw GraphError("bad vertex line: " + line);
      if (id != g.n_vertices()) throw GraphError("vertex ids must be sequential");
      g.vertices.push_back(type);
    } else if (tag == "e") {
      int id, a, b;
      std::string color, arrow;
      if (!(ls >> id >> color >> a >> b)) throw GraphError("bad edge line: " + line);
      if (id != g.n_edges()) throw GraphError("edge ids must be sequential");
      Edge e{color, a, b, false};
      if (ls >> arrow) {
        if (arrow != ">") throw GraphError("bad edge token: " + arrow);
        e.directed = true;
      }
      g.edges.push_back(e);
    } else if (tag == "x") {
      int id, v;
      std::string color, tau;
      if (!(ls >> id >> color >> v)) throw GraphError("bad external line: " + line);
      if (id != g.n_legs()) throw GraphError("external ids must be sequential");
      ExternalLeg x;
      x.dir = 0;
      if (!color.empty() && color.back() == '>') {
        x.dir = +1;
        color.pop_back();
      } else if (!color.empty() && color.back() == '<') {
        x.dir = -1;
        color.pop_back();
      }
      x.color = color;
      x.vertex = v;
      if (ls >> tau) {
        if (tau != "T" && tau != "L" && tau != "I")
          throw GraphError("bad leg label: " + tau);
        x.tau = tau[0];
      }
      g.externals.push_back(x);
    } else {
      throw GraphError("bad line: " + line);
    }
  }
  return g;
}

// Superficial degree of divergence: D * loops - sum of edge weights + sum of
// vertex weights. External legs carry no weight. Undefined on the bare line.
inline int superficial_degree(const TheorySpec& t, const FeynmanGraph& g) {
  if (g.vertices.empty())
    throw GraphError("superficial degree undefined without vertices");
  int d = t.spacetime_dim * graph_loops(g);
  for (const auto& e : g.edges) d -= t.color(e.color)->weight;
  for (const auto& vn : g.vertices) d += t.vertex(vn)->weight;
  return d;
}

}  // namespace feynhopf
