#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "feynhopf/divergence.hpp"
#include "feynhopf/enumerate.hpp"
#include "feynhopf/hopf.hpp"

namespace feynhopf {

// Multi-index over TheorySpec::vertex_types: vertices of each type.
using VGrade = std::vector<int>;

inline int vgrade_total(const VGrade& v) { return std::accumulate(v.begin(), v.end(), 0); }

// Residues carrying combinatorial Green's functions: every propagator color
// and every interaction vertex type, addressed by name.
inline std::vector<std::string> residue_names(const TheorySpec& t) {
  std::vector<std::string> out;
  for (const auto& c : t.edge_colors) out.push_back(c.name);
  for (const auto& v : t.vertex_types) out.push_back(v.name);
  return out;
}

// Series truncation. Leaving max_loops unset derives a loop bound large
// enough to hold every graph the grade bound admits.
struct Trunc {
  int max_loops = -1;
  int max_grade = -1;
};

// Bridge-free cores of a connected graph, cut out as standalone graphs.
// Vertex-complete: a vertex on no cycle becomes a bare corolla core.
// Bridges and parent externals turn into external legs with the slot
// direction they occupy (+1 into the core).
inline std::vector<FeynmanGraph> one_pi_cores(const FeynmanGraph& g) {
  struct Dsu {
    std::vector<int> p;
    explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int a) {
      while (p[a] != a) a = p[a] = p[p[a]];
      return a;
    }
    void unite(int a, int b) { p[find(a)] = find(b); }
  };
  const int nv = g.n_vertices(), ne = g.n_edges();
  std::vector<bool> bridge(ne, false);
  for (int ei = 0; ei < ne; ++ei) {
    const Edge& e = g.edges[ei];
    if (e.v1 == e.v2) continue;
    Dsu d(nv);
    for (int ej = 0; ej < ne; ++ej)
      if (ej != ei) d.unite(g.edges[ej].v1, g.edges[ej].v2);
    bridge[ei] = d.find(e.v1) != d.find(e.v2);
  }
  Dsu d(nv);
  for (int ei = 0; ei < ne; ++ei)
    if (!bridge[ei]) d.unite(g.edges[ei].v1, g.edges[ei].v2);
  std::vector<int> comp(nv, -1), local(nv, 0);
  int ncomp = 0;
  for (int v = 0; v < nv; ++v) {
    int r = d.find(v);
    if (comp[r] < 0) comp[r] = ncomp++;
    comp[v] = comp[r];
  }
  std::vector<FeynmanGraph> cores(ncomp);
  for (int v = 0; v < nv; ++v) {
    FeynmanGraph& c = cores[comp[v]];
    local[v] = c.n_vertices();
    c.vertices.push_back(g.vertices[v]);
  }
  for (int ei = 0; ei < ne; ++ei) {
    if (bridge[ei]) continue;
    const Edge& e = g.edges[ei];
    cores[comp[e.v1]].edges.push_back({e.color, local[e.v1], local[e.v2], e.directed});
  }
  for (const auto& x : g.externals)
    cores[comp[x.vertex]].externals.push_back({x.color, local[x.vertex], x.dir, x.tau});
  for (int ei = 0; ei < ne; ++ei) {
    if (!bridge[ei]) continue;
    const Edge& e = g.edges[ei];
    cores[comp[e.v1]].externals.push_back({e.color, local[e.v1], e.directed ? -1 : 0, 'T'});
    cores[comp[e.v2]].externals.push_back({e.color, local[e.v2], e.directed ? +1 : 0, 'T'});
  }
  return cores;
}

// Combinatorial Green's functions over the classed monomial algebra, with
// all series cached under one truncation. Amplitude graphs enter as their
// core monomials; a bare corolla core is the unit.
class GreensCalculator {
 public:
  GreensCalculator(HopfAlgebra& hopf, Trunc tr) : H(hopf), tr_(tr) {
    int w = 3;
    for (const auto& v : H.theory.vertex_types)
      w = std::max(w, static_cast<int>(v.legs.size()));
    if (tr_.max_loops < 0) {
      if (tr_.max_grade < 0) throw GraphError("series truncation is unbounded");
      // largest loop order a graph within the grade bound can reach
      int g = tr_.max_grade;
      tr_.max_loops = std::max(((w - 2) * g) / 2, ((w - 2) * (g + 1) - 1) / 2);
    }
  }

  const Trunc& truncation() const { return tr_; }

  bool is_vertex_residue(const std::string& r) const { return H.theory.vertex(r) != nullptr; }

  Profile residue_profile(const std::string& r) const {
    if (const EdgeColor* c = H.theory.color(r)) {
      Profile p;
      if (c->oriented)
        p.legs = {{c->name, +1}, {c->name, -1}};
      else
        p.legs = {{c->name, 0}, {c->name, 0}};
      return p;
    }
    if (const VertexType* v = H.theory.vertex(r)) return Profile{v->legs};
    throw GraphError("unknown residue " + r);
  }

  // ---- grading ----

  struct AtomStats {
    int loops = 0;
    bool divergent = false;
    VGrade credited;
  };

  // Credited grade: the plain vertex content, less one vertex of type k when
  // the graph's own residue is vertex type k. A left cofactor slice counts
  // cograph vertices, and a component contracted to a vertex gives one back.
  const AtomStats& stats(const std::string& key) {
    auto it = stats_.find(key);
    if (it != stats_.end()) return it->second;
    const FeynmanGraph& g = H.rep(key);
    AtomStats s;
    s.loops = graph_loops(g);
    s.divergent = omega(H.theory, g) >= 0;
    s.credited.assign(H.theory.vertex_types.size(), 0);
    for (const auto& vn : g.vertices) ++s.credited[H.theory.vertex_index(vn)];
    std::vector<LegSpec> legs;
    for (const auto& x : g.externals) legs.push_back({x.color, x.dir});
    if (const VertexType* vt = H.theory.vertex_by_legs(legs))
      --s.credited[H.theory.vertex_index(vt->name)];
    return stats_.emplace(key, std::move(s)).first->second;
  }

  int mono_loops(const Monomial& m) {
    int n = 0;
    for (const auto& k : m) n += stats(k).loops;
    return n;
  }

  VGrade credited_grade(const Monomial& m) {
    VGrade g(H.theory.vertex_types.size(), 0);
    for (const auto& k : m) {
      const VGrade& c = stats(k).credited;
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += c[i];
    }
    return g;
  }

  // Vertex content of the connected graphs a series monomial stands for:
  // for a vertex residue the star core or bare corolla restores one vertex.
  VGrade conn_grade(const Monomial& m, const std::string& r) {
    VGrade g = credited_grade(m);
    if (is_vertex_residue(r)) ++g[H.theory.vertex_index(r)];
    return g;
  }

  bool keep(const Monomial& m) {
    if (tr_.max_loops >= 0 && mono_loops(m) > tr_.max_loops) return false;
    if (tr_.max_grade >= 0 && vgrade_total(credited_grade(m)) > tr_.max_grade) return false;
    return true;
  }

  FormalSum truncate(const FormalSum& s) {
    FormalSum out;
    for (const auto& [m, c] : s.terms)
      if (keep(m)) out.add(m, c);
    return out;
  }

  FormalSum tmul(const FormalSum& a, const FormalSum& b) { return truncate(a * b); }

  // Projection onto superficially divergent graphs, multiplicative on
  // monomials and fixing the unit.
  FormalSum omega_project(const FormalSum& s) {
    FormalSum out;
    for (const auto& [m, c] : s.terms) {
      bool ok = true;
      for (const auto& k : m)
        if (!stats(k).divergent) ok = false;
      if (ok) out.add(m, c);
    }
    return out;
  }

  // ---- series ----

  // Sum over nontrivial 1PI pendant-free amplitudes of the residue, each a
  // one-letter monomial weighted by 1/Sym of the position-fixed graph.
  const FormalSum& x_series(const std::string& r) {
    auto it = x_.find(r);
    if (it != x_.end()) return it->second;
    EnumOptions opt;
    opt.max_loops = tr_.max_loops;
    opt.one_pi_only = true;
    opt.include_pendants = false;
    opt.include_bare = false;
    FormalSum s;
    for (const auto& g : enumerate_graphs(H.theory, residue_profile(r), opt)) {
      if (g.n_edges() == 0) continue;  // bare corolla: the unit term
      Monomial m{H.intern(g)};
      if (!keep(m)) continue;
      s.add(std::move(m), Rat(1) / Rat(static_cast<unsigned long>(sym_factor(H.theory, g))));
    }
    return x_.emplace(r, std::move(s)).first->second;
  }

  // I - x for propagator residues, I + x for vertex residues.
  const FormalSum& x_capital(const std::string& r) {
    auto it = xc_.find(r);
    if (it != xc_.end()) return it->second;
    FormalSum s = FormalSum::unit();
    if (is_vertex_residue(r))
      s += x_series(r);
    else
      s -= x_series(r);
    return xc_.emplace(r, std::move(s)).first->second;
  }

  // Vertex series without its single-vertex graphs: a component contracted
  // to a cograph vertex always carries at least two vertices.
  const FormalSum& x_reduced(const std::string& r) {
    auto it = xr_.find(r);
    if (it != xr_.end()) return it->second;
    FormalSum s = FormalSum::unit();
    for (const auto& [m, c] : x_series(r).terms)
      if (H.rep(m[0]).n_vertices() > 1) s.add(m, c);
    return xr_.emplace(r, std::move(s)).first->second;
  }

  const FormalSum& inv_x_capital(const std::string& color) {
    auto it = ix_.find(color);
    if (it != ix_.end()) return it->second;
    return ix_.emplace(color, series_inverse(x_capital(color))).first->second;
  }

  // Y = 1/X for propagator residues, X^r / prod_legs X^e for vertex residues.
  const FormalSum& y_series(const std::string& r) {
    auto it = y_.find(r);
    if (it != y_.end()) return it->second;
    FormalSum s;
    if (!is_vertex_residue(r)) {
      s = inv_x_capital(r);
    } else {
      s = x_capital(r);
      for (const auto& leg : H.theory.vertex(r)->legs) s = tmul(s, inv_x_capital(leg.color));
    }
    return y_.emplace(r, std::move(s)).first->second;
  }

  // Charge Q^v = X^v / prod_legs sqrt(X^e).
  const FormalSum& charge(const std::string& r) {
    auto it = q_.find(r);
    if (it != q_.end()) return it->second;
    if (!is_vertex_residue(r)) throw GraphError("charges live on vertex residues");
    FormalSum s = x_capital(r);
    for (const auto& leg : H.theory.vertex(r)->legs)
      s = tmul(s, series_inverse(series_sqrt(x_capital(leg.color))));
    return q_.emplace(r, std::move(s)).first->second;
  }

  FormalSum series_pow(const FormalSum& f, int k) {
    FormalSum out = FormalSum::unit();
    for (int i = 0; i < k; ++i) out = tmul(out, f);
    return out;
  }

  // Geometric inverse of I + n; n must sit at strictly positive loop order.
  FormalSum series_inverse(const FormalSum& f) {
    FormalSum n = check_unit_head(f);
    FormalSum out = FormalSum::unit(), pw = FormalSum::unit();
    Rat sign(1);
    for (int k = 1; k <= tr_.max_loops + 1; ++k) {
      pw = tmul(pw, n);
      if (pw.is_zero()) break;
      sign = -sign;
      out += pw * sign;
    }
    if (!pw.is_zero()) throw GraphError("series inverse did not terminate");
    return out;
  }

  // Binomial square root of I + n.
  FormalSum series_sqrt(const FormalSum& f) {
    FormalSum n = check_unit_head(f);
    FormalSum out = FormalSum::unit(), pw = FormalSum::unit();
    Rat b(1);
    for (int k = 1; k <= tr_.max_loops + 1; ++k) {
      pw = tmul(pw, n);
      if (pw.is_zero()) break;
      b *= (Rat(3) / Rat(2) - Rat(k)) / Rat(k);
      out += pw * b;
    }
    if (!pw.is_zero()) throw GraphError("series sqrt did not terminate");
    return out;
  }

  // ---- independent connected route ----

  // Connected pendant-free amplitudes decomposed into bridge-free cores,
  // each contributing its core monomial at 1/Sym of the whole connected
  // graph. Vertex residues keep star gluings only (exactly one core with
  // three or more legs): those are the graphs the 1PI series generate.
  FormalSum connected_from_1pi(const std::string& r) {
    EnumOptions opt;
    opt.max_loops = tr_.max_loops;
    opt.include_pendants = false;
    const bool vertexr = is_vertex_residue(r);
    FormalSum out;
    for (const auto& g : enumerate_graphs(H.theory, residue_profile(r), opt)) {
      if (g.is_bare_line()) {
        out.add(Monomial{}, Rat(1));
        continue;
      }
      auto cores = one_pi_cores(g);
      if (vertexr) {
        int big = 0;
        for (const auto& c : cores)
          if (c.n_legs() >= 3) ++big;
        if (big != 1) continue;
      }
      Monomial m;
      for (const auto& c : cores)
        if (c.n_edges() > 0) m.push_back(H.intern(c));
      std::sort(m.begin(), m.end());
      if (!keep(m)) continue;
      out.add(std::move(m), Rat(1) / Rat(static_cast<unsigned long>(sym_factor(H.theory, g))));
    }
    return out;
  }

  // ---- coproduct identity ----

  FormalSum slice_credited(const FormalSum& s, const VGrade& tgt) {
    FormalSum out;
    for (const auto& [m, c] : s.terms)
      if (credited_grade(m) == tgt) out.add(m, c);
    return out;
  }

  // Slice of a residue series by the vertex content of the connected graphs
  // its monomials stand for. The credited target can go negative in the
  // residue component: an atom whose externals match vertex type k but whose
  // body holds no k vertex is credited -1 there, and still belongs here.
  FormalSum slice_conn(const FormalSum& s, const VGrade& v, const std::string& r) {
    VGrade tgt = v;
    if (is_vertex_residue(r)) --tgt[H.theory.vertex_index(r)];
    return slice_credited(s, tgt);
  }

  // Internal edge counts per color of a connected cograph with residue r and
  // vertex content v; nullopt when the half-edge count does not close.
  std::optional<std::map<std::string, int>> cograph_edges(const std::string& r, const VGrade& v) {
    std::map<std::string, int> half;
    for (const auto& c : H.theory.edge_colors) half[c.name] = 0;
    for (std::size_t k = 0; k < v.size(); ++k)
      if (v[k] > 0)
        for (const auto& leg : H.theory.vertex_types[k].legs) half[leg.color] += v[k];
    for (const auto& leg : residue_profile(r).legs) --half[leg.color];
    for (auto& [name, n] : half) {
      if (n < 0 || n % 2) return std::nullopt;
      n /= 2;
    }
    return half;
  }

  // Divergence of every cograph with this residue and vertex content. Edge
  // and loop counts are content-determined, so one test covers them all;
  // bare cographs (the corolla, the unit) never count as divergent.
  bool cograph_divergent(const std::string& r, const VGrade& v) {
    if (vgrade_total(v) == 0) return false;
    auto E = cograph_edges(r, v);
    if (!E) return false;
    int etot = 0, w = 0;
    for (const auto& [name, n] : *E) {
      etot += n;
      w -= n * H.theory.color(name)->weight;
    }
    if (etot == 0) return false;
    for (std::size_t k = 0; k < v.size(); ++k) w += v[k] * H.theory.vertex_types[k].weight;
    w += H.theory.spacetime_dim * (etot - vgrade_total(v) + 1);
    return w >= 0;
  }

  // Left cofactor for cograph content v: one reduced vertex series per
  // cograph vertex, one propagator chain per cograph edge and external leg,
  // all under the divergence projection.
  FormalSum left_factor(const std::string& r, const VGrade& v,
                        const std::map<std::string, int>& E) {
    FormalSum out = FormalSum::unit();
    for (std::size_t k = 0; k < v.size(); ++k)
      if (v[k] > 0) out = tmul(out, series_pow(x_reduced(H.theory.vertex_types[k].name), v[k]));
    std::map<std::string, int> p = E;
    for (const auto& leg : residue_profile(r).legs) ++p[leg.color];
    for (const auto& [color, n] : p)
      if (n > 0) out = tmul(out, series_pow(inv_x_capital(color), n));
    return omega_project(out);
  }

  struct IdentityReport {
    bool ok = true;
    TensorSum lhs, rhs;
  };

  // Coproduct identity on the connected series slice at vertex content V:
  // Delta(Y^r_V) matches a sum over cograph contents v of the left cofactor
  // sliced at V - v tensor the series slice at v. Right legs with no vertex
  // left (bare cographs) collect into one unit bucket. The divergent variant
  // keeps only superficially divergent cographs on the right.
  IdentityReport check_coproduct_identity(const std::string& r, const VGrade& V,
                                          bool divergent_only = false) {
    const std::size_t nt = H.theory.vertex_types.size();
    if (V.size() != nt) throw GraphError("vertex grade size mismatch");
    FormalSum yslice = slice_conn(y_series(r), V, r);
    if (divergent_only) yslice = omega_project(yslice);
    TensorSum lhs = H.coproduct(yslice);
    if (divergent_only) {
      TensorSum f;
      for (const auto& [mm, c] : lhs.terms) {
        const Monomial& right = mm[1];
        if (right.empty()) continue;
        if (omega_project(FormalSum::of(right)).is_zero()) continue;
        if (!cograph_divergent(r, conn_grade(right, r))) continue;
        f.add(mm, c);
      }
      lhs = f;
    }

    TensorSum rhs;
    if (!divergent_only)
      for (const auto& [m, c] : omega_project(yslice).terms) rhs.add({m, Monomial{}}, c);

    // Cograph contents are bounded by the total grade, not componentwise by
    // V: a contracted component may credit a negative amount to the residue
    // component of its own vertex type, letting the cograph hold more of it
    // than V does. Every atom credits a positive total, so the total bounds.
    const int total = vgrade_total(V);
    VGrade v(nt, 0);
    for (;;) {
      std::size_t i = 0;
      while (i < nt && v[i] == total) v[i++] = 0;
      if (i == nt) break;
      ++v[i];
      if (vgrade_total(v) > total) continue;
      auto E = cograph_edges(r, v);
      if (!E) continue;
      int etot = 0;
      for (const auto& [name, n] : *E) etot += n;
      if (etot == 0) continue;  // single bare corolla: the unit bucket
      if (divergent_only && !cograph_divergent(r, v)) continue;
      FormalSum right = slice_conn(y_series(r), v, r);
      if (divergent_only) right = omega_project(right);
      if (right.is_zero()) continue;
      VGrade rest(nt);
      for (std::size_t k = 0; k < nt; ++k) rest[k] = V[k] - v[k];
      FormalSum left = slice_credited(left_factor(r, v, *E), rest);
      for (const auto& [lm, lc] : left.terms)
        for (const auto& [rm, rc] : right.terms) rhs.add({lm, rm}, lc * rc);
    }

    IdentityReport rep;
    rep.lhs = std::move(lhs);
    rep.rhs = std::move(rhs);
    rep.ok = rep.lhs == rep.rhs;
    return rep;
  }

  HopfAlgebra& H;

 private:
  FormalSum check_unit_head(const FormalSum& f) {
    if (f.coeff(Monomial{}) != Rat(1)) throw GraphError("series must start at the unit");
    FormalSum n = f;
    n.terms.erase(Monomial{});
    return n;
  }

  Trunc tr_;
  std::map<std::string, AtomStats> stats_;
  std::map<std::string, FormalSum> x_, xc_, xr_, ix_, y_, q_;
};

}  // namespace feynhopf
