#pragma once

#include <cstdlib>
#include <future>

#include "feynhopf/canonical.hpp"

namespace feynhopf {

struct EnumOptions {
  int max_loops = 0;
  bool one_pi_only = false;
  bool include_pendants = true;  // bridges with all externals on one side
  bool include_tadpoles = true;  // self-loop edges
  bool include_bare = true;      // the vertexless propagator line
};

inline int worker_count() {
  const char* s = std::getenv("FEYNHOPF_WORKERS");
  if (!s) return 1;
  int n = std::atoi(s);
  return std::clamp(n, 1, 64);
}

namespace detail {

// Slot pairing over one vertex type multiset. Symmetry cuts: only the lowest
// untouched instance of each type may be entered (instances activate in index
// order), and only one free slot per (vertex, color, direction) is offered
// (further slots of the class give the identical edge list).
class PairSearch {
 public:
  PairSearch(const TheorySpec& t, const Profile& p, const EnumOptions& o,
             std::vector<std::string> vt)
      : t_(t), p_(p), o_(o), vtypes_(std::move(vt)) {
    for (std::size_t v = 0; v < vtypes_.size(); ++v) {
      sbegin_.push_back(static_cast<int>(slots_.size()));
      for (const auto& l : t.vertex(vtypes_[v])->legs)
        slots_.push_back({static_cast<int>(v), l.color, l.dir});
    }
    sbegin_.push_back(static_cast<int>(slots_.size()));
    used_.assign(slots_.size(), false);
    touched_.assign(vtypes_.size(), false);
  }

  void run(std::map<std::string, FeynmanGraph>& out) {
    out_ = &out;
    ext(0);
  }

 private:
  struct Slot {
    int v;
    std::string color;
    int dir;
  };

  bool enterable(int v) const {
    if (touched_[v]) return true;
    for (int u = 0; u < v; ++u)
      if (!touched_[u] && vtypes_[u] == vtypes_[v]) return false;
    return true;
  }

  std::vector<int> candidates(const std::string& color, int dir, int exclude_vertex,
                              bool any_dir = false) {
    std::vector<int> cs;
    for (std::size_t v = 0; v < vtypes_.size(); ++v) {
      if (static_cast<int>(v) == exclude_vertex) continue;
      if (!enterable(static_cast<int>(v))) continue;
      int seen = 0;
      for (int s = sbegin_[v]; s < sbegin_[v + 1]; ++s) {
        if (used_[s] || slots_[s].color != color) continue;
        if (!any_dir && slots_[s].dir != dir) continue;
        int bit = 1 << (slots_[s].dir + 1);
        if (seen & bit) continue;
        seen |= bit;
        cs.push_back(s);
        if (!any_dir) break;
      }
    }
    return cs;
  }

  void ext(std::size_t i) {
    if (i == p_.legs.size()) {
      pair_first();
      return;
    }
    // a direction-0 leg on an oriented color is an unoriented external and
    // may occupy a slot of either direction
    const auto& leg = p_.legs[i];
    for (int s : candidates(leg.color, leg.dir, -1, leg.dir == 0)) {
      int v = slots_[s].v;
      bool old = touched_[v];
      used_[s] = true;
      touched_[v] = true;
      ext_at_.push_back(v);
      ext(i + 1);
      ext_at_.pop_back();
      touched_[v] = old;
      used_[s] = false;
    }
  }

  void pair_first() {
    int s0 = -1;
    for (std::size_t s = 0; s < slots_.size(); ++s)
      if (!used_[s]) {
        s0 = static_cast<int>(s);
        break;
      }
    if (s0 < 0) {
      leaf();
      return;
    }
    int v0 = slots_[s0].v;
    bool old0 = touched_[v0];
    used_[s0] = true;
    touched_[v0] = true;
    for (int s : candidates(slots_[s0].color, -slots_[s0].dir,
                            o_.include_tadpoles ? -1 : v0)) {
      int v = slots_[s].v;
      bool old = touched_[v];
      used_[s] = true;
      touched_[v] = true;
      Edge e;
      e.color = slots_[s0].color;
      if (slots_[s0].dir == -1) {
        e.v1 = v0;
        e.v2 = v;
        e.directed = true;
      } else if (slots_[s0].dir == +1) {
        e.v1 = v;
        e.v2 = v0;
        e.directed = true;
      } else {
        e.v1 = std::min(v0, v);
        e.v2 = std::max(v0, v);
      }
      edges_.push_back(e);
      pair_first();
      edges_.pop_back();
      touched_[v] = old;
      used_[s] = false;
    }
    touched_[v0] = old0;
    used_[s0] = false;
  }

  void leaf() {
    FeynmanGraph g;
    g.vertices = vtypes_;
    g.edges = edges_;
    for (std::size_t i = 0; i < p_.legs.size(); ++i)
      g.externals.push_back({p_.legs[i].color, ext_at_[i], p_.legs[i].dir, 'T'});
    if (!graph_connected(g)) return;
    if (o_.one_pi_only && !is_1pi(g)) return;
    if (!o_.include_pendants && !is_pendant_free(g)) return;
    check_valid(t_, g);
    auto c = canonical_form(t_, g, LegMode::fixed);
    out_->emplace(std::move(c.certificate), std::move(c.graph));
  }

  const TheorySpec& t_;
  const Profile& p_;
  const EnumOptions& o_;
  std::vector<std::string> vtypes_;
  std::vector<Slot> slots_;
  std::vector<int> sbegin_;
  std::vector<bool> used_;
  std::vector<bool> touched_;
  std::vector<int> ext_at_;
  std::vector<Edge> edges_;
  std::map<std::string, FeynmanGraph>* out_ = nullptr;
};

inline std::vector<std::vector<std::string>> vertex_multisets(const TheorySpec& t,
                                                              int n_ext,
                                                              int max_loops) {
  std::vector<std::string> names;
  for (const auto& v : t.vertex_types) names.push_back(v.name);
  std::sort(names.begin(), names.end());
  int vmax = n_ext + 2 * max_loops - 2;
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t ti) {
    if (ti == names.size()) {
      if (cur.empty()) return;
      int slots = 0;
      for (const auto& n : cur) slots += static_cast<int>(t.vertex(n)->legs.size());
      int internal = slots - n_ext;
      if (internal < 0 || internal % 2) return;
      int loops = internal / 2 - static_cast<int>(cur.size()) + 1;
      if (loops < 0 || loops > max_loops) return;
      out.push_back(cur);
      return;
    }
    rec(ti + 1);
    std::size_t base = cur.size();
    while (static_cast<int>(cur.size()) < vmax) {
      cur.push_back(names[ti]);
      rec(ti + 1);
    }
    cur.resize(base);
  };
  rec(0);
  return out;
}

inline void maybe_emit_bare(const TheorySpec& t, const Profile& p,
                            const EnumOptions& opt,
                            std::map<std::string, FeynmanGraph>& out) {
  if (!opt.include_bare || p.legs.size() != 2) return;
  if (p.legs[0].color != p.legs[1].color) return;
  const auto* c = t.color(p.legs[0].color);
  if (!c) return;
  if (c->oriented && p.legs[0].dir + p.legs[1].dir != 0) return;
  if (!c->oriented && (p.legs[0].dir || p.legs[1].dir)) return;
  FeynmanGraph g;
  g.externals = {{p.legs[0].color, -1, p.legs[0].dir, 'T'},
                 {p.legs[1].color, -1, p.legs[1].dir, 'T'}};
  auto cf = canonical_form(t, g, LegMode::fixed);
  out.emplace(cf.certificate, cf.graph);
}

}  // namespace detail

inline std::vector<FeynmanGraph> enumerate_graphs(const TheorySpec& t, const Profile& p,
                                                  const EnumOptions& opt) {
  auto multis = detail::vertex_multisets(t, static_cast<int>(p.legs.size()),
                                         opt.max_loops);
  std::map<std::string, FeynmanGraph> all;
  int workers = worker_count();
  if (workers <= 1 || multis.size() <= 1) {
    for (const auto& m : multis) detail::PairSearch(t, p, opt, m).run(all);
  } else {
    std::vector<std::future<std::map<std::string, FeynmanGraph>>> futs;
    for (int w = 0; w < workers; ++w)
      futs.push_back(std::async(std::launch::async, [&, w]() {
        std::map<std::string, FeynmanGraph> local;
        for (std::size_t i = w; i < multis.size(); i += workers)
          detail::PairSearch(t, p, opt, multis[i]).run(local);
        return local;
      }));
    for (auto& f : futs)
      for (auto& [cert, g] : f.get()) all.emplace(cert, g);
  }
  detail::maybe_emit_bare(t, p, opt, all);

  std::vector<std::pair<std::pair<int, std::string>, FeynmanGraph>> keyed;
  for (auto& [cert, g] : all) keyed.push_back({{graph_loops(g), cert}, g});
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<FeynmanGraph> out;
  for (auto& [k, g] : keyed) out.push_back(std::move(g));
  return out;
}

inline std::vector<FeynmanGraph> sector_graphs(const TheorySpec& t, int i, int j, int k,
                                               const EnumOptions& opt) {
  return enumerate_graphs(t, sector_profile(t, i, j, k), opt);
}

// Class counts keyed by (coupling degree, loops). With forget_ghost_orientation
// the classes are orientation classes of the ghost sector.
inline std::map<std::pair<int, int>, int> count_by_grading(
    const TheorySpec& t, const Profile& p, const EnumOptions& opt,
    bool forget_ghost_orientation = false) {
  auto gs = enumerate_graphs(t, p, opt);
  std::map<std::pair<int, int>, std::set<std::string>> buckets;
  for (const auto& g : gs) {
    auto key = std::make_pair(coupling_degree(t, g), graph_loops(g));
    buckets[key].insert(
        canonical_key(t, g, LegMode::fixed, forget_ghost_orientation));
  }
  std::map<std::pair<int, int>, int> out;
  for (const auto& [k, certs] : buckets) out[k] = static_cast<int>(certs.size());
  return out;
}

}  // namespace feynhopf
