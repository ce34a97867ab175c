#pragma once

#include <json.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "feynhopf/rational.hpp"

namespace feynhopf {

using Json = nlohmann::ordered_json;

struct TheoryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Kind { gauge, ghost, matter };

inline std::string kind_str(Kind k) {
  switch (k) {
    case Kind::gauge: return "gauge";
    case Kind::ghost: return "ghost";
    default: return "matter";
  }
}

struct EdgeColor {
  std::string name;
  Kind kind = Kind::matter;
  bool oriented = false;
  int weight = 2;  // propagator power-counting weight
};

// A vertex leg: edge color plus flow direction for oriented colors.
// dir: 0 unoriented, +1 arrow into the vertex, -1 arrow out of it.
struct LegSpec {
  std::string color;
  int dir = 0;
  auto operator<=>(const LegSpec&) const = default;
};

struct VertexType {
  std::string name;
  std::vector<LegSpec> legs;  // kept sorted
  std::map<std::string, int> coupling;
  int weight = 0;  // power-counting weight
};

struct ValenceFlags {
  std::map<int, int> alpha;                  // valence -> 0/1, pure gauge
  std::map<int, int> beta;                   // valence -> 0/1, ghost-antighost-gauge
  std::map<std::pair<int, int>, int> gamma;  // (gauge valence part, matter part) -> 0/1

  int get_alpha(int v) const {
    auto it = alpha.find(v);
    return it == alpha.end() ? 0 : it->second;
  }
  int get_beta(int v) const {
    auto it = beta.find(v);
    return it == beta.end() ? 0 : it->second;
  }
  int get_gamma(int g, int k) const {
    auto it = gamma.find({g, k});
    return it == gamma.end() ? 0 : it->second;
  }
};

struct TheorySpec {
  std::string name;
  int spacetime_dim = 4;
  std::vector<std::string> couplings;
  std::vector<EdgeColor> edge_colors;
  ValenceFlags flags;
  std::vector<VertexType> vertex_types;
  int max_valence = 4;

  const EdgeColor* color(const std::string& n) const {
    for (const auto& c : edge_colors)
      if (c.name == n) return &c;
    return nullptr;
  }
  const VertexType* vertex(const std::string& n) const {
    for (const auto& v : vertex_types)
      if (v.name == n) return &v;
    return nullptr;
  }
  int vertex_index(const std::string& n) const {
    for (std::size_t i = 0; i < vertex_types.size(); ++i)
      if (vertex_types[i].name == n) return static_cast<int>(i);
    return -1;
  }
  // The vertex type whose sorted leg multiset matches, if any.
  const VertexType* vertex_by_legs(std::vector<LegSpec> legs) const {
    std::sort(legs.begin(), legs.end());
    for (const auto& v : vertex_types)
      if (v.legs == legs) return &v;
    return nullptr;
  }
  std::string gauge_color() const {
    for (const auto& c : edge_colors)
      if (c.kind == Kind::gauge) return c.name;
    return "";
  }
  std::string ghost_color() const {
    for (const auto& c : edge_colors)
      if (c.kind == Kind::ghost) return c.name;
    return "";
  }
};

namespace detail {

inline std::vector<LegSpec> sorted(std::vector<LegSpec> legs) {
  std::sort(legs.begin(), legs.end());
  return legs;
}

inline VertexType make_gauge_vertex(const std::string& gauge, int valence,
                                    const std::string& coupling) {
  VertexType v;
  v.name = gauge + std::to_string(valence);
  v.legs = sorted(std::vector<LegSpec>(valence, LegSpec{gauge, 0}));
  v.coupling[coupling] = valence - 2;
  v.weight = valence == 3 ? 1 : 0;
  return v;
}

inline VertexType make_ghost_vertex(const std::string& gauge, const std::string& ghost,
                                    int valence, const std::string& coupling) {
  VertexType v;
  v.name = ghost + ghost + gauge + std::to_string(valence);
  std::vector<LegSpec> legs{{ghost, +1}, {ghost, -1}};
  for (int i = 0; i < valence - 2; ++i) legs.push_back({gauge, 0});
  v.legs = sorted(legs);
  v.coupling[coupling] = valence - 2;
  v.weight = valence == 3 ? 1 : 0;
  return v;
}

}  // namespace detail

// Rebuilds vertex_types from flags (used when a config supplies flags only).
inline void generate_vertices_from_flags(TheorySpec& t) {
  const std::string g = t.gauge_color(), gh = t.ghost_color();
  const std::string cpl = t.couplings.empty() ? "g" : t.couplings.front();
  for (const auto& [v, on] : t.flags.alpha)
    if (on) t.vertex_types.push_back(detail::make_gauge_vertex(g, v, cpl));
  for (const auto& [v, on] : t.flags.beta)
    if (on) t.vertex_types.push_back(detail::make_ghost_vertex(g, gh, v, cpl));
  // gamma vertices: g gauge legs + k matter legs, matter color oriented or not
  for (const auto& [gk, on] : t.flags.gamma) {
    if (!on) continue;
    std::string mc;
    for (const auto& c : t.edge_colors)
      if (c.kind == Kind::matter) mc = c.name;
    if (mc.empty()) throw TheoryError("gamma flag set but no matter color");
    VertexType v;
    v.name = "m" + std::to_string(gk.first) + "_" + std::to_string(gk.second);
    std::vector<LegSpec> legs;
    const EdgeColor* m = nullptr;
    for (const auto& c : t.edge_colors)
      if (c.name == mc) m = &c;
    for (int i = 0; i < gk.first; ++i) legs.push_back({g, 0});
    for (int i = 0; i < gk.second; ++i)
      legs.push_back({mc, m->oriented ? (i % 2 ? -1 : +1) : 0});
    v.legs = detail::sorted(legs);
    v.coupling[cpl] = gk.first + gk.second - 2;
    v.weight = gk.first + gk.second == 3 ? 1 : 0;
    t.vertex_types.push_back(v);
  }
}

inline void validate(const TheorySpec& t) {
  std::set<std::string> names;
  for (const auto& c : t.edge_colors) {
    if (!names.insert(c.name).second) throw TheoryError("duplicate edge color " + c.name);
    if (c.kind == Kind::ghost && !c.oriented) throw TheoryError("ghost color must be oriented");
  }
  if (t.max_valence < 3) throw TheoryError("max_valence < 3");
  std::set<std::string> vnames;
  for (const auto& v : t.vertex_types) {
    if (!vnames.insert(v.name).second) throw TheoryError("duplicate vertex type " + v.name);
    if (v.legs.size() < 3) throw TheoryError("vertex " + v.name + " has valence < 3");
    bool nonzero = false;
    for (const auto& [k, e] : v.coupling) {
      if (e < 0) throw TheoryError("negative coupling exponent on " + v.name);
      if (e > 0) nonzero = true;
      if (std::find(t.couplings.begin(), t.couplings.end(), k) == t.couplings.end())
        throw TheoryError("unknown coupling " + k);
    }
    if (!nonzero) throw TheoryError("vertex " + v.name + " carries no coupling");
    for (const auto& l : v.legs) {
      const auto* c = t.color(l.color);
      if (!c) throw TheoryError("vertex " + v.name + " references unknown color " + l.color);
      if (c->oriented && l.dir == 0)
        throw TheoryError("oriented color needs leg direction on " + v.name);
      if (!c->oriented && l.dir != 0)
        throw TheoryError("unoriented color cannot carry direction on " + v.name);
    }
  }
  // flags <-> vertex types bijection on the gauge sector
  const std::string g = t.gauge_color(), gh = t.ghost_color();
  for (const auto& [val, on] : t.flags.alpha) {
    if (!on) continue;
    if (!t.vertex_by_legs(std::vector<LegSpec>(val, {g, 0})))
      throw TheoryError("alpha flag " + std::to_string(val) + " has no matching vertex");
  }
  for (const auto& [val, on] : t.flags.beta) {
    if (!on) continue;
    std::vector<LegSpec> legs{{gh, +1}, {gh, -1}};
    for (int i = 0; i < val - 2; ++i) legs.push_back({g, 0});
    if (!t.vertex_by_legs(legs))
      throw TheoryError("beta flag " + std::to_string(val) + " has no matching vertex");
  }
  for (const auto& v : t.vertex_types) {
    // every pure-gauge vertex must be flagged, and so on
    bool pure_gauge = true, has_ghost = false, has_matter = false;
    int gauge_legs = 0, matter_legs = 0;
    for (const auto& l : v.legs) {
      const auto* c = t.color(l.color);
      if (c->kind == Kind::gauge) ++gauge_legs;
      if (c->kind != Kind::gauge) pure_gauge = false;
      if (c->kind == Kind::ghost) has_ghost = true;
      if (c->kind == Kind::matter) {
        has_matter = true;
        ++matter_legs;
      }
    }
    int val = static_cast<int>(v.legs.size());
    if (!g.empty()) {
      if (pure_gauge && !t.flags.get_alpha(val))
        throw TheoryError("unflagged pure gauge vertex " + v.name);
      if (has_ghost && !t.flags.get_beta(val))
        throw TheoryError("unflagged ghost vertex " + v.name);
      if (has_matter && !has_ghost && gauge_legs > 0 &&
          !t.flags.get_gamma(gauge_legs, matter_legs))
        throw TheoryError("unflagged matter vertex " + v.name);
    }
  }
}

inline TheorySpec preset(const std::string& name, int max_valence = 4) {
  TheorySpec t;
  t.name = name;
  if (name == "qym") {
    t.spacetime_dim = 4;
    t.couplings = {"g"};
    t.edge_colors = {{"A", Kind::gauge, false, 2}, {"c", Kind::ghost, true, 2}};
    t.flags.alpha = {{3, 1}, {4, 1}};
    t.flags.beta = {{3, 1}};
    t.max_valence = 4;
    generate_vertices_from_flags(t);
  } else if (name == "qgr" || name == "qgr-goldberg") {
    if (max_valence < 3) throw TheoryError("max_valence < 3");
    t.spacetime_dim = 4;
    t.couplings = {"kappa"};
    t.edge_colors = {{"h", Kind::gauge, false, 2}, {"c", Kind::ghost, true, 2}};
    for (int v = 3; v <= max_valence; ++v) t.flags.alpha[v] = 1;
    if (name == "qgr") {
      for (int v = 3; v <= max_valence; ++v) t.flags.beta[v] = 1;
    } else {
      t.flags.beta[3] = 1;
    }
    t.max_valence = max_valence;
    generate_vertices_from_flags(t);
    for (auto& v : t.vertex_types) v.weight = 2;  // two derivatives per vertex
  } else if (name == "phi3") {
    t.spacetime_dim = 6;
    t.couplings = {"lambda"};
    t.edge_colors = {{"s", Kind::matter, false, 2}};
    VertexType v;
    v.name = "s3";
    v.legs = std::vector<LegSpec>(3, LegSpec{"s", 0});
    v.coupling["lambda"] = 1;
    v.weight = 0;
    t.vertex_types.push_back(v);
    t.max_valence = 3;
  } else if (name == "free") {
    t.spacetime_dim = 4;
    t.edge_colors = {{"s", Kind::matter, false, 2}};
    t.max_valence = 3;
  } else {
    throw TheoryError("unknown preset " + name);
  }
  validate(t);
  return t;
}

inline Json theory_to_json(const TheorySpec& t) {
  Json j;
  j["name"] = t.name;
  j["spacetime_dim"] = t.spacetime_dim;
  j["couplings"] = t.couplings;
  j["edge_colors"] = Json::array();
  for (const auto& c : t.edge_colors)
    j["edge_colors"].push_back(
        {{"name", c.name}, {"kind", kind_str(c.kind)}, {"oriented", c.oriented}, {"weight", c.weight}});
  Json flags;
  Json a = Json::object(), b = Json::object(), g = Json::object();
  for (const auto& [v, on] : t.flags.alpha) a[std::to_string(v)] = on;
  for (const auto& [v, on] : t.flags.beta) b[std::to_string(v)] = on;
  for (const auto& [gk, on] : t.flags.gamma)
    g["(" + std::to_string(gk.first) + "," + std::to_string(gk.second) + ")"] = on;
  flags["alpha"] = a;
  flags["beta"] = b;
  flags["gamma"] = g;
  j["flags"] = flags;
  j["explicit_vertices"] = Json::array();
  for (const auto& v : t.vertex_types) {
    Json legs = Json::array();
    for (const auto& l : v.legs) {
      std::string tok = l.color;
      if (l.dir == +1) tok += ">";
      if (l.dir == -1) tok += "<";
      legs.push_back(tok);
    }
    Json cp = Json::object();
    for (const auto& [k, e] : v.coupling) cp[k] = e;
    j["explicit_vertices"].push_back(
        {{"name", v.name}, {"legs", legs}, {"coupling", cp}, {"weight", v.weight}});
  }
  j["max_valence"] = t.max_valence;
  return j;
}

inline TheorySpec theory_from_json(const Json& j) {
  static const std::set<std::string> allowed = {"name",        "spacetime_dim",
                                                "couplings",   "edge_colors",
                                                "flags",       "explicit_vertices",
                                                "max_valence"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw TheoryError("unknown key " + it.key());
  TheorySpec t;
  t.name = j.value("name", "unnamed");
  t.spacetime_dim = j.value("spacetime_dim", 4);
  if (j.contains("couplings"))
    t.couplings = j.at("couplings").get<std::vector<std::string>>();
  if (j.contains("edge_colors")) {
    for (const auto& e : j.at("edge_colors")) {
      EdgeColor c;
      c.name = e.at("name").get<std::string>();
      std::string k = e.at("kind").get<std::string>();
      if (k == "gauge") c.kind = Kind::gauge;
      else if (k == "ghost") c.kind = Kind::ghost;
      else if (k == "matter") c.kind = Kind::matter;
      else throw TheoryError("unknown kind " + k);
      c.oriented = e.value("oriented", c.kind == Kind::ghost);
      c.weight = e.value("weight", 2);
      t.edge_colors.push_back(c);
    }
  }
  if (j.contains("flags")) {
    const auto& f = j.at("flags");
    if (f.contains("alpha"))
      for (auto it = f["alpha"].begin(); it != f["alpha"].end(); ++it)
        t.flags.alpha[std::stoi(it.key())] = it.value().get<int>();
    if (f.contains("beta"))
      for (auto it = f["beta"].begin(); it != f["beta"].end(); ++it)
        t.flags.beta[std::stoi(it.key())] = it.value().get<int>();
    if (f.contains("gamma"))
      for (auto it = f["gamma"].begin(); it != f["gamma"].end(); ++it) {
        std::string key = it.key();
        if (key.size() < 5 || key.front() != '(' || key.back() != ')')
          throw TheoryError("bad gamma key " + key);
        auto comma = key.find(',');
        int gi = std::stoi(key.substr(1, comma - 1));
        int ki = std::stoi(key.substr(comma + 1, key.size() - comma - 2));
        t.flags.gamma[{gi, ki}] = it.value().get<int>();
      }
  }
  t.max_valence = j.value("max_valence", 4);
  if (j.contains("explicit_vertices") && !j.at("explicit_vertices").empty()) {
    for (const auto& e : j.at("explicit_vertices")) {
      VertexType v;
      v.name = e.at("name").get<std::string>();
      for (const auto& tok : e.at("legs")) {
        std::string s = tok.get<std::string>();
        LegSpec l;
        if (!s.empty() && (s.back() == '>' || s.back() == '<')) {
          l.dir = s.back() == '>' ? +1 : -1;
          s.pop_back();
        }
        l.color = s;
        v.legs.push_back(l);
      }
      std::sort(v.legs.begin(), v.legs.end());
      if (e.contains("coupling"))
        for (auto it = e["coupling"].begin(); it != e["coupling"].end(); ++it)
          v.coupling[it.key()] = it.value().get<int>();
      v.weight = e.value("weight", 0);
      t.vertex_types.push_back(v);
    }
  } else {
    generate_vertices_from_flags(t);
  }
  validate(t);
  return t;
}

inline std::string theory_digest(const TheorySpec& t) {
  return hex64(fnv1a(theory_to_json(t).dump()));
}

// External leg of an amplitude: color plus flow direction (into the graph = +1).
struct Profile {
  std::vector<LegSpec> legs;  // ordered: the external order sigma
  auto operator<=>(const Profile&) const = default;
};

enum class AmpClass { propagator_residue, vertex_residue, pure_quantum_correction };

inline AmpClass classify(const TheorySpec& t, const Profile& p) {
  if (p.legs.size() == 2 && p.legs[0].color == p.legs[1].color) {
    const auto* c = t.color(p.legs[0].color);
    if (c && (!c->oriented || p.legs[0].dir + p.legs[1].dir == 0))
      return AmpClass::propagator_residue;
  }
  // Vertex slot directions are from the vertex's side: an incoming external
  // ghost line occupies an in-slot, so directions match directly.
  if (t.vertex_by_legs(p.legs)) return AmpClass::vertex_residue;
  return AmpClass::pure_quantum_correction;
}

// Canonical external ordering for a sector (i gauge, ghost pairs, matter).
inline Profile sector_profile(const TheorySpec& t, int i, int j, int k) {
  Profile p;
  const std::string g = t.gauge_color(), gh = t.ghost_color();
  std::string mc;
  for (const auto& c : t.edge_colors)
    if (c.kind == Kind::matter) mc = c.name;
  for (int n = 0; n < i; ++n) p.legs.push_back({g, 0});
  for (int n = 0; n < j; ++n) p.legs.push_back({gh, (n < (j + 1) / 2) ? +1 : -1});
  for (int n = 0; n < k; ++n) p.legs.push_back({mc, 0});
  return p;
}

}  // namespace feynhopf
