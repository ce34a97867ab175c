#pragma once

#include <set>

#include "feynhopf/divergence.hpp"
#include "feynhopf/enumerate.hpp"
#include "feynhopf/formal.hpp"

namespace feynhopf {

// Renormalization Hopf algebra on 1PI graph classes. Elements are identified
// in classed leg mode: external legs are interchangeable within their (color,
// direction, tau) class. Subgraph components cut out of a larger graph carry
// no distinguished leg order, so this is the identification under which the
// coproduct is well defined; series weights keep using the fixed-leg
// symmetry factor and enter this space through the classed coarsening.
struct HopfAlgebra {
  TheorySpec theory;

  explicit HopfAlgebra(TheorySpec t) : theory(std::move(t)) {}

  std::string intern(const FeynmanGraph& g) {
    std::string k = canonical_key(theory, g, LegMode::classed);
    reps_.emplace(k, g);
    return k;
  }

  const FeynmanGraph& rep(const std::string& key) const {
    auto it = reps_.find(key);
    if (it == reps_.end()) throw GraphError("unknown generator " + key);
    return it->second;
  }

  // Delta(G) = I x G + [omega >= 0] G x I + sum over proper admissible edge
  // subsets of (component classes) x (cograph class), one unit per subset
  const TensorSum& coproduct_generator(const std::string& key) {
    auto memo = delta_.find(key);
    if (memo != delta_.end()) return memo->second;
    FeynmanGraph g = rep(key);
    TensorSum d;
    d.add({Monomial{}, Monomial{key}}, 1);
    if (omega(theory, g) >= 0) d.add({Monomial{key}, Monomial{}}, 1);
    for (const auto& sub : divergent_subsets(theory, g)) {
      Monomial left;
      for (const auto& part : subgraph_components(g, sub)) left.push_back(intern(part));
      std::sort(left.begin(), left.end());
      auto co = contract_subgraph(theory, g, sub);
      if (!co) throw GraphError("admissible subset failed to contract");
      d.add({std::move(left), Monomial{intern(*co)}}, 1);
    }
    return delta_.emplace(key, std::move(d)).first->second;
  }

  TensorSum coproduct(const Monomial& m) {
    TensorSum out = tensor_unit(2);
    for (const auto& k : m) out = out * coproduct_generator(k);
    return out;
  }

  TensorSum coproduct(const FormalSum& x) {
    TensorSum out;
    for (const auto& [m, c] : x.terms) {
      TensorSum d = coproduct(m);
      for (const auto& [s, v] : d.terms) out.add(s, v * c);
    }
    return out;
  }

  Rat counit(const FormalSum& x) const { return x.coeff(Monomial{}); }

  // S(G) = -G - sum of S(parts) * cograph over the proper coproduct terms
  const FormalSum& antipode_generator(const std::string& key) {
    auto memo = spode_.find(key);
    if (memo != spode_.end()) return memo->second;
    const TensorSum d = coproduct_generator(key);  // copy: recursion inserts
    FormalSum s = FormalSum::of(Monomial{key}, -1);
    for (const auto& [slots, c] : d.terms) {
      if (slots[0].empty() || slots[1].empty()) continue;
      s -= antipode(FormalSum::of(slots[0], c)) * FormalSum::of(slots[1]);
    }
    return spode_.emplace(key, std::move(s)).first->second;
  }

  FormalSum antipode(const FormalSum& x) {
    FormalSum out;
    for (const auto& [m, c] : x.terms) {
      FormalSum p = FormalSum::unit();
      for (const auto& k : m) p = p * antipode_generator(k);
      out += p * c;
    }
    return out;
  }

  bool check_counit(const std::string& key) {
    const TensorSum& d = coproduct_generator(key);
    FormalSum left, right, self = FormalSum::of(Monomial{key});
    for (const auto& [s, c] : d.terms) {
      if (s[0].empty()) left.add(s[1], c);
      if (s[1].empty()) right.add(s[0], c);
    }
    return left == self && right == self;
  }

  bool check_coassociativity(const std::string& key) {
    const TensorSum d = coproduct_generator(key);
    TensorSum lhs, rhs;
    for (const auto& [s, c] : d.terms) {
      for (const auto& [t2, c2] : coproduct(s[0]).terms) lhs.add({t2[0], t2[1], s[1]}, c * c2);
      for (const auto& [t2, c2] : coproduct(s[1]).terms) rhs.add({s[0], t2[0], t2[1]}, c * c2);
    }
    return lhs == rhs;
  }

  bool check_antipode(const std::string& key) {
    const TensorSum d = coproduct_generator(key);
    FormalSum lhs, rhs;
    for (const auto& [s, c] : d.terms) {
      lhs += antipode(FormalSum::of(s[0], c)) * FormalSum::of(s[1]);
      rhs += FormalSum::of(s[0], c) * antipode(FormalSum::of(s[1]));
    }
    return lhs.is_zero() && rhs.is_zero();
  }

 private:
  std::map<std::string, FeynmanGraph> reps_;
  std::map<std::string, TensorSum> delta_;
  std::map<std::string, FormalSum> spode_;
};

// drop the unit component: projection onto the augmentation ideal
inline FormalSum augmentation(FormalSum x) {
  x.terms.erase(Monomial{});
  return x;
}

// residues carrying the renormalization Hopf algebra: one per propagator
// color and one per interaction vertex
inline std::vector<Profile> residue_profiles(const TheorySpec& t) {
  std::vector<Profile> out;
  for (const auto& c : t.edge_colors) {
    Profile p;
    if (c.oriented)
      p.legs = {{c.name, +1}, {c.name, -1}};
    else
      p.legs = {{c.name, 0}, {c.name, 0}};
    out.push_back(std::move(p));
  }
  for (const auto& v : t.vertex_types) {
    Profile p;
    p.legs = v.legs;
    out.push_back(std::move(p));
  }
  return out;
}

// all generator classes up to the loop bound: 1PI graphs of every residue
inline std::vector<std::string> hopf_generators(HopfAlgebra& H, int max_loops) {
  EnumOptions opt;
  opt.max_loops = max_loops;
  opt.one_pi_only = true;
  opt.include_bare = false;
  std::set<std::string> seen;
  for (const auto& p : residue_profiles(H.theory))
    for (const auto& g : enumerate_graphs(H.theory, p, opt)) seen.insert(H.intern(g));
  return {seen.begin(), seen.end()};
}

}  // namespace feynhopf
