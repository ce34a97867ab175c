#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>

#include "feynhopf/greens.hpp"
#include "feynhopf/laurent.hpp"

namespace feynhopf {

// An algebra character with values in truncated Laurent series: multiplicative
// on products of generators, 1 on the empty product. Holds a reference to the
// evaluation rule, so the algebra passed to a factory must outlive the object.
class Character {
 public:
  // Toy regularized amplitude: a graph with L loops and E internal edges maps
  // to (c/eps)^L (1+eps)^E. Bare corollas and the unit map to 1.
  static Character per_loop_pole(const HopfAlgebra& H, const Rat& c, int pole_bound,
                                 int order_bound) {
    Character phi(pole_bound, order_bound);
    phi.at_ = [&H, c, pole_bound, order_bound](const std::string& key) {
      const FeynmanGraph& g = H.rep(key);
      LaurentSeries v = LaurentSeries::scalar(Rat(1), pole_bound, order_bound);
      LaurentSeries pole = LaurentSeries::monomial(-1, c, pole_bound, order_bound);
      LaurentSeries reg = LaurentSeries::scalar(Rat(1), pole_bound, order_bound);
      reg.add(1, Rat(1));
      for (int i = 0; i < graph_loops(g); ++i) v = v * pole;
      for (int i = 0; i < g.n_edges(); ++i) v = v * reg;
      return v;
    };
    return phi;
  }

  // User-supplied values per generator key; unlisted keys are an error.
  static Character from_table(std::map<std::string, LaurentSeries> table, int pole_bound,
                              int order_bound) {
    for (const auto& [key, v] : table)
      if (v.pole_bound() != pole_bound || v.order_bound() != order_bound)
        throw LaurentError("table entry for " + key + " has mismatched bounds");
    Character phi(pole_bound, order_bound);
    phi.at_ = [t = std::move(table)](const std::string& key) {
      auto it = t.find(key);
      if (it == t.end()) throw LaurentError("character table has no entry for " + key);
      return it->second;
    };
    return phi;
  }

  int pole_bound() const { return pb_; }
  int order_bound() const { return ob_; }

  LaurentSeries operator()(const std::string& key) const { return at_(key); }

  LaurentSeries eval(const Monomial& m) const {
    LaurentSeries v = LaurentSeries::scalar(Rat(1), pb_, ob_);
    for (const auto& key : m) v = v * at_(key);
    return v;
  }

  LaurentSeries eval(const FormalSum& x) const {
    LaurentSeries v(pb_, ob_);
    for (const auto& [m, c] : x.terms) v += eval(m) * c;
    return v;
  }

 private:
  Character(int pb, int ob) : pb_(pb), ob_(ob) {}
  int pb_, ob_;
  std::function<LaurentSeries(const std::string&)> at_;
};

// Birkhoff decomposition of a character: splits phi into a counterterm part
// S (pure poles under minimal subtraction) and a renormalized part S * phi
// (pole free), convolution product taken along the coproduct. The recursion
//   S(x) = -R[ phi(x) + sum S(x') phi(x'') ]   over proper coproduct terms
// terminates because every left factor paired with a non-unit right factor
// strictly drops the combined loop-plus-factor degree.
class Birkhoff {
 public:
  Birkhoff(HopfAlgebra& H, const Character& phi, Scheme scheme = Scheme("ms"))
      : H_(H), phi_(phi), R_(std::move(scheme)) {}

  const Scheme& scheme() const { return R_; }

  const LaurentSeries& counterterm(const Monomial& m) {
    auto hit = memo_.find(m);
    if (hit != memo_.end()) return hit->second;
    if (m.empty()) return memo_.emplace(m, one()).first->second;
    LaurentSeries bar(phi_.pole_bound(), phi_.order_bound());
    TensorSum delta = H_.coproduct(m);
    for (const auto& [slots, c] : delta.terms) {
      if (slots[1].empty()) continue;
      bar += counterterm(slots[0]) * phi_.eval(slots[1]) * c;
    }
    return memo_.emplace(m, -R_.project(bar)).first->second;
  }

  LaurentSeries counterterm(const FormalSum& x) {
    LaurentSeries v(phi_.pole_bound(), phi_.order_bound());
    for (const auto& [m, c] : x.terms) v += counterterm(m) * c;
    return v;
  }

  // (S * phi)(m); a leftover pole means the subtraction failed, a hard error.
  LaurentSeries renormalized(const Monomial& m) {
    LaurentSeries v(phi_.pole_bound(), phi_.order_bound());
    TensorSum delta = H_.coproduct(m);
    for (const auto& [slots, c] : delta.terms)
      v += counterterm(slots[0]) * phi_.eval(slots[1]) * c;
    if (!v.pole_free()) throw LaurentError("residual pole in renormalized value");
    return v;
  }

  LaurentSeries renormalized(const FormalSum& x) {
    LaurentSeries v(phi_.pole_bound(), phi_.order_bound());
    for (const auto& [m, c] : x.terms) v += renormalized(m) * c;
    return v;
  }

  // Multiplicative renormalization constant for one residue: the counterterm
  // character applied to the combinatorial amplitude of that residue. Only
  // quantum corrections enter, the series carries no bare tree terms.
  LaurentSeries z_factor(GreensCalculator& G, const std::string& residue) {
    return counterterm(G.x_capital(residue));
  }

 private:
  LaurentSeries one() const {
    return LaurentSeries::scalar(Rat(1), phi_.pole_bound(), phi_.order_bound());
  }

  HopfAlgebra& H_;
  const Character& phi_;
  Scheme R_;
  std::map<Monomial, LaurentSeries> memo_;
};

}  // namespace feynhopf
