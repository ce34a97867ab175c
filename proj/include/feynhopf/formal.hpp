#pragma once

#include <map>
#include <string>
#include <vector>

#include "feynhopf/rational.hpp"

namespace feynhopf {

// Commutative monomial of graph classes: a sorted multiset of canonical keys.
// The empty monomial is the algebra unit.
using Monomial = std::vector<std::string>;

inline Monomial mono_mul(Monomial a, const Monomial& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  return a;
}

// Rational linear combination of monomials.
struct FormalSum {
  std::map<Monomial, Rat> terms;

  static FormalSum unit() { return of(Monomial{}); }
  static FormalSum of(Monomial m, Rat c = 1) {
    FormalSum s;
    s.add(std::move(m), std::move(c));
    return s;
  }

  void add(Monomial m, Rat c) {
    if (c == 0) return;
    auto [it, fresh] = terms.emplace(std::move(m), c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms.erase(it);
    }
  }

  bool is_zero() const { return terms.empty(); }

  Rat coeff(const Monomial& m) const {
    auto it = terms.find(m);
    return it == terms.end() ? Rat(0) : it->second;
  }

  FormalSum& operator+=(const FormalSum& o) {
    for (const auto& [m, c] : o.terms) add(m, c);
    return *this;
  }
  FormalSum& operator-=(const FormalSum& o) {
    for (const auto& [m, c] : o.terms) add(m, -c);
    return *this;
  }
  FormalSum& operator*=(const Rat& c) {
    if (c == 0) {
      terms.clear();
      return *this;
    }
    for (auto& [m, v] : terms) v *= c;
    return *this;
  }

  friend FormalSum operator+(FormalSum a, const FormalSum& b) { return a += b; }
  friend FormalSum operator-(FormalSum a, const FormalSum& b) { return a -= b; }
  friend FormalSum operator*(FormalSum a, const Rat& c) { return a *= c; }
  friend FormalSum operator*(const Rat& c, FormalSum a) { return a *= c; }
  friend FormalSum operator*(const FormalSum& a, const FormalSum& b) {
    FormalSum r;
    for (const auto& [ma, ca] : a.terms)
      for (const auto& [mb, cb] : b.terms) r.add(mono_mul(ma, mb), ca * cb);
    return r;
  }
  friend bool operator==(const FormalSum& a, const FormalSum& b) { return a.terms == b.terms; }
};

// Rational combination of simple tensors of monomials. The tensor arity is
// fixed by the caller; all keys in one sum carry the same length.
struct TensorSum {
  std::map<std::vector<Monomial>, Rat> terms;

  void add(std::vector<Monomial> slots, Rat c) {
    if (c == 0) return;
    auto [it, fresh] = terms.emplace(std::move(slots), c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms.erase(it);
    }
  }

  bool is_zero() const { return terms.empty(); }

  TensorSum& operator+=(const TensorSum& o) {
    for (const auto& [s, c] : o.terms) add(s, c);
    return *this;
  }
  TensorSum& operator-=(const TensorSum& o) {
    for (const auto& [s, c] : o.terms) add(s, -c);
    return *this;
  }
  friend TensorSum operator+(TensorSum a, const TensorSum& b) { return a += b; }
  friend TensorSum operator-(TensorSum a, const TensorSum& b) { return a -= b; }
  friend bool operator==(const TensorSum& a, const TensorSum& b) { return a.terms == b.terms; }

  // slotwise product: (a1 x a2 x ...)(b1 x b2 x ...) = a1 b1 x a2 b2 x ...
  friend TensorSum operator*(const TensorSum& a, const TensorSum& b) {
    TensorSum r;
    for (const auto& [sa, ca] : a.terms)
      for (const auto& [sb, cb] : b.terms) {
        std::vector<Monomial> s;
        s.reserve(sa.size());
        for (std::size_t i = 0; i < sa.size(); ++i) s.push_back(mono_mul(sa[i], sb[i]));
        r.add(std::move(s), ca * cb);
      }
    return r;
  }
};

inline TensorSum tensor_unit(std::size_t arity) {
  TensorSum t;
  t.add(std::vector<Monomial>(arity), 1);
  return t;
}

}  // namespace feynhopf
