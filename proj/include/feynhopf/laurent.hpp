#pragma once

#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include "feynhopf/rational.hpp"

namespace feynhopf {

struct LaurentError : std::runtime_error {
  explicit LaurentError(const std::string& w) : std::runtime_error(w) {}
};

// Truncated Laurent series in the regulator eps over the rationals.
// Exponents live in [-pole_bound, order_bound]: coefficients above the
// order bound are dropped (quotient by the truncation ideal, so products
// stay associative), a coefficient below the pole bound is a hard error.
// Kept in normal form: no zero coefficients stored.
class LaurentSeries {
 public:
  LaurentSeries(int pole_bound, int order_bound) : pb_(pole_bound), ob_(order_bound) {
    if (pb_ < 0 || ob_ < 0) throw LaurentError("bounds must be nonnegative");
  }

  static LaurentSeries scalar(const Rat& v, int pole_bound, int order_bound) {
    LaurentSeries s(pole_bound, order_bound);
    s.add(0, v);
    return s;
  }

  static LaurentSeries monomial(int k, const Rat& v, int pole_bound, int order_bound) {
    LaurentSeries s(pole_bound, order_bound);
    s.add(k, v);
    return s;
  }

  int pole_bound() const { return pb_; }
  int order_bound() const { return ob_; }
  const std::map<int, Rat>& coefficients() const { return c_; }

  Rat coeff(int k) const {
    auto it = c_.find(k);
    return it == c_.end() ? Rat(0) : it->second;
  }

  void add(int k, const Rat& v) {
    if (feynhopf::is_zero(v)) return;
    if (k > ob_) return;
    if (k < -pb_) throw LaurentError("pole order exceeds bound, increase pole_bound");
    auto [it, fresh] = c_.emplace(k, v);
    if (!fresh) {
      it->second += v;
      if (feynhopf::is_zero(it->second)) c_.erase(it);
    }
  }

  bool is_zero() const { return c_.empty(); }

  bool pole_free() const { return c_.empty() || c_.begin()->first >= 0; }

  LaurentSeries& operator+=(const LaurentSeries& o) {
    check(o);
    for (const auto& [k, v] : o.c_) add(k, v);
    return *this;
  }
  LaurentSeries& operator-=(const LaurentSeries& o) {
    check(o);
    for (const auto& [k, v] : o.c_) add(k, -v);
    return *this;
  }
  LaurentSeries& operator*=(const Rat& r) {
    if (feynhopf::is_zero(r)) {
      c_.clear();
      return *this;
    }
    for (auto& [k, v] : c_) v *= r;
    return *this;
  }

  friend LaurentSeries operator+(LaurentSeries a, const LaurentSeries& b) { return a += b; }
  friend LaurentSeries operator-(LaurentSeries a, const LaurentSeries& b) { return a -= b; }
  friend LaurentSeries operator-(LaurentSeries a) { return a *= Rat(-1); }
  friend LaurentSeries operator*(LaurentSeries a, const Rat& r) { return a *= r; }
  friend LaurentSeries operator*(const Rat& r, LaurentSeries a) { return a *= r; }

  friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
    a.check(b);
    LaurentSeries r(a.pb_, a.ob_);
    for (const auto& [i, u] : a.c_)
      for (const auto& [j, v] : b.c_) r.add(i + j, u * v);
    return r;
  }

  friend bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
    return a.c_ == b.c_;
  }

 private:
  void check(const LaurentSeries& o) const {
    if (pb_ != o.pb_ || ob_ != o.ob_) throw LaurentError("mixed truncation bounds");
  }

  int pb_, ob_;
  std::map<int, Rat> c_;
};

// Renormalization scheme: an idempotent projector picking the singular part
// of a series. Minimal subtraction keeps the strictly negative powers; it is
// a Rota-Baxter operator of weight -1, which is what makes the counterterm
// character multiplicative.
class Scheme {
 public:
  explicit Scheme(std::string name = "ms") : name_(std::move(name)) {
    if (name_ != "ms") throw LaurentError("unknown scheme " + name_);
  }

  const std::string& name() const { return name_; }

  LaurentSeries project(const LaurentSeries& f) const {
    LaurentSeries out(f.pole_bound(), f.order_bound());
    for (const auto& [k, v] : f.coefficients())
      if (k < 0) out.add(k, v);
    return out;
  }

 private:
  std::string name_;
};

// R(a)R(b) + R(ab) = R(R(a)b + a R(b)) on random rational Laurent pairs.
// Exponents are drawn from half the bound window so products stay in range.
inline bool check_rota_baxter(const Scheme& R, std::mt19937_64& rng, int samples,
                              int pole_bound = 6, int order_bound = 6) {
  auto rnd = [&rng](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<unsigned long>(hi - lo + 1));
  };
  auto mk = [&]() {
    LaurentSeries s(pole_bound, order_bound);
    int n = rnd(1, 4);
    for (int i = 0; i < n; ++i)
      s.add(rnd(-pole_bound / 2, order_bound / 2), rat(rnd(-9, 9), rnd(1, 9)));
    return s;
  };
  for (int i = 0; i < samples; ++i) {
    LaurentSeries a = mk(), b = mk();
    LaurentSeries lhs = R.project(a) * R.project(b) + R.project(a * b);
    LaurentSeries rhs = R.project(R.project(a) * b + a * R.project(b));
    if (!(lhs == rhs)) return false;
  }
  return true;
}

}  // namespace feynhopf
