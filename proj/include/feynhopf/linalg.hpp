#pragma once

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <vector>

#include "feynhopf/rational.hpp"

namespace feynhopf::linalg {

// Sparse row over an indexed basis. Invariant: no stored zeros.
using SparseVec = std::map<int, Rat>;

inline void sv_axpy(SparseVec& y, const Rat& a, const SparseVec& x) {
  if (is_zero(a)) return;
  for (const auto& [i, v] : x) {
    auto it = y.find(i);
    if (it == y.end()) {
      y.emplace(i, a * v);
    } else {
      it->second += a * v;
      if (is_zero(it->second)) y.erase(it);
    }
  }
}

inline void sv_scale(SparseVec& y, const Rat& a) {
  assert(!is_zero(a));
  for (auto& [i, v] : y) v *= a;
}

// Incremental row echelon basis for span membership and dimension queries.
// Rows are kept pivot-normalized; pivot = smallest index with nonzero entry.
class SpanBasis {
 public:
  // Reduces v against the current basis. Returns the residual.
  SparseVec reduce(SparseVec v) const {
    while (!v.empty()) {
      auto it = rows_.find(v.begin()->first);
      if (it == rows_.end()) break;
      sv_axpy(v, -v.begin()->second, it->second);
    }
    // Eliminate interior coordinates that are pivots of later rows.
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto it = v.begin(); it != v.end(); ++it) {
        auto rit = rows_.find(it->first);
        if (rit != rows_.end()) {
          sv_axpy(v, -it->second, rit->second);
          changed = true;
          break;
        }
      }
    }
    return v;
  }

  bool contains(const SparseVec& v) const { return reduce(v).empty(); }

  // Adds v to the span. Returns true if the dimension grew.
  bool add(SparseVec v) {
    v = reduce(std::move(v));
    if (v.empty()) return false;
    sv_scale(v, Rat(1) / v.begin()->second);
    int piv = v.begin()->first;
    // Back-substitute into existing rows so stored rows stay fully reduced.
    for (auto& [p, row] : rows_) {
      auto it = row.find(piv);
      if (it != row.end()) sv_axpy(row, -it->second, v);
    }
    rows_.emplace(piv, std::move(v));
    return true;
  }

  std::size_t dim() const { return rows_.size(); }
  bool is_pivot(int i) const { return rows_.count(i) != 0; }
  const std::map<int, SparseVec>& rows() const { return rows_; }

 private:
  std::map<int, SparseVec> rows_;
};

using Matrix = std::vector<std::vector<Rat>>;

// Fraction-free Bareiss elimination. Exact rank without rational blowup in
// the pivots; input rows are cleared to a common integer denominator first.
inline std::size_t rank_bareiss(Matrix m) {
  if (m.empty() || m[0].empty()) return 0;
  const std::size_t nr = m.size(), nc = m[0].size();
  for (auto& row : m) {
    mpz_class lcm = 1;
    for (const auto& x : row) lcm = ::lcm(lcm, x.get_den());
    for (auto& x : row) {
      x *= Rat(lcm);
      x.canonicalize();
    }
  }
  Rat prev_pivot = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < nc && r < nr; ++c) {
    std::size_t sel = r;
    while (sel < nr && is_zero(m[sel][c])) ++sel;
    if (sel == nr) continue;
    std::swap(m[r], m[sel]);
    for (std::size_t i = r + 1; i < nr; ++i) {
      for (std::size_t j = c + 1; j < nc; ++j) {
        m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) / prev_pivot;
        m[i][j].canonicalize();
      }
      m[i][c] = 0;
    }
    prev_pivot = m[r][c];
    ++r;
  }
  return r;
}

// Plain Gaussian RREF over exact rationals. Returns pivot columns.
inline std::vector<std::size_t> rref(Matrix& m) {
  std::vector<std::size_t> pivots;
  if (m.empty() || m[0].empty()) return pivots;
  const std::size_t nr = m.size(), nc = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < nc && r < nr; ++c) {
    std::size_t sel = r;
    while (sel < nr && is_zero(m[sel][c])) ++sel;
    if (sel == nr) continue;
    std::swap(m[r], m[sel]);
    Rat inv = Rat(1) / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t i = 0; i < nr; ++i) {
      if (i == r || is_zero(m[i][c])) continue;
      Rat f = m[i][c];
      for (std::size_t j = 0; j < nc; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(const Matrix& m) { return rank_bareiss(m); }

// Basis of the right kernel, one vector per free column.
inline std::vector<std::vector<Rat>> kernel_basis(Matrix m) {
  if (m.empty() || m[0].empty()) return {};
  const std::size_t nc = m[0].size();
  auto pivots = rref(m);
  std::vector<bool> is_piv(nc, false);
  for (auto c : pivots) is_piv[c] = true;
  std::vector<std::vector<Rat>> out;
  for (std::size_t free_c = 0; free_c < nc; ++free_c) {
    if (is_piv[free_c]) continue;
    std::vector<Rat> v(nc, Rat(0));
    v[free_c] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free_c];
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace feynhopf::linalg
