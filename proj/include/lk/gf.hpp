#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lk/bigint.hpp"

namespace lk {

// Prime field F_p for small p. Elements are residues 0..p-1 stored in uint8_t.
class FqField {
 public:
  explicit FqField(int p) : p_(p) {
    if (p < 2) throw std::invalid_argument("field order must be a prime >= 2");
    for (int d = 2; d * d <= p; ++d)
      if (p % d == 0) throw std::invalid_argument("field order must be prime");
    inv_.assign(p_, 0);
    for (int a = 1; a < p_; ++a)
      for (int b = 1; b < p_; ++b)
        if (a * b % p_ == 1) { inv_[a] = (uint8_t)b; break; }
  }

  int p() const { return p_; }
  uint8_t add(uint8_t a, uint8_t b) const { return (uint8_t)((a + b) % p_); }
  uint8_t sub(uint8_t a, uint8_t b) const { return (uint8_t)((a + p_ - b) % p_); }
  uint8_t mul(uint8_t a, uint8_t b) const { return (uint8_t)(a * b % p_); }
  uint8_t neg(uint8_t a) const { return (uint8_t)((p_ - a) % p_); }
  uint8_t inv(uint8_t a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    return inv_[a];
  }

  // |GL_d(F_p)| as an exact integer.
  BigInt gl_order(int d) const {
    BigInt r(1);
    BigInt pd(1);
    for (int i = 0; i < d; ++i) pd = pd * BigInt(p_);
    BigInt pk(1);
    for (int k = 0; k < d; ++k) {
      r = r * (pd - pk);
      pk = pk * BigInt(p_);
    }
    return r;
  }

 private:
  int p_;
  std::vector<uint8_t> inv_;
};

// Dense matrix over F_p. Row-major, entries uint8_t.
struct GFMat {
  int rows = 0, cols = 0;
  std::vector<uint8_t> a;

  GFMat() = default;
  GFMat(int r, int c) : rows(r), cols(c), a((size_t)r * c, 0) {}

  uint8_t& at(int i, int j) { return a[(size_t)i * cols + j]; }
  uint8_t at(int i, int j) const { return a[(size_t)i * cols + j]; }

  static GFMat identity(int n) {
    GFMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  bool operator==(const GFMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
  bool operator<(const GFMat& o) const {
    if (rows != o.rows) return rows < o.rows;
    if (cols != o.cols) return cols < o.cols;
    return a < o.a;
  }
};

inline GFMat gf_mul(const FqField& F, const GFMat& x, const GFMat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("gf_mul: shape mismatch");
  GFMat r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      uint8_t v = x.at(i, k);
      if (!v) continue;
      for (int j = 0; j < y.cols; ++j)
        r.at(i, j) = F.add(r.at(i, j), F.mul(v, y.at(k, j)));
    }
  return r;
}

inline GFMat gf_add(const FqField& F, const GFMat& x, const GFMat& y) {
  GFMat r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = F.add(r.a[i], y.a[i]);
  return r;
}

inline GFMat gf_sub(const FqField& F, const GFMat& x, const GFMat& y) {
  GFMat r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = F.sub(r.a[i], y.a[i]);
  return r;
}

inline int gf_rank(const FqField& F, GFMat m) {
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int piv = -1;
    for (int i = r; i < m.rows; ++i)
      if (m.at(i, c)) { piv = i; break; }
    if (piv < 0) continue;
    for (int j = 0; j < m.cols; ++j) std::swap(m.a[(size_t)piv * m.cols + j], m.a[(size_t)r * m.cols + j]);
    uint8_t iv = F.inv(m.at(r, c));
    for (int j = 0; j < m.cols; ++j) m.at(r, j) = F.mul(m.at(r, j), iv);
    for (int i = 0; i < m.rows; ++i) {
      if (i == r || !m.at(i, c)) continue;
      uint8_t f = m.at(i, c);
      for (int j = 0; j < m.cols; ++j) m.at(i, j) = F.sub(m.at(i, j), F.mul(f, m.at(r, j)));
    }
    ++r;
  }
  return r;
}

// Reduced row echelon form in place; returns pivot columns.
inline std::vector<int> gf_rref(const FqField& F, GFMat& m) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int piv = -1;
    for (int i = r; i < m.rows; ++i)
      if (m.at(i, c)) { piv = i; break; }
    if (piv < 0) continue;
    for (int j = 0; j < m.cols; ++j) std::swap(m.a[(size_t)piv * m.cols + j], m.a[(size_t)r * m.cols + j]);
    uint8_t iv = F.inv(m.at(r, c));
    for (int j = 0; j < m.cols; ++j) m.at(r, j) = F.mul(m.at(r, j), iv);
    for (int i = 0; i < m.rows; ++i) {
      if (i == r || !m.at(i, c)) continue;
      uint8_t f = m.at(i, c);
      for (int j = 0; j < m.cols; ++j) m.at(i, j) = F.sub(m.at(i, j), F.mul(f, m.at(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

// Basis of the right kernel, returned as columns of a cols x k matrix.
inline GFMat gf_kernel(const FqField& F, GFMat m) {
  int cols = m.cols;
  std::vector<int> piv = gf_rref(F, m);
  std::vector<bool> is_piv(cols, false);
  for (int c : piv) is_piv[c] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < cols; ++c)
    if (!is_piv[c]) free_cols.push_back(c);
  GFMat ker(cols, (int)free_cols.size());
  for (size_t k = 0; k < free_cols.size(); ++k) {
    int fc = free_cols[k];
    ker.at(fc, (int)k) = 1;
    for (size_t r = 0; r < piv.size(); ++r)
      ker.at(piv[r], (int)k) = F.neg(m.at((int)r, fc));
  }
  return ker;
}

inline bool gf_invertible(const FqField& F, const GFMat& m) {
  return m.rows == m.cols && gf_rank(F, m) == m.rows;
}

inline GFMat gf_inverse(const FqField& F, const GFMat& m) {
  if (m.rows != m.cols) throw std::invalid_argument("gf_inverse: not square");
  int n = m.rows;
  GFMat w(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) w.at(i, j) = m.at(i, j);
    w.at(i, n + i) = 1;
  }
  auto piv = gf_rref(F, w);
  if ((int)piv.size() != n || piv[n - 1] != n - 1) throw std::domain_error("gf_inverse: singular");
  GFMat r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r.at(i, j) = w.at(i, n + j);
  return r;
}

// Enumerate all matrices of shape r x c over F_p (small shapes only).
inline void gf_enumerate(const FqField& F, int r, int c, const std::function<void(const GFMat&)>& fn) {
  GFMat m(r, c);
  size_t n = m.a.size();
  while (true) {
    fn(m);
    size_t i = 0;
    while (i < n && m.a[i] == F.p() - 1) m.a[i++] = 0;
    if (i == n) break;
    m.a[i]++;
  }
}

inline std::string gf_key(const GFMat& m) {
  std::string s;
  s.reserve(m.a.size() + 2);
  s.push_back((char)m.rows);
  s.push_back((char)m.cols);
  for (uint8_t v : m.a) s.push_back((char)v);
  return s;
}

}  // namespace lk
