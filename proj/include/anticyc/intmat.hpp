#pragma once

// Dense matrices over Z with arbitrary-precision entries: Hermite and Smith
// normal forms, integer kernels, determinants.

#include "anticyc/common.hpp"

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace anticyc {

using IntVector = std::vector<BigInt>;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(std::size_t cols, const std::vector<IntVector>& rows) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw std::invalid_argument("IntMatrix: ragged rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  BigInt& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntVector row(std::size_t i) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
  }

  void append_row(const IntVector& r) {
    if (r.size() != cols_) throw std::invalid_argument("IntMatrix::append_row: width mismatch");
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  IntMatrix operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("IntMatrix::operator*: dimension mismatch");
    IntMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const BigInt& a = (*this)(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
      }
    return r;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const BigInt& x) { return x == 0; });
  }

  bool operator==(const IntMatrix& o) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

/// Row-style Hermite normal form of the row lattice: echelon rows with
/// positive pivots and entries above each pivot reduced into [0, pivot).
/// Zero rows are removed, so the result is a basis of the row lattice.
inline IntMatrix hermite_form(const IntMatrix& m) {
  const std::size_t cols = m.cols();
  std::vector<IntVector> pool;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    IntVector r = m.row(i);
    if (std::any_of(r.begin(), r.end(), [](const BigInt& x) { return x != 0; })) pool.push_back(std::move(r));
  }
  std::vector<IntVector> out;
  std::vector<std::size_t> pivot_cols;
  for (std::size_t c = 0; c < cols && !pool.empty(); ++c) {
    while (true) {
      std::size_t best = pool.size();
      for (std::size_t i = 0; i < pool.size(); ++i)
        if (pool[i][c] != 0 && (best == pool.size() || big_abs(pool[i][c]) < big_abs(pool[best][c]))) best = i;
      if (best == pool.size()) break;
      bool done = true;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (i == best || pool[i][c] == 0) continue;
        BigInt q = floor_div(pool[i][c], pool[best][c]);
        for (std::size_t j = c; j < cols; ++j) pool[i][j] -= q * pool[best][j];
        if (pool[i][c] != 0) done = false;
      }
      if (done) {
        IntVector piv = std::move(pool[best]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
        if (piv[c] < 0)
          for (auto& x : piv) x = -x;
        out.push_back(std::move(piv));
        pivot_cols.push_back(c);
        std::erase_if(pool, [](const IntVector& r) {
          return std::all_of(r.begin(), r.end(), [](const BigInt& x) { return x == 0; });
        });
        break;
      }
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t c = pivot_cols[i];
    for (std::size_t k = 0; k < i; ++k) {
      BigInt q = floor_div(out[k][c], out[i][c]);
      if (q == 0) continue;
      for (std::size_t j = c; j < cols; ++j) out[k][j] -= q * out[i][j];
    }
  }
  IntMatrix h(0, cols);
  for (auto& r : out) h.append_row(r);
  return h;
}

inline std::size_t integer_rank(const IntMatrix& m) { return hermite_form(m).rows(); }

/// Coordinates c with c * H = v for H in Hermite form, or nullopt when v is
/// not in the row lattice.
inline std::optional<IntVector> hermite_coordinates(const IntMatrix& h, IntVector v) {
  if (v.size() != h.cols()) throw std::invalid_argument("hermite_coordinates: width mismatch");
  IntVector c(h.rows());
  std::size_t col = 0;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    while (h(i, col) == 0) {
      if (v[col] != 0) return std::nullopt;
      ++col;
    }
    if (v[col] % h(i, col) != 0) return std::nullopt;
    c[i] = v[col] / h(i, col);
    for (std::size_t j = col; j < h.cols(); ++j) v[j] -= c[i] * h(i, j);
  }
  for (const auto& x : v)
    if (x != 0) return std::nullopt;
  return c;
}

inline bool lattice_contains(const IntMatrix& h, const IntVector& v) { return hermite_coordinates(h, v).has_value(); }

/// Basis (as rows) of the lattice {x in Z^n : A x = 0}.
inline IntMatrix integer_kernel(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  IntMatrix aug(n, m + n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) aug(j, i) = a(i, j);
    aug(j, m + j) = 1;
  }
  IntMatrix h = hermite_form(aug);
  IntMatrix ker(0, n);
  for (std::size_t i = 0; i < h.rows(); ++i) {
    bool zero_head = true;
    for (std::size_t c = 0; c < m; ++c)
      if (h(i, c) != 0) {
        zero_head = false;
        break;
      }
    if (!zero_head) continue;
    IntVector r(n);
    for (std::size_t j = 0; j < n; ++j) r[j] = h(i, m + j);
    ker.append_row(r);
  }
  return ker;
}

/// Determinant by fraction-free Bareiss elimination.
inline BigInt integer_determinant(IntMatrix m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("integer_determinant: matrix not square");
  if (n == 0) return 1;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t s = k + 1;
      while (s < n && m(s, k) == 0) ++s;
      if (s == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(s, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

struct SmithDecomposition {
  IntMatrix U;  // m x m, unimodular
  IntMatrix D;  // m x n, diagonal with d_i | d_{i+1}
  IntMatrix V;  // n x n, unimodular
};

/// Smith normal form with transforms: A = U * D * V.
inline SmithDecomposition smith_form_integer(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  IntMatrix d = a, u = IntMatrix::identity(m), v = IntMatrix::identity(n);

  // Row op on D: row_i -= q * row_t  =>  U: col_t += q * col_i.
  auto row_sub = [&](std::size_t i, std::size_t t, const BigInt& q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < n; ++j) d(i, j) -= q * d(t, j);
    for (std::size_t r = 0; r < m; ++r) u(r, t) += q * u(r, i);
  };
  auto row_swap = [&](std::size_t i, std::size_t t) {
    if (i == t) return;
    for (std::size_t j = 0; j < n; ++j) std::swap(d(i, j), d(t, j));
    for (std::size_t r = 0; r < m; ++r) std::swap(u(r, i), u(r, t));
  };
  auto row_neg = [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) d(i, j) = -d(i, j);
    for (std::size_t r = 0; r < m; ++r) u(r, i) = -u(r, i);
  };
  // Column op on D: col_j -= q * col_t  =>  V: row_t += q * row_j.
  auto col_sub = [&](std::size_t j, std::size_t t, const BigInt& q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < m; ++i) d(i, j) -= q * d(i, t);
    for (std::size_t c = 0; c < n; ++c) v(t, c) += q * v(j, c);
  };
  auto col_swap = [&](std::size_t j, std::size_t t) {
    if (j == t) return;
    for (std::size_t i = 0; i < m; ++i) std::swap(d(i, j), d(i, t));
    for (std::size_t c = 0; c < n; ++c) std::swap(v(j, c), v(t, c));
  };

  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    bool found = false;
    std::size_t bi = t, bj = t;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (d(i, j) != 0 && (!found || big_abs(d(i, j)) < big_abs(d(bi, bj)))) {
          found = true;
          bi = i;
          bj = j;
        }
    if (!found) break;
    row_swap(bi, t);
    col_swap(bj, t);
    while (true) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        row_sub(i, t, floor_div(d(i, t), d(t, t)));
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        col_sub(j, t, floor_div(d(t, j), d(t, t)));
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) {
        // bring the smallest remaining entry of row t / column t to the pivot
        std::size_t si = t, sj = t;
        for (std::size_t i = t + 1; i < m; ++i)
          if (d(i, t) != 0 && big_abs(d(i, t)) < big_abs(d(si, sj))) {
            si = i;
            sj = t;
          }
        for (std::size_t j = t + 1; j < n; ++j)
          if (d(t, j) != 0 && big_abs(d(t, j)) < big_abs(d(si, sj))) {
            si = t;
            sj = j;
          }
        row_swap(si, t);
        col_swap(sj, t);
        continue;
      }
      bool divisible = true;
      for (std::size_t i = t + 1; i < m && divisible; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (d(i, j) % d(t, t) != 0) {
            // row_t += row_i, i.e. row_sub(t, i, -1)
            row_sub(t, i, BigInt(-1));
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    if (d(t, t) < 0) row_neg(t);
  }
  return {std::move(u), std::move(d), std::move(v)};
}

}  // namespace anticyc
