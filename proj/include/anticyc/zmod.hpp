#pragma once

// Exact linear algebra over the chain ring Z/p^N.
//
// Submodules of (Z/p^N)^k are represented canonically by their Howell
// normal form: rows in echelon order, each pivot a power p^v, entries above
// a pivot reduced into [0, p^v), and closed under the "leading zeros"
// property so that greedy reduction decides membership.

#include "anticyc/common.hpp"

#include <algorithm>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace anticyc {

/// The ring Z/p^N.
class ZmodRing {
 public:
  ZmodRing() = default;
  ZmodRing(int64_t p, int N) : p_(p), N_(N) {
    if (!is_prime(p)) throw ValidationError("Z/p^N: p=" + std::to_string(p) + " is not prime");
    if (N < 1) throw ValidationError("Z/p^N: precision N must be >= 1");
    BigInt m = boost::multiprecision::pow(BigInt(p), N);
    if (m > (BigInt(1) << 62)) throw ValidationError("Z/p^N: modulus p^N exceeds 2^62");
    modulus_ = static_cast<int64_t>(m);
  }

  int64_t p() const { return p_; }
  int N() const { return N_; }
  int64_t modulus() const { return modulus_; }

  int64_t reduce(int64_t a) const { return floor_mod(a, modulus_); }
  int64_t reduce(const BigInt& a) const {
    BigInt r = a % modulus_;
    if (r < 0) r += modulus_;
    return static_cast<int64_t>(r);
  }
  int64_t add(int64_t a, int64_t b) const { return reduce(a + b); }
  int64_t sub(int64_t a, int64_t b) const { return reduce(a - b); }
  int64_t neg(int64_t a) const { return a == 0 ? 0 : modulus_ - a; }
  int64_t mul(int64_t a, int64_t b) const { return mulmod(a, b, modulus_); }

  /// p-adic valuation of a residue; N for zero.
  int valuation(int64_t a) const {
    if (a == 0) return N_;
    int v = 0;
    while (a % p_ == 0) {
      a /= p_;
      ++v;
    }
    return v;
  }

  int64_t power_of_p(int v) const { return v >= N_ ? 0 : ipow(p_, v); }

  /// Inverse of a unit (valuation 0).
  int64_t inverse(int64_t u) const {
    if (u % p_ == 0) throw PreconditionError("Z/p^N: inverse of a non-unit");
    // Euler: u^(phi(p^N) - 1)
    int64_t phi = modulus_ / p_ * (p_ - 1);
    return powmod(u, phi - 1, modulus_);
  }

  bool operator==(const ZmodRing& o) const { return p_ == o.p_ && N_ == o.N_; }

 private:
  int64_t p_ = 2;
  int N_ = 1;
  int64_t modulus_ = 2;
};

/// Dense row-major matrix over Z/p^N with reduced entries.
class ZMatrix {
 public:
  ZMatrix() = default;
  ZMatrix(const ZmodRing& ring, std::size_t rows, std::size_t cols)
      : ring_(ring), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static ZMatrix identity(const ZmodRing& ring, std::size_t n) {
    ZMatrix m(ring, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1 % ring.modulus();
    return m;
  }

  static ZMatrix from_rows(const ZmodRing& ring, std::size_t cols,
                           const std::vector<std::vector<int64_t>>& rows) {
    ZMatrix m(ring, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw std::invalid_argument("ZMatrix: ragged rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = ring.reduce(rows[i][j]);
    }
    return m;
  }

  const ZmodRing& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  int64_t& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  int64_t operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const int64_t> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::vector<int64_t> row_vector(std::size_t i) const {
    auto r = row(i);
    return {r.begin(), r.end()};
  }

  void append_row(std::span<const int64_t> r) {
    if (r.size() != cols_) throw std::invalid_argument("ZMatrix::append_row: width mismatch");
    for (int64_t x : r) data_.push_back(ring_.reduce(x));
    ++rows_;
  }

  ZMatrix transpose() const {
    ZMatrix t(ring_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  std::vector<int64_t> apply(std::span<const int64_t> x) const {
    if (x.size() != cols_) throw std::invalid_argument("ZMatrix::apply: dimension mismatch");
    std::vector<int64_t> y(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
      __int128 acc = 0;
      for (std::size_t j = 0; j < cols_; ++j) {
        acc += static_cast<__int128>((*this)(i, j)) * x[j];
        acc %= ring_.modulus();
      }
      y[i] = static_cast<int64_t>(acc);
    }
    return y;
  }

  ZMatrix operator*(const ZMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("ZMatrix::operator*: dimension mismatch");
    ZMatrix r(ring_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        int64_t a = (*this)(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) = ring_.add(r(i, j), ring_.mul(a, o(k, j)));
      }
    return r;
  }

  bool operator==(const ZMatrix& o) const {
    return ring_ == o.ring_ && rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  ZmodRing ring_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<int64_t> data_;
};

namespace detail {

inline bool is_zero(std::span<const int64_t> v) {
  return std::all_of(v.begin(), v.end(), [](int64_t x) { return x == 0; });
}

// dst -= c * src over the ring.
inline void axpy_sub(const ZmodRing& ring, std::vector<int64_t>& dst, int64_t c,
                     std::span<const int64_t> src) {
  if (c == 0) return;
  for (std::size_t j = 0; j < dst.size(); ++j)
    if (src[j] != 0) dst[j] = ring.sub(dst[j], ring.mul(c, src[j]));
}

inline std::size_t leading_column(std::span<const int64_t> v) {
  for (std::size_t j = 0; j < v.size(); ++j)
    if (v[j] != 0) return j;
  return v.size();
}

}  // namespace detail

/// Howell normal form of the row span of `m`.
///
/// Pivoting is deterministic: per column, the row of lowest valuation wins,
/// ties broken by the earliest row. Zero rows are dropped.
inline ZMatrix howell_form(const ZMatrix& m) {
  const ZmodRing& ring = m.ring();
  const std::size_t cols = m.cols();
  std::vector<std::vector<int64_t>> pool;
  pool.reserve(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (!detail::is_zero(m.row(i))) pool.push_back(m.row_vector(i));

  std::vector<std::vector<int64_t>> out;
  std::vector<std::pair<std::size_t, int>> pivots;  // (column, valuation)
  for (std::size_t c = 0; c < cols && !pool.empty(); ++c) {
    std::size_t best = pool.size();
    int best_v = ring.N();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      int v = ring.valuation(pool[i][c]);
      if (v < best_v) {
        best_v = v;
        best = i;
      }
    }
    if (best == pool.size()) continue;
    std::vector<int64_t> piv = std::move(pool[best]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
    const int64_t pv = ring.power_of_p(best_v);
    const int64_t unit = piv[c] / pv;
    if (unit != 1) {
      int64_t inv = ring.inverse(unit);
      for (auto& x : piv) x = ring.mul(x, inv);
    }
    for (auto& r : pool)
      if (r[c] != 0) detail::axpy_sub(ring, r, r[c] / pv, piv);
    if (best_v > 0) {
      std::vector<int64_t> ann(piv);
      const int64_t scale = ring.power_of_p(ring.N() - best_v);
      for (auto& x : ann) x = ring.mul(x, scale);
      if (!detail::is_zero(ann)) pool.push_back(std::move(ann));
    }
    std::erase_if(pool, [](const std::vector<int64_t>& r) { return detail::is_zero(r); });
    out.push_back(std::move(piv));
    pivots.emplace_back(c, best_v);
  }

  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto [c, v] = pivots[i];
    const int64_t pv = ring.power_of_p(v);
    for (std::size_t k = 0; k < i; ++k) {
      int64_t q = out[k][c] / pv;
      detail::axpy_sub(ring, out[k], q, out[i]);
    }
  }

  ZMatrix h(ring, 0, cols);
  for (const auto& r : out) h.append_row(r);
  return h;
}

/// Reduces `v` against a Howell form; returns the canonical remainder.
/// The remainder is zero iff `v` lies in the row span.
inline std::vector<int64_t> howell_reduce(const ZMatrix& howell, std::vector<int64_t> v) {
  const ZmodRing& ring = howell.ring();
  for (std::size_t i = 0; i < howell.rows(); ++i) {
    auto r = howell.row(i);
    std::size_t c = detail::leading_column(r);
    int64_t q = v[c] / r[c];
    detail::axpy_sub(ring, v, q, r);
  }
  return v;
}

inline bool in_row_span(const ZMatrix& howell, std::span<const int64_t> v) {
  return detail::is_zero(howell_reduce(howell, {v.begin(), v.end()}));
}

/// log_p of the cardinality of the row span of a Howell form.
inline int span_log_size(const ZMatrix& howell) {
  int total = 0;
  for (std::size_t i = 0; i < howell.rows(); ++i) {
    auto r = howell.row(i);
    total += howell.ring().N() - howell.ring().valuation(r[detail::leading_column(r)]);
  }
  return total;
}

struct LinearSolution {
  std::vector<int64_t> x;
  ZMatrix kernel;  // rows generate {y : A y = 0}
};

/// Solves A x = b over Z/p^N. Returns nullopt when no solution exists;
/// throws std::invalid_argument on inconsistent dimensions.
inline std::optional<LinearSolution> solve_linear(const ZMatrix& a, std::span<const int64_t> b) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve_linear: rhs length != rows");
  const ZmodRing& ring = a.ring();
  const std::size_t m = a.rows(), n = a.cols();
  ZMatrix aug(ring, n, m + n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) aug(j, i) = a(i, j);
    aug(j, m + j) = 1 % ring.modulus();
  }
  ZMatrix h = howell_form(aug);

  std::vector<int64_t> v(m + n, 0);
  for (std::size_t i = 0; i < m; ++i) v[i] = ring.reduce(b[i]);
  ZMatrix kernel(ring, 0, n);
  for (std::size_t i = 0; i < h.rows(); ++i) {
    auto r = h.row(i);
    std::size_t c = detail::leading_column(r);
    if (c < m) {
      detail::axpy_sub(ring, v, v[c] / r[c], r);
    } else {
      kernel.append_row(r.subspan(m));
    }
  }
  for (std::size_t i = 0; i < m; ++i)
    if (v[i] != 0) return std::nullopt;
  LinearSolution sol{std::vector<int64_t>(n), std::move(kernel)};
  for (std::size_t j = 0; j < n; ++j) sol.x[j] = ring.neg(v[m + j]);
  return sol;
}

/// Generators of {y : A y = 0}.
inline ZMatrix kernel_basis(const ZMatrix& a) {
  std::vector<int64_t> zero(a.rows(), 0);
  return solve_linear(a, zero)->kernel;
}

/// A residue of Z/p^N usable as a generic ring element (for determinants).
struct Residue {
  int64_t value = 0;
  const ZmodRing* ring = nullptr;

  Residue operator+(const Residue& o) const { return {ring->add(value, o.value), ring}; }
  Residue operator-(const Residue& o) const { return {ring->sub(value, o.value), ring}; }
  Residue operator*(const Residue& o) const { return {ring->mul(value, o.value), ring}; }
  bool operator==(const Residue& o) const { return value == o.value; }
};

/// Determinant of a square matrix over a commutative ring by Laplace
/// expansion along the first row (no division).
template <class T>
T laplace_determinant(const std::vector<std::vector<T>>& m, const T& one) {
  const std::size_t n = m.size();
  if (n == 0) return one;
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  T zero = one - one;
  T det = zero;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<T>> sub;
    sub.reserve(n - 1);
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<T> row;
      row.reserve(n - 1);
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      sub.push_back(std::move(row));
    }
    T term = m[0][c] * laplace_determinant(sub, one);
    det = (c % 2 == 0) ? det + term : det - term;
  }
  return det;
}

/// Enumerates k-subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> index_subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

/// All k x k minors of a matrix over a commutative ring, ordered by
/// (row subset, column subset) lexicographically.
template <class T>
std::vector<T> all_minors(const std::vector<std::vector<T>>& m, std::size_t k, const T& one) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows == 0 ? 0 : m[0].size();
  if (k > std::min(rows, cols)) throw std::out_of_range("minors: k exceeds matrix dimensions");
  std::vector<T> out;
  if (k == 0) {
    out.push_back(one);
    return out;
  }
  auto row_sets = index_subsets(rows, k);
  auto col_sets = index_subsets(cols, k);
  for (const auto& rs : row_sets)
    for (const auto& cs : col_sets) {
      std::vector<std::vector<T>> sub(k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) sub[i].push_back(m[rs[i]][cs[j]]);
      out.push_back(laplace_determinant(sub, one));
    }
  return out;
}

/// All k x k minors of a matrix over Z/p^N.
inline std::vector<int64_t> minors(const ZMatrix& a, std::size_t k) {
  std::vector<std::vector<Residue>> m(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m[i].push_back({a(i, j), &a.ring()});
  Residue one{1 % a.ring().modulus(), &a.ring()};
  std::vector<int64_t> out;
  for (const auto& r : all_minors(m, k, one)) out.push_back(r.value);
  return out;
}

}  // namespace anticyc
