#pragma once

// Positive definite quadratic lattices given by a rational Gram matrix:
// exact LLL reduction and Fincke-Pohst enumeration of short vectors.

#include "anticyc/common.hpp"
#include "anticyc/intmat.hpp"

#include <functional>
#include <vector>

namespace anticyc {

using RationalMatrix = std::vector<std::vector<Rational>>;

namespace detail {

inline BigInt round_rational(const Rational& r) { return floor_of(r + Rational(1, 2)); }

// Gram-Schmidt data from a Gram matrix: b[i] = |b_i^*|^2, mu[i][j] for j < i.
inline void gram_schmidt(const RationalMatrix& g, std::vector<Rational>& b, RationalMatrix& mu) {
  const std::size_t n = g.size();
  b.assign(n, Rational(0));
  mu.assign(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      Rational s = g[i][j];
      for (std::size_t l = 0; l < j; ++l) s -= mu[j][l] * mu[i][l] * b[l];
      mu[i][j] = s / b[j];
    }
    Rational s = g[i][i];
    for (std::size_t l = 0; l < i; ++l) s -= mu[i][l] * mu[i][l] * b[l];
    b[i] = s;
    if (b[i] <= 0) throw PreconditionError("lattice: Gram matrix is not positive definite");
  }
}

}  // namespace detail

struct ReducedLattice {
  IntMatrix transform;   // rows: reduced basis vectors in the input coordinates
  RationalMatrix gram;   // Gram matrix of the reduced basis
};

/// LLL reduction (delta = 3/4) of a positive definite Gram matrix.
inline ReducedLattice lll_reduce(const RationalMatrix& gram) {
  const std::size_t n = gram.size();
  ReducedLattice r{IntMatrix::identity(n), gram};
  if (n <= 1) return r;
  auto& g = r.gram;
  auto& t = r.transform;
  std::vector<Rational> b;
  RationalMatrix mu;
  detail::gram_schmidt(g, b, mu);

  // b_k -= q b_l
  auto reduce = [&](std::size_t k, std::size_t l) {
    BigInt q = detail::round_rational(mu[k][l]);
    if (q == 0) return false;
    const Rational qr(q);
    for (std::size_t j = 0; j < n; ++j) t(k, j) -= q * t(l, j);
    // Gram update: row/col k
    const Rational gkl = g[k][l], gll = g[l][l];
    for (std::size_t j = 0; j < n; ++j)
      if (j != k) g[k][j] -= qr * g[l][j];
    g[k][k] = g[k][k] - 2 * qr * gkl + qr * qr * gll;
    for (std::size_t j = 0; j < n; ++j)
      if (j != k) g[j][k] = g[k][j];
    detail::gram_schmidt(g, b, mu);
    return true;
  };
  auto swap = [&](std::size_t k) {
    for (std::size_t j = 0; j < n; ++j) std::swap(t(k, j), t(k - 1, j));
    std::swap(g[k], g[k - 1]);
    for (auto& row : g) std::swap(row[k], row[k - 1]);
    detail::gram_schmidt(g, b, mu);
  };

  const Rational delta(3, 4);
  std::size_t k = 1;
  while (k < n) {
    reduce(k, k - 1);
    if (b[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * b[k - 1]) {
      swap(k);
      if (k > 1) --k;
    } else {
      for (std::size_t l = k - 1; l-- > 0;) reduce(k, l);
      ++k;
    }
  }
  return r;
}

/// Calls visit(x, Q(x)) for every nonzero x in Z^n with Q(x) = x^T G x <= bound.
/// Enumeration stops early when visit returns false.
inline void enumerate_short_vectors(const RationalMatrix& gram, const Rational& bound,
                                    const std::function<bool(const IntVector&, const Rational&)>& visit) {
  const std::size_t n = gram.size();
  if (n == 0) return;
  std::vector<Rational> b;
  RationalMatrix mu;
  detail::gram_schmidt(gram, b, mu);
  IntVector x(n);
  bool stop = false;

  // level i with remaining budget
  std::function<void(std::size_t, const Rational&)> rec = [&](std::size_t i, const Rational& remaining) {
    Rational c = 0;
    for (std::size_t j = i + 1; j < n; ++j) c -= mu[j][i] * x[j];
    auto fits = [&](const BigInt& v, Rational& rest) {
      Rational d = Rational(v) - c;
      rest = remaining - b[i] * d * d;
      return rest >= 0;
    };
    auto descend = [&](const BigInt& v, const Rational& rest) {
      x[i] = v;
      if (i == 0) {
        bool zero = true;
        for (const auto& e : x)
          if (e != 0) {
            zero = false;
            break;
          }
        if (!zero && !visit(x, bound - rest)) stop = true;
      } else {
        rec(i - 1, rest);
      }
    };
    const BigInt start = detail::round_rational(c);
    Rational rest;
    for (BigInt v = start; !stop && fits(v, rest); ++v) descend(v, rest);
    for (BigInt v = start - 1; !stop && fits(v, rest); --v) descend(v, rest);
    x[i] = 0;
  };
  rec(n - 1, bound);
}

/// All nonzero vectors with Q(x) == value, enumerated on an LLL-reduced basis
/// and returned in the input coordinates.
inline std::vector<IntVector> vectors_of_norm(const RationalMatrix& gram, const Rational& value,
                                              std::size_t limit = static_cast<std::size_t>(-1)) {
  const ReducedLattice red = lll_reduce(gram);
  std::vector<IntVector> out;
  const std::size_t n = gram.size();
  enumerate_short_vectors(red.gram, value, [&](const IntVector& y, const Rational& q) {
    if (q != value) return true;
    IntVector x(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) x[j] += y[i] * red.transform(i, j);
    out.push_back(std::move(x));
    return out.size() < limit;
  });
  return out;
}

inline Rational quadratic_value(const RationalMatrix& gram, const IntVector& x) {
  Rational s = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) s += gram[i][j] * Rational(x[i] * x[j]);
  return s;
}

}  // namespace anticyc
