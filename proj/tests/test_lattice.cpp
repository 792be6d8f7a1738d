#include "anticyc/lattice.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace anticyc;

namespace {

RationalMatrix random_gram(std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<int> d(-4, 4);
  for (;;) {
    IntMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = d(rng);
    if (integer_determinant(a) == 0) continue;
    const IntMatrix g = a.transpose() * a;
    RationalMatrix out(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i][j] = Rational(g(i, j), 2);
    return out;
  }
}

RationalMatrix inverse(RationalMatrix m) {
  const std::size_t n = m.size();
  RationalMatrix inv(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (m[piv][c] == 0) ++piv;
    std::swap(m[piv], m[c]);
    std::swap(inv[piv], inv[c]);
    const Rational f = m[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      m[c][j] /= f;
      inv[c][j] /= f;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m[r][c] == 0) continue;
      const Rational g = m[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        m[r][j] -= g * m[c][j];
        inv[r][j] -= g * inv[c][j];
      }
    }
  }
  return inv;
}

// Every x with Q(x) <= C lies in the box |x_i| <= sqrt(C (G^-1)_ii).
std::vector<IntVector> box_enumeration(const RationalMatrix& g, const Rational& bound) {
  const std::size_t n = g.size();
  const RationalMatrix inv = inverse(g);
  std::vector<int64_t> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Rational v = bound * inv[i][i];
    int64_t k = 0;
    while (Rational((k + 1) * (k + 1)) <= v) ++k;
    r[i] = k;
  }
  std::vector<IntVector> out;
  IntVector x(n);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      bool zero = true;
      for (const auto& e : x) zero = zero && e == 0;
      if (!zero && quadratic_value(g, x) <= bound) out.push_back(x);
      return;
    }
    for (int64_t v = -r[i]; v <= r[i]; ++v) {
      x[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

}  // namespace

TEST(Lattice, LllIsUnimodularAndReduced) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const RationalMatrix g = random_gram(rng, n);
    const ReducedLattice red = lll_reduce(g);
    EXPECT_EQ(big_abs(integer_determinant(red.transform)), 1);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Rational s = 0;
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b)
            s += Rational(red.transform(i, a) * red.transform(j, b)) * g[a][b];
        EXPECT_EQ(s, red.gram[i][j]);
      }
    std::vector<Rational> b;
    RationalMatrix mu;
    detail::gram_schmidt(red.gram, b, mu);
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) EXPECT_LE(abs(mu[i][j]), Rational(1, 2));
      EXPECT_GE(b[i], (Rational(3, 4) - mu[i][i - 1] * mu[i][i - 1]) * b[i - 1]);
    }
  }
}

TEST(Lattice, EnumerationMatchesBoxSearch) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const RationalMatrix g = random_gram(rng, n);
    const Rational bound(6 + trial % 7);
    std::vector<IntVector> got;
    enumerate_short_vectors(g, bound, [&](const IntVector& x, const Rational& q) {
      EXPECT_EQ(q, quadratic_value(g, x));
      got.push_back(x);
      return true;
    });
    auto expected = box_enumeration(g, bound);
    std::sort(got.begin(), got.end());
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(got, expected);
  }
}

TEST(Lattice, VectorsOfExactNorm) {
  // Z^4 with the sum of squares: r_4(m) = 8 * sum of divisors not divisible by 4.
  RationalMatrix g(4, std::vector<Rational>(4, Rational(0)));
  for (int i = 0; i < 4; ++i) g[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  for (int m = 1; m <= 12; ++m) {
    int64_t s = 0;
    for (int d = 1; d <= m; ++d)
      if (m % d == 0 && d % 4 != 0) s += d;
    const auto v = vectors_of_norm(g, Rational(m));
    EXPECT_EQ(static_cast<int64_t>(v.size()), 8 * s) << m;
    for (const auto& x : v) EXPECT_EQ(quadratic_value(g, x), m);
  }
}

TEST(Lattice, EarlyStopAndLimit) {
  RationalMatrix g{{Rational(1), Rational(0)}, {Rational(0), Rational(1)}};
  int calls = 0;
  enumerate_short_vectors(g, Rational(100), [&](const IntVector&, const Rational&) { return ++calls < 3; });
  EXPECT_EQ(calls, 3);
  EXPECT_EQ(vectors_of_norm(g, Rational(25), 2).size(), 2u);
  EXPECT_EQ(vectors_of_norm(g, Rational(25)).size(), 12u);
}

TEST(Lattice, RejectsIndefiniteForms) {
  RationalMatrix g{{Rational(1), Rational(0)}, {Rational(0), Rational(-1)}};
  EXPECT_THROW(lll_reduce(g), PreconditionError);
}
