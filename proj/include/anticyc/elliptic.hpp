#pragma once

// Elliptic curves in long Weierstrass form and traces of Frobenius by point
// counting.

#include "anticyc/common.hpp"

#include <array>
#include <map>
#include <string>

namespace anticyc {

struct EllipticCurve {
  std::string label;
  std::array<int64_t, 5> a{};  // a1, a2, a3, a4, a6

  BigInt b2() const { return BigInt(a[0]) * a[0] + 4 * BigInt(a[1]); }
  BigInt b4() const { return BigInt(a[0]) * a[2] + 2 * BigInt(a[3]); }
  BigInt b6() const { return BigInt(a[2]) * a[2] + 4 * BigInt(a[4]); }
  BigInt b8() const {
    return BigInt(a[0]) * a[0] * a[4] + 4 * BigInt(a[1]) * a[4] - BigInt(a[0]) * a[2] * a[3] +
           BigInt(a[1]) * a[2] * a[2] - BigInt(a[3]) * a[3];
  }
  BigInt c4() const { return b2() * b2() - 24 * b4(); }
  BigInt c6() const { return -b2() * b2() * b2() + 36 * b2() * b4() - 216 * b6(); }
  BigInt discriminant() const {
    return -b2() * b2() * b8() - 8 * b4() * b4() * b4() - 27 * b6() * b6() + 9 * b2() * b4() * b6();
  }
  bool good_reduction(int64_t q) const { return discriminant() % q != 0; }
};

/// The curve 11a1: y^2 + y = x^3 - x^2 - 10x - 20.
inline EllipticCurve curve_11a1() { return {"11a1", {0, -1, 1, -10, -20}}; }

inline constexpr int64_t kPointCountBound = 1000000;

namespace detail {

inline void check_count_prime(const EllipticCurve& E, int64_t q) {
  if (!is_prime(q)) throw ValidationError("a_q: q=" + std::to_string(q) + " is not prime");
  if (q >= kPointCountBound) throw BoundExceeded("a_q: q above the naive point counting bound");
  if (!E.good_reduction(q)) throw ValidationError("a_q: bad reduction at q=" + std::to_string(q));
}

}  // namespace detail

/// a_q = q + 1 - #E(F_q), counting affine solutions for each x.
inline int64_t count_points_aq(const EllipticCurve& E, int64_t q) {
  detail::check_count_prime(E, q);
  int64_t a[5];
  for (int k = 0; k < 5; ++k) a[k] = floor_mod(E.a[static_cast<std::size_t>(k)], q);
  int64_t affine = 0;
  for (int64_t x = 0; x < q; ++x) {
    const int64_t rhs = floor_mod(mulmod(mulmod(x, x, q), x, q) + mulmod(a[1], mulmod(x, x, q), q) +
                                      mulmod(a[3], x, q) + a[4],
                                  q);
    const int64_t lin = floor_mod(mulmod(a[0], x, q) + a[2], q);
    if (q <= 3) {
      for (int64_t y = 0; y < q; ++y)
        if (floor_mod(y * y + lin * y - rhs, q) == 0) ++affine;
    } else {
      // (2y + lin)^2 = 4 rhs + lin^2
      const int64_t disc = floor_mod(4 * rhs + mulmod(lin, lin, q), q);
      affine += 1 + jacobi(disc, q);
    }
  }
  return q + 1 - (affine + 1);
}

/// Second method: a_q = -sum_x ((x^3 - 27 c4 x - 54 c6) | q) on the short model (q >= 5).
inline int64_t trace_by_legendre_sum(const EllipticCurve& E, int64_t q) {
  detail::check_count_prime(E, q);
  if (q < 5) throw PreconditionError("trace_by_legendre_sum: needs q >= 5");
  const int64_t A = static_cast<int64_t>(((-27 * E.c4()) % q + q) % q);
  const int64_t Bc = static_cast<int64_t>(((-54 * E.c6()) % q + q) % q);
  int64_t s = 0;
  for (int64_t x = 0; x < q; ++x) {
    const int64_t f = floor_mod(mulmod(mulmod(x, x, q), x, q) + mulmod(A, x, q) + Bc, q);
    s += jacobi(f, q);
  }
  return -s;
}

/// Table of a_q for good primes q <= bound, or for the given primes.
inline std::map<int64_t, int64_t> aq_table(const EllipticCurve& E, const std::vector<int64_t>& primes) {
  std::map<int64_t, int64_t> out;
  for (auto q : primes) out[q] = count_points_aq(E, q);
  return out;
}

}  // namespace anticyc
