#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace anticyc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: bad parameters, malformed files, violated hypotheses.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Finite precision is not enough to decide or solve.
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

/// A mathematical identity that must hold failed; indicates a bug or an
/// inadmissible instance.
class AssertionFailure : public Error {
 public:
  using Error::Error;
};

/// A bounded search ran out of room.
class BoundExceeded : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

inline int64_t ipow(int64_t base, int exp) {
  int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

inline bool is_prime(int64_t n) {
  if (n < 2) return false;
  for (int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Prime factorization by trial division, as (prime, exponent) pairs.
inline std::vector<std::pair<int64_t, int>> factorize(int64_t n) {
  std::vector<std::pair<int64_t, int>> out;
  if (n < 0) n = -n;
  for (int64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline bool is_squarefree(int64_t n) {
  for (auto [q, e] : factorize(n))
    if (e > 1) return false;
  return true;
}

inline int64_t floor_mod(int64_t a, int64_t m) {
  int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline int64_t mulmod(int64_t a, int64_t b, int64_t m) {
  return static_cast<int64_t>((static_cast<__int128>(a) * b) % m);
}

inline int64_t powmod(int64_t b, int64_t e, int64_t m) {
  int64_t r = 1 % m;
  b = floor_mod(b, m);
  while (e > 0) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

/// Legendre/Jacobi symbol (a|n) for odd positive n.
inline int jacobi(int64_t a, int64_t n) {
  if (n <= 0 || n % 2 == 0) throw std::invalid_argument("jacobi: n must be odd and positive");
  a = floor_mod(a, n);
  int result = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      int64_t r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

/// Kronecker symbol (d|n) for n >= 1.
inline int kronecker(int64_t d, int64_t n) {
  if (n <= 0) throw std::invalid_argument("kronecker: n must be positive");
  int result = 1;
  while (n % 2 == 0) {
    n /= 2;
    if (d % 2 == 0) return 0;
    int64_t r = floor_mod(d, 8);
    if (r == 3 || r == 5) result = -result;
  }
  if (n == 1) return result;
  return result * jacobi(d, n);
}

inline BigInt big_abs(const BigInt& a) { return a < 0 ? BigInt(-a) : a; }

/// Floor division for arbitrary-precision integers.
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline BigInt floor_of(const Rational& r) {
  return floor_div(numerator(r), denominator(r));
}

inline BigInt ceil_of(const Rational& r) {
  return -floor_div(-numerator(r), denominator(r));
}

/// Exact square root of a non-negative rational; throws if not a square.
inline Rational exact_sqrt(const Rational& r) {
  BigInt n = numerator(r), d = denominator(r);
  BigInt sn = boost::multiprecision::sqrt(n), sd = boost::multiprecision::sqrt(d);
  if (sn * sn != n || sd * sd != d) throw AssertionFailure("exact_sqrt: not a rational square");
  return Rational(sn, sd);
}

}  // namespace anticyc
