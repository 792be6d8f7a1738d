#pragma once

// Definite quaternion algebras (s,t)_Q over Q, lattices in them, maximal and
// Eichler orders, and basic ideal arithmetic.

#include "anticyc/common.hpp"
#include "anticyc/intmat.hpp"
#include "anticyc/lattice.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <string>
#include <vector>

namespace anticyc {

/// a + b i + c j + d k.
struct Quaternion {
  Rational a, b, c, d;

  Quaternion() = default;
  Quaternion(Rational a_, Rational b_ = 0, Rational c_ = 0, Rational d_ = 0)
      : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}

  Rational& operator[](int n) { return n == 0 ? a : n == 1 ? b : n == 2 ? c : d; }
  const Rational& operator[](int n) const { return n == 0 ? a : n == 1 ? b : n == 2 ? c : d; }

  Quaternion operator+(const Quaternion& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
  Quaternion operator-(const Quaternion& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
  Quaternion operator-() const { return {-a, -b, -c, -d}; }
  Quaternion operator*(const Rational& r) const { return {a * r, b * r, c * r, d * r}; }
  Quaternion conj() const { return {a, -b, -c, -d}; }
  bool is_zero() const { return a == 0 && b == 0 && c == 0 && d == 0; }
  bool operator==(const Quaternion& o) const = default;
};

inline std::string to_string(const Quaternion& x) {
  return x.a.str() + " + " + x.b.str() + "i + " + x.c.str() + "j + " + x.d.str() + "k";
}

// ---------------------------------------------------------------- Hilbert symbols

namespace detail {

inline int valuation(BigInt x, int64_t ell) {
  if (x == 0) throw std::invalid_argument("valuation of zero");
  int v = 0;
  while (x % ell == 0) {
    x /= ell;
    ++v;
  }
  return v;
}

inline BigInt strip(BigInt x, int64_t ell) {
  while (x % ell == 0) x /= ell;
  return x;
}

inline int64_t residue(const BigInt& x, int64_t m) {
  BigInt r = x % m;
  if (r < 0) r += m;
  return static_cast<int64_t>(r);
}

}  // namespace detail

/// Hilbert symbol (a, b)_ell for nonzero integers a, b and a finite prime ell.
inline int hilbert_symbol(const BigInt& a, const BigInt& b, int64_t ell) {
  if (a == 0 || b == 0) throw std::invalid_argument("hilbert_symbol: zero argument");
  const int alpha = detail::valuation(a, ell), beta = detail::valuation(b, ell);
  const BigInt u = detail::strip(a, ell), v = detail::strip(b, ell);
  if (ell == 2) {
    const int64_t u8 = detail::residue(u, 8), v8 = detail::residue(v, 8);
    auto eps = [](int64_t x) { return ((x - 1) / 2) % 2; };
    auto omega = [](int64_t x) { return ((x * x - 1) / 8) % 2; };
    const int64_t e = eps(u8) * eps(v8) + alpha * omega(v8) + beta * omega(u8);
    return e % 2 == 0 ? 1 : -1;
  }
  int r = ((static_cast<int64_t>(alpha) * beta * ((ell - 1) / 2)) % 2 == 0) ? 1 : -1;
  if (beta % 2) r *= jacobi(detail::residue(u, ell), ell);
  if (alpha % 2) r *= jacobi(detail::residue(v, ell), ell);
  return r;
}

inline int hilbert_symbol_infinity(const BigInt& a, const BigInt& b) { return (a < 0 && b < 0) ? -1 : 1; }

// ---------------------------------------------------------------- the algebra

class QuaternionAlgebra {
 public:
  QuaternionAlgebra(BigInt s, BigInt t) : s_(std::move(s)), t_(std::move(t)) {
    if (s_ >= 0 || t_ >= 0) throw ValidationError("QuaternionAlgebra: s and t must be negative");
    BigInt prod = big_abs(2 * s_ * t_);
    for (auto [ell, e] : factorize(static_cast<int64_t>(prod)))
      if (hilbert_symbol(s_, t_, ell) == -1) ramified_.push_back(ell);
    discriminant_ = 1;
    for (auto ell : ramified_) discriminant_ *= ell;
  }

  const BigInt& s() const { return s_; }
  const BigInt& t() const { return t_; }
  /// Finite ramified primes (the algebra is also ramified at infinity).
  const std::vector<int64_t>& ramified_primes() const { return ramified_; }
  int64_t discriminant() const { return discriminant_; }

  Quaternion mul(const Quaternion& x, const Quaternion& y) const {
    const Rational s(s_), t(t_);
    return {x.a * y.a + s * x.b * y.b + t * x.c * y.c - s * t * x.d * y.d,
            x.a * y.b + x.b * y.a - t * x.c * y.d + t * x.d * y.c,
            x.a * y.c + x.c * y.a + s * x.b * y.d - s * x.d * y.b,
            x.a * y.d + x.d * y.a + x.b * y.c - x.c * y.b};
  }

  Rational nrd(const Quaternion& x) const {
    const Rational s(s_), t(t_);
    return x.a * x.a - s * x.b * x.b - t * x.c * x.c + s * t * x.d * x.d;
  }

  Rational trd(const Quaternion& x) const { return 2 * x.a; }

  Quaternion inverse(const Quaternion& x) const {
    const Rational n = nrd(x);
    if (n == 0) throw PreconditionError("quaternion inverse of zero");
    return x.conj() * (Rational(1) / n);
  }

  /// Bilinear form <x,y> = trd(x conj(y)) / 2, so <x,x> = nrd(x).
  Rational norm_pairing(const Quaternion& x, const Quaternion& y) const { return trd(mul(x, y.conj())) / 2; }

 private:
  BigInt s_, t_;
  std::vector<int64_t> ramified_;
  int64_t discriminant_ = 1;
};

/// Definite quaternion algebra ramified exactly at the primes of Nminus and
/// at infinity, with small structure constants.
inline QuaternionAlgebra build_algebra(int64_t Nminus) {
  if (Nminus < 2 || !is_squarefree(Nminus))
    throw ValidationError("build_algebra: N^- must be a squarefree integer > 1");
  if (factorize(Nminus).size() % 2 == 0)
    throw ValidationError("build_algebra: N^- must be a product of an odd number of primes");
  const int64_t bound = 8 * Nminus + 16;
  for (int64_t total = 2; total <= 2 * bound; ++total)
    for (int64_t a = 1; a < total; ++a) {
      const int64_t b = total - a;
      if (a > b) break;
      QuaternionAlgebra B(-a, -b);
      if (B.discriminant() == Nminus) return B;
    }
  throw BoundExceeded("build_algebra: no structure constants found");
}

// ---------------------------------------------------------------- lattices

/// Full-rank Z-lattice in B: rows of `basis` (Hermite form, coordinates in
/// 1,i,j,k) divided by `den`.
struct QuaternionLattice {
  IntMatrix basis;
  BigInt den = 1;

  std::vector<Quaternion> elements() const {
    std::vector<Quaternion> out;
    for (std::size_t r = 0; r < basis.rows(); ++r)
      out.emplace_back(Rational(basis(r, 0), den), Rational(basis(r, 1), den), Rational(basis(r, 2), den),
                       Rational(basis(r, 3), den));
    return out;
  }

  Quaternion element(const IntVector& coords) const {
    Quaternion x;
    for (std::size_t r = 0; r < basis.rows(); ++r)
      for (int c = 0; c < 4; ++c) x[c] += Rational(coords[r] * basis(r, static_cast<std::size_t>(c)), den);
    return x;
  }

  /// Coordinates of x in the basis, or nullopt if x is not in the lattice.
  std::optional<IntVector> coordinates(const Quaternion& x) const {
    IntVector v(4);
    for (int c = 0; c < 4; ++c) {
      const Rational y = x[c] * Rational(den);
      if (denominator(y) != 1) return std::nullopt;
      v[static_cast<std::size_t>(c)] = numerator(y);
    }
    return hermite_coordinates(basis, v);
  }

  bool contains(const Quaternion& x) const { return coordinates(x).has_value(); }

  /// Covolume relative to Z<1,i,j,k>.
  Rational covolume() const {
    return Rational(big_abs(integer_determinant(basis))) / Rational(den * den * den * den);
  }

  bool operator==(const QuaternionLattice& o) const = default;
};

inline QuaternionLattice lattice_from_generators(const std::vector<Quaternion>& gens) {
  BigInt den = 1;
  for (const auto& g : gens)
    for (int c = 0; c < 4; ++c) den = boost::multiprecision::lcm(den, denominator(g[c]));
  IntMatrix m(0, 4);
  for (const auto& g : gens) {
    IntVector row(4);
    for (int c = 0; c < 4; ++c) row[static_cast<std::size_t>(c)] = numerator(g[c] * Rational(den));
    m.append_row(row);
  }
  QuaternionLattice L{hermite_form(m), den};
  if (L.basis.rows() != 4) throw PreconditionError("lattice_from_generators: generators do not span B");
  BigInt g = den;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) g = boost::multiprecision::gcd(g, L.basis(r, c));
  if (g > 1) {
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) L.basis(r, c) /= g;
    L.den /= g;
  }
  return L;
}

inline QuaternionLattice lattice_sum(const QuaternionLattice& x, const QuaternionLattice& y) {
  auto g = x.elements();
  auto h = y.elements();
  g.insert(g.end(), h.begin(), h.end());
  return lattice_from_generators(g);
}

inline QuaternionLattice lattice_product(const QuaternionAlgebra& B, const QuaternionLattice& x,
                                         const QuaternionLattice& y) {
  std::vector<Quaternion> g;
  for (const auto& u : x.elements())
    for (const auto& v : y.elements()) g.push_back(B.mul(u, v));
  return lattice_from_generators(g);
}

inline QuaternionLattice lattice_scale(const QuaternionLattice& x, const Rational& r) {
  std::vector<Quaternion> g;
  for (const auto& u : x.elements()) g.push_back(u * r);
  return lattice_from_generators(g);
}

inline QuaternionLattice lattice_left_multiply(const QuaternionAlgebra& B, const Quaternion& a,
                                               const QuaternionLattice& x) {
  std::vector<Quaternion> g;
  for (const auto& u : x.elements()) g.push_back(B.mul(a, u));
  return lattice_from_generators(g);
}

inline QuaternionLattice lattice_right_multiply(const QuaternionAlgebra& B, const QuaternionLattice& x,
                                                const Quaternion& a) {
  std::vector<Quaternion> g;
  for (const auto& u : x.elements()) g.push_back(B.mul(u, a));
  return lattice_from_generators(g);
}

inline QuaternionLattice lattice_conjugate(const QuaternionLattice& x) {
  std::vector<Quaternion> g;
  for (const auto& u : x.elements()) g.push_back(u.conj());
  return lattice_from_generators(g);
}

/// Intersection via the integer kernel of [A; -B] on a common denominator.
inline QuaternionLattice lattice_intersection(const QuaternionLattice& x, const QuaternionLattice& y) {
  const BigInt den = boost::multiprecision::lcm(x.den, y.den);
  const BigInt fx = den / x.den, fy = den / y.den;
  IntMatrix m(8, 4);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) {
      m(r, c) = x.basis(r, c) * fx;
      m(r + 4, c) = -y.basis(r, c) * fy;
    }
  const IntMatrix ker = integer_kernel(m.transpose());
  std::vector<Quaternion> g;
  for (std::size_t k = 0; k < ker.rows(); ++k) {
    IntVector coords(4);
    for (std::size_t r = 0; r < 4; ++r) coords[r] = ker(k, r);
    g.push_back(x.element(coords));
  }
  return lattice_from_generators(g);
}

/// Gram matrix of the reduced norm on the lattice basis.
inline RationalMatrix norm_gram(const QuaternionAlgebra& B, const QuaternionLattice& L) {
  const auto e = L.elements();
  RationalMatrix g(4, std::vector<Rational>(4));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i; j < 4; ++j) g[i][j] = g[j][i] = B.norm_pairing(e[i], e[j]);
  return g;
}

inline bool is_integral(const QuaternionAlgebra& B, const Quaternion& x) {
  return denominator(B.trd(x)) == 1 && denominator(B.nrd(x)) == 1;
}

// ---------------------------------------------------------------- orders

/// Local data at ell^k || N^+: a rank-one idempotent of the maximal order
/// mod ell^k with R_ell = Z_ell + e O_ell + ell^k O_ell.
struct LevelStructure {
  int64_t ell = 0;
  int k = 0;
  Quaternion idempotent;
};

struct QuaternionOrder {
  QuaternionLattice lattice;
  int64_t level = 1;  // N^+ for an Eichler order
  QuaternionLattice maximal;  // the maximal order it was cut out of
  std::vector<LevelStructure> level_structure;

  bool contains(const Quaternion& x) const { return lattice.contains(x); }
};

/// Reduced discriminant: sqrt|det(trd(e_i e_j))|.
inline BigInt reduced_discriminant(const QuaternionAlgebra& B, const QuaternionLattice& O) {
  const auto e = O.elements();
  std::vector<std::vector<Rational>> m(4, std::vector<Rational>(4));
  IntMatrix g(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const Rational v = B.trd(B.mul(e[i], e[j]));
      if (denominator(v) != 1) throw AssertionFailure("reduced_discriminant: non-integral trace form");
      g(i, j) = numerator(v);
    }
  const Rational d = exact_sqrt(Rational(big_abs(integer_determinant(g))));
  return numerator(d);
}

/// True when the lattice contains 1, is closed under multiplication and all
/// its basis elements are integral.
inline bool is_order(const QuaternionAlgebra& B, const QuaternionLattice& O) {
  if (!O.contains(Quaternion(1))) return false;
  const auto e = O.elements();
  for (const auto& x : e) {
    if (!is_integral(B, x)) return false;
    for (const auto& y : e)
      if (!O.contains(B.mul(x, y))) return false;
  }
  return true;
}

namespace detail {

// Smallest multiplicatively closed lattice containing the generators and 1.
inline QuaternionLattice multiplicative_closure(const QuaternionAlgebra& B, QuaternionLattice L) {
  auto gens = L.elements();
  gens.push_back(Quaternion(1));
  L = lattice_from_generators(gens);
  for (int round = 0; round < 16; ++round) {
    QuaternionLattice next = lattice_sum(L, lattice_product(B, L, L));
    if (next == L) return L;
    L = std::move(next);
  }
  throw BoundExceeded("multiplicative_closure: did not stabilize");
}

}  // namespace detail

/// A maximal order: enlarge Z<1,i,j,k> one prime at a time until the reduced
/// discriminant equals the discriminant of B.
/// A maximal order containing the given order.
inline QuaternionOrder maximal_order_containing(const QuaternionAlgebra& B, QuaternionLattice O) {
  if (!is_order(B, O)) throw PreconditionError("maximal_order_containing: lattice is not an order");
  BigInt disc = reduced_discriminant(B, O);
  while (disc != B.discriminant()) {
    const BigInt excess = disc / B.discriminant();
    if (disc % B.discriminant() != 0) throw AssertionFailure("maximal_order: discriminant not divisible by N^-");
    const int64_t ell = factorize(static_cast<int64_t>(excess)).front().first;
    const auto e = O.elements();
    bool grown = false;
    // Candidates y = (sum c_r e_r) / ell with c in [0, ell)^4, c != 0.
    for (int64_t code = 1; code < ell * ell * ell * ell && !grown; ++code) {
      int64_t rest = code;
      Quaternion y;
      for (std::size_t r = 0; r < 4; ++r) {
        y = y + e[r] * Rational(rest % ell, ell);
        rest /= ell;
      }
      if (!is_integral(B, y)) continue;
      auto gens = e;
      gens.push_back(y);
      QuaternionLattice L = lattice_from_generators(gens);
      try {
        L = detail::multiplicative_closure(B, L);
      } catch (const BoundExceeded&) {
        continue;
      }
      bool integral = true;
      for (const auto& x : L.elements())
        if (!is_integral(B, x)) integral = false;
      if (!integral) continue;
      BigInt d;
      try {
        d = reduced_discriminant(B, L);
      } catch (const AssertionFailure&) {
        continue;
      }
      if (d < disc) {
        O = L;
        disc = d;
        grown = true;
      }
    }
    if (!grown) throw AssertionFailure("maximal_order: no enlargement found");
  }
  return {O, 1, O, {}};
}

inline QuaternionOrder maximal_order(const QuaternionAlgebra& B) {
  return maximal_order_containing(
      B, lattice_from_generators({Quaternion(1), Quaternion(0, 1), Quaternion(0, 0, 1), Quaternion(0, 0, 0, 1)}));
}

/// Eichler order cut out of the maximal order O by the given idempotents.
inline QuaternionOrder eichler_order_from_idempotents(const QuaternionAlgebra& B, const QuaternionOrder& O,
                                                      const std::vector<LevelStructure>& local) {
  QuaternionLattice R = O.lattice;
  int64_t level = 1;
  const auto e = O.lattice.elements();
  for (const auto& ls : local) {
    const int64_t lk = ipow(ls.ell, ls.k);
    if (!O.contains(ls.idempotent)) throw PreconditionError("eichler_order: idempotent outside the order");
    const Quaternion x = ls.idempotent;
    const auto defect = O.lattice.coordinates((B.mul(x, x) - x) * Rational(1, lk));
    if (!defect) throw PreconditionError("eichler_order: not an idempotent mod ell^k");
    std::vector<Quaternion> gens{Quaternion(1)};
    for (const auto& b : e) {
      gens.push_back(B.mul(x, b));
      gens.push_back(b * Rational(lk));
    }
    R = lattice_intersection(R, lattice_from_generators(gens));
    level *= lk;
  }
  return {R, level, O.lattice, local};
}

/// Eichler order of level Nplus inside a maximal order O: the intersection
/// over ell^k || Nplus of Z + eO + ell^k O with e a rank-one idempotent mod ell^k.
inline QuaternionOrder eichler_order(const QuaternionAlgebra& B, const QuaternionOrder& O, int64_t Nplus) {
  if (Nplus < 1) throw ValidationError("eichler_order: N^+ must be positive");
  if (std::gcd(Nplus, B.discriminant()) != 1) throw ValidationError("eichler_order: N^+ and N^- must be coprime");
  std::vector<LevelStructure> local;
  const auto e = O.lattice.elements();
  for (auto [ell, k] : factorize(Nplus)) {
    const int64_t lk = ipow(ell, k);
    // rank-one idempotent mod ell: trd = 1, nrd = 0 mod ell
    std::optional<Quaternion> idem;
    for (int64_t code = 0; code < ell * ell * ell * ell && !idem; ++code) {
      int64_t rest = code;
      Quaternion y;
      for (std::size_t r = 0; r < 4; ++r) {
        y = y + e[r] * Rational(rest % ell);
        rest /= ell;
      }
      const Rational tr = B.trd(y), nr = B.nrd(y);
      if (detail::residue(numerator(tr), ell) == 1 && detail::residue(numerator(nr), ell) == 0) idem = y;
    }
    if (!idem) throw AssertionFailure("eichler_order: no idempotent found (prime ramified?)");
    Quaternion x = *idem;
    // Hensel: e <- 3e^2 - 2e^3 doubles the precision of e^2 = e.
    for (int64_t prec = ell; prec < lk; prec *= prec) {
      const Quaternion x2 = B.mul(x, x);
      x = x2 * Rational(3) - B.mul(x2, x) * Rational(2);
      // keep coordinates small: reduce modulo ell^k O
      auto coords = O.lattice.coordinates(x);
      if (!coords) throw AssertionFailure("eichler_order: idempotent left the order");
      for (auto& c : *coords) c %= lk;
      x = O.lattice.element(*coords);
    }
    local.push_back({ell, static_cast<int>(k), x});
  }
  return eichler_order_from_idempotents(B, O, local);
}

// ---------------------------------------------------------------- ideals

/// Reduced norm of a lattice relative to an order: sqrt(covol(I)/covol(O)).
inline Rational lattice_norm(const QuaternionLattice& I, const QuaternionLattice& O) {
  return exact_sqrt(I.covolume() / O.covolume());
}

inline QuaternionLattice left_order(const QuaternionAlgebra& B, const QuaternionLattice& I, const Rational& norm) {
  return lattice_scale(lattice_product(B, I, lattice_conjugate(I)), Rational(1) / norm);
}

inline QuaternionLattice right_order(const QuaternionAlgebra& B, const QuaternionLattice& I, const Rational& norm) {
  return lattice_scale(lattice_product(B, lattice_conjugate(I), I), Rational(1) / norm);
}

/// Elements of norm 1 in an order (its unit group), by lattice enumeration.
inline std::vector<Quaternion> unit_group(const QuaternionAlgebra& B, const QuaternionLattice& O) {
  std::vector<Quaternion> out;
  for (const auto& v : vectors_of_norm(norm_gram(B, O), Rational(1))) out.push_back(O.element(v));
  return out;
}

}  // namespace anticyc
