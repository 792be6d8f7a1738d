#pragma once

// Imaginary quadratic fields K = Q(sqrt(-D)), lattices in K, positive definite
// binary quadratic forms, ring class groups Pic(Z + f O_K), and the Galois
// labels Pic(O_{p^(n+1)}) -> Z/p^n of the anticyclotomic tower.

#include "anticyc/common.hpp"
#include "anticyc/intmat.hpp"
#include "anticyc/lattice.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

namespace anticyc {

// ---------------------------------------------------------------- the field

/// x + y sqrt(d) in K = Q(sqrt(d)), d < 0.
struct QuadNumber {
  Rational x, y;
  bool operator==(const QuadNumber& o) const = default;
};

/// Fundamental discriminant d_K = -D of an imaginary quadratic field.
inline bool is_fundamental_discriminant(int64_t d) {
  if (d >= 0) return false;
  const int64_t r = floor_mod(d, 4);
  if (r == 1) return is_squarefree(-d);
  if (r != 0) return false;
  const int64_t m = d / 4;
  const int64_t mr = floor_mod(m, 4);
  return (mr == 2 || mr == 3) && is_squarefree(-m);
}

class QuadraticField {
 public:
  explicit QuadraticField(int64_t D) : D_(D), d_(-D) {
    if (!is_fundamental_discriminant(-D)) throw ValidationError("D_K=" + std::to_string(D) + " is not a fundamental discriminant");
  }

  int64_t D() const { return D_; }
  int64_t d() const { return d_; }

  QuadNumber mul(const QuadNumber& a, const QuadNumber& b) const {
    return {a.x * b.x + Rational(d_) * a.y * b.y, a.x * b.y + a.y * b.x};
  }
  QuadNumber conj(const QuadNumber& a) const { return {a.x, -a.y}; }
  Rational norm(const QuadNumber& a) const { return a.x * a.x - Rational(d_) * a.y * a.y; }
  Rational trace(const QuadNumber& a) const { return 2 * a.x; }

  /// The generator of O_K used throughout: (D - sqrt(-D))/2 for odd D, (D - 2 sqrt(-D))/4 for even D.
  QuadNumber theta() const { return {Rational(D_, D_ % 2 ? 2 : 4), Rational(-1, 2)}; }
  /// theta_f = f * theta generates Z + f O_K.
  QuadNumber theta(const BigInt& f) const {
    const QuadNumber t = theta();
    return {t.x * Rational(f), t.y * Rational(f)};
  }

  /// Class number of O_K by counting reduced forms.
  int64_t class_number() const;

 private:
  int64_t D_, d_;
};

/// Z-lattice of rank 2 in K; rows (x, y) of `basis` over `den` mean (x + y sqrt d)/den.
struct QuadLattice {
  IntMatrix basis;
  BigInt den = 1;

  std::vector<QuadNumber> elements() const {
    std::vector<QuadNumber> out;
    for (std::size_t r = 0; r < basis.rows(); ++r)
      out.push_back({Rational(basis(r, 0), den), Rational(basis(r, 1), den)});
    return out;
  }
  Rational covolume() const { return Rational(big_abs(integer_determinant(basis))) / Rational(den * den); }
  bool operator==(const QuadLattice& o) const = default;
};

inline QuadLattice quad_lattice(const std::vector<QuadNumber>& gens) {
  BigInt den = 1;
  for (const auto& g : gens) den = boost::multiprecision::lcm(den, boost::multiprecision::lcm(denominator(g.x), denominator(g.y)));
  IntMatrix m(0, 2);
  for (const auto& g : gens) m.append_row({numerator(g.x * Rational(den)), numerator(g.y * Rational(den))});
  QuadLattice L{hermite_form(m), den};
  if (L.basis.rows() != 2) throw PreconditionError("quad_lattice: generators do not span K");
  BigInt g = den;
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) g = boost::multiprecision::gcd(g, L.basis(r, c));
  if (g > 1) {
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 2; ++c) L.basis(r, c) /= g;
    L.den /= g;
  }
  return L;
}

inline QuadLattice quad_lattice_product(const QuadraticField& K, const QuadLattice& a, const QuadLattice& b) {
  std::vector<QuadNumber> g;
  for (const auto& u : a.elements())
    for (const auto& v : b.elements()) g.push_back(K.mul(u, v));
  return quad_lattice(g);
}

/// Z + f O_K as a lattice.
inline QuadLattice quadratic_order(const QuadraticField& K, const BigInt& f) {
  return quad_lattice({{Rational(1), Rational(0)}, K.theta(f)});
}

/// Norm of a lattice in K relative to O_K: covol(L) / covol(O_K).
inline Rational quad_lattice_norm(const QuadraticField& K, const QuadLattice& L) {
  return L.covolume() / quadratic_order(K, 1).covolume();
}

/// Elements of L with norm exactly `value` (at most `limit`).
inline std::vector<QuadNumber> quad_elements_of_norm(const QuadraticField& K, const QuadLattice& L,
                                                     const Rational& value, std::size_t limit = static_cast<std::size_t>(-1)) {
  const auto e = L.elements();
  RationalMatrix g(2, std::vector<Rational>(2));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) g[i][j] = K.trace(K.mul(e[i], K.conj(e[j]))) / 2;
  std::vector<QuadNumber> out;
  for (const auto& v : vectors_of_norm(g, value, limit))
    out.push_back({Rational(v[0]) * e[0].x + Rational(v[1]) * e[1].x, Rational(v[0]) * e[0].y + Rational(v[1]) * e[1].y});
  return out;
}

// ---------------------------------------------------------------- binary forms

/// a x^2 + b xy + c y^2.
struct BinaryForm {
  int64_t a = 1, b = 0, c = 0;
  int64_t discriminant() const { return b * b - 4 * a * c; }
  bool operator==(const BinaryForm& o) const = default;
  auto operator<=>(const BinaryForm& o) const = default;
};

namespace detail {

inline int64_t floor_div64(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// x with a x = g mod b style extended gcd: returns (g, u, v) with u a + v b = g >= 0.
inline std::tuple<int64_t, int64_t, int64_t> ext_gcd(int64_t a, int64_t b) {
  int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const int64_t q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

inline BinaryForm normalize_form(BinaryForm f) {
  const int64_t D = f.discriminant();
  if (-f.a < f.b && f.b <= f.a) return f;
  const int64_t r = floor_div64(f.a - f.b, 2 * f.a);
  f.b += 2 * r * f.a;
  f.c = static_cast<int64_t>((static_cast<__int128>(f.b) * f.b - D) / (4 * static_cast<__int128>(f.a)));
  return f;
}

}  // namespace detail

inline BinaryForm reduce_form(BinaryForm f) {
  if (f.a <= 0 || f.discriminant() >= 0) throw PreconditionError("reduce_form: form is not positive definite");
  f = detail::normalize_form(f);
  while (f.a > f.c) {
    f = {f.c, -f.b, f.a};
    f = detail::normalize_form(f);
  }
  if (f.a == f.c && f.b < 0) f.b = -f.b;
  return f;
}

inline bool is_reduced(const BinaryForm& f) {
  return std::abs(f.b) <= f.a && f.a <= f.c && !(f.b < 0 && (std::abs(f.b) == f.a || f.a == f.c));
}

inline BinaryForm principal_form(int64_t Delta) {
  const int64_t b = floor_mod(Delta, 2);
  return {1, b, (b * b - Delta) / 4};
}

/// Gaussian composition of two primitive forms of the same discriminant, reduced.
inline BinaryForm compose_forms(BinaryForm f1, BinaryForm f2) {
  const int64_t D = f1.discriminant();
  if (f2.discriminant() != D) throw PreconditionError("compose_forms: discriminants differ");
  if (f1.a > f2.a) std::swap(f1, f2);
  using i128 = __int128;
  const int64_t s = (f1.b + f2.b) / 2;
  const int64_t n = f2.b - s;
  int64_t y1, d;
  if (f2.a % f1.a == 0) {
    y1 = 0;
    d = f1.a;
  } else {
    auto [g, u, v] = detail::ext_gcd(f2.a, f1.a);
    d = g;
    y1 = u;
  }
  int64_t x2, y2, d1;
  if (s % d == 0) {
    y2 = -1;
    x2 = 0;
    d1 = d;
  } else {
    auto [g, u, v] = detail::ext_gcd(s, d);
    d1 = g;
    x2 = u;
    y2 = -v;
  }
  const int64_t v1 = f1.a / d1, v2 = f2.a / d1;
  i128 r = (static_cast<i128>(y1) * y2 * n - static_cast<i128>(x2) * f2.c) % v1;
  if (r < 0) r += v1;
  const i128 b3 = f2.b + 2 * static_cast<i128>(v2) * r;
  const i128 a3 = static_cast<i128>(v1) * v2;
  const i128 c3 = (b3 * b3 - D) / (4 * a3);
  BinaryForm out{static_cast<int64_t>(a3), static_cast<int64_t>(b3), static_cast<int64_t>(c3)};
  // keep coefficients bounded before the 64-bit reduction loop
  if (static_cast<i128>(out.b) != b3 || static_cast<i128>(out.c) != c3) throw PrecisionExhausted("compose_forms: overflow");
  return reduce_form(out);
}

inline BinaryForm inverse_form(const BinaryForm& f) { return reduce_form({f.a, -f.b, f.c}); }

inline BinaryForm power_form(BinaryForm f, int64_t e) {
  BinaryForm r = principal_form(f.discriminant());
  f = reduce_form(f);
  while (e > 0) {
    if (e & 1) r = compose_forms(r, f);
    f = compose_forms(f, f);
    e >>= 1;
  }
  return r;
}

/// All reduced primitive forms of discriminant Delta < 0, sorted.
inline std::vector<BinaryForm> reduced_forms(int64_t Delta) {
  if (Delta >= 0 || floor_mod(Delta, 4) > 1) throw ValidationError("reduced_forms: invalid discriminant");
  std::vector<BinaryForm> out;
  for (int64_t a = 1; 3 * a * a <= -Delta; ++a) {
    for (int64_t b = -a + 1; b <= a; ++b) {
      if (((b - Delta) & 1) != 0) continue;
      const int64_t num = b * b - Delta;
      if (num % (4 * a) != 0) continue;
      const int64_t c = num / (4 * a);
      if (c < a) continue;
      if (b < 0 && a == c) continue;
      if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
      out.push_back({a, b, c});
    }
  }
  return out;
}

inline int64_t QuadraticField::class_number() const { return static_cast<int64_t>(reduced_forms(d_).size()); }

/// The lattice a Z + ((-b + sqrt(Delta))/2) Z, with sqrt(Delta) = f sqrt(d_K).
inline QuadLattice form_to_lattice(const BinaryForm& F, int64_t f) {
  return quad_lattice({{Rational(F.a), Rational(0)}, {Rational(-F.b, 2), Rational(f, 2)}});
}

/// Reduced form of an invertible ideal lattice of Z + f O_K, oriented so that
/// the basis (a, (-b + sqrt Delta)/2) is positive.
inline BinaryForm lattice_to_form(const QuadraticField& K, const QuadLattice& L, int64_t f) {
  const Rational n = quad_lattice_norm(K, L) / Rational(f);  // index norm relative to Z + f O_K
  const auto e = L.elements();
  // N(x e0 + y e1) / n as a binary form
  const Rational A = K.norm(e[0]) / n, C = K.norm(e[1]) / n;
  const Rational B = K.trace(K.mul(e[0], K.conj(e[1]))) / n;
  if (denominator(A) != 1 || denominator(B) != 1 || denominator(C) != 1)
    throw AssertionFailure("lattice_to_form: non-integral norm form");
  BinaryForm F{static_cast<int64_t>(numerator(A)), static_cast<int64_t>(numerator(B)), static_cast<int64_t>(numerator(C))};
  // in the positively oriented basis (a, (-b + sqrt Delta)/2) the norm form is (a, -b, c)
  const Rational orient = K.mul(K.conj(e[0]), e[1]).y;
  if (orient > 0) F.b = -F.b;
  return reduce_form(F);
}

/// Properly equivalent form whose first coefficient is prime to m.
inline BinaryForm form_with_a_prime_to(const BinaryForm& F, int64_t m) {
  if (std::gcd(F.a, m) == 1) return F;
  if (std::gcd(F.c, m) == 1) return {F.c, -F.b, F.a};
  for (int64_t t = 1; t < 4 * m + 4; ++t) {
    // x -> x + t y
    const BinaryForm G{F.a, F.b + 2 * t * F.a, F.a * t * t + F.b * t + F.c};
    if (std::gcd(G.c, m) == 1) return {G.c, -G.b, G.a};
  }
  throw AssertionFailure("form_with_a_prime_to: no representative found");
}

/// The ideal A O' for A = [a, (-b + sqrt Delta)/2] of Z + f O_K with a prime to
/// f/g, O' = Z + g O_K, as an unreduced form [a, (-b' + sqrt Delta')/2].
inline BinaryForm extend_ideal(const BinaryForm& F, int64_t f, int64_t g) {
  if (f % g != 0) throw PreconditionError("extend_ideal: g must divide f");
  const int64_t h = f / g;
  if (std::gcd(F.a, h) != 1) throw PreconditionError("extend_ideal: a must be prime to f/g");
  const int64_t D = F.discriminant() / (h * h);
  const int64_t m = 2 * F.a;
  // h b' = b mod 2a
  auto [gg, u, v] = detail::ext_gcd(floor_mod(h, m), m);
  if (gg != 1) throw AssertionFailure("extend_ideal: conductor not invertible");
  int64_t b = static_cast<int64_t>(floor_mod(static_cast<int64_t>((static_cast<__int128>(F.b) * floor_mod(u, m)) % m), m));
  if (b > F.a) b -= m;
  const __int128 num = static_cast<__int128>(b) * b - D;
  if (num % (4 * F.a) != 0) throw AssertionFailure("extend_ideal: inconsistent residue");
  return {F.a, b, static_cast<int64_t>(num / (4 * F.a))};
}

/// Image of a form class under the natural map Pic(Z + f O_K) -> Pic(Z + g O_K), g | f.
inline BinaryForm extend_form(const BinaryForm& F, int64_t f, int64_t g) {
  return reduce_form(extend_ideal(form_with_a_prime_to(F, f / g), f, g));
}

// ---------------------------------------------------------------- ring class groups

struct RingClassGroup {
  int64_t D_K = 0;
  int64_t conductor = 1;
  int64_t discriminant = 0;
  std::vector<BinaryForm> forms;
  std::map<BinaryForm, std::size_t> index;
  std::vector<std::pair<int64_t, int>> elementary_divisors;  // (prime, exponent) of each cyclic factor

  std::size_t size() const { return forms.size(); }
  std::size_t identity() const { return index.at(principal_form(discriminant)); }
  std::size_t multiply(std::size_t i, std::size_t j) const { return index.at(compose_forms(forms[i], forms[j])); }
  std::size_t inverse(std::size_t i) const { return index.at(inverse_form(forms[i])); }
  std::size_t find(const BinaryForm& f) const { return index.at(reduce_form(f)); }

  int64_t order_of(std::size_t i) const {
    const int64_t h = static_cast<int64_t>(size());
    int64_t ord = h;
    for (auto [ell, e] : factorize(h))
      for (int k = 0; k < e; ++k) {
        if (power_form(forms[i], ord / ell) == forms[identity()])
          ord /= ell;
        else
          break;
      }
    return ord;
  }
};

inline RingClassGroup ring_class_group(int64_t D_K, int64_t conductor) {
  const QuadraticField K(D_K);
  if (conductor < 1) throw ValidationError("ring_class_group: conductor must be positive");
  RingClassGroup G;
  G.D_K = D_K;
  G.conductor = conductor;
  const __int128 disc = static_cast<__int128>(K.d()) * conductor * conductor;
  if (disc < -(static_cast<__int128>(1) << 50)) throw BoundExceeded("ring_class_group: discriminant too large");
  G.discriminant = static_cast<int64_t>(disc);
  G.forms = reduced_forms(G.discriminant);
  for (std::size_t i = 0; i < G.forms.size(); ++i) G.index[G.forms[i]] = i;
  // elementary divisors from |G[ell^k]| for each prime ell | h
  const int64_t h = static_cast<int64_t>(G.size());
  if (h <= 20000) {
    std::vector<int64_t> orders(G.size());
    for (std::size_t i = 0; i < G.size(); ++i) orders[i] = G.order_of(i);
    for (auto [ell, e] : factorize(h)) {
      std::vector<int> log_torsion;  // log_ell |G[ell^k]| for k = 0..e
      for (int k = 0; k <= e; ++k) {
        const int64_t lk = ipow(ell, k);
        int64_t count = 0;
        for (auto o : orders)
          if (lk % o == 0) ++count;
        int lg = 0;
        while (count > 1) {
          count /= ell;
          ++lg;
        }
        log_torsion.push_back(lg);
      }
      // number of cyclic factors of order >= ell^k is log|G[ell^k]| - log|G[ell^(k-1)]|
      for (int k = e; k >= 1; --k) {
        const int at_least_k = log_torsion[static_cast<std::size_t>(k)] - log_torsion[static_cast<std::size_t>(k - 1)];
        const int at_least_k1 = k < e ? log_torsion[static_cast<std::size_t>(k + 1)] - log_torsion[static_cast<std::size_t>(k)] : 0;
        for (int c = 0; c < at_least_k - at_least_k1; ++c) G.elementary_divisors.emplace_back(ell, k);
      }
    }
  }
  return G;
}

// ---------------------------------------------------------------- Galois labels

namespace detail {

// Square root of d modulo p^k (p odd, d a nonzero square mod p); smallest root mod p lifted.
inline int64_t sqrt_mod_prime_power(int64_t d, int64_t p, int k) {
  const int64_t dp = floor_mod(d, p);
  int64_t r = -1;
  for (int64_t x = 0; x < p; ++x)
    if (mulmod(x, x, p) == dp) {
      r = x;
      break;
    }
  if (r <= 0) throw PreconditionError("sqrt_mod_prime_power: not a nonzero square mod p");
  int64_t m = p;
  for (int j = 1; j < k; ++j) {
    m *= p;
    // r <- r - (r^2 - d) / (2r)
    const int64_t f = floor_mod(mulmod(r, r, m) - d, m);
    const int64_t inv = powmod(floor_mod(2 * r, m), m / p * (p - 1) - 1, m);
    r = floor_mod(r - mulmod(f, inv, m), m);
  }
  return r;
}

// Discrete log of y in 1 + pZ modulo p^(n+1), base 1 + p.
inline int64_t log_one_plus_p(int64_t y, int64_t p, int n) {
  const int64_t M = ipow(p, n + 1);
  if (floor_mod(y, p) != 1) throw PreconditionError("log_one_plus_p: argument not 1 mod p");
  const int64_t g = 1 + p;
  int64_t k = 0;
  int64_t cur = floor_mod(y, M);
  const int64_t ginv = powmod(g, M / p * (p - 1) - 1, M);
  int64_t gpow_inv = ginv;  // g^(-p^j)
  for (int j = 0; j < n; ++j) {
    // cur = 1 + p^(j+1) * (digit + ...)
    const int64_t pj1 = ipow(p, j + 1);
    const int64_t digit = floor_mod((cur - 1) / pj1, p);
    k += digit * ipow(p, j);
    cur = mulmod(cur, powmod(gpow_inv, digit, M), M);
    gpow_inv = powmod(gpow_inv, p, M);
  }
  if (cur != 1) throw AssertionFailure("log_one_plus_p: residual not 1");
  return k;
}

}  // namespace detail

/// Labels Pic(Z + p^(n+1) O_K) -> Gal(K_n/K) = Z/p^n for p split in K and
/// prime to h_K. For an ideal A with A^(h_K) O_K = (alpha), the label is
/// log_(1+p)((alpha_P / alpha_Pbar)^(p-1)) / ((p-1) h_K) mod p^n, where P is
/// the prime above p on which sqrt(d) reduces to the smallest root mod p.
class GaloisLabeler {
 public:
  GaloisLabeler(int64_t D_K, int64_t p, int n) : K_(D_K), p_(p), n_(n) {
    if (!is_prime(p) || p == 2) throw ValidationError("GaloisLabeler: p must be an odd prime");
    if (kronecker(K_.d(), p) != 1) throw ValidationError("GaloisLabeler: p must split in K");
    hK_ = K_.class_number();
    if (hK_ % p == 0) throw ValidationError("GaloisLabeler: p divides the class number of K");
    modulus_ = ipow(p, n + 1);
    root_ = detail::sqrt_mod_prime_power(K_.d(), p, n + 1);
  }

  int64_t p() const { return p_; }
  int n() const { return n_; }
  int64_t class_number() const { return hK_; }

  /// Label of a form of discriminant f^2 d_K with f a power of p.
  int64_t label(const BinaryForm& F, int64_t f) const {
    if (n_ == 0) return 0;
    const BinaryForm G = extend_ideal(form_with_a_prime_to(F, p_), f, 1);
    const QuadLattice A = form_to_lattice(G, 1);
    QuadLattice power = A;
    for (int64_t k = 1; k < hK_; ++k) power = quad_lattice_product(K_, power, A);
    const Rational target = quad_lattice_norm(K_, power);
    const auto alpha = quad_elements_of_norm(K_, power, target, 1);
    if (alpha.empty()) throw AssertionFailure("GaloisLabeler: A^h is not principal");
    return label_of_element(alpha.front());
  }

  /// Label of the principal ideal (alpha), alpha prime to p.
  int64_t label_of_element(const QuadNumber& alpha) const {
    if (n_ == 0) return 0;
    const int64_t M = modulus_;
    auto reduce = [&](const Rational& r) {
      const int64_t num = static_cast<int64_t>(numerator(r) % M);
      const int64_t den = static_cast<int64_t>(denominator(r) % M);
      return mulmod(floor_mod(num, M), powmod(floor_mod(den, M), M / p_ * (p_ - 1) - 1, M), M);
    };
    const int64_t x = reduce(alpha.x), y = reduce(alpha.y);
    const int64_t ap = floor_mod(x + mulmod(y, root_, M), M);
    const int64_t apbar = floor_mod(x - mulmod(y, root_, M), M);
    if (ap % p_ == 0 || apbar % p_ == 0) throw PreconditionError("GaloisLabeler: element not prime to p");
    const int64_t ratio = mulmod(ap, powmod(apbar, M / p_ * (p_ - 1) - 1, M), M);
    const int64_t l = detail::log_one_plus_p(powmod(ratio, p_ - 1, M), p_, n_);
    const int64_t pn = ipow(p_, n_);
    const int64_t scale = floor_mod((p_ - 1) * hK_, pn);
    return mulmod(l, powmod(scale, pn / p_ * (p_ - 1) - 1, pn), pn);
  }

 private:
  QuadraticField K_;
  int64_t p_;
  int n_;
  int64_t hK_ = 1;
  int64_t modulus_ = 1;
  int64_t root_ = 0;
};

}  // namespace anticyc
