#pragma once

// Finite-layer Iwasawa algebra Lambda_n = Z_p[Z/p^n] at coefficient
// precision p^N. Elements are stored in the group basis sigma^0..sigma^{p^n-1}
// with sigma a fixed generator; the X-basis (sigma = 1 + X) is a derived view.

#include "anticyc/common.hpp"
#include "anticyc/zmod.hpp"

#include <string>
#include <vector>

namespace anticyc {

enum class Sign { Plus, Minus };

inline Sign opposite(Sign s) { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }
/// The sign of (-1)^n.
inline Sign parity_sign(int n) { return n % 2 == 0 ? Sign::Plus : Sign::Minus; }
inline const char* to_string(Sign s) { return s == Sign::Plus ? "+" : "-"; }

class LayerContext {
 public:
  LayerContext() = default;
  LayerContext(int64_t p, int n, int N) : ring_(p, N), n_(n) {
    if (p == 2) throw ValidationError("layer: p must be an odd prime");
    if (n < 0) throw ValidationError("layer: n must be >= 0");
    BigInt deg = boost::multiprecision::pow(BigInt(p), n);
    if (deg > 1'000'000) throw ValidationError("layer: p^n too large");
    degree_ = static_cast<std::size_t>(deg);
  }

  int64_t p() const { return ring_.p(); }
  int n() const { return n_; }
  int N() const { return ring_.N(); }
  std::size_t degree() const { return degree_; }
  const ZmodRing& ring() const { return ring_; }

  LayerContext at_layer(int m) const { return {p(), m, N()}; }

  bool operator==(const LayerContext& o) const { return ring_ == o.ring_ && n_ == o.n_; }

 private:
  ZmodRing ring_{3, 1};
  int n_ = 0;
  std::size_t degree_ = 1;
};

/// Exact integer polynomial in T = 1 + X (so T is the group generator).
/// Coefficient k multiplies T^k.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { trim(); }

  static IntPoly constant(const BigInt& c) { return IntPoly({c}); }
  /// X = T - 1.
  static IntPoly x() { return IntPoly({BigInt(-1), BigInt(1)}); }
  static IntPoly monomial(std::size_t k, const BigInt& c = 1) {
    std::vector<BigInt> v(k + 1);
    v[k] = c;
    return IntPoly(std::move(v));
  }

  const std::vector<BigInt>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }

  IntPoly operator+(const IntPoly& o) const {
    std::vector<BigInt> r(std::max(c_.size(), o.c_.size()));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return IntPoly(std::move(r));
  }
  IntPoly operator-(const IntPoly& o) const {
    std::vector<BigInt> r(std::max(c_.size(), o.c_.size()));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
    return IntPoly(std::move(r));
  }
  IntPoly operator*(const IntPoly& o) const {
    if (is_zero() || o.is_zero()) return {};
    std::vector<BigInt> r(c_.size() + o.c_.size() - 1);
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      for (std::size_t j = 0; j < o.c_.size(); ++j)
        if (o.c_[j] != 0) r[i + j] += c_[i] * o.c_[j];
    }
    return IntPoly(std::move(r));
  }
  bool operator==(const IntPoly& o) const { return c_ == o.c_; }

  /// Value at T = 1, i.e. at X = 0.
  BigInt value_at_x_zero() const {
    BigInt s = 0;
    for (const auto& x : c_) s += x;
    return s;
  }

  /// Exact coefficients in powers of X.
  std::vector<BigInt> x_coefficients() const {
    // T^k = sum_j C(k, j) X^j
    std::vector<BigInt> out(c_.size());
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (c_[k] == 0) continue;
      BigInt binom = 1;
      for (std::size_t j = 0; j <= k; ++j) {
        out[j] += c_[k] * binom;
        binom = binom * (k - j) / (j + 1);
      }
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<BigInt> c_;
};

/// The p^m-th cyclotomic polynomial evaluated at T = 1 + X:
/// sum_{k<p} T^{k p^{m-1}}.
inline IntPoly cyclotomic_p_power(int64_t p, int m) {
  if (m < 1) throw std::invalid_argument("cyclotomic_p_power: m must be >= 1");
  const std::size_t step = static_cast<std::size_t>(ipow(p, m - 1));
  std::vector<BigInt> c(step * static_cast<std::size_t>(p - 1) + 1);
  for (int64_t k = 0; k < p; ++k) c[static_cast<std::size_t>(k) * step] = 1;
  return IntPoly(std::move(c));
}

class IwasawaElement {
 public:
  IwasawaElement() = default;
  explicit IwasawaElement(const LayerContext& ctx) : ctx_(ctx), c_(ctx.degree(), 0) {}
  IwasawaElement(const LayerContext& ctx, std::vector<int64_t> coeffs) : ctx_(ctx), c_(std::move(coeffs)) {
    if (c_.size() != ctx_.degree())
      throw ValidationError("IwasawaElement: expected " + std::to_string(ctx_.degree()) + " coefficients");
    for (auto& x : c_) x = ctx_.ring().reduce(x);
  }

  static IwasawaElement constant(const LayerContext& ctx, int64_t c) {
    IwasawaElement e(ctx);
    e.c_[0] = ctx.ring().reduce(c);
    return e;
  }
  static IwasawaElement one(const LayerContext& ctx) { return constant(ctx, 1); }
  /// sigma^k for any integer k.
  static IwasawaElement sigma_power(const LayerContext& ctx, int64_t k) {
    IwasawaElement e(ctx);
    e.c_[static_cast<std::size_t>(floor_mod(k, static_cast<int64_t>(ctx.degree())))] = 1 % ctx.ring().modulus();
    return e;
  }
  /// X = sigma - 1.
  static IwasawaElement x(const LayerContext& ctx) { return sigma_power(ctx, 1) - one(ctx); }

  /// Image of an exact polynomial in T = 1 + X.
  static IwasawaElement from_poly(const LayerContext& ctx, const IntPoly& f) {
    IwasawaElement e(ctx);
    const auto d = ctx.degree();
    for (std::size_t k = 0; k < f.coeffs().size(); ++k) {
      auto& slot = e.c_[k % d];
      slot = ctx.ring().add(slot, ctx.ring().reduce(f.coeffs()[k]));
    }
    return e;
  }

  /// Element from coefficients in powers of X (any length).
  static IwasawaElement from_x_coefficients(const LayerContext& ctx, const std::vector<int64_t>& xc) {
    IwasawaElement result(ctx);
    IwasawaElement xpow = one(ctx);
    const IwasawaElement xe = x(ctx);
    for (std::size_t j = 0; j < xc.size(); ++j) {
      if (j > 0) xpow = xpow * xe;
      if (xc[j] != 0) result = result + xpow.scaled(xc[j]);
    }
    return result;
  }

  const LayerContext& context() const { return ctx_; }
  const std::vector<int64_t>& coeffs() const { return c_; }
  int64_t operator[](std::size_t k) const { return c_[k]; }
  std::size_t size() const { return c_.size(); }

  bool is_zero() const { return detail::is_zero(c_); }

  IwasawaElement operator+(const IwasawaElement& o) const {
    check(o);
    IwasawaElement r(ctx_);
    for (std::size_t k = 0; k < c_.size(); ++k) r.c_[k] = ctx_.ring().add(c_[k], o.c_[k]);
    return r;
  }
  IwasawaElement operator-(const IwasawaElement& o) const {
    check(o);
    IwasawaElement r(ctx_);
    for (std::size_t k = 0; k < c_.size(); ++k) r.c_[k] = ctx_.ring().sub(c_[k], o.c_[k]);
    return r;
  }
  IwasawaElement operator-() const { return IwasawaElement(ctx_) - *this; }

  /// Cyclic convolution.
  IwasawaElement operator*(const IwasawaElement& o) const {
    check(o);
    const std::size_t d = c_.size();
    const int64_t mod = ctx_.ring().modulus();
    std::vector<__int128> acc(d, 0);
    for (std::size_t i = 0; i < d; ++i) {
      if (c_[i] == 0) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (o.c_[j] == 0) continue;
        std::size_t k = i + j;
        if (k >= d) k -= d;
        acc[k] = (acc[k] + static_cast<__int128>(c_[i]) * o.c_[j]) % mod;
      }
    }
    IwasawaElement r(ctx_);
    for (std::size_t k = 0; k < d; ++k) r.c_[k] = static_cast<int64_t>(acc[k]);
    return r;
  }

  IwasawaElement scaled(int64_t s) const {
    IwasawaElement r(ctx_);
    const int64_t sr = ctx_.ring().reduce(s);
    for (std::size_t k = 0; k < c_.size(); ++k) r.c_[k] = ctx_.ring().mul(c_[k], sr);
    return r;
  }

  /// sigma^k * this.
  IwasawaElement shifted(int64_t k) const {
    const auto d = static_cast<int64_t>(c_.size());
    IwasawaElement r(ctx_);
    for (int64_t i = 0; i < d; ++i) r.c_[static_cast<std::size_t>(floor_mod(i + k, d))] = c_[static_cast<std::size_t>(i)];
    return r;
  }

  /// The involution inverting group-like elements.
  IwasawaElement involution() const {
    const std::size_t d = c_.size();
    IwasawaElement r(ctx_);
    for (std::size_t k = 0; k < d; ++k) r.c_[(d - k) % d] = c_[k];
    return r;
  }

  /// Natural surjection to layer m < n (sigma_n -> sigma_m).
  IwasawaElement project(int m) const {
    if (m >= ctx_.n() || m < 0) throw PreconditionError("project: target layer must satisfy 0 <= m < n");
    LayerContext target = ctx_.at_layer(m);
    IwasawaElement r(target);
    const std::size_t d = target.degree();
    for (std::size_t k = 0; k < c_.size(); ++k) r.c_[k % d] = target.ring().add(r.c_[k % d], c_[k]);
    return r;
  }

  /// Sum of coefficients (trivial character).
  int64_t augmentation() const {
    int64_t s = 0;
    for (int64_t x : c_) s = ctx_.ring().add(s, x);
    return s;
  }

  /// Coefficients in the X-basis 1, X, ..., X^{p^n - 1}.
  std::vector<int64_t> x_coefficients() const {
    // sigma^k = (1+X)^k = sum_j C(k, j) X^j; binomials built mod p^N by Pascal.
    const std::size_t d = c_.size();
    const ZmodRing& ring = ctx_.ring();
    std::vector<int64_t> out(d, 0), row(d, 0);
    row[0] = 1 % ring.modulus();
    for (std::size_t k = 0; k < d; ++k) {
      if (k > 0)
        for (std::size_t j = k; j >= 1; --j) row[j] = ring.add(row[j], row[j - 1]);
      if (c_[k] == 0) continue;
      for (std::size_t j = 0; j <= k; ++j) out[j] = ring.add(out[j], ring.mul(c_[k], row[j]));
    }
    return out;
  }

  /// Matrix of g -> this * g on the group basis.
  ZMatrix multiplication_matrix() const {
    const std::size_t d = c_.size();
    ZMatrix m(ctx_.ring(), d, d);
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t i = 0; i < d; ++i) m((i + j) % d, j) = c_[i];
    return m;
  }

  bool operator==(const IwasawaElement& o) const { return ctx_ == o.ctx_ && c_ == o.c_; }

 private:
  void check(const IwasawaElement& o) const {
    if (!(ctx_ == o.ctx_)) throw PreconditionError("IwasawaElement: context mismatch");
  }
  LayerContext ctx_;
  std::vector<int64_t> c_{0};
};

/// omega_n and its signed factors, both as exact polynomials in T = 1 + X
/// and as elements of Lambda_n.
struct OmegaFamily {
  LayerContext context;
  std::vector<IntPoly> cyclotomic;  // cyclotomic[m-1] = Phi_{p^m}(1+X), 1 <= m <= n
  IntPoly omega, omega_plus, omega_minus, tilde_plus, tilde_minus;

  const IntPoly& signed_omega(Sign s) const { return s == Sign::Plus ? omega_plus : omega_minus; }
  const IntPoly& tilde(Sign s) const { return s == Sign::Plus ? tilde_plus : tilde_minus; }

  IwasawaElement element(const IntPoly& f) const { return IwasawaElement::from_poly(context, f); }

  /// omega_n = omega^+ * tilde^- = omega^- * tilde^+ as integer polynomials.
  bool factorization_holds() const {
    return omega_plus * tilde_minus == omega && omega_minus * tilde_plus == omega;
  }
};

inline OmegaFamily omega_family(const LayerContext& ctx) {
  OmegaFamily f;
  f.context = ctx;
  const int64_t p = ctx.p();
  f.omega = IntPoly::monomial(static_cast<std::size_t>(ipow(p, ctx.n()))) - IntPoly::constant(1);
  f.tilde_plus = IntPoly::constant(1);
  f.tilde_minus = IntPoly::constant(1);
  for (int m = 1; m <= ctx.n(); ++m) {
    f.cyclotomic.push_back(cyclotomic_p_power(p, m));
    if (m % 2 == 0)
      f.tilde_plus = f.tilde_plus * f.cyclotomic.back();
    else
      f.tilde_minus = f.tilde_minus * f.cyclotomic.back();
  }
  f.omega_plus = IntPoly::x() * f.tilde_plus;
  f.omega_minus = IntPoly::x() * f.tilde_minus;
  return f;
}

/// A value in Z[Y]/Phi_{p^m}(Y) with coefficients mod p^N; Y is a primitive
/// p^m-th root of unity. For m = 0 the ring is Z and Y = 1.
struct CharacterValue {
  int64_t p = 3;
  int order_exponent = 0;
  std::vector<int64_t> coeffs;  // length phi(p^m), or 1 when m = 0

  bool is_zero() const { return detail::is_zero(coeffs); }
  bool operator==(const CharacterValue&) const = default;
};

inline CharacterValue character_multiply(const CharacterValue& a, const CharacterValue& b, const ZmodRing& ring);

/// Extends sigma -> Y linearly, for a character of order p^m.
inline CharacterValue evaluate_character(const IwasawaElement& a, int m) {
  const LayerContext& ctx = a.context();
  if (m < 0 || m > ctx.n()) throw PreconditionError("evaluate_character: order p^m must divide p^n");
  const ZmodRing& ring = ctx.ring();
  const auto order = static_cast<std::size_t>(ipow(ctx.p(), m));
  CharacterValue out{ctx.p(), m, {}};
  if (m == 0) {
    out.coeffs = {a.augmentation()};
    return out;
  }
  std::vector<int64_t> y(order, 0);
  for (std::size_t k = 0; k < a.size(); ++k) y[k % order] = ring.add(y[k % order], a[k]);
  // Y^{(p-1) p^{m-1} + r} = -sum_{j<p-1} Y^{j p^{m-1} + r}
  const std::size_t step = order / static_cast<std::size_t>(ctx.p());
  const std::size_t phi = order - step;
  for (std::size_t k = order; k-- > phi;) {
    int64_t c = y[k];
    if (c == 0) continue;
    y[k] = 0;
    const std::size_t r = k - phi;
    for (std::size_t j = 0; j + 1 < static_cast<std::size_t>(ctx.p()); ++j) {
      auto& slot = y[j * step + r];
      slot = ring.sub(slot, c);
    }
  }
  y.resize(phi);
  out.coeffs = std::move(y);
  return out;
}

inline CharacterValue character_multiply(const CharacterValue& a, const CharacterValue& b, const ZmodRing& ring) {
  if (a.order_exponent != b.order_exponent || a.p != b.p) throw PreconditionError("character_multiply: order mismatch");
  if (a.order_exponent == 0) return {a.p, 0, {ring.mul(a.coeffs[0], b.coeffs[0])}};
  const auto order = static_cast<std::size_t>(ipow(a.p, a.order_exponent));
  LayerContext ctx(a.p, a.order_exponent, ring.N());
  std::vector<int64_t> ea(order, 0), eb(order, 0);
  std::copy(a.coeffs.begin(), a.coeffs.end(), ea.begin());
  std::copy(b.coeffs.begin(), b.coeffs.end(), eb.begin());
  return evaluate_character(IwasawaElement(ctx, ea) * IwasawaElement(ctx, eb), a.order_exponent);
}

}  // namespace anticyc
