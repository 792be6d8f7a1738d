#pragma once

// Ideals of Lambda_n mod p^N, held as shift-closed Z/p^N-submodules of the
// coefficient space in Howell normal form. Two handles are equal iff their
// bases are identical.

#include "anticyc/iwasawa.hpp"
#include "anticyc/zmod.hpp"

#include <vector>

namespace anticyc {

class IdealHandle {
 public:
  IdealHandle() = default;

  static IdealHandle zero(const LayerContext& ctx) {
    IdealHandle h;
    h.ctx_ = ctx;
    h.basis_ = ZMatrix(ctx.ring(), 0, ctx.degree());
    return h;
  }
  static IdealHandle unit(const LayerContext& ctx) { return from_generators(ctx, {IwasawaElement::one(ctx)}); }

  /// Smallest ideal containing the generators.
  static IdealHandle from_generators(const LayerContext& ctx, const std::vector<IwasawaElement>& gens) {
    IdealHandle h;
    h.ctx_ = ctx;
    ZMatrix rows(ctx.ring(), 0, ctx.degree());
    for (const auto& g : gens) {
      if (!(g.context() == ctx)) throw PreconditionError("ideal: generator context mismatch");
      if (g.is_zero()) continue;
      h.gens_.push_back(g);
      for (std::size_t k = 0; k < ctx.degree(); ++k) rows.append_row(g.shifted(static_cast<int64_t>(k)).coeffs());
    }
    h.basis_ = howell_form(rows);
    return h;
  }

  /// Ideal from a generating set of the underlying Z/p^N-module, which must
  /// already be shift-closed (e.g. a kernel of a Lambda-linear map).
  static IdealHandle from_module_rows(const LayerContext& ctx, const ZMatrix& rows) {
    IdealHandle h;
    h.ctx_ = ctx;
    h.basis_ = howell_form(rows);
    for (std::size_t i = 0; i < h.basis_.rows(); ++i) h.gens_.emplace_back(ctx, h.basis_.row_vector(i));
    if (!h.shift_closed()) throw AssertionFailure("ideal: module rows are not shift-closed");
    return h;
  }

  const LayerContext& context() const { return ctx_; }
  const ZMatrix& basis() const { return basis_; }
  const std::vector<IwasawaElement>& generators() const { return gens_; }

  bool is_zero() const { return basis_.rows() == 0; }
  bool is_unit() const { return contains(IwasawaElement::one(ctx_)); }

  bool contains(const IwasawaElement& a) const {
    check(a.context());
    return in_row_span(basis_, a.coeffs());
  }
  bool contains(const IdealHandle& j) const {
    check(j.ctx_);
    for (std::size_t i = 0; i < j.basis_.rows(); ++i)
      if (!in_row_span(basis_, j.basis_.row(i))) return false;
    return true;
  }

  /// Canonical representative of a + I.
  IwasawaElement reduce(const IwasawaElement& a) const {
    check(a.context());
    return {ctx_, howell_reduce(basis_, a.coeffs())};
  }

  /// log_p of the number of elements.
  int log_size() const { return span_log_size(basis_); }

  IdealHandle operator+(const IdealHandle& j) const {
    check(j.ctx_);
    IdealHandle h;
    h.ctx_ = ctx_;
    ZMatrix rows = basis_;
    for (std::size_t i = 0; i < j.basis_.rows(); ++i) rows.append_row(j.basis_.row(i));
    h.basis_ = howell_form(rows);
    h.gens_ = gens_;
    h.gens_.insert(h.gens_.end(), j.gens_.begin(), j.gens_.end());
    return h;
  }

  IdealHandle operator*(const IdealHandle& j) const {
    check(j.ctx_);
    std::vector<IwasawaElement> prods;
    for (const auto& a : gens_)
      for (const auto& b : j.gens_) prods.push_back(a * b);
    return from_generators(ctx_, prods);
  }

  bool operator==(const IdealHandle& o) const { return ctx_ == o.ctx_ && basis_ == o.basis_; }

  bool shift_closed() const {
    for (std::size_t i = 0; i < basis_.rows(); ++i) {
      IwasawaElement e(ctx_, basis_.row_vector(i));
      if (!in_row_span(basis_, e.shifted(1).coeffs())) return false;
    }
    return true;
  }

 private:
  void check(const LayerContext& c) const {
    if (!(ctx_ == c)) throw PreconditionError("ideal: context mismatch");
  }
  LayerContext ctx_;
  ZMatrix basis_;
  std::vector<IwasawaElement> gens_;
};

inline IdealHandle principal_ideal(const IwasawaElement& a) { return IdealHandle::from_generators(a.context(), {a}); }

/// I_chi^r for a character chi of order p^m: I_chi = (X) when m = 0 and
/// (Phi_{p^m}(1+X)) otherwise.
inline IdealHandle augmentation_ideal_power(const LayerContext& ctx, int m, int r) {
  if (r < 0) throw PreconditionError("augmentation_ideal_power: r must be >= 0");
  if (m < 0 || m > ctx.n()) throw PreconditionError("augmentation_ideal_power: order p^m must divide p^n");
  IntPoly base = m == 0 ? IntPoly::x() : cyclotomic_p_power(ctx.p(), m);
  IwasawaElement b = IwasawaElement::from_poly(ctx, base);
  IwasawaElement g = IwasawaElement::one(ctx);
  for (int i = 0; i < r; ++i) g = g * b;
  return principal_ideal(g);
}

/// Annihilator of a in Lambda_n / p^N.
inline IdealHandle annihilator(const IwasawaElement& a) {
  return IdealHandle::from_module_rows(a.context(), kernel_basis(a.multiplication_matrix()));
}

struct SignedQuotient {
  Sign sign = Sign::Plus;
  IwasawaElement value;    // canonical representative
  IdealHandle ambiguity;   // value is determined modulo this ideal
  bool exact_in_quotient;  // ambiguity == (omega_n^sign)
};

/// Divides theta by tilde-omega_n^{-sign}: returns g with
/// tilde^{-sign} * g = theta, canonical modulo the annihilator of the divisor
/// (which contains omega_n^sign and equals it when precision is not lost).
inline SignedQuotient signed_divide(const IwasawaElement& theta, Sign sign, const OmegaFamily& fam) {
  const LayerContext& ctx = theta.context();
  if (!(fam.context == ctx)) throw PreconditionError("signed_divide: omega family context mismatch");
  IwasawaElement killer = fam.element(fam.signed_omega(sign));
  if (!(killer * theta).is_zero())
    throw PreconditionError(std::string("signed_divide: theta is not annihilated by omega_n^") + to_string(sign));
  IwasawaElement divisor = fam.element(fam.tilde(opposite(sign)));
  auto sol = solve_linear(divisor.multiplication_matrix(), theta.coeffs());
  if (!sol) throw PrecisionExhausted("signed_divide: no quotient exists at precision p^" + std::to_string(ctx.N()));
  IdealHandle amb = IdealHandle::from_module_rows(ctx, sol->kernel);
  IwasawaElement g = amb.reduce(IwasawaElement(ctx, sol->x));
  bool exact = amb == principal_ideal(killer);
  return {sign, g, amb, exact};
}

}  // namespace anticyc
