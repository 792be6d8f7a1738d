#pragma once

// Theta elements in Lambda_n built from the Brandt eigenvector and labelled
// Gross points, their signed parts, the finite-level L-function and the
// verification suites that run on them.

#include "anticyc/brandt.hpp"
#include "anticyc/elliptic.hpp"
#include "anticyc/fitting.hpp"
#include "anticyc/gross.hpp"
#include "anticyc/ideal.hpp"
#include "anticyc/iwasawa.hpp"

#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace anticyc {

inline constexpr int kDefaultPrecision = 8;

struct ThetaInstance {
  EllipticCurve curve;
  int64_t conductor = 0;
  int64_t D_K = 0;
  int64_t p = 0;
  int64_t Nminus = 1;
  int64_t Nplus = 1;
};

struct ThetaElement {
  IwasawaElement value;
  std::string curve;
  int64_t D_K = 0;
  int64_t p = 0;
  int n = 0;
  int N = 0;
  Sign sign = Sign::Plus;  // parity of n
  bool annihilation_checked = false;
  std::string ambiguity = "defined up to +-sigma^k and up to a p-adic unit from the normalization of phi";
};

struct SignedTheta {
  Sign sign = Sign::Plus;
  IwasawaElement value;
  IdealHandle ambiguity;
  bool exact_in_quotient = false;
  bool round_trip = false;
};

struct FiniteLevelL {
  IwasawaElement value;
};

/// sum over points of phi(class) sigma^label, labels read in Z/p^n.
inline IwasawaElement theta_sum(const LayerContext& ctx, const GrossPointSet& pts, const std::vector<int64_t>& phi) {
  IwasawaElement out(ctx);
  std::vector<int64_t> c(ctx.degree(), 0);
  const ZmodRing& R = ctx.ring();
  for (const auto& P : pts.points) {
    if (P.class_index >= phi.size()) throw PreconditionError("theta_sum: class index outside phi");
    auto& slot = c[static_cast<std::size_t>(floor_mod(P.label, static_cast<int64_t>(ctx.degree())))];
    slot = R.add(slot, R.reduce(phi[P.class_index]));
  }
  return IwasawaElement(ctx, std::move(c));
}

/// Throws AssertionFailure unless omega_n^sign annihilates theta.
inline void check_annihilation(const IwasawaElement& theta, Sign sign) {
  const OmegaFamily fam = omega_family(theta.context());
  if (!(fam.element(fam.signed_omega(sign)) * theta).is_zero())
    throw AssertionFailure(std::string("theta is not annihilated by omega_n^") + to_string(sign) +
                           " (labelling or orientation error)");
}

inline SignedTheta signed_theta(const IwasawaElement& theta, Sign sign) {
  const OmegaFamily fam = omega_family(theta.context());
  const SignedQuotient q = signed_divide(theta, sign, fam);
  SignedTheta out{sign, q.value, q.ambiguity, q.exact_in_quotient, false};
  out.round_trip = fam.element(fam.tilde(opposite(sign))) * q.value == theta;
  if (!out.round_trip) throw AssertionFailure("signed_theta: round trip failed");
  return out;
}

inline SignedTheta signed_theta(const ThetaElement& theta) { return signed_theta(theta.value, theta.sign); }

inline FiniteLevelL finite_L(const IwasawaElement& theta) { return {theta * theta.involution()}; }

/// theta^sign iota(theta^sign), meaningful modulo omega_n^sign.
inline IwasawaElement signed_L_partial(const SignedTheta& s) { return s.value * s.value.involution(); }

// ---------------------------------------------------------------- functional equation

struct FunctionalEquation {
  bool found = false;
  int w = 1;
  int64_t k = 0;
  int agreeing_precision = 0;  // largest j with iota(theta) = w sigma^k theta mod p^j
};

/// Smallest j with some coefficient of v nonzero mod p^(j+1); N when v = 0.
inline int element_valuation(const IwasawaElement& v) {
  const LayerContext& ctx = v.context();
  int best = ctx.N();
  for (std::size_t i = 0; i < ctx.degree(); ++i) {
    int64_t x = v[i];
    if (x == 0) continue;
    int j = 0;
    while (x % ctx.p() == 0) {
      x /= ctx.p();
      ++j;
    }
    best = std::min(best, j);
  }
  return best;
}

/// Searches {+-1} x Z/p^n for iota(theta) = w sigma^k theta.
inline FunctionalEquation functional_equation_check(const IwasawaElement& theta) {
  const LayerContext& ctx = theta.context();
  const IwasawaElement target = theta.involution();
  FunctionalEquation best;
  best.agreeing_precision = -1;
  for (int w : {1, -1})
    for (int64_t k = 0; k < static_cast<int64_t>(ctx.degree()); ++k) {
      const IwasawaElement cand = w == 1 ? theta.shifted(k) : -theta.shifted(k);
      const int j = element_valuation(target - cand);
      if (j > best.agreeing_precision) {
        best.agreeing_precision = j;
        best.w = w;
        best.k = k;
      }
      if (j == ctx.N()) {
        best.found = true;
        return best;
      }
    }
  return best;
}

// ---------------------------------------------------------------- element identity

struct ElementIdentityReport {
  int64_t twist = 0;          // d = deg tilde^{-sign}; iota(tilde) = sigma^{-d} tilde
  bool twisted_identity = false;  // L = sigma^{-d} tilde^2 theta^s iota(theta^s)
  bool ideal_identity = false;    // (L) = (tilde^2 theta^s iota(theta^s))
  bool tilde_palindromic = false;
};

inline ElementIdentityReport element_identity(const IwasawaElement& theta, const SignedTheta& s) {
  const LayerContext& ctx = theta.context();
  const OmegaFamily fam = omega_family(ctx);
  const IntPoly& tp = fam.tilde(opposite(s.sign));
  ElementIdentityReport r;
  r.twist = static_cast<int64_t>(tp.coeffs().size()) - 1;
  const IwasawaElement tilde = fam.element(tp);
  r.tilde_palindromic = tilde.involution() == tilde.shifted(-r.twist);
  const IwasawaElement lhs = tilde * tilde * signed_L_partial(s);
  const IwasawaElement L = finite_L(theta).value;
  r.twisted_identity = lhs.shifted(-r.twist) == L;
  r.ideal_identity = principal_ideal(lhs) == principal_ideal(L);
  return r;
}

// ---------------------------------------------------------------- Mazur-Tate

inline bool mazur_tate_check(const FiniteLevelL& L, const ModulePresentation& S) {
  if (!(L.value.context() == S.context)) throw PreconditionError("mazur_tate_check: context mismatch");
  return fitting_ideal(S).contains(L.value);
}

struct SignedFittingChain {
  bool local_fitting = false;        // Fitt of the dual local quotient is (tilde^{-sign})
  bool local_presentation = false;   // the cyclic stand-in has the same Fitting ideal
  bool exact = false;                // A -> S -> S^sign -> 0 verified
  bool fitting_containments = false;  // Fitt(A) Fitt(S^sign) in Fitt(S), Fitt(S) in Fitt(S^sign)
  bool chain = false;                // tilde^2 Fitt(S^sign) in Fitt(S)
  bool signed_member = false;        // L^sign in Fitt(S^sign)
  bool L_member = false;             // L in Fitt(S)
  ModulePresentation selmer;         // the synthetic S
  std::string failure;

  bool holds() const { return local_fitting && local_presentation && exact && fitting_containments && chain && L_member; }
};

/// Synthetic version of the signed-to-full Selmer argument. The local term is
/// two copies of Lambda / (tilde^{-sign}), whose Fitting ideal is checked
/// against the dual of (tilde^+, tilde^-) Lambda / tilde^{-sign} Lambda. S is
/// glued from the local term and S^sign by identifying the first relation of
/// S^sign with the first local generator, so the sequence does not split.
inline SignedFittingChain signed_fitting_chain(const FiniteLevelL& L, const SignedTheta& s,
                                               const ModulePresentation& S_signed) {
  const LayerContext& ctx = S_signed.context;
  if (!(L.value.context() == ctx) || !(s.value.context() == ctx))
    throw PreconditionError("signed_fitting_chain: context mismatch");
  if (S_signed.relation_count() == 0) throw PreconditionError("signed_fitting_chain: S^sign needs a relation");
  const OmegaFamily fam = omega_family(ctx);
  const Sign other = opposite(s.sign);
  const IwasawaElement tilde = fam.element(fam.tilde(other));
  SignedFittingChain out;

  const auto dual = dual_fitting(signed_quotient_module(ctx, other));
  out.local_fitting = dual.ideal == principal_ideal(tilde);
  const auto local_one = ModulePresentation::from_integer_columns(ctx, 1, {{fam.tilde(other)}});
  out.local_presentation = fitting_ideal(local_one) == dual.ideal;
  const ModulePresentation A = direct_sum(local_one, local_one);

  const std::size_t b = S_signed.generators, g = 2 + b;
  std::vector<LambdaVector> cols;
  for (const auto& c : A.relations) {
    LambdaVector col(g, IwasawaElement(ctx));
    std::copy(c.begin(), c.end(), col.begin());
    cols.push_back(std::move(col));
  }
  for (std::size_t j = 0; j < S_signed.relation_count(); ++j) {
    LambdaVector col(g, IwasawaElement(ctx));
    std::copy(S_signed.relations[j].begin(), S_signed.relations[j].end(), col.begin() + 2);
    if (j == 0) col[0] = -IwasawaElement::one(ctx);
    cols.push_back(std::move(col));
  }
  out.selmer = ModulePresentation::from_columns(ctx, g, std::move(cols));

  ModuleMap f, proj;
  for (std::size_t i = 0; i < 2; ++i) {
    LambdaVector v(g, IwasawaElement(ctx));
    v[i] = IwasawaElement::one(ctx);
    f.images.push_back(std::move(v));
  }
  for (std::size_t i = 0; i < g; ++i) {
    LambdaVector v(b, IwasawaElement(ctx));
    if (i >= 2) v[i - 2] = IwasawaElement::one(ctx);
    proj.images.push_back(std::move(v));
  }
  const auto rep = analyze_exact_sequence(A, f, out.selmer, proj, S_signed);
  out.exact = rep.exact();
  if (!out.exact) {
    out.failure = rep.failure();
    return out;
  }
  out.fitting_containments = rep.holds();
  // Fitt(A) is contained in Fitt(image of A), so tilde^2 Fitt(S^sign) sits in Fitt(S)
  const IdealHandle tilde_sq = principal_ideal(tilde * tilde);
  out.chain = rep.fitt_image->contains(fitting_ideal(A)) && fitting_ideal(A) == tilde_sq &&
              rep.fitt_middle->contains(tilde_sq * *rep.fitt_quotient);
  out.signed_member = rep.fitt_quotient->contains(signed_L_partial(s));
  out.L_member = mazur_tate_check(L, out.selmer);
  if (!out.holds()) out.failure = "signed Fitting chain does not reach L";
  return out;
}

// ---------------------------------------------------------------- weak vanishing

struct WeakVanishingReport {
  std::optional<int> order;  // largest r' with L in (X)^r'; empty when L = 0
  int rank = 0;
  bool consistent = false;   // r' >= rank
  std::string summary;
};

inline WeakVanishingReport weak_vanishing_report(const FiniteLevelL& L, int rank) {
  const LayerContext& ctx = L.value.context();
  WeakVanishingReport r;
  r.rank = rank;
  if (L.value.is_zero()) {
    r.consistent = true;
    r.summary = "L vanishes identically; rank input " + std::to_string(rank);
    return r;
  }
  auto in_power = [&](int k) { return augmentation_ideal_power(ctx, 0, k).contains(L.value); };
  // (X)^k is decreasing in k; bracket then bisect
  int lo = 0, hi = 1;
  while (in_power(hi)) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (in_power(mid) ? lo : hi) = mid;
  }
  r.order = lo;
  r.consistent = lo >= rank;
  r.summary = "L lies in I^" + std::to_string(lo) + ", rank input " + std::to_string(rank) +
              (r.consistent ? " (consistent)" : " (inconsistent)");
  return r;
}

// ---------------------------------------------------------------- instances

struct InstanceSearchBounds {
  int64_t p_min = 5;
  int64_t p_max = 50;
  int64_t D_max = 100;
};

/// Splits the conductor into inert and split parts for K; empty when a prime
/// of N ramifies or the factorization fails the admissibility check.
inline std::optional<ThetaInstance> instance_for(const EllipticCurve& E, int64_t conductor, int64_t D_K, int64_t p) {
  if (conductor % p == 0 || !E.good_reduction(p)) return std::nullopt;
  int64_t Nm = 1, Np = 1;
  for (auto [ell, e] : factorize(conductor)) {
    const int k = kronecker(-D_K, ell);
    if (k == -1 && e == 1)
      Nm *= ell;
    else if (k == 1)
      Np *= ipow(ell, e);
    else
      return std::nullopt;
  }
  if (!check_admissibility(D_K, p, Nm, Np).ok()) return std::nullopt;
  return ThetaInstance{E, conductor, D_K, p, Nm, Np};
}

/// Smallest (p, D_K) in lexicographic order with a_p = 0, p >= 5 and an
/// admissible splitting of the conductor. `accept` can veto a candidate.
inline ThetaInstance find_instance(const EllipticCurve& E, int64_t conductor, const InstanceSearchBounds& bounds = {},
                                   const std::function<bool(const ThetaInstance&)>& accept = {}) {
  for (int64_t p = std::max<int64_t>(bounds.p_min, 5); p <= bounds.p_max; ++p) {
    if (!is_prime(p) || conductor % p == 0 || !E.good_reduction(p)) continue;
    if (count_points_aq(E, p) != 0) continue;
    for (int64_t D = 5; D <= bounds.D_max; ++D) {
      if (!is_fundamental_discriminant(-D)) continue;
      auto inst = instance_for(E, conductor, D, p);
      if (inst && (!accept || accept(*inst))) return *inst;
    }
  }
  throw ValidationError("find_instance: no admissible instance within the bounds");
}

// ---------------------------------------------------------------- pipeline

/// Brandt data, eigenvector and Gross points for one instance. Gross points
/// are cached per layer, eigenvectors per precision.
class ThetaPipeline {
 public:
  explicit ThetaPipeline(ThetaInstance inst, std::size_t hecke_count = 3, std::size_t max_classes = 2000)
      : inst_(validated(std::move(inst))),
        setup_(gross_setup(make_field_context(inst_.D_K, inst_.p, inst_.Nminus, inst_.Nplus))) {
    classes_ = std::make_unique<IdealClassSet>(ideal_classes(setup_.algebra, setup_.order, max_classes));
    std::vector<int64_t> primes;
    for (int64_t q = 2; primes.size() < hecke_count; ++q)
      if (is_prime(q) && inst_.conductor % q != 0 && q != inst_.p) primes.push_back(q);
    for (auto q : primes) hecke_.push_back(brandt_matrix(*classes_, q));
    aq_ = aq_table(inst_.curve, primes);
  }

  const ThetaInstance& instance() const { return inst_; }
  const GrossSetup& setup() const { return setup_; }
  const IdealClassSet& classes() const { return *classes_; }
  const std::vector<BrandtOperator>& hecke() const { return hecke_; }
  const std::map<int64_t, int64_t>& aq() const { return aq_; }

  const EigenvectorPhi& phi(int N) {
    auto it = phi_.find(N);
    if (it == phi_.end()) it = phi_.emplace(N, eigenvector_phi(hecke_, aq_, inst_.p, N)).first;
    return it->second;
  }

  /// Gross points of conductor p^(n+1), labelled in Z/p^n.
  const GrossPointSet& points(int n) {
    auto it = points_.find(n);
    if (it == points_.end()) it = points_.emplace(n, gross_points(setup_, *classes_, n + 1)).first;
    return it->second;
  }

  ThetaElement theta(int n, int N) {
    if (n < 0) throw ValidationError("theta: n must be non-negative");
    const LayerContext ctx(inst_.p, n, N);
    ThetaElement out;
    out.value = theta_sum(ctx, points(n), phi(N).values);
    out.curve = inst_.curve.label;
    out.D_K = inst_.D_K;
    out.p = inst_.p;
    out.n = n;
    out.N = N;
    out.sign = parity_sign(n);
    check_annihilation(out.value, out.sign);
    out.annihilation_checked = true;
    return out;
  }

 private:
  static ThetaInstance validated(ThetaInstance inst) {
    if (inst.Nminus * inst.Nplus != inst.conductor)
      throw ValidationError("theta: N^+ N^- must equal the conductor of the curve");
    return inst;
  }

  ThetaInstance inst_;
  GrossSetup setup_;
  std::unique_ptr<IdealClassSet> classes_;
  std::vector<BrandtOperator> hecke_;
  std::map<int64_t, int64_t> aq_;
  std::map<int, EigenvectorPhi> phi_;
  std::map<int, GrossPointSet> points_;
};

/// Largest N with p^N <= 2^62.
inline int max_precision(int64_t p) {
  int N = 0;
  __int128 v = 1;
  while (v * p <= (static_cast<__int128>(1) << 62)) {
    v *= p;
    ++N;
  }
  return N;
}

struct ThetaComputation {
  ThetaElement theta;
  SignedTheta signed_part;
  int certificate_precision = 0;  // precision at which the signed division succeeded
};

/// Runs f(N), f(N + 1), ... until it returns without PrecisionExhausted or
/// p^N would exceed 2^62. Returns the result and the precision used.
template <class F>
auto escalate_precision(int64_t p, int N, F&& f) -> std::pair<decltype(f(N)), int> {
  const int cap = max_precision(p);
  for (int prec = N; prec <= cap; ++prec) {
    try {
      return {f(prec), prec};
    } catch (const PrecisionExhausted&) {
    }
  }
  throw PrecisionExhausted("precision limit p^" + std::to_string(cap) + " reached");
}

/// theta and its signed part, starting at N and raising the precision while
/// the signed division is inconclusive.
inline ThetaComputation compute_theta(ThetaPipeline& pipe, int n, int N = kDefaultPrecision) {
  auto [res, prec] = escalate_precision(pipe.instance().p, N, [&](int prec) {
    ThetaElement th = pipe.theta(n, prec);
    SignedTheta s = signed_theta(th);
    return ThetaComputation{std::move(th), std::move(s), prec};
  });
  res.certificate_precision = prec;
  return res;
}

struct LayerCompatibility {
  bool holds = false;
  int agreeing_precision = 0;  // largest j with the projection = -theta_{n-2}^sign mod p^j
};

/// Compares theta_n^sign projected to layer n-2 with -theta_{n-2}^sign in
/// Lambda_{n-2} / omega_{n-2}^sign.
inline LayerCompatibility layer_compatibility(const SignedTheta& upper, const SignedTheta& lower, int min_precision) {
  const LayerContext& lc = lower.value.context();
  if (upper.sign != lower.sign || upper.value.context().n() != lc.n() + 2 || upper.value.context().N() != lc.N())
    throw PreconditionError("layer_compatibility: need signed thetas of equal sign at layers n and n-2");
  const OmegaFamily fam = omega_family(lc);
  const IwasawaElement omega = fam.element(fam.signed_omega(lower.sign));
  const IwasawaElement diff = upper.value.project(lc.n()) + lower.value;
  LayerCompatibility r;
  for (int j = lc.N(); j >= 0; --j)
    if (IdealHandle::from_generators(lc, {omega, IwasawaElement::constant(lc, ipow(lc.p(), j))}).contains(diff)) {
      r.agreeing_precision = j;
      break;
    }
  r.holds = r.agreeing_precision >= min_precision;
  return r;
}

}  // namespace anticyc
