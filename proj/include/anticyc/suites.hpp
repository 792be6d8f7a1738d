#pragma once

// Verification suites shared by the command-line tool and the acceptance
// runner. Each suite returns named checks; randomness is seeded so reruns are
// identical.

#include "anticyc/brandt.hpp"
#include "anticyc/elliptic.hpp"
#include "anticyc/fitting.hpp"
#include "anticyc/ideal.hpp"
#include "anticyc/iwasawa.hpp"
#include "anticyc/theta.hpp"

#include <chrono>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace anticyc {

struct Check {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  std::vector<Check> checks;
  double seconds = 0;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.ok) return false;
    return !checks.empty();
  }
  std::size_t failures() const {
    std::size_t k = 0;
    for (const auto& c : checks) k += c.ok ? 0 : 1;
    return k;
  }
  void add(std::string check, bool ok, std::string detail = {}) {
    checks.push_back({std::move(check), ok, std::move(detail)});
  }
};

namespace detail {

class SuiteTimer {
 public:
  explicit SuiteTimer(SuiteResult& r) : r_(r), t0_(std::chrono::steady_clock::now()) {}
  ~SuiteTimer() { r_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  SuiteResult& r_;
  std::chrono::steady_clock::time_point t0_;
};

inline std::string ctx_name(const LayerContext& ctx) {
  return "p=" + std::to_string(ctx.p()) + " n=" + std::to_string(ctx.n()) + " N=" + std::to_string(ctx.N());
}

inline IwasawaElement random_element(const LayerContext& ctx, std::mt19937_64& rng) {
  std::uniform_int_distribution<int64_t> d(0, ctx.ring().modulus() - 1);
  std::vector<int64_t> c(ctx.degree());
  for (auto& x : c) x = d(rng);
  return {ctx, c};
}

// Multiples of X plus multiples of p, so random modules are rarely zero.
inline IwasawaElement random_nonunit(const LayerContext& ctx, std::mt19937_64& rng) {
  return random_element(ctx, rng) * IwasawaElement::x(ctx) + random_element(ctx, rng).scaled(ctx.p());
}

inline ModulePresentation random_presentation(const LayerContext& ctx, std::size_t b, std::size_t a,
                                              std::mt19937_64& rng) {
  std::vector<LambdaVector> cols;
  for (std::size_t j = 0; j < a; ++j) {
    LambdaVector col;
    for (std::size_t i = 0; i < b; ++i) col.push_back(random_nonunit(ctx, rng));
    cols.push_back(std::move(col));
  }
  return ModulePresentation::from_columns(ctx, b, std::move(cols));
}

}  // namespace detail

// ---------------------------------------------------------------- omega

inline SuiteResult omega_suite(const std::vector<int64_t>& primes = {3, 5, 7}, int max_n = 4, int N = 8) {
  SuiteResult r{"omega", {}, 0};
  detail::SuiteTimer timer(r);
  for (int64_t p : primes)
    for (int n = 0; n <= max_n; ++n) {
      const LayerContext ctx(p, n, N);
      const OmegaFamily fam = omega_family(ctx);
      const std::string where = detail::ctx_name(ctx);
      r.add("factorization " + where, fam.factorization_holds());
      for (int m = 1; m <= n; ++m) {
        BigInt at_one = 0;
        for (const auto& c : fam.cyclotomic[m - 1].coeffs()) at_one += c;
        r.add("Phi_{p^" + std::to_string(m) + "} at X=0 " + where, at_one == p);
      }
      if (n >= 1) {
        const IwasawaElement phi = fam.element(fam.cyclotomic.back());
        r.add("projection of Phi_{p^n} " + where, phi.project(n - 1) == IwasawaElement::constant(LayerContext(p, n - 1, N), p));
      }
    }
  return r;
}

// ---------------------------------------------------------------- involution and ideals

inline SuiteResult ideal_suite(int triples = 200, uint64_t seed = 20240601) {
  SuiteResult r{"ideal", {}, 0};
  detail::SuiteTimer timer(r);
  std::mt19937_64 rng(seed);
  for (int64_t p : {3, 5})
    for (int n = 0; n <= 3; ++n) {
      const LayerContext ctx(p, n, 8);
      const std::string where = detail::ctx_name(ctx);
      bool hom = true;
      for (int t = 0; t < triples && hom; ++t) {
        const auto a = detail::random_element(ctx, rng), b = detail::random_element(ctx, rng),
                   c = detail::random_element(ctx, rng);
        hom = (a * (b + c)).involution() == a.involution() * (b.involution() + c.involution()) &&
              (a * b * c).involution() == a.involution() * b.involution() * c.involution() &&
              a.involution().involution() == a;
      }
      r.add("involution is a ring automorphism " + where, hom && IwasawaElement::one(ctx).involution() == IwasawaElement::one(ctx));
      const OmegaFamily fam = omega_family(ctx);
      for (Sign s : {Sign::Plus, Sign::Minus}) {
        const auto t = fam.element(fam.tilde(s));
        r.add(std::string("(iota(tilde^") + to_string(s) + ")) = (tilde^" + to_string(s) + ") " + where,
              principal_ideal(t.involution()) == principal_ideal(t));
      }
    }
  return r;
}

// ---------------------------------------------------------------- Fitting ideals

inline SuiteResult fitting_suite(uint64_t seed = 20240602) {
  SuiteResult r{"fitting", {}, 0};
  detail::SuiteTimer timer(r);
  std::mt19937_64 rng(seed);

  int invariant = 0;
  for (int t = 0; t < 100; ++t) {
    const LayerContext ctx(3, 1 + t % 2, 3);
    const auto m = detail::random_presentation(ctx, 2, 3, rng);
    auto cols = m.relations;
    switch (t % 4) {
      case 0: {  // column operation
        const auto lambda = detail::random_element(ctx, rng);
        for (std::size_t i = 0; i < 2; ++i) cols[0][i] = cols[0][i] + lambda * cols[2][i];
        break;
      }
      case 1:  // unit column scaling
        for (std::size_t i = 0; i < 2; ++i) cols[1][i] = cols[1][i].shifted(t);
        break;
      case 2: {  // change of generators
        const auto mu = detail::random_element(ctx, rng);
        for (auto& c : cols) c[1] = c[1] + mu * c[0];
        break;
      }
      default:  // redundant relation
        cols.push_back({cols[0][0] + cols[2][0], cols[0][1] + cols[2][1]});
    }
    const auto m2 = ModulePresentation::from_columns(ctx, 2, cols);
    invariant += fitting_ideal(m2) == fitting_ideal(m) ? 1 : 0;
  }
  r.add("presentation invariance (100 elementary operations)", invariant == 100, std::to_string(invariant) + "/100");

  int base = 0, base_cases = 0;
  for (int n = 1; n <= 2; ++n) {
    const LayerContext ctx(3, n, 3);
    const OmegaFamily fam = omega_family(ctx);
    const std::vector<IwasawaElement> fs{IwasawaElement::x(ctx), IwasawaElement::constant(ctx, 3),
                                         fam.element(fam.omega_plus), fam.element(fam.omega_minus)};
    for (int t = 0; t < 25; ++t) {
      const auto& f = fs[static_cast<std::size_t>(t) % fs.size()];
      const auto m = detail::random_presentation(ctx, 1 + t % 2, 1 + t % 3, rng);
      ++base_cases;
      base += fitting_ideal(base_change_mod(m, f)) + principal_ideal(f) == fitting_ideal(m) + principal_ideal(f) ? 1 : 0;
    }
  }
  r.add("base change Fitt(M/fM) + (f) = Fitt(M) + (f)", base == base_cases,
        std::to_string(base) + "/" + std::to_string(base_cases));

  int exact = 0;
  for (int t = 0; t < 50; ++t) {
    const LayerContext ctx(3, 1 + t % 2, 3);
    const IwasawaElement z(ctx), one = IwasawaElement::one(ctx);
    bool ok = false;
    if (t % 2 == 0) {  // extension of cyclic modules
      const auto alpha = detail::random_nonunit(ctx, rng), gamma = detail::random_nonunit(ctx, rng),
                 u = detail::random_element(ctx, rng);
      const auto a = ModulePresentation::from_columns(ctx, 1, {{alpha}});
      const auto c = ModulePresentation::from_columns(ctx, 1, {{gamma}});
      const auto b = ModulePresentation::from_columns(ctx, 2, {{alpha, z}, {u, gamma}});
      ok = exact_sequence_fitting_check(a, ModuleMap{{{one, z}}}, b, ModuleMap{{{z}, {one}}}, c);
    } else {  // split sequence with a two-generator quotient
      const auto a = detail::random_presentation(ctx, 1, 1, rng);
      const auto c = detail::random_presentation(ctx, 2, 2, rng);
      const auto b = direct_sum(a, c);
      ok = exact_sequence_fitting_check(a, ModuleMap{{{one, z, z}}}, b, ModuleMap{{{z, z}, {one, z}, {z, one}}}, c);
    }
    exact += ok ? 1 : 0;
  }
  r.add("exact-sequence containments (50 sequences)", exact == 50, std::to_string(exact) + "/50");
  return r;
}

// ---------------------------------------------------------------- Iovita-Pollack and the local quotient

inline SuiteResult structural_suite(int N = 4) {
  SuiteResult r{"iovita-pollack", {}, 0};
  detail::SuiteTimer timer(r);
  for (int64_t p : {3, 5})
    for (int n : {1, 2}) {
      const LayerContext ctx(p, n, N);
      const std::string where = detail::ctx_name(ctx);
      const auto ip = iovita_pollack_sequence(ctx);
      r.add("Iovita-Pollack sequence exact " + where,
            ip.f_injective && ip.kernel_equals_image && ip.g_surjective && ip.exact_mod_pN && ip.cardinality);
      const OmegaFamily fam = omega_family(ctx);
      for (Sign s : {Sign::Plus, Sign::Minus}) {
        const auto dual = dual_fitting(signed_quotient_module(ctx, s));
        r.add(std::string("dual Fitting ideal of the quotient by tilde^") + to_string(s) + " " + where,
              dual.ideal == principal_ideal(fam.element(fam.tilde(s))));
      }
    }
  return r;
}

// ---------------------------------------------------------------- Brandt matrices

namespace detail {

inline bool spectrum_is(const IntegerMatrix& m, std::vector<int64_t> eigen) {
  // compares characteristic polynomials for h <= 2
  if (m.size() != eigen.size()) return false;
  if (m.size() == 1) return m[0][0] == eigen[0];
  if (m.size() != 2) throw PreconditionError("spectrum_is: only h <= 2 is supported");
  const int64_t tr = m[0][0] + m[1][1], det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  return tr == eigen[0] + eigen[1] && det == eigen[0] * eigen[1];
}

}  // namespace detail

inline SuiteResult brandt_oracle_suite() {
  SuiteResult r{"brandt-oracle", {}, 0};
  detail::SuiteTimer timer(r);
  const auto E = curve_11a1();
  {
    const auto B = build_algebra(11);
    const auto cs = ideal_classes(B, maximal_order(B));
    r.add("N^-=11: h = 2", cs.size() == 2, std::to_string(cs.size()));
    r.add("N^-=11: mass = 5/12", cs.mass == Rational(5, 12));
    Rational sum = 0;
    for (const auto& I : cs.ideals) sum += Rational(1, static_cast<int64_t>(I.unit_count));
    r.add("N^-=11: sum of 1/|O_i^x| equals the mass", sum == cs.mass);
    for (int64_t q : {2, 3, 5, 7, 13}) {
      const auto op = brandt_matrix(cs, q);
      bool rows = true;
      for (const auto& row : op.matrix) {
        int64_t s = 0;
        for (auto v : row) s += v;
        rows = rows && s == q + 1;
      }
      r.add("N^-=11: row sums of B(" + std::to_string(q) + ")", rows);
      const int64_t aq = count_points_aq(E, q);
      r.add("N^-=11: spectrum of B(" + std::to_string(q) + ") = {q+1, a_q}", detail::spectrum_is(op.matrix, {q + 1, aq}),
            "a_q=" + std::to_string(aq));
    }
  }
  for (int64_t Nm : {2, 3}) {
    const auto B = build_algebra(Nm);
    const auto cs = ideal_classes(B, maximal_order(B));
    const std::string where = "N^-=" + std::to_string(Nm);
    r.add(where + ": h = 1 from the mass formula", cs.size() == 1 && cs.mass == eichler_mass(Nm, 1));
    for (int64_t q : {5, 7, 11}) {
      const auto op = brandt_matrix(cs, q);
      r.add(where + ": B(" + std::to_string(q) + ") is Eisenstein only", detail::spectrum_is(op.matrix, {q + 1}));
    }
  }
  return r;
}

// ---------------------------------------------------------------- theta

using ThetaTower = std::map<int, ThetaComputation>;

/// theta_n and its signed part for n = 0..max_n.
inline ThetaTower compute_tower(ThetaPipeline& pipe, int max_n, int N) {
  ThetaTower out;
  for (int n = 0; n <= max_n; ++n) out.emplace(n, compute_theta(pipe, n, N));
  return out;
}

inline SuiteResult theta_suite(const ThetaTower& tower) {
  SuiteResult r{"theta-props", {}, 0};
  detail::SuiteTimer timer(r);
  for (const auto& [n, C] : tower) {
    const std::string where = "n=" + std::to_string(n) + " N=" + std::to_string(C.theta.N);
    bool annihilated = true;
    try {
      check_annihilation(C.theta.value, C.theta.sign);
    } catch (const AssertionFailure&) {
      annihilated = false;
    }
    r.add(std::string("omega^") + to_string(C.theta.sign) + " theta = 0 " + where, annihilated && C.theta.annihilation_checked);
    const OmegaFamily fam = omega_family(C.theta.value.context());
    r.add("signed round trip " + where,
          fam.element(fam.tilde(opposite(C.signed_part.sign))) * C.signed_part.value == C.theta.value);
    const auto fe = functional_equation_check(C.theta.value);
    r.add("functional equation witness " + where, fe.found,
          "w=" + std::to_string(fe.w) + " k=" + std::to_string(fe.k));
    const auto ei = element_identity(C.theta.value, C.signed_part);
    r.add("signed identity (twisted element form) " + where, ei.twisted_identity, "twist=" + std::to_string(ei.twist));
    r.add("signed identity (ideals) " + where, ei.ideal_identity);
    if (n >= 2 && tower.count(n - 2)) {
      const int N = C.theta.N;
      const auto lc = layer_compatibility(C.signed_part, tower.at(n - 2).signed_part, N - 1);
      r.add("layer compatibility with sign -1, n=" + std::to_string(n) + " to n=" + std::to_string(n - 2), lc.holds,
            "agrees mod p^" + std::to_string(lc.agreeing_precision));
    }
  }
  return r;
}

inline SuiteResult mazur_tate_suite(const ThetaTower& tower, int max_chain_n = 1) {
  SuiteResult r{"mazur-tate", {}, 0};
  detail::SuiteTimer timer(r);
  for (const auto& [n, C] : tower) {
    const auto L = finite_L(C.theta.value);
    const LayerContext& ctx = L.value.context();
    const std::string where = "n=" + std::to_string(n);
    r.add("L in Fitt(Lambda/(L)) " + where, mazur_tate_check(L, ModulePresentation::from_columns(ctx, 1, {{L.value}})));
    r.add("L not in Fitt(Lambda/(pL)) " + where,
          !mazur_tate_check(L, ModulePresentation::from_columns(ctx, 1, {{L.value.scaled(ctx.p())}})));
    if (n <= max_chain_n) {
      const auto ch = signed_fitting_chain(
          L, C.signed_part, ModulePresentation::from_columns(ctx, 1, {{signed_L_partial(C.signed_part)}}));
      r.add("signed Fitting chain " + where, ch.holds(), ch.failure);
    }
  }
  // the same chain on synthetic elements at a layer with both signs nontrivial
  const LayerContext ctx(3, 2, 5);
  const OmegaFamily fam = omega_family(ctx);
  const IwasawaElement g(ctx, {1, 2, 0, 0, 4, 1, 0, 3, 0});
  for (Sign s : {Sign::Plus, Sign::Minus}) {
    const auto theta = fam.element(fam.tilde(opposite(s))) * g;
    const auto st = signed_theta(theta, s);
    const auto ch = signed_fitting_chain(finite_L(theta), st,
                                         ModulePresentation::from_columns(ctx, 1, {{signed_L_partial(st)}}));
    r.add(std::string("synthetic signed Fitting chain, sign ") + to_string(s), ch.holds(), ch.failure);
  }
  return r;
}

}  // namespace anticyc
