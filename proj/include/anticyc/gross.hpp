#pragma once

// Gross points of p-power conductor on a definite quaternion algebra: the
// embedding of K, ideals whose left orders contain Z + cO_K optimally, the
// Pic(O_c)-orbit on the class set, and a direct enumeration of oriented
// optimal embeddings used as a cross-check.

#include "anticyc/brandt.hpp"
#include "anticyc/common.hpp"
#include "anticyc/qforms.hpp"
#include "anticyc/quaternion.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace anticyc {

// ---------------------------------------------------------------- field context

struct FieldContext {
  int64_t D_K = 0;
  int64_t p = 0;
  int64_t Nminus = 1;
  int64_t Nplus = 1;
  int64_t h_K = 0;

  QuadraticField field() const { return QuadraticField(D_K); }
};

struct Admissibility {
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

inline Admissibility check_admissibility(int64_t D_K, int64_t p, int64_t Nminus, int64_t Nplus) {
  Admissibility out;
  auto fail = [&](const std::string& s) { out.failures.push_back(s); };
  if (D_K <= 0 || !is_fundamental_discriminant(-D_K)) {
    fail("-D_K is not a fundamental discriminant");
    return out;
  }
  if (D_K <= 4) fail("D_K must exceed 4 (O_K has extra units)");
  if (p < 3 || !is_prime(p)) {
    fail("p must be an odd prime");
  } else {
    if (kronecker(-D_K, p) != 1) fail("p does not split in K");
    if (QuadraticField(D_K).class_number() % p == 0) fail("p divides the class number of K");
  }
  if (Nminus < 2 || !is_squarefree(Nminus)) {
    fail("N^- must be squarefree and greater than 1");
  } else {
    const auto f = factorize(Nminus);
    if (f.size() % 2 == 0) fail("N^- must have an odd number of prime factors");
    for (auto [ell, e] : f)
      if (kronecker(-D_K, ell) != -1) fail("prime " + std::to_string(ell) + " of N^- is not inert in K");
  }
  if (Nplus < 1) {
    fail("N^+ must be positive");
  } else {
    for (auto [ell, e] : factorize(Nplus))
      if (kronecker(-D_K, ell) != 1) fail("prime " + std::to_string(ell) + " of N^+ does not split in K");
  }
  if (Nminus >= 1 && Nplus >= 1 && p >= 2) {
    if (std::gcd(D_K, Nminus * Nplus * p) != 1) fail("D_K is not prime to Np");
    if (std::gcd(Nminus, Nplus) != 1) fail("N^+ and N^- are not coprime");
    if ((Nminus * Nplus) % p == 0) fail("p divides N");
  }
  return out;
}

inline FieldContext make_field_context(int64_t D_K, int64_t p, int64_t Nminus, int64_t Nplus) {
  const Admissibility adm = check_admissibility(D_K, p, Nminus, Nplus);
  if (!adm.ok()) {
    std::string msg = "inadmissible instance:";
    for (const auto& f : adm.failures) msg += " " + f + ";";
    throw ValidationError(msg);
  }
  return {D_K, p, Nminus, Nplus, QuadraticField(D_K).class_number()};
}

// ---------------------------------------------------------------- embedding of K

/// psi: K -> B with psi(sqrt(-D_K)) = sqrt_d, and J with J psi(t) = psi(tbar) J, J^2 = beta.
struct KEmbedding {
  Quaternion sqrt_d;
  Quaternion theta;
  Quaternion J;
  BigInt beta;

  Quaternion operator()(const QuadNumber& z) const { return Quaternion(z.x) + sqrt_d * z.y; }
};

namespace detail {

inline bool is_local_unit_square(const BigInt& b, int64_t q) {
  if (detail::residue(b, q) == 0) return false;
  if (q == 2) return detail::residue(b, 8) == 1;
  return jacobi(detail::residue(b, q), q) == 1;
}

// Squarefree m and f > 0 with v = m f^2.
inline std::pair<int64_t, int64_t> squarefree_decomposition(int64_t v) {
  int64_t m = v < 0 ? -1 : 1, f = 1;
  for (auto [ell, e] : factorize(v < 0 ? -v : v)) {
    f *= ipow(ell, e / 2);
    if (e % 2) m *= ell;
  }
  return {m, f};
}

}  // namespace detail

/// Fixes J and beta for a given image of theta: beta squarefree, a unit at
/// q | D_K and a local unit square at q | pN^+.
inline void choose_J(const QuaternionAlgebra& B, const FieldContext& F, KEmbedding& emb) {
  const QuadraticField K = F.field();
  const Quaternion w = emb.sqrt_d;
  Quaternion J0;
  for (const Quaternion& u : {Quaternion(0, 1), Quaternion(0, 0, 1), Quaternion(0, 0, 0, 1)}) {
    J0 = B.mul(w, u) - B.mul(u, w);
    if (!J0.is_zero()) break;
  }
  const Rational beta0 = -B.nrd(J0);
  const auto conditions = [&](int64_t m) {
    if (std::gcd(m < 0 ? -m : m, F.D_K) != 1) return false;
    std::vector<int64_t> qs{F.p};
    for (auto [q, e] : factorize(F.Nplus)) qs.push_back(q);
    for (auto q : qs)
      if (!detail::is_local_unit_square(BigInt(m), q)) return false;
    return true;
  };
  const QuadNumber th = K.theta();
  for (int64_t radius = 0; radius <= 40; ++radius)
    for (int64_t x = -radius; x <= radius; ++x)
      for (int64_t y = 0; y <= radius; ++y) {
        if (std::max(std::abs(x), y) != radius) continue;
        const QuadNumber kappa{Rational(x) + th.x * y, th.y * y};
        const Rational nk = K.norm(kappa);
        if (nk == 0) continue;
        const Rational b = beta0 * nk;
        const BigInt num = numerator(b), den = denominator(b);
        const BigInt prod = num * den;
        if (big_abs(prod) > BigInt(1) << 60) continue;
        const auto [m, f] = detail::squarefree_decomposition(static_cast<int64_t>(prod));
        if (!conditions(m)) continue;
        emb.J = B.mul(emb(kappa), J0) * (Rational(den) / Rational(f));
        emb.beta = m;
        return;
      }
  throw AssertionFailure("choose_J: no admissible beta found");
}

/// An optimal embedding of O_K into the order O, if any (pure part found by
/// ternary lattice enumeration).
inline std::optional<Quaternion> embed_O_K(const QuaternionAlgebra& B, const QuaternionLattice& O,
                                           const FieldContext& F, int64_t conductor = 1);

// ---------------------------------------------------------------- setup

struct GrossSetup {
  FieldContext context;
  QuaternionAlgebra algebra;
  KEmbedding embedding;
  QuaternionOrder order;  // Eichler order of level N^+ containing psi(O_K)
};

namespace detail {

// Root of x^2 - T x + N modulo ell^k, the two roots being distinct mod ell.
inline std::pair<int64_t, int64_t> split_roots(int64_t T, int64_t N, int64_t ell, int k) {
  const int64_t lk = ipow(ell, k);
  for (int64_t r = 0; r < ell; ++r) {
    if (floor_mod(r * r - T * r + N, ell) != 0) continue;
    int64_t x = r;
    for (int j = 1; j < k; ++j) {
      const int64_t m = ipow(ell, j + 1);
      const int64_t fx = floor_mod(mulmod(x, x, m) - mulmod(T % m, x, m) + N, m);
      const int64_t df = floor_mod(2 * x - T, ell);
      const int64_t inv = powmod(df, ell - 2, ell);  // ell prime, df a unit
      const int64_t t = floor_mod(-(fx / ipow(ell, j)) * inv, ell);
      x = floor_mod(x + t * ipow(ell, j), m);
    }
    return {x, floor_mod(T - x, lk)};
  }
  throw AssertionFailure("split_roots: polynomial has no root mod ell");
}

inline int64_t inverse_mod(int64_t a, int64_t m) {
  auto [g, s, t] = detail::ext_gcd(floor_mod(a, m), m);
  if (g != 1) throw AssertionFailure("inverse_mod: not invertible");
  return floor_mod(s, m);
}

}  // namespace detail

inline GrossSetup gross_setup(const FieldContext& F) {
  QuaternionAlgebra B = build_algebra(F.Nminus);
  const QuadraticField K = F.field();
  const QuaternionOrder O = maximal_order(B);
  // O_K embeds into the left order of some class of O.
  const IdealClassSet maximal_classes = ideal_classes(B, O);
  std::optional<Quaternion> theta;
  QuaternionLattice Omax;
  for (const auto& I : maximal_classes.ideals) {
    theta = embed_O_K(B, I.left, F);
    if (theta) {
      Omax = I.left;
      break;
    }
  }
  if (!theta) throw AssertionFailure("gross_setup: O_K embeds in no maximal order");
  KEmbedding emb;
  emb.theta = *theta;
  // theta = t0 - sqrt(d)/2, so psi(sqrt d) = 2 t0 - 2 psi(theta)
  emb.sqrt_d = Quaternion(2 * K.theta().x) - *theta * Rational(2);
  choose_J(B, F, emb);
  const QuaternionOrder Omaximal{Omax, 1, Omax, {}};
  std::vector<LevelStructure> local;
  const int64_t T = static_cast<int64_t>(numerator(K.trace(K.theta())));
  const int64_t N = static_cast<int64_t>(numerator(K.norm(K.theta())));
  for (auto [ell, k] : factorize(F.Nplus)) {
    const int64_t lk = ipow(ell, k);
    // epsilon = (theta - s') / (s - s') is 1 at one prime above ell and 0 at the other
    const auto [s, s2] = detail::split_roots(T, N, ell, k);
    const int64_t u = detail::inverse_mod(s - s2, lk);
    const Quaternion e = emb.theta * Rational(u) - Quaternion(Rational(mulmod(u, s2, lk)));
    local.push_back({ell, k, e});
  }
  QuaternionOrder R = eichler_order_from_idempotents(B, Omaximal, local);
  if (!R.contains(emb.theta)) throw AssertionFailure("gross_setup: Eichler order does not contain psi(O_K)");
  return {F, std::move(B), std::move(emb), std::move(R)};
}

// ---------------------------------------------------------------- conductor

/// Smallest j <= max_exponent with psi(p^j theta) in O, or -1.
inline int conductor_exponent(const GrossSetup& S, const QuaternionLattice& O, int max_exponent) {
  Quaternion x = S.embedding.theta;
  for (int j = 0; j <= max_exponent; ++j) {
    if (O.contains(x)) return j;
    x = x * Rational(S.context.p);
  }
  return -1;
}

/// Right ideal of the setup order whose left order meets psi(K) in
/// psi(Z + p^exponent O_K), by a walk through p-neighbours.
inline RightIdeal ideal_of_conductor(const GrossSetup& S, int exponent) {
  RightIdeal I = make_right_ideal(S.algebra, S.order.lattice, S.order);
  for (int j = 0; j < exponent; ++j) {
    bool stepped = false;
    for (const auto& L : neighbours(S.algebra, S.order, I, S.context.p)) {
      RightIdeal J = make_right_ideal(S.algebra, L, S.order);
      if (conductor_exponent(S, J.left, j + 1) == j + 1) {
        I = std::move(J);
        stepped = true;
        break;
      }
    }
    if (!stepped) throw AssertionFailure("ideal_of_conductor: no neighbour raises the conductor");
  }
  return I;
}

// ---------------------------------------------------------------- orientations

struct GrossPoint {
  std::size_t class_index = 0;
  Quaternion x;                      // image of theta_c in the left order of I_i
  BinaryForm form{};                 // class in Pic(O_c) (orbit method only)
  int64_t label = 0;
  std::vector<int64_t> orientation;  // +-1 at each ell | N^-, then a root mod ell^k at each ell^k || N^+
};

namespace detail {

inline int64_t reduce_rational(const Rational& r, int64_t m) {
  const int64_t den = residue(denominator(r), m);
  return mulmod(residue(numerator(r), m), inverse_mod(den, m), m);
}

// An element a of I with nrd(a)/nrd(I) prime to ell.
inline Quaternion local_generator(const QuaternionAlgebra& B, const RightIdeal& I, int64_t ell) {
  std::optional<Quaternion> found;
  const RationalMatrix g = norm_gram(B, I.lattice);
  for (Rational bound = I.norm * 4;; bound *= 4) {
    enumerate_short_vectors(g, bound, [&](const IntVector& v, const Rational& q) {
      const Rational ratio = q / I.norm;
      if (denominator(ratio) == 1 && residue(numerator(ratio), ell) != 0) {
        found = I.lattice.element(v);
        return false;
      }
      return true;
    });
    if (found) return *found;
    if (bound > I.norm * Rational(BigInt(1) << 40)) throw AssertionFailure("local_generator: none found");
  }
}

// chi(z) for z in the Eichler order: e z e = chi(z) e mod ell^k O.
inline int64_t level_character(const QuaternionAlgebra& B, const QuaternionLattice& maximal, const LevelStructure& ls,
                               const Quaternion& z) {
  const int64_t lk = ipow(ls.ell, ls.k);
  const Quaternion w = B.mul(B.mul(ls.idempotent, z), ls.idempotent);
  // coordinates over the maximal order basis, with denominators prime to ell
  const auto basis = maximal.elements();
  auto coords = [&](const Quaternion& x) {
    // rational coordinates of x over the basis, by elimination
    std::vector<std::vector<Rational>> a(4, std::vector<Rational>(5));
    for (std::size_t r = 0; r < 4; ++r) {
      for (std::size_t c = 0; c < 4; ++c) a[c][r] = basis[r][static_cast<int>(c)];
    }
    for (std::size_t c = 0; c < 4; ++c) a[c][4] = x[static_cast<int>(c)];
    for (std::size_t c = 0; c < 4; ++c) {
      std::size_t piv = c;
      while (a[piv][c] == 0) ++piv;
      std::swap(a[piv], a[c]);
      for (std::size_t r = 0; r < 4; ++r) {
        if (r == c || a[r][c] == 0) continue;
        const Rational f = a[r][c] / a[c][c];
        for (std::size_t j = c; j < 5; ++j) a[r][j] -= f * a[c][j];
      }
    }
    std::array<Rational, 4> out;
    for (std::size_t c = 0; c < 4; ++c) out[c] = a[c][4] / a[c][c];
    return out;
  };
  const auto ce = coords(ls.idempotent), cw = coords(w);
  std::optional<int64_t> lambda;
  for (std::size_t r = 0; r < 4 && !lambda; ++r) {
    const int64_t er = reduce_rational(ce[r], lk);
    if (er % ls.ell != 0) lambda = mulmod(reduce_rational(cw[r], lk), inverse_mod(er, lk), lk);
  }
  if (!lambda) throw AssertionFailure("level_character: idempotent vanishes mod ell");
  for (std::size_t r = 0; r < 4; ++r)
    if (floor_mod(reduce_rational(cw[r], lk) - mulmod(*lambda, reduce_rational(ce[r], lk), lk), lk) != 0)
      throw AssertionFailure("level_character: e z e is not a multiple of e");
  return *lambda;
}

}  // namespace detail

/// Orientation of x in the left order of class i: at ell | N^- whether x agrees
/// with the reference image of theta_c modulo the ramified prime, at ell | N^+
/// the eigenvalue of x on the level structure.
inline std::vector<int64_t> orientation(const GrossSetup& S, const IdealClassSet& cs, std::size_t i,
                                        const Quaternion& x, const Quaternion& reference) {
  std::vector<int64_t> out;
  const Rational diff = S.algebra.nrd(x - reference);
  for (auto [ell, e] : factorize(S.context.Nminus))
    out.push_back(diff == 0 || detail::valuation(numerator(diff), ell) > detail::valuation(denominator(diff), ell) ? 1 : -1);
  for (const auto& ls : S.order.level_structure) {
    const Quaternion a = detail::local_generator(S.algebra, cs.ideals[i], ls.ell);
    const Quaternion z = S.algebra.mul(S.algebra.inverse(a), S.algebra.mul(x, a));
    out.push_back(detail::level_character(S.algebra, S.order.maximal, ls, z));
  }
  return out;
}

// ---------------------------------------------------------------- orbit method

struct GrossPointSet {
  int64_t conductor = 1;
  int exponent = 0;
  std::vector<GrossPoint> points;
  std::vector<int64_t> reference_orientation;
};

/// Gross points of conductor p^exponent: for each class [a] in Pic(O_c) the
/// class of psi(a) I_c and the transported image of theta_c. Labels are taken
/// in Z/p^(exponent-1).
inline GrossPointSet gross_points(const GrossSetup& S, const IdealClassSet& cs, int exponent,
                                  bool with_orientations = false) {
  if (exponent < 0) throw ValidationError("gross_points: exponent must be non-negative");
  const QuadraticField K = S.context.field();
  const int64_t c = ipow(S.context.p, exponent);
  const RightIdeal Ic = ideal_of_conductor(S, exponent);
  const Quaternion theta_c = S.embedding(K.theta(c));
  const RingClassGroup G = ring_class_group(S.context.D_K, c);
  std::optional<GaloisLabeler> labeler;
  if (exponent >= 1) labeler.emplace(S.context.D_K, S.context.p, exponent - 1);
  GrossPointSet out;
  out.conductor = c;
  out.exponent = exponent;
  const auto basis = Ic.lattice.elements();
  for (const auto& F : G.forms) {
    const Quaternion tau = S.embedding(QuadNumber{Rational(-F.b, 2), Rational(c, 2)});
    std::vector<Quaternion> gens;
    for (const auto& b : basis) {
      gens.push_back(b * Rational(F.a));
      gens.push_back(S.algebra.mul(tau, b));
    }
    RightIdeal J;
    J.lattice = lattice_from_generators(gens);
    J.norm = Ic.norm * F.a;
    const auto [k, alpha] = cs.classify_with_witness(J);
    GrossPoint P;
    P.class_index = k;
    P.form = F;
    P.x = S.algebra.mul(S.algebra.inverse(alpha), S.algebra.mul(theta_c, alpha));
    if (!cs.ideals[k].left.contains(P.x)) throw AssertionFailure("gross_points: transported point left the order");
    P.label = labeler ? labeler->label(F, c) : 0;
    if (with_orientations) P.orientation = orientation(S, cs, k, P.x, theta_c);
    out.points.push_back(std::move(P));
  }
  const GrossPoint& base = out.points[G.identity()];
  out.reference_orientation = with_orientations ? base.orientation : orientation(S, cs, base.class_index, base.x, theta_c);
  return out;
}

// ---------------------------------------------------------------- enumeration

namespace detail {

inline auto quaternion_key(const Quaternion& x) { return std::make_tuple(x.a, x.b, x.c, x.d); }

// Representative of x under conjugation by the given units.
inline Quaternion conjugation_canonical(const QuaternionAlgebra& B, const std::vector<Quaternion>& units,
                                        const Quaternion& x) {
  Quaternion best = x;
  for (const auto& u : units) {
    const Quaternion y = B.mul(B.mul(u, x), u.conj());
    if (quaternion_key(y) < quaternion_key(best)) best = y;
  }
  return best;
}

// Elements x of O with trd = T and nrd = N, via the pure part 2x - T in Z + 2O.
inline std::vector<Quaternion> elements_with_trace_norm(const QuaternionAlgebra& B, const QuaternionLattice& O,
                                                        const Rational& T, const Rational& N,
                                                        std::size_t limit = static_cast<std::size_t>(-1)) {
  std::vector<Quaternion> gens{Quaternion(1)};
  for (const auto& b : O.elements()) gens.push_back(b * Rational(2));
  const QuaternionLattice L = lattice_from_generators(gens);
  const auto e = L.elements();
  IntMatrix tr(1, 4);
  for (std::size_t r = 0; r < 4; ++r) tr(0, r) = numerator(B.trd(e[r]) * Rational(L.den)) ;
  const IntMatrix ker = integer_kernel(tr);
  std::vector<Quaternion> pure;
  for (std::size_t r = 0; r < ker.rows(); ++r) {
    Quaternion y;
    for (std::size_t s = 0; s < 4; ++s) y = y + e[s] * Rational(ker(r, s));
    pure.push_back(y);
  }
  RationalMatrix g(pure.size(), std::vector<Rational>(pure.size()));
  for (std::size_t i = 0; i < pure.size(); ++i)
    for (std::size_t j = 0; j < pure.size(); ++j) g[i][j] = B.norm_pairing(pure[i], pure[j]);
  std::vector<Quaternion> out;
  for (const auto& v : vectors_of_norm(g, 4 * N - T * T)) {
    Quaternion y;
    for (std::size_t s = 0; s < pure.size(); ++s) y = y + pure[s] * Rational(v[s]);
    const Quaternion x = (y + Quaternion(T)) * Rational(1, 2);
    if (!O.contains(x)) continue;
    out.push_back(x);
    if (out.size() >= limit) break;
  }
  return out;
}

}  // namespace detail

inline std::optional<Quaternion> embed_O_K(const QuaternionAlgebra& B, const QuaternionLattice& O,
                                           const FieldContext& F, int64_t conductor) {
  const QuadraticField K = F.field();
  const QuadNumber t = K.theta(conductor);
  const auto found = detail::elements_with_trace_norm(B, O, K.trace(t), K.norm(t), 1);
  if (found.empty()) return std::nullopt;
  return found.front();
}

struct EmbeddingCensus {
  std::vector<GrossPoint> all;       // optimal embeddings up to unit conjugation, any orientation
  std::vector<GrossPoint> oriented;  // those with the reference orientation
};

/// Optimal embeddings of O_c, c = p^exponent, into every class order, up to
/// conjugation by units, sorted by class and coordinates.
inline EmbeddingCensus optimal_embeddings(const GrossSetup& S, const IdealClassSet& cs, int exponent,
                                          const std::vector<int64_t>& reference_orientation) {
  const QuadraticField K = S.context.field();
  const int64_t c = ipow(S.context.p, exponent);
  const QuadNumber t = K.theta(c);
  const Quaternion reference = S.embedding(t);
  EmbeddingCensus out;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const QuaternionLattice& O = cs.ideals[i].left;
    const auto units = unit_group(S.algebra, O);
    std::map<std::tuple<Rational, Rational, Rational, Rational>, Quaternion> seen;
    for (const auto& x : detail::elements_with_trace_norm(S.algebra, O, K.trace(t), K.norm(t))) {
      if (exponent > 0 && O.contains(x * Rational(1, S.context.p))) continue;  // not optimal
      const Quaternion canon = detail::conjugation_canonical(S.algebra, units, x);
      seen.emplace(detail::quaternion_key(canon), canon);
    }
    for (const auto& [key, x] : seen) {
      GrossPoint P;
      P.class_index = i;
      P.x = x;
      P.orientation = orientation(S, cs, i, x, reference);
      if (P.orientation == reference_orientation) out.oriented.push_back(P);
      out.all.push_back(std::move(P));
    }
  }
  return out;
}

/// Labels of enumerated embeddings, read off from the orbit of the same conductor.
inline void galois_labels(const GrossSetup& S, const IdealClassSet& cs, std::vector<GrossPoint>& enumerated,
                          const GrossPointSet& orbit) {
  std::map<std::pair<std::size_t, std::tuple<Rational, Rational, Rational, Rational>>, int64_t> table;
  for (const auto& P : orbit.points) {
    const auto units = unit_group(S.algebra, cs.ideals[P.class_index].left);
    table[{P.class_index, detail::quaternion_key(detail::conjugation_canonical(S.algebra, units, P.x))}] = P.label;
  }
  for (auto& P : enumerated) {
    auto it = table.find({P.class_index, detail::quaternion_key(P.x)});
    if (it == table.end()) throw AssertionFailure("galois_labels: embedding not in the Pic(O_c) orbit");
    P.label = it->second;
  }
}

// ---------------------------------------------------------------- local points

/// 2x2 matrix over K, row major.
struct KMatrix {
  std::array<QuadNumber, 4> m{};

  bool operator==(const KMatrix& o) const = default;
};

inline KMatrix kmatrix_mul(const QuadraticField& K, const KMatrix& x, const KMatrix& y) {
  auto add = [](const QuadNumber& a, const QuadNumber& b) { return QuadNumber{a.x + b.x, a.y + b.y}; };
  KMatrix out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.m[static_cast<std::size_t>(2 * i + j)] =
          add(K.mul(x.m[static_cast<std::size_t>(2 * i)], y.m[static_cast<std::size_t>(j)]),
              K.mul(x.m[static_cast<std::size_t>(2 * i + 1)], y.m[static_cast<std::size_t>(2 + j)]));
  return out;
}

inline QuadNumber kmatrix_det(const QuadraticField& K, const KMatrix& x) {
  const QuadNumber a = K.mul(x.m[0], x.m[3]), b = K.mul(x.m[1], x.m[2]);
  return {a.x - b.x, a.y - b.y};
}

/// i_q(theta) = (trd(theta) -nrd(theta); 1 0).
inline KMatrix companion_matrix(const QuadraticField& K, const QuadNumber& t) {
  return {{QuadNumber{K.trace(t), 0}, QuadNumber{-K.norm(t), 0}, QuadNumber{1, 0}, QuadNumber{0, 0}}};
}

struct LocalPoint {
  int64_t prime = 0;
  KMatrix matrix;
  bool scaled_by_inverse_sqrt_DK = false;  // the matrix is multiplied by 1/sqrt(D_K)
};

struct LocalPointData {
  int n = 0;
  std::vector<LocalPoint> split_level;  // q | N^+
  KMatrix at_p;                         // varsigma_p^(n)
};

/// varsigma_p^(n) = (theta -1; 1 0) diag(p^n, 1), and (1/sqrt(D_K)) (theta thetabar; 1 1) at q | N^+.
/// All other local points are the identity.
inline LocalPointData local_points(const FieldContext& F, int n) {
  const QuadraticField K = F.field();
  const QuadNumber t = K.theta();
  LocalPointData out;
  out.n = n;
  for (auto [q, e] : factorize(F.Nplus))
    out.split_level.push_back({q, {{t, K.conj(t), QuadNumber{1, 0}, QuadNumber{1, 0}}}, true});
  const Rational pn(ipow(F.p, n));
  out.at_p = {{QuadNumber{t.x * pn, t.y * pn}, QuadNumber{-1, 0}, QuadNumber{pn, 0}, QuadNumber{0, 0}}};
  return out;
}

}  // namespace anticyc
