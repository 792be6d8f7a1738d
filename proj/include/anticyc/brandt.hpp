#pragma once

// Right ideal classes of an Eichler order, Brandt matrices, and the mod p^N
// Hecke eigenvector on the class set.

#include "anticyc/common.hpp"
#include "anticyc/lattice.hpp"
#include "anticyc/quaternion.hpp"
#include "anticyc/zmod.hpp"

#include <map>
#include <optional>
#include <set>
#include <vector>

namespace anticyc {

/// Right ideal of an order together with cached invariants of its left order.
struct RightIdeal {
  QuaternionLattice lattice;
  Rational norm;
  QuaternionLattice left;
  std::size_t unit_count = 0;  // |O_L(I)^x|, 0 when not computed
};

inline RightIdeal make_right_ideal(const QuaternionAlgebra& B, const QuaternionLattice& I, const QuaternionOrder& R) {
  RightIdeal out;
  out.lattice = I;
  out.norm = lattice_norm(I, R.lattice);
  out.left = left_order(B, I, out.norm);
  out.unit_count = unit_group(B, out.left).size();
  return out;
}

/// Sum over classes of 1/|O_i^x| for an Eichler order of level Nplus in B_{Nminus}.
inline Rational eichler_mass(int64_t Nminus, int64_t Nplus) {
  Rational m(1, 24);
  for (auto [ell, e] : factorize(Nminus)) m *= ell - 1;
  m *= Nplus;
  for (auto [ell, e] : factorize(Nplus)) m *= Rational(ell + 1, ell);
  return m;
}

/// Returns alpha with I = alpha J when the right ideals are isomorphic.
inline std::optional<Quaternion> ideal_isomorphism(const QuaternionAlgebra& B, const RightIdeal& I,
                                                   const RightIdeal& J) {
  if (I.unit_count && J.unit_count && I.unit_count != J.unit_count) return std::nullopt;
  // alpha in I J^{-1} = I conj(J) / nrd(J), of norm nrd(I)/nrd(J).
  const QuaternionLattice L = lattice_product(B, I.lattice, lattice_conjugate(J.lattice));
  const auto found = vectors_of_norm(norm_gram(B, L), I.norm * J.norm, 1);
  if (found.empty()) return std::nullopt;
  return L.element(found.front()) * (Rational(1) / J.norm);
}

inline bool ideals_isomorphic(const QuaternionAlgebra& B, const RightIdeal& I, const RightIdeal& J) {
  return ideal_isomorphism(B, I, J).has_value();
}

/// The q-neighbours of I: right ideals J with qI in J in I and [I:J] = q^2.
inline std::vector<QuaternionLattice> neighbours(const QuaternionAlgebra& B, const QuaternionOrder& R,
                                                 const RightIdeal& I, int64_t q) {
  const auto basis = I.lattice.elements();
  const auto rbasis = R.lattice.elements();
  std::vector<Quaternion> qI;
  for (const auto& b : basis) qI.push_back(b * Rational(q));
  const Rational target = I.lattice.covolume() * Rational(q * q);
  std::set<std::pair<std::vector<std::string>, std::string>> seen;
  std::vector<QuaternionLattice> out;
  // x = sum c_r b_r with c in [0,q)^4, first nonzero coordinate 1
  for (int64_t code = 1; code < q * q * q * q; ++code) {
    std::array<int64_t, 4> c{};
    int64_t rest = code;
    for (auto& v : c) {
      v = rest % q;
      rest /= q;
    }
    const auto lead = std::find_if(c.begin(), c.end(), [](int64_t v) { return v != 0; });
    if (*lead != 1) continue;
    Quaternion x;
    for (std::size_t r = 0; r < 4; ++r) x = x + basis[r] * Rational(c[r]);
    const Rational reduced = B.nrd(x) / (I.norm * Rational(q));
    if (denominator(reduced) != 1) continue;
    std::vector<Quaternion> gens = qI;
    for (const auto& r : rbasis) gens.push_back(B.mul(x, r));
    QuaternionLattice J = lattice_from_generators(gens);
    if (J.covolume() != target) continue;
    std::pair<std::vector<std::string>, std::string> key;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) key.first.push_back(J.basis(i, j).str());
    key.second = J.den.str();
    if (seen.insert(key).second) out.push_back(std::move(J));
  }
  return out;
}

struct IdealClassSet {
  QuaternionAlgebra algebra;
  QuaternionOrder order;
  std::vector<RightIdeal> ideals;
  std::vector<int64_t> weights;  // w_i = |O_i^x / +-1|
  Rational mass;

  std::size_t size() const { return ideals.size(); }

  /// Index of the class of I; throws unless exactly one class matches.
  std::size_t classify(const RightIdeal& I) const { return classify_with_witness(I).first; }

  /// Class index k and alpha with I = alpha I_k.
  std::pair<std::size_t, Quaternion> classify_with_witness(const RightIdeal& I) const {
    std::optional<std::pair<std::size_t, Quaternion>> hit;
    for (std::size_t k = 0; k < ideals.size(); ++k)
      if (auto alpha = ideal_isomorphism(algebra, I, ideals[k])) {
        if (hit) throw AssertionFailure("classify: ideal matches two classes");
        hit.emplace(k, *alpha);
      }
    if (!hit) throw AssertionFailure("classify: ideal matches no class");
    return *hit;
  }
};

inline int64_t smallest_prime_not_dividing(int64_t N, int64_t from = 2) {
  for (int64_t q = from;; ++q)
    if (is_prime(q) && N % q != 0) return q;
}

/// Class set by q-neighbour traversal, complete once the mass formula is met.
inline IdealClassSet ideal_classes(const QuaternionAlgebra& B, const QuaternionOrder& R,
                                   std::size_t max_classes = 2000) {
  IdealClassSet cs{B, R, {}, {}, eichler_mass(B.discriminant(), R.level)};
  const int64_t q = smallest_prime_not_dividing(B.discriminant() * R.level);
  Rational found = 0;
  auto add = [&](RightIdeal I) {
    found += Rational(1, static_cast<int64_t>(I.unit_count));
    cs.weights.push_back(static_cast<int64_t>(I.unit_count / 2));
    cs.ideals.push_back(std::move(I));
  };
  add(make_right_ideal(B, R.lattice, R));
  for (std::size_t next = 0; found < cs.mass; ++next) {
    if (next >= cs.ideals.size()) throw AssertionFailure("ideal_classes: traversal exhausted below the mass");
    const auto nb = neighbours(B, R, cs.ideals[next], q);
    for (const auto& L : nb) {
      RightIdeal J = make_right_ideal(B, L, R);
      bool known = false;
      for (const auto& K : cs.ideals)
        if (ideals_isomorphic(B, J, K)) {
          known = true;
          break;
        }
      if (known) continue;
      add(std::move(J));
      if (cs.ideals.size() > max_classes) throw BoundExceeded("ideal_classes: class number above the limit");
      if (found >= cs.mass) break;
    }
  }
  if (found != cs.mass) throw AssertionFailure("ideal_classes: mass overshoot");
  return cs;
}

using IntegerMatrix = std::vector<std::vector<int64_t>>;

struct BrandtOperator {
  int64_t q = 0;
  IntegerMatrix matrix;
};

/// B(q)_{ij} = number of q-neighbours of I_i isomorphic to I_j, counted as
/// #{z in I_i conj(I_j) : nrd z = q nrd(I_i) nrd(I_j)} / |O_j^x|.
inline BrandtOperator brandt_matrix(const IdealClassSet& cs, int64_t q) {
  if (!is_prime(q)) throw ValidationError("brandt_matrix: q must be prime");
  if ((cs.algebra.discriminant() * cs.order.level) % q == 0)
    throw ValidationError("brandt_matrix: q divides the level");
  const std::size_t h = cs.size();
  BrandtOperator out{q, IntegerMatrix(h, std::vector<int64_t>(h, 0))};
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j) {
      const auto& I = cs.ideals[i];
      const auto& J = cs.ideals[j];
      const QuaternionLattice L = lattice_product(cs.algebra, I.lattice, lattice_conjugate(J.lattice));
      const auto count = vectors_of_norm(norm_gram(cs.algebra, L), I.norm * J.norm * q).size();
      if (count % J.unit_count != 0) throw AssertionFailure("brandt_matrix: count not divisible by units");
      out.matrix[i][j] = static_cast<int64_t>(count / J.unit_count);
    }
  return out;
}

/// Same matrix by classifying the q-neighbours of each class.
inline BrandtOperator brandt_matrix_by_neighbours(const IdealClassSet& cs, int64_t q) {
  const std::size_t h = cs.size();
  BrandtOperator out{q, IntegerMatrix(h, std::vector<int64_t>(h, 0))};
  for (std::size_t i = 0; i < h; ++i)
    for (const auto& L : neighbours(cs.algebra, cs.order, cs.ideals[i], q))
      ++out.matrix[i][cs.classify(make_right_ideal(cs.algebra, L, cs.order))];
  return out;
}

struct EigenvectorPhi {
  ZmodRing ring;
  std::vector<int64_t> values;
  std::map<int64_t, int64_t> eigenvalues;  // q -> a_q
};

/// Simultaneous eigenvector of the given Brandt operators mod p^N, normalised
/// so that its first unit coordinate is 1.
inline EigenvectorPhi eigenvector_phi(const std::vector<BrandtOperator>& ops, const std::map<int64_t, int64_t>& aq,
                                      int64_t p, int N) {
  if (ops.empty()) throw ValidationError("eigenvector_phi: no Brandt operators supplied");
  const std::size_t h = ops.front().matrix.size();
  auto stacked = [&](const ZmodRing& ring) {
    ZMatrix A(ring, 0, h);
    for (const auto& op : ops) {
      auto it = aq.find(op.q);
      if (it == aq.end()) throw ValidationError("eigenvector_phi: missing a_q for q=" + std::to_string(op.q));
      for (std::size_t i = 0; i < h; ++i) {
        std::vector<int64_t> row(h);
        for (std::size_t j = 0; j < h; ++j) row[j] = ring.reduce(op.matrix[i][j] - (i == j ? it->second : 0));
        A.append_row(row);
      }
    }
    return A;
  };
  const ZmodRing residue_field(p, 1);
  if (span_log_size(howell_form(kernel_basis(stacked(residue_field)))) == 0)
    throw ValidationError("eigenvector_phi: eigenspace is empty mod p (inconsistent a_q table?)");
  // multiplicity is measured on the generalized eigenspace: kernels of (B(q) - a_q)^h mod p
  ZMatrix generalized(residue_field, 0, h);
  {
    const ZMatrix A = stacked(residue_field);
    for (std::size_t k = 0; k < ops.size(); ++k) {
      ZMatrix block(residue_field, h, h);
      for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < h; ++j) block(i, j) = A(k * h + i, j);
      ZMatrix power = ZMatrix::identity(residue_field, h);
      for (std::size_t e = 0; e < h; ++e) power = power * block;
      for (std::size_t i = 0; i < h; ++i) generalized.append_row(power.row(i));
    }
  }
  if (span_log_size(howell_form(kernel_basis(generalized))) > 1)
    throw ValidationError(
        "residual multiplicity failure: hypotheses (Im)/(CR) likely violated for this instance");
  const ZmodRing ring(p, N);
  const ZMatrix ker = howell_form(kernel_basis(stacked(ring)));
  if (span_log_size(ker) != N) throw AssertionFailure("eigenvector_phi: eigenspace mod p^N is not free of rank one");
  for (std::size_t r = 0; r < ker.rows(); ++r) {
    auto v = ker.row_vector(r);
    for (std::size_t k = 0; k < h; ++k) {
      if (v[k] % p == 0) continue;
      const int64_t inv = ring.inverse(v[k]);
      for (auto& x : v) x = ring.mul(x, inv);
      EigenvectorPhi out{ring, v, {}};
      for (const auto& op : ops) out.eigenvalues[op.q] = ring.reduce(aq.at(op.q));
      return out;
    }
  }
  throw AssertionFailure("eigenvector_phi: no generator with a unit coordinate");
}

}  // namespace anticyc
