#include "anticyc/brandt.hpp"
#include "anticyc/elliptic.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace anticyc;

namespace {

IdealClassSet classes(int64_t Nminus, int64_t Nplus) {
  const auto B = build_algebra(Nminus);
  return ideal_classes(B, eichler_order(B, maximal_order(B), Nplus));
}

IntegerMatrix multiply(const IntegerMatrix& a, const IntegerMatrix& b) {
  const std::size_t n = a.size();
  IntegerMatrix c(n, std::vector<int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

std::vector<int64_t> good_primes(int64_t level) {
  std::vector<int64_t> out;
  for (int64_t q : {2, 3, 5, 7, 13})
    if (level % q) out.push_back(q);
  return out;
}

// brute-force point count over all (x, y) in F_q^2
int64_t brute_aq(const EllipticCurve& E, int64_t q) {
  int64_t count = 1;
  for (int64_t x = 0; x < q; ++x)
    for (int64_t y = 0; y < q; ++y) {
      const int64_t lhs = y * y + E.a[0] * x * y + E.a[2] * y;
      const int64_t rhs = x * x * x + E.a[1] * x * x + E.a[3] * x + E.a[4];
      if (floor_mod(lhs - rhs, q) == 0) ++count;
    }
  return q + 1 - count;
}

}  // namespace

TEST(Classes, MassAndClassNumbers) {
  const auto c2 = classes(2, 1);
  EXPECT_EQ(c2.size(), 1u);
  EXPECT_EQ(c2.mass, Rational(1, 24));
  EXPECT_EQ(c2.weights, std::vector<int64_t>{12});

  const auto c3 = classes(3, 1);
  EXPECT_EQ(c3.size(), 1u);
  EXPECT_EQ(c3.mass, Rational(1, 12));

  const auto c11 = classes(11, 1);
  EXPECT_EQ(c11.size(), 2u);
  EXPECT_EQ(c11.mass, Rational(5, 12));
  Rational total = 0;
  for (auto w : c11.weights) total += Rational(1, 2 * w);
  EXPECT_EQ(total, Rational(5, 12));
}

TEST(Classes, EichlerMassFormula) {
  EXPECT_EQ(eichler_mass(2, 1), Rational(1, 24));
  EXPECT_EQ(eichler_mass(11, 1), Rational(5, 12));
  EXPECT_EQ(eichler_mass(2, 3), Rational(1, 6));
  EXPECT_EQ(eichler_mass(3, 4), Rational(1, 2));
}

TEST(Classes, RepresentativesArePairwiseNonIsomorphic) {
  for (auto [Nm, Np] : std::vector<std::pair<int64_t, int64_t>>{{11, 1}, {37, 1}, {2, 37}, {3, 5}}) {
    const auto cs = classes(Nm, Np);
    for (std::size_t i = 0; i < cs.size(); ++i)
      for (std::size_t j = 0; j < cs.size(); ++j)
        EXPECT_EQ(ideals_isomorphic(cs.algebra, cs.ideals[i], cs.ideals[j]), i == j);
  }
}

TEST(Classes, LeftOrdersAreEichlerOfTheSameLevel) {
  for (auto [Nm, Np] : std::vector<std::pair<int64_t, int64_t>>{{11, 1}, {2, 37}, {3, 5}}) {
    const auto cs = classes(Nm, Np);
    for (const auto& I : cs.ideals) {
      EXPECT_TRUE(is_order(cs.algebra, I.left));
      EXPECT_EQ(reduced_discriminant(cs.algebra, I.left), Nm * Np);
      EXPECT_EQ(right_order(cs.algebra, I.lattice, I.norm), cs.order.lattice);
    }
  }
}

TEST(Classes, IsomorphismWitnessTransportsIdeals) {
  const auto cs = classes(11, 1);
  const auto& B = cs.algebra;
  const auto& I = cs.ideals[1];
  const Quaternion x(1, 1, 1, 0);
  const RightIdeal J = make_right_ideal(B, lattice_left_multiply(B, x, I.lattice), cs.order);
  const auto alpha = ideal_isomorphism(B, J, I);
  ASSERT_TRUE(alpha.has_value());
  EXPECT_EQ(lattice_left_multiply(B, *alpha, I.lattice), J.lattice);
  EXPECT_EQ(cs.classify(J), 1u);
}

TEST(Brandt, RowSumsSelfAdjointAndCommuting) {
  for (auto [Nm, Np] : std::vector<std::pair<int64_t, int64_t>>{{2, 1}, {3, 1}, {11, 1}, {37, 1}, {2, 37}, {3, 5}}) {
    const auto cs = classes(Nm, Np);
    std::vector<BrandtOperator> ops;
    for (auto q : good_primes(Nm * Np)) ops.push_back(brandt_matrix(cs, q));
    for (const auto& op : ops) {
      for (std::size_t i = 0; i < cs.size(); ++i) {
        int64_t s = 0;
        for (std::size_t j = 0; j < cs.size(); ++j) {
          s += op.matrix[i][j];
          EXPECT_GE(op.matrix[i][j], 0);
          EXPECT_EQ(cs.weights[j] * op.matrix[i][j], cs.weights[i] * op.matrix[j][i]);
        }
        EXPECT_EQ(s, op.q + 1);
      }
      for (const auto& other : ops) EXPECT_EQ(multiply(op.matrix, other.matrix), multiply(other.matrix, op.matrix));
    }
  }
}

TEST(Brandt, LatticeCountMatchesNeighbourClassification) {
  for (auto [Nm, Np] : std::vector<std::pair<int64_t, int64_t>>{{11, 1}, {37, 1}, {2, 37}}) {
    const auto cs = classes(Nm, Np);
    for (int64_t q : {2, 3, 5}) {
      if ((Nm * Np) % q == 0) continue;
      EXPECT_EQ(brandt_matrix(cs, q).matrix, brandt_matrix_by_neighbours(cs, q).matrix);
      for (const auto& I : cs.ideals)
        EXPECT_EQ(neighbours(cs.algebra, cs.order, I, q).size(), static_cast<std::size_t>(q + 1));
    }
  }
}

TEST(Brandt, SpectrumIsEisensteinPlusCuspForm) {
  const auto cs = classes(11, 1);
  const auto E = curve_11a1();
  for (int64_t q : {2, 3, 5, 7, 13}) {
    const auto m = brandt_matrix(cs, q).matrix;
    const int64_t aq = count_points_aq(E, q);
    // 2x2: eigenvalues {q+1, a_q} iff trace and determinant match
    EXPECT_EQ(m[0][0] + m[1][1], q + 1 + aq) << q;
    EXPECT_EQ(m[0][0] * m[1][1] - m[0][1] * m[1][0], (q + 1) * aq) << q;
  }
}

TEST(Brandt, RejectsPrimesDividingTheLevel) {
  const auto cs = classes(11, 1);
  EXPECT_THROW(brandt_matrix(cs, 11), ValidationError);
  EXPECT_THROW(brandt_matrix(cs, 4), ValidationError);
}

TEST(Eigenvector, CuspidalEigenvectorModPN) {
  const auto cs = classes(11, 1);
  const auto E = curve_11a1();
  std::vector<BrandtOperator> ops;
  for (int64_t q : {2, 3, 5, 7, 13}) ops.push_back(brandt_matrix(cs, q));
  const auto aq = aq_table(E, {2, 3, 5, 7, 13});
  for (auto [p, N] : std::vector<std::pair<int64_t, int>>{{19, 3}, {29, 2}, {7, 4}, {3, 5}}) {
    const auto phi = eigenvector_phi(ops, aq, p, N);
    const ZmodRing& ring = phi.ring;
    bool unit = false;
    for (auto v : phi.values) unit = unit || v % p != 0;
    EXPECT_TRUE(unit);
    for (const auto& op : ops)
      for (std::size_t i = 0; i < cs.size(); ++i) {
        int64_t s = 0;
        for (std::size_t j = 0; j < cs.size(); ++j) s = ring.add(s, ring.mul(ring.reduce(op.matrix[i][j]), phi.values[j]));
        EXPECT_EQ(s, ring.mul(ring.reduce(aq.at(op.q)), phi.values[i]));
      }
  }
}

TEST(Eigenvector, EisensteinVectors) {
  for (auto [Nm, Np] : std::vector<std::pair<int64_t, int64_t>>{{11, 1}, {37, 1}, {2, 37}}) {
    const auto cs = classes(Nm, Np);
    int64_t lcm = 1;
    for (auto w : cs.weights) lcm = std::lcm(lcm, w);
    for (auto q : good_primes(Nm * Np)) {
      const auto m = brandt_matrix(cs, q).matrix;
      for (std::size_t j = 0; j < cs.size(); ++j) {
        // transpose acting on (lcm / w_i)
        int64_t s = 0;
        for (std::size_t i = 0; i < cs.size(); ++i) s += m[i][j] * (lcm / cs.weights[i]);
        EXPECT_EQ(s, (q + 1) * (lcm / cs.weights[j]));
      }
    }
  }
}

TEST(Eigenvector, WrongSignGivesEmptyEigenspace) {
  const auto cs = classes(11, 1);
  std::vector<BrandtOperator> ops;
  for (int64_t q : {2, 3, 5}) ops.push_back(brandt_matrix(cs, q));
  auto aq = aq_table(curve_11a1(), {2, 3, 5});
  aq[2] = -aq[2];
  EXPECT_THROW(eigenvector_phi(ops, aq, 19, 2), ValidationError);
}

TEST(Eigenvector, EisensteinCongruenceIsAResidualMultiplicityFailure) {
  // a_q = q + 1 mod 5 for this curve, so the eigenspaces merge mod 5.
  const auto cs = classes(11, 1);
  std::vector<BrandtOperator> ops;
  for (int64_t q : {2, 3, 7}) ops.push_back(brandt_matrix(cs, q));
  try {
    eigenvector_phi(ops, aq_table(curve_11a1(), {2, 3, 7}), 5, 2);
    FAIL() << "expected a residual multiplicity failure";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("residual multiplicity failure"), std::string::npos);
  }
}

TEST(PointCount, SmallExamples) {
  EXPECT_EQ(count_points_aq({"", {0, 0, 0, 0, 1}}, 5), 0);
  EXPECT_EQ(count_points_aq({"", {0, 0, 0, 1, 0}}, 3), 0);
  const auto E = curve_11a1();
  const std::map<int64_t, int64_t> expected{{2, -2}, {3, -1}, {5, 1}, {7, -2}, {13, 4}, {17, -2}, {19, 0}, {29, 0}};
  for (auto [q, a] : expected) EXPECT_EQ(count_points_aq(E, q), a) << q;
}

TEST(PointCount, MatchesBruteForceAndLegendreSum) {
  std::mt19937 rng(21);
  std::uniform_int_distribution<int64_t> coeff(-30, 30);
  const std::vector<int64_t> primes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
  int checked = 0;
  while (checked < 500) {
    EllipticCurve E{"", {coeff(rng) % 2, coeff(rng) % 3, coeff(rng) % 2, coeff(rng), coeff(rng)}};
    if (E.discriminant() == 0) continue;
    const int64_t q = primes[static_cast<std::size_t>(checked) % primes.size()];
    if (!E.good_reduction(q)) continue;
    const int64_t a = count_points_aq(E, q);
    EXPECT_LE(a * a, 4 * q);
    EXPECT_EQ(a, brute_aq(E, q));
    if (q >= 5) {
      EXPECT_EQ(a, trace_by_legendre_sum(E, q));
    }
    ++checked;
  }
}

TEST(PointCount, RejectsBadReduction) {
  EXPECT_THROW(count_points_aq(curve_11a1(), 11), ValidationError);
  EXPECT_THROW(count_points_aq(curve_11a1(), 9), ValidationError);
  EXPECT_THROW(count_points_aq(curve_11a1(), 1000003), BoundExceeded);
}
