#include "anticyc/gross.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

using namespace anticyc;

namespace {

// beta is a square of a unit in Z_q: lift a root mod q (odd q) by Newton steps
// to q^6 and check it, or search odd roots mod 2^7.
bool hensel_square_oracle(int64_t beta, int64_t q) {
  if (q == 2) {
    for (int64_t x = 1; x < 128; x += 2)
      if (floor_mod(x * x - beta, 128) == 0) return true;
    return false;
  }
  if (floor_mod(beta, q) == 0) return false;
  for (int64_t r = 1; r < q; ++r) {
    if (floor_mod(r * r - beta, q) != 0) continue;
    BigInt x = r, m = q;
    for (int k = 1; k < 6; ++k) {
      m *= q;
      // x <- x - (x^2 - beta)/(2x) mod m
      BigInt inv = 1, base = (2 * x) % m, e = m / q * (q - 1) - 1;
      while (e > 0) {
        if (e % 2 == 1) inv = inv * base % m;
        base = base * base % m;
        e /= 2;
      }
      x = ((x - (x * x - beta) * inv) % m + m) % m;
    }
    return ((x * x - beta) % m + m) % m == 0;
  }
  return false;
}

struct Instance {
  FieldContext F;
  GrossSetup S;
  IdealClassSet cs;
};

Instance make_instance(int64_t D, int64_t p, int64_t Nm, int64_t Np) {
  auto F = make_field_context(D, p, Nm, Np);
  auto S = gross_setup(F);
  auto cs = ideal_classes(S.algebra, S.order);
  return {F, std::move(S), std::move(cs)};
}

int64_t prime_count(int64_t n) { return static_cast<int64_t>(factorize(n).size()); }

}  // namespace

TEST(FieldContext, AcceptsAdmissibleInstances) {
  const auto F = make_field_context(15, 19, 11, 1);
  EXPECT_EQ(F.h_K, 2);
  EXPECT_TRUE(check_admissibility(7, 11, 5, 2).ok());
  EXPECT_TRUE(check_admissibility(15, 19, 11, 17).ok());
}

TEST(FieldContext, RejectsInadmissibleInstances) {
  EXPECT_FALSE(check_admissibility(15, 7, 11, 1).ok());   // 7 inert
  EXPECT_FALSE(check_admissibility(15, 19, 11, 7).ok());  // N^+ prime inert
  EXPECT_FALSE(check_admissibility(15, 19, 17, 1).ok());  // N^- prime split
  EXPECT_FALSE(check_admissibility(15, 19, 77, 1).ok());  // even number of primes
  EXPECT_FALSE(check_admissibility(15, 19, 44, 1).ok());  // not squarefree
  EXPECT_FALSE(check_admissibility(3, 7, 2, 1).ok());     // extra units
  EXPECT_FALSE(check_admissibility(23, 2, 5, 1).ok());    // p = 2
  EXPECT_FALSE(check_admissibility(15, 19, 11, 19).ok()); // p divides N
  EXPECT_FALSE(check_admissibility(12, 19, 11, 1).ok());  // not fundamental
  EXPECT_THROW(make_field_context(15, 7, 11, 1), ValidationError);
}

TEST(Embedding, ThetaDataAndMultiplicativity) {
  std::mt19937 rng(2);
  std::uniform_int_distribution<int> d(-5, 5);
  for (auto [D, p, Nm, Np] : std::vector<std::array<int64_t, 4>>{{15, 19, 11, 1}, {7, 11, 5, 2}, {15, 19, 11, 4}, {15, 19, 11, 17}, {11, 3, 2, 1}}) {
    const auto F = make_field_context(D, p, Nm, Np);
    const auto S = gross_setup(F);
    const auto& B = S.algebra;
    const auto K = F.field();
    const Rational T(D), N = D % 2 ? Rational(D * D + D, 4) : Rational(D * D + 4 * D, 16);
    EXPECT_EQ(B.trd(S.embedding.theta), T);
    EXPECT_EQ(B.nrd(S.embedding.theta), N);
    EXPECT_EQ(S.embedding(K.theta()), S.embedding.theta);
    for (int trial = 0; trial < 10; ++trial) {
      const QuadNumber a{Rational(d(rng), 2), Rational(d(rng), 2)}, b{Rational(d(rng)), Rational(d(rng), 3)};
      EXPECT_EQ(S.embedding(K.mul(a, b)), B.mul(S.embedding(a), S.embedding(b)));
      const Quaternion t = S.embedding(a);
      EXPECT_EQ(B.mul(S.embedding.J, t), B.mul(S.embedding(K.conj(a)), S.embedding.J));
    }
  }
}

TEST(Embedding, BetaSatisfiesLocalConditions) {
  for (auto [D, p, Nm, Np] : std::vector<std::array<int64_t, 4>>{{15, 19, 11, 1}, {15, 19, 11, 2}, {15, 19, 11, 17}, {7, 11, 5, 2}}) {
    const auto F = make_field_context(D, p, Nm, Np);
    const auto S = gross_setup(F);
    const int64_t beta = static_cast<int64_t>(S.embedding.beta);
    EXPECT_LT(beta, 0);
    EXPECT_TRUE(is_squarefree(-beta));
    EXPECT_EQ(S.algebra.mul(S.embedding.J, S.embedding.J), Quaternion(Rational(beta)));
    EXPECT_EQ(std::gcd(-beta, D), 1);
    EXPECT_TRUE(hensel_square_oracle(beta, p));
    for (auto [q, e] : factorize(Np)) EXPECT_TRUE(hensel_square_oracle(beta, q)) << q;
  }
}

TEST(Embedding, HenselOracleSanity) {
  EXPECT_TRUE(hensel_square_oracle(-506, 19));
  EXPECT_FALSE(hensel_square_oracle(2, 3));
  EXPECT_TRUE(hensel_square_oracle(17, 2));
  EXPECT_FALSE(hensel_square_oracle(5, 2));
  EXPECT_FALSE(hensel_square_oracle(19, 19));
}

TEST(Setup, OrderIsEichlerAndContainsOK) {
  for (auto [D, p, Nm, Np] : std::vector<std::array<int64_t, 4>>{{15, 19, 11, 1}, {15, 19, 11, 4}, {15, 19, 11, 17}, {7, 11, 5, 2}}) {
    const auto S = gross_setup(make_field_context(D, p, Nm, Np));
    EXPECT_TRUE(is_order(S.algebra, S.order.lattice));
    EXPECT_EQ(reduced_discriminant(S.algebra, S.order.lattice), Nm * Np);
    EXPECT_EQ(S.order.level, Np);
    EXPECT_EQ(conductor_exponent(S, S.order.lattice, 3), 0);
  }
}

TEST(Conductor, WalkReachesEachExponent) {
  const auto F = make_field_context(15, 19, 11, 1);
  const auto S = gross_setup(F);
  for (int e = 0; e <= 2; ++e) {
    const RightIdeal I = ideal_of_conductor(S, e);
    EXPECT_EQ(I.norm, Rational(ipow(19, e)));
    EXPECT_EQ(right_order(S.algebra, I.lattice, I.norm), S.order.lattice);
    EXPECT_EQ(conductor_exponent(S, I.left, 4), e);
  }
}

TEST(GrossPoints, OrbitHasOnePointPerClassOfPic) {
  const auto inst = make_instance(15, 19, 11, 1);
  const auto K = inst.F.field();
  for (int e = 0; e <= 2; ++e) {
    const auto G = gross_points(inst.S, inst.cs, e, true);
    const int64_t c = ipow(19, e);
    EXPECT_EQ(G.points.size(), ring_class_group(15, c).size());
    const QuadNumber t = K.theta(c);
    std::set<std::pair<std::size_t, std::tuple<Rational, Rational, Rational, Rational>>> keys;
    for (const auto& P : G.points) {
      EXPECT_EQ(inst.S.algebra.trd(P.x), K.trace(t));
      EXPECT_EQ(inst.S.algebra.nrd(P.x), K.norm(t));
      EXPECT_TRUE(inst.cs.ideals[P.class_index].left.contains(P.x));
      if (e > 0) {
        EXPECT_FALSE(inst.cs.ideals[P.class_index].left.contains(P.x * Rational(1, 19)));
      }
      EXPECT_EQ(P.orientation, G.reference_orientation);
      const auto units = unit_group(inst.S.algebra, inst.cs.ideals[P.class_index].left);
      keys.insert({P.class_index, detail::quaternion_key(detail::conjugation_canonical(inst.S.algebra, units, P.x))});
    }
    // the class group acts simply transitively
    EXPECT_EQ(keys.size(), G.points.size());
  }
}

TEST(GrossPoints, LabelsAreEquidistributed) {
  const auto inst = make_instance(15, 19, 11, 1);
  const auto G = gross_points(inst.S, inst.cs, 2);
  std::map<int64_t, int> fibre;
  for (const auto& P : G.points) ++fibre[P.label];
  EXPECT_EQ(fibre.size(), 19u);
  for (auto [l, c] : fibre) EXPECT_EQ(c, 36);
  EXPECT_EQ(G.points[ring_class_group(15, 361).identity()].label, 0);
}

TEST(OptimalEmbeddings, CountsMatchEichlerFormula) {
  for (auto [D, p, Nm, Np] : std::vector<std::array<int64_t, 4>>{
           {15, 19, 11, 1}, {15, 19, 11, 2}, {15, 19, 11, 4}, {7, 11, 5, 2}, {11, 5, 2, 1}, {11, 3, 2, 1}}) {
    const auto inst = make_instance(D, p, Nm, Np);
    for (int e = 0; e <= 1; ++e) {
      const int64_t h = static_cast<int64_t>(ring_class_group(D, ipow(p, e)).size());
      const auto G = gross_points(inst.S, inst.cs, e);
      auto E = optimal_embeddings(inst.S, inst.cs, e, G.reference_orientation);
      EXPECT_EQ(static_cast<int64_t>(E.all.size()), h << (prime_count(Nm) + prime_count(Np))) << D << " " << p << " " << e;
      EXPECT_EQ(static_cast<int64_t>(E.oriented.size()), h);
      galois_labels(inst.S, inst.cs, E.oriented, G);
      std::map<int64_t, int> fibre;
      for (const auto& P : E.oriented) ++fibre[P.label];
      if (e == 1) {
        EXPECT_EQ(static_cast<int64_t>(fibre.size()), 1);  // Z/p^0
      }
    }
  }
}

TEST(OptimalEmbeddings, ClassNumberOneExample) {
  // Q(sqrt(-11)) has class number one and 2 is inert: one oriented embedding.
  const auto inst = make_instance(11, 5, 2, 1);
  const auto G = gross_points(inst.S, inst.cs, 0);
  const auto E = optimal_embeddings(inst.S, inst.cs, 0, G.reference_orientation);
  EXPECT_EQ(E.oriented.size(), 1u);
}

TEST(OptimalEmbeddings, NonOptimalMultiplesAreRejected) {
  const auto inst = make_instance(11, 3, 2, 1);
  const auto K = inst.F.field();
  const auto G = gross_points(inst.S, inst.cs, 1);
  const auto& P0 = G.points[0];
  const auto& O = inst.cs.ideals[P0.class_index].left;
  const auto units = unit_group(inst.S.algebra, O);
  auto keys = [&](int e) {
    std::set<std::tuple<Rational, Rational, Rational, Rational>> out;
    for (const auto& P : optimal_embeddings(inst.S, inst.cs, e, {}).all)
      if (P.class_index == P0.class_index) out.insert(detail::quaternion_key(P.x));
    return out;
  };
  // 3x has the trace and norm of theta_9 but lies in a larger order
  const Quaternion y = P0.x * Rational(3);
  EXPECT_TRUE(O.contains(y));
  EXPECT_EQ(inst.S.algebra.trd(y), K.trace(K.theta(9)));
  EXPECT_EQ(inst.S.algebra.nrd(y), K.norm(K.theta(9)));
  EXPECT_FALSE(keys(2).count(detail::quaternion_key(detail::conjugation_canonical(inst.S.algebra, units, y))));
  EXPECT_TRUE(keys(1).count(detail::quaternion_key(detail::conjugation_canonical(inst.S.algebra, units, P0.x))));
}

TEST(LocalPoints, MatrixIdentities) {
  const auto F = make_field_context(15, 19, 11, 34);
  const auto K = F.field();
  const QuadNumber t = K.theta();
  const KMatrix A{{t, QuadNumber{-1, 0}, QuadNumber{1, 0}, QuadNumber{0, 0}}};
  EXPECT_EQ(kmatrix_det(K, A), (QuadNumber{1, 0}));
  const auto L1 = local_points(F, 1), L2 = local_points(F, 2);
  const KMatrix diag_p{{QuadNumber{19, 0}, QuadNumber{0, 0}, QuadNumber{0, 0}, QuadNumber{1, 0}}};
  EXPECT_EQ(kmatrix_mul(K, L1.at_p, diag_p), L2.at_p);
  EXPECT_EQ(kmatrix_det(K, L2.at_p), (QuadNumber{361, 0}));
  EXPECT_EQ(local_points(F, 0).at_p, A);
  // one matrix per prime of N^+, all other local points are the identity
  ASSERT_EQ(L1.split_level.size(), 2u);
  for (const auto& lp : L1.split_level) {
    EXPECT_TRUE(lp.scaled_by_inverse_sqrt_DK);
    // its columns are eigenvectors of i_q(theta) with eigenvalues theta, thetabar
    const KMatrix lhs = kmatrix_mul(K, companion_matrix(K, t), lp.matrix);
    const KMatrix D{{t, QuadNumber{0, 0}, QuadNumber{0, 0}, K.conj(t)}};
    EXPECT_EQ(lhs, kmatrix_mul(K, lp.matrix, D));
  }
}
