#include "anticyc/iwasawa.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace anticyc;

namespace {

IwasawaElement random_element(const LayerContext& ctx, std::mt19937& rng) {
  std::uniform_int_distribution<int64_t> d(0, ctx.ring().modulus() - 1);
  std::vector<int64_t> c(ctx.degree());
  for (auto& x : c) x = d(rng);
  return {ctx, c};
}

// Naive convolution straight from the definition sigma^i sigma^j = sigma^{i+j}.
IwasawaElement naive_product(const IwasawaElement& a, const IwasawaElement& b) {
  const auto d = a.size();
  const int64_t mod = a.context().ring().modulus();
  std::vector<int64_t> c(d, 0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) c[(i + j) % d] = floor_mod(c[(i + j) % d] + mulmod(a[i], b[j], mod), mod);
  return {a.context(), c};
}

// Constant term of ((1+X)^{p^m} - 1) / ((1+X)^{p^{m-1}} - 1) by exact
// polynomial long division in the X-basis.
BigInt geometric_quotient_at_zero(int64_t p, int m) {
  auto shifted_power_minus_one = [](int64_t e) {
    std::vector<BigInt> c(static_cast<std::size_t>(e) + 1);
    BigInt b = 1;
    for (int64_t j = 0; j <= e; ++j) {
      c[static_cast<std::size_t>(j)] = b;
      b = b * (e - j) / (j + 1);
    }
    c[0] -= 1;
    return c;
  };
  auto num = shifted_power_minus_one(ipow(p, m));
  auto den = shifted_power_minus_one(ipow(p, m - 1));
  // both have zero constant term; divide out X
  num.erase(num.begin());
  den.erase(den.begin());
  std::vector<BigInt> q(num.size() - den.size() + 1);
  for (std::size_t k = q.size(); k-- > 0;) {
    q[k] = num[k + den.size() - 1] / den.back();
    for (std::size_t j = 0; j < den.size(); ++j) num[k + j] -= q[k] * den[j];
  }
  for (const auto& r : num) EXPECT_EQ(r, 0);
  return q[0];
}

}  // namespace

TEST(IwasawaElement, SigmaTimesInverseIsOne) {
  LayerContext ctx(3, 2, 4);
  auto s = IwasawaElement::sigma_power(ctx, 1);
  auto sinv = IwasawaElement::sigma_power(ctx, static_cast<int64_t>(ctx.degree()) - 1);
  EXPECT_EQ(s * sinv, IwasawaElement::one(ctx));
  // (1+X) * (1+X)^{p^n-1} through the X-basis constructor
  std::vector<int64_t> one_plus_x{1, 1};
  auto t = IwasawaElement::from_x_coefficients(ctx, one_plus_x);
  EXPECT_EQ(t, s);
}

TEST(IwasawaElement, GroupLikeProducts) {
  LayerContext ctx(5, 1, 3);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      EXPECT_EQ(IwasawaElement::sigma_power(ctx, i) * IwasawaElement::sigma_power(ctx, j),
                IwasawaElement::sigma_power(ctx, (i + j) % 5));
}

TEST(IwasawaElement, ConvolutionMatchesNaiveOracle) {
  std::mt19937 rng(1);
  for (auto [p, n] : std::vector<std::pair<int, int>>{{3, 1}, {3, 3}, {5, 2}, {7, 1}}) {
    LayerContext ctx(p, n, 8);
    for (int t = 0; t < 10; ++t) {
      auto a = random_element(ctx, rng), b = random_element(ctx, rng);
      EXPECT_EQ(a * b, naive_product(a, b));
      EXPECT_EQ(a * b, b * a);
    }
  }
}

TEST(IwasawaElement, RingAxioms) {
  std::mt19937 rng(2);
  LayerContext ctx(5, 2, 6);
  for (int t = 0; t < 10; ++t) {
    auto a = random_element(ctx, rng), b = random_element(ctx, rng), c = random_element(ctx, rng);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a * IwasawaElement::one(ctx), a);
  }
}

TEST(IwasawaElement, XBasisRoundTrip) {
  std::mt19937 rng(3);
  LayerContext ctx(3, 2, 5);
  for (int t = 0; t < 10; ++t) {
    auto a = random_element(ctx, rng);
    EXPECT_EQ(IwasawaElement::from_x_coefficients(ctx, a.x_coefficients()), a);
  }
  EXPECT_EQ(IwasawaElement::x(ctx).x_coefficients()[1], 1);
}

TEST(Involution, Basics) {
  LayerContext ctx(5, 2, 4);
  for (int k = 0; k < 25; ++k)
    EXPECT_EQ(IwasawaElement::sigma_power(ctx, k).involution(), IwasawaElement::sigma_power(ctx, 25 - k));
  auto c = IwasawaElement::constant(ctx, 17);
  EXPECT_EQ(c.involution(), c);
  std::mt19937 rng(4);
  for (int t = 0; t < 20; ++t) {
    auto a = random_element(ctx, rng), b = random_element(ctx, rng);
    EXPECT_EQ(a.involution().involution(), a);
    EXPECT_EQ((a * b).involution(), a.involution() * b.involution());
    EXPECT_EQ((a + b).involution(), a.involution() + b.involution());
  }
}

TEST(OmegaFamily, LayerOneValues) {
  LayerContext ctx(5, 1, 8);
  auto f = omega_family(ctx);
  EXPECT_EQ(f.omega_plus, IntPoly::x());
  EXPECT_EQ(f.tilde_plus, IntPoly::constant(1));
  EXPECT_EQ(f.omega_minus, f.omega);
  EXPECT_EQ(f.omega_minus, IntPoly::x() * f.cyclotomic[0]);
}

TEST(OmegaFamily, LayerZero) {
  auto f = omega_family(LayerContext(3, 0, 4));
  EXPECT_EQ(f.omega_plus, IntPoly::x());
  EXPECT_EQ(f.omega_minus, IntPoly::x());
  EXPECT_EQ(f.tilde_plus, IntPoly::constant(1));
  EXPECT_EQ(f.tilde_minus, IntPoly::constant(1));
}

TEST(OmegaFamily, FactorizationExact) {
  for (int p : {3, 5, 7})
    for (int n = 0; n <= 4; ++n) {
      auto f = omega_family(LayerContext(p, n, 8));
      EXPECT_TRUE(f.factorization_holds()) << p << " " << n;
    }
}

TEST(OmegaFamily, CyclotomicAtZeroAgainstGeometricOracle) {
  for (int p : {3, 5})
    for (int m = 1; m <= 3; ++m) EXPECT_EQ(geometric_quotient_at_zero(p, m), p) << p << " " << m;
  for (int p : {3, 5, 7})
    for (int m = 1; m <= 4; ++m) EXPECT_EQ(cyclotomic_p_power(p, m).value_at_x_zero(), p);
}

TEST(OmegaFamily, ExactXCoefficientsAgreeWithLayerView) {
  LayerContext ctx(3, 2, 6);
  auto f = omega_family(ctx);
  auto exact = f.tilde_plus.x_coefficients();
  std::vector<int64_t> red;
  for (const auto& c : exact) red.push_back(ctx.ring().reduce(c));
  red.resize(ctx.degree(), 0);
  EXPECT_EQ(f.element(f.tilde_plus).x_coefficients(), red);
}

TEST(Project, SigmaMapsToSigma) {
  LayerContext ctx(3, 3, 5);
  EXPECT_EQ(IwasawaElement::sigma_power(ctx, 1).project(1), IwasawaElement::sigma_power(ctx.at_layer(1), 1));
  EXPECT_THROW(IwasawaElement::sigma_power(ctx, 1).project(3), PreconditionError);
}

TEST(Project, TopCyclotomicCollapsesToP) {
  for (int p : {3, 5, 7})
    for (int n = 1; n <= 3; ++n) {
      LayerContext ctx(p, n, 8);
      auto phi = IwasawaElement::from_poly(ctx, cyclotomic_p_power(p, n));
      // oracle: (1+X)^{k p^{n-1}} is sigma^{k p^{n-1}}, which is 1 in layer n-1
      int64_t expected = 0;
      for (int k = 0; k < p; ++k) expected += 1;
      EXPECT_EQ(phi.project(n - 1), IwasawaElement::constant(ctx.at_layer(n - 1), expected));
    }
}

TEST(Project, IsRingHomomorphism) {
  std::mt19937 rng(6);
  LayerContext ctx(3, 3, 5);
  for (int t = 0; t < 10; ++t) {
    auto a = random_element(ctx, rng), b = random_element(ctx, rng);
    for (int m = 0; m < 3; ++m) {
      EXPECT_EQ((a * b).project(m), a.project(m) * b.project(m));
      EXPECT_EQ((a + b).project(m), a.project(m) + b.project(m));
    }
  }
}

TEST(Project, EvenOmegaPlusDescends) {
  // omega_n^+ = omega_{n-2}^+ * Phi_{p^n}(1+X) exactly, so in layer n-2 the
  // image is omega_{n-2}^+ * p (Phi_{p^n} collapses to p there)
  for (int p : {3, 5})
    for (int n : {2, 4}) {
      LayerContext ctx(p, n, 8);
      auto top = omega_family(ctx);
      auto low = omega_family(ctx.at_layer(n - 2));
      EXPECT_EQ(top.omega_plus, low.omega_plus * cyclotomic_p_power(p, n));
      auto image = top.element(top.omega_plus).project(n - 2);
      EXPECT_EQ(image, low.element(low.omega_plus).scaled(p));
    }
}

TEST(Character, TrivialIsAugmentation) {
  LayerContext ctx(5, 1, 3);
  IwasawaElement a(ctx, {1, 2, 3, 4, 5});
  auto v = evaluate_character(a, 0);
  EXPECT_EQ(v.coeffs, std::vector<int64_t>{15});
}

TEST(Character, CyclotomicVanishesAtExactOrder) {
  LayerContext ctx(3, 3, 6);
  auto f = omega_family(ctx);
  for (int m = 1; m <= 3; ++m) EXPECT_TRUE(evaluate_character(f.element(f.cyclotomic[m - 1]), m).is_zero());
  for (int m = 0; m <= 3; ++m) EXPECT_TRUE(evaluate_character(f.element(f.omega), m).is_zero());
  // X does not vanish at a nontrivial character
  EXPECT_FALSE(evaluate_character(IwasawaElement::x(ctx), 2).is_zero());
  EXPECT_THROW(evaluate_character(IwasawaElement::x(ctx), 4), PreconditionError);
}

TEST(Character, IsRingHomomorphism) {
  std::mt19937 rng(8);
  LayerContext ctx(3, 2, 5);
  for (int t = 0; t < 10; ++t) {
    auto a = random_element(ctx, rng), b = random_element(ctx, rng);
    for (int m = 0; m <= 2; ++m) {
      auto va = evaluate_character(a, m), vb = evaluate_character(b, m);
      EXPECT_EQ(evaluate_character(a * b, m), character_multiply(va, vb, ctx.ring()));
    }
  }
}

TEST(LayerContext, RejectsBadParameters) {
  EXPECT_THROW(LayerContext(4, 1, 2), ValidationError);
  EXPECT_THROW(LayerContext(2, 1, 2), ValidationError);
  EXPECT_THROW(LayerContext(3, -1, 2), ValidationError);
}
