#include "anticyc/ideal.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace anticyc;

namespace {

// Every element of Lambda_n / p^N, for tiny layers only.
std::vector<IwasawaElement> all_elements(const LayerContext& ctx) {
  const int64_t mod = ctx.ring().modulus();
  std::vector<IwasawaElement> out;
  std::vector<int64_t> c(ctx.degree(), 0);
  while (true) {
    out.emplace_back(ctx, c);
    std::size_t k = 0;
    while (k < c.size() && ++c[k] == mod) c[k++] = 0;
    if (k == c.size()) break;
  }
  return out;
}

// {a*g + b*h} by exhaustive enumeration.
std::set<std::vector<int64_t>> brute_ideal(const std::vector<IwasawaElement>& gens) {
  const auto elems = all_elements(gens.front().context());
  std::set<std::vector<int64_t>> acc{IwasawaElement(gens.front().context()).coeffs()};
  for (const auto& g : gens) {
    std::set<std::vector<int64_t>> multiples;
    for (const auto& a : elems) multiples.insert((a * g).coeffs());
    std::set<std::vector<int64_t>> next;
    for (const auto& x : acc)
      for (const auto& y : multiples) next.insert((IwasawaElement(g.context(), x) + IwasawaElement(g.context(), y)).coeffs());
    acc = std::move(next);
  }
  return acc;
}

IwasawaElement random_element(const LayerContext& ctx, std::mt19937& rng) {
  std::uniform_int_distribution<int64_t> d(0, ctx.ring().modulus() - 1);
  std::vector<int64_t> c(ctx.degree());
  for (auto& x : c) x = d(rng);
  return {ctx, c};
}

IwasawaElement pow(const IwasawaElement& a, int r) {
  auto out = IwasawaElement::one(a.context());
  for (int i = 0; i < r; ++i) out = out * a;
  return out;
}

}  // namespace

TEST(Ideal, PrincipalMatchesEnumeration) {
  LayerContext ctx(3, 1, 2);
  std::mt19937 rng(1);
  std::vector<IwasawaElement> samples{IwasawaElement::x(ctx), IwasawaElement::constant(ctx, 3),
                                      pow(IwasawaElement::x(ctx), 2), IwasawaElement::one(ctx)};
  for (int t = 0; t < 4; ++t) samples.push_back(random_element(ctx, rng).scaled(t % 2 ? 3 : 1));
  for (const auto& g : samples) {
    auto expected = brute_ideal({g});
    auto ideal = principal_ideal(g);
    int64_t size = 1;
    for (int i = 0; i < ideal.log_size(); ++i) size *= 3;
    EXPECT_EQ(static_cast<int64_t>(expected.size()), size);
    for (const auto& e : all_elements(ctx)) EXPECT_EQ(ideal.contains(e), expected.count(e.coeffs()) == 1);
  }
}

TEST(Ideal, SumMatchesEnumeration) {
  LayerContext ctx(3, 1, 2);
  auto x = IwasawaElement::x(ctx);
  auto three = IwasawaElement::constant(ctx, 3);
  auto expected = brute_ideal({x * x, three});
  auto ideal = principal_ideal(x * x) + principal_ideal(three);
  for (const auto& e : all_elements(ctx)) EXPECT_EQ(ideal.contains(e), expected.count(e.coeffs()) == 1);
  auto both = brute_ideal({x, three});
  auto gen = IdealHandle::from_generators(ctx, {x, three});
  EXPECT_EQ(gen, principal_ideal(x) + principal_ideal(three));
  for (const auto& e : all_elements(ctx)) EXPECT_EQ(gen.contains(e), both.count(e.coeffs()) == 1);
}

TEST(Ideal, MembershipBasics) {
  LayerContext ctx(5, 2, 4);
  auto x = IwasawaElement::x(ctx);
  auto ix = principal_ideal(x);
  EXPECT_TRUE(ix.contains(x));
  EXPECT_TRUE(ix.contains(x * IwasawaElement::sigma_power(ctx, 7)));
  EXPECT_FALSE(ix.contains(IwasawaElement::constant(ctx, 5)));
  EXPECT_FALSE(ix.is_unit());
  EXPECT_TRUE(IdealHandle::unit(ctx).is_unit());
  EXPECT_TRUE(IdealHandle::zero(ctx).is_zero());
  EXPECT_EQ(principal_ideal(IwasawaElement(ctx)), IdealHandle::zero(ctx));
  // (X) is the augmentation ideal: index p^N
  EXPECT_EQ(ix.log_size(), 4 * 25 - 4);
}

TEST(Ideal, ProductOfPrincipalsIsPrincipalOfProduct) {
  std::mt19937 rng(3);
  LayerContext ctx(3, 2, 3);
  for (int t = 0; t < 10; ++t) {
    auto a = random_element(ctx, rng), b = random_element(ctx, rng);
    EXPECT_EQ(principal_ideal(a) * principal_ideal(b), principal_ideal(a * b));
  }
  auto x = IwasawaElement::x(ctx);
  EXPECT_EQ(principal_ideal(x) * principal_ideal(x), principal_ideal(x * x));
}

TEST(Ideal, UnitGeneratorsGiveSameIdeal) {
  LayerContext ctx(5, 1, 3);
  auto x = IwasawaElement::x(ctx);
  for (int k = 0; k < 5; ++k) EXPECT_EQ(principal_ideal(x.shifted(k)), principal_ideal(x));
  EXPECT_EQ(principal_ideal(x.scaled(2)), principal_ideal(x));
}

TEST(Ideal, ReduceIsCanonical) {
  std::mt19937 rng(4);
  LayerContext ctx(3, 2, 3);
  auto ideal = principal_ideal(IwasawaElement::x(ctx) * IwasawaElement::x(ctx)) +
               principal_ideal(IwasawaElement::constant(ctx, 3));
  for (int t = 0; t < 20; ++t) {
    auto a = random_element(ctx, rng);
    auto inside = random_element(ctx, rng) * IwasawaElement::constant(ctx, 3);
    EXPECT_EQ(ideal.reduce(a), ideal.reduce(a + inside));
    EXPECT_TRUE(ideal.contains(a - ideal.reduce(a)));
  }
}

TEST(Ideal, ShiftClosedAndInvolutionStable) {
  for (int p : {3, 5})
    for (int n = 1; n <= 2; ++n) {
      LayerContext ctx(p, n, 3);
      auto fam = omega_family(ctx);
      for (Sign s : {Sign::Plus, Sign::Minus}) {
        auto t = fam.element(fam.tilde(s));
        auto ideal = principal_ideal(t);
        EXPECT_TRUE(ideal.shift_closed());
        // tilde omega is palindromic up to a power of sigma
        EXPECT_EQ(principal_ideal(t.involution()), ideal);
        auto w = fam.element(fam.signed_omega(s));
        EXPECT_EQ(principal_ideal(w.involution()), principal_ideal(w));
      }
    }
}

TEST(AugmentationIdeal, PowersOfX) {
  LayerContext ctx(3, 2, 4);
  auto x = IwasawaElement::x(ctx);
  auto i1 = augmentation_ideal_power(ctx, 0, 1);
  auto i2 = augmentation_ideal_power(ctx, 0, 2);
  EXPECT_EQ(i1, principal_ideal(x));
  EXPECT_EQ(i2, i1 * i1);
  EXPECT_TRUE(i1.contains(i2));
  EXPECT_FALSE(i2.contains(i1));
  EXPECT_EQ(augmentation_ideal_power(ctx, 0, 0), IdealHandle::unit(ctx));
  // X itself lies in I but not in I^2
  EXPECT_FALSE(i2.contains(x));
  EXPECT_TRUE(i2.contains(x * x * IwasawaElement::sigma_power(ctx, 4)));
}

TEST(AugmentationIdeal, NontrivialCharacterIdealIsKernel) {
  // (Phi_{p^m}) consists of elements vanishing at the order-p^m characters;
  // test the forward direction and that the ideal is proper.
  LayerContext ctx(3, 2, 3);
  std::mt19937 rng(9);
  for (int m = 1; m <= 2; ++m) {
    auto ideal = augmentation_ideal_power(ctx, m, 1);
    EXPECT_FALSE(ideal.is_unit());
    for (int t = 0; t < 10; ++t) {
      auto e = ideal.generators().front() * random_element(ctx, rng);
      EXPECT_TRUE(evaluate_character(e, m).is_zero());
    }
    EXPECT_TRUE(augmentation_ideal_power(ctx, m, 2).contains(pow(ideal.generators().front(), 2)));
  }
  EXPECT_THROW(augmentation_ideal_power(ctx, 3, 1), PreconditionError);
  EXPECT_THROW(augmentation_ideal_power(ctx, 1, -1), PreconditionError);
}

TEST(Annihilator, OfXIsNorm) {
  LayerContext ctx(5, 1, 3);
  auto ann = annihilator(IwasawaElement::x(ctx));
  auto norm = IwasawaElement::from_poly(ctx, cyclotomic_p_power(5, 1));
  EXPECT_EQ(ann, principal_ideal(norm));
  EXPECT_TRUE(ann.shift_closed());
}

TEST(Annihilator, AgainstEnumeration) {
  LayerContext ctx(3, 1, 2);
  std::mt19937 rng(12);
  for (int t = 0; t < 6; ++t) {
    auto a = random_element(ctx, rng).scaled(t % 2 ? 3 : 1);
    auto ann = annihilator(a);
    for (const auto& e : all_elements(ctx)) EXPECT_EQ(ann.contains(e), (a * e).is_zero());
  }
}

TEST(SignedDivide, RoundTrip) {
  std::mt19937 rng(5);
  for (int p : {3, 5})
    for (int n = 1; n <= 3; ++n) {
      if (p == 5 && n == 3) continue;
      LayerContext ctx(p, n, 4);
      auto fam = omega_family(ctx);
      for (Sign s : {Sign::Plus, Sign::Minus}) {
        auto divisor = fam.element(fam.tilde(opposite(s)));
        auto g0 = random_element(ctx, rng);
        auto theta = divisor * g0;
        auto q = signed_divide(theta, s, fam);
        EXPECT_EQ(divisor * q.value, theta);
        EXPECT_TRUE(q.ambiguity.contains(q.value - g0));
        EXPECT_TRUE(q.ambiguity.contains(fam.element(fam.signed_omega(s))));
        // canonical: independent of the chosen preimage
        auto q2 = signed_divide(divisor * (g0 + fam.element(fam.signed_omega(s)) * random_element(ctx, rng)), s, fam);
        EXPECT_EQ(q2.value, q.value);
      }
    }
}

TEST(SignedDivide, MinusAtLayerOneIsIdentity) {
  // tilde^+ = 1 at n = 1, so dividing theta^- is the identity modulo (omega^-)
  LayerContext ctx(5, 1, 3);
  auto fam = omega_family(ctx);
  std::mt19937 rng(6);
  auto theta = random_element(ctx, rng);
  auto q = signed_divide(theta, Sign::Minus, fam);
  EXPECT_EQ(q.value, theta);
  EXPECT_TRUE(q.exact_in_quotient);
  EXPECT_TRUE(q.ambiguity.is_zero());
}

TEST(SignedDivide, RejectsUnannihilatedInput) {
  LayerContext ctx(3, 2, 4);
  auto fam = omega_family(ctx);
  EXPECT_THROW(signed_divide(IwasawaElement::one(ctx), Sign::Plus, fam), PreconditionError);
  EXPECT_THROW(signed_divide(IwasawaElement::one(ctx), Sign::Minus, fam), PreconditionError);
}

TEST(SignedDivide, ExactnessFlagAtGenerousPrecision) {
  LayerContext ctx(3, 2, 6);
  auto fam = omega_family(ctx);
  for (Sign s : {Sign::Plus, Sign::Minus}) {
    auto theta = fam.element(fam.tilde(opposite(s)));
    auto q = signed_divide(theta, s, fam);
    EXPECT_TRUE(q.ambiguity.contains(q.value - IwasawaElement::one(ctx)));
  }
}
