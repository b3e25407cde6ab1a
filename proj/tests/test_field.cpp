#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "cmkms/field.hpp"

using namespace cmkms;

namespace {

FieldElement E(i64 x, i64 y) { return FieldElement(Rational(x), Rational(y)); }

}  // namespace

TEST(MakeField, Discriminants) {
  auto K = make_quadratic_field(-1);
  EXPECT_EQ(K.D, -4);
  EXPECT_EQ(K.omega_rule(), "sqrt(d)");
  auto K5 = make_quadratic_field(5);
  EXPECT_EQ(K5.D, 5);
  EXPECT_EQ(K5.omega_rule(), "(1+sqrt(d))/2");
  EXPECT_EQ(make_rational_field().D, 1);
  EXPECT_EQ(make_quadratic_field(-3).D, -3);
  EXPECT_EQ(make_quadratic_field(10).real_places, 2);
  EXPECT_EQ(make_quadratic_field(-5).complex_places, 1);
}

TEST(MakeField, Rejections) {
  EXPECT_THROW(make_quadratic_field(12), DomainError);
  EXPECT_THROW(make_quadratic_field(0), DomainError);
  EXPECT_THROW(make_quadratic_field(1), DomainError);
  EXPECT_THROW(make_quadratic_field(-4), DomainError);
}

TEST(NormTrace, Examples) {
  auto Ki = make_quadratic_field(-1);
  auto [N1, T1] = norm_trace(Ki, E(1, 1));
  EXPECT_EQ(N1, 2);
  EXPECT_EQ(T1, 2);
  auto K10 = make_quadratic_field(10);
  auto [N2, T2] = norm_trace(K10, E(3, 1));
  EXPECT_EQ(N2, -1);
  EXPECT_EQ(T2, 6);
  auto Q = make_rational_field();
  auto [N3, T3] = norm_trace(Q, E(7, 0));
  EXPECT_EQ(N3, 7);
  EXPECT_EQ(T3, 7);
}

TEST(NormTrace, MultiplicativityRandom) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<i64> dist(-1000, 1000);
  for (i64 d : {-1, -3, -5, 2, 5, 10, 13, -23}) {
    auto K = make_quadratic_field(d);
    for (int i = 0; i < 1000; ++i) {
      FieldElement a = E(dist(rng), dist(rng)), b = E(dist(rng), dist(rng));
      EXPECT_EQ(norm(K, mul(K, a, b)), norm(K, a) * norm(K, b));
    }
  }
}

TEST(Arithmetic, InverseTimesSelfIsOne) {
  auto Q = make_rational_field();
  for (i64 v : {-7, -2, 1, 3, 12}) {
    EXPECT_EQ(mul(Q, inverse(Q, E(v, 0)), E(v, 0)), E(1, 0)) << v;
    EXPECT_EQ(divide(Q, E(1, 0), E(v, 0)), FieldElement(Rational(1) / v, Rational(0)));
  }
  for (i64 d : {-5, -1, 10}) {
    auto K = make_quadratic_field(d);
    for (auto e : {E(2, 1), E(-3, 5), E(7, 0)})
      EXPECT_EQ(mul(K, inverse(K, e), e), E(1, 0));
  }
}

TEST(NormTrace, AgreesWithEmbeddings) {
  // oracle: product and sum of floating embeddings
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<i64> dist(-50, 50);
  for (i64 d : {2, 3, 5, 10, 13}) {
    auto K = make_quadratic_field(d);
    long double w1 = K.t == 1 ? (1 + std::sqrt((long double)d)) / 2 : std::sqrt((long double)d);
    long double w2 = K.t == 1 ? (1 - std::sqrt((long double)d)) / 2 : -std::sqrt((long double)d);
    for (int i = 0; i < 200; ++i) {
      i64 x = dist(rng), y = dist(rng);
      auto [N, T] = norm_trace(K, E(x, y));
      long double s1 = x + y * w1, s2 = x + y * w2;
      EXPECT_NEAR(N.convert_to<long double>(), s1 * s2, 1e-6);
      EXPECT_NEAR(T.convert_to<long double>(), s1 + s2, 1e-9);
    }
  }
}

TEST(RealSigns, Examples) {
  auto Q = make_rational_field();
  EXPECT_EQ(real_signs(Q, E(-3, 0)), std::vector<int>({-1}));
  auto K2 = make_quadratic_field(2);
  EXPECT_EQ(real_signs(K2, E(1, -1)), std::vector<int>({-1, 1}));
  auto K5 = make_quadratic_field(-5);
  EXPECT_TRUE(real_signs(K5, E(2, 0)).empty());
  EXPECT_THROW(real_signs(K2, E(0, 0)), DomainError);
}

TEST(RealSigns, SignNormConsistency) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<i64> dist(-300, 300);
  for (i64 d : {2, 3, 5, 10, 13, 15}) {
    auto K = make_quadratic_field(d);
    for (int i = 0; i < 500; ++i) {
      FieldElement e = E(dist(rng), dist(rng));
      if (e.is_zero()) continue;
      auto s = real_signs(K, e);
      EXPECT_EQ(norm(K, e) > 0, s[0] == s[1]);
      // oracle: floating evaluation
      long double v0 = embed(K, e, 0), v1 = embed(K, e, 1);
      if (std::fabs(v0) > 1e-9) EXPECT_EQ(s[0], v0 > 0 ? 1 : -1);
      if (std::fabs(v1) > 1e-9) EXPECT_EQ(s[1], v1 > 0 ? 1 : -1);
    }
  }
}

TEST(Units, Torsion) {
  auto Ki = make_quadratic_field(-1);
  auto U = unit_group(Ki);
  std::set<FieldElement> got(U.torsion.begin(), U.torsion.end());
  std::set<FieldElement> want{E(1, 0), E(0, 1), E(-1, 0), E(0, -1)};
  EXPECT_EQ(got, want);
  EXPECT_FALSE(U.fundamental.has_value());
  EXPECT_EQ(U.regulator, 0);
  EXPECT_EQ(unit_group(make_quadratic_field(-5)).w(), 2);
  EXPECT_EQ(unit_group(make_quadratic_field(-3)).w(), 6);
  EXPECT_EQ(unit_group(make_rational_field()).w(), 2);
  for (i64 d : {-1, -3, -5, -7}) {
    auto K = make_quadratic_field(d);
    for (const auto& z : unit_group(K).torsion) {
      EXPECT_EQ(abs(norm(K, z)), 1);
      // finite order dividing 6 or 4
      EXPECT_TRUE(power(K, z, 12) == FieldElement(1));
    }
  }
}

TEST(Units, FundamentalExamples) {
  auto K2 = make_quadratic_field(2);
  EXPECT_EQ(*unit_group(K2).fundamental, E(1, 1));
  EXPECT_EQ(*unit_group(make_quadratic_field(10)).fundamental, E(3, 1));
  EXPECT_EQ(*unit_group(make_quadratic_field(5)).fundamental, E(0, 1));
  EXPECT_EQ(*unit_group(make_quadratic_field(3)).fundamental, E(2, 1));
  EXPECT_EQ(*unit_group(make_quadratic_field(13)).fundamental, E(1, 1));
}

TEST(Units, FundamentalMinimalBruteForce) {
  // oracle: solve x^2 + t x y - n y^2 = +-1 directly for 1 <= y <= 10^4
  for (i64 d = 2; d <= 80; ++d) {
    if (!is_squarefree(d)) continue;
    auto K = make_quadratic_field(d);
    auto U = unit_group(K);
    const FieldElement eps = *U.fundamental;
    EXPECT_EQ(abs(norm(K, eps)), 1);
    long double e1 = embed(K, eps, 0);
    EXPECT_GT(e1, 1);
    std::optional<FieldElement> first;
    for (i64 y = 1; y <= 10000 && !first; ++y) {
      for (i64 s : {1, -1}) {
        // x^2 + t y x - (n y^2 + s) = 0
        i128 disc = (i128)K.t * K.t * y * y + 4 * ((i128)K.n * y * y + s);
        if (disc < 0) continue;
        i64 r = isqrt((i64)disc);
        if ((i128)r * r != disc) continue;
        for (i64 sg : {1, -1}) {
          i64 num = -K.t * y + sg * r;
          if (num % 2) continue;
          FieldElement v = E(num / 2, y);
          long double v1 = embed(K, v, 0);
          if (v1 > 1 + 1e-12) {
            EXPECT_GE(v1, e1 * (1 - 1e-12)) << "d=" << d;
            if (!first || embed(K, *first, 0) > v1) first = v;
          }
        }
      }
    }
    if (first) EXPECT_EQ(*first, eps) << "d=" << d;
  }
}

TEST(Units, RegulatorDigits) {
  auto U = unit_group(make_quadratic_field(2));
  // asinh(1) = log(1 + sqrt 2)
  Real want("0.88137358701954302523260932497979230902816032826163541075329560865");
  EXPECT_LT(abs(U.regulator - want), Real("1e-50"));
}
