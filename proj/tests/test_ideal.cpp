#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "cmkms/ideal.hpp"

using namespace cmkms;

namespace {

FieldElement E(i64 x, i64 y = 0) { return FieldElement(Rational(x), Rational(y)); }

// Oracle: every (a,b,c) with c | a, c | b, 0 <= b < a, a*c <= X whose lattice
// Za + Z(b + c w) is closed under w. Membership is tested with plain integer
// arithmetic independent of the library.
std::map<i64, i64> sublattice_oracle(const FieldDescriptor& K, i64 X) {
  std::map<i64, i64> counts;
  auto member = [](i64 a, i64 b, i64 c, i64 x, i64 y) {
    if (y % c) return false;
    return (x - (y / c) * b) % a == 0;
  };
  if (K.is_rational()) {
    for (i64 a = 1; a <= X; ++a) counts[a]++;
    return counts;
  }
  for (i64 c = 1; c <= X; ++c)
    for (i64 a = c; a * c <= X; a += c)
      for (i64 b = 0; b < a; b += c) {
        // w * a = (0, a); w * (b + c w) = (n c, b + t c)
        if (!member(a, b, c, 0, a)) continue;
        if (!member(a, b, c, K.n * c, b + K.t * c)) continue;
        counts[a * c]++;
      }
  return counts;
}

// Oracle: narrow class number from cycles of reduced indefinite forms, or
// the number of reduced positive definite forms.
i64 forms_class_number(i64 D) {
  if (D < 0) {
    i64 h = 0;
    for (i64 a = 1; 3 * a * a <= -D; ++a)
      for (i64 b = -a + 1; b <= a; ++b) {
        if ((b * b - D) % (4 * a)) continue;
        i64 c = (b * b - D) / (4 * a);
        if (c < a) continue;
        if (c == a && b < 0) continue;
        if (gcd64(gcd64(a, b), c) != 1) continue;
        ++h;
      }
    return h;
  }
  long double sD = std::sqrt((long double)D);
  struct F { i64 a, b, c; bool operator<(const F& o) const {
    return std::tie(a, b, c) < std::tie(o.a, o.b, o.c); } };
  std::set<F> reduced;
  for (i64 b = 1; b < sD; ++b) {
    if ((b * b - D) % 4) continue;
    i64 ac = (b * b - D) / 4;
    for (i64 a = 1; a <= -ac; ++a) {
      if ((-ac) % a) continue;
      for (i64 sa : {1, -1}) {
        i64 A = sa * a, C = ac / A;
        if (!(std::fabs(sD - 2 * a) < b)) continue;
        if (gcd64(gcd64(A, b), C) != 1) continue;
        reduced.insert({A, b, C});
      }
    }
  }
  auto rho = [&](const F& f) {
    i64 c = f.c, ac = c < 0 ? -c : c;
    // r = -b mod 2c with sqrt(D) - 2|c| < r < sqrt(D)
    i64 r = mod_pos(-f.b, 2 * ac);
    while (r < sD - 2 * ac) r += 2 * ac;
    while (r > sD) r -= 2 * ac;
    return F{c, r, (r * r - D) / (4 * c)};
  };
  std::set<F> seen;
  i64 cycles = 0;
  for (const auto& f : reduced) {
    if (seen.count(f)) continue;
    ++cycles;
    F g = f;
    while (!seen.count(g)) {
      seen.insert(g);
      g = rho(g);
    }
  }
  return cycles;
}

}  // namespace

TEST(IdealHNF, FromGeneratorsExamples) {
  auto Ki = make_quadratic_field(-1);
  EXPECT_EQ(ideal_from_generators(Ki, {E(1, 1)}).norm(), 2);
  auto K10 = make_quadratic_field(10);
  IdealHNF P = ideal_from_generators(K10, {E(2), E(0, 1)});
  EXPECT_EQ(P.a, 2);
  EXPECT_EQ(P.b, 0);
  EXPECT_EQ(P.c, 1);
  EXPECT_EQ(P.norm(), 2);
  auto Q = make_rational_field();
  IdealHNF I = ideal_from_generators(Q, {E(6), E(10)});
  EXPECT_EQ(I.a, 2);
  EXPECT_THROW(ideal_from_generators(Ki, {E(0)}), DomainError);
}

TEST(IdealHNF, Fractional) {
  auto K = make_quadratic_field(-5);
  IdealHNF I = ideal_from_generators(K, {FieldElement(Rational(1, 2), Rational(0))});
  EXPECT_EQ(I.den, 2);
  EXPECT_EQ(I.norm(), Rational(1, 4));
  IdealHNF P = ideal_from_generators(K, {E(2), E(1, 1)});
  IdealHNF Pi = ideal_inverse(P);
  EXPECT_EQ(ideal_product(P, Pi), unit_ideal(K));
}

TEST(IdealHNF, UniquenessRandomGenerators) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<i64> dist(-20, 20);
  for (i64 d : {-5, 10, -1, 5}) {
    auto K = make_quadratic_field(d);
    IdealHNF target = ideal_product(factor_rational_prime(K, 3).primes_above[0].P,
                                    factor_rational_prime(K, 2).primes_above[0].P);
    IntElt u = target.basis(0), v = target.basis(1);
    for (int it = 0; it < 1000; ++it) {
      std::vector<FieldElement> gens;
      int extra = 1 + it % 3;
      for (int k = 0; k < extra; ++k) {
        i64 i = dist(rng), j = dist(rng);
        gens.push_back(E(i * u.x + j * v.x, i * u.y + j * v.y));
      }
      // a unimodular change of the basis keeps the module the same
      i64 q = dist(rng);
      gens.push_back(E(u.x + q * v.x, u.y + q * v.y));
      gens.push_back(E(v.x, v.y));
      std::shuffle(gens.begin(), gens.end(), rng);
      EXPECT_EQ(ideal_from_generators(K, gens), target);
    }
  }
}

TEST(IdealHNF, ProductExamples) {
  auto Ki = make_quadratic_field(-1);
  IdealHNF P = ideal_from_generators(Ki, {E(1, 1)});
  EXPECT_EQ(ideal_product(P, P), ideal_from_generators(Ki, {E(2)}));
  auto K10 = make_quadratic_field(10);
  IdealHNF Q = ideal_from_generators(K10, {E(2), E(0, 1)});
  EXPECT_EQ(ideal_product(Q, Q), ideal_from_generators(K10, {E(2)}));
  auto KQ = make_rational_field();
  EXPECT_EQ(ideal_product(ideal_from_generators(KQ, {E(2)}),
                          ideal_from_generators(KQ, {E(3)})),
            ideal_from_generators(KQ, {E(6)}));
  EXPECT_THROW(ideal_product(P, Q), DomainError);
}

TEST(IdealHNF, NormMultiplicativeExhaustive) {
  for (i64 d : {-1, -5, 10}) {
    auto K = make_quadratic_field(d);
    std::vector<IdealHNF> all;
    for (auto& [n, v] : enumerate_ideals(K, 50))
      for (auto& I : v) all.push_back(I);
    for (auto& I : all)
      for (auto& J : all) {
        IdealHNF P = ideal_product(I, J);
        EXPECT_EQ(P.norm(), I.norm() * J.norm());
        EXPECT_TRUE(closed_under_omega(P));
      }
  }
}

TEST(Enumerate, Examples) {
  auto Ki = make_quadratic_field(-1);
  auto m = enumerate_ideals(Ki, 5);
  std::map<i64, size_t> got;
  for (auto& [n, v] : m) got[n] = v.size();
  EXPECT_EQ(got, (std::map<i64, size_t>{{1, 1}, {2, 1}, {4, 1}, {5, 2}}));
  auto mq = enumerate_ideals(make_rational_field(), 4);
  EXPECT_EQ(mq.size(), 4u);
  IdealHNF P2 = ideal_from_generators(Ki, {E(1, 1)});
  auto mc = enumerate_ideals(Ki, 5, P2);
  std::map<i64, size_t> gotc;
  for (auto& [n, v] : mc) gotc[n] = v.size();
  EXPECT_EQ(gotc, (std::map<i64, size_t>{{1, 1}, {5, 2}}));
}

TEST(Enumerate, MatchesSublatticeOracle) {
  for (std::optional<i64> d : std::vector<std::optional<i64>>{
           std::nullopt, -1, -3, -5, 2, 5, 10, -23}) {
    auto K = make_field(d);
    const i64 X = 200;
    auto m = enumerate_ideals(K, X);
    std::map<i64, i64> got;
    for (auto& [n, v] : m) {
      got[n] = static_cast<i64>(v.size());
      std::set<std::tuple<i64, i64, i64>> uniq;
      for (auto& I : v) {
        EXPECT_EQ(I.int_norm(), n);
        EXPECT_TRUE(closed_under_omega(I));
        uniq.insert({I.a, I.b, I.c});
      }
      EXPECT_EQ(uniq.size(), v.size());
    }
    EXPECT_EQ(got, sublattice_oracle(K, X)) << K.name();
  }
}

TEST(PrimeSplitting, Examples) {
  auto Ki = make_quadratic_field(-1);
  auto s5 = factor_rational_prime(Ki, 5);
  EXPECT_EQ(s5.type, PrimeSplitting::Type::split);
  ASSERT_EQ(s5.primes_above.size(), 2u);
  EXPECT_EQ(s5.primes_above[0].norm, 5);
  auto s3 = factor_rational_prime(Ki, 3);
  EXPECT_EQ(s3.type, PrimeSplitting::Type::inert);
  EXPECT_EQ(s3.primes_above[0].norm, 9);
  EXPECT_EQ(factor_rational_prime(Ki, 2).type, PrimeSplitting::Type::ramified);
  EXPECT_THROW(factor_rational_prime(Ki, 9), DomainError);
}

TEST(PrimeSplitting, DegreeSumAndProduct) {
  for (std::optional<i64> d : std::vector<std::optional<i64>>{
           std::nullopt, -1, -5, 10, 5, -3}) {
    auto K = make_field(d);
    for (i64 p : primes_up_to(10000)) {
      auto S = factor_rational_prime(K, p);
      int sum = 0;
      IdealHNF prod = unit_ideal(K);
      for (auto& P : S.primes_above) {
        sum += P.e * P.f;
        prod = ideal_product(prod, ideal_power(P.P, P.e));
        if (p < 200) EXPECT_TRUE(closed_under_omega(P.P));
      }
      EXPECT_EQ(sum, K.degree());
      EXPECT_EQ(prod, ideal_from_generators(K, {E(p)})) << K.name() << " p=" << p;
      if (!K.is_rational()) {
        int k = kronecker(K.D, p);
        auto want = k == 1 ? PrimeSplitting::Type::split
                           : (k == -1 ? PrimeSplitting::Type::inert
                                      : PrimeSplitting::Type::ramified);
        EXPECT_EQ(S.type, want);
      }
    }
  }
}

TEST(Principal, Examples) {
  auto K5 = make_quadratic_field(-5);
  IdealHNF P = ideal_from_generators(K5, {E(2), E(1, 1)});
  EXPECT_EQ(is_principal(P).status, PrincipalResult::Status::not_principal);
  auto K10 = make_quadratic_field(10);
  IdealHNF Q = ideal_from_generators(K10, {E(2), E(0, 1)});
  EXPECT_EQ(is_principal(Q).status, PrincipalResult::Status::not_principal);
  auto r = is_principal(ideal_product(Q, Q));
  ASSERT_TRUE(r.principal());
  EXPECT_EQ(abs(norm(K10, r.generator)), 4);
  auto Ki = make_quadratic_field(-1);
  for (auto& [n, v] : enumerate_ideals(Ki, 100))
    for (auto& I : v) {
      auto g = is_principal(I);
      ASSERT_TRUE(g.principal());
      EXPECT_EQ(principal_ideal(Ki, g.generator), I);
    }
}

TEST(Principal, RealQuadraticAgainstBruteForce) {
  // oracle: x^2 + t x y - n y^2 = +-N with the ideal containing x + y w,
  // searched over a large box.
  for (i64 d : {2, 3, 6, 7, 10, 15, 79}) {
    auto K = make_quadratic_field(d);
    auto U = unit_group(K);
    for (auto& [n, v] : enumerate_ideals(K, 60))
      for (auto& I : v) {
        bool brute = false;
        for (i64 x = -400; x <= 400 && !brute; ++x)
          for (i64 y = -400; y <= 400; ++y) {
            IntElt e{x, y};
            i64 N = norm(K, e);
            if ((N == n || N == -n) && contains(I, e)) {
              brute = true;
              break;
            }
          }
        auto r = is_principal(I, U);
        EXPECT_EQ(r.principal(), brute) << "d=" << d << " " << to_string(I);
      }
  }
}

TEST(ClassGroup, Examples) {
  auto G5 = class_group(make_quadratic_field(-5));
  EXPECT_EQ(G5.presentation.cyclic_orders, std::vector<i64>({2}));
  EXPECT_EQ(class_group(make_quadratic_field(-1)).order(), 1);
  auto G10 = class_group(make_quadratic_field(10));
  EXPECT_EQ(G10.presentation.cyclic_orders, std::vector<i64>({2}));
  EXPECT_EQ(class_group(make_quadratic_field(-14)).presentation.cyclic_orders,
            std::vector<i64>({4}));
  EXPECT_EQ(class_group(make_quadratic_field(-21)).presentation.cyclic_orders,
            std::vector<i64>({2, 2}));
  EXPECT_EQ(class_group(make_quadratic_field(-65)).presentation.cyclic_orders,
            std::vector<i64>({2, 4}));
  EXPECT_EQ(class_group(make_quadratic_field(-23)).presentation.cyclic_orders,
            std::vector<i64>({3}));
  EXPECT_EQ(class_group(make_rational_field()).order(), 1);
}

TEST(ClassGroup, MatchesFormsOracle) {
  for (i64 d = -150; d <= 150; ++d) {
    if (d == 0 || d == 1 || !is_squarefree(d)) continue;
    auto K = make_quadratic_field(d);
    i64 h = class_group(K).order();
    i64 forms = forms_class_number(K.D);
    if (d < 0) {
      EXPECT_EQ(h, forms) << "d=" << d;
    } else {
      auto eps = *unit_group(K).fundamental;
      bool neg = norm(K, eps) == -1;
      EXPECT_EQ(neg ? h : 2 * h, forms) << "d=" << d;
    }
  }
}

TEST(ClassGroup, ClassOfIsMultiplicative) {
  for (i64 d : {-5, -14, -21, 10, 79}) {
    auto G = class_group(make_quadratic_field(d));
    auto ideals = enumerate_ideals(G.K, 40);
    std::vector<IdealHNF> all;
    for (auto& [n, v] : ideals)
      for (auto& I : v) all.push_back(I);
    for (size_t i = 0; i < all.size(); i += 3)
      for (size_t j = 0; j < all.size(); j += 5) {
        i64 ci = G.class_of(all[i]), cj = G.class_of(all[j]);
        EXPECT_EQ(G.class_of(ideal_product(all[i], all[j])),
                  G.presentation.combine(ci, cj));
      }
  }
}

TEST(IdealHNF, InverseOverQ) {
  auto Q = make_rational_field();
  IdealHNF I = ideal_from_generators(Q, {E(5)});
  EXPECT_EQ(ideal_product(I, ideal_inverse(I)), unit_ideal(Q));
  auto f = factor_ideal(ideal_from_generators(Q, {E(50)}));
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0].first.p, 2);
  EXPECT_EQ(f[1].second, 2);
}
