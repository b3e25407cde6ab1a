#include <gtest/gtest.h>

#include <random>

#include "cmkms/toral.hpp"

using namespace cmkms;

namespace {

FieldElement E(i64 x, i64 y = 0) { return FieldElement(Rational(x), Rational(y)); }

SystemContext make_system(std::optional<i64> d, std::vector<FieldElement> m0_gens,
                          std::vector<int> m_inf, bool gamma_all) {
  SystemDescriptor desc;
  desc.field = make_field(d);
  desc.modulus = make_modulus(ideal_from_generators(desc.field, m0_gens), m_inf);
  desc.gamma_all = gamma_all;
  return build_system(desc);
}

// Counts p in (Z/N)^n fixed by every generator, straight from the matrices.
i64 brute_fixed(const ToralAction& act, i64 N) {
  const int n = act.dim();
  i64 total = 1;
  for (int i = 0; i < n; ++i) total *= N;
  i64 count = 0;
  for (i64 c = 0; c < total; ++c) {
    std::vector<i64> p(n);
    i64 t = c;
    for (int i = 0; i < n; ++i) {
      p[i] = t % N;
      t /= N;
    }
    bool fixed = true;
    for (const auto& A : act.generator_matrices) {
      for (int i = 0; i < n && fixed; ++i) {
        BigInt s = 0;
        for (int j = 0; j < n; ++j) s += A(i, j) * p[j];
        s -= p[i];
        if (s % N != 0) fixed = false;
      }
    }
    if (fixed) ++count;
  }
  return count;
}

IntMat apply_power(const IntMat& A, i64 e) {
  IntMat R = IntMat::Identity(A.rows(), A.cols());
  for (i64 k = 0; k < e; ++k) R = exact_product(R, A);
  return R;
}

bool fixes(const IntMat& A, const std::vector<i64>& p, i64 N) {
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    BigInt s = 0;
    for (Eigen::Index j = 0; j < A.cols(); ++j) s += A(i, j) * p[j];
    s -= p[i];
    if (s % N != 0) return false;
  }
  return true;
}

}  // namespace

TEST(Toral, ActionMatrixExamples) {
  auto Ki = make_quadratic_field(-1);
  IntMat A = action_matrix(E(0, 1), unit_ideal(Ki));
  EXPECT_EQ(A(0, 0), 0);
  EXPECT_EQ(A(0, 1), -1);
  EXPECT_EQ(A(1, 0), 1);
  EXPECT_EQ(A(1, 1), 0);
  auto K10 = make_quadratic_field(10);
  A = action_matrix(E(3, 1), unit_ideal(K10));
  EXPECT_EQ(A(0, 0), 3);
  EXPECT_EQ(A(0, 1), 10);
  EXPECT_EQ(A(1, 0), 1);
  EXPECT_EQ(A(1, 1), 3);
  EXPECT_THROW(action_matrix(E(2), unit_ideal(K10)), DomainError);
  auto Q = make_rational_field();
  A = action_matrix(E(-1), ideal_from_generators(Q, {E(7)}));
  EXPECT_EQ(A(0, 0), -1);
}

TEST(Toral, DeterminantIsNormOfUMinusOne) {
  std::mt19937_64 rng(11);
  for (i64 d : {2, 3, 5, 6, 7, 10, 13, 15, 21, 29}) {
    auto K = make_quadratic_field(d);
    UnitData U = unit_group(K);
    FieldElement eps = *U.fundamental;
    for (int trial = 0; trial < 20; ++trial) {
      std::uniform_int_distribution<i64> dist(-12, 12);
      FieldElement g = E(dist(rng), dist(rng));
      if (g.is_zero()) continue;
      IdealHNF x = ideal_from_generators(K, {g, E(dist(rng) | 1, dist(rng))});
      for (i64 e : {1, 2, -1}) {
        FieldElement u = power(K, eps, e);
        IntMat A = action_matrix(u, x);
        BigInt det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
        EXPECT_EQ(abs(Rational(det)), abs(norm(K, u)));
        BigInt dm = (A(0, 0) - 1) * (A(1, 1) - 1) - A(0, 1) * A(1, 0);
        EXPECT_EQ(abs(Rational(dm)), abs(norm(K, sub(u, E(1)))));
      }
    }
  }
}

TEST(Toral, FixedPointExamples) {
  auto Ki = make_quadratic_field(-1);
  auto act = make_toral_action(unit_ideal(Ki), E(0, 1), 4, std::nullopt);
  auto F = fixed_points(act);
  ASSERT_TRUE(F.finite);
  EXPECT_EQ(F.count, 2);
  ASSERT_EQ(F.representatives.size(), 2u);
  EXPECT_EQ(F.representatives[0], (TorusPoint{Rational(0), Rational(0)}));
  EXPECT_EQ(F.representatives[1], (TorusPoint{Rational(1, 2), Rational(1, 2)}));

  auto K10 = make_quadratic_field(10);
  act = make_toral_action(unit_ideal(K10), E(1), 1, E(3, 1));
  F = fixed_points(act);
  ASSERT_TRUE(F.finite);
  EXPECT_EQ(F.count, 6);

  act = make_toral_action(unit_ideal(K10), E(-1), 2, std::nullopt);
  F = fixed_points(act);
  EXPECT_EQ(F.count, 4);
  EXPECT_EQ(F.group_invariants, std::vector<i64>({2, 2}));

  // the full unit group {+-1} x <eps> fixes only the 2-torsion points fixed by eps
  act = make_toral_action(unit_ideal(K10), E(-1), 2, E(3, 1));
  F = fixed_points(act);
  EXPECT_EQ(F.count, 2);

  act = make_toral_action(unit_ideal(K10), E(1), 1, std::nullopt);
  EXPECT_FALSE(fixed_points(act).finite);
  // over Q, -1 fixes 0 and 1/2
  auto Q = make_rational_field();
  act = make_toral_action(unit_ideal(Q), E(-1), 2, std::nullopt);
  F = fixed_points(act);
  EXPECT_EQ(F.count, 2);
}

TEST(Toral, FixedPointsMatchBruteForce) {
  for (i64 d : {-1, -3, -5, 2, 3, 5, 6, 10, 13, 15}) {
    auto K = make_quadratic_field(d);
    UnitData U = unit_group(K);
    std::optional<FieldElement> tor;
    i64 w = U.w();
    if (w > 1) tor = U.torsion[1];
    for (const auto& gens : std::vector<std::vector<FieldElement>>{
             {E(1)}, {E(3)}, {E(2), E(0, 1)}, {E(5), E(1, 1)}}) {
      IdealHNF x = ideal_from_generators(K, gens);
      std::vector<ToralAction> acts;
      if (w > 1) {
        // the torsion generator is the element of maximal order
        FieldElement z = U.torsion.back();
        acts.push_back(make_toral_action(x, z, w, std::nullopt));
      }
      if (U.fundamental) {
        acts.push_back(make_toral_action(x, E(1), 1, *U.fundamental));
        acts.push_back(make_toral_action(x, E(1), 1, power(K, *U.fundamental, 2)));
        acts.push_back(make_toral_action(x, E(-1), 2, *U.fundamental));
      }
      for (const auto& act : acts) {
        auto F = fixed_points(act);
        ASSERT_TRUE(F.finite);
        i64 e = 1;
        for (i64 v : F.group_invariants) e = std::max(e, v);
        ASSERT_LE(e, 200);
        EXPECT_EQ(F.count, brute_fixed(act, e)) << K.name() << " " << to_string(x);
        EXPECT_EQ(F.count, brute_fixed(act, 2 * e));
        for (const auto& p : F.representatives) {
          std::vector<i64> num;
          for (const auto& q : p) {
            ASSERT_TRUE(is_integer(q * e));
            num.push_back(to_i64(q * e));
          }
          for (const auto& A : act.generator_matrices) EXPECT_TRUE(fixes(A, num, e));
        }
      }
    }
  }
}

TEST(Toral, OrbitExamples) {
  auto Ki = make_quadratic_field(-1);
  auto act = make_toral_action(unit_ideal(Ki), E(0, 1), 4, std::nullopt);
  auto orbits = finite_orbits(act, 2);
  ASSERT_EQ(orbits.size(), 3u);
  std::multiset<i64> sizes;
  for (const auto& O : orbits) sizes.insert(O.size());
  EXPECT_EQ(sizes, (std::multiset<i64>{1, 1, 2}));
  EXPECT_EQ(orbits[0].isotropy.torsion_step, 1);
  EXPECT_EQ(orbits[1].points,
            (std::vector<std::vector<i64>>{{0, 1}, {1, 0}}));
  EXPECT_EQ(orbits[1].isotropy.torsion_step, 2);
  EXPECT_TRUE(orbits[1].isotropy.contains(2, 0));
  EXPECT_FALSE(orbits[1].isotropy.contains(1, 0));

  auto census = orbit_size_census(act, 6);
  EXPECT_EQ(census, (std::set<i64>{1, 2, 4}));

  auto trivial = make_toral_action(unit_ideal(Ki), E(1), 1, std::nullopt);
  EXPECT_EQ(finite_orbits(trivial, 3).size(), 9u);
}

TEST(Toral, OrbitStabilizerAndIsotropy) {
  for (i64 d : {-1, -3, 2, 5, 10}) {
    auto K = make_quadratic_field(d);
    UnitData U = unit_group(K);
    std::optional<FieldElement> fr = U.fundamental;
    FieldElement z = U.torsion.back();
    auto act = make_toral_action(unit_ideal(K), z, U.w(), fr);
    for (i64 N : {2, 3, 5, 6, 8}) {
      auto orbits = finite_orbits(act, N);
      i64 total = 0;
      for (const auto& O : orbits) {
        total += O.size();
        EXPECT_EQ(O.isotropy.index(), O.size()) << K.name() << " N=" << N;
        // membership against the matrices themselves
        const IntMat* T = act.torsion_matrix();
        const IntMat* F = act.free_matrix();
        for (i64 i = 0; i < U.w(); ++i)
          for (i64 j = 0; j <= (fr ? 6 : 0); ++j) {
            IntMat M = IntMat::Identity(2, 2);
            if (T) M = apply_power(*T, i);
            if (F) M = exact_product(apply_power(*F, j), M);
            EXPECT_EQ(fixes(M, O.points[0], N), O.isotropy.contains(i, j))
                << K.name() << " N=" << N << " i=" << i << " j=" << j;
          }
      }
      EXPECT_EQ(total, N * N);
    }
  }
}

TEST(Toral, SizeOneOrbitsAreFixedPoints) {
  for (i64 d : {-1, -3, 2, 10}) {
    auto K = make_quadratic_field(d);
    UnitData U = unit_group(K);
    auto act = make_toral_action(unit_ideal(K), U.torsion.back(), U.w(), U.fundamental);
    auto F = fixed_points(act);
    ASSERT_TRUE(F.finite);
    i64 e = 1;
    for (i64 v : F.group_invariants) e = std::max(e, v);
    i64 ones = 0;
    for (const auto& O : finite_orbits(act, e))
      if (O.size() == 1) ++ones;
    EXPECT_EQ(BigInt(ones), F.count) << K.name();
  }
}

TEST(Toral, CensusDependsOnlyOnClass) {
  auto S = make_system(10, {E(1)}, {}, true);
  ASSERT_GE(S.cls.order(), 2);
  for (const auto& rep : S.cls.representatives) {
    auto base = orbit_size_census(toral_action(S, rep), 8);
    auto F0 = fixed_points(toral_action(S, rep));
    for (const auto& g : {E(3), E(1, 1), E(7, 2)}) {
      IdealHNF y = ideal_scale(rep, g);
      ASSERT_EQ(S.class_of(y), S.class_of(rep));
      EXPECT_EQ(orbit_size_census(toral_action(S, y), 8), base);
      EXPECT_EQ(fixed_points(toral_action(S, y)).count, F0.count);
    }
  }
}

TEST(Toral, TraceFromOrbit) {
  auto Ki = make_quadratic_field(-1);
  auto act = make_toral_action(unit_ideal(Ki), E(0, 1), 4, std::nullopt);
  auto O = orbit_of(act, {1, 0}, 2);
  ASSERT_EQ(O.size(), 2);
  Character triv;
  auto v = trace_from_orbit(O, triv, {0, 0}, 0, 0);
  EXPECT_NEAR(v.real(), 1.0, 1e-12);
  EXPECT_NEAR(v.imag(), 0.0, 1e-12);
  // r = 1: (e^{i pi} + e^0)/2 = 0
  v = trace_from_orbit(O, triv, {1, 0}, 0, 0);
  EXPECT_NEAR(std::abs(v), 0.0, 1e-12);
  v = trace_from_orbit(O, triv, {1, 1}, 0, 0);
  EXPECT_NEAR(v.real(), -1.0, 1e-12);
  // g = i is not in the isotropy <i^2>
  EXPECT_NEAR(std::abs(trace_from_orbit(O, triv, {0, 0}, 1, 0)), 0.0, 1e-12);
  Character sgn;
  sgn.theta_torsion = Rational(1, 2);
  v = trace_from_orbit(O, sgn, {0, 0}, 2, 0);
  EXPECT_NEAR(v.real(), -1.0, 1e-12);
  Character bad;
  bad.theta_torsion = Rational(1, 3);
  EXPECT_FALSE(character_valid(O.isotropy, bad));
  EXPECT_THROW(trace_from_orbit(O, bad, {0, 0}, 0, 0), DomainError);

  // positive-definite on the diagonal and bounded by 1
  auto K10 = make_quadratic_field(10);
  auto act10 = make_toral_action(unit_ideal(K10), E(-1), 2, E(3, 1));
  for (const auto& orb : finite_orbits(act10, 5)) {
    for (i64 r0 = 0; r0 < 5; ++r0)
      for (i64 r1 = 0; r1 < 5; ++r1)
        EXPECT_LE(std::abs(trace_from_orbit(orb, triv, {r0, r1}, 0, 0)), 1.0 + 1e-12);
  }

  auto S = make_system(-1, {E(1)}, {}, true);
  auto actS = toral_action(S, unit_ideal(S.K()));
  auto OS = orbit_of(actS, {1, 1}, 2);
  EXPECT_EQ(OS.size(), 1);
  v = trace_from_orbit(S, unit_ideal(S.K()), OS, triv, IntElt{1, 0}, E(0, 1));
  EXPECT_NEAR(v.real(), -1.0, 1e-12);
  EXPECT_THROW(trace_from_orbit(S, unit_ideal(S.K()), OS, triv, IntElt{1, 0}, E(2)),
               DomainError);
}
