#include "cmkms/invariants.hpp"

#include <algorithm>

namespace cmkms {

CensusReport minimal_census(const SystemContext& sys, i64 X, size_t list_cap) {
  CensusReport r;
  r.label = sys.desc.label;
  r.X = X;
  r.units_trivial = sys.restricted.trivial();
  r.tor_order = sys.restricted.torsion_order;
  r.class_number = sys.cls.order();
  const i64 h = r.class_number;

  auto partials = build_partial_zetas(sys, X);
  DirichletSeries zKm = build_zeta(sys, ZetaKind::modulus, X);

  // components per class
  std::vector<i64> per_class(h, 0);
  for (i64 k = 0; k < h; ++k) {
    const IdealHNF& ak = sys.cls.representatives[k];
    if (r.units_trivial) {
      per_class[k] = 1;
      if (r.components.size() < list_cap) r.components.push_back({k, {}, 0});
      continue;
    }
    FixedPointSet F = fixed_points(toral_action(sys, ak));
    if (!F.finite) throw DomainError("infinite fixed-point set with nontrivial units");
    if (F.representatives_truncated) throw DomainError("fixed-point set too large to enumerate");
    r.fixed_count_per_class.push_back(to_i64(F.count));
    for (const auto& gamma : F.representatives)
      for (i64 t = 0; t < r.tor_order; ++t) {
        ++per_class[k];
        if (r.components.size() < list_cap) r.components.push_back({k, gamma, t});
      }
  }
  for (i64 c : per_class) r.enumerated_components += c;

  if (r.units_trivial) {
    r.closed_form_components = h;
    r.multiplier = 1;
  } else {
    r.fixed_count = r.fixed_count_per_class.at(0);  // class 0 is [R]
    for (i64 f : r.fixed_count_per_class)
      if (f != *r.fixed_count) r.solidarity = false;
    r.closed_form_components = r.tor_order * h * *r.fixed_count;
    r.multiplier = r.tor_order * *r.fixed_count;
    r.degenerate_limit = r.multiplier == 1;
  }

  // Z~ through the partition function: Z = |O| N^s zeta_kappa(s-1), |O| = 1
  r.summed_series = make_series(sys.K(), X, "summed_Z~");
  r.summed_series.shift = 1;
  for (i64 k = 0; k < h; ++k) {
    const i64 nmin = sys.cls.representatives[k].int_norm();
    ScaleRecovery rec = recover_scale(partition_function(partials[k], nmin, 1));
    if (rec.scale != nmin) r.scales_recovered = false;
    for (i64 n = 1; n <= rec.reduced.X() && n <= X; ++n)
      r.summed_series.a[n] =
          checked_add(r.summed_series.a[n], checked_mul(per_class[k], rec.reduced.a[n]));
    r.reduced_per_class.push_back(std::move(rec.reduced));
    r.residue_per_class.push_back(residue_estimate(partials[k]).at_X);
  }
  r.summed_matches = true;
  for (i64 n = 1; n <= X; ++n)
    if (r.summed_series.a[n] != r.multiplier * n * zKm.a[n]) {
      r.summed_matches = false;
      break;
    }
  r.limit_at_infinity = r.summed_series.a[1];
  return r;
}

namespace {

std::set<i64> primes_in_support(const DirichletSeries& z) {
  std::set<i64> s;
  for (i64 p : primes_up_to(z.X()))
    if (z.a[p] != 0) s.insert(p);
  return s;
}

InvariantRecord partition_route(const CensusReport& c, const FieldDescriptor& K) {
  InvariantRecord rec;
  const i64 L = c.limit_at_infinity;
  if (L <= 0 || c.enumerated_components % L != 0)
    throw DomainError("census limit does not divide the component count");
  rec.class_number = c.enumerated_components / L;
  rec.zeta_Km = make_series(K, c.X, "zeta_Km");
  for (i64 n = 1; n <= c.X; ++n) {
    i64 v = c.summed_series.a[n];
    if (v % (n * L) != 0) throw DomainError("summed series is not L * n * a_n");
    rec.zeta_Km.a[n] = v / (n * L);
  }
  if (L > 1) rec.tor_times_fixed = L;
  rec.ambiguous_limit = L == 1;
  // the state with lim Z~ = 1 lies over the trivial class
  int found = 0;
  for (const auto& z : c.reduced_per_class) {
    if (z.a[1] != 1) continue;
    ++found;
    rec.zeta_trivial = make_series(K, c.X, "zeta_trivial");
    for (i64 n = 1; n <= c.X; ++n) rec.zeta_trivial.a[n] = z.a[n] / n;
  }
  if (found != 1) throw DomainError("expected exactly one class with limit 1");
  rec.norm_prime_set = primes_in_support(rec.zeta_trivial);
  return rec;
}

InvariantRecord direct_route(const SystemContext& sys, i64 X) {
  const FieldDescriptor& K = sys.K();
  InvariantRecord rec;
  rec.class_number = sys.cls.order();
  rec.zeta_Km = build_zeta(sys, ZetaKind::modulus, X);
  if (!sys.restricted.trivial()) {
    FixedPointSet F = fixed_points(toral_action(sys, unit_ideal(K)), 0);
    rec.tor_times_fixed = sys.restricted.torsion_order * to_i64(F.count);
  }
  // trivial class by enumerating ideals and testing their classes
  rec.zeta_trivial = make_series(K, X, "zeta_trivial");
  for (const auto& [n, list] : enumerate_ideals(K, X, sys.m().m0))
    for (const auto& I : list)
      if (sys.class_of(I) == 0) ++rec.zeta_trivial.a[n];
  for (const auto& P : prime_ideals_up_to(K, X, sys.m().m0))
    if (P.f == 1 && P.norm == P.p && sys.class_of(P.P) == 0) rec.norm_prime_set.insert(P.p);
  return rec;
}

std::vector<std::string> diff_records(const InvariantRecord& a, const InvariantRecord& b,
                                      bool tolerate_limit_one) {
  std::vector<std::string> d;
  if (a.class_number != b.class_number)
    d.push_back("class_number " + std::to_string(a.class_number) + " vs " +
                std::to_string(b.class_number));
  const i64 X = std::min(a.zeta_Km.X(), b.zeta_Km.X());
  for (i64 n = 1; n <= X; ++n)
    if (a.zeta_Km.a[n] != b.zeta_Km.a[n]) {
      d.push_back("zeta_Km differs at n=" + std::to_string(n));
      break;
    }
  if (a.tor_times_fixed != b.tor_times_fixed) {
    bool limit_one = (!a.tor_times_fixed && b.tor_times_fixed == 1) ||
                     (!b.tor_times_fixed && a.tor_times_fixed == 1);
    if (!(tolerate_limit_one && limit_one)) {
      auto s = [](const std::optional<i64>& v) { return v ? std::to_string(*v) : "inf"; };
      d.push_back("tor_times_fixed " + s(a.tor_times_fixed) + " vs " + s(b.tor_times_fixed));
    }
  }
  const i64 Y = std::min(a.zeta_trivial.X(), b.zeta_trivial.X());
  for (i64 n = 1; n <= Y; ++n)
    if (a.zeta_trivial.a[n] != b.zeta_trivial.a[n]) {
      d.push_back("zeta_trivial differs at n=" + std::to_string(n));
      break;
    }
  if (a.norm_prime_set != b.norm_prime_set) d.push_back("norm_prime_set differs");
  return d;
}

}  // namespace

InvariantExtraction extract_invariants(const SystemContext& sys, i64 X) {
  InvariantExtraction out;
  out.census = minimal_census(sys, X);
  out.from_partition_functions = partition_route(out.census, sys.K());
  out.direct = direct_route(sys, X);
  out.disagreements = diff_records(out.from_partition_functions, out.direct, true);
  out.agree = out.disagreements.empty();
  if (out.from_partition_functions.ambiguous_limit && out.direct.tor_times_fixed == 1)
    out.from_partition_functions.tor_times_fixed.reset();
  else
    out.from_partition_functions.ambiguous_limit = false;
  if (!out.agree) {
    std::string msg = "invariant routes disagree:";
    for (const auto& s : out.disagreements) msg += " " + s + ";";
    throw DomainError(msg);
  }
  return out;
}

std::set<i64> kronecker_set(const SystemContext& sys, i64 bound) {
  std::set<i64> out;
  const auto& supp = sys.m().support_Q;
  for (const auto& P : prime_ideals_up_to(sys.K(), bound, sys.m().m0)) {
    if (P.norm != P.p) continue;
    if (std::binary_search(supp.begin(), supp.end(), P.p)) continue;
    if (sys.class_of(P.P) == 0) out.insert(P.p);
  }
  return out;
}

ComparisonReport compare_systems(const SystemContext& a, const SystemContext& b, i64 bound) {
  ComparisonReport r;
  r.bound = bound;
  const i64 X = std::min(a.desc.truncation, b.desc.truncation);
  if (bound > X)
    throw DomainError("insufficient truncation: bound " + std::to_string(bound) +
                      " exceeds X = " + std::to_string(X));
  DirichletSeries za = build_zeta(a, ZetaKind::modulus, X);
  DirichletSeries zb = build_zeta(b, ZetaKind::modulus, X);
  r.arithmetic = arithmetic_equivalence(za, zb, bound);

  auto ka = kronecker_set(a, bound), kb = kronecker_set(b, bound);
  std::set_difference(ka.begin(), ka.end(), kb.begin(), kb.end(),
                      std::back_inserter(r.kronecker_only_a));
  std::set_difference(kb.begin(), kb.end(), ka.begin(), ka.end(),
                      std::back_inserter(r.kronecker_only_b));

  r.class_number_a = a.cls.order();
  r.class_number_b = b.cls.order();
  r.class_numbers_equal = r.class_number_a == r.class_number_b;

  InvariantRecord ia = extract_invariants(a, bound).from_partition_functions;
  InvariantRecord ib = extract_invariants(b, bound).from_partition_functions;
  r.invariant_diffs = diff_records(ia, ib, false);

  r.all_checks_pass = r.arithmetic.equivalent && r.kronecker_only_a.empty() &&
                      r.kronecker_only_b.empty() && r.class_numbers_equal &&
                      r.invariant_diffs.empty();
  r.note =
      "necessary conditions for an equivariant isomorphism only; passing does not certify one";
  return r;
}

}  // namespace cmkms
