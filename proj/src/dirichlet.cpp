#include "cmkms/dirichlet.hpp"

#include <algorithm>
#include <numeric>

#include <boost/math/constants/constants.hpp>

namespace cmkms {

std::vector<i64> DirichletSeries::support() const {
  std::vector<i64> s;
  for (i64 n = 1; n <= X(); ++n)
    if (a[n] != 0) s.push_back(n);
  return s;
}

i64 DirichletSeries::total() const {
  i64 t = 0;
  for (i64 n = 1; n <= X(); ++n) t = checked_add(t, a[n]);
  return t;
}

DirichletSeries make_series(const FieldDescriptor& K, i64 X, std::string label) {
  if (X < 1) throw DomainError("series truncation must be >= 1");
  DirichletSeries z;
  z.K = K;
  z.a.assign(X + 1, 0);
  z.label = std::move(label);
  z.envelope = K.is_rational() ? DirichletSeries::Envelope::unit
                               : DirichletSeries::Envelope::divisor;
  return z;
}

std::string to_string(ZetaKind k) {
  switch (k) {
    case ZetaKind::partial: return "partial";
    case ZetaKind::modulus: return "modulus";
    case ZetaKind::trivial_class: return "trivial_class";
    case ZetaKind::dedekind: return "dedekind";
  }
  return "?";
}

namespace {

struct PrimeEntry {
  i64 norm;
  i64 cls;
};

// Visits every product of the primes with norm <= X, passing (norm, class).
template <class Combine, class Visit>
void walk_ideals(const std::vector<PrimeEntry>& P, i64 X, Combine&& combine,
                 Visit&& visit) {
  struct Frame {
    i64 norm;
    i64 cls;
    size_t next;
  };
  visit(1, 0);
  std::vector<Frame> stack{{1, 0, 0}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    for (size_t j = f.next; j < P.size(); ++j) {
      if (static_cast<i128>(f.norm) * P[j].norm > X) break;
      i64 n = f.norm;
      i64 c = f.cls;
      while (static_cast<i128>(n) * P[j].norm <= X) {
        n *= P[j].norm;
        c = combine(c, P[j].cls);
        visit(n, c);
        stack.push_back({n, c, j + 1});
      }
    }
  }
}

std::vector<PrimeEntry> prime_entries(const FieldDescriptor& K, i64 X,
                                      const std::optional<IdealHNF>& avoid,
                                      const SystemContext* sys) {
  std::vector<PrimeEntry> out;
  for (const auto& P : prime_ideals_up_to(K, X, avoid))
    out.push_back({P.norm, sys ? sys->class_of(P.P) : 0});
  return out;
}

std::optional<IdealHNF> modulus_avoid(const SystemContext& sys) {
  if (sys.m().m0.int_norm() == 1) return std::nullopt;
  return sys.m().m0;
}

}  // namespace

std::vector<DirichletSeries> build_partial_zetas(const SystemContext& sys, i64 X) {
  const AbelianPresentation& G = sys.cls.group;
  const i64 h = G.order();
  if (static_cast<double>(h) * static_cast<double>(X) > 2e8)
    throw DomainError("build_partial_zetas: class count times truncation too large");
  std::vector<DirichletSeries> out;
  for (i64 c = 0; c < h; ++c) {
    out.push_back(make_series(sys.K(), X, "partial[" + std::to_string(c) + "]"));
    out.back().excluded_primes = sys.m().support_Q;
  }
  if (X < 1) return out;
  auto primes = prime_entries(sys.K(), X, modulus_avoid(sys), &sys);
  std::vector<i64> table;
  if (h <= 2048) {
    table.resize(h * h);
    for (i64 i = 0; i < h; ++i)
      for (i64 j = 0; j < h; ++j) table[i * h + j] = G.combine(i, j);
  }
  auto combine = [&](i64 x, i64 y) {
    return table.empty() ? G.combine(x, y) : table[x * h + y];
  };
  walk_ideals(primes, X, combine, [&](i64 n, i64 c) { ++out[c].a[n]; });
  return out;
}

DirichletSeries dedekind_zeta(const FieldDescriptor& K, i64 X) {
  DirichletSeries z = make_series(K, X, "dedekind");
  z.excluded_primes = std::vector<i64>{};
  auto primes = prime_entries(K, X, std::nullopt, nullptr);
  walk_ideals(primes, X, [](i64, i64) { return i64{0}; },
              [&](i64 n, i64) { ++z.a[n]; });
  return z;
}

DirichletSeries build_zeta(const SystemContext& sys, ZetaKind which, i64 X, i64 cls) {
  switch (which) {
    case ZetaKind::dedekind:
      return dedekind_zeta(sys.K(), X);
    case ZetaKind::modulus: {
      DirichletSeries z = make_series(sys.K(), X, "modulus");
      z.excluded_primes = sys.m().support_Q;
      auto primes = prime_entries(sys.K(), X, modulus_avoid(sys), nullptr);
      walk_ideals(primes, X, [](i64, i64) { return i64{0}; },
                  [&](i64 n, i64) { ++z.a[n]; });
      return z;
    }
    case ZetaKind::trivial_class:
    case ZetaKind::partial: {
      i64 c = which == ZetaKind::trivial_class ? 0 : cls;
      if (c < 0 || c >= sys.cls.order()) throw DomainError("build_zeta: no such class");
      auto all = build_partial_zetas(sys, X);
      DirichletSeries z = std::move(all[c]);
      z.label = which == ZetaKind::trivial_class ? "trivial_class" : z.label;
      return z;
    }
  }
  throw DomainError("build_zeta: unknown kind");
}

DirichletSeries shifted(const DirichletSeries& z) {
  DirichletSeries s = z;
  for (i64 n = 1; n <= z.X(); ++n) s.a[n] = checked_mul(z.a[n], n);
  s.shift = z.shift + 1;
  s.label = z.label + "(s-1)";
  return s;
}

Real tail_bound(const DirichletSeries& z, const Real& s) {
  const Real sigma = s - z.shift;
  if (sigma <= 1) throw DomainError("evaluate: s at or below the abscissa");
  const Real X = z.X();
  const Real XP = pow(X, 1 - sigma);
  if (z.envelope == DirichletSeries::Envelope::unit) return XP / (sigma - 1);
  const Real d = sigma - 1;
  return sigma * XP * (log(X) / d + 1 / (d * d) + 1 / d);
}

SeriesValue evaluate(const DirichletSeries& z, const Real& s) {
  SeriesValue v;
  v.X = z.X();
  v.tail_bound = tail_bound(z, s);
  // n^{-s} is completely multiplicative: exp/log only at primes
  const i64 X = z.X();
  std::vector<i64> spf(X + 1, 0);
  std::vector<Real> pw(X + 1);
  pw[1] = 1;
  Real sum = Real(z.a[1]);
  for (i64 n = 2; n <= X; ++n) {
    if (spf[n] == 0) {
      for (i64 k = n; k <= X; k += n)
        if (spf[k] == 0) spf[k] = n;
      pw[n] = exp(-s * log(Real(n)));
    } else {
      pw[n] = pw[spf[n]] * pw[n / spf[n]];
    }
    if (z.a[n] != 0) sum += Real(z.a[n]) * pw[n];
  }
  v.value = sum;
  return v;
}

SeriesValue evaluate(const ScaledSeries& z, const Real& s) {
  SeriesValue v = evaluate(z.base, s);
  Real f = Real(z.multiplier) * pow(Real(z.scale), s);
  v.value *= f;
  v.tail_bound *= f;
  return v;
}

Rational evaluate_exact(const DirichletSeries& z, int s) {
  if (s < 0) throw DomainError("evaluate_exact: s must be >= 0");
  BigInt L = 1;
  for (i64 n : z.support()) L = lcm(L, BigInt(n));
  L = pow(L, s);
  BigInt num = 0;
  for (i64 n : z.support()) num += BigInt(z.a[n]) * (L / pow(BigInt(n), s));
  return Rational(num, L);
}

ResidueEstimate residue_estimate(const DirichletSeries& z) {
  ResidueEstimate r;
  r.X = z.X();
  const i64 half = std::max<i64>(z.X() / 2, 1);
  i64 A = 0;
  for (i64 n = 1; n <= z.X(); ++n) {
    A += z.a[n];
    if (n == half) r.at_half_X = static_cast<double>(A) / static_cast<double>(half);
  }
  r.at_X = static_cast<double>(A) / static_cast<double>(z.X());
  return r;
}

ResidueFormula residue_formula(const SystemContext& sys) {
  const FieldDescriptor& K = sys.K();
  const ResidueInvariants& inv = sys.cls.invariants;
  ResidueFormula R;
  R.w_m = inv.w_m;
  R.w_K = inv.w_K;
  R.gamma_bar = inv.gamma_bar;
  R.unit_index = inv.unit_index;
  const Real pi = boost::math::constants::pi<Real>();
  // rank 0: the regulator is the empty determinant
  Real reg = sys.units.fundamental ? sys.units.regulator : Real(1);
  Real num = Real(inv.gamma_bar) * pow(Real(2), K.real_places) *
             pow(2 * pi, K.complex_places) * reg * Real(inv.unit_index);
  Real den = Real(sys.m().m0.int_norm()) * pow(Real(2), sys.m().r0()) *
             sqrt(Real(K.D < 0 ? -K.D : K.D));
  R.with_w_m = num / (den * inv.w_m);
  R.with_w_K = num / (den * inv.w_K);
  return R;
}

ScaleRecovery recover_scale(const ScaledSeries& z) {
  auto supp = z.base.support();
  if (supp.empty()) throw DomainError("recover_scale: empty series");
  if (z.scale < 1 || z.multiplier < 1) throw DomainError("recover_scale: bad scale");
  i64 g = 0;
  for (i64 n : supp) g = gcd64(g, n);
  ScaleRecovery r;
  r.scale = z.scale / gcd64(z.scale, g);
  const i64 X2 = static_cast<i64>(static_cast<i128>(r.scale) * z.base.X() / z.scale);
  r.reduced = make_series(z.base.K, std::max<i64>(X2, 1), z.base.label + "~");
  r.reduced.envelope = z.base.envelope;
  r.reduced.shift = z.base.shift;
  for (i64 n : supp) {
    i64 m = static_cast<i64>(static_cast<i128>(r.scale) * n / z.scale);
    r.reduced.a[m] = checked_mul(z.multiplier, z.base.a[n]);
  }
  return r;
}

std::map<Rational, i64> exponent_terms(const ScaledSeries& z) {
  std::map<Rational, i64> out;
  for (i64 n : z.base.support())
    out[Rational(n, z.scale)] = checked_mul(z.multiplier, z.base.a[n]);
  return out;
}

ScaledSeries rescale(const ScaleRecovery& r) {
  ScaledSeries z;
  z.scale = r.scale;
  z.multiplier = 1;
  z.base = r.reduced;
  return z;
}

std::map<int, i64> splitting_deconvolution(const std::vector<i64>& a) {
  if (a.empty() || a[0] != 1) throw DomainError("deconvolution: a_{p^0} must be 1");
  const int F = static_cast<int>(a.size()) - 1;
  std::vector<i64> C = a;
  std::map<int, i64> b;
  for (int f = 1; f <= F; ++f) {
    i64 bf = C[f];
    if (bf < 0) throw DomainError("deconvolution: negative multiplicity, not an Euler factor");
    if (bf == 0) continue;
    b[f] = bf;
    for (i64 r = 0; r < bf; ++r)
      for (int k = F; k >= f; --k) C[k] -= C[k - f];
  }
  for (int k = 1; k <= F; ++k)
    if (C[k] != 0) throw DomainError("deconvolution: reconvolution mismatch");
  return b;
}

std::vector<i64> local_coefficients(const DirichletSeries& z, i64 p) {
  std::vector<i64> out{z[1]};
  for (i64 q = p; q <= z.X(); q *= p) {
    out.push_back(z[q]);
    if (q > z.X() / p) break;
  }
  return out;
}

namespace {

bool excluded_in(const DirichletSeries& z, i64 p) {
  if (z.excluded_primes)
    return std::find(z.excluded_primes->begin(), z.excluded_primes->end(), p) !=
           z.excluded_primes->end();
  // without a known support, p is excluded when no power of it occurs; this
  // needs p^2 <= X to tell it apart from an inert prime
  auto loc = local_coefficients(z, p);
  if (loc.size() <= 2) return false;
  return std::all_of(loc.begin() + 1, loc.end(), [](i64 v) { return v == 0; });
}

}  // namespace

EquivalenceVerdict arithmetic_equivalence(const DirichletSeries& zK,
                                          const DirichletSeries& zL, i64 bound) {
  if (bound > zK.X() || bound > zL.X())
    throw DomainError("arithmetic_equivalence: bound exceeds truncation");
  EquivalenceVerdict v;
  v.bound = bound;
  for (i64 p : primes_up_to(bound)) {
    if (excluded_in(zK, p) || excluded_in(zL, p)) {
      v.excluded.push_back(p);
      continue;
    }
    if (splitting_deconvolution(local_coefficients(zK, p)) !=
        splitting_deconvolution(local_coefficients(zL, p))) {
      v.equivalent = false;
      v.witness = p;
      return v;
    }
  }
  return v;
}

std::set<i64> support_from_zeta(const DirichletSeries& z) {
  if (!z.K.is_rational())
    throw DomainError("support_from_zeta: only valid for K = Q (inert primes break it)");
  std::set<i64> out;
  for (i64 p : primes_up_to(z.X())) {
    for (i64 q = p; q <= z.X(); q *= p) {
      if (z.a[q] == 0) {
        out.insert(p);
        break;
      }
      if (q > z.X() / p) break;
    }
  }
  return out;
}

}  // namespace cmkms
