#include "cmkms/congruence.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace cmkms {

namespace {

// Canonical box representative of (x + y w) modulo an integral ideal.
IntElt reduce_big(const IdealHNF& m0, const BigInt& x, const BigInt& y) {
  if (m0.K.is_rational()) {
    BigInt r = x % m0.a;
    if (r < 0) r += m0.a;
    return {to_i64(r), 0};
  }
  BigInt q = y / m0.c;
  BigInt yr = y - q * m0.c;
  if (yr < 0) {
    yr += m0.c;
    q -= 1;
  }
  BigInt xr = (x - q * m0.b) % m0.a;
  if (xr < 0) xr += m0.a;
  return {to_i64(xr), to_i64(yr)};
}

i64 box_index(const IdealHNF& m0, const IntElt& r) { return r.x + m0.a * r.y; }

bool is_integral_elt(const FieldElement& a) {
  return is_integer(a.x) && is_integer(a.y);
}

// Integral ideal {r in R : r t in R} for t in K^*.
IdealHNF denominator_ideal(const FieldDescriptor& K, const FieldElement& t) {
  BigInt D = lcm(rat_den(t.x), rat_den(t.y));
  if (K.is_rational()) return ideal_from_generators(K, {FieldElement(Rational(D), Rational(0))});
  BigInt p1 = rat_num(t.x * Rational(D)), p2 = rat_num(t.y * Rational(D));
  MatX<BigInt> M(2, 2);
  M << p1, p2 * K.n, p2, p1 + p2 * K.t;
  SmithForm<BigInt> S = smith_normal_form(M);
  std::vector<FieldElement> gens;
  for (int i = 0; i < 2; ++i) {
    BigInt s = S.D(i, i);
    BigInt f = D / gcd(D, s);
    gens.push_back(FieldElement(Rational(S.V(0, i) * f), Rational(S.V(1, i) * f)));
  }
  return ideal_from_generators(K, gens);
}

// Some element of x (integral) prime to every P | m0, by a small box search.
IntElt coprime_element(const IdealHNF& x, const Modulus& m) {
  for (i64 B = 2; B <= 1 << 12; B *= 2)
    for (i64 j = 0; j < B; ++j)
      for (i64 i = -B; i <= B; ++i) {
        IntElt e{checked_add(checked_mul(i, x.a), checked_mul(j, x.b)),
                 checked_mul(j, x.c)};
        if (e.x == 0 && e.y == 0) continue;
        if (coprime_to_modulus(m, e)) return e;
      }
  throw DomainError("no element prime to the modulus found in " + to_string(x));
}

}  // namespace

Modulus make_modulus(const IdealHNF& m0, std::vector<int> m_inf) {
  if (!m0.is_integral()) throw DomainError("m0 must be an integral ideal");
  std::sort(m_inf.begin(), m_inf.end());
  if (std::adjacent_find(m_inf.begin(), m_inf.end()) != m_inf.end())
    throw DomainError("m_inf lists a real place twice");
  for (int v : m_inf)
    if (v < 0 || v >= m0.K.real_places)
      throw DomainError("m_inf refers to a real place the field does not have");
  Modulus m;
  m.m0 = m0;
  m.m_inf = std::move(m_inf);
  m.primes = factor_ideal(m0);
  std::set<i64> ps;
  for (const auto& [P, e] : m.primes) ps.insert(P.p);
  m.support_Q.assign(ps.begin(), ps.end());
  return m;
}

bool coprime_to_modulus(const Modulus& m, const IntElt& e) {
  for (const auto& [P, k] : m.primes)
    if (contains(P.P, e)) return false;
  return true;
}

ResidueGroup make_residue_group(const Modulus& m) {
  ResidueGroup G;
  G.K = m.m0.K;
  G.m = m;
  const IdealHNF& m0 = m.m0;
  const i64 box = checked_mul(m0.a, m0.c);
  if (box > 4000000) throw DomainError("N(m0) too large for residue enumeration");
  G.box_to_unit.assign(box, -1);
  IntElt one = reduce_mod(m0, IntElt{1, 0});
  G.residues.push_back(one);
  G.box_to_unit[box_index(m0, one)] = 0;
  for (i64 y = 0; y < m0.c; ++y)
    for (i64 x = 0; x < m0.a; ++x) {
      IntElt r{x, y};
      if (r == one) continue;
      if (!coprime_to_modulus(m, r)) continue;
      G.box_to_unit[box_index(m0, r)] = static_cast<i64>(G.residues.size());
      G.residues.push_back(r);
    }
  return G;
}

i64 ResidueGroup::encode(const ResidueClass& r) const {
  if (static_cast<int>(r.signs.size()) != m.r0())
    throw DomainError("residue class has the wrong number of signs");
  i64 s = 0;
  for (int i = 0; i < m.r0(); ++i) {
    if (r.signs[i] != 1 && r.signs[i] != -1) throw DomainError("signs must be +1 or -1");
    if (r.signs[i] < 0) s |= i64(1) << i;
  }
  IntElt red = reduce_mod(m.m0, r.residue);
  i64 u = box_to_unit[box_index(m.m0, red)];
  if (u < 0) throw DomainError("residue is not prime to m0");
  return s + (u << m.r0());
}

ResidueClass ResidueGroup::decode(i64 code) const {
  ResidueClass r;
  for (int i = 0; i < m.r0(); ++i) r.signs.push_back((code >> i) & 1 ? -1 : 1);
  r.residue = residues.at(code >> m.r0());
  return r;
}

i64 ResidueGroup::mul(i64 a, i64 b) const {
  const i64 mask = (i64(1) << m.r0()) - 1;
  const IntElt& ra = residues[a >> m.r0()];
  const IntElt& rb = residues[b >> m.r0()];
  IntElt p;
  if (K.is_rational()) {
    p = {mul_mod(ra.x, rb.x, m.m0.a), 0};
  } else {
    BigInt Xe = BigInt(ra.x) * rb.x + BigInt(ra.y) * rb.y * K.n;
    BigInt Ye = BigInt(ra.x) * rb.y + BigInt(ra.y) * rb.x + BigInt(ra.y) * rb.y * K.t;
    p = reduce_big(m.m0, Xe, Ye);
  }
  i64 u = box_to_unit[box_index(m.m0, p)];
  return ((a ^ b) & mask) + (u << m.r0());
}

i64 ResidueGroup::pow(i64 a, i64 e) const {
  i64 ord = residue_count() * 2;  // a^(2|units|) = 1 for every a
  e %= ord;
  if (e < 0) e += ord;
  i64 r = 0;
  while (e > 0) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

i64 ResidueGroup::inv(i64 a) const { return pow(a, -1); }

i64 ResidueGroup::of_element(const FieldElement& a) const {
  if (!is_integral_elt(a)) throw DomainError("of_element: element not integral");
  if (a.is_zero()) throw DomainError("of_element: zero");
  ResidueClass r;
  for (int v : m.m_inf) r.signs.push_back(sign_at(K, a, v));
  r.residue = reduce_big(m.m0, rat_num(a.x), rat_num(a.y));
  i64 u = box_to_unit[box_index(m.m0, r.residue)];
  if (u < 0) throw DomainError("element " + to_string(K, a) + " is not prime to m0");
  return encode(r);
}

i64 ResidueGroup::of_fraction(const FieldElement& t) const {
  if (is_integral_elt(t)) return of_element(t);
  BigInt D = lcm(rat_den(t.x), rat_den(t.y));
  if (gcd(D, BigInt(m.m0.a * m.m0.c)) == 1) {
    FieldElement num = scale(t, Rational(D));
    return mul(of_element(num), inv(of_element(FieldElement(Rational(D), Rational(0)))));
  }
  IdealHNF den = denominator_ideal(K, t);
  IntElt s = coprime_element(den, m);
  FieldElement sf = to_field(s);
  FieldElement st = cmkms::mul(K, sf, t);
  return mul(of_element(st), inv(of_element(sf)));
}

std::vector<char> ResidueGroup::closure(const std::vector<i64>& gens) const {
  std::vector<char> in(order(), 0);
  std::deque<i64> q{0};
  in[0] = 1;
  while (!q.empty()) {
    i64 e = q.front();
    q.pop_front();
    for (i64 g : gens) {
      i64 f = mul(e, g);
      if (!in[f]) {
        in[f] = 1;
        q.push_back(f);
      }
    }
  }
  return in;
}

ResidueClass reduce_mod_m(const FieldElement& a, const Modulus& m) {
  const FieldDescriptor& K = m.m0.K;
  if (!is_integral_elt(a)) throw DomainError("reduce_mod_m: element not integral");
  if (a.is_zero()) throw DomainError("reduce_mod_m: zero element");
  ResidueClass r;
  r.residue = reduce_big(m.m0, rat_num(a.x), rat_num(a.y));
  if (!coprime_to_modulus(m, r.residue))
    throw DomainError("reduce_mod_m: " + to_string(K, a) + " is not prime to m0");
  for (int v : m.m_inf) r.signs.push_back(sign_at(K, a, v));
  return r;
}

namespace {

i64 element_order(const FieldDescriptor& K, const FieldElement& z) {
  FieldElement p = z;
  for (i64 k = 1; k <= 12; ++k) {
    if (p == FieldElement(1)) return k;
    p = mul(K, p, z);
  }
  throw DomainError("element has no finite order");
}

}  // namespace

RestrictedUnits restricted_unit_group(const SystemContext& sys) {
  const FieldDescriptor& K = sys.K();
  const ResidueGroup& rg = sys.rg;
  RestrictedUnits ru;
  for (const auto& z : sys.units.torsion)
    if (sys.in_gamma(rg.of_element(z))) ru.torsion.push_back(z);
  ru.torsion_order = static_cast<i64>(ru.torsion.size());
  ru.torsion_generator = FieldElement(1);
  i64 best = 1;
  for (const auto& z : ru.torsion) {
    i64 o = element_order(K, z);
    if (o > best) {
      best = o;
      ru.torsion_generator = z;
    }
  }
  if (!sys.units.fundamental) return ru;
  const FieldElement& eps = *sys.units.fundamental;
  const i64 e_code = rg.of_element(eps);
  i64 cur = e_code;
  for (i64 k = 1; k <= 2 * rg.order(); ++k) {
    for (const auto& z : sys.units.torsion) {
      if (sys.in_gamma(rg.mul(cur, rg.of_element(z)))) {
        ru.free_exponent = k;
        ru.free_generator = mul(K, z, power(K, eps, k));
        ru.log_free = static_cast<long double>(k) * sys.units.log_fundamental;
        return ru;
      }
    }
    cur = rg.mul(cur, e_code);
  }
  throw DomainError("no power of the fundamental unit reduces into Gamma");
}

std::pair<i64, i64> SystemContext::unit_exponents(const FieldElement& g) const {
  const FieldDescriptor& Kf = K();
  Rational N = norm(Kf, g);
  if (!is_integral_elt(g) || (N != 1 && N != -1))
    throw DomainError(to_string(Kf, g) + " is not a unit");
  i64 j = 0;
  FieldElement rest = g;
  if (restricted.free_generator) {
    long double lg = std::log(std::fabs(embed(Kf, g, 0)));
    j = static_cast<i64>(std::llround(lg / restricted.log_free));
    rest = mul(Kf, g, power(Kf, *restricted.free_generator, -j));
  }
  FieldElement p(1);
  for (i64 i = 0; i < restricted.torsion_order; ++i) {
    if (p == rest) return {i, j};
    p = mul(Kf, p, restricted.torsion_generator);
  }
  throw DomainError(to_string(Kf, g) + " is not in R*_{m,Gamma}");
}

FieldElement SystemContext::unit_from_exponents(i64 i, i64 j) const {
  FieldElement r = power(K(), restricted.torsion_generator, i);
  if (j != 0) {
    if (!restricted.free_generator) throw DomainError("no free unit");
    r = mul(K(), r, power(K(), *restricted.free_generator, j));
  }
  return r;
}

i64 SystemContext::class_of(const IdealHNF& x) const {
  if (x.K != K()) throw DomainError("class_of: field mismatch");
  IdealHNF J = x;
  J.den = 1;
  FieldElement g;
  i64 c = cl.class_with_generator(J, abs_reps, g);
  // J * conj(rep_c) = (g); psi(J) = [g] [N(rep_c)]^-1
  i64 code = rg.of_element(g);
  i64 nr = abs_reps[c].int_norm();
  code = rg.mul(code, rg.inv(rg.of_element(FieldElement(nr))));
  auto it = key_to_class.find({c, coset_of[code]});
  if (it == key_to_class.end()) throw DomainError("class_of: unknown class key");
  i64 cls = it->second;
  if (x.den != 1) {
    // x = J/den; (den) has the class of [den]_m mod Gamma [R^*]_m
    IdealHNF D = unit_ideal(K());
    D.a = x.den;
    if (!K().is_rational()) D.c = x.den;
    const AbelianPresentation& P = this->cls.group;
    cls = P.combine(cls, P.inverse_of(class_of(D)));
  }
  return cls;
}

SystemContext build_system(const SystemDescriptor& desc) {
  SystemContext S;
  S.desc = desc;
  const FieldDescriptor& K = desc.field;
  if (desc.modulus.m0.K != K) throw DomainError("modulus belongs to another field");
  S.units = unit_group(K);
  S.cl = class_group(K);
  S.rg = make_residue_group(desc.modulus);
  const ResidueGroup& rg = S.rg;

  // Gamma
  std::vector<i64> gcodes;
  if (desc.gamma_all) {
    for (i64 c = 0; c < rg.order(); ++c) gcodes.push_back(c);
  } else {
    for (const auto& r : desc.gamma_gens) gcodes.push_back(rg.encode(r));
  }
  S.gamma.generators = desc.gamma_gens;
  S.gamma.member = rg.closure(gcodes);
  for (i64 c = 0; c < rg.order(); ++c)
    if (S.gamma.member[c]) S.gamma.elements.push_back(c);

  // [R^*]_m and Gamma [R^*]_m
  std::vector<i64> ucodes;
  for (const auto& z : S.units.torsion) ucodes.push_back(rg.of_element(z));
  if (S.units.fundamental) ucodes.push_back(rg.of_element(*S.units.fundamental));
  S.unit_image = rg.closure(ucodes);
  std::vector<i64> hcodes = ucodes;
  hcodes.insert(hcodes.end(), gcodes.begin(), gcodes.end());
  S.gamma_units = rg.closure(hcodes);
  std::vector<i64> H;
  for (i64 c = 0; c < rg.order(); ++c)
    if (S.gamma_units[c]) H.push_back(c);
  S.coset_of.assign(rg.order(), -1);
  S.coset_count = 0;
  for (i64 c = 0; c < rg.order(); ++c) {
    if (S.coset_of[c] >= 0) continue;
    for (i64 h : H) S.coset_of[rg.mul(c, h)] = S.coset_count;
    ++S.coset_count;
  }

  ResidueInvariants& inv = S.cls.invariants;
  inv.w_K = S.units.w();
  inv.w_m = 0;
  for (const auto& z : S.units.torsion)
    if (rg.of_element(z) == 0) ++inv.w_m;
  inv.unit_index = std::count(S.unit_image.begin(), S.unit_image.end(), 1);
  inv.gamma_bar = static_cast<i64>(H.size()) / inv.unit_index;
  inv.gamma_in_units = true;
  for (i64 c : S.gamma.elements)
    if (!S.unit_image[c]) inv.gamma_in_units = false;

  S.restricted = restricted_unit_group(S);

  // absolute class representatives with norm prime to N(m0)
  const i64 h = S.cl.order();
  const i64 Nm0 = desc.modulus.m0.int_norm();
  std::vector<char> seen(h, 0);
  i64 found = 0;
  for (i64 X = 16; found < h; X *= 2) {
    if (X > (i64(1) << 40)) throw DomainError("absolute class representatives not found");
    S.abs_reps.assign(h, IdealHNF{});
    std::fill(seen.begin(), seen.end(), 0);
    found = 0;
    for (const auto& [n, list] : enumerate_ideals(K, X)) {
      if (gcd64(n, Nm0) != 1) continue;
      for (const auto& I : list) {
        i64 c = S.cl.class_of(I);
        if (!seen[c]) {
          seen[c] = 1;
          S.abs_reps[c] = I;
          ++found;
        }
      }
      if (found == h) break;
    }
  }

  S.cls.expected_order = h * S.coset_count;
  // generalized classes: keys (absolute class, coset) in order of the
  // smallest-norm ideal realizing them
  std::vector<IdealHNF>& reps = S.cls.representatives;
  for (i64 X = 16; static_cast<i64>(reps.size()) < S.cls.expected_order; X *= 2) {
    if (X > (i64(1) << 40)) throw DomainError("generalized class representatives not found");
    reps.clear();
    S.key_to_class.clear();
    for (const auto& [n, list] : enumerate_ideals(K, X, desc.modulus.m0)) {
      for (const auto& I : list) {
        FieldElement g;
        i64 c = S.cl.class_with_generator(I, S.abs_reps, g);
        i64 code = rg.mul(rg.of_element(g),
                          rg.inv(rg.of_element(FieldElement(S.abs_reps[c].int_norm()))));
        auto key = std::make_pair(c, S.coset_of[code]);
        if (!S.key_to_class.count(key)) {
          S.key_to_class[key] = static_cast<i64>(reps.size());
          reps.push_back(I);
        }
      }
      if (static_cast<i64>(reps.size()) == S.cls.expected_order) break;
    }
  }

  // group law from a factor base of primes prime to m0
  i64 fb_bound = std::max<i64>(static_cast<i64>(minkowski_bound(K)), 30);
  const i64 order = S.cls.expected_order;
  for (;; fb_bound *= 2) {
    S.cls.factor_base = prime_ideals_up_to(K, fb_bound, desc.modulus.m0);
    const auto& fb = S.cls.factor_base;
    std::vector<std::vector<i64>> table(order, std::vector<i64>(fb.size(), -1));
    S.cls.group = AbelianPresentation{};
    // class_of needs cls.group only for fractional input; reps are integral
    auto step = [&](i64 e, int j) {
      i64& slot = table[e][j];
      if (slot < 0) slot = S.class_of(ideal_product(reps[e], fb[j].P));
      return slot;
    };
    if (present_from_generators(order, static_cast<int>(fb.size()), step, S.cls.group))
      break;
    if (fb_bound > 1000000) throw DomainError("factor base does not generate the class group");
  }
  S.cls.generators.clear();
  for (i64 e : S.cls.group.generator_elements) S.cls.generators.push_back(reps[e]);
  return S;
}

bool monoid_contains(const FieldElement& a, const SystemContext& sys) {
  if (!is_integral_elt(a) || a.is_zero()) return false;
  IntElt r = reduce_big(sys.m().m0, rat_num(a.x), rat_num(a.y));
  if (!coprime_to_modulus(sys.m(), r)) return false;
  return sys.in_gamma(sys.rg.of_element(a));
}

FieldElement transporter(const IdealHNF& x, const IdealHNF& target,
                         const SystemContext& sys) {
  const FieldDescriptor& K = sys.K();
  if (x == target) return FieldElement(1);
  IdealHNF J = ideal_product(target, ideal_inverse(x));
  PrincipalResult pr = is_principal(J, sys.units);
  if (pr.status == PrincipalResult::Status::search_exhausted)
    throw DomainError("transporter: principality search exhausted");
  if (!pr.principal()) throw DomainError("transporter: classes differ");
  const FieldElement& alpha = pr.generator;
  // [alpha]_m, computed through an element of x prime to m0
  IntElt s = coprime_element(x, sys.m());
  FieldElement sf = to_field(s);
  const ResidueGroup& rg = sys.rg;
  i64 code = rg.mul(rg.of_element(mul(K, sf, alpha)), rg.inv(rg.of_element(sf)));
  if (!sys.gamma_units[code]) throw DomainError("transporter: classes differ");
  // adjust by a unit so that the reduction lands in Gamma
  std::optional<FieldElement> t0;
  const i64 ord = sys.units.fundamental ? 2 * rg.order() : 1;
  i64 ecode = sys.units.fundamental ? rg.of_element(*sys.units.fundamental) : 0;
  i64 epow = 0;
  for (i64 j = 0; j < ord && !t0; ++j) {
    for (const auto& z : sys.units.torsion) {
      if (sys.in_gamma(rg.mul(rg.mul(code, epow), rg.of_element(z)))) {
        FieldElement u = z;
        if (j > 0) u = mul(K, u, power(K, *sys.units.fundamental, j));
        t0 = mul(K, alpha, u);
        break;
      }
    }
    epow = rg.mul(epow, ecode);
  }
  if (!t0) throw DomainError("transporter: no unit adjustment lands in Gamma");
  FieldElement t = *t0;
  // normalize log|s1/s2| into [-L, L) with L = log sigma_1(eta)
  if (sys.restricted.free_generator) {
    const long double L = sys.restricted.log_free;
    long double lam = std::log(std::fabs(embed(K, t, 0))) -
                      std::log(std::fabs(embed(K, t, 1)));
    i64 k = static_cast<i64>(std::floor((lam + L) / (2 * L)));
    if (k != 0) t = mul(K, t, power(K, *sys.restricted.free_generator, -k));
  }
  FieldElement best = t;
  for (const auto& z : sys.restricted.torsion) {
    FieldElement c = mul(K, t, z);
    if (c < best) best = c;
  }
  return best;
}

std::string to_string(const ResidueClass& r, const FieldDescriptor& K) {
  std::string s = "(";
  for (size_t i = 0; i < r.signs.size(); ++i) s += r.signs[i] > 0 ? "+" : "-";
  if (!r.signs.empty()) s += ", ";
  s += to_string(K, to_field(r.residue));
  return s + ")";
}

}  // namespace cmkms
