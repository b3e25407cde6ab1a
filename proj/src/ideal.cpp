#include "cmkms/ideal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace cmkms {

namespace {

using BigPair = std::array<BigInt, 2>;

BigPair big_mul(const FieldDescriptor& K, const BigPair& u, const BigPair& v) {
  if (K.is_rational()) return {u[0] * v[0], BigInt(0)};
  BigInt yy = u[1] * v[1];
  return {u[0] * v[0] + yy * K.n, u[0] * v[1] + u[1] * v[0] + yy * K.t};
}

BigPair big_of(const IntElt& e) { return {BigInt(e.x), BigInt(e.y)}; }

// HNF of the Z-span of `rows` (integral coordinates), scaled by 1/den.
IdealHNF from_rows(const FieldDescriptor& K, const std::vector<BigPair>& rows,
                   BigInt den) {
  const int n = K.degree();
  std::vector<BigPair> nz;
  for (const auto& r : rows)
    if (r[0] != 0 || r[1] != 0) nz.push_back(r);
  if (nz.empty()) throw DomainError("ideal generated by zero");
  MatX<BigInt> M(static_cast<Eigen::Index>(nz.size()), n);
  for (size_t i = 0; i < nz.size(); ++i)
    for (int j = 0; j < n; ++j) M(static_cast<Eigen::Index>(i), j) = nz[i][j];
  MatX<BigInt> H = lattice_hnf(M);
  BigInt a = H(0, 0), b = 0, c = 1;
  if (n == 2) {
    b = H(1, 0);
    c = H(1, 1);
  }
  BigInt g = n == 2 ? gcd(c, den) : gcd(a, den);
  a /= g;
  b /= g;
  if (n == 2) c /= g;
  den /= g;
  IdealHNF out;
  out.K = K;
  out.a = to_i64(a);
  out.b = to_i64(b);
  out.c = to_i64(c);
  out.den = to_i64(den);
  return out;
}

std::vector<BigPair> module_rows(const FieldDescriptor& K,
                                 const std::vector<BigPair>& gens) {
  std::vector<BigPair> rows;
  for (const auto& g : gens) {
    rows.push_back(g);
    if (!K.is_rational()) rows.push_back(big_mul(K, g, {BigInt(0), BigInt(1)}));
  }
  return rows;
}

std::vector<BigPair> basis_rows(const IdealHNF& x) {
  std::vector<BigPair> r{{BigInt(x.a), BigInt(0)}};
  if (!x.K.is_rational()) r.push_back({BigInt(x.b), BigInt(x.c)});
  return r;
}

void require_same_field(const IdealHNF& x, const IdealHNF& y) {
  if (x.K != y.K) throw DomainError("ideals from different fields");
}

}  // namespace

i64 IdealHNF::int_norm() const {
  if (den != 1) throw DomainError("norm of a fractional ideal requested as integer");
  return checked_mul(a, c);
}

bool hnf_less(const IdealHNF& x, const IdealHNF& y) {
  if (x.a != y.a) return x.a < y.a;
  if (x.b != y.b) return x.b < y.b;
  if (x.c != y.c) return x.c < y.c;
  return x.den < y.den;
}

bool norm_less(const IdealHNF& x, const IdealHNF& y) {
  Rational nx = x.norm(), ny = y.norm();
  if (nx != ny) return nx < ny;
  return hnf_less(x, y);
}

size_t IdealHash::operator()(const IdealHNF& x) const {
  size_t h = std::hash<i64>()(x.a);
  h = h * 1000003u ^ std::hash<i64>()(x.b);
  h = h * 1000003u ^ std::hash<i64>()(x.c);
  h = h * 1000003u ^ std::hash<i64>()(x.den);
  return h;
}

IdealHNF unit_ideal(const FieldDescriptor& K) {
  IdealHNF r;
  r.K = K;
  return r;
}

IdealHNF ideal_from_generators(const FieldDescriptor& K,
                               const std::vector<FieldElement>& gens) {
  BigInt L = 1;
  for (const auto& g : gens) {
    L = lcm(L, rat_den(g.x));
    L = lcm(L, rat_den(g.y));
  }
  std::vector<BigPair> ig;
  for (const auto& g : gens) {
    Rational x = g.x * Rational(L), y = g.y * Rational(L);
    ig.push_back({rat_num(x), rat_num(y)});
  }
  return from_rows(K, module_rows(K, ig), L);
}

IdealHNF ideal_from_int(const FieldDescriptor& K,
                        const std::vector<IntElt>& gens) {
  std::vector<BigPair> ig;
  for (const auto& g : gens) ig.push_back(big_of(g));
  return from_rows(K, module_rows(K, ig), 1);
}

IdealHNF principal_ideal(const FieldDescriptor& K, const FieldElement& g) {
  return ideal_from_generators(K, {g});
}

IdealHNF ideal_product(const IdealHNF& x, const IdealHNF& y) {
  require_same_field(x, y);
  std::vector<BigPair> rows;
  for (const auto& u : basis_rows(x))
    for (const auto& v : basis_rows(y)) rows.push_back(big_mul(x.K, u, v));
  return from_rows(x.K, rows, BigInt(x.den) * y.den);
}

IdealHNF ideal_power(const IdealHNF& x, int e) {
  if (e < 0) return ideal_power(ideal_inverse(x), -e);
  IdealHNF r = unit_ideal(x.K), base = x;
  while (e > 0) {
    if (e & 1) r = ideal_product(r, base);
    base = ideal_product(base, base);
    e >>= 1;
  }
  return r;
}

IdealHNF ideal_conjugate(const IdealHNF& x) {
  if (x.K.is_rational()) return x;
  std::vector<BigPair> rows{{BigInt(x.a), BigInt(0)},
                            {BigInt(x.b) + BigInt(x.c) * x.K.t, BigInt(-x.c)}};
  return from_rows(x.K, rows, x.den);
}

IdealHNF ideal_inverse(const IdealHNF& x) {
  if (x.K.is_rational())
    return ideal_from_generators(x.K, {FieldElement(Rational(x.den) / x.a, Rational(0))});
  // x^{-1} = conj(x) / N(x)
  IdealHNF cj = ideal_conjugate(x);
  Rational N = x.norm();
  std::vector<FieldElement> gens;
  for (const auto& r : basis_rows(cj))
    gens.push_back({Rational(r[0]) / N / cj.den, Rational(r[1]) / N / cj.den});
  return ideal_from_generators(x.K, gens);
}

IdealHNF ideal_scale(const IdealHNF& x, const FieldElement& g) {
  std::vector<FieldElement> gens;
  for (const auto& r : basis_rows(x)) {
    FieldElement e{Rational(r[0]) / x.den, Rational(r[1]) / x.den};
    gens.push_back(mul(x.K, e, g));
  }
  return ideal_from_generators(x.K, gens);
}

IdealHNF ideal_sum(const IdealHNF& x, const IdealHNF& y) {
  require_same_field(x, y);
  std::vector<FieldElement> gens;
  for (const IdealHNF* z : {&x, &y})
    for (const auto& r : basis_rows(*z))
      gens.push_back({Rational(r[0]) / z->den, Rational(r[1]) / z->den});
  return ideal_from_generators(x.K, gens);
}

bool contains(const IdealHNF& x, const IntElt& e) {
  if (x.den != 1) return contains(x, to_field(e));
  if (x.K.is_rational()) return e.y == 0 && e.x % x.a == 0;
  if (e.y % x.c != 0) return false;
  i128 j = e.y / x.c;
  i128 r = static_cast<i128>(e.x) - j * x.b;
  return r % x.a == 0;
}

bool contains(const IdealHNF& x, const FieldElement& e) {
  Rational X = e.x * x.den, Y = e.y * x.den;
  if (!is_integer(X) || !is_integer(Y)) return false;
  BigInt bx = rat_num(X), by = rat_num(Y);
  if (x.K.is_rational()) return by == 0 && bx % x.a == 0;
  if (by % x.c != 0) return false;
  BigInt j = by / x.c;
  return (bx - j * x.b) % x.a == 0;
}

bool ideal_contains(const IdealHNF& x, const IdealHNF& y) {
  require_same_field(x, y);
  for (const auto& r : basis_rows(y)) {
    FieldElement e{Rational(r[0]) / y.den, Rational(r[1]) / y.den};
    if (!contains(x, e)) return false;
  }
  return true;
}

bool coprime(const IdealHNF& x, const IdealHNF& y) {
  return ideal_sum(x, y) == unit_ideal(x.K);
}

bool closed_under_omega(const IdealHNF& x) {
  if (x.K.is_rational()) return true;
  for (const auto& r : basis_rows(x)) {
    BigPair w = big_mul(x.K, r, {BigInt(0), BigInt(1)});
    FieldElement e{Rational(w[0]) / x.den, Rational(w[1]) / x.den};
    if (!contains(x, e)) return false;
  }
  return true;
}

IntElt reduce_mod(const IdealHNF& x, const IntElt& e) {
  if (x.K.is_rational()) return {mod_pos(e.x, x.a), 0};
  i64 q = floor_div(e.y, x.c);
  i128 xr = static_cast<i128>(e.x) - static_cast<i128>(q) * x.b;
  i64 y = e.y - q * x.c;
  i64 xm = static_cast<i64>(((xr % x.a) + x.a) % x.a);
  return {xm, y};
}

std::array<i64, 2> coords_in(const IdealHNF& x, const IntElt& e) {
  if (x.K.is_rational()) {
    if (e.x % x.a != 0) throw DomainError("coords_in: element not in ideal");
    return {e.x / x.a, 0};
  }
  if (e.y % x.c != 0) throw DomainError("coords_in: element not in ideal");
  i64 j = e.y / x.c;
  i128 r = static_cast<i128>(e.x) - static_cast<i128>(j) * x.b;
  if (r % x.a != 0) throw DomainError("coords_in: element not in ideal");
  return {static_cast<i64>(r / x.a), j};
}

std::string to_string(PrimeSplitting::Type t) {
  switch (t) {
    case PrimeSplitting::Type::split: return "split";
    case PrimeSplitting::Type::inert: return "inert";
    case PrimeSplitting::Type::ramified: return "ramified";
  }
  return "?";
}

PrimeSplitting factor_rational_prime(const FieldDescriptor& K, i64 p) {
  if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
  PrimeSplitting S;
  S.p = p;
  auto make = [&](i64 a, i64 b, i64 c, int e, int f) {
    PrimeIdeal P;
    P.P.K = K;
    P.P.a = a;
    P.P.b = b;
    P.P.c = c;
    P.p = p;
    P.e = e;
    P.f = f;
    P.norm = a * c;
    return P;
  };
  if (K.is_rational()) {
    S.type = PrimeSplitting::Type::split;
    S.primes_above.push_back(make(p, 0, 1, 1, 1));
    return S;
  }
  int k = kronecker(K.D, p);
  if (k == -1) {
    S.type = PrimeSplitting::Type::inert;
    S.primes_above.push_back(make(p, 0, p, 1, 2));
    return S;
  }
  // roots of x^2 - t x - n mod p
  std::vector<i64> roots;
  if (p == 2) {
    for (i64 r = 0; r < 2; ++r)
      if (mod_pos(r * r - K.t * r - K.n, 2) == 0) roots.push_back(r);
  } else {
    i64 s = sqrt_mod_prime(mod_pos(K.D, p), p);
    i64 inv2 = (p + 1) / 2;
    roots.push_back(mul_mod(mod_pos(K.t + s, p), inv2, p));
    i64 r2 = mul_mod(mod_pos(K.t - s, p), inv2, p);
    if (r2 != roots[0]) roots.push_back(r2);
  }
  if (k == 0) {
    S.type = PrimeSplitting::Type::ramified;
    S.primes_above.push_back(make(p, mod_pos(-roots.at(0), p), 1, 2, 1));
    return S;
  }
  S.type = PrimeSplitting::Type::split;
  if (roots.size() != 2) throw DomainError("split prime without two roots");
  for (i64 r : roots) S.primes_above.push_back(make(p, mod_pos(-r, p), 1, 1, 1));
  std::sort(S.primes_above.begin(), S.primes_above.end(),
            [](const PrimeIdeal& u, const PrimeIdeal& v) {
              return hnf_less(u.P, v.P);
            });
  return S;
}

std::vector<PrimeIdeal> prime_ideals_up_to(const FieldDescriptor& K, i64 X,
                                           const std::optional<IdealHNF>& avoid) {
  std::vector<PrimeIdeal> out;
  for (i64 p : primes_up_to(X)) {
    PrimeSplitting S = factor_rational_prime(K, p);
    for (const auto& P : S.primes_above) {
      if (P.norm > X) continue;
      if (avoid && avoid->int_norm() % p == 0 && ideal_contains(P.P, *avoid))
        continue;
      out.push_back(P);
    }
  }
  std::sort(out.begin(), out.end(), [](const PrimeIdeal& u, const PrimeIdeal& v) {
    if (u.norm != v.norm) return u.norm < v.norm;
    return hnf_less(u.P, v.P);
  });
  return out;
}

std::map<i64, std::vector<IdealHNF>> enumerate_ideals(
    const FieldDescriptor& K, i64 X, const std::optional<IdealHNF>& coprime_to) {
  std::map<i64, std::vector<IdealHNF>> out;
  if (X < 1) return out;
  std::vector<PrimeIdeal> P = prime_ideals_up_to(K, X, coprime_to);
  std::function<void(const IdealHNF&, i64, size_t)> rec =
      [&](const IdealHNF& I, i64 N, size_t start) {
        out[N].push_back(I);
        for (size_t j = start; j < P.size(); ++j) {
          if (static_cast<i128>(N) * P[j].norm > X) break;
          rec(ideal_product(I, P[j].P), N * P[j].norm, j);
        }
      };
  rec(unit_ideal(K), 1, 0);
  for (auto& [n, v] : out) std::sort(v.begin(), v.end(), hnf_less);
  return out;
}

std::vector<std::pair<PrimeIdeal, int>> factor_ideal(const IdealHNF& x) {
  if (!x.is_integral()) throw DomainError("factor_ideal: fractional ideal");
  std::vector<std::pair<PrimeIdeal, int>> out;
  for (auto [p, e] : factorize(x.int_norm())) {
    (void)e;
    for (const auto& P : factor_rational_prime(x.K, p).primes_above) {
      int v = 0;
      IdealHNF y = x;
      IdealHNF Pinv = ideal_inverse(P.P);
      while (ideal_contains(P.P, y)) {
        y = ideal_product(y, Pinv);
        ++v;
      }
      if (v > 0) out.emplace_back(P, v);
    }
  }
  return out;
}

namespace {

// Minkowski-type bilinear form: Tr(alpha*beta) (real) or Tr(alpha*conj beta)
// (imaginary); positive definite, Q(alpha) = sum |sigma(alpha)|^2.
i128 bform(const FieldDescriptor& K, const IntElt& u, const IntElt& v) {
  i128 k = K.d > 0 ? 2 * static_cast<i128>(K.n) + K.t * K.t : -2 * static_cast<i128>(K.n);
  return 2 * static_cast<i128>(u.x) * v.x +
         K.t * (static_cast<i128>(u.x) * v.y + static_cast<i128>(v.x) * u.y) +
         k * static_cast<i128>(u.y) * v.y;
}

IntElt lin(i64 i, const IntElt& u, i64 j, const IntElt& v) {
  return {checked_add(checked_mul(i, u.x), checked_mul(j, v.x)),
          checked_add(checked_mul(i, u.y), checked_mul(j, v.y))};
}

}  // namespace

PrincipalResult is_principal(const IdealHNF& x, const UnitData& units) {
  const FieldDescriptor& K = x.K;
  PrincipalResult res;
  if (K.is_rational()) {
    res.status = PrincipalResult::Status::principal;
    res.generator = FieldElement(Rational(x.a) / x.den, Rational(0));
    return res;
  }
  const i64 N = checked_mul(x.a, x.c);
  long double T;
  if (K.is_imaginary()) {
    T = 2.0L * N;
  } else {
    long double L = units.log_fundamental;
    if (L > 60) {
      res.status = PrincipalResult::Status::search_exhausted;
      return res;
    }
    T = static_cast<long double>(N) * (std::exp(L) + std::exp(-L));
  }
  T = T * (1 + 1e-12L) + 1;
  // Lagrange reduction of the basis under the positive definite form
  IntElt u{x.a, 0}, v{x.b, x.c};
  if (bform(K, u, u) > bform(K, v, v)) std::swap(u, v);
  while (true) {
    i128 num = bform(K, u, v), q = bform(K, u, u);
    long double m = std::nearbyint(static_cast<long double>(num) /
                                   static_cast<long double>(q));
    v = lin(-static_cast<i64>(m), u, 1, v);
    if (bform(K, v, v) >= bform(K, u, u)) break;
    std::swap(u, v);
  }
  long double A = static_cast<long double>(bform(K, u, u));
  long double B = 2.0L * static_cast<long double>(bform(K, u, v));
  long double C = static_cast<long double>(bform(K, v, v));
  long double det4 = 4 * A * C - B * B;
  i64 J = static_cast<i64>(std::floor(std::sqrt(4 * A * T / det4))) + 1;
  long double work = 0;
  for (i64 j = -J; j <= J; ++j) {
    long double jj = static_cast<long double>(j);
    long double disc = B * B * jj * jj - 4 * A * (C * jj * jj - T);
    if (disc < 0) continue;
    long double sq = std::sqrt(disc);
    i64 lo = static_cast<i64>(std::floor((-B * jj - sq) / (2 * A))) - 1;
    i64 hi = static_cast<i64>(std::ceil((-B * jj + sq) / (2 * A))) + 1;
    work += static_cast<long double>(hi - lo + 1);
    if (work > 5e7L) {
      res.status = PrincipalResult::Status::search_exhausted;
      return res;
    }
    for (i64 i = lo; i <= hi; ++i) {
      IntElt e = lin(i, u, j, v);
      i64 ne = norm(K, e);
      if (ne == N || ne == -N) {
        FieldElement g = to_field(e);
        g = scale(g, Rational(1) / x.den);
        if (principal_ideal(K, g) != x)
          throw DomainError("principal search: certification failed");
        res.status = PrincipalResult::Status::principal;
        res.generator = g;
        return res;
      }
    }
  }
  res.status = PrincipalResult::Status::not_principal;
  return res;
}

PrincipalResult is_principal(const IdealHNF& x) {
  return is_principal(x, unit_group(x.K));
}

double minkowski_bound(const FieldDescriptor& K) {
  if (K.is_rational()) return 1.0;
  double s = std::sqrt(std::fabs(static_cast<double>(K.D)));
  return K.is_imaginary() ? (2.0 / M_PI) * s : 0.5 * s;
}

i64 ClassGroup::class_with_generator(const IdealHNF& x,
                                     const std::vector<IdealHNF>& class_reps,
                                     FieldElement& g) const {
  IdealHNF J = x;
  J.den = 1;  // x = J/den has the class of J
  for (size_t c = 0; c < class_reps.size(); ++c) {
    IdealHNF P = ideal_product(J, ideal_conjugate(class_reps[c]));
    PrincipalResult r = is_principal(P, units);
    if (r.status == PrincipalResult::Status::search_exhausted)
      throw DomainError("principality search exhausted for " + to_string(P));
    if (r.principal()) {
      g = r.generator;
      return static_cast<i64>(c);
    }
  }
  throw DomainError("class_of: ideal matches no class representative");
}

i64 ClassGroup::class_with_generator(const IdealHNF& x, FieldElement& g) const {
  return class_with_generator(x, reps, g);
}

i64 ClassGroup::class_of(const IdealHNF& x) const {
  FieldElement g;
  return class_with_generator(x, g);
}

ClassGroup class_group(const FieldDescriptor& K) {
  ClassGroup G;
  G.K = K;
  G.units = unit_group(K);
  G.reps.push_back(unit_ideal(K));
  if (!K.is_rational()) {
    i64 MB = static_cast<i64>(std::floor(minkowski_bound(K)));
    for (auto& [n, list] : enumerate_ideals(K, std::max<i64>(MB, 1))) {
      for (const auto& I : list) {
        bool found = false;
        for (const auto& R : G.reps) {
          PrincipalResult r = is_principal(ideal_product(I, ideal_conjugate(R)), G.units);
          if (r.status == PrincipalResult::Status::search_exhausted)
            throw DomainError("class group: principality search exhausted");
          if (r.principal()) {
            found = true;
            break;
          }
        }
        if (!found) G.reps.push_back(I);
      }
    }
  }
  i64 fb_bound = std::max<i64>(static_cast<i64>(minkowski_bound(K)), 30);
  G.factor_base = prime_ideals_up_to(K, fb_bound);
  const i64 h = static_cast<i64>(G.reps.size());
  std::vector<std::vector<i64>> table(h, std::vector<i64>(G.factor_base.size(), -1));
  auto step = [&](i64 e, int j) {
    i64& slot = table[e][j];
    if (slot < 0) slot = G.class_of(ideal_product(G.reps[e], G.factor_base[j].P));
    return slot;
  };
  if (!present_from_generators(h, static_cast<int>(G.factor_base.size()), step,
                               G.presentation))
    throw DomainError("factor base does not generate the class group");
  for (i64 e : G.presentation.generator_elements) G.generators.push_back(G.reps[e]);
  return G;
}

std::string to_string(const IdealHNF& x) {
  return "[" + std::to_string(x.a) + "," + std::to_string(x.b) + "," +
         std::to_string(x.c) + "," + std::to_string(x.den) + "]";
}

}  // namespace cmkms
