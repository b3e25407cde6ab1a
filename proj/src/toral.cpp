#include "cmkms/toral.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

namespace cmkms {

IntMat action_matrix(const FieldElement& u, const IdealHNF& x) {
  const FieldDescriptor& K = x.K;
  Rational N = norm(K, u);
  if (!is_integer(u.x) || !is_integer(u.y) || (N != 1 && N != -1))
    throw DomainError("action_matrix: " + to_string(K, u) + " is not a unit");
  const int n = K.degree();
  MatX<Rational> M = multiplication_matrix(K, u);
  MatX<Rational> B(n, n);
  if (n == 1) {
    B(0, 0) = x.a;
  } else {
    B(0, 0) = x.a;
    B(0, 1) = x.b;
    B(1, 0) = Rational(0);
    B(1, 1) = x.c;
  }
  MatX<Rational> Binv(n, n);
  if (n == 1) {
    Binv(0, 0) = Rational(1) / x.a;
  } else {
    Binv(0, 0) = Rational(1) / x.a;
    Binv(0, 1) = -Rational(x.b) / (Rational(x.a) * x.c);
    Binv(1, 0) = Rational(0);
    Binv(1, 1) = Rational(1) / x.c;
  }
  MatX<Rational> A = exact_product(exact_product(Binv, M), B);
  IntMat out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!is_integer(A(i, j))) throw DomainError("action_matrix: ideal not stable");
      out(i, j) = rat_num(A(i, j));
    }
  return out;
}

ToralAction make_toral_action(const IdealHNF& x,
                              const std::optional<FieldElement>& torsion_gen,
                              i64 torsion_order,
                              const std::optional<FieldElement>& free_gen) {
  IdealHNF J = x;
  J.den = 1;
  ToralAction act;
  act.ideal = J;
  if (torsion_gen && torsion_order > 1) {
    act.torsion_order = torsion_order;
    act.generator_matrices.push_back(action_matrix(*torsion_gen, J).transpose());
  }
  if (free_gen) {
    act.has_free = true;
    act.generator_matrices.push_back(action_matrix(*free_gen, J).transpose());
  }
  return act;
}

ToralAction toral_action(const SystemContext& sys, const IdealHNF& x) {
  const RestrictedUnits& ru = sys.restricted;
  return make_toral_action(x, ru.torsion_generator, ru.torsion_order, ru.free_generator);
}

namespace {

TorusPoint normalize_point(std::vector<Rational> v) {
  for (auto& q : v) {
    BigInt fl = rat_num(q) / rat_den(q);
    if (q < 0 && !is_integer(q)) fl -= 1;
    if (q < 0 && is_integer(q)) fl = rat_num(q);
    q -= Rational(fl);
  }
  return v;
}

using ModMat = std::vector<std::vector<i64>>;

ModMat reduce_matrix(const IntMat& A, i64 N) {
  ModMat r(A.rows(), std::vector<i64>(A.cols()));
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      BigInt v = A(i, j) % N;
      if (v < 0) v += N;
      r[i][j] = to_i64(v);
    }
  return r;
}

std::vector<i64> apply(const ModMat& A, const std::vector<i64>& p, i64 N) {
  std::vector<i64> q(p.size(), 0);
  for (size_t i = 0; i < p.size(); ++i) {
    i128 s = 0;
    for (size_t j = 0; j < p.size(); ++j) s += static_cast<i128>(A[i][j]) * p[j];
    q[i] = static_cast<i64>(s % N);
  }
  return q;
}

i64 encode_point(const std::vector<i64>& p, i64 N) {
  i64 c = 0;
  for (size_t i = p.size(); i-- > 0;) c = c * N + p[i];
  return c;
}

std::vector<i64> decode_point(i64 c, i64 N, int n) {
  std::vector<i64> p(n);
  for (int i = 0; i < n; ++i) {
    p[i] = c % N;
    c /= N;
  }
  return p;
}

Isotropy compute_isotropy(const ToralAction& act, const std::vector<i64>& p, i64 N,
                          const ModMat* T, const ModMat* F, i64 orbit_size) {
  Isotropy iso;
  iso.w = act.torsion_order;
  iso.has_free = act.has_free;
  // smallest s > 0 with zeta0^s p = p; s divides w
  std::vector<std::vector<i64>> tors{p};
  if (T) {
    std::vector<i64> q = apply(*T, p, N);
    i64 s = 1;
    while (q != p) {
      tors.push_back(q);
      q = apply(*T, q, N);
      ++s;
    }
    iso.torsion_step = s;
  }
  if (F) {
    std::vector<i64> q = p;
    for (i64 j = 1; j <= orbit_size; ++j) {
      q = apply(*F, q, N);
      // zeta0^{i0} eta^j p = p  <=>  eta^j p = zeta0^{-i0} p
      for (size_t k = 0; k < tors.size(); ++k) {
        if (tors[k] == q) {
          iso.free_power = j;
          iso.torsion_offset = k == 0 ? 0 : iso.torsion_step - static_cast<i64>(k);
          return iso;
        }
      }
    }
    throw DomainError("isotropy: no power of the free generator returns to the point");
  }
  return iso;
}

}  // namespace

FixedPointSet fixed_points(const ToralAction& act, size_t max_representatives) {
  FixedPointSet F;
  const int n = act.dim();
  if (act.trivial()) return F;  // every point is fixed
  const int k = static_cast<int>(act.generator_matrices.size());
  IntMat M(k * n, n);
  for (int g = 0; g < k; ++g)
    M.block(g * n, 0, n, n) = act.generator_matrices[g] - IntMat::Identity(n, n);
  SmithForm<BigInt> S = smith_normal_form(M);
  std::vector<BigInt> d(n);
  for (int i = 0; i < n; ++i) {
    d[i] = S.D(i, i);
    if (d[i] == 0) return F;  // a positive-dimensional fixed subtorus
  }
  F.finite = true;
  F.count = 1;
  for (const auto& v : d) {
    F.count *= v;
    if (v > 1) F.group_invariants.push_back(to_i64(v));
  }
  // chi = V psi, psi_i = k_i / d_i
  std::vector<i64> idx(n, 0);
  while (true) {
    if (F.representatives.size() >= max_representatives) {
      F.representatives_truncated = true;
      break;
    }
    std::vector<Rational> chi(n, Rational(0));
    for (int r = 0; r < n; ++r)
      for (int i = 0; i < n; ++i)
        chi[r] += Rational(S.V(r, i)) * Rational(idx[i]) / Rational(d[i]);
    F.representatives.push_back(normalize_point(chi));
    int pos = 0;
    while (pos < n) {
      if (++idx[pos] < to_i64(d[pos])) break;
      idx[pos] = 0;
      ++pos;
    }
    if (pos == n) break;
  }
  std::sort(F.representatives.begin(), F.representatives.end());
  return F;
}

bool Isotropy::contains(i64 i, i64 j) const {
  i = mod_pos(i, w);
  if (!has_free) {
    if (j != 0) return false;
    return i % torsion_step == 0;
  }
  if (j % free_power != 0) return false;
  i64 k = j / free_power;
  i64 r = mod_pos(i - k * torsion_offset, w);
  return r % torsion_step == 0;
}

std::vector<TorusPoint> FiniteOrbit::rational_points() const {
  std::vector<TorusPoint> out;
  for (const auto& p : points) {
    TorusPoint t;
    for (i64 v : p) t.push_back(Rational(v) / denominator);
    out.push_back(t);
  }
  return out;
}

namespace {

std::vector<FiniteOrbit> orbits_impl(const ToralAction& act, i64 N,
                                     const std::vector<i64>* only) {
  const int n = act.dim();
  i64 total = 1;
  for (int i = 0; i < n; ++i) total = checked_mul(total, N);
  if (total > 50000000) throw DomainError("finite_orbits: too many torsion points");
  std::vector<ModMat> mats;
  for (const auto& A : act.generator_matrices) mats.push_back(reduce_matrix(A, N));
  const ModMat* T = act.torsion_order > 1 ? &mats[0] : nullptr;
  const ModMat* Fm = act.has_free ? &mats.back() : nullptr;
  std::vector<char> seen(only ? 0 : total, 0);
  std::vector<FiniteOrbit> out;
  auto explore = [&](const std::vector<i64>& start) {
    FiniteOrbit O;
    O.denominator = N;
    std::map<i64, char> local;
    std::deque<std::vector<i64>> q{start};
    local[encode_point(start, N)] = 1;
    while (!q.empty()) {
      auto p = q.front();
      q.pop_front();
      O.points.push_back(p);
      for (const auto& A : mats) {
        auto r = apply(A, p, N);
        i64 c = encode_point(r, N);
        if (!local.count(c)) {
          local[c] = 1;
          q.push_back(r);
        }
      }
    }
    for (const auto& [c, v] : local)
      if (!seen.empty()) seen[c] = 1;
    std::sort(O.points.begin(), O.points.end());
    O.isotropy = compute_isotropy(act, O.points[0], N, T, Fm, O.size());
    out.push_back(std::move(O));
  };
  if (only) {
    std::vector<i64> p = *only;
    for (auto& v : p) v = mod_pos(v, N);
    explore(p);
    return out;
  }
  for (i64 c = 0; c < total; ++c) {
    if (seen[c]) continue;
    explore(decode_point(c, N, n));
  }
  std::sort(out.begin(), out.end(), [](const FiniteOrbit& a, const FiniteOrbit& b) {
    return a.points[0] < b.points[0];
  });
  return out;
}

}  // namespace

std::vector<FiniteOrbit> finite_orbits(const ToralAction& act, i64 N) {
  if (N < 1) throw DomainError("finite_orbits: N must be positive");
  return orbits_impl(act, N, nullptr);
}

FiniteOrbit orbit_of(const ToralAction& act, const std::vector<i64>& p, i64 N) {
  if (N < 1) throw DomainError("orbit_of: N must be positive");
  if (static_cast<int>(p.size()) != act.dim()) throw DomainError("orbit_of: wrong dimension");
  return orbits_impl(act, N, &p)[0];
}

std::set<i64> orbit_size_census(const ToralAction& act, i64 Nmax) {
  if (Nmax < 1) throw DomainError("orbit_size_census: Nmax must be positive");
  std::set<i64> sizes;
  if (act.trivial()) return {1};
  for (i64 N = 1; N <= Nmax; ++N)
    for (const auto& O : finite_orbits(act, N)) sizes.insert(O.size());
  return sizes;
}

bool character_valid(const Isotropy& iso, const Character& chi) {
  return is_integer(chi.theta_torsion * Rational(iso.w / iso.torsion_step));
}

Rational character_phase(const Isotropy& iso, const Character& chi, i64 i, i64 j) {
  if (!iso.contains(i, j)) throw DomainError("character_phase: element not in isotropy");
  i64 k = iso.has_free ? j / iso.free_power : 0;
  i64 r = mod_pos(i - k * iso.torsion_offset, iso.w);
  return chi.theta_free * Rational(k) + chi.theta_torsion * Rational(r / iso.torsion_step);
}

std::complex<double> trace_from_orbit(const FiniteOrbit& O, const Character& chi,
                                      const std::vector<i64>& r_coords, i64 i, i64 j) {
  if (!character_valid(O.isotropy, chi)) throw DomainError("invalid character");
  if (!O.isotropy.contains(i, j)) return {0.0, 0.0};
  Rational ph = character_phase(O.isotropy, chi, i, j);
  ph -= Rational(rat_num(ph) / rat_den(ph));
  const double two_pi = 2 * M_PI;
  std::complex<double> chiv = std::polar(1.0, two_pi * ph.convert_to<double>());
  const i64 N = O.denominator;
  std::complex<double> sum{0.0, 0.0};
  for (const auto& p : O.points) {
    i128 s = 0;
    for (size_t k = 0; k < p.size(); ++k)
      s += static_cast<i128>(p[k]) * mod_pos(r_coords[k], N);
    i64 m = static_cast<i64>(s % N);
    sum += std::polar(1.0, two_pi * static_cast<double>(m) / static_cast<double>(N));
  }
  return chiv * sum / static_cast<double>(O.size());
}

std::complex<double> trace_from_orbit(const SystemContext& sys, const IdealHNF& x,
                                      const FiniteOrbit& O, const Character& chi,
                                      const IntElt& r, const FieldElement& g) {
  auto [i, j] = sys.unit_exponents(g);
  IdealHNF J = x;
  J.den = 1;
  auto c = coords_in(J, r);
  std::vector<i64> rc(c.begin(), c.begin() + x.K.degree());
  return trace_from_orbit(O, chi, rc, i, j);
}

std::string to_string(const TorusPoint& p) {
  std::string s = "(";
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += to_string(p[i]);
  }
  return s + ")";
}

}  // namespace cmkms
