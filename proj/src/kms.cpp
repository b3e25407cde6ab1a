#include "cmkms/kms.hpp"

#include <algorithm>
#include <cmath>

namespace cmkms {

// ---- spectra -------------------------------------------------------------

SpectrumMultiset make_spectrum(std::vector<SpectrumLevel> levels, double critical_beta) {
  if (levels.empty()) throw DomainError("empty spectrum");
  for (const auto& l : levels)
    if (l.multiplicity <= 0) throw DomainError("spectrum multiplicities must be positive");
  std::sort(levels.begin(), levels.end(),
            [](const SpectrumLevel& a, const SpectrumLevel& b) { return a.h < b.h; });
  SpectrumMultiset s;
  s.critical_beta = critical_beta;
  const Real h0 = levels.front().h;
  const std::optional<Rational> r0 = levels.front().ratio;
  for (auto l : levels) {
    l.h -= h0;
    if (l.ratio && r0) l.ratio = *l.ratio / *r0;
    else l.ratio.reset();
    if (!s.levels.empty()) {
      auto& last = s.levels.back();
      bool same = (l.ratio && last.ratio) ? *l.ratio == *last.ratio
                                          : abs(l.h - last.h) < Real(1e-40);
      if (same) {
        last.multiplicity = checked_add(last.multiplicity, l.multiplicity);
        continue;
      }
    }
    s.levels.push_back(l);
  }
  s.levels.front().h = 0;
  return s;
}

GibbsResult gibbs_partition(const SpectrumMultiset& spec, const Real& beta) {
  if (beta < spec.critical_beta)
    throw DomainError("beta below the critical value of the spectrum");
  GibbsResult g;
  g.weights.reserve(spec.levels.size());
  for (const auto& l : spec.levels) {
    Real w = Real(l.multiplicity) * exp(-beta * l.h);
    g.weights.push_back(w);
    g.Z += w;
  }
  for (auto& w : g.weights) w /= g.Z;
  return g;
}

Rational gibbs_partition_exact(const SpectrumMultiset& spec, int beta) {
  if (beta < 0) throw DomainError("exact partition function needs beta >= 0");
  // sum a_k (q_k/p_k)^beta over a common denominator
  BigInt L = 1;
  for (const auto& l : spec.levels) {
    if (!l.ratio) throw DomainError("exact partition function needs rational levels");
    BigInt p = rat_num(*l.ratio);
    L = boost::multiprecision::lcm(L, p);
  }
  BigInt num = 0;
  for (const auto& l : spec.levels) {
    BigInt p = rat_num(*l.ratio), q = rat_den(*l.ratio);
    BigInt f = L / p;
    num += BigInt(l.multiplicity) * boost::multiprecision::pow(BigInt(f * q), beta);
  }
  return Rational(num, boost::multiprecision::pow(L, beta));
}

std::vector<Real> quasi_family(const SpectrumMultiset& spec, const Real& beta0,
                               const Real& beta) {
  if (beta0 <= spec.critical_beta || beta <= spec.critical_beta)
    throw DomainError("quasi-free family: beta at or below the critical value");
  return gibbs_partition(spec, beta).weights;
}

GroundLimit ground_limit(const SpectrumMultiset& spec, const Real& beta, const Real& beta0) {
  if (beta < beta0) throw DomainError("ground_limit: beta must be >= beta0");
  GroundLimit g;
  g.weights.assign(spec.levels.size(), Real(0));
  g.weights[0] = 1;
  if (spec.levels.size() == 1) return g;
  const Real d1 = spec.levels[1].h;
  Real rest{0};
  for (size_t k = 1; k < spec.levels.size(); ++k) {
    const auto& l = spec.levels[k];
    g.gap += Real(l.multiplicity) * exp(-beta * l.h);
    rest += Real(l.multiplicity) * exp(-beta0 * (l.h - d1));
  }
  g.bound = exp(-beta * d1) * rest;
  g.bound_holds = g.gap <= g.bound * (1 + Real(1e-30));
  return g;
}

std::vector<LiouvilleLine> liouville_spectrum(const SpectrumMultiset& spec, const Real& cutoff) {
  std::vector<LiouvilleLine> lines;
  for (const auto& a : spec.levels)
    for (const auto& b : spec.levels) {
      Real v = a.h - b.h;
      if (abs(v) > cutoff) continue;
      LiouvilleLine l;
      l.value = v;
      l.multiplicity = checked_mul(a.multiplicity, b.multiplicity);
      if (a.ratio && b.ratio) l.ratio = *a.ratio / *b.ratio;
      lines.push_back(l);
    }
  std::sort(lines.begin(), lines.end(),
            [](const LiouvilleLine& x, const LiouvilleLine& y) { return x.value < y.value; });
  std::vector<LiouvilleLine> merged;
  for (const auto& l : lines) {
    if (!merged.empty()) {
      auto& m = merged.back();
      bool same = (l.ratio && m.ratio) ? *l.ratio == *m.ratio
                                       : abs(l.value - m.value) < Real(1e-40);
      if (same) {
        m.multiplicity = checked_add(m.multiplicity, l.multiplicity);
        continue;
      }
    }
    merged.push_back(l);
  }
  return merged;
}

SpectrumMultiset hamiltonian_spectrum(const DirichletSeries& zeta_kappa, i64 min_norm,
                                      i64 orbit_size) {
  if (orbit_size < 1) throw DomainError("orbit size must be positive");
  if (min_norm < 1 || min_norm > zeta_kappa.X() || zeta_kappa[min_norm] == 0)
    throw DomainError("no ideal of the class below the truncation");
  std::vector<SpectrumLevel> levels;
  for (i64 n = 1; n <= zeta_kappa.X(); ++n) {
    if (zeta_kappa.a[n] == 0) continue;
    if (n < min_norm) throw DomainError("class has an ideal below its minimal norm");
    SpectrumLevel l;
    l.ratio = Rational(n, min_norm);
    l.h = log(Real(n) / Real(min_norm));
    l.multiplicity = checked_mul(checked_mul(zeta_kappa.a[n], n), orbit_size);
    levels.push_back(l);
  }
  SpectrumMultiset s = make_spectrum(std::move(levels), 2.0);
  s.X = zeta_kappa.X();
  s.meta = zeta_kappa.label;
  return s;
}

SpectrumMultiset hamiltonian_spectrum(const SystemContext& sys, i64 cls, i64 X,
                                      i64 orbit_size) {
  DirichletSeries z = build_zeta(sys, ZetaKind::partial, X, cls);
  i64 nmin = sys.cls.representatives.at(cls).int_norm();
  if (nmin > X) throw DomainError("no ideal of the class below the truncation");
  return hamiltonian_spectrum(z, nmin, orbit_size);
}

ScaledSeries partition_function(const DirichletSeries& zeta_kappa, i64 min_norm,
                                i64 orbit_size) {
  if (orbit_size < 1)
    throw DomainError("partition function needs a finite orbit (type I trace)");
  ScaledSeries s;
  s.scale = min_norm;
  s.multiplier = orbit_size;
  s.base = shifted(zeta_kappa);
  return s;
}

ScaledSeries partition_function(const SystemContext& sys, i64 cls, i64 orbit_size, i64 X) {
  if (orbit_size < 1)
    throw DomainError("partition function needs a finite orbit (type I trace)");
  DirichletSeries z = build_zeta(sys, ZetaKind::partial, X, cls);
  return partition_function(z, sys.cls.representatives.at(cls).int_norm(), orbit_size);
}

TypeLabel classify_type(TraceKind kind, i64 orbit_size) {
  if (kind == TraceKind::haar) return {"II_1", "II_inf"};
  if (orbit_size < 1) throw DomainError("orbit size must be positive");
  return {"I_" + std::to_string(orbit_size), "I_inf"};
}

// ---- words ---------------------------------------------------------------

OperatorWord operator*(const OperatorWord& a, const OperatorWord& b) {
  OperatorWord w = a;
  w.insert(w.end(), b.begin(), b.end());
  return w;
}

OperatorWord adjoint(const OperatorWord& w, const FieldDescriptor& K) {
  (void)K;
  OperatorWord r;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    OpLetter l = *it;
    switch (l.kind) {
      case OpLetter::Kind::S: l.kind = OpLetter::Kind::Sstar; break;
      case OpLetter::Kind::Sstar: l.kind = OpLetter::Kind::S; break;
      case OpLetter::Kind::U: l.elt = IntElt{-l.elt.x, -l.elt.y}; break;
      case OpLetter::Kind::E: break;
    }
    r.push_back(l);
  }
  return r;
}

Rational eigen_norm(const OperatorWord& w, const FieldDescriptor& K) {
  Rational r = 1;
  for (const auto& l : w) {
    if (l.kind == OpLetter::Kind::S) r *= std::abs(norm(K, l.elt));
    if (l.kind == OpLetter::Kind::Sstar) r /= std::abs(norm(K, l.elt));
  }
  return r;
}

std::string to_string(const OperatorWord& w, const FieldDescriptor& K) {
  if (w.empty()) return "1";
  std::string s;
  for (const auto& l : w) {
    if (!s.empty()) s += " ";
    std::string e = to_string(K, to_field(l.elt));
    switch (l.kind) {
      case OpLetter::Kind::S: s += "s[" + e + "]"; break;
      case OpLetter::Kind::Sstar: s += "s*[" + e + "]"; break;
      case OpLetter::Kind::U: s += "u[" + e + "]"; break;
      case OpLetter::Kind::E: s += "e[" + e + "+" + to_string(l.ideal) + "]"; break;
    }
  }
  return s;
}

OperatorWord MonomialSpec::word() const {
  OperatorWord w;
  w.push_back({OpLetter::Kind::Sstar, b, {}});
  w.push_back({OpLetter::Kind::E, y, ideal_b});
  w.push_back({OpLetter::Kind::U, d, {}});
  w.push_back({OpLetter::Kind::S, c, {}});
  return w;
}

MonomialSpec identity_monomial(const FieldDescriptor& K) {
  MonomialSpec m;
  m.ideal_b = unit_ideal(K);
  return m;
}

// ---- engine --------------------------------------------------------------

namespace {

std::array<i64, 2> coords2(const IdealHNF& I, const IntElt& e) { return coords_in(I, e); }

IntElt sub_i(const IntElt& a, const IntElt& b) { return sub(a, b); }

bool divisible(const FieldDescriptor& K, const IntElt& z, const IntElt& b, IntElt& q) {
  if (K.is_rational()) {
    if (z.x % b.x != 0) return false;
    q = IntElt{z.x / b.x, 0};
    return true;
  }
  i64 nb = norm(K, b);
  IntElt t = mul(K, z, conjugate(K, b));
  if (t.x % nb != 0 || t.y % nb != 0) return false;
  q = IntElt{t.x / nb, t.y / nb};
  return true;
}

}  // namespace

KmsEngine::KmsEngine(const SystemContext& sys, i64 cls, const FiniteOrbit& orbit,
                     const Character& chi, i64 X)
    : sys_(sys), cls_(cls), orbit_(orbit), chi_(chi), X_(X) {
  if (cls < 0 || cls >= sys.cls.order()) throw DomainError("class index out of range");
  if (X < 1) throw DomainError("truncation must be >= 1");
  if (!character_valid(orbit.isotropy, chi)) throw DomainError("invalid character for the orbit");
  ak_ = sys.cls.representatives[cls];
  N_ = orbit.denominator;
  n_ = sys.K().degree();
  const FieldDescriptor& K = sys.K();

  for (const auto& [nrm, list] : enumerate_ideals(K, X, sys.m().m0))
    for (const auto& I : list)
      if (sys.class_of(I) == cls) ideals_.push_back(I);
  if (ideals_.empty()) throw DomainError("no ideal of the class below the truncation");
  zeta_ = make_series(K, X, "zeta_kappa");
  for (const auto& I : ideals_) zeta_.a[I.int_norm()] += 1;

  // (1/|O|) sum_p e^{2 pi i <p, r>/N} for all r mod N
  const i64 cells = n_ == 1 ? N_ : N_ * N_;
  orbit_sum_.assign(cells, {0, 0});
  const long double two_pi = 2 * std::acos(-1.0L);
  for (i64 c = 0; c < cells; ++c) {
    i64 r0 = n_ == 1 ? c : c / N_, r1 = n_ == 1 ? 0 : c % N_;
    std::complex<long double> s{0, 0};
    for (const auto& p : orbit.points) {
      i64 m = mul_mod(p[0], r0, N_);
      if (n_ == 2) m = (m + mul_mod(p[1], r1, N_)) % N_;
      s += std::polar(1.0L, two_pi * static_cast<long double>(m) / static_cast<long double>(N_));
    }
    orbit_sum_[c] = s / static_cast<long double>(orbit.size());
  }

  auto to_mod = [&](const IntMat& A) {
    Mat2 M{};
    for (int r = 0; r < n_; ++r)
      for (int c = 0; c < n_; ++c) {
        BigInt v = A(r, c) % N_;
        if (v < 0) v += N_;
        M[r][c] = to_i64(v);
      }
    return M;
  };
  const RestrictedUnits& ru = sys.restricted;
  zeta_mat_ = to_mod(action_matrix(ru.torsion_generator, ak_));
  if (ru.free_generator) {
    eta_mat_ = to_mod(action_matrix(*ru.free_generator, ak_));
    eta_inv_mat_ = to_mod(action_matrix(inverse(K, *ru.free_generator), ak_));
  }
}

void KmsEngine::check_beta(double beta) const {
  if (!(beta > 2)) throw DomainError("KMS evaluation needs beta > 2");
}

long double KmsEngine::normalizer(double beta) {
  long double z = 0;
  for (const auto& I : ideals_)
    z += std::pow(static_cast<long double>(I.int_norm()), 1.0L - beta);
  return z;
}

long double KmsEngine::tail_bound(double beta) {
  check_beta(beta);
  Real T = cmkms::tail_bound(shifted(zeta_), Real(beta));
  return 2 * T.convert_to<long double>() / normalizer(beta);
}

KmsEngine::Mat2 KmsEngine::unit_matrix(i64 i, i64 j) {
  auto key = std::make_pair(i, j);
  auto it = unit_mats_.find(key);
  if (it != unit_mats_.end()) return it->second;
  auto mm = [&](const Mat2& A, const Mat2& B) {
    Mat2 C{};
    for (int r = 0; r < n_; ++r)
      for (int c = 0; c < n_; ++c) {
        i64 s = 0;
        for (int k = 0; k < n_; ++k) s = (s + mul_mod(A[r][k], B[k][c], N_)) % N_;
        C[r][c] = s;
      }
    return C;
  };
  Mat2 M{};
  for (int k = 0; k < n_; ++k) M[k][k] = 1 % N_;
  const i64 w = sys_.restricted.torsion_order;
  for (i64 k = 0; k < mod_pos(i, w); ++k) M = mm(zeta_mat_, M);
  for (i64 k = 0; k < std::abs(j); ++k) M = mm(j > 0 ? eta_mat_ : eta_inv_mat_, M);
  unit_mats_[key] = M;
  return M;
}

std::array<i64, 2> KmsEngine::apply(const Mat2& M, const std::array<i64, 2>& v) const {
  std::array<i64, 2> r{0, 0};
  for (int a = 0; a < n_; ++a) {
    i64 s = 0;
    for (int b = 0; b < n_; ++b) s = (s + mul_mod(M[a][b], mod_pos(v[b], N_), N_)) % N_;
    r[a] = s;
  }
  return r;
}

KmsEngine::Mat2 KmsEngine::lattice_map(const FieldElement& t, const IdealHNF& from) {
  const FieldDescriptor& K = sys_.K();
  Mat2 M{};
  for (int k = 0; k < n_; ++k) {
    FieldElement v = mul(K, t, to_field(from.basis(k)));
    if (!is_integral(v) || !contains(ak_, v))
      throw DomainError("transport does not land in the reference ideal");
    auto co = coords2(ak_, to_int(v));
    for (int r = 0; r < n_; ++r) M[r][k] = mod_pos(co[r], N_);
  }
  return M;
}

const KmsEngine::Transport& KmsEngine::transport(const IdealHNF& x) {
  auto it = transports_.find(x);
  if (it != transports_.end()) return it->second;
  Transport tr;
  tr.t = transporter(x, ak_, sys_);
  tr.M = lattice_map(tr.t, x);
  return transports_.emplace(x, tr).first->second;
}

std::pair<i64, i64> KmsEngine::unit_exps(const FieldElement& u) const {
  return sys_.unit_exponents(u);
}

std::complex<long double> KmsEngine::tau(const std::array<i64, 2>& r, i64 i, i64 j) {
  const Isotropy& iso = orbit_.isotropy;
  const i64 w = sys_.restricted.torsion_order;
  i = mod_pos(i, w);
  if (!iso.contains(i, j)) return {0, 0};
  auto key = std::make_pair(i, j);
  auto it = chi_cache_.find(key);
  std::complex<long double> cv;
  if (it != chi_cache_.end()) {
    cv = it->second;
  } else {
    Rational ph = character_phase(iso, chi_, i, j);
    ph -= Rational(rat_num(ph) / rat_den(ph));
    cv = std::polar(1.0L, 2 * std::acos(-1.0L) * ph.convert_to<long double>());
    chi_cache_[key] = cv;
  }
  i64 c = n_ == 1 ? mod_pos(r[0], N_) : mod_pos(r[0], N_) * N_ + mod_pos(r[1], N_);
  return cv * orbit_sum_[c];
}

KmsValue KmsEngine::eval_formula(const MonomialSpec& m, double beta) {
  check_beta(beta);
  const FieldDescriptor& K = sys_.K();
  KmsValue out;
  out.X = X_;
  out.beta = beta;
  out.tail_bound = tail_bound(beta);
  const long double Z = normalizer(beta);
  if (norm(K, m.b) == 0 || norm(K, m.c) == 0) throw DomainError("b and c must be nonzero");
  if (!monoid_contains(to_field(m.b), sys_) || !monoid_contains(to_field(m.c), sys_))
    throw DomainError("b and c must lie in R_{m,Gamma}");
  // g = b^{-1} c must be in R*_{m,Gamma}
  FieldElement g = divide(K, to_field(m.c), to_field(m.b));
  std::pair<i64, i64> ge;
  try {
    ge = unit_exps(g);
  } catch (const DomainError&) {
    return out;
  }
  const IntElt gm1 = sub(to_int(g), IntElt{1, 0});
  const IntElt bg = mul(K, m.b, gm1);
  const FieldElement binv = inverse(K, to_field(m.b));
  std::complex<long double> sum{0, 0};
  for (const auto& A : ideals_) {
    IdealHNF bA = ideal_scale(A, to_field(m.b));
    if (!ideal_contains(m.ideal_b, bA)) continue;
    const Transport tr = transport(A);
    // r lives in A; b*r lives in bA and t_A r = (t_A/b)(b r)
    Mat2 M = lattice_map(mul(K, tr.t, binv), bA);
    const long double wA = std::pow(static_cast<long double>(A.int_norm()), -static_cast<long double>(beta));
    const i64 ax = A.a, ay = n_ == 1 ? 1 : A.c;
    std::complex<long double> part{0, 0};
    for (i64 u = 0; u < ax; ++u)
      for (i64 v = 0; v < ay; ++v) {
        IntElt x{u, v};
        IntElt e1 = sub(add(m.d, mul(K, m.c, x)), m.y);
        if (!contains(m.ideal_b, e1)) continue;
        IntElt wv = add(m.d, mul(K, bg, x));
        if (!contains(bA, wv)) continue;
        auto r = apply(M, coords2(bA, wv));
        part += tau(r, ge.first, ge.second);
      }
    sum += wA * part;
  }
  out.value = sum / Z;
  return out;
}

KmsValue KmsEngine::eval_trace(const OperatorWord& word, double beta) {
  check_beta(beta);
  const FieldDescriptor& K = sys_.K();
  KmsValue out;
  out.X = X_;
  out.beta = beta;
  out.tail_bound = tail_bound(beta);
  const long double Z = normalizer(beta);
  for (const auto& l : word)
    if ((l.kind == OpLetter::Kind::S || l.kind == OpLetter::Kind::Sstar) &&
        (norm(K, l.elt) == 0 || !monoid_contains(to_field(l.elt), sys_)))
      throw DomainError("isometries need elements of R_{m,Gamma}");

  // Per block the ideals along the word do not depend on the vector.
  struct Step {
    OpLetter::Kind kind;
    IntElt elt;
    const IdealHNF* E = nullptr;
    IdealHNF I;        // ideal after the step (S) or before it (Sstar, U, E)
    IdealHNF J;        // ideal after the step for Sstar
    Mat2 T{};          // transport matrix of the ideal the translation lives in
    Mat2 Mu{};         // action of the unit part (or its inverse for Sstar)
    std::pair<i64, i64> ue{0, 0};
  };
  std::complex<long double> sum{0, 0};
  for (const auto& C : ideals_) {
    std::vector<Step> steps;
    IdealHNF I = C;
    bool alive = true;
    for (auto it = word.rbegin(); it != word.rend() && alive; ++it) {
      Step s;
      s.kind = it->kind;
      s.elt = it->elt;
      switch (it->kind) {
        case OpLetter::Kind::S: {
          IdealHNF J = ideal_scale(I, to_field(it->elt));
          const FieldElement tI = transport(I).t;
          const Transport tJ = transport(J);
          s.I = J;
          s.T = tJ.M;
          FieldElement u = mul(K, to_field(it->elt), divide(K, tJ.t, tI));
          s.ue = unit_exps(u);
          s.Mu = unit_matrix(s.ue.first, s.ue.second);
          I = J;
          break;
        }
        case OpLetter::Kind::Sstar: {
          IdealHNF J = ideal_scale(I, inverse(K, to_field(it->elt)));
          if (!J.is_integral()) {
            alive = false;
            break;
          }
          const FieldElement tJ = transport(J).t;
          const Transport tI = transport(I);
          s.I = I;
          s.J = J;
          s.T = tI.M;
          FieldElement u = mul(K, to_field(it->elt), divide(K, tI.t, tJ));
          s.ue = unit_exps(u);
          s.Mu = unit_matrix(-s.ue.first, -s.ue.second);
          I = J;
          break;
        }
        case OpLetter::Kind::U:
          s.I = I;
          s.T = transport(I).M;
          break;
        case OpLetter::Kind::E:
          if (!ideal_contains(it->ideal, I)) alive = false;
          s.I = I;
          s.E = &it->ideal;
          break;
      }
      steps.push_back(s);
    }
    if (!alive || I != C) continue;

    const long double wC = std::pow(static_cast<long double>(C.int_norm()), -static_cast<long double>(beta));
    const i64 ax = C.a, ay = n_ == 1 ? 1 : C.c;
    std::complex<long double> part{0, 0};
    for (i64 u0 = 0; u0 < ax; ++u0)
      for (i64 v0 = 0; v0 < ay; ++v0) {
        const IntElt z0{u0, v0};
        IntElt z = z0;
        std::array<i64, 2> r{0, 0};
        i64 gi = 0, gj = 0;
        bool ok = true;
        for (const auto& s : steps) {
          switch (s.kind) {
            case OpLetter::Kind::S: {
              IntElt w = mul(K, s.elt, z);
              IntElt zb = reduce_mod(s.I, w);
              auto tr = apply(s.T, coords2(s.I, sub_i(w, zb)));
              auto gr = apply(s.Mu, r);
              for (int k = 0; k < n_; ++k) r[k] = (tr[k] + gr[k]) % N_;
              gi += s.ue.first;
              gj += s.ue.second;
              z = zb;
              break;
            }
            case OpLetter::Kind::U: {
              IntElt w = add(s.elt, z);
              IntElt zb = reduce_mod(s.I, w);
              auto tr = apply(s.T, coords2(s.I, sub_i(w, zb)));
              for (int k = 0; k < n_; ++k) r[k] = (r[k] + tr[k]) % N_;
              z = zb;
              break;
            }
            case OpLetter::Kind::E:
              ok = contains(*s.E, sub_i(z, s.elt));
              break;
            case OpLetter::Kind::Sstar: {
              IntElt q;
              if (!divisible(K, z, s.elt, q)) {
                ok = false;
                break;
              }
              IntElt z1 = reduce_mod(s.J, q);
              // the S_b element at (J, z1) is (t_I(b z1 - z), u); multiply by its inverse
              IntElt w = mul(K, s.elt, z1);
              auto rb = apply(s.T, coords2(s.I, sub_i(w, z)));
              std::array<i64, 2> diff{0, 0};
              for (int k = 0; k < n_; ++k) diff[k] = mod_pos(r[k] - rb[k], N_);
              r = apply(s.Mu, diff);
              gi -= s.ue.first;
              gj -= s.ue.second;
              z = z1;
              break;
            }
          }
          if (!ok) break;
        }
        if (!ok || z != z0) continue;
        part += tau(r, gi, gj);
      }
    sum += wC * part;
  }
  out.value = sum / Z;
  return out;
}

long double KmsEngine::measure(const IdealHNF& a, double beta) {
  check_beta(beta);
  if (!a.is_integral()) throw DomainError("measure needs an integral ideal");
  if (!coprime(a, sys_.m().m0)) throw DomainError("measure needs an ideal prime to m0");
  long double s = 0;
  for (const auto& B : ideals_)
    if (ideal_contains(a, B))
      s += std::pow(static_cast<long double>(B.int_norm()), 1.0L - beta);
  return s / (static_cast<long double>(a.int_norm()) * normalizer(beta));
}

KmsResidual KmsEngine::residual(const OperatorWord& w1, const OperatorWord& w2, double beta) {
  check_beta(beta);
  KmsResidual r;
  r.eigen_norm = eigen_norm(w1, sys_.K());
  const long double f =
      std::pow(r.eigen_norm.convert_to<long double>(), -static_cast<long double>(beta));
  r.lhs = eval_trace(w1 * w2, beta).value;
  r.rhs = f * eval_trace(w2 * w1, beta).value;
  r.residual = std::abs(r.lhs - r.rhs);
  r.bound = (1 + f) * tail_bound(beta);
  return r;
}

namespace {

IntElt random_elt(std::mt19937_64& rng, i64 r) {
  std::uniform_int_distribution<i64> U(-r, r);
  return IntElt{U(rng), U(rng)};
}

IntElt random_monoid_elt(const SystemContext& sys, std::mt19937_64& rng, i64 max_norm) {
  const bool q = sys.K().is_rational();
  for (;;) {
    IntElt e = random_elt(rng, 4);
    if (q) e.y = 0;
    i64 n = std::abs(norm(sys.K(), e));
    if (n == 0 || n > max_norm) continue;
    if (monoid_contains(to_field(e), sys)) return e;
  }
}

}  // namespace

MonomialSpec random_monomial(const SystemContext& sys, std::mt19937_64& rng,
                             const std::vector<IdealHNF>& small_ideals) {
  const FieldDescriptor& K = sys.K();
  MonomialSpec m;
  m.b = random_monoid_elt(sys, rng, 12);
  if (rng() % 2 == 0) {
    i64 i = static_cast<i64>(rng() % std::max<i64>(1, sys.restricted.torsion_order));
    i64 j = sys.restricted.free_generator ? static_cast<i64>(rng() % 3) - 1 : 0;
    m.c = to_int(mul(K, to_field(m.b), sys.unit_from_exponents(i, j)));
  } else {
    m.c = random_monoid_elt(sys, rng, 12);
  }
  m.d = random_elt(rng, 5);
  if (rng() % 2 == 0) m.d = mul(K, m.b, random_elt(rng, 1));
  m.y = rng() % 2 == 0 ? m.d : random_elt(rng, 5);
  if (K.is_rational()) m.y.y = m.d.y = 0;
  m.ideal_b = rng() % 2 == 0 || small_ideals.empty()
                  ? unit_ideal(K)
                  : small_ideals[rng() % small_ideals.size()];
  return m;
}

}  // namespace cmkms
