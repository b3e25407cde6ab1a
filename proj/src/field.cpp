#include "cmkms/field.hpp"

#include <algorithm>
#include <cmath>

namespace cmkms {

std::string FieldDescriptor::name() const {
  if (is_rational()) return "Q";
  return "Q(sqrt(" + std::to_string(d) + "))";
}

std::string FieldDescriptor::omega_rule() const {
  if (is_rational()) return "1";
  return t == 1 ? "(1+sqrt(d))/2" : "sqrt(d)";
}

FieldDescriptor make_rational_field() { return FieldDescriptor{}; }

FieldDescriptor make_quadratic_field(i64 d) {
  if (d == 0 || d == 1) throw DomainError("d must not be 0 or 1");
  if (!is_squarefree(d))
    throw DomainError("d = " + std::to_string(d) + " is not squarefree");
  FieldDescriptor K;
  K.kind = FieldDescriptor::Kind::quadratic;
  K.d = d;
  if (mod_pos(d, 4) == 1) {
    K.D = d;
    K.t = 1;
    K.n = (d - 1) / 4;
  } else {
    K.D = 4 * d;
    K.t = 0;
    K.n = d;
  }
  K.real_places = d > 0 ? 2 : 0;
  K.complex_places = d > 0 ? 0 : 1;
  return K;
}

FieldDescriptor make_field(std::optional<i64> d) {
  return d ? make_quadratic_field(*d) : make_rational_field();
}

FieldElement add(const FieldElement& a, const FieldElement& b) {
  return {a.x + b.x, a.y + b.y};
}
FieldElement sub(const FieldElement& a, const FieldElement& b) {
  return {a.x - b.x, a.y - b.y};
}
FieldElement neg(const FieldElement& a) { return {-a.x, -a.y}; }
FieldElement scale(const FieldElement& a, const Rational& r) {
  return {a.x * r, a.y * r};
}

FieldElement mul(const FieldDescriptor& K, const FieldElement& a,
                 const FieldElement& b) {
  if (K.is_rational()) return {a.x * b.x, Rational(0)};
  Rational yy = a.y * b.y;
  return {a.x * b.x + yy * K.n, a.x * b.y + a.y * b.x + yy * K.t};
}

FieldElement conjugate(const FieldDescriptor& K, const FieldElement& a) {
  if (K.is_rational()) return a;
  return {a.x + a.y * K.t, -a.y};
}

Rational norm(const FieldDescriptor& K, const FieldElement& e) {
  if (K.is_rational()) return e.x;
  return e.x * e.x + e.x * e.y * K.t - e.y * e.y * K.n;
}

FieldElement inverse(const FieldDescriptor& K, const FieldElement& a) {
  if (a.is_zero()) throw DomainError("inverse of zero");
  if (K.is_rational()) return FieldElement(Rational(1) / a.x, Rational(0));
  Rational N = norm(K, a);
  return scale(conjugate(K, a), Rational(1) / N);
}

FieldElement divide(const FieldDescriptor& K, const FieldElement& a,
                    const FieldElement& b) {
  return mul(K, a, inverse(K, b));
}

FieldElement power(const FieldDescriptor& K, const FieldElement& a, i64 e) {
  FieldElement base = e < 0 ? inverse(K, a) : a;
  if (e < 0) e = -e;
  FieldElement r(1);
  while (e > 0) {
    if (e & 1) r = mul(K, r, base);
    base = mul(K, base, base);
    e >>= 1;
  }
  return r;
}

bool is_integral(const FieldElement& a) {
  return is_integer(a.x) && is_integer(a.y);
}

IntElt to_int(const FieldElement& a) { return {to_i64(a.x), to_i64(a.y)}; }
FieldElement to_field(const IntElt& a) {
  return {Rational(a.x), Rational(a.y)};
}

IntElt add(const IntElt& a, const IntElt& b) {
  return {checked_add(a.x, b.x), checked_add(a.y, b.y)};
}
IntElt sub(const IntElt& a, const IntElt& b) {
  return {checked_add(a.x, -b.x), checked_add(a.y, -b.y)};
}

IntElt mul(const FieldDescriptor& K, const IntElt& a, const IntElt& b) {
  if (K.is_rational()) return {checked_mul(a.x, b.x), 0};
  i64 yy = checked_mul(a.y, b.y);
  return {checked_add(checked_mul(a.x, b.x), checked_mul(yy, K.n)),
          checked_add(checked_add(checked_mul(a.x, b.y), checked_mul(a.y, b.x)),
                      checked_mul(yy, K.t))};
}

IntElt conjugate(const FieldDescriptor& K, const IntElt& a) {
  if (K.is_rational()) return a;
  return {checked_add(a.x, checked_mul(a.y, K.t)), -a.y};
}

i64 norm(const FieldDescriptor& K, const IntElt& e) {
  if (K.is_rational()) return e.x;
  return checked_add(
      checked_add(checked_mul(e.x, e.x), checked_mul(checked_mul(e.x, e.y), K.t)),
      -checked_mul(checked_mul(e.y, e.y), K.n));
}

MatX<Rational> multiplication_matrix(const FieldDescriptor& K,
                                     const FieldElement& e) {
  if (K.is_rational()) {
    MatX<Rational> M(1, 1);
    M(0, 0) = e.x;
    return M;
  }
  // e*1 = x + y w ; e*w = n y + (x + t y) w
  MatX<Rational> M(2, 2);
  M(0, 0) = e.x;
  M(1, 0) = e.y;
  M(0, 1) = e.y * K.n;
  M(1, 1) = e.x + e.y * K.t;
  return M;
}

std::pair<Rational, Rational> norm_trace(const FieldDescriptor& K,
                                         const FieldElement& e) {
  MatX<Rational> M = multiplication_matrix(K, e);
  if (M.rows() == 1) return {M(0, 0), M(0, 0)};
  return {M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0), M(0, 0) + M(1, 1)};
}

namespace {

// e at place p is A + s*C*sqrt(d), s = +1 for place 0 and -1 for place 1.
void split_embedding(const FieldDescriptor& K, const FieldElement& e,
                     int place, Rational& A, Rational& C) {
  if (K.t == 1) {
    A = e.x + e.y / 2;
    C = e.y / 2;
  } else {
    A = e.x;
    C = e.y;
  }
  if (place == 1) C = -C;
}

int sign_of(const Rational& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

}  // namespace

int sign_at(const FieldDescriptor& K, const FieldElement& e, int place) {
  if (e.is_zero()) throw DomainError("sign of zero element");
  if (K.is_rational()) return sign_of(e.x);
  if (!K.is_real_quadratic()) throw DomainError("no real places");
  Rational A, C;
  split_embedding(K, e, place, A, C);
  int sa = sign_of(A), sc = sign_of(C);
  if (sa >= 0 && sc >= 0) return 1;
  if (sa <= 0 && sc <= 0) return -1;
  Rational a2 = A * A, c2 = C * C * K.d;
  return a2 > c2 ? sa : sc;
}

std::vector<int> real_signs(const FieldDescriptor& K, const FieldElement& e) {
  if (e.is_zero()) throw DomainError("sign of zero element");
  std::vector<int> out;
  int r = K.is_rational() ? 1 : K.real_places;
  for (int p = 0; p < r; ++p) out.push_back(sign_at(K, e, p));
  return out;
}

long double embed(const FieldDescriptor& K, const FieldElement& e, int place) {
  if (K.is_rational()) return e.x.convert_to<long double>();
  if (K.is_imaginary())
    return std::sqrt(norm(K, e).convert_to<long double>());
  Rational A, C;
  split_embedding(K, e, place, A, C);
  return A.convert_to<long double>() +
         C.convert_to<long double>() * std::sqrt(static_cast<long double>(K.d));
}

Real embed_precise(const FieldDescriptor& K, const FieldElement& e,
                   int place) {
  auto to_real = [](const Rational& q) {
    return Real(rat_num(q)) / Real(rat_den(q));
  };
  if (K.is_rational()) return to_real(e.x);
  if (K.is_imaginary()) return sqrt(to_real(norm(K, e)));
  Rational A, C;
  split_embedding(K, e, place, A, C);
  return to_real(A) + to_real(C) * sqrt(Real(K.d));
}

namespace {

FieldElement fundamental_unit(const FieldDescriptor& K) {
  // Continued fraction of w = (P + sqrt d)/Q; the first convergent p/q with
  // |N(p - q w)| = 1 yields the fundamental unit.
  const BigInt d = K.d;
  const BigInt sd = BigInt(isqrt(K.d));
  BigInt P = K.t == 1 ? 1 : 0;
  BigInt Q = K.t == 1 ? 2 : 1;
  BigInt p_prev = 1, p_prev2 = 0, q_prev = 0, q_prev2 = 1;
  for (int iter = 0; iter < 1000000; ++iter) {
    BigInt a;
    if (Q > 0) {
      a = (P + sd) / Q;
      if ((P + sd) < 0 && (P + sd) % Q != 0) a -= 1;
    } else {
      BigInt aq = -Q;
      BigInt f = (P + sd) / aq;
      if ((P + sd) < 0 && (P + sd) % aq != 0) f -= 1;
      a = -(f + 1);
    }
    BigInt p = a * p_prev + p_prev2;
    BigInt q = a * q_prev + q_prev2;
    p_prev2 = p_prev;
    p_prev = p;
    q_prev2 = q_prev;
    q_prev = q;
    FieldElement e{Rational(p), Rational(-q)};
    Rational N = norm(K, e);
    if (N == 1 || N == -1) {
      FieldElement u = scale(conjugate(K, e), Rational(1) / N);
      if (embed(K, u, 0) < 0) u = neg(u);
      if (embed(K, u, 0) < 1) u = inverse(K, u);
      return u;
    }
    P = a * Q - P;
    Q = (d - P * P) / Q;
  }
  throw DomainError("continued fraction did not terminate");
}

}  // namespace

UnitData unit_group(const FieldDescriptor& K) {
  UnitData U;
  U.torsion = {FieldElement(1), FieldElement(-1)};
  if (K.is_imaginary()) {
    std::vector<FieldElement> extra;
    for (i64 x = -2; x <= 2; ++x)
      for (i64 y = -2; y <= 2; ++y) {
        if (y == 0) continue;
        IntElt e{x, y};
        if (norm(K, e) == 1) extra.push_back(to_field(e));
      }
    std::sort(extra.begin(), extra.end());
    U.torsion.insert(U.torsion.end(), extra.begin(), extra.end());
  }
  if (K.is_real_quadratic()) {
    FieldElement eps = fundamental_unit(K);
    U.fundamental = eps;
    U.regulator = log(embed_precise(K, eps, 0));
    U.log_fundamental = U.regulator.convert_to<long double>();
  }
  return U;
}

std::string to_string(const FieldDescriptor& K, const FieldElement& e) {
  if (K.is_rational()) return to_string(e.x);
  return "[" + to_string(e.x) + "," + to_string(e.y) + "]";
}

}  // namespace cmkms
