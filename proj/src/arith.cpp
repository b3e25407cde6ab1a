#include "cmkms/arith.hpp"

#include <cmath>
#include <limits>

namespace cmkms {

i64 gcd64(i64 a, i64 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

i64 lcm64(i64 a, i64 b) {
  if (a == 0 || b == 0) return 0;
  return checked_mul(a / gcd64(a, b), b < 0 ? -b : b);
}

i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
  i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    i64 q = a / b;
    i64 t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
    t = y0 - q * y1;
    y0 = y1;
    y1 = t;
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  x = x0;
  y = y0;
  return a;
}

i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

i64 mod_pos(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

i64 mul_mod(i64 a, i64 b, i64 m) {
  i128 r = static_cast<i128>(mod_pos(a, m)) * mod_pos(b, m) % m;
  return static_cast<i64>(r);
}

i64 pow_mod(i64 a, i64 e, i64 m) {
  i64 r = 1 % m;
  a = mod_pos(a, m);
  while (e > 0) {
    if (e & 1) r = mul_mod(r, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return r;
}

i64 inv_mod(i64 a, i64 m) {
  i64 x, y;
  i64 g = ext_gcd(mod_pos(a, m), m, x, y);
  if (g != 1) throw DomainError("inv_mod: not invertible");
  return mod_pos(x, m);
}

i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("i64 add");
  return r;
}

i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("i64 mul");
  return r;
}

i64 to_i64(const BigInt& v) {
  if (v > std::numeric_limits<i64>::max() ||
      v < std::numeric_limits<i64>::min())
    throw std::overflow_error("BigInt does not fit in 64 bits");
  return v.convert_to<i64>();
}

i64 to_i64(const Rational& v) {
  if (!is_integer(v)) throw DomainError("expected an integer value");
  return to_i64(rat_num(v));
}

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  i64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (i64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    i64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<i64> primes_up_to(i64 n) {
  std::vector<i64> out;
  if (n < 2) return out;
  std::vector<bool> comp(static_cast<size_t>(n) + 1, false);
  for (i64 i = 2; i <= n; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (i64 j = i * i; j <= n; j += i) comp[j] = true;
  }
  return out;
}

std::vector<std::pair<i64, int>> factorize(i64 n) {
  std::vector<std::pair<i64, int>> out;
  if (n < 0) n = -n;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

bool is_squarefree(i64 n) {
  for (auto& [p, e] : factorize(n))
    if (e > 1) return false;
  return true;
}

i64 isqrt(i64 n) {
  if (n < 0) throw DomainError("isqrt of negative");
  i64 r = static_cast<i64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<i128>(r) * r > n) --r;
  while (static_cast<i128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

int kronecker(i64 D, i64 p) {
  if (p == 2) {
    if (D % 2 == 0) return 0;
    i64 r = mod_pos(D, 8);
    return (r == 1 || r == 7) ? 1 : -1;
  }
  i64 a = mod_pos(D, p);
  if (a == 0) return 0;
  return pow_mod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

i64 sqrt_mod_prime(i64 a, i64 p) {
  a = mod_pos(a, p);
  if (a == 0) return 0;
  if (p == 2) return a;
  if (pow_mod(a, (p - 1) / 2, p) != 1) throw DomainError("not a square");
  if (p % 4 == 3) return pow_mod(a, (p + 1) / 4, p);
  // Tonelli-Shanks
  i64 q = p - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  i64 z = 2;
  while (pow_mod(z, (p - 1) / 2, p) != p - 1) ++z;
  i64 m = s;
  i64 c = pow_mod(z, q, p);
  i64 t = pow_mod(a, q, p);
  i64 r = pow_mod(a, (q + 1) / 2, p);
  while (t != 1) {
    i64 i = 0, tt = t;
    while (tt != 1) {
      tt = mul_mod(tt, tt, p);
      ++i;
    }
    i64 b = c;
    for (i64 j = 0; j < m - i - 1; ++j) b = mul_mod(b, b, p);
    m = i;
    c = mul_mod(b, b, p);
    t = mul_mod(t, c, p);
    r = mul_mod(r, b, p);
  }
  return r;
}

BigInt rat_num(const Rational& q) { return BigInt(numerator(q)); }
BigInt rat_den(const Rational& q) { return BigInt(denominator(q)); }
bool is_integer(const Rational& q) { return denominator(q) == 1; }

std::string to_string(const Rational& q) {
  if (is_integer(q)) return rat_num(q).str();
  return rat_num(q).str() + "/" + rat_den(q).str();
}

}  // namespace cmkms
