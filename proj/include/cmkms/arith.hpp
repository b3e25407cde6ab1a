#ifndef CMKMS_ARITH_HPP_
#define CMKMS_ARITH_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace cmkms {

using i64 = std::int64_t;
using i128 = __int128;

namespace bmp = boost::multiprecision;
using BigInt = bmp::number<bmp::cpp_int_backend<>, bmp::et_off>;
using Rational =
    bmp::number<bmp::rational_adaptor<bmp::cpp_int_backend<>>, bmp::et_off>;
using Real = bmp::number<bmp::cpp_bin_float<60>, bmp::et_off>;

// Mathematical precondition failures (bad ideal, wrong class, beta out of
// range, ...). The CLI maps these to exit status 1.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed configuration or usage. The CLI maps these to exit status 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

i64 gcd64(i64 a, i64 b);
i64 lcm64(i64 a, i64 b);
// Returns g = gcd(a,b) >= 0 and sets x,y with a*x + b*y = g.
i64 ext_gcd(i64 a, i64 b, i64& x, i64& y);
i64 floor_div(i64 a, i64 b);
i64 mod_pos(i64 a, i64 m);
i64 mul_mod(i64 a, i64 b, i64 m);
i64 pow_mod(i64 a, i64 e, i64 m);
i64 inv_mod(i64 a, i64 m);

i64 checked_add(i64 a, i64 b);
i64 checked_mul(i64 a, i64 b);
i64 to_i64(const BigInt& v);
i64 to_i64(const Rational& v);  // must be integral

bool is_prime(i64 n);
std::vector<i64> primes_up_to(i64 n);
std::vector<std::pair<i64, int>> factorize(i64 n);
bool is_squarefree(i64 n);
i64 isqrt(i64 n);

// Kronecker symbol (D/p) for a rational prime p.
int kronecker(i64 D, i64 p);
// A square root of a modulo an odd prime p; a must be a square mod p.
i64 sqrt_mod_prime(i64 a, i64 p);

BigInt rat_num(const Rational& q);
BigInt rat_den(const Rational& q);
bool is_integer(const Rational& q);
std::string to_string(const Rational& q);

}  // namespace cmkms

#endif  // CMKMS_ARITH_HPP_
