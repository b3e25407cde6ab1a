#ifndef CMKMS_IDEAL_HPP_
#define CMKMS_IDEAL_HPP_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cmkms/field.hpp"
#include "cmkms/group.hpp"

namespace cmkms {

// (1/den) * (Z*a + Z*(b + c*w)), 0 <= b < a, c | a, c | b, gcd(c, den) = 1.
// For K = Q: b = 0, c = 1.
struct IdealHNF {
  FieldDescriptor K;
  i64 a = 1;
  i64 b = 0;
  i64 c = 1;
  i64 den = 1;

  bool is_integral() const { return den == 1; }
  Rational norm() const { return Rational(a) * c / (Rational(den) * den); }
  i64 int_norm() const;  // integral ideals only
  IntElt basis(int i) const { return i == 0 ? IntElt{a, 0} : IntElt{b, c}; }
  bool operator==(const IdealHNF& o) const {
    return K == o.K && a == o.a && b == o.b && c == o.c && den == o.den;
  }
  bool operator!=(const IdealHNF& o) const { return !(*this == o); }
};

// Lexicographic on (a, b, c, den).
bool hnf_less(const IdealHNF& x, const IdealHNF& y);
// Norm first, then hnf_less.
bool norm_less(const IdealHNF& x, const IdealHNF& y);

struct IdealHash {
  size_t operator()(const IdealHNF& x) const;
};

IdealHNF unit_ideal(const FieldDescriptor& K);
IdealHNF ideal_from_generators(const FieldDescriptor& K,
                               const std::vector<FieldElement>& gens);
IdealHNF ideal_from_int(const FieldDescriptor& K,
                        const std::vector<IntElt>& gens);
IdealHNF principal_ideal(const FieldDescriptor& K, const FieldElement& g);
IdealHNF ideal_product(const IdealHNF& x, const IdealHNF& y);
IdealHNF ideal_power(const IdealHNF& x, int e);
IdealHNF ideal_conjugate(const IdealHNF& x);
IdealHNF ideal_inverse(const IdealHNF& x);
IdealHNF ideal_scale(const IdealHNF& x, const FieldElement& g);
IdealHNF ideal_sum(const IdealHNF& x, const IdealHNF& y);

bool contains(const IdealHNF& x, const IntElt& e);  // x integral
bool contains(const IdealHNF& x, const FieldElement& e);
// y is contained in x (for integral ideals: x divides y).
bool ideal_contains(const IdealHNF& x, const IdealHNF& y);
bool coprime(const IdealHNF& x, const IdealHNF& y);
bool closed_under_omega(const IdealHNF& x);

// Canonical representative of e modulo x in the box 0 <= coords < diag.
IntElt reduce_mod(const IdealHNF& x, const IntElt& e);
// Coordinates of e (an element of x) in the HNF basis {a, b + c w}.
std::array<i64, 2> coords_in(const IdealHNF& x, const IntElt& e);

struct PrimeIdeal {
  IdealHNF P;
  i64 p = 0;
  int e = 1;
  int f = 1;
  i64 norm = 0;
};

struct PrimeSplitting {
  enum class Type { split, inert, ramified };
  i64 p = 0;
  Type type = Type::split;
  std::vector<PrimeIdeal> primes_above;
};
std::string to_string(PrimeSplitting::Type t);

PrimeSplitting factor_rational_prime(const FieldDescriptor& K, i64 p);

// All prime ideals of norm <= X (optionally not dividing `avoid`), sorted by
// norm then HNF.
std::vector<PrimeIdeal> prime_ideals_up_to(
    const FieldDescriptor& K, i64 X,
    const std::optional<IdealHNF>& avoid = std::nullopt);

std::map<i64, std::vector<IdealHNF>> enumerate_ideals(
    const FieldDescriptor& K, i64 X,
    const std::optional<IdealHNF>& coprime_to = std::nullopt);

// Prime factorization of an integral ideal.
std::vector<std::pair<PrimeIdeal, int>> factor_ideal(const IdealHNF& x);

struct PrincipalResult {
  enum class Status { principal, not_principal, search_exhausted };
  Status status = Status::not_principal;
  FieldElement generator;
  bool principal() const { return status == Status::principal; }
};

// Complete lattice search: every principal ideal has a generator with
// Tr-form value <= N*(eps + 1/eps) (real) or 2N (imaginary).
PrincipalResult is_principal(const IdealHNF& x, const UnitData& units);
PrincipalResult is_principal(const IdealHNF& x);

double minkowski_bound(const FieldDescriptor& K);

// Absolute class group: classes indexed 0..h-1, 0 = principal.
struct ClassGroup {
  FieldDescriptor K;
  UnitData units;
  std::vector<IdealHNF> reps;         // smallest norm per class, reps[0] = R
  AbelianPresentation presentation;   // SNF on the class indices
  std::vector<IdealHNF> generators;   // ideal generating each cyclic factor
  std::vector<PrimeIdeal> factor_base;

  i64 order() const { return presentation.order(); }
  // Class index of a fractional ideal (tests principality against reps).
  i64 class_of(const IdealHNF& x) const;
  // Class index plus a generator g of x * conj(reps[c]) (so x = g/N(rep_c) * rep_c).
  i64 class_with_generator(const IdealHNF& x, FieldElement& g) const;
  // Same against another list of per-class representatives (index = class).
  i64 class_with_generator(const IdealHNF& x,
                           const std::vector<IdealHNF>& class_reps,
                           FieldElement& g) const;
};

ClassGroup class_group(const FieldDescriptor& K);

std::string to_string(const IdealHNF& x);

}  // namespace cmkms

#endif  // CMKMS_IDEAL_HPP_
