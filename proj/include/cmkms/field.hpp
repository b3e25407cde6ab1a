#ifndef CMKMS_FIELD_HPP_
#define CMKMS_FIELD_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmkms/arith.hpp"
#include "cmkms/lattice.hpp"

namespace cmkms {

// K = Q or K = Q(sqrt d). Integral basis {1, w} with w^2 = t*w + n:
//   d = 1 mod 4: w = (1+sqrt d)/2, t = 1, n = (d-1)/4
//   otherwise:   w = sqrt d,       t = 0, n = d
struct FieldDescriptor {
  enum class Kind { rational, quadratic };
  Kind kind = Kind::rational;
  i64 d = 0;
  i64 D = 1;
  i64 t = 0;
  i64 n = 0;
  int real_places = 1;
  int complex_places = 0;

  int degree() const { return kind == Kind::rational ? 1 : 2; }
  bool is_rational() const { return kind == Kind::rational; }
  bool is_real_quadratic() const { return kind == Kind::quadratic && d > 0; }
  bool is_imaginary() const { return kind == Kind::quadratic && d < 0; }
  std::string name() const;
  std::string omega_rule() const;
  bool operator==(const FieldDescriptor& o) const {
    return kind == o.kind && d == o.d;
  }
  bool operator!=(const FieldDescriptor& o) const { return !(*this == o); }
};

FieldDescriptor make_rational_field();
// Throws DomainError for d in {0,1} or d not squarefree.
FieldDescriptor make_quadratic_field(i64 d);
FieldDescriptor make_field(std::optional<i64> d);

// Coordinates with respect to {1, w}. For K = Q, y is always 0.
struct FieldElement {
  Rational x{0};
  Rational y{0};

  FieldElement() = default;
  FieldElement(Rational x_, Rational y_) : x(std::move(x_)), y(std::move(y_)) {}
  explicit FieldElement(i64 v) : x(v), y(0) {}
  bool is_zero() const { return x == 0 && y == 0; }
  bool operator==(const FieldElement& o) const { return x == o.x && y == o.y; }
  bool operator!=(const FieldElement& o) const { return !(*this == o); }
  bool operator<(const FieldElement& o) const {
    return x != o.x ? x < o.x : y < o.y;
  }
};

// Integral element with machine coordinates, used on hot paths.
struct IntElt {
  i64 x = 0;
  i64 y = 0;
  bool operator==(const IntElt& o) const { return x == o.x && y == o.y; }
  bool operator!=(const IntElt& o) const { return !(*this == o); }
  bool operator<(const IntElt& o) const {
    return x != o.x ? x < o.x : y < o.y;
  }
};

FieldElement add(const FieldElement& a, const FieldElement& b);
FieldElement sub(const FieldElement& a, const FieldElement& b);
FieldElement neg(const FieldElement& a);
FieldElement scale(const FieldElement& a, const Rational& r);
FieldElement mul(const FieldDescriptor& K, const FieldElement& a,
                 const FieldElement& b);
FieldElement conjugate(const FieldDescriptor& K, const FieldElement& a);
FieldElement inverse(const FieldDescriptor& K, const FieldElement& a);
FieldElement divide(const FieldDescriptor& K, const FieldElement& a,
                    const FieldElement& b);
FieldElement power(const FieldDescriptor& K, const FieldElement& a, i64 e);
bool is_integral(const FieldElement& a);
IntElt to_int(const FieldElement& a);
FieldElement to_field(const IntElt& a);

IntElt add(const IntElt& a, const IntElt& b);
IntElt sub(const IntElt& a, const IntElt& b);
IntElt mul(const FieldDescriptor& K, const IntElt& a, const IntElt& b);
IntElt conjugate(const FieldDescriptor& K, const IntElt& a);
i64 norm(const FieldDescriptor& K, const IntElt& a);

// Matrix of y -> e*y on the basis {1, w} (columns are images), size = degree.
MatX<Rational> multiplication_matrix(const FieldDescriptor& K,
                                     const FieldElement& e);
// (N(e), Tr(e)) as determinant and trace of the multiplication matrix.
std::pair<Rational, Rational> norm_trace(const FieldDescriptor& K,
                                         const FieldElement& e);
Rational norm(const FieldDescriptor& K, const FieldElement& e);

// Sign (+1/-1) at each real place, sqrt d -> +sqrt d first. Empty for
// imaginary fields. Throws for e = 0.
std::vector<int> real_signs(const FieldDescriptor& K, const FieldElement& e);
int sign_at(const FieldDescriptor& K, const FieldElement& e, int place);
// Approximate real embedding (place 0 or 1); imaginary fields: |sigma(e)|.
long double embed(const FieldDescriptor& K, const FieldElement& e, int place);
Real embed_precise(const FieldDescriptor& K, const FieldElement& e, int place);

struct UnitData {
  std::vector<FieldElement> torsion;  // starts with 1, then -1, ...
  std::optional<FieldElement> fundamental;
  Real regulator{0};
  long double log_fundamental = 0;  // same value, machine precision
  int w() const { return static_cast<int>(torsion.size()); }
};

UnitData unit_group(const FieldDescriptor& K);

std::string to_string(const FieldDescriptor& K, const FieldElement& e);

}  // namespace cmkms

#endif  // CMKMS_FIELD_HPP_
