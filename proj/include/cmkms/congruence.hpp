#ifndef CMKMS_CONGRUENCE_HPP_
#define CMKMS_CONGRUENCE_HPP_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmkms/group.hpp"
#include "cmkms/ideal.hpp"

namespace cmkms {

// m = m_inf * m0.
struct Modulus {
  IdealHNF m0;
  std::vector<int> m_inf;  // indices of real places, ascending
  std::vector<i64> support_Q;
  std::vector<std::pair<PrimeIdeal, int>> primes;  // factorization of m0

  int r0() const { return static_cast<int>(m_inf.size()); }
};

Modulus make_modulus(const IdealHNF& m0, std::vector<int> m_inf);

// ([signs at m_inf], residue mod m0); signs are +1/-1.
struct ResidueClass {
  std::vector<int> signs;
  IntElt residue;
  bool operator==(const ResidueClass& o) const {
    return signs == o.signs && residue == o.residue;
  }
};

// True iff v_P(e) = 0 for every prime P | m0 (e integral).
bool coprime_to_modulus(const Modulus& m, const IntElt& e);

// (R/m)^* materialized. Elements are coded as s + 2^r0 * u where bit i of s
// is set when the sign at m_inf[i] is negative and u indexes residues;
// code 0 is the identity.
struct ResidueGroup {
  FieldDescriptor K;
  Modulus m;
  std::vector<IntElt> residues;  // canonical box representatives, [0] = 1
  std::vector<i64> box_to_unit;  // box index -> residue index or -1

  i64 order() const { return static_cast<i64>(residues.size()) << m.r0(); }
  i64 residue_count() const { return static_cast<i64>(residues.size()); }
  i64 encode(const ResidueClass& r) const;
  ResidueClass decode(i64 code) const;
  i64 mul(i64 a, i64 b) const;
  i64 inv(i64 a) const;
  i64 pow(i64 a, i64 e) const;
  // [a]_m for a integral with v_P(a) = 0 at P | m0.
  i64 of_element(const FieldElement& a) const;
  // [t]_m for t in K^* with v_P(t) = 0 at every P | m0.
  i64 of_fraction(const FieldElement& t) const;
  // Subgroup generated by the codes, as a membership table.
  std::vector<char> closure(const std::vector<i64>& gens) const;
};

ResidueGroup make_residue_group(const Modulus& m);

ResidueClass reduce_mod_m(const FieldElement& a, const Modulus& m);

struct GammaSubgroup {
  std::vector<ResidueClass> generators;
  std::vector<i64> elements;  // codes, ascending
  std::vector<char> member;   // by code
  bool contains(i64 code) const { return member.at(code) != 0; }
  i64 order() const { return static_cast<i64>(elements.size()); }
};

struct SystemDescriptor {
  FieldDescriptor field;
  Modulus modulus;
  std::vector<ResidueClass> gamma_gens;
  bool gamma_all = false;  // Gamma = (R/m)^*
  i64 truncation = 1000;
  std::string label;
};

struct RestrictedUnits {
  std::vector<FieldElement> torsion;  // tor(R*_{m,Gamma}), in unit-group order
  FieldElement torsion_generator{1};
  i64 torsion_order = 1;
  std::optional<FieldElement> free_generator;  // eta = zeta * eps^k
  i64 free_exponent = 0;                       // k
  long double log_free = 0;                    // log |sigma_1(eta)|

  bool trivial() const { return torsion_order == 1 && !free_generator; }
};

struct ResidueInvariants {
  i64 w_m = 1;             // roots of unity congruent to 1 mod m
  i64 w_K = 1;             // roots of unity in K
  i64 unit_index = 1;      // [R^* : R^*_{m,1}] = |[R^*]_m|
  i64 gamma_bar = 1;       // |Gamma [R^*]_m| / |[R^*]_m|
  bool gamma_in_units = false;  // Gamma is contained in [R^*]_m
};

struct GeneralizedClassData {
  AbelianPresentation group;
  std::vector<IdealHNF> representatives;  // index = class, [0] = R
  std::vector<IdealHNF> generators;       // one per cyclic factor
  std::vector<PrimeIdeal> factor_base;
  ResidueInvariants invariants;
  i64 expected_order = 1;  // h * |(R/m)^*| / |Gamma [R^*]_m|

  i64 order() const { return group.order(); }
};

// Everything derived from a SystemDescriptor; immutable once built.
struct SystemContext {
  SystemDescriptor desc;
  UnitData units;
  ClassGroup cl;
  ResidueGroup rg;
  GammaSubgroup gamma;
  std::vector<char> unit_image;     // [R^*]_m membership
  std::vector<char> gamma_units;    // Gamma [R^*]_m membership
  std::vector<i64> coset_of;        // code -> coset of Gamma [R^*]_m
  i64 coset_count = 1;
  std::vector<IdealHNF> abs_reps;   // absolute class reps, norm prime to N(m0)
  std::map<std::pair<i64, i64>, i64> key_to_class;
  RestrictedUnits restricted;
  GeneralizedClassData cls;

  const FieldDescriptor& K() const { return desc.field; }
  const Modulus& m() const { return desc.modulus; }
  bool in_gamma(i64 code) const { return gamma.contains(code); }
  i64 class_of(const IdealHNF& x) const;
  // Exponents (i, j) with g = zeta0^i * eta^j; throws if g is not in R*_{m,Gamma}.
  std::pair<i64, i64> unit_exponents(const FieldElement& g) const;
  FieldElement unit_from_exponents(i64 i, i64 j) const;
};

SystemContext build_system(const SystemDescriptor& desc);

bool monoid_contains(const FieldElement& a, const SystemContext& sys);

RestrictedUnits restricted_unit_group(const SystemContext& sys);

// t in K_{m,Gamma} with t * x = target; throws DomainError if the classes
// differ. Returns 1 when x == target.
FieldElement transporter(const IdealHNF& x, const IdealHNF& target,
                         const SystemContext& sys);

std::string to_string(const ResidueClass& r, const FieldDescriptor& K);

}  // namespace cmkms

#endif  // CMKMS_CONGRUENCE_HPP_
