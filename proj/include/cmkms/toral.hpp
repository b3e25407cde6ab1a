#ifndef CMKMS_TORAL_HPP_
#define CMKMS_TORAL_HPP_

#include <array>
#include <complex>
#include <optional>
#include <set>
#include <vector>

#include "cmkms/congruence.hpp"

namespace cmkms {

using IntMat = MatX<BigInt>;
using TorusPoint = std::vector<Rational>;  // coordinates in [0,1)

// Matrix of y -> u*y on the HNF basis of x (column j = image of basis j).
IntMat action_matrix(const FieldElement& u, const IdealHNF& x);

// Dual action of R*_{m,Gamma} = <zeta0> x <eta> on the torus of x, given by
// transposed action matrices: [torsion generator if its order > 1][free
// generator if present].
struct ToralAction {
  IdealHNF ideal;
  std::vector<IntMat> generator_matrices;
  i64 torsion_order = 1;
  bool has_free = false;

  int dim() const { return ideal.K.degree(); }
  bool trivial() const { return generator_matrices.empty(); }
  const IntMat* torsion_matrix() const {
    return torsion_order > 1 ? &generator_matrices[0] : nullptr;
  }
  const IntMat* free_matrix() const {
    return has_free ? &generator_matrices.back() : nullptr;
  }
};

ToralAction make_toral_action(const IdealHNF& x,
                              const std::optional<FieldElement>& torsion_gen,
                              i64 torsion_order,
                              const std::optional<FieldElement>& free_gen);
ToralAction toral_action(const SystemContext& sys, const IdealHNF& x);

struct FixedPointSet {
  bool finite = false;
  BigInt count{0};
  std::vector<i64> group_invariants;  // Smith invariants d_i > 1
  std::vector<TorusPoint> representatives;
  bool representatives_truncated = false;
};

FixedPointSet fixed_points(const ToralAction& act, size_t max_representatives = 100000);

// Isotropy of an orbit inside <zeta0> x <eta>, zeta0 of order w: generated by
// zeta0^torsion_step and zeta0^torsion_offset * eta^free_power.
struct Isotropy {
  i64 w = 1;
  i64 torsion_step = 1;
  bool has_free = false;
  i64 free_power = 0;
  i64 torsion_offset = 0;

  bool contains(i64 i, i64 j) const;
  // Index of the isotropy, i.e. the orbit size it predicts.
  i64 index() const { return torsion_step * (has_free ? free_power : 1); }
};

struct FiniteOrbit {
  i64 denominator = 1;                  // points are p/denominator
  std::vector<std::vector<i64>> points; // numerators mod denominator, sorted
  Isotropy isotropy;

  i64 size() const { return static_cast<i64>(points.size()); }
  std::vector<TorusPoint> rational_points() const;
};

std::vector<FiniteOrbit> finite_orbits(const ToralAction& act, i64 N);
std::set<i64> orbit_size_census(const ToralAction& act, i64 Nmax);

// Orbit containing a given point p/N.
FiniteOrbit orbit_of(const ToralAction& act, const std::vector<i64>& p, i64 N);

// Character of an isotropy group by rational phases: value on zeta0^step is
// e^{2 pi i theta_torsion}, on zeta0^offset * eta^free_power it is
// e^{2 pi i theta_free}. theta_torsion * (w/step) must be an integer.
struct Character {
  Rational theta_torsion{0};
  Rational theta_free{0};
};

bool character_valid(const Isotropy& iso, const Character& chi);
// Phase theta with chi(zeta0^i eta^j) = e^{2 pi i theta}; g must be in the isotropy.
Rational character_phase(const Isotropy& iso, const Character& chi, i64 i, i64 j);

// tau_{O,chi}(u_{(r, g)}) with r given by its coordinates in the HNF basis
// of the ideal and g = zeta0^i eta^j.
std::complex<double> trace_from_orbit(const FiniteOrbit& O, const Character& chi,
                                      const std::vector<i64>& r_coords, i64 i, i64 j);
// Same with r an element of x and g an element of R*_{m,Gamma}.
std::complex<double> trace_from_orbit(const SystemContext& sys, const IdealHNF& x,
                                      const FiniteOrbit& O, const Character& chi,
                                      const IntElt& r, const FieldElement& g);

std::string to_string(const TorusPoint& p);

}  // namespace cmkms

#endif  // CMKMS_TORAL_HPP_
