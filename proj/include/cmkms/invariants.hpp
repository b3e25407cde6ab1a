#ifndef CMKMS_INVARIANTS_HPP_
#define CMKMS_INVARIANTS_HPP_

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cmkms/kms.hpp"

namespace cmkms {

// One connected component of the minimal type I states: a class, a fixed
// point of the restricted units on the dual of a_kappa, and a component of
// the dual of R*_{m,Gamma} (indexed by a character of the torsion part).
// With trivial restricted units the whole torus is one component and
// `fixed_point` is empty.
struct MinimalComponent {
  i64 cls = 0;
  TorusPoint fixed_point;
  i64 torsion_character = 0;
};

struct CensusReport {
  std::string label;
  i64 X = 0;
  bool units_trivial = true;
  i64 tor_order = 1;
  i64 class_number = 1;
  std::optional<i64> fixed_count;          // |F_R|; empty when infinite
  std::vector<i64> fixed_count_per_class;  // |F_{a_kappa}|, empty entries skipped
  bool solidarity = true;                  // all per-class counts equal
  i64 enumerated_components = 0;
  i64 closed_form_components = 0;
  std::vector<MinimalComponent> components;  // capped listing
  std::vector<DirichletSeries> reduced_per_class;  // Z~ of a |O| = 1 state over each class
  DirichletSeries summed_series;             // sum of reduced Z~ over components
  i64 multiplier = 1;                        // tor * |F_R|, or 1
  bool summed_matches = false;  // summed_series == multiplier * zeta_{K,m}(s-1)
  i64 limit_at_infinity = 0;    // coefficient at index 1 of the summed series
  bool scales_recovered = true;  // N_phi = N(kappa) for every class
  // Numerical witness: A(X)/X of |O| zeta_kappa per class (equal by solidarity).
  std::vector<double> residue_per_class;
  bool degenerate_limit = false;  // units nontrivial yet tor * |F_R| = 1
};

CensusReport minimal_census(const SystemContext& sys, i64 X, size_t list_cap = 64);

struct InvariantRecord {
  i64 class_number = 1;
  DirichletSeries zeta_Km;
  std::optional<i64> tor_times_fixed;  // empty = infinite
  DirichletSeries zeta_trivial;
  std::set<i64> norm_prime_set;
  // Limit 1 with nontrivial units: the limit alone cannot tell tor*|F_R| = 1
  // from the infinite case.
  bool ambiguous_limit = false;
};

struct InvariantExtraction {
  InvariantRecord from_partition_functions;
  InvariantRecord direct;
  bool agree = false;
  std::vector<std::string> disagreements;
  CensusReport census;
};

// Both routes; throws DomainError when they disagree (the ambiguous limit-1
// case is reported, not thrown).
InvariantExtraction extract_invariants(const SystemContext& sys, i64 X);

// {p <= bound, p outside supp(m0) : some prime P | p, P prime to m0, of
// residue degree 1 and trivial generalized class}.
std::set<i64> kronecker_set(const SystemContext& sys, i64 bound);

struct ComparisonReport {
  i64 bound = 0;
  EquivalenceVerdict arithmetic;
  std::vector<i64> kronecker_only_a, kronecker_only_b;
  bool class_numbers_equal = false;
  i64 class_number_a = 0, class_number_b = 0;
  std::vector<std::string> invariant_diffs;
  bool all_checks_pass = false;
  std::string note;
};

ComparisonReport compare_systems(const SystemContext& a, const SystemContext& b, i64 bound);

}  // namespace cmkms

#endif  // CMKMS_INVARIANTS_HPP_
