#ifndef CMKMS_DIRICHLET_HPP_
#define CMKMS_DIRICHLET_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cmkms/congruence.hpp"

namespace cmkms {

// Sum_{n <= X} a_n n^{-s} with exact non-negative integer coefficients.
// `envelope` and `shift` describe the coefficient bound used for tails:
// a_n <= n^shift (unit) or a_n <= n^shift * d(n) (divisor).
struct DirichletSeries {
  enum class Envelope { unit, divisor };

  FieldDescriptor K;
  std::vector<i64> a;  // a[0] unused
  std::string label;
  Envelope envelope = Envelope::divisor;
  int shift = 0;
  // Rational primes under the modulus, when the series comes from a system.
  std::optional<std::vector<i64>> excluded_primes;

  i64 X() const { return static_cast<i64>(a.size()) - 1; }
  i64 operator[](i64 n) const { return n >= 1 && n <= X() ? a[n] : 0; }
  std::vector<i64> support() const;
  i64 total() const;  // A(X)
  double abscissa() const { return 1.0 + shift; }
};

DirichletSeries make_series(const FieldDescriptor& K, i64 X, std::string label);

// multiplier * scale^s * base(s)
struct ScaledSeries {
  i64 scale = 1;
  i64 multiplier = 1;
  DirichletSeries base;
};

enum class ZetaKind { partial, modulus, trivial_class, dedekind };

// Coefficient n = number of integral ideals of norm n in the family.
DirichletSeries build_zeta(const SystemContext& sys, ZetaKind which, i64 X,
                           i64 cls = 0);
// All partial zeta functions at once; index = generalized class.
std::vector<DirichletSeries> build_partial_zetas(const SystemContext& sys, i64 X);
DirichletSeries dedekind_zeta(const FieldDescriptor& K, i64 X);

// zeta(s - 1) as a series in s: coefficients n * a_n.
DirichletSeries shifted(const DirichletSeries& z);

struct SeriesValue {
  Real value{0};
  Real tail_bound{0};
  i64 X = 0;
};

// Truncated sum plus a bound on the omitted terms n > X.
SeriesValue evaluate(const DirichletSeries& z, const Real& s);
SeriesValue evaluate(const ScaledSeries& z, const Real& s);
// Sum_{n <= X} a_n n^{-s} exactly, for integer s >= 0.
Rational evaluate_exact(const DirichletSeries& z, int s);
// Tail bound alone: bound on Sum_{n > X} a_n n^{-s} from the envelope.
Real tail_bound(const DirichletSeries& z, const Real& s);

struct ResidueEstimate {
  double at_X = 0;       // A(X) / X
  double at_half_X = 0;  // A(X/2) / (X/2)
  i64 X = 0;
};
ResidueEstimate residue_estimate(const DirichletSeries& z);

struct ResidueFormula {
  Real with_w_m{0};  // roots of unity in R*_{m,1}
  Real with_w_K{0};  // roots of unity in K
  i64 w_m = 1;
  i64 w_K = 1;
  i64 gamma_bar = 1;
  i64 unit_index = 1;
  bool conventions_differ() const { return w_m != w_K; }
};
ResidueFormula residue_formula(const SystemContext& sys);

struct ScaleRecovery {
  i64 scale = 1;            // N_phi
  DirichletSeries reduced;  // coefficients b_{k n / N} = multiplier * a_n
};
ScaleRecovery recover_scale(const ScaledSeries& z);
// Inverse direction: the ScaledSeries k^s * reduced(s).
ScaledSeries rescale(const ScaleRecovery& r);
// {n / scale : multiplier * a_n}, the exponent data of the series.
std::map<Rational, i64> exponent_terms(const ScaledSeries& z);

// Multiset of inertia degrees {f : b_f} read off the local factor
// A(t) = Sum a_{p^f} t^f = Prod_f (1 - t^f)^{-b_f}.
std::map<int, i64> splitting_deconvolution(const std::vector<i64>& a_coeffs);
std::vector<i64> local_coefficients(const DirichletSeries& z, i64 p);

struct EquivalenceVerdict {
  bool equivalent = true;
  std::optional<i64> witness;
  i64 bound = 0;
  std::vector<i64> excluded;  // primes in either support
};
EquivalenceVerdict arithmetic_equivalence(const DirichletSeries& zK,
                                          const DirichletSeries& zL, i64 bound);

// {p <= X : a_{p^k} = 0 for some p^k <= X}; K = Q only.
std::set<i64> support_from_zeta(const DirichletSeries& z);

std::string to_string(ZetaKind k);

}  // namespace cmkms

#endif  // CMKMS_DIRICHLET_HPP_
