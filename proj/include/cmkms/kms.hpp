#ifndef CMKMS_KMS_HPP_
#define CMKMS_KMS_HPP_

#include <complex>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "cmkms/dirichlet.hpp"
#include "cmkms/toral.hpp"

namespace cmkms {

// ---- spectra -------------------------------------------------------------

struct SpectrumLevel {
  Real h{0};
  i64 multiplicity = 1;
  std::optional<Rational> ratio;  // e^h when it is rational
};

struct SpectrumMultiset {
  std::vector<SpectrumLevel> levels;  // strictly increasing h, levels[0].h = 0
  i64 X = 0;                          // truncation the spectrum came from
  double critical_beta = 0;           // Gibbs weights summable for beta above this
  std::string meta;
};

// Sorts, merges equal levels and shifts so that the minimum is 0.
SpectrumMultiset make_spectrum(std::vector<SpectrumLevel> levels, double critical_beta = 0);

struct GibbsResult {
  Real Z{0};
  std::vector<Real> weights;  // per level: a_k e^{-beta h_k} / Z
};

GibbsResult gibbs_partition(const SpectrumMultiset& spec, const Real& beta);
// Sum a_k ratio_k^{-beta}; needs exact ratios.
Rational gibbs_partition_exact(const SpectrumMultiset& spec, int beta);
// Weights of the state at beta in the family with fixed Hamiltonian.
std::vector<Real> quasi_family(const SpectrumMultiset& spec, const Real& beta0,
                               const Real& beta);

struct GroundLimit {
  std::vector<Real> weights;  // per level; level 0 carries 1
  Real gap{0};                // Z(beta) - a_0
  Real bound{0};              // e^{-beta d_1} sum_k a_k e^{-beta0 (d_k - d_1)}
  bool bound_holds = true;
};
GroundLimit ground_limit(const SpectrumMultiset& spec, const Real& beta, const Real& beta0);

struct LiouvilleLine {
  Real value{0};
  i64 multiplicity = 0;
  std::optional<Rational> ratio;
};
std::vector<LiouvilleLine> liouville_spectrum(const SpectrumMultiset& spec, const Real& cutoff);

// Levels log(n / N(kappa)) with multiplicity |O| * n * a_n from zeta_kappa.
SpectrumMultiset hamiltonian_spectrum(const SystemContext& sys, i64 cls, i64 X,
                                      i64 orbit_size);
SpectrumMultiset hamiltonian_spectrum(const DirichletSeries& zeta_kappa, i64 min_norm,
                                      i64 orbit_size);

// |O| * N(kappa)^s * zeta_kappa(s - 1) truncated at X.
ScaledSeries partition_function(const SystemContext& sys, i64 cls, i64 orbit_size, i64 X);
ScaledSeries partition_function(const DirichletSeries& zeta_kappa, i64 min_norm,
                                i64 orbit_size);

// ---- monomials and operator words ----------------------------------------

// One letter of a word in s_b, s_b^*, u^d, e_{y + B}. Words are written left
// to right as products; the rightmost letter acts first.
struct OpLetter {
  enum class Kind { S, Sstar, U, E };
  Kind kind = Kind::U;
  IntElt elt;    // b for S/Sstar, d for U, y for E
  IdealHNF ideal;  // B for E
};
using OperatorWord = std::vector<OpLetter>;

OperatorWord operator*(const OperatorWord& a, const OperatorWord& b);
OperatorWord adjoint(const OperatorWord& w, const FieldDescriptor& K);
// N(c)/N(b) for a word, so that sigma_t(w) = N_e^{it} w.
Rational eigen_norm(const OperatorWord& w, const FieldDescriptor& K);
std::string to_string(const OperatorWord& w, const FieldDescriptor& K);

// s_b^* e_{y + B} u^d s_c
struct MonomialSpec {
  IntElt b{1, 0};
  IntElt y{0, 0};
  IdealHNF ideal_b;
  IntElt d{0, 0};
  IntElt c{1, 0};

  OperatorWord word() const;
};

MonomialSpec identity_monomial(const FieldDescriptor& K);
// Small random entries; about half the time c = b * unit, so the value can be
// nonzero. ideal_b is R or one of `small_ideals`.
MonomialSpec random_monomial(const SystemContext& sys, std::mt19937_64& rng,
                             const std::vector<IdealHNF>& small_ideals);

struct KmsValue {
  std::complex<long double> value{0, 0};
  long double tail_bound = 0;
  i64 X = 0;
  double beta = 0;
};

struct KmsResidual {
  long double residual = 0;
  long double bound = 0;
  Rational eigen_norm{1};
  std::complex<long double> lhs, rhs;
};

enum class TraceKind { finite_orbit, haar };
struct TypeLabel {
  std::string trace_type;  // I_n or II_1
  std::string state_type;  // I_inf or II_inf
};
TypeLabel classify_type(TraceKind kind, i64 orbit_size = 1);

// Evaluates the KMS_beta state phi_{beta, kappa, tau_{O, chi}} truncated to
// ideals of norm <= X, through the groupoid formula and through the induced
// representation; both normalize by the truncated zeta_kappa(beta - 1).
class KmsEngine {
 public:
  KmsEngine(const SystemContext& sys, i64 cls, const FiniteOrbit& orbit,
            const Character& chi, i64 X);

  const SystemContext& system() const { return sys_; }
  const IdealHNF& reference_ideal() const { return ak_; }
  const std::vector<IdealHNF>& ideals() const { return ideals_; }
  i64 X() const { return X_; }

  KmsValue eval_formula(const MonomialSpec& m, double beta);
  KmsValue eval_trace(const OperatorWord& w, double beta);
  KmsValue eval_trace(const MonomialSpec& m, double beta) { return eval_trace(m.word(), beta); }
  // mu(V_{x + a}); independent of x.
  long double measure(const IdealHNF& a, double beta);
  KmsResidual residual(const OperatorWord& w1, const OperatorWord& w2, double beta);
  long double tail_bound(double beta);
  // tau(u_{(r, g)}) for r given by coordinates mod the orbit denominator.
  std::complex<long double> tau(const std::array<i64, 2>& r, i64 i, i64 j);

  // t with t * x = a_kappa and the matrix of y -> t*y from x to a_kappa coordinates.
  struct Transport {
    FieldElement t;
    std::array<std::array<i64, 2>, 2> M{};
  };
  const Transport& transport(const IdealHNF& x);

 private:
  using Mat2 = std::array<std::array<i64, 2>, 2>;
  Mat2 unit_matrix(i64 i, i64 j);
  Mat2 lattice_map(const FieldElement& t, const IdealHNF& from);
  std::array<i64, 2> apply(const Mat2& M, const std::array<i64, 2>& v) const;
  std::pair<i64, i64> unit_exps(const FieldElement& u) const;
  void check_beta(double beta) const;
  long double normalizer(double beta);

  const SystemContext& sys_;
  i64 cls_;
  IdealHNF ak_;
  FiniteOrbit orbit_;
  Character chi_;
  i64 X_;
  i64 N_;  // orbit denominator
  int n_;  // degree
  std::vector<IdealHNF> ideals_;
  DirichletSeries zeta_;
  std::vector<std::complex<long double>> orbit_sum_;
  Mat2 zeta_mat_{}, eta_mat_{}, eta_inv_mat_{};
  std::map<std::pair<i64, i64>, Mat2> unit_mats_;
  std::map<std::pair<i64, i64>, std::complex<long double>> chi_cache_;
  std::unordered_map<IdealHNF, Transport, IdealHash> transports_;
};

}  // namespace cmkms

#endif  // CMKMS_KMS_HPP_
