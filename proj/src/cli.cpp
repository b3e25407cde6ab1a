#include "cmkms/cli.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "cmkms/config.hpp"
#include "cmkms/invariants.hpp"

namespace cmkms {

using nlohmann::json;

namespace {

struct Options {
  std::string config, config2, format = "json", out, kind = "modulus";
  std::optional<i64> bound;
  double beta = 3.0;
  int precision = 20;
  i64 cls = 0;
  i64 orbit_size = 1;
  int samples = 20;
  std::uint64_t seed = 1;
};

std::string real_str(const Real& v, int precision) {
  return v.str(precision, std::ios_base::scientific);
}

std::string ld_str(long double v, int precision) {
  std::ostringstream os;
  os.precision(std::min(precision, 21));
  os << std::scientific << v;
  return os.str();
}

json series_json(const DirichletSeries& z, i64 upto) {
  json coeffs = json::array();
  for (i64 n = 1; n <= std::min(upto, z.X()); ++n) coeffs.push_back(z.a[n]);
  return {{"label", z.label}, {"X", z.X()}, {"shift", z.shift}, {"coefficients", coeffs},
          {"total", z.total()}};
}

json ideal_json(const IdealHNF& I) {
  return {{"hnf", to_string(I)}, {"norm", to_string(I.norm())}};
}

json header(const std::string& cmd, const SystemContext& sys) {
  return {{"schema_version", kSchemaVersion},
          {"command", cmd},
          {"system", to_json(sys.desc)},
          {"truncation", sys.desc.truncation}};
}

void check_class(const SystemContext& sys, i64 cls) {
  if (cls < 0 || cls >= sys.cls.order())
    throw DomainError("class index " + std::to_string(cls) + " out of range [0, " +
                      std::to_string(sys.cls.order()) + ")");
}

json cmd_field_info(const SystemContext& sys, const Options& o) {
  const FieldDescriptor& K = sys.K();
  json r = header("field-info", sys);
  r["field"] = {{"name", K.name()},      {"d", K.d},
                {"discriminant", K.D},   {"omega", K.omega_rule()},
                {"degree", K.degree()},  {"real_places", K.real_places},
                {"complex_places", K.complex_places}};
  json tors = json::array();
  for (const auto& u : sys.units.torsion) tors.push_back(to_string(K, u));
  r["units"] = {{"torsion", tors}};
  if (sys.units.fundamental) {
    r["units"]["fundamental"] = to_string(K, *sys.units.fundamental);
    r["units"]["regulator"] = real_str(sys.units.regulator, o.precision);
  }
  r["class_group"] = {{"order", sys.cl.presentation.order()},
                      {"cyclic_orders", sys.cl.presentation.cyclic_orders}};
  json split = json::array();
  const i64 B = o.bound.value_or(30);
  for (i64 p : primes_up_to(B)) {
    PrimeSplitting s = factor_rational_prime(K, p);
    split.push_back({{"p", p}, {"type", to_string(s.type)}});
  }
  r["splitting"] = split;
  return r;
}

ZetaKind parse_kind(const std::string& k) {
  if (k == "modulus") return ZetaKind::modulus;
  if (k == "partial") return ZetaKind::partial;
  if (k == "trivial") return ZetaKind::trivial_class;
  if (k == "dedekind") return ZetaKind::dedekind;
  throw ConfigError("--kind must be modulus, partial, trivial or dedekind");
}

json cmd_zeta(const SystemContext& sys, const Options& o) {
  const ZetaKind kind = parse_kind(o.kind);
  if (kind == ZetaKind::partial) check_class(sys, o.cls);
  const i64 X = sys.desc.truncation;
  DirichletSeries z = build_zeta(sys, kind, X, o.cls);
  json r = header("zeta", sys);
  r["kind"] = to_string(kind);
  if (kind == ZetaKind::partial) r["class"] = o.cls;
  r["series"] = series_json(z, o.bound.value_or(30));
  ResidueEstimate re = residue_estimate(z);
  r["residue_estimate"] = {{"at_X", re.at_X}, {"at_half_X", re.at_half_X}};
  if (kind == ZetaKind::partial || kind == ZetaKind::trivial_class) {
    ResidueFormula f = residue_formula(sys);
    r["residue_formula"] = {{"with_w_m", real_str(f.with_w_m, o.precision)},
                            {"with_w_K", real_str(f.with_w_K, o.precision)},
                            {"w_m", f.w_m},
                            {"w_K", f.w_K},
                            {"conventions_differ", f.conventions_differ()}};
  }
  SeriesValue v = evaluate(z, Real(o.beta));
  r["value"] = {{"s", o.beta},
                {"value", real_str(v.value, o.precision)},
                {"tail_bound", real_str(v.tail_bound, o.precision)}};
  return r;
}

json cmd_classgroup(const SystemContext& sys, const Options&) {
  json r = header("classgroup", sys);
  json reps = json::array();
  for (const auto& I : sys.cls.representatives) reps.push_back(ideal_json(I));
  const auto& inv = sys.cls.invariants;
  r["generalized_class_group"] = {{"order", sys.cls.order()},
                                  {"expected_order", sys.cls.expected_order},
                                  {"cyclic_orders", sys.cls.group.cyclic_orders},
                                  {"representatives", reps}};
  r["absolute_class_number"] = sys.cl.presentation.order();
  r["residue_group_order"] = sys.rg.order();
  r["gamma_order"] = sys.gamma.order();
  r["invariants"] = {{"w_m", inv.w_m},
                     {"w_K", inv.w_K},
                     {"unit_index", inv.unit_index},
                     {"gamma_bar", inv.gamma_bar},
                     {"gamma_in_units", inv.gamma_in_units}};
  const auto& ru = sys.restricted;
  r["restricted_units"] = {{"trivial", ru.trivial()},
                           {"torsion_order", ru.torsion_order},
                           {"torsion_generator", to_string(sys.K(), ru.torsion_generator)}};
  if (ru.free_generator) r["restricted_units"]["free_generator"] = to_string(sys.K(), *ru.free_generator);
  return r;
}

json cmd_fixed_points(const SystemContext& sys, const Options& o) {
  json r = header("fixed-points", sys);
  const size_t cap = static_cast<size_t>(o.bound.value_or(64));
  json per = json::array();
  for (i64 k = 0; k < sys.cls.order(); ++k) {
    FixedPointSet F = fixed_points(toral_action(sys, sys.cls.representatives[k]), cap);
    json e = {{"class", k}, {"ideal", ideal_json(sys.cls.representatives[k])},
              {"finite", F.finite}};
    if (F.finite) {
      e["count"] = F.count.str();
      e["group_invariants"] = F.group_invariants;
      json pts = json::array();
      for (const auto& p : F.representatives) pts.push_back(to_string(p));
      e["points"] = pts;
      e["points_truncated"] = F.representatives_truncated;
    } else {
      e["count"] = "infinite";
    }
    per.push_back(e);
  }
  r["classes"] = per;
  return r;
}

json cmd_orbits(const SystemContext& sys, const Options& o) {
  check_class(sys, o.cls);
  json r = header("orbits", sys);
  const i64 Nmax = o.bound.value_or(12);
  if (Nmax < 1 || Nmax > 200) throw DomainError("orbit bound must lie in [1, 200]");
  ToralAction act = toral_action(sys, sys.cls.representatives[o.cls]);
  std::set<i64> sizes = orbit_size_census(act, Nmax);
  r["class"] = o.cls;
  r["Nmax"] = Nmax;
  r["orbit_sizes"] = std::vector<i64>(sizes.begin(), sizes.end());
  r["distinct_sizes"] = sizes.size();
  json per = json::array();
  for (i64 N = 1; N <= std::min<i64>(Nmax, 8); ++N) {
    std::map<i64, i64> by_size;
    for (const auto& O : finite_orbits(act, N)) ++by_size[O.size()];
    json m = json::object();
    for (auto [s, c] : by_size) m[std::to_string(s)] = c;
    per.push_back({{"denominator", N}, {"orbits_by_size", m}});
  }
  r["orbits"] = per;
  return r;
}

json cmd_partition(const SystemContext& sys, const Options& o) {
  check_class(sys, o.cls);
  json r = header("partition", sys);
  const i64 X = sys.desc.truncation;
  ScaledSeries Z = partition_function(sys, o.cls, o.orbit_size, X);
  SeriesValue v = evaluate(Z, Real(o.beta));
  ScaleRecovery rec = recover_scale(Z);
  r["class"] = o.cls;
  r["orbit_size"] = o.orbit_size;
  r["scale"] = Z.scale;
  r["multiplier"] = Z.multiplier;
  r["recovered_scale"] = rec.scale;
  r["value"] = {{"beta", o.beta},
                {"value", real_str(v.value, o.precision)},
                {"tail_bound", real_str(v.tail_bound, o.precision)}};
  SpectrumMultiset spec = hamiltonian_spectrum(sys, o.cls, X, o.orbit_size);
  if (o.beta > spec.critical_beta) {
    GibbsResult g = gibbs_partition(spec, Real(o.beta));
    r["gibbs"] = real_str(g.Z, o.precision);
  }
  const int ib = static_cast<int>(o.beta);
  if (ib == o.beta && o.beta > spec.critical_beta) {
    Rational lhs = gibbs_partition_exact(spec, ib);
    Rational rhs = Rational(Z.multiplier) * Rational(boost::multiprecision::pow(BigInt(Z.scale), ib)) *
                   evaluate_exact(Z.base, ib);
    r["exact_match"] = lhs == rhs;
  }
  TypeLabel t = classify_type(TraceKind::finite_orbit, o.orbit_size);
  r["type"] = {{"trace", t.trace_type}, {"state", t.state_type}};
  return r;
}

json cmd_kms_check(const SystemContext& sys, const Options& o) {
  check_class(sys, o.cls);
  json r = header("kms-check", sys);
  const i64 X = o.bound.value_or(200);
  ToralAction act = toral_action(sys, sys.cls.representatives[o.cls]);
  FiniteOrbit O = orbit_of(act, std::vector<i64>(sys.K().degree(), 0), 1);
  KmsEngine eng(sys, o.cls, O, Character{}, X);
  std::mt19937_64 rng(o.seed);
  std::vector<IdealHNF> smalls;
  for (const auto& [n, list] : enumerate_ideals(sys.K(), 6, sys.m().m0))
    smalls.insert(smalls.end(), list.begin(), list.end());
  json rows = json::array();
  bool ok = true;
  for (int k = 0; k < o.samples; ++k) {
    MonomialSpec m = random_monomial(sys, rng, smalls);
    MonomialSpec m2 = random_monomial(sys, rng, smalls);
    KmsValue f = eng.eval_formula(m, o.beta);
    KmsValue t = eng.eval_trace(m, o.beta);
    KmsResidual res = eng.residual(m.word(), m2.word(), o.beta);
    const long double diff = std::abs(f.value - t.value);
    const bool row_ok = diff <= 2 * f.tail_bound && res.residual <= res.bound;
    ok = ok && row_ok;
    rows.push_back({{"monomial", to_string(m.word(), sys.K())},
                    {"formula_re", ld_str(f.value.real(), o.precision)},
                    {"formula_im", ld_str(f.value.imag(), o.precision)},
                    {"difference", ld_str(diff, o.precision)},
                    {"tail_bound", ld_str(f.tail_bound, o.precision)},
                    {"partner", to_string(m2.word(), sys.K())},
                    {"residual", ld_str(res.residual, o.precision)},
                    {"residual_bound", ld_str(res.bound, o.precision)},
                    {"ok", row_ok}});
  }
  r["class"] = o.cls;
  r["beta"] = o.beta;
  r["X"] = X;
  r["rows"] = rows;
  r["all_within_tails"] = ok;
  return r;
}

json record_json(const InvariantRecord& rec, i64 upto) {
  json j = {{"class_number", rec.class_number},
            {"zeta_Km", series_json(rec.zeta_Km, upto)},
            {"zeta_trivial", series_json(rec.zeta_trivial, upto)},
            {"norm_prime_set", std::vector<i64>(rec.norm_prime_set.begin(),
                                                rec.norm_prime_set.end())},
            {"ambiguous_limit", rec.ambiguous_limit}};
  if (rec.tor_times_fixed) j["tor_times_fixed"] = *rec.tor_times_fixed;
  else j["tor_times_fixed"] = "infinite";
  return j;
}

i64 bounded(const SystemContext& sys, const Options& o, i64 fallback) {
  const i64 X = sys.desc.truncation;
  const i64 b = o.bound.value_or(std::min(X, fallback));
  if (b < 1) throw DomainError("bound must be positive");
  if (b > X)
    throw DomainError("insufficient truncation: bound " + std::to_string(b) +
                      " exceeds X = " + std::to_string(X));
  return b;
}

json cmd_invariants(const SystemContext& sys, const Options& o) {
  const i64 X = bounded(sys, o, sys.desc.truncation);
  InvariantExtraction ex = extract_invariants(sys, X);
  json r = header("invariants", sys);
  r["X"] = X;
  r["partition_route"] = record_json(ex.from_partition_functions, 30);
  r["direct_route"] = record_json(ex.direct, 30);
  r["agree"] = ex.agree;
  return r;
}

json cmd_census(const SystemContext& sys, const Options&) {
  CensusReport c = minimal_census(sys, sys.desc.truncation);
  json r = header("census", sys);
  r["component_count"] = c.enumerated_components;
  r["closed_form_count"] = c.closed_form_components;
  r["tor_order"] = c.tor_order;
  r["class_number"] = c.class_number;
  if (c.units_trivial) r["fixed_count"] = "infinite";
  else r["fixed_count"] = *c.fixed_count;
  r["fixed_count_per_class"] = c.fixed_count_per_class;
  r["solidarity"] = c.solidarity;
  r["multiplier"] = c.multiplier;
  r["summed_series"] = series_json(c.summed_series, 30);
  r["summed_matches_zeta_Km"] = c.summed_matches;
  r["limit_at_infinity"] = c.limit_at_infinity;
  r["scales_recovered"] = c.scales_recovered;
  r["residue_per_class"] = c.residue_per_class;
  r["degenerate_limit"] = c.degenerate_limit;
  json comps = json::array();
  for (const auto& m : c.components) {
    json e = {{"class", m.cls}, {"torsion_character", m.torsion_character}};
    if (!c.units_trivial) e["fixed_point"] = to_string(m.fixed_point);
    comps.push_back(e);
  }
  r["components"] = comps;
  return r;
}

json cmd_kronecker(const SystemContext& sys, const Options& o) {
  const i64 B = bounded(sys, o, 1000);
  std::set<i64> s = kronecker_set(sys, B);
  json r = header("kronecker", sys);
  r["bound"] = B;
  r["excluded_primes"] = sys.m().support_Q;
  r["primes"] = std::vector<i64>(s.begin(), s.end());
  r["count"] = s.size();
  return r;
}

json cmd_compare(const SystemContext& a, const SystemContext& b, const Options& o) {
  const i64 X = std::min(a.desc.truncation, b.desc.truncation);
  const i64 B = o.bound.value_or(std::min<i64>(X, 500));
  ComparisonReport c = compare_systems(a, b, B);
  json r = {{"schema_version", kSchemaVersion},
            {"command", "compare"},
            {"system_a", to_json(a.desc)},
            {"system_b", to_json(b.desc)},
            {"truncation", X},
            {"bound", B}};
  r["arithmetic_equivalence"] = {{"equivalent", c.arithmetic.equivalent},
                                 {"excluded_primes", c.arithmetic.excluded}};
  if (c.arithmetic.witness) r["arithmetic_equivalence"]["witness"] = *c.arithmetic.witness;
  r["kronecker_only_a"] = c.kronecker_only_a;
  r["kronecker_only_b"] = c.kronecker_only_b;
  r["class_numbers"] = {{"a", c.class_number_a}, {"b", c.class_number_b},
                        {"equal", c.class_numbers_equal}};
  r["invariant_diffs"] = c.invariant_diffs;
  r["all_checks_pass"] = c.all_checks_pass;
  r["note"] = c.note;
  return r;
}

void flatten(const json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, os);
  } else if (j.is_array()) {
    bool scalars = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
    if (scalars) {
      os << prefix << '\t';
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) os << ',';
        os << (j[i].is_string() ? j[i].get<std::string>() : j[i].dump());
      }
      os << '\n';
    } else {
      for (size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), os);
    }
  } else {
    os << prefix << '\t' << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

}  // namespace

std::string to_tsv(const json& report) {
  std::ostringstream os;
  flatten(report, "", os);
  return os.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"KMS data of congruence-monoid systems over Q and quadratic fields", "cmkms"};
  app.require_subcommand(1, 1);
  Options o;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"field-info", "field, units, class group and prime splitting"},
      {"zeta", "partial / ray / Dedekind zeta coefficients and values"},
      {"classgroup", "generalized class group and restricted units"},
      {"fixed-points", "fixed points of the unit action per class"},
      {"orbits", "finite orbit census of the unit action"},
      {"partition", "partition function of a type I state"},
      {"kms-check", "formula vs trace evaluation and KMS residuals"},
      {"invariants", "invariants through partition functions and directly"},
      {"census", "minimal type I components"},
      {"kronecker", "Kronecker set of the class field"},
      {"compare", "necessary conditions for two systems to be isomorphic"}};
  std::string chosen;
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", o.config, "system JSON")->required();
    if (name == "compare") sub->add_option("--config2", o.config2, "second system JSON")->required();
    sub->add_option("--bound", o.bound, "bound (primes, X, orbit denominators, ...)");
    sub->add_option("--beta", o.beta, "inverse temperature");
    sub->add_option("--precision", o.precision, "significant digits of real output")
        ->check(CLI::Range(1, 60));
    sub->add_option("--format", o.format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));
    sub->add_option("--out", o.out, "output file (default stdout)");
    sub->add_option("--class", o.cls, "generalized class index");
    sub->add_option("--orbit-size", o.orbit_size, "orbit size |O|");
    sub->add_option("--kind", o.kind, "zeta kind: modulus, partial, trivial, dedekind");
    sub->add_option("--samples", o.samples, "random monomials for kms-check");
    sub->add_option("--seed", o.seed, "random seed");
    sub->callback([&chosen, name = name] { chosen = name; });
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    SystemContext sys = load_system(o.config);
    json report;
    if (chosen == "field-info") report = cmd_field_info(sys, o);
    else if (chosen == "zeta") report = cmd_zeta(sys, o);
    else if (chosen == "classgroup") report = cmd_classgroup(sys, o);
    else if (chosen == "fixed-points") report = cmd_fixed_points(sys, o);
    else if (chosen == "orbits") report = cmd_orbits(sys, o);
    else if (chosen == "partition") report = cmd_partition(sys, o);
    else if (chosen == "kms-check") report = cmd_kms_check(sys, o);
    else if (chosen == "invariants") report = cmd_invariants(sys, o);
    else if (chosen == "census") report = cmd_census(sys, o);
    else if (chosen == "kronecker") report = cmd_kronecker(sys, o);
    else report = cmd_compare(sys, load_system(o.config2), o);

    const std::string text = o.format == "tsv" ? to_tsv(report) : report.dump(2) + "\n";
    if (o.out.empty()) {
      out << text;
    } else {
      std::ofstream f(o.out);
      if (!f) throw ConfigError("cannot write " + o.out);
      f << text;
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cmkms
