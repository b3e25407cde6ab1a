#include "cmkms/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace cmkms {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw ConfigError("config: " + what); }

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) fail("unknown key '" + k + "' in " + where);
}

i64 get_int(const json& j, const std::string& what) {
  if (!j.is_number_integer()) fail(what + " must be an integer");
  return j.get<i64>();
}

FieldDescriptor parse_field(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "Q") return make_rational_field();
    fail("field must be \"Q\" or {\"quadratic\": d}");
  }
  if (!j.is_object()) fail("field must be \"Q\" or {\"quadratic\": d}");
  only_keys(j, {"quadratic"}, "field");
  if (!j.contains("quadratic")) fail("field object needs \"quadratic\"");
  i64 d = get_int(j["quadratic"], "field.quadratic");
  try {
    return make_quadratic_field(d);
  } catch (const DomainError& e) {
    fail(std::string("field: ") + e.what());
  }
}

IntElt parse_element(const FieldDescriptor& K, const json& j, const std::string& what) {
  IntElt e;
  if (j.is_number_integer()) {
    e = {j.get<i64>(), 0};
  } else if (j.is_array() && j.size() == 2) {
    e = {get_int(j[0], what), get_int(j[1], what)};
  } else {
    fail(what + " must be an integer or [x, y]");
  }
  if (K.is_rational() && e.y != 0) fail(what + ": Q has no omega component");
  return e;
}

Modulus parse_modulus(const FieldDescriptor& K, const json& j) {
  if (!j.is_object()) fail("modulus must be an object");
  only_keys(j, {"m0_gens", "m_inf"}, "modulus");
  std::vector<FieldElement> gens;
  if (j.contains("m0_gens")) {
    if (!j["m0_gens"].is_array()) fail("modulus.m0_gens must be a list");
    for (const auto& g : j["m0_gens"]) gens.push_back(to_field(parse_element(K, g, "m0_gens")));
  }
  if (gens.empty()) gens.push_back(FieldElement(1));
  bool nonzero = false;
  for (const auto& g : gens) nonzero = nonzero || !g.is_zero();
  if (!nonzero) fail("m0 must be nonzero");
  std::vector<int> m_inf;
  if (j.contains("m_inf")) {
    if (!j["m_inf"].is_array()) fail("modulus.m_inf must be a list");
    for (const auto& v : j["m_inf"]) m_inf.push_back(static_cast<int>(get_int(v, "m_inf")));
  }
  try {
    return make_modulus(ideal_from_generators(K, gens), m_inf);
  } catch (const DomainError& e) {
    fail(std::string("modulus: ") + e.what());
  }
}

}  // namespace

SystemDescriptor parse_config(const json& j) {
  if (!j.is_object()) fail("top level must be an object");
  only_keys(j, {"schema_version", "field", "modulus", "gamma_gens", "truncation", "label"},
            "config");
  if (j.contains("schema_version") && get_int(j["schema_version"], "schema_version") !=
                                          kSchemaVersion)
    fail("unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
  if (!j.contains("field")) fail("missing \"field\"");

  SystemDescriptor d;
  d.field = parse_field(j["field"]);
  d.modulus = j.contains("modulus") ? parse_modulus(d.field, j["modulus"])
                                    : make_modulus(unit_ideal(d.field), {});
  if (j.contains("gamma_gens")) {
    const json& g = j["gamma_gens"];
    if (g.is_string()) {
      const std::string s = g.get<std::string>();
      if (s == "all") d.gamma_all = true;
      else if (s != "trivial") fail("gamma_gens string must be \"all\" or \"trivial\"");
    } else if (g.is_array()) {
      for (const auto& r : g) {
        if (!r.is_object()) fail("gamma_gens entries must be objects");
        only_keys(r, {"signs", "residue"}, "gamma_gens entry");
        ResidueClass rc;
        if (r.contains("signs")) {
          if (!r["signs"].is_array()) fail("signs must be a list");
          for (const auto& s : r["signs"]) rc.signs.push_back(static_cast<int>(get_int(s, "sign")));
        }
        if (!r.contains("residue")) fail("gamma_gens entry needs \"residue\"");
        rc.residue = parse_element(d.field, r["residue"], "residue");
        d.gamma_gens.push_back(rc);
      }
    } else {
      fail("gamma_gens must be \"all\", \"trivial\" or a list");
    }
  }
  if (j.contains("truncation")) {
    d.truncation = get_int(j["truncation"], "truncation");
    if (d.truncation < 1 || d.truncation > 100000000) fail("truncation out of range");
  }
  if (j.contains("label")) {
    if (!j["label"].is_string()) fail("label must be a string");
    d.label = j["label"].get<std::string>();
  }
  if (d.label.empty()) d.label = d.field.name();
  return d;
}

SystemDescriptor parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

SystemDescriptor load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

SystemContext load_system(const std::string& path) {
  SystemDescriptor d = load_config(path);
  try {
    return build_system(d);
  } catch (const DomainError& e) {
    // residue classes and signs are only checked against m while building
    const std::string msg = e.what();
    if (msg.find("residue") != std::string::npos || msg.find("signs") != std::string::npos)
      fail(msg);
    throw;
  }
}

json to_json(const SystemDescriptor& d) {
  json j;
  j["schema_version"] = kSchemaVersion;
  if (d.field.is_rational()) j["field"] = "Q";
  else j["field"] = {{"quadratic", d.field.d}};
  j["modulus"] = {{"m0", to_string(d.modulus.m0)}, {"m_inf", d.modulus.m_inf}};
  if (d.gamma_all) {
    j["gamma_gens"] = "all";
  } else {
    json g = json::array();
    for (const auto& r : d.gamma_gens)
      g.push_back({{"signs", r.signs}, {"residue", {r.residue.x, r.residue.y}}});
    j["gamma_gens"] = g;
  }
  j["truncation"] = d.truncation;
  j["label"] = d.label;
  return j;
}

}  // namespace cmkms
