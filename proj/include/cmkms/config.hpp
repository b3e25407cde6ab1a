#ifndef CMKMS_CONFIG_HPP_
#define CMKMS_CONFIG_HPP_

#include <string>

#include "json.hpp"
#include "cmkms/congruence.hpp"

namespace cmkms {

inline constexpr int kSchemaVersion = 1;

// {
//   "schema_version": 1,                       optional
//   "field": "Q" | {"quadratic": d},
//   "modulus": {"m0_gens": [g, ...], "m_inf": [place, ...]},
//   "gamma_gens": "all" | "trivial" | [{"signs": [...], "residue": g}, ...],
//   "truncation": X,                           optional, default 1000
//   "label": "..."                             optional
// }
// Field elements g are integers or [x, y] meaning x + y*omega.
// Unknown keys and malformed values raise ConfigError.
SystemDescriptor parse_config(const nlohmann::json& j);
SystemDescriptor parse_config_text(const std::string& text);
SystemDescriptor load_config(const std::string& path);

// Builds the system; domain failures caused by the configuration (Gamma
// elements not coprime to m0, ...) are reported as ConfigError.
SystemContext load_system(const std::string& path);

nlohmann::json to_json(const SystemDescriptor& desc);

}  // namespace cmkms

#endif  // CMKMS_CONFIG_HPP_
