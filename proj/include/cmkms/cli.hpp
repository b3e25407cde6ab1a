#ifndef CMKMS_CLI_HPP_
#define CMKMS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace cmkms {

// args excludes the program name. Returns the process exit status:
// 0 success, 1 domain error, 2 configuration or usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// key<TAB>value lines; nested keys joined with '.', scalar lists with ','.
std::string to_tsv(const nlohmann::json& report);

}  // namespace cmkms

#endif  // CMKMS_CLI_HPP_
