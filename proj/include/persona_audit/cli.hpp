#pragma once

#include <string>
#include <vector>

namespace persona_audit {

/// Exit codes: 0 success, 1 usage or unexpected error, 2 provider failure,
/// 3 validation failure. args excludes the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace persona_audit
