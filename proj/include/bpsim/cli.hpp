#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace bpsim {

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_numeric = 3 };

/// Sets `doc` at a dotted path ("settings.n") to `value`. The value is read
/// as JSON when it parses, otherwise as a plain string.
void apply_override(nlohmann::json& doc, std::string_view assignment);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bpsim
