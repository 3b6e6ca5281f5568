#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace finitax {

/// Dispatches one command-line invocation.
/// Exit codes: 0 success (check: valid), 1 invalid formula / failed
/// derivation / not entailed, 2 usage or input errors, 3 resource cap
/// exceeded.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

}  // namespace finitax
