#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace nblink::cli {

/// Runs one command line. Returns the process exit status; failures print a
/// single diagnostic line to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nblink::cli
