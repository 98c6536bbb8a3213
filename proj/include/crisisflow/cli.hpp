#pragma once

#include <string>
#include <vector>

namespace crisisflow {

/// Runs one subcommand. Returns 0 on success or help, 1 on a domain error,
/// 2 on a usage or configuration error.
int dispatch(int argc, char** argv);
int dispatch(const std::vector<std::string>& args);

}  // namespace crisisflow
