#pragma once

#include <string>
#include <vector>

namespace dgd {

// Parses and runs one dgdsim invocation; args excludes the program name.
// Exit codes: 0 success, 2 configuration error, 3 numerical/enumeration error.
int run_cli(std::vector<std::string> args);

}  // namespace dgd
