#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gpa {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 2;
constexpr int kExitInternal = 3;

// args excludes the program name. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gpa
