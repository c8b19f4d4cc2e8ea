#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace passchart {

inline constexpr int kExitOk = 0;
inline constexpr int kExitItemFailures = 1;
inline constexpr int kExitConfigError = 2;

/// Entry point for the passchart tool. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace passchart
