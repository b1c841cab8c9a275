#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rmt::cli {

/// Exit codes of run().
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;

/// Runs one `rmtlab` invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace rmt::cli
