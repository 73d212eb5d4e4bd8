#pragma once

#include <ostream>

namespace covertnet {

/// Exit codes of the covertnet tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  // a validation check failed, or the run itself failed
inline constexpr int kExitUsage = 2;   // bad flags, bad config values, missing subcommand

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace covertnet
