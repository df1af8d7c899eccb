#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace g2g::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kBadInput = 2;  // usage, config, or data errors
inline constexpr int kIoError = 3;   // unreadable input or unwritable output

// Runs one `g2g <subcommand> ...` invocation. args[0] is the program name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace g2g::cli
