#pragma once

// Command-line frontend: `analyze`, `critical`, `sweep` and `phase`.
// Exit codes: 0 success, 2 usage error, 3 numerical failure.

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Environment variable holding the default worker count.
inline constexpr const char* kThreadsEnv = "BEC_LAB_THREADS";

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// "lo:hi:steps" -> steps evenly spaced values from lo to hi inclusive.
std::vector<double> parse_range(std::string_view text);

/// "a,b,c" -> {a, b, c}.
std::vector<double> parse_list(std::string_view text);

/// `key = value` lines; blank lines and `#` comments are skipped.
std::map<std::string, std::string> read_config(std::istream& in);

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace bec::cli
