#pragma once

#include <exception>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace randcompare::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataError = 2,
  kUnsupportedDesign = 3,
  kEnumerationTooLarge = 4,
};

/// Entry point shared by the executable and the CLI tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Maps a library exception to the documented exit code.
int exit_code_for(const std::exception& e) noexcept;

/// Expands a comma-separated selector list ("perm,welch", "all") into
/// canonical selector names in report order. Throws DomainError on an unknown
/// name.
std::vector<std::string> expand_test_selectors(std::string_view list);

}  // namespace randcompare::cli
