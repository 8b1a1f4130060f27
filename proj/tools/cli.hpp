#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ribbonlab/bands.hpp"

namespace ribbonlab::cli {

enum ExitCode : int { kOk = 0, kDomainError = 1, kUsageError = 2 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses the command line, dispatches, writes outputs. Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Potential argument: "a,b,c" (p entries), a single value (broadcast), "odd:a,b" (N+1 entries,
// even rows zero) or a JSON file holding an array or {"v": [...]}.
std::vector<double> parse_potential(const std::string& text, int N);
std::vector<double> parse_list(const std::string& text);

void write_dispersion_csv(const DispersionSet& d, std::ostream& os);
void emit_dispersion_csv(const DispersionSet& d, const std::string& path);

}  // namespace ribbonlab::cli
