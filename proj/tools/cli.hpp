#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "monolab/params.hpp"
#include "monolab/profile.hpp"

namespace monolab::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2, kHypothesisNotMet = 3 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NumericConfig {
  double quad_tol = 1e-10;
  std::size_t grid_size = 256;
  double identity_tol = 1e-6;
  double inequality_tol = 1e-8;
};

struct RunConfig {
  Profile profile;
  Params params;
  NumericConfig numeric;
};

/// INI text with [profile], [params] and [numeric] sections. The profile is
/// either `builtin = name` (with n, optional a and r_max) or n, phi, f,
/// r_max, tail_a, tail_s. Expressions may be double-quoted. N accepts "inf".
/// Throws ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Runs one command line; returns the exit code. Output goes to `out`,
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace monolab::cli
