#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "segver/vafa_intriligator.hpp"

namespace segver {

enum class Command { Params, Vi, Verlinde, Segre, Verify, Sweep, Fit, Calibrate };

std::string to_string(Command c);
Command parse_command(const std::string& s);

/// Inclusive `a..b` or a single integer.  Throws InvalidInput.
std::vector<std::int64_t> parse_range(const std::string& text);

enum class Format { Json, Csv };

struct JobSpec {
  Command command = Command::Verify;
  std::vector<std::int64_t> g, r, d, ell;
  /// Only for `vi`; N defaults to vdim / r.
  std::optional<int> n;
  std::optional<std::int64_t> exponent;
  Backend backend = Backend::Exact;
  /// 0: SEGVER_WORKERS, then hardware concurrency.
  unsigned workers = 0;
  /// Empty: no report file; "-": report on stdout.
  std::string out_path;
  Format format = Format::Json;
  /// Empty: cache disabled.
  std::string cache_dir;
  /// Empty: SEGVER_CONFIG, then ./segver-convention.json.
  std::string config_path;
  /// Pins d' instead of the stabilization policy.
  std::optional<std::int64_t> d_norm;
  int stabilization_cap = 10;
  bool timings = false;
};

/// Exit codes of `run`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitInvalid = 2;

std::string resolve_config_path(const std::string& requested);

/// Executes the job over the Cartesian product of the ranges, writes the
/// report, prints one summary line per record to `out` and diagnostics to
/// `err`.  Returns 0 when every record passes, 1 on a mathematical mismatch,
/// 2 on invalid parameters or configuration.
int run(const JobSpec& spec, std::ostream& out, std::ostream& err);

/// Parses command-line arguments (without the program name) and runs.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace segver
