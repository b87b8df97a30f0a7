#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "twophase/solver.hpp"
#include "twophase/synthetic.hpp"

namespace twophase::cli {

enum class Command { segment, otsu };
enum class SummaryFormat { text, json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::disk;
  int size = 128;
  double noise = 0.05;
  std::uint64_t seed = 7;
};

struct RunConfig {
  Command command = Command::segment;
  std::filesystem::path input_path;          ///< Empty when `synthetic` is set.
  std::optional<SyntheticSpec> synthetic;
  std::filesystem::path output_mask_path;
  std::optional<std::filesystem::path> energy_csv_path;
  std::optional<std::filesystem::path> snapshot_dir;
  std::optional<std::filesystem::path> u_field_path;
  SolverParams solver;
  SummaryFormat summary_format = SummaryFormat::text;
};

/// Bad command line; the message names the offending flag.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// --help was given; what() is the help text.
struct HelpRequested : std::runtime_error {
  using std::runtime_error::runtime_error;
};

RunConfig parse_args(int argc, const char* const* argv);

/// Executes the configured pipeline and prints the summary to `out`.
/// Returns kExitOk, or kExitRuntime after reporting the failure on `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args() + run() with the exit-code contract (0 / 1 / 2).
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace twophase::cli
