#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace pinball::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kUsage = 1, kVerifyFailed = 2, kIoFailure = 3 };

inline constexpr int kMaxGridDim = 8192;

/// Everything a subcommand needs. Unset optionals take the subcommand's
/// default (see the README table).
struct RunConfig {
    std::string command;
    std::optional<double> lambda;
    std::optional<std::array<double, 3>> lambda_range; ///< lo, hi, step
    std::uint64_t seed = 1;
    std::optional<std::size_t> transient;
    std::optional<std::size_t> keep;
    std::optional<std::size_t> seeds;
    std::optional<std::array<int, 2>> grid; ///< width, height
    std::optional<int> escape_n;
    std::optional<int> generations;
    std::optional<int> horizon;
    std::string out = "pinball";
    std::optional<std::string> points; ///< verify: CSV to check
};

/// Throws DomainError on out-of-range values (counts < 1, lambda outside
/// (0,1], grid dimensions above kMaxGridDim).
void validate(const RunConfig& config);

/// "WxH" -> {W, H}; "a:b:step" -> {a, b, step}. Throw DomainError.
std::array<int, 2> parse_grid(const std::string& text);
std::array<double, 3> parse_range(const std::string& text);

struct CommandResult {
    int exit_code = kOk;
    std::vector<std::string> files;
    std::vector<std::string> lines; ///< human-readable report
};

/// Each writes its files under config.out and a <prefix>.meta.json. Library
/// errors propagate as exceptions; run() maps them to exit codes.
CommandResult cmd_attractor(const RunConfig& config);
CommandResult cmd_scan(const RunConfig& config);
CommandResult cmd_manifolds(const RunConfig& config);
CommandResult cmd_basins(const RunConfig& config);
CommandResult cmd_verify(const RunConfig& config);

/// Parses argv, dispatches, prints the report lines to `out` and errors to `err`.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace pinball::cli
