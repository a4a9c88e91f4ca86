#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "poolforge/advisor.hpp"
#include "poolforge/data.hpp"
#include "poolforge/orchestrator.hpp"

namespace poolforge::cli {

// --- Config files ------------------------------------------------------------
//
//   # comment
//   [probe]
//   epochs = 100
//
// Keys are addressed as "section.key". Unknown keys are rejected.

using KeyValues = std::map<std::string, std::string>;

struct ConfigKey {
    std::string_view name;
    std::string_view default_value;
    std::string_view help;
};

/// Every accepted key with its default.
std::span<const ConfigKey> config_keys();

KeyValues parse_config_text(std::string_view text);
KeyValues load_config_file(const std::filesystem::path& path);

/// Resolved command-line configuration for `run`.
struct CliConfig {
    std::optional<std::filesystem::path> train_path;
    std::optional<std::filesystem::path> test_path;
    BlobSpec blobs;  // used when no paths are given
    std::optional<std::filesystem::path> net_path;

    ExperimentConfig experiment;  // method and seed are set per sweep member
    std::vector<Method> methods;
    std::vector<std::uint64_t> seeds;
    std::size_t jobs = 1;
    std::filesystem::path out_dir = ".";
};

/// Defaults, then `file`, then `overrides`. `default_seed` fills sweep.seeds
/// when neither source sets it.
CliConfig resolve_config(const KeyValues& file, const KeyValues& overrides, std::uint64_t default_seed = 0);

// --- Results CSV ---------------------------------------------------------------

inline constexpr std::string_view kCsvHeader = "method,mode,seed,cycle,labeled,accuracy,wall_time_s";

struct ResultRow {
    std::string method;
    std::string mode;
    std::uint64_t seed = 0;
    std::size_t cycle = 0;
    std::size_t labeled = 0;
    double accuracy = 0.0;
    double wall_time = 0.0;

    bool operator==(const ResultRow&) const = default;
};

std::vector<ResultRow> rows_from_run(const RunResult& result, std::uint64_t seed);
std::string format_results_csv(std::span<const ResultRow> rows);
std::vector<ResultRow> parse_results_csv(std::string_view text);

/// One curve per (method, mode, seed), in first-appearance order.
std::vector<LearningCurve> curves_from_rows(std::span<const ResultRow> rows);

/// Seed-averaged curve per (method, mode).
std::vector<LearningCurve> averaged_curves(std::span<const ResultRow> rows);

// --- Commands --------------------------------------------------------------------

/// Entry point shared by the binary and the tests. `args` excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace poolforge::cli
