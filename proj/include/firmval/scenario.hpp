#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>

#include "firmval/asset_model.hpp"
#include "firmval/ledger.hpp"
#include "firmval/report.hpp"
#include "firmval/trajectory_fuzz.hpp"

namespace firmval {

inline constexpr int kScenarioSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

struct AssetScenario {
    AssetSpec asset;
    Rate rate;
};

struct TrajectoryScenario {
    FirmPrimitives primitives;
    TerminalCondition terminal;
    double tolerance{1e-9};
    bool tolerance_from_file{false};
};

struct FuzzScenario {
    int count{0};
    std::uint64_t seed{0};
    double tolerance{1e-9};
    TrajectoryRanges ranges;
    bool seed_from_file{false};
    bool tolerance_from_file{false};
};

struct LedgerScenario {
    Denomination denomination{Denomination::value};
    double initial_share_price{0.0};
    Rate ica_interest_rate{};
    std::vector<LedgerEvent> events;
    std::optional<Cents> sellout_market_value;
    std::optional<ExitRule> repurchase_rule;
};

struct Scenario {
    int schema_version{kScenarioSchemaVersion};
    std::string kind;
    std::variant<AssetScenario, TrajectoryScenario, FuzzScenario, LedgerScenario>
        payload;
};

/// Parses and validates scenario text. Unknown fields are errors, not
/// warnings; ValidationError carries the offending field path.
Scenario parse_scenario(const std::string& text);

struct RunOptions {
    std::filesystem::path out_dir{"."};
    ReportFormat format{ReportFormat::csv};
    std::optional<std::uint64_t> seed_override;
    std::optional<double> tolerance_override;
};

struct RunResult {
    int exit_code{0};  // 0 ok, 1 invariant/equivalence failure, 2 input error
    Report report;
    std::vector<std::string> files_written;
};

/// Executes a parsed scenario and writes its report files.
/// Never throws for equivalence failures; those set exit_code = 1.
RunResult run_scenario(const Scenario& scenario, const std::string& scenario_name,
                       const std::string& scenario_bytes, const RunOptions& options);

/// Reads, parses, runs. Input problems (missing file, ParseError,
/// ValidationError) surface as exceptions for the CLI to map to exit 2.
RunResult run_scenario_file(const std::filesystem::path& path,
                            const RunOptions& options);

}  // namespace firmval
