// Scenario front end: runs asset valuations, MM trajectories, equivalence
// fuzzing and ledger simulations from a JSON scenario file and writes
// deterministic CSV or JSON report tables.
//
//   firmval --scenario scenarios/mm_worked_t2.json --out out/ --format csv
//
// Exit codes: 0 success, 1 invariant/equivalence failure, 2 input error.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "firmval/scenario.hpp"

namespace {

int fail_input(const std::string& error_type, const std::string& message,
               const std::string& field = "") {
    nlohmann::json diagnostic;
    diagnostic["error"] = error_type;
    diagnostic["message"] = message;
    if (!field.empty()) diagnostic["field"] = field;
    std::cerr << diagnostic.dump() << '\n';
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"firmval: asset valuation, MM firm trajectories and "
                 "internal-capital-account ledgers"};
    std::string scenario_path;
    std::string out_dir = ".";
    std::string format = "csv";
    std::optional<std::uint64_t> seed;
    std::optional<double> tolerance;
    app.add_option("--scenario", scenario_path, "Scenario file (JSON)")
        ->required();
    app.add_option("--out", out_dir, "Output directory for report files");
    app.add_option("--seed", seed, "Override the scenario seed");
    app.add_option("--tol", tolerance, "Override the scenario tolerance");
    app.add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"csv", "json"}));
    CLI11_PARSE(app, argc, argv);

    firmval::RunOptions options;
    options.out_dir = out_dir;
    options.format = format == "json" ? firmval::ReportFormat::json
                                      : firmval::ReportFormat::csv;
    options.seed_override = seed;
    options.tolerance_override = tolerance;

    try {
        const firmval::RunResult result =
            firmval::run_scenario_file(scenario_path, options);
        std::cout << firmval::human_summary(result.report);
        for (const auto& file : result.files_written)
            std::cout << "wrote " << (options.out_dir / file).string() << '\n';
        if (result.exit_code != 0)
            std::cerr << R"({"error":"InvariantFailure","message":)"
                      << R"("a report table contains a failed check"})" << '\n';
        return result.exit_code;
    } catch (const firmval::ParseError& e) {
        return fail_input("ParseError", e.what());
    } catch (const firmval::ValidationError& e) {
        return fail_input("ValidationError", e.what(), e.field_path);
    } catch (const firmval::LedgerError& e) {
        return fail_input("LedgerError", e.what());
    } catch (const firmval::DomainError& e) {
        return fail_input("DomainError", e.what());
    } catch (const firmval::InfeasibleTrajectory& e) {
        nlohmann::json diagnostic;
        diagnostic["error"] = "InfeasibleTrajectory";
        diagnostic["message"] = e.what();
        std::cerr << diagnostic.dump() << '\n';
        return 1;
    } catch (const std::exception& e) {
        return fail_input("Error", e.what());
    }
}
