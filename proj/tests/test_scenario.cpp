#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "firmval/scenario.hpp"
#include "test_support.hpp"

using namespace firmval;

namespace {

std::filesystem::path temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("firmval_test_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

constexpr const char* kWorkedTrajectory = R"({
  "schema_version": 1,
  "kind": "mm_trajectory",
  "rate": 0.10,
  "horizon": 2,
  "initial_nav": 1000,
  "initial_shares": 100,
  "accounting_profit": [150, 150],
  "net_investment": [0, 0],
  "dividends": [0, 0]
})";

}  // namespace

TEST_CASE("scenario parsing: strictness and field paths") {
    SUBCASE("malformed text is a parse error") {
        CHECK_THROWS_AS(parse_scenario("{not json"), ParseError);
    }
    SUBCASE("missing schema_version") {
        CHECK_THROWS_AS(parse_scenario(R"({"kind":"asset"})"), ValidationError);
    }
    SUBCASE("wrong schema_version") {
        CHECK_THROWS_AS(parse_scenario(R"({"schema_version":2,"kind":"asset"})"),
                        ValidationError);
    }
    SUBCASE("unknown kind") {
        CHECK_THROWS_AS(
            parse_scenario(R"({"schema_version":1,"kind":"mystery"})"),
            ValidationError);
    }
    SUBCASE("unknown fields are errors, with the offending path") {
        const std::string text = R"({
            "schema_version": 1, "kind": "asset", "rate": 0.1,
            "asset": {"lifetime": 3, "rental_rte": 10}
        })";
        try {
            parse_scenario(text);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(e.field_path == "asset.rental_rte");
        }
    }
    SUBCASE("series length mismatch points at the series") {
        std::string text = kWorkedTrajectory;
        text.replace(text.find("[150, 150]"), 10, "[150]");
        try {
            parse_scenario(text);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(e.field_path == "accounting_profit");
        }
    }
    SUBCASE("money off the cent quantum is rejected") {
        const std::string text = R"({
            "schema_version": 1, "kind": "ledger",
            "book": {"denomination": "value"},
            "events": [{"kind": "contribution", "member_id": "a",
                        "amount": 10.001}]
        })";
        CHECK_THROWS_AS(parse_scenario(text), ValidationError);
    }
}

TEST_CASE("asset scenario run") {
    const std::string text = R"({
      "schema_version": 1,
      "kind": "asset",
      "rate": 0.10,
      "asset": {
        "capital_services": 10, "rental_rate": 10, "lifetime": 3,
        "output_price": 10, "annual_output": 100,
        "variable_cost": 800, "wage_rate": 1, "labor_hired": 50
      }
    })";
    const Scenario scenario = parse_scenario(text);
    RunOptions options;
    options.out_dir = temp_dir("asset");
    const RunResult result = run_scenario(scenario, "asset.json", text, options);
    CHECK(result.exit_code == 0);
    REQUIRE(result.report.tables.size() == 1);
    const Table& table = result.report.tables[0];
    CHECK(table.columns[0] == "passive_value");
    CHECK(table.rows[0][0].get<double>() == doctest::Approx(248.68519909842223));
    CHECK(table.rows[0][1].get<double>() == doctest::Approx(373.02779864763335));
    CHECK(table.rows[0][3].get<double>() == doctest::Approx(124.34259954921112));

    const std::string csv = slurp(options.out_dir / "asset_valuation.csv");
    CHECK(csv.find("passive_value,active_value,pure_profit") == 0);
}

TEST_CASE("trajectory scenario reproduces the worked firm") {
    const Scenario scenario = parse_scenario(kWorkedTrajectory);
    RunOptions options;
    options.out_dir = temp_dir("traj");
    const RunResult result =
        run_scenario(scenario, "mm.json", kWorkedTrajectory, options);
    CHECK(result.exit_code == 0);
    const Table& valuations = result.report.tables[1];
    REQUIRE(valuations.name == "valuations");
    for (const auto& row : valuations.rows) {
        CHECK(row[7].get<bool>());  // pass column
    }
    CHECK(valuations.rows[0][1].get<double>() ==
          doctest::Approx(1086.7768595041323).epsilon(1e-12));
    // Five formula columns agree at two decimals in the human rendering.
    const std::string human = human_summary(result.report);
    CHECK(human.find("1086.78") != std::string::npos);
}

TEST_CASE("fuzz scenario is deterministic and echoes its defaults") {
    const std::string text = R"({
      "schema_version": 1, "kind": "mm_fuzz",
      "count": 50, "seed": 7, "tolerance": 1e-9
    })";
    const Scenario scenario = parse_scenario(text);
    RunOptions options;
    options.out_dir = temp_dir("fuzz_a");
    const RunResult first = run_scenario(scenario, "fuzz.json", text, options);
    CHECK(first.exit_code == 0);

    options.out_dir = temp_dir("fuzz_b");
    const RunResult second = run_scenario(scenario, "fuzz.json", text, options);
    CHECK(slurp(temp_dir("fuzz_a") / "fuzz_summary.csv") ==
          slurp(temp_dir("fuzz_b") / "fuzz_summary.csv"));

    bool echoed = false;
    for (const auto& [key, value] : first.report.header)
        if (key == "ranges.max_horizon" && value == "40") echoed = true;
    CHECK(echoed);

    // Seed override is recorded in the header.
    options.seed_override = 99;
    options.out_dir = temp_dir("fuzz_c");
    const RunResult overridden = run_scenario(scenario, "fuzz.json", text, options);
    bool flagged = false;
    for (const auto& [key, value] : overridden.report.header) {
        if (key == "seed") CHECK(value == "99");
        if (key == "seed_source" && value == "flag") flagged = true;
    }
    CHECK(flagged);
}

TEST_CASE("zero tolerance fuzz reports failures as data") {
    const std::string text = R"({
      "schema_version": 1, "kind": "mm_fuzz",
      "count": 1, "seed": 3, "tolerance": 0.0
    })";
    const Scenario scenario = parse_scenario(text);
    RunOptions options;
    options.out_dir = temp_dir("fuzz_zero");
    const RunResult result = run_scenario(scenario, "fuzz.json", text, options);
    CHECK(result.exit_code == 1);  // floating point is never exactly equal
}

TEST_CASE("ledger scenario runs events and writes the log") {
    const std::string text = R"({
      "schema_version": 1, "kind": "ledger",
      "book": {"denomination": "shares", "initial_share_price": 10.0},
      "events": [
        {"kind": "contribution", "member_id": "a", "amount": 0, "labor_weight": 60},
        {"kind": "contribution", "member_id": "b", "amount": 0, "labor_weight": 30},
        {"kind": "contribution", "member_id": "c", "amount": 0, "labor_weight": 10},
        {"kind": "esop_principal_allocation", "paid_shares": 100,
         "weights": {"a": 60, "b": 30, "c": 10}}
      ],
      "sellout_market_value": 1086.78
    })";
    const Scenario scenario = parse_scenario(text);
    RunOptions options;
    options.out_dir = temp_dir("ledger");
    const RunResult result = run_scenario(scenario, "ledger.json", text, options);
    CHECK(result.exit_code == 0);

    const std::string log = slurp(options.out_dir / "events.jsonl");
    CHECK(std::count(log.begin(), log.end(), '\n') == 4);

    const Table* sellout = nullptr;
    for (const auto& table : result.report.tables)
        if (table.name == "sellout_incentive") sellout = &table;
    REQUIRE(sellout);
    // TOTAL row: aggregate delta equals the goodwill, 86.78.
    const auto& total = sellout->rows.back();
    CHECK(total[0].get<std::string>() == "TOTAL");
    CHECK(total[3].get<double>() == doctest::Approx(86.78));
}

TEST_CASE("json report format mirrors the csv field names") {
    const Scenario scenario = parse_scenario(kWorkedTrajectory);
    RunOptions options;
    options.out_dir = temp_dir("json_fmt");
    options.format = ReportFormat::json;
    const RunResult result =
        run_scenario(scenario, "mm.json", kWorkedTrajectory, options);
    CHECK(result.exit_code == 0);
    const auto parsed =
        nlohmann::json::parse(slurp(options.out_dir / "valuations.json"));
    CHECK(parsed.at("name") == "valuations");
    CHECK(parsed.at("rows").at(0).contains("value_dividend_stream"));
    const auto header =
        nlohmann::json::parse(slurp(options.out_dir / "header.json"));
    CHECK(header.at("kind") == "mm_trajectory");
}

TEST_CASE("run_scenario_file propagates input errors") {
    RunOptions options;
    options.out_dir = temp_dir("missing");
    CHECK_THROWS_AS(run_scenario_file("/nonexistent/file.json", options),
                    ParseError);
}
