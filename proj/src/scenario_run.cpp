#include <fstream>
#include <sstream>

#include "firmval/event_log.hpp"
#include "firmval/scenario.hpp"

namespace firmval {

using nlohmann::json;

namespace {

std::string source_name(bool overridden, bool from_file) {
    if (overridden) return "flag";
    return from_file ? "file" : "default";
}

void fill_common_header(Report& report, const std::string& kind,
                        const std::string& name, const std::string& bytes,
                        const RunOptions& options) {
    report.set("tool_version", kToolVersion);
    report.set("schema_version", std::to_string(kScenarioSchemaVersion));
    report.set("kind", kind);
    report.set("scenario", name);
    report.set("scenario_digest", content_digest(bytes));
    report.set("format", options.format == ReportFormat::csv ? "csv" : "json");
}

int run_asset(const AssetScenario& scenario, Report& report) {
    report.set("rate", format_double(scenario.rate.value));
    const AssetSpec& a = scenario.asset;
    report.set("asset.market_cost", format_double(a.market_cost));
    report.set("asset.capital_services", format_double(a.capital_services));
    report.set("asset.rental_rate", format_double(a.rental_rate));
    report.set("asset.salvage_value", format_double(a.salvage_value));
    report.set("asset.lifetime", std::to_string(a.lifetime));
    report.set("asset.output_price", format_double(a.output_price));
    report.set("asset.annual_output", format_double(a.annual_output));
    report.set("asset.variable_cost", format_double(a.variable_cost));
    report.set("asset.wage_rate", format_double(a.wage_rate));
    report.set("asset.labor_hired", format_double(a.labor_hired));

    const AssetValuation v = decompose(scenario.asset, scenario.rate);
    Table table;
    table.name = "asset_valuation";
    table.columns = {"passive_value", "active_value", "pure_profit",
                     "goodwill_simple", "arbitrage_gap"};
    table.add_row({v.passive_value, v.active_value, v.pure_profit_per_year,
                   v.goodwill_simple, v.arbitrage_gap});
    report.tables.push_back(std::move(table));
    return 0;
}

int run_trajectory(const TrajectoryScenario& scenario, Report& report,
                   const RunOptions& options) {
    const double tolerance =
        options.tolerance_override.value_or(scenario.tolerance);
    report.set("tolerance", format_double(tolerance));
    report.set("tolerance_source", source_name(options.tolerance_override.has_value(),
                                               scenario.tolerance_from_file));
    report.set("terminal",
               scenario.terminal.kind == TerminalCondition::Kind::zero_goodwill
                   ? "zero_goodwill"
                   : "explicit_value " + format_double(scenario.terminal.value));

    const FirmTrajectory traj =
        build_trajectory(scenario.primitives, scenario.terminal);
    const int T = traj.horizon();

    Table path;
    path.name = "trajectory";
    path.columns = {"t",          "nav",       "equity_value", "share_price",
                    "shares",     "div_per_share", "subscription", "new_shares",
                    "receipts",   "outlays",   "gross_assets", "debt"};
    for (int t = 0; t <= T; ++t) {
        const bool flow = t < T;
        const BalanceSheet sheet = traj.balance_sheet(t);
        path.add_row({t, traj.nav[t], traj.equity_value[t], traj.share_price[t],
                      traj.shares[t],
                      flow ? json(traj.dividends_per_share[t]) : json(""),
                      t > 0 ? json(traj.subscription[t]) : json(""),
                      t > 0 ? json(traj.new_shares[t]) : json(""),
                      flow ? json(traj.receipts[t]) : json(""),
                      flow ? json(traj.outlays[t]) : json(""), sheet.gross_assets,
                      sheet.debt});
    }
    report.tables.push_back(std::move(path));

    Table valuations;
    valuations.name = "valuations";
    valuations.columns = {"t",
                          "build_trajectory_value",
                          "value_dividend_stream",
                          "value_discounted_cashflow",
                          "value_earnings_recursion",
                          "value_nav_plus_goodwill",
                          "max_rel_deviation",
                          "pass"};
    bool all_pass = true;
    for (int t = 0; t <= T; ++t) {
        const EquivalenceReport eq = check_equivalence(traj, t, tolerance);
        all_pass = all_pass && eq.pass;
        valuations.add_row({t, eq.backward_value, eq.dividend_stream,
                            eq.discounted_cashflow, eq.earnings_recursion,
                            eq.nav_plus_goodwill, eq.max_rel_deviation, eq.pass});
    }
    report.tables.push_back(std::move(valuations));
    return all_pass ? 0 : 1;
}

int run_fuzz(const FuzzScenario& scenario, Report& report,
             const RunOptions& options) {
    const std::uint64_t seed = options.seed_override.value_or(scenario.seed);
    const double tolerance =
        options.tolerance_override.value_or(scenario.tolerance);
    report.set("count", std::to_string(scenario.count));
    report.set("seed", std::to_string(seed));
    report.set("seed_source",
               source_name(options.seed_override.has_value(), scenario.seed_from_file));
    report.set("tolerance", format_double(tolerance));
    report.set("tolerance_source", source_name(options.tolerance_override.has_value(),
                                               scenario.tolerance_from_file));
    const TrajectoryRanges& r = scenario.ranges;
    report.set("ranges.min_horizon", std::to_string(r.min_horizon));
    report.set("ranges.max_horizon", std::to_string(r.max_horizon));
    report.set("ranges.min_rate", format_double(r.min_rate));
    report.set("ranges.max_rate", format_double(r.max_rate));
    report.set("ranges.min_initial_nav", format_double(r.min_initial_nav));
    report.set("ranges.max_initial_nav", format_double(r.max_initial_nav));
    report.set("ranges.max_profit_to_nav", format_double(r.max_profit_to_nav));
    report.set("ranges.max_investment_to_nav", format_double(r.max_investment_to_nav));
    report.set("ranges.max_carry_to_nav", format_double(r.max_carry_to_nav));
    report.set("ranges.min_initial_shares", format_double(r.min_initial_shares));
    report.set("ranges.max_initial_shares", format_double(r.max_initial_shares));

    const FuzzSummary summary =
        fuzz_equivalence(scenario.count, seed, tolerance, scenario.ranges);

    Table table;
    table.name = "fuzz_summary";
    table.columns = {"count",          "seed",           "tolerance",
                     "rejected",       "rejection_rate", "max_rel_deviation",
                     "failures",       "pass"};
    table.add_row({summary.requested, summary.master_seed, summary.tolerance,
                   summary.rejected, summary.rejection_rate,
                   summary.max_rel_deviation,
                   static_cast<std::int64_t>(summary.failures.size()),
                   summary.pass()});
    report.tables.push_back(std::move(table));

    Table failures;
    failures.name = "fuzz_failures";
    failures.columns = {"index", "seed", "t", "max_rel_deviation"};
    for (const FuzzFailure& f : summary.failures)
        failures.add_row({f.index, f.seed, f.t, f.max_rel_deviation});
    report.tables.push_back(std::move(failures));
    return summary.pass() ? 0 : 1;
}

int run_ledger(const LedgerScenario& scenario, Report& report,
               const std::filesystem::path& out_dir,
               std::vector<std::string>& files_written) {
    report.set("book.denomination",
               scenario.denomination == Denomination::value ? "value" : "shares");
    report.set("book.ica_interest_rate",
               format_double(scenario.ica_interest_rate.value));
    report.set("book.initial_share_price",
               format_double(scenario.initial_share_price));
    report.set("events", std::to_string(scenario.events.size()));

    FirmBook book =
        scenario.denomination == Denomination::value
            ? FirmBook::value_book(scenario.ica_interest_rate)
            : FirmBook::share_book(scenario.initial_share_price,
                                   scenario.ica_interest_rate);

    Table trace;
    trace.name = "event_trace";
    trace.columns = {"seq",  "kind",         "nav",   "collective",
                     "total_shares", "payout", "flags", "conserved"};
    bool conserved = true;
    for (std::size_t i = 0; i < scenario.events.size(); ++i) {
        ApplyNotes notes;
        book = apply_event(book, scenario.events[i], &notes);
        const bool ok = book.invariants_hold();
        conserved = conserved && ok;
        std::string flags;
        for (const auto& f : notes.flags) flags += (flags.empty() ? "" : "; ") + f;
        trace.add_row({static_cast<std::int64_t>(i + 1),
                       event_kind(scenario.events[i]), to_money(book.nav),
                       to_money(book.collective), book.total_shares,
                       notes.payout ? json(to_money(*notes.payout)) : json(""),
                       flags, ok});
    }
    report.tables.push_back(std::move(trace));

    Table accounts;
    accounts.name = "accounts";
    accounts.columns = {"member_id", "balance", "share_count", "labor_weight",
                        "active"};
    for (const auto& account : book.accounts)
        accounts.add_row({account.member_id, to_money(account.balance),
                          account.share_count, account.labor_weight, account.active});
    report.tables.push_back(std::move(accounts));

    Table summary;
    summary.name = "book_summary";
    summary.columns = {"nav", "collective", "member_backing", "total_shares",
                       "share_price"};
    summary.add_row({to_money(book.nav), to_money(book.collective),
                     to_money(book.member_backing()), book.total_shares,
                     book.share_price});
    report.tables.push_back(std::move(summary));

    if (scenario.sellout_market_value) {
        const IncentiveReport incentive =
            sellout_incentive(book, *scenario.sellout_market_value);
        Table table;
        table.name = "sellout_incentive";
        table.columns = {"member_id", "nav_payout", "market_payout", "delta",
                         "exact_delta"};
        for (const auto& entry : incentive.entries)
            table.add_row({entry.member_id, to_money(entry.nav_payout),
                           to_money(entry.market_payout), to_money(entry.delta),
                           entry.exact_delta});
        table.add_row({"TOTAL", to_money(repurchase_liability(book, ExitRule::nav_rule())),
                       to_money(repurchase_liability(
                           book, ExitRule::market_rule(*scenario.sellout_market_value))),
                       to_money(incentive.aggregate_delta),
                       incentive.exact_aggregate_delta});
        report.tables.push_back(std::move(table));
    }
    if (scenario.repurchase_rule) {
        Table table;
        table.name = "repurchase_liability";
        table.columns = {"rule", "market_value", "liability"};
        const ExitRule& rule = *scenario.repurchase_rule;
        table.add_row({rule.kind == ExitRule::Kind::nav ? "nav" : "market",
                       rule.kind == ExitRule::Kind::market
                           ? json(to_money(rule.market_value))
                           : json(""),
                       to_money(repurchase_liability(book, rule))});
        report.tables.push_back(std::move(table));
    }

    // The serialized log itself is part of the ledger interface; replaying
    // it must land on the same book, byte for byte.
    const std::string log = serialize_event_log(scenario.events);
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream out(out_dir / "events.jsonl", std::ios::binary);
        out << log;
        files_written.push_back("events.jsonl");
    }
    FirmBook replayed =
        scenario.denomination == Denomination::value
            ? FirmBook::value_book(scenario.ica_interest_rate)
            : FirmBook::share_book(scenario.initial_share_price,
                                   scenario.ica_interest_rate);
    replayed = replay(std::move(replayed), parse_event_log(log));
    const bool replay_identical =
        book_state_string(replayed) == book_state_string(book);
    report.set("replay_identical", replay_identical ? "true" : "false");
    report.set("conservation", conserved ? "true" : "false");
    return (conserved && replay_identical) ? 0 : 1;
}

}  // namespace

RunResult run_scenario(const Scenario& scenario, const std::string& scenario_name,
                       const std::string& scenario_bytes,
                       const RunOptions& options) {
    RunResult result;
    fill_common_header(result.report, scenario.kind, scenario_name, scenario_bytes,
                       options);

    if (const auto* asset = std::get_if<AssetScenario>(&scenario.payload)) {
        result.exit_code = run_asset(*asset, result.report);
    } else if (const auto* traj = std::get_if<TrajectoryScenario>(&scenario.payload)) {
        result.exit_code = run_trajectory(*traj, result.report, options);
    } else if (const auto* fuzz = std::get_if<FuzzScenario>(&scenario.payload)) {
        result.exit_code = run_fuzz(*fuzz, result.report, options);
    } else {
        result.exit_code = run_ledger(std::get<LedgerScenario>(scenario.payload),
                                      result.report, options.out_dir,
                                      result.files_written);
    }

    auto written = write_report(result.report, options.out_dir, options.format);
    result.files_written.insert(result.files_written.end(), written.begin(),
                                written.end());
    return result;
}

RunResult run_scenario_file(const std::filesystem::path& path,
                            const RunOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read scenario file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string bytes = buffer.str();
    const Scenario scenario = parse_scenario(bytes);
    return run_scenario(scenario, path.filename().string(), bytes, options);
}

}  // namespace firmval
