#include "firmval/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

namespace firmval {

using nlohmann::json;

namespace {

std::string join_path(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

void require_object(const json& value, const std::string& path) {
    if (!value.is_object()) throw ValidationError(path, "expected an object");
}

void reject_unknown_keys(const json& object, const std::string& path,
                         std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : object.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* name) {
                return key == name;
            }) == allowed.end())
            throw ValidationError(join_path(path, key), "unknown field");
    }
}

const json* find(const json& object, const char* key) {
    auto it = object.find(key);
    return it == object.end() ? nullptr : &*it;
}

double get_number(const json& object, const std::string& path, const char* key) {
    const json* value = find(object, key);
    if (!value) throw ValidationError(join_path(path, key), "missing required field");
    if (!value->is_number()) throw ValidationError(join_path(path, key), "expected a number");
    return value->get<double>();
}

double get_number_or(const json& object, const std::string& path, const char* key,
                     double fallback) {
    const json* value = find(object, key);
    if (!value) return fallback;
    if (!value->is_number()) throw ValidationError(join_path(path, key), "expected a number");
    return value->get<double>();
}

std::int64_t get_integer(const json& object, const std::string& path, const char* key) {
    const json* value = find(object, key);
    if (!value) throw ValidationError(join_path(path, key), "missing required field");
    if (!value->is_number_integer() && !value->is_number_unsigned())
        throw ValidationError(join_path(path, key), "expected an integer");
    return value->get<std::int64_t>();
}

std::string get_string(const json& object, const std::string& path, const char* key) {
    const json* value = find(object, key);
    if (!value) throw ValidationError(join_path(path, key), "missing required field");
    if (!value->is_string()) throw ValidationError(join_path(path, key), "expected a string");
    return value->get<std::string>();
}

std::vector<double> get_series(const json& object, const std::string& path,
                               const char* key, int expected_length,
                               bool required) {
    const json* value = find(object, key);
    if (!value) {
        if (required) throw ValidationError(join_path(path, key), "missing required field");
        return std::vector<double>(expected_length, 0.0);
    }
    if (!value->is_array()) throw ValidationError(join_path(path, key), "expected an array");
    if (static_cast<int>(value->size()) != expected_length)
        throw ValidationError(join_path(path, key),
                              "expected " + std::to_string(expected_length) + " entries");
    std::vector<double> series;
    series.reserve(value->size());
    for (std::size_t i = 0; i < value->size(); ++i) {
        const json& cell = (*value)[i];
        if (!cell.is_number())
            throw ValidationError(join_path(path, key) + "[" + std::to_string(i) + "]",
                                  "expected a number");
        series.push_back(cell.get<double>());
    }
    return series;
}

/// Money fields must sit exactly on the 0.01 quantum.
Cents get_money(const json& object, const std::string& path, const char* key) {
    const double amount = get_number(object, path, key);
    const double scaled = amount * 100.0;
    const double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) > 1e-6)
        throw ValidationError(join_path(path, key),
                              "amount is not a multiple of 0.01");
    return static_cast<Cents>(rounded);
}

AssetScenario parse_asset(const json& root) {
    reject_unknown_keys(root, "", {"schema_version", "kind", "rate", "asset"});
    AssetScenario scenario;
    scenario.rate.value = get_number(root, "", "rate");
    const json* asset = find(root, "asset");
    if (!asset) throw ValidationError("asset", "missing required field");
    require_object(*asset, "asset");
    reject_unknown_keys(*asset, "asset",
                        {"market_cost", "capital_services", "rental_rate",
                         "salvage_value", "lifetime", "output_price", "annual_output",
                         "variable_cost", "wage_rate", "labor_hired"});
    AssetSpec& spec = scenario.asset;
    spec.market_cost = get_number_or(*asset, "asset", "market_cost", 0.0);
    spec.capital_services = get_number_or(*asset, "asset", "capital_services", 0.0);
    spec.rental_rate = get_number_or(*asset, "asset", "rental_rate", 0.0);
    spec.salvage_value = get_number_or(*asset, "asset", "salvage_value", 0.0);
    spec.lifetime = static_cast<int>(get_integer(*asset, "asset", "lifetime"));
    spec.output_price = get_number_or(*asset, "asset", "output_price", 0.0);
    spec.annual_output = get_number_or(*asset, "asset", "annual_output", 0.0);
    spec.variable_cost = get_number_or(*asset, "asset", "variable_cost", 0.0);
    spec.wage_rate = get_number_or(*asset, "asset", "wage_rate", 0.0);
    spec.labor_hired = get_number_or(*asset, "asset", "labor_hired", 0.0);
    try {
        spec.validate();
    } catch (const DomainError& e) {
        throw ValidationError("asset", e.what());
    }
    return scenario;
}

TerminalCondition parse_terminal(const json* terminal, const std::string& path) {
    if (!terminal) return TerminalCondition::zero_goodwill();
    require_object(*terminal, path);
    reject_unknown_keys(*terminal, path, {"kind", "value"});
    const std::string kind = get_string(*terminal, path, "kind");
    if (kind == "zero_goodwill") return TerminalCondition::zero_goodwill();
    if (kind == "explicit_value")
        return TerminalCondition::explicit_value(get_number(*terminal, path, "value"));
    throw ValidationError(join_path(path, "kind"),
                          "expected zero_goodwill or explicit_value");
}

TrajectoryScenario parse_trajectory(const json& root) {
    reject_unknown_keys(root, "",
                        {"schema_version", "kind", "rate", "horizon", "initial_nav",
                         "initial_shares", "accounting_profit", "net_investment",
                         "depreciation", "cogs", "dividends", "debt", "terminal",
                         "tolerance"});
    TrajectoryScenario scenario;
    FirmPrimitives& p = scenario.primitives;
    p.rate.value = get_number(root, "", "rate");
    p.horizon = static_cast<int>(get_integer(root, "", "horizon"));
    if (p.horizon < 1) throw ValidationError("horizon", "must be at least 1");
    p.initial_nav = get_number(root, "", "initial_nav");
    p.initial_shares = get_number(root, "", "initial_shares");
    p.accounting_profit = get_series(root, "", "accounting_profit", p.horizon, true);
    p.net_investment = get_series(root, "", "net_investment", p.horizon, true);
    p.depreciation = get_series(root, "", "depreciation", p.horizon, false);
    p.cogs = get_series(root, "", "cogs", p.horizon, false);
    p.dividends = get_series(root, "", "dividends", p.horizon, false);
    if (find(root, "debt")) p.debt = get_series(root, "", "debt", p.horizon, true);
    scenario.terminal = parse_terminal(find(root, "terminal"), "terminal");
    if (find(root, "tolerance")) {
        scenario.tolerance = get_number(root, "", "tolerance");
        scenario.tolerance_from_file = true;
    }
    try {
        p.validate();
    } catch (const DomainError& e) {
        throw ValidationError("", e.what());
    }
    return scenario;
}

FuzzScenario parse_fuzz(const json& root) {
    reject_unknown_keys(root, "",
                        {"schema_version", "kind", "count", "seed", "tolerance",
                         "ranges"});
    FuzzScenario scenario;
    scenario.count = static_cast<int>(get_integer(root, "", "count"));
    if (scenario.count < 1) throw ValidationError("count", "must be at least 1");
    if (find(root, "seed")) {
        scenario.seed = static_cast<std::uint64_t>(get_integer(root, "", "seed"));
        scenario.seed_from_file = true;
    }
    if (find(root, "tolerance")) {
        scenario.tolerance = get_number(root, "", "tolerance");
        scenario.tolerance_from_file = true;
    }
    if (const json* ranges = find(root, "ranges")) {
        require_object(*ranges, "ranges");
        reject_unknown_keys(*ranges, "ranges",
                            {"min_horizon", "max_horizon", "min_rate", "max_rate",
                             "min_initial_nav", "max_initial_nav", "max_profit_to_nav",
                             "max_investment_to_nav", "max_carry_to_nav",
                             "min_initial_shares", "max_initial_shares"});
        TrajectoryRanges& r = scenario.ranges;
        if (find(*ranges, "min_horizon"))
            r.min_horizon = static_cast<int>(get_integer(*ranges, "ranges", "min_horizon"));
        if (find(*ranges, "max_horizon"))
            r.max_horizon = static_cast<int>(get_integer(*ranges, "ranges", "max_horizon"));
        r.min_rate = get_number_or(*ranges, "ranges", "min_rate", r.min_rate);
        r.max_rate = get_number_or(*ranges, "ranges", "max_rate", r.max_rate);
        r.min_initial_nav = get_number_or(*ranges, "ranges", "min_initial_nav", r.min_initial_nav);
        r.max_initial_nav = get_number_or(*ranges, "ranges", "max_initial_nav", r.max_initial_nav);
        r.max_profit_to_nav =
            get_number_or(*ranges, "ranges", "max_profit_to_nav", r.max_profit_to_nav);
        r.max_investment_to_nav = get_number_or(*ranges, "ranges", "max_investment_to_nav",
                                                r.max_investment_to_nav);
        r.max_carry_to_nav =
            get_number_or(*ranges, "ranges", "max_carry_to_nav", r.max_carry_to_nav);
        r.min_initial_shares =
            get_number_or(*ranges, "ranges", "min_initial_shares", r.min_initial_shares);
        r.max_initial_shares =
            get_number_or(*ranges, "ranges", "max_initial_shares", r.max_initial_shares);
        try {
            r.validate();
        } catch (const DomainError& e) {
            throw ValidationError("ranges", e.what());
        }
    }
    return scenario;
}

std::map<std::string, double> parse_weights(const json* value, const std::string& path) {
    std::map<std::string, double> weights;
    if (!value) return weights;
    require_object(*value, path);
    for (const auto& [id, w] : value->items()) {
        if (!w.is_number())
            throw ValidationError(join_path(path, id), "expected a number");
        weights[id] = w.get<double>();
    }
    return weights;
}

ExitRule parse_exit_rule(const json& object, const std::string& path) {
    require_object(object, path);
    reject_unknown_keys(object, path, {"kind", "market_value"});
    const std::string kind = get_string(object, path, "kind");
    if (kind == "nav") return ExitRule::nav_rule();
    if (kind == "market") return ExitRule::market_rule(get_money(object, path, "market_value"));
    throw ValidationError(join_path(path, "kind"), "expected nav or market");
}

LedgerEvent parse_ledger_event(const json& object, const std::string& path) {
    require_object(object, path);
    const std::string kind = get_string(object, path, "kind");
    if (kind == "contribution") {
        reject_unknown_keys(object, path, {"kind", "member_id", "amount", "labor_weight"});
        return events::Contribution{get_string(object, path, "member_id"),
                                    get_money(object, path, "amount"),
                                    get_number_or(object, path, "labor_weight", 0.0)};
    }
    if (kind == "patronage_allocation") {
        reject_unknown_keys(object, path, {"kind", "retained_profit", "weights"});
        return events::PatronageAllocation{get_money(object, path, "retained_profit"),
                                           parse_weights(find(object, "weights"),
                                                         join_path(path, "weights"))};
    }
    if (kind == "loss_allocation") {
        reject_unknown_keys(object, path, {"kind", "loss", "weights"});
        return events::LossAllocation{get_money(object, path, "loss"),
                                      parse_weights(find(object, "weights"),
                                                    join_path(path, "weights"))};
    }
    if (kind == "interest_credit") {
        reject_unknown_keys(object, path, {"kind"});
        return events::InterestCredit{};
    }
    if (kind == "withdrawal") {
        reject_unknown_keys(object, path, {"kind", "member_id", "amount"});
        return events::Withdrawal{get_string(object, path, "member_id"),
                                  get_money(object, path, "amount")};
    }
    if (kind == "esop_principal_allocation") {
        reject_unknown_keys(object, path, {"kind", "paid_shares", "weights"});
        return events::EsopPrincipalAllocation{get_integer(object, path, "paid_shares"),
                                               parse_weights(find(object, "weights"),
                                                             join_path(path, "weights"))};
    }
    if (kind == "share_revaluation") {
        reject_unknown_keys(object, path, {"kind", "new_price"});
        return events::ShareRevaluation{get_number(object, path, "new_price")};
    }
    if (kind == "mark_to_nav") {
        reject_unknown_keys(object, path, {"kind", "company_nav"});
        return events::MarkToNav{get_money(object, path, "company_nav")};
    }
    if (kind == "exit") {
        reject_unknown_keys(object, path, {"kind", "member_id", "rule"});
        const json* rule = find(object, "rule");
        if (!rule) throw ValidationError(join_path(path, "rule"), "missing required field");
        return events::Exit{get_string(object, path, "member_id"),
                            parse_exit_rule(*rule, join_path(path, "rule"))};
    }
    throw ValidationError(join_path(path, "kind"), "unknown event kind: " + kind);
}

LedgerScenario parse_ledger(const json& root) {
    reject_unknown_keys(root, "",
                        {"schema_version", "kind", "book", "events",
                         "sellout_market_value", "repurchase_rule"});
    LedgerScenario scenario;
    const json* book = find(root, "book");
    if (!book) throw ValidationError("book", "missing required field");
    require_object(*book, "book");
    reject_unknown_keys(*book, "book",
                        {"denomination", "ica_interest_rate", "initial_share_price"});
    const std::string denomination = get_string(*book, "book", "denomination");
    if (denomination == "value") {
        scenario.denomination = Denomination::value;
    } else if (denomination == "shares") {
        scenario.denomination = Denomination::shares;
    } else {
        throw ValidationError("book.denomination", "expected value or shares");
    }
    scenario.ica_interest_rate.value =
        get_number_or(*book, "book", "ica_interest_rate", 0.0);
    scenario.initial_share_price =
        get_number_or(*book, "book", "initial_share_price", 0.0);

    const json* events = find(root, "events");
    if (!events) throw ValidationError("events", "missing required field");
    if (!events->is_array()) throw ValidationError("events", "expected an array");
    for (std::size_t i = 0; i < events->size(); ++i)
        scenario.events.push_back(
            parse_ledger_event((*events)[i], "events[" + std::to_string(i) + "]"));

    if (find(root, "sellout_market_value"))
        scenario.sellout_market_value = get_money(root, "", "sellout_market_value");
    if (const json* rule = find(root, "repurchase_rule"))
        scenario.repurchase_rule = parse_exit_rule(*rule, "repurchase_rule");
    return scenario;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed scenario file: ") + e.what());
    }
    if (!root.is_object()) throw ValidationError("", "scenario must be a JSON object");

    Scenario scenario;
    const std::int64_t version = get_integer(root, "", "schema_version");
    if (version != kScenarioSchemaVersion)
        throw ValidationError("schema_version",
                              "unsupported version " + std::to_string(version));
    scenario.schema_version = static_cast<int>(version);
    scenario.kind = get_string(root, "", "kind");
    if (scenario.kind == "asset") {
        scenario.payload = parse_asset(root);
    } else if (scenario.kind == "mm_trajectory") {
        scenario.payload = parse_trajectory(root);
    } else if (scenario.kind == "mm_fuzz") {
        scenario.payload = parse_fuzz(root);
    } else if (scenario.kind == "ledger") {
        scenario.payload = parse_ledger(root);
    } else {
        throw ValidationError("kind",
                              "expected asset, mm_trajectory, mm_fuzz or ledger");
    }
    return scenario;
}

}  // namespace firmval
