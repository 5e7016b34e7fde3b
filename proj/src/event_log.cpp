#include "firmval/event_log.hpp"

#include <sstream>

namespace firmval {

using nlohmann::json;

namespace {

json weights_to_json(const std::map<std::string, double>& weights) {
    json object = json::object();
    for (const auto& [id, w] : weights) object[id] = w;
    return object;
}

std::map<std::string, double> weights_from_json(const json& object) {
    std::map<std::string, double> weights;
    for (const auto& [id, w] : object.items()) weights[id] = w.get<double>();
    return weights;
}

json rule_to_json(const ExitRule& rule) {
    json object = json::object();
    if (rule.kind == ExitRule::Kind::nav) {
        object["kind"] = "nav";
    } else {
        object["kind"] = "market";
        object["market_value_cents"] = rule.market_value;
    }
    return object;
}

ExitRule rule_from_json(const json& object) {
    const std::string kind = object.at("kind").get<std::string>();
    if (kind == "nav") return ExitRule::nav_rule();
    if (kind == "market")
        return ExitRule::market_rule(object.at("market_value_cents").get<Cents>());
    throw ParseError("unknown exit rule kind: " + kind);
}

}  // namespace

json event_to_json(std::size_t seq, const LedgerEvent& event) {
    json payload = json::object();
    struct Visitor {
        json& payload;
        void operator()(const events::Contribution& e) const {
            payload["member_id"] = e.member_id;
            payload["amount_cents"] = e.amount;
            payload["labor_weight"] = e.labor_weight;
        }
        void operator()(const events::PatronageAllocation& e) const {
            payload["retained_profit_cents"] = e.retained_profit;
            payload["weights"] = weights_to_json(e.weights);
        }
        void operator()(const events::LossAllocation& e) const {
            payload["loss_cents"] = e.loss;
            payload["weights"] = weights_to_json(e.weights);
        }
        void operator()(const events::InterestCredit&) const {}
        void operator()(const events::Withdrawal& e) const {
            payload["member_id"] = e.member_id;
            payload["amount_cents"] = e.amount;
        }
        void operator()(const events::EsopPrincipalAllocation& e) const {
            payload["paid_shares"] = e.paid_shares;
            payload["weights"] = weights_to_json(e.weights);
        }
        void operator()(const events::ShareRevaluation& e) const {
            payload["new_price"] = e.new_price;
        }
        void operator()(const events::MarkToNav& e) const {
            payload["company_nav_cents"] = e.company_nav;
        }
        void operator()(const events::Exit& e) const {
            payload["member_id"] = e.member_id;
            payload["rule"] = rule_to_json(e.rule);
        }
    };
    std::visit(Visitor{payload}, event);

    json record = json::object();
    record["seq"] = seq;
    record["kind"] = event_kind(event);
    record["payload"] = payload;
    return record;
}

LedgerEvent event_from_json(const json& record) {
    const std::string kind = record.at("kind").get<std::string>();
    const json& p = record.at("payload");
    if (kind == "contribution")
        return events::Contribution{p.at("member_id").get<std::string>(),
                                    p.at("amount_cents").get<Cents>(),
                                    p.at("labor_weight").get<double>()};
    if (kind == "patronage_allocation")
        return events::PatronageAllocation{p.at("retained_profit_cents").get<Cents>(),
                                           weights_from_json(p.at("weights"))};
    if (kind == "loss_allocation")
        return events::LossAllocation{p.at("loss_cents").get<Cents>(),
                                      weights_from_json(p.at("weights"))};
    if (kind == "interest_credit") return events::InterestCredit{};
    if (kind == "withdrawal")
        return events::Withdrawal{p.at("member_id").get<std::string>(),
                                  p.at("amount_cents").get<Cents>()};
    if (kind == "esop_principal_allocation")
        return events::EsopPrincipalAllocation{p.at("paid_shares").get<std::int64_t>(),
                                               weights_from_json(p.at("weights"))};
    if (kind == "share_revaluation")
        return events::ShareRevaluation{p.at("new_price").get<double>()};
    if (kind == "mark_to_nav")
        return events::MarkToNav{p.at("company_nav_cents").get<Cents>()};
    if (kind == "exit")
        return events::Exit{p.at("member_id").get<std::string>(),
                            rule_from_json(p.at("rule"))};
    throw ParseError("unknown event kind: " + kind);
}

std::string serialize_event_log(const std::vector<LedgerEvent>& events) {
    std::ostringstream out;
    for (std::size_t i = 0; i < events.size(); ++i)
        out << event_to_json(i + 1, events[i]).dump() << '\n';
    return out.str();
}

std::vector<LedgerEvent> parse_event_log(const std::string& text) {
    std::vector<LedgerEvent> events;
    std::istringstream in(text);
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError("event log line " + std::to_string(line_number) + ": " +
                             e.what());
        }
        try {
            events.push_back(event_from_json(record));
        } catch (const json::exception& e) {
            throw ParseError("event log line " + std::to_string(line_number) + ": " +
                             e.what());
        }
    }
    return events;
}

json book_to_json(const FirmBook& book) {
    json accounts = json::array();
    for (const auto& account : book.accounts) {
        json entry = json::object();
        entry["member_id"] = account.member_id;
        entry["balance_cents"] = account.balance;
        entry["share_count"] = account.share_count;
        entry["labor_weight"] = account.labor_weight;
        entry["active"] = account.active;
        accounts.push_back(std::move(entry));
    }
    json state = json::object();
    state["denomination"] =
        book.denomination == Denomination::value ? "value" : "shares";
    state["nav_cents"] = book.nav;
    state["collective_cents"] = book.collective;
    state["share_price"] = book.share_price;
    state["total_shares"] = book.total_shares;
    state["ica_interest_rate"] = book.ica_interest_rate.value;
    state["accounts"] = accounts;
    return state;
}

std::string book_state_string(const FirmBook& book) {
    return book_to_json(book).dump();
}

}  // namespace firmval
