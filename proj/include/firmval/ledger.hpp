#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "firmval/fincore.hpp"

namespace firmval {

/// All ledger amounts are integer multiples of 0.01 currency units.
using Cents = std::int64_t;

/// Rounds half away from zero onto the money quantum.
Cents to_cents(double amount);
double to_money(Cents amount);

enum class Denomination { value, shares };

/// One member's internal capital account. Value books use `balance`;
/// share books use `share_count`. Negative balances are legal (losses are
/// charged without a floor) and surfaced as flags by the operations.
struct MemberAccount {
    std::string member_id;
    Cents balance{0};
    std::int64_t share_count{0};
    double labor_weight{0.0};
    bool active{true};
};

/// The firm's equity book: member accounts plus the non-individuated
/// collective account.
///
/// Invariants, enforced after every event:
///   value book:  sum of balances + collective == nav, exactly in cents
///   share book:  sum of share_count == total_shares, and
///                nav == round(total_shares * share_price) + collective
struct FirmBook {
    Denomination denomination{Denomination::value};
    Cents nav{0};
    Cents collective{0};
    double share_price{0.0};      // carrying price; share books only
    std::int64_t total_shares{0}; // share books only
    Rate ica_interest_rate{};
    std::vector<MemberAccount> accounts;  // kept sorted by member_id

    static FirmBook value_book(Rate ica_interest_rate);
    static FirmBook share_book(double initial_share_price, Rate ica_interest_rate);

    const MemberAccount* find(const std::string& member_id) const;
    Cents member_total() const;  // sum of balances (value) in cents
    /// Cents of nav backing member claims: nav - collective.
    Cents member_backing() const { return nav - collective; }
    /// NAV-based price per share, member_backing / total_shares.
    double nav_share_price() const;
    bool invariants_hold() const;
};

/// How an exiting member is paid.
///   nav:    the account balance (value book) or shares at the NAV-based
///           price (share book) -- the "naked out".
///   market: the NAV-rule payout scaled by market_value / nav, i.e. shares
///           at the market price when the collective holds nothing.
struct ExitRule {
    enum class Kind { nav, market };
    Kind kind{Kind::nav};
    Cents market_value{0};

    static ExitRule nav_rule() { return {}; }
    static ExitRule market_rule(Cents market_value) {
        return {Kind::market, market_value};
    }
};

/// Per-member value change from a share-price move; gains follow shares
/// held, not labor.
struct RevaluationReport {
    double old_price{0.0};
    double new_price{0.0};
    struct Entry {
        std::string member_id;
        std::int64_t share_count{0};
        double value_change{0.0};
    };
    std::vector<Entry> entries;
    Cents book_value_change{0};
};

/// Market-rule minus NAV-rule exit payout, per member and in aggregate.
/// `delta` is in rounded cents (what would actually be paid);
/// `exact_delta` is the unrounded gap, which is strictly positive for
/// every member precisely when market_value exceeds nav.
struct IncentiveReport {
    Cents market_value{0};
    Cents nav{0};
    bool inappropriate_for_value_book{false};
    struct Entry {
        std::string member_id;
        Cents nav_payout{0};
        Cents market_payout{0};
        Cents delta{0};
        double exact_delta{0.0};
    };
    std::vector<Entry> entries;
    Cents aggregate_delta{0};
    double exact_aggregate_delta{0.0};
};

/// Diagnostics emitted while applying an operation: negative balances
/// after a loss, a collective account pushed below zero, market-rule
/// payouts on a value book. Never part of the book state.
struct ApplyNotes {
    std::vector<std::string> flags;
    std::optional<Cents> payout;
};

// --- operations (value semantics: each returns the updated book) ---

/// Opens a fresh account. Share books only admit zero initial
/// contributions; capital enters them as shares. Throws DuplicateMember.
FirmBook open_account(const FirmBook& book, const std::string& member_id,
                      Cents initial_contribution, double labor_weight = 0.0);

/// Splits retained profit across active members by labor weight,
/// largest-remainder rounded so the increments sum exactly. Weights may be
/// omitted to use the stored account weights.
FirmBook allocate_patronage(const FirmBook& book, Cents retained_profit,
                            const std::map<std::string, double>& weights,
                            ApplyNotes* notes = nullptr);

/// Charges a loss the same way profit is allocated. Balances may go
/// negative; each one is flagged.
FirmBook allocate_loss(const FirmBook& book, Cents loss,
                       const std::map<std::string, double>& weights,
                       ApplyNotes* notes = nullptr);

/// Credits ica_interest_rate to every balance, funded from the collective
/// account (the accounts are subordinate debt, so nav is unchanged).
/// Value books only.
FirmBook credit_interest(const FirmBook& book, ApplyNotes* notes = nullptr);

/// Subtracts a cash withdrawal from one member's account.
FirmBook withdraw(const FirmBook& book, const std::string& member_id,
                  Cents amount, ApplyNotes* notes = nullptr);

/// Distributes newly paid-for shares across active members by labor
/// weight (whole shares, largest remainder). The book gains
/// paid_shares * share_price of backing.
FirmBook esop_principal_allocation(const FirmBook& book, std::int64_t paid_shares,
                                   const std::map<std::string, double>& weights);

/// Sets the carrying price and reports who gains: by shares held.
std::pair<FirmBook, RevaluationReport> revalue_shares(const FirmBook& book,
                                                      double new_price);

/// Re-prices the shares at company_nav / total_shares and debits (or
/// credits) the aggregate write-down to the collective account.
FirmBook mark_to_nav(const FirmBook& book, Cents company_nav);

/// Pays out one member under the given rule, marks them inactive, retires
/// their shares, and restores conservation through the collective account.
std::pair<FirmBook, Cents> exit_payout(const FirmBook& book,
                                       const std::string& member_id,
                                       ExitRule rule,
                                       ApplyNotes* notes = nullptr);

/// Sum of exit payouts over all active members under the rule, without
/// mutating the book.
Cents repurchase_liability(const FirmBook& book, ExitRule rule);

/// Market-rule vs NAV-rule payout comparison for every active member.
IncentiveReport sellout_incentive(const FirmBook& book, Cents market_value);

// --- events ---

namespace events {

struct Contribution {
    std::string member_id;
    Cents amount{0};
    double labor_weight{0.0};
};
struct PatronageAllocation {
    Cents retained_profit{0};
    std::map<std::string, double> weights;  // empty: use account weights
};
struct LossAllocation {
    Cents loss{0};
    std::map<std::string, double> weights;
};
struct InterestCredit {};
struct Withdrawal {
    std::string member_id;
    Cents amount{0};
};
struct EsopPrincipalAllocation {
    std::int64_t paid_shares{0};
    std::map<std::string, double> weights;
};
struct ShareRevaluation {
    double new_price{0.0};
};
struct MarkToNav {
    Cents company_nav{0};
};
struct Exit {
    std::string member_id;
    ExitRule rule;
};

}  // namespace events

using LedgerEvent =
    std::variant<events::Contribution, events::PatronageAllocation,
                 events::LossAllocation, events::InterestCredit,
                 events::Withdrawal, events::EsopPrincipalAllocation,
                 events::ShareRevaluation, events::MarkToNav, events::Exit>;

/// Name used in the serialized log, e.g. "patronage_allocation".
std::string event_kind(const LedgerEvent& event);

FirmBook apply_event(const FirmBook& book, const LedgerEvent& event,
                     ApplyNotes* notes = nullptr);

/// Applies events in sequence. Book state after the call is a pure
/// function of (initial book, events).
FirmBook replay(FirmBook book, const std::vector<LedgerEvent>& events,
                std::vector<ApplyNotes>* notes = nullptr);

}  // namespace firmval
