#include "firmval/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace firmval {

namespace {

void require_value_book(const FirmBook& book, const char* op) {
    if (book.denomination != Denomination::value)
        throw DomainError(std::string(op) + " applies to value-denominated books only");
}

void require_share_book(const FirmBook& book, const char* op) {
    if (book.denomination != Denomination::shares)
        throw DomainError(std::string(op) + " applies to share-denominated books only");
}

std::vector<MemberAccount>::iterator find_account(FirmBook& book,
                                                  const std::string& id) {
    auto it = std::lower_bound(
        book.accounts.begin(), book.accounts.end(), id,
        [](const MemberAccount& a, const std::string& key) { return a.member_id < key; });
    if (it == book.accounts.end() || it->member_id != id) return book.accounts.end();
    return it;
}

void flag(ApplyNotes* notes, std::string message) {
    if (notes) notes->flags.push_back(std::move(message));
}

/// Exact proportional split of `total` quanta over active members:
/// floor shares first, then one extra quantum per largest fractional
/// remainder, ties broken by ascending member id. Increments always sum
/// to `total`.
std::vector<std::pair<std::string, std::int64_t>> largest_remainder_split(
    std::int64_t total, const std::vector<std::pair<std::string, double>>& weights) {
    double weight_sum = 0.0;
    for (const auto& [id, w] : weights) {
        if (w < 0.0) throw DomainError("weights must be nonnegative");
        weight_sum += w;
    }
    if (!(weight_sum > 0.0)) throw NoActiveMembers();

    struct Slot {
        std::string id;
        std::int64_t base;
        double remainder;
    };
    std::vector<Slot> slots;
    slots.reserve(weights.size());
    std::int64_t assigned = 0;
    for (const auto& [id, w] : weights) {
        const double exact = static_cast<double>(total) * (w / weight_sum);
        const double floored = std::floor(exact);
        slots.push_back({id, static_cast<std::int64_t>(floored), exact - floored});
        assigned += slots.back().base;
    }
    std::int64_t leftover = total - assigned;
    std::vector<std::size_t> order(slots.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (slots[a].remainder != slots[b].remainder)
            return slots[a].remainder > slots[b].remainder;
        return slots[a].id < slots[b].id;
    });
    for (std::size_t i = 0; leftover > 0; ++i, --leftover)
        slots[order[i % order.size()]].base += 1;

    std::vector<std::pair<std::string, std::int64_t>> result;
    result.reserve(slots.size());
    for (auto& s : slots) result.emplace_back(std::move(s.id), s.base);
    return result;
}

/// Resolves the weight map for an allocation: explicit weights must all
/// refer to active members; an empty map means "use the stored weights of
/// active accounts".
std::vector<std::pair<std::string, double>> resolve_weights(
    const FirmBook& book, const std::map<std::string, double>& weights) {
    std::vector<std::pair<std::string, double>> resolved;
    if (weights.empty()) {
        for (const auto& account : book.accounts)
            if (account.active && account.labor_weight > 0.0)
                resolved.emplace_back(account.member_id, account.labor_weight);
    } else {
        for (const auto& [id, w] : weights) {
            const MemberAccount* account = book.find(id);
            if (!account) throw UnknownMember(id);
            if (!account->active) throw InactiveMember(id);
            resolved.emplace_back(id, w);
        }
    }
    if (resolved.empty()) throw NoActiveMembers();
    return resolved;
}

Cents round_cents(double cents) {
    return static_cast<Cents>(std::llround(cents));
}

/// Restates the share-book invariant nav == round(shares*price) + collective
/// by letting the collective absorb any sub-cent residue.
void absorb_share_residue(FirmBook& book) {
    book.collective = book.nav - round_cents(static_cast<double>(book.total_shares) *
                                             book.share_price * 100.0);
}

}  // namespace

Cents to_cents(double amount) {
    const double scaled = amount * 100.0;
    return static_cast<Cents>(std::llround(scaled));
}

double to_money(Cents amount) { return static_cast<double>(amount) / 100.0; }

FirmBook FirmBook::value_book(Rate ica_interest_rate) {
    if (ica_interest_rate.value < 0.0)
        throw DomainError("account interest rate must be nonnegative");
    FirmBook book;
    book.denomination = Denomination::value;
    book.ica_interest_rate = ica_interest_rate;
    return book;
}

FirmBook FirmBook::share_book(double initial_share_price, Rate ica_interest_rate) {
    if (initial_share_price < 0.0)
        throw DomainError("share price must be nonnegative");
    if (ica_interest_rate.value < 0.0)
        throw DomainError("account interest rate must be nonnegative");
    FirmBook book;
    book.denomination = Denomination::shares;
    book.share_price = initial_share_price;
    book.ica_interest_rate = ica_interest_rate;
    return book;
}

const MemberAccount* FirmBook::find(const std::string& member_id) const {
    auto it = std::lower_bound(
        accounts.begin(), accounts.end(), member_id,
        [](const MemberAccount& a, const std::string& key) { return a.member_id < key; });
    if (it == accounts.end() || it->member_id != member_id) return nullptr;
    return &*it;
}

Cents FirmBook::member_total() const {
    Cents total = 0;
    for (const auto& account : accounts) total += account.balance;
    return total;
}

double FirmBook::nav_share_price() const {
    if (total_shares <= 0) throw DomainError("book has no shares outstanding");
    return to_money(member_backing()) / static_cast<double>(total_shares);
}

bool FirmBook::invariants_hold() const {
    if (denomination == Denomination::value)
        return member_total() + collective == nav;
    std::int64_t shares = 0;
    for (const auto& account : accounts) {
        if (account.share_count < 0) return false;
        shares += account.share_count;
    }
    if (shares != total_shares) return false;
    return nav == round_cents(static_cast<double>(total_shares) * share_price * 100.0) +
                      collective;
}

FirmBook open_account(const FirmBook& book, const std::string& member_id,
                      Cents initial_contribution, double labor_weight) {
    if (initial_contribution < 0) throw DomainError("contribution must be nonnegative");
    if (labor_weight < 0.0) throw DomainError("labor weight must be nonnegative");
    if (book.find(member_id)) throw DuplicateMember(member_id);
    if (book.denomination == Denomination::shares && initial_contribution != 0)
        throw DomainError(
            "share-denominated accounts open empty; capital enters as shares");

    FirmBook updated = book;
    MemberAccount account;
    account.member_id = member_id;
    account.balance = initial_contribution;
    account.labor_weight = labor_weight;
    auto pos = std::lower_bound(updated.accounts.begin(), updated.accounts.end(),
                                member_id, [](const MemberAccount& a, const std::string& key) {
                                    return a.member_id < key;
                                });
    updated.accounts.insert(pos, std::move(account));
    updated.nav += initial_contribution;
    return updated;
}

FirmBook allocate_patronage(const FirmBook& book, Cents retained_profit,
                            const std::map<std::string, double>& weights,
                            ApplyNotes* notes) {
    require_value_book(book, "patronage allocation");
    if (retained_profit < 0) throw DomainError("retained profit must be nonnegative");
    FirmBook updated = book;
    if (retained_profit == 0) return updated;
    const auto split =
        largest_remainder_split(retained_profit, resolve_weights(book, weights));
    for (const auto& [id, increment] : split)
        find_account(updated, id)->balance += increment;
    updated.nav += retained_profit;
    (void)notes;
    return updated;
}

FirmBook allocate_loss(const FirmBook& book, Cents loss,
                       const std::map<std::string, double>& weights,
                       ApplyNotes* notes) {
    require_value_book(book, "loss allocation");
    if (loss < 0) throw DomainError("loss must be nonnegative");
    FirmBook updated = book;
    if (loss == 0) return updated;
    const auto split = largest_remainder_split(loss, resolve_weights(book, weights));
    for (const auto& [id, decrement] : split) {
        auto account = find_account(updated, id);
        account->balance -= decrement;
        if (account->balance < 0)
            flag(notes, "negative balance after loss: " + id);
    }
    updated.nav -= loss;
    return updated;
}

FirmBook credit_interest(const FirmBook& book, ApplyNotes* notes) {
    require_value_book(book, "interest credit");
    FirmBook updated = book;
    const double r = book.ica_interest_rate.value;
    if (r == 0.0) return updated;
    Cents credited = 0;
    for (auto& account : updated.accounts) {
        const Cents interest = round_cents(static_cast<double>(account.balance) * r);
        account.balance += interest;
        credited += interest;
    }
    updated.collective -= credited;  // nav unchanged: an internal transfer
    if (updated.collective < 0 && book.collective >= 0)
        flag(notes, "collective account driven negative by interest credit");
    return updated;
}

FirmBook withdraw(const FirmBook& book, const std::string& member_id, Cents amount,
                  ApplyNotes* notes) {
    require_value_book(book, "withdrawal");
    if (amount < 0) throw DomainError("withdrawal must be nonnegative");
    FirmBook updated = book;
    auto account = find_account(updated, member_id);
    if (account == updated.accounts.end()) throw UnknownMember(member_id);
    if (!account->active) throw InactiveMember(member_id);
    account->balance -= amount;
    updated.nav -= amount;
    if (account->balance < 0)
        flag(notes, "negative balance after withdrawal: " + member_id);
    return updated;
}

FirmBook esop_principal_allocation(const FirmBook& book, std::int64_t paid_shares,
                                   const std::map<std::string, double>& weights) {
    require_share_book(book, "share allocation");
    if (paid_shares < 0) throw DomainError("paid shares must be nonnegative");
    FirmBook updated = book;
    if (paid_shares == 0) return updated;
    const auto split =
        largest_remainder_split(paid_shares, resolve_weights(book, weights));
    for (const auto& [id, shares] : split)
        find_account(updated, id)->share_count += shares;
    updated.total_shares += paid_shares;
    // The contribution that paid for the shares backs them at carrying price.
    updated.nav += round_cents(static_cast<double>(paid_shares) *
                               updated.share_price * 100.0);
    absorb_share_residue(updated);
    return updated;
}

std::pair<FirmBook, RevaluationReport> revalue_shares(const FirmBook& book,
                                                      double new_price) {
    require_share_book(book, "share revaluation");
    if (new_price < 0.0) throw DomainError("share price must be nonnegative");
    RevaluationReport report;
    report.old_price = book.share_price;
    report.new_price = new_price;
    for (const auto& account : book.accounts)
        report.entries.push_back(
            {account.member_id, account.share_count,
             static_cast<double>(account.share_count) * (new_price - book.share_price)});

    FirmBook updated = book;
    const Cents change = round_cents(static_cast<double>(book.total_shares) *
                                     (new_price - book.share_price) * 100.0);
    updated.share_price = new_price;
    updated.nav += change;
    report.book_value_change = change;
    absorb_share_residue(updated);
    return {std::move(updated), std::move(report)};
}

FirmBook mark_to_nav(const FirmBook& book, Cents company_nav) {
    require_share_book(book, "mark to NAV");
    if (book.total_shares <= 0) throw DomainError("book has no shares outstanding");
    FirmBook updated = book;
    const double new_price =
        to_money(company_nav) / static_cast<double>(book.total_shares);
    // Aggregate write-down (or write-up) of the carrying value, debited or
    // credited to the collective account rather than to member holdings.
    const Cents write = company_nav - round_cents(static_cast<double>(book.total_shares) *
                                                  book.share_price * 100.0);
    updated.share_price = new_price;
    updated.collective += write;
    updated.nav = round_cents(static_cast<double>(updated.total_shares) *
                              updated.share_price * 100.0) +
                  updated.collective;
    return updated;
}

namespace {

struct PayoutQuote {
    double exact_nav_cents;     // unrounded NAV-rule payout
    double exact_market_cents;  // unrounded market-rule payout (if any)
};

PayoutQuote quote_exit(const FirmBook& book, const MemberAccount& account,
                       ExitRule rule) {
    PayoutQuote quote{0.0, 0.0};
    if (book.denomination == Denomination::value) {
        quote.exact_nav_cents = static_cast<double>(account.balance);
    } else {
        if (book.total_shares <= 0)
            throw DomainError("book has no shares outstanding");
        quote.exact_nav_cents = static_cast<double>(account.share_count) *
                                static_cast<double>(book.member_backing()) /
                                static_cast<double>(book.total_shares);
    }
    if (rule.kind == ExitRule::Kind::market) {
        if (book.nav <= 0)
            throw DomainError("market-rule payout needs positive nav");
        quote.exact_market_cents = quote.exact_nav_cents *
                                   static_cast<double>(rule.market_value) /
                                   static_cast<double>(book.nav);
    }
    return quote;
}

}  // namespace

std::pair<FirmBook, Cents> exit_payout(const FirmBook& book,
                                       const std::string& member_id, ExitRule rule,
                                       ApplyNotes* notes) {
    FirmBook updated = book;
    auto account = find_account(updated, member_id);
    if (account == updated.accounts.end()) throw UnknownMember(member_id);
    if (!account->active) throw InactiveMember(member_id);

    const PayoutQuote quote = quote_exit(book, *account, rule);
    const Cents payout = round_cents(rule.kind == ExitRule::Kind::market
                                         ? quote.exact_market_cents
                                         : quote.exact_nav_cents);
    if (rule.kind == ExitRule::Kind::market &&
        book.denomination == Denomination::value)
        flag(notes, "market-rule payout on a value book: inappropriate, "
                    "diagnostic only");
    if (payout < 0) flag(notes, "negative exit payout: " + member_id);

    if (book.denomination == Denomination::value) {
        const Cents balance = account->balance;
        account->balance = 0;
        updated.nav -= payout;
        // Any gap between the payout and the balance (market premium or
        // discount) is charged to the collective account.
        updated.collective -= payout - balance;
    } else {
        account->share_count = 0;
        updated.total_shares = 0;
        for (const auto& a : updated.accounts) updated.total_shares += a.share_count;
        updated.nav -= payout;  // repurchased shares are retired
        // Remaining members keep the carrying price behind their shares;
        // the collective absorbs the market premium and rounding residue.
        absorb_share_residue(updated);
    }
    account->active = false;
    if (notes) notes->payout = payout;
    return {std::move(updated), payout};
}

Cents repurchase_liability(const FirmBook& book, ExitRule rule) {
    Cents total = 0;
    for (const auto& account : book.accounts) {
        if (!account.active) continue;
        const PayoutQuote quote = quote_exit(book, account, rule);
        total += round_cents(rule.kind == ExitRule::Kind::market
                                 ? quote.exact_market_cents
                                 : quote.exact_nav_cents);
    }
    return total;
}

IncentiveReport sellout_incentive(const FirmBook& book, Cents market_value) {
    if (market_value < 0) throw DomainError("market value must be nonnegative");
    IncentiveReport report;
    report.market_value = market_value;
    report.nav = book.nav;
    report.inappropriate_for_value_book =
        book.denomination == Denomination::value;
    const ExitRule market = ExitRule::market_rule(market_value);
    for (const auto& account : book.accounts) {
        if (!account.active) continue;
        const PayoutQuote quote = quote_exit(book, account, market);
        IncentiveReport::Entry entry;
        entry.member_id = account.member_id;
        entry.nav_payout = round_cents(quote.exact_nav_cents);
        entry.market_payout = round_cents(quote.exact_market_cents);
        entry.delta = entry.market_payout - entry.nav_payout;
        entry.exact_delta =
            (quote.exact_market_cents - quote.exact_nav_cents) / 100.0;
        report.aggregate_delta += entry.delta;
        report.exact_aggregate_delta += entry.exact_delta;
        report.entries.push_back(std::move(entry));
    }
    return report;
}

std::string event_kind(const LedgerEvent& event) {
    struct Visitor {
        std::string operator()(const events::Contribution&) const { return "contribution"; }
        std::string operator()(const events::PatronageAllocation&) const {
            return "patronage_allocation";
        }
        std::string operator()(const events::LossAllocation&) const {
            return "loss_allocation";
        }
        std::string operator()(const events::InterestCredit&) const {
            return "interest_credit";
        }
        std::string operator()(const events::Withdrawal&) const { return "withdrawal"; }
        std::string operator()(const events::EsopPrincipalAllocation&) const {
            return "esop_principal_allocation";
        }
        std::string operator()(const events::ShareRevaluation&) const {
            return "share_revaluation";
        }
        std::string operator()(const events::MarkToNav&) const { return "mark_to_nav"; }
        std::string operator()(const events::Exit&) const { return "exit"; }
    };
    return std::visit(Visitor{}, event);
}

FirmBook apply_event(const FirmBook& book, const LedgerEvent& event,
                     ApplyNotes* notes) {
    struct Visitor {
        const FirmBook& book;
        ApplyNotes* notes;

        FirmBook operator()(const events::Contribution& e) const {
            return open_account(book, e.member_id, e.amount, e.labor_weight);
        }
        FirmBook operator()(const events::PatronageAllocation& e) const {
            return allocate_patronage(book, e.retained_profit, e.weights, notes);
        }
        FirmBook operator()(const events::LossAllocation& e) const {
            return allocate_loss(book, e.loss, e.weights, notes);
        }
        FirmBook operator()(const events::InterestCredit&) const {
            return credit_interest(book, notes);
        }
        FirmBook operator()(const events::Withdrawal& e) const {
            return withdraw(book, e.member_id, e.amount, notes);
        }
        FirmBook operator()(const events::EsopPrincipalAllocation& e) const {
            return esop_principal_allocation(book, e.paid_shares, e.weights);
        }
        FirmBook operator()(const events::ShareRevaluation& e) const {
            return revalue_shares(book, e.new_price).first;
        }
        FirmBook operator()(const events::MarkToNav& e) const {
            return mark_to_nav(book, e.company_nav);
        }
        FirmBook operator()(const events::Exit& e) const {
            return exit_payout(book, e.member_id, e.rule, notes).first;
        }
    };
    return std::visit(Visitor{book, notes}, event);
}

FirmBook replay(FirmBook book, const std::vector<LedgerEvent>& events,
                std::vector<ApplyNotes>* notes) {
    for (const auto& event : events) {
        ApplyNotes event_notes;
        book = apply_event(book, event, &event_notes);
        if (notes) notes->push_back(std::move(event_notes));
    }
    return book;
}

}  // namespace firmval
