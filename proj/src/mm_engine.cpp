#include "firmval/mm_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace firmval {

namespace {

void require_index(const FirmTrajectory& traj, int t) {
    if (t < 0 || t > traj.horizon())
        throw DomainError("period index out of range: " + std::to_string(t));
}

void check_series(const std::vector<double>& s, int T, bool nonnegative,
                  const char* name) {
    if (static_cast<int>(s.size()) != T)
        throw DomainError(std::string(name) + " must have length T");
    if (nonnegative)
        for (double x : s)
            if (x < 0.0) throw DomainError(std::string(name) + " must be nonnegative");
}

}  // namespace

void FirmPrimitives::validate() const {
    if (horizon < 1) throw DomainError("horizon must be at least one period");
    if (!(rate.value > 0.0)) throw DomainError("rate must be positive");
    if (!(initial_shares > 0.0)) throw DomainError("initial share count must be positive");
    check_series(accounting_profit, horizon, false, "accounting_profit");
    check_series(net_investment, horizon, false, "net_investment");
    check_series(depreciation, horizon, true, "depreciation");
    check_series(cogs, horizon, true, "cogs");
    check_series(dividends, horizon, true, "dividends");
    if (!debt.empty()) check_series(debt, horizon, true, "debt");
    double nav = initial_nav;
    if (!(nav > 0.0)) throw DomainError("initial NAV must be positive");
    for (double inv : net_investment) {
        nav += inv;
        if (!(nav > 0.0))
            throw DomainError("book equity must stay positive along the path");
    }
}

double FirmTrajectory::debt_at(int t) const {
    require_index(*this, t);
    if (primitives.debt.empty()) return 0.0;
    // Debt is a flow-period series; carry the last value at the horizon.
    return primitives.debt[std::min(t, primitives.horizon - 1)];
}

BalanceSheet FirmTrajectory::balance_sheet(int t) const {
    return BalanceSheet::make(debt_at(t), nav[t]);
}

FirmTrajectory build_trajectory(const FirmPrimitives& primitives,
                                TerminalCondition terminal) {
    primitives.validate();
    const int T = primitives.horizon;
    const double r = primitives.rate.value;

    FirmTrajectory traj;
    traj.primitives = primitives;
    traj.terminal = terminal;
    traj.nav.assign(T + 1, 0.0);
    traj.equity_value.assign(T + 1, 0.0);
    traj.shares.assign(T + 1, 0.0);
    traj.share_price.assign(T + 1, 0.0);
    traj.dividends_per_share.assign(T, 0.0);
    traj.subscription.assign(T + 1, 0.0);
    traj.new_shares.assign(T + 1, 0.0);
    traj.receipts.assign(T, 0.0);
    traj.outlays.assign(T, 0.0);

    traj.nav[0] = primitives.initial_nav;
    for (int t = 0; t < T; ++t)
        traj.nav[t + 1] = traj.nav[t] + primitives.net_investment[t];

    if (terminal.kind == TerminalCondition::Kind::explicit_value) {
        if (terminal.value < 0.0)
            throw DomainError("explicit terminal value must be nonnegative");
        traj.equity_value[T] = terminal.value;
    } else {
        traj.equity_value[T] = traj.nav[T];
    }
    for (int t = T - 1; t >= 0; --t)
        traj.equity_value[t] = (primitives.accounting_profit[t] -
                                primitives.net_investment[t] +
                                traj.equity_value[t + 1]) /
                               (1.0 + r);

    traj.shares[0] = primitives.initial_shares;
    traj.share_price[0] = traj.equity_value[0] / traj.shares[0];
    for (int t = 0; t < T; ++t) {
        if (!(traj.share_price[t] > 0.0))
            throw InfeasibleTrajectory("share price is nonpositive at t=" +
                                       std::to_string(t));
        traj.dividends_per_share[t] = primitives.dividends[t] / traj.shares[t];
        traj.share_price[t + 1] =
            (1.0 + r) * traj.share_price[t] - traj.dividends_per_share[t];
        if (!(traj.share_price[t + 1] > 0.0))
            throw InfeasibleTrajectory("share price is nonpositive at t=" +
                                       std::to_string(t + 1));
        traj.subscription[t + 1] =
            primitives.net_investment[t] -
            (primitives.accounting_profit[t] - primitives.dividends[t]);
        traj.new_shares[t + 1] = traj.subscription[t + 1] / traj.share_price[t + 1];
        traj.shares[t + 1] = traj.shares[t] + traj.new_shares[t + 1];
        if (!(traj.shares[t + 1] > 0.0))
            throw InfeasibleTrajectory(
                "a repurchase would retire the whole float at t=" +
                std::to_string(t + 1));
    }

    for (int t = 0; t < T; ++t) {
        const double carry = primitives.depreciation[t] + primitives.cogs[t];
        traj.receipts[t] = primitives.accounting_profit[t] + carry;
        traj.outlays[t] = primitives.net_investment[t] + carry;
    }
    return traj;
}

double value_dividend_stream(const FirmTrajectory& traj, int t) {
    require_index(traj, t);
    const int T = traj.horizon();
    double total = 0.0;
    for (int k = 1; k <= T - t; ++k)
        total += traj.shares[t] * traj.dividends_per_share[t + k - 1] *
                 discount_factor(traj.rate(), k);
    total += traj.shares[t] * traj.share_price[T] * discount_factor(traj.rate(), T - t);
    return total;
}

double value_discounted_cashflow(const FirmTrajectory& traj, int t) {
    require_index(traj, t);
    const int T = traj.horizon();
    double total = 0.0;
    for (int k = 1; k <= T - t; ++k)
        total += (traj.receipts[t + k - 1] - traj.outlays[t + k - 1]) *
                 discount_factor(traj.rate(), k);
    return total + traj.equity_value[T] * discount_factor(traj.rate(), T - t);
}

double value_earnings_recursion(const FirmTrajectory& traj, int t) {
    require_index(traj, t);
    const int T = traj.horizon();
    const FirmPrimitives& p = traj.primitives;
    double total = 0.0;
    for (int k = 1; k <= T - t; ++k)
        total += (p.accounting_profit[t + k - 1] - p.net_investment[t + k - 1]) *
                 discount_factor(traj.rate(), k);
    return total + traj.equity_value[T] * discount_factor(traj.rate(), T - t);
}

std::vector<double> pure_profit_series(const FirmTrajectory& traj) {
    const int T = traj.horizon();
    const double r = traj.rate().value;
    std::vector<double> profit(T, 0.0);
    for (int t = 0; t < T; ++t)
        profit[t] = traj.primitives.accounting_profit[t] - r * traj.nav[t];
    return profit;
}

double goodwill(const FirmTrajectory& traj, int t) {
    require_index(traj, t);
    const int T = traj.horizon();
    const double r = traj.rate().value;
    double total = 0.0;
    for (int k = 1; k <= T - t; ++k) {
        const double profit = traj.primitives.accounting_profit[t + k - 1] -
                              r * traj.nav[t + k - 1];
        total += profit * discount_factor(traj.rate(), k);
    }
    return total + (traj.equity_value[T] - traj.nav[T]) *
                       discount_factor(traj.rate(), T - t);
}

double value_nav_plus_goodwill(const FirmTrajectory& traj, int t) {
    require_index(traj, t);
    return traj.nav[t] + goodwill(traj, t);
}

double passive_nav_value(double nav, Rate r, int K) {
    if (!(r.value > 0.0)) throw DomainError("rate must be positive");
    if (K < 0) throw DomainError("period count must be nonnegative");
    double total = 0.0;
    for (int k = 1; k <= K; ++k)
        total += r.value * nav * discount_factor(r, k);
    return total + nav * discount_factor(r, K);
}

EquivalenceReport check_equivalence(const FirmTrajectory& traj, int t,
                                    double tolerance) {
    require_index(traj, t);
    EquivalenceReport report;
    report.t = t;
    report.tolerance = tolerance;
    report.backward_value = traj.equity_value[t];
    report.dividend_stream = value_dividend_stream(traj, t);
    report.discounted_cashflow = value_discounted_cashflow(traj, t);
    report.earnings_recursion = value_earnings_recursion(traj, t);
    report.nav_plus_goodwill = value_nav_plus_goodwill(traj, t);

    const double values[] = {report.backward_value, report.dividend_stream,
                             report.discounted_cashflow, report.earnings_recursion,
                             report.nav_plus_goodwill};
    double lo = values[0], hi = values[0], scale = 0.0;
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        scale = std::max(scale, std::abs(v));
    }
    report.max_rel_deviation = scale > 0.0 ? (hi - lo) / scale : 0.0;
    report.pass = report.max_rel_deviation <= tolerance;
    return report;
}

}  // namespace firmval
