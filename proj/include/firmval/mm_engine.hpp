#pragma once

#include <vector>

#include "firmval/fincore.hpp"

namespace firmval {

/// Stock accounts at one instant. gross_assets == debt + net_assets by
/// construction; make() is the only way to obtain one.
struct BalanceSheet {
    double gross_assets{0.0};
    double debt{0.0};
    double net_assets{0.0};

    static BalanceSheet make(double debt, double net_assets) {
        return BalanceSheet{debt + net_assets, debt, net_assets};
    }
};

/// Exogenous series describing a firm over a finite horizon of T periods.
/// Flows are indexed t = 0..T-1: accounting_profit[t] is earned during
/// period t and paid/retained at t+1, matching the dividend convention
/// below.
struct FirmPrimitives {
    Rate rate;                              // flat discount rate, > 0
    int horizon{0};                         // T
    double initial_nav{0.0};                // NAV at t = 0
    double initial_shares{0.0};             // shares outstanding at t = 0
    std::vector<double> accounting_profit;  // A[t]: net accounting profit
    std::vector<double> net_investment;     // I[t]: net new investment
    std::vector<double> depreciation;       // Depr[t] >= 0
    std::vector<double> cogs;               // COGS[t] >= 0 (incl. labor, interest)
    std::vector<double> dividends;          // Div[t] >= 0: total paid at t+1
                                            //   to holders of record at t
    std::vector<double> debt;               // D[t] >= 0; empty means all-zero

    /// Throws DomainError if any series has the wrong length, a sign
    /// constraint fails, or book equity would go nonpositive.
    void validate() const;
};

/// Finite-horizon closure for the value recursion. zero_goodwill sets
/// V(T) = NAV(T), i.e. no pure profits beyond the horizon.
struct TerminalCondition {
    enum class Kind { zero_goodwill, explicit_value };
    Kind kind{Kind::zero_goodwill};
    double value{0.0};

    static TerminalCondition zero_goodwill() { return {}; }
    static TerminalCondition explicit_value(double terminal_value) {
        return {Kind::explicit_value, terminal_value};
    }
};

/// A fully resolved firm path. Stocks (nav, equity_value, shares,
/// share_price) run t = 0..T; flows run t = 0..T-1. subscription[t] and
/// new_shares[t] are the issue (or, when negative, pro-rata repurchase)
/// that happens at time t, t = 1..T; index 0 is unused and zero.
struct FirmTrajectory {
    FirmPrimitives primitives;
    TerminalCondition terminal;
    std::vector<double> nav;                  // NAV[t]
    std::vector<double> equity_value;         // V[t] = shares[t]*share_price[t]
    std::vector<double> shares;               // n[t]
    std::vector<double> share_price;          // v[t]
    std::vector<double> dividends_per_share;  // Div[t]/n[t]
    std::vector<double> subscription;         // Sub[t] = m[t]*v[t]
    std::vector<double> new_shares;           // m[t]
    std::vector<double> receipts;             // A[t] + Depr[t] + COGS[t]
    std::vector<double> outlays;              // I[t] + Depr[t] + COGS[t]

    int horizon() const { return primitives.horizon; }
    Rate rate() const { return primitives.rate; }
    double debt_at(int t) const;
    BalanceSheet balance_sheet(int t) const;
};

/// Builds the unique internally consistent trajectory for the given
/// primitives and terminal condition:
///   NAV[t+1] = NAV[t] + I[t]
///   V[t]     = (A[t] - I[t] + V[t+1]) / (1+r), from V[T]
///   v[t+1]   = (1+r) v[t] - div_ps[t]           (arbitrage equation)
///   Sub[t+1] = I[t] - (A[t] - Div[t]),  m[t+1] = Sub[t+1]/v[t+1]
/// Negative subscriptions repurchase shares pro rata. Throws
/// InfeasibleTrajectory when a price or share count goes nonpositive.
FirmTrajectory build_trajectory(const FirmPrimitives& primitives,
                                TerminalCondition terminal);

/// Dividends accruing to the shares of record at t, discounted, plus the
/// terminal value of those same shares:
///   sum_{k=1..T-t} n[t] div_ps[t+k-1]/(1+r)^k + n[t] v[T]/(1+r)^(T-t)
double value_dividend_stream(const FirmTrajectory& traj, int t);

/// sum_{k=1..T-t} (receipts - outlays)/(1+r)^k + V[T]/(1+r)^(T-t).
/// Depreciation and COGS appear in both series and cancel.
double value_discounted_cashflow(const FirmTrajectory& traj, int t);

/// sum_{k=1..T-t} (A - I)/(1+r)^k + V[T]/(1+r)^(T-t).
double value_earnings_recursion(const FirmTrajectory& traj, int t);

/// Pure (economic) profit per period: pi[t] = A[t] - r*NAV[t], t = 0..T-1.
std::vector<double> pure_profit_series(const FirmTrajectory& traj);

/// Discounted future pure profits plus the discounted terminal goodwill:
///   GW[t] = sum_{k=1..T-t} pi[t+k-1]/(1+r)^k + (V[T]-NAV[T])/(1+r)^(T-t)
double goodwill(const FirmTrajectory& traj, int t);

/// NAV[t] + GW[t].
double value_nav_plus_goodwill(const FirmTrajectory& traj, int t);

/// Value of lending out NAV at rate r for K periods and recovering the
/// principal: sum_{k=1..K} r*nav/(1+r)^k + nav/(1+r)^K. Equals nav
/// identically; the passive-use fixed point.
double passive_nav_value(double nav, Rate r, int K);

/// The five valuations of the same firm at time t, with their spread.
struct EquivalenceReport {
    int t{0};
    double backward_value{0.0};       // V[t] from build_trajectory
    double dividend_stream{0.0};
    double discounted_cashflow{0.0};
    double earnings_recursion{0.0};
    double nav_plus_goodwill{0.0};
    double max_rel_deviation{0.0};    // max pairwise gap / max magnitude
    double tolerance{0.0};
    bool pass{false};
};

EquivalenceReport check_equivalence(const FirmTrajectory& traj, int t,
                                    double tolerance);

}  // namespace firmval
