#include "firmval/trajectory_fuzz.hpp"

#include <algorithm>
#include <cmath>

namespace firmval {

namespace {

// splitmix64: tiny, stateless, platform-stable. Used both to derive
// per-trajectory seeds from the master seed and as the draw engine.
std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform01(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

double uniform(std::uint64_t& state, double lo, double hi) {
    return lo + (hi - lo) * uniform01(state);
}

int uniform_int(std::uint64_t& state, int lo, int hi) {
    return lo + static_cast<int>(splitmix64(state) % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace

void TrajectoryRanges::validate() const {
    if (min_horizon < 1 || max_horizon < min_horizon)
        throw DomainError("invalid horizon range");
    if (!(min_rate > 0.0) || max_rate < min_rate)
        throw DomainError("invalid rate range");
    if (!(min_initial_nav > 0.0) || max_initial_nav < min_initial_nav)
        throw DomainError("invalid initial NAV range");
    if (max_profit_to_nav < 0.0 || max_carry_to_nav < 0.0)
        throw DomainError("ratio bounds must be nonnegative");
    if (max_investment_to_nav < 0.0 || max_investment_to_nav >= 1.0)
        throw DomainError("investment ratio must lie in [0, 1)");
    if (!(min_initial_shares > 0.0) || max_initial_shares < min_initial_shares)
        throw DomainError("invalid share count range");
}

FirmPrimitives random_primitives(std::uint64_t seed, const TrajectoryRanges& ranges) {
    ranges.validate();
    std::uint64_t state = seed;
    FirmPrimitives p;
    p.horizon = uniform_int(state, ranges.min_horizon, ranges.max_horizon);
    p.rate.value = uniform(state, ranges.min_rate, ranges.max_rate);
    p.initial_nav = uniform(state, ranges.min_initial_nav, ranges.max_initial_nav);
    p.initial_shares = uniform(state, ranges.min_initial_shares, ranges.max_initial_shares);

    const int T = p.horizon;
    p.accounting_profit.resize(T);
    p.net_investment.resize(T);
    p.depreciation.resize(T);
    p.cogs.resize(T);
    p.dividends.resize(T);

    double nav = p.initial_nav;
    for (int t = 0; t < T; ++t) {
        // Investment keeps NAV strictly positive: I > -NAV always.
        p.net_investment[t] =
            uniform(state, -ranges.max_investment_to_nav, ranges.max_investment_to_nav) * nav;
        const double profit =
            uniform(state, -ranges.max_profit_to_nav, ranges.max_profit_to_nav) * nav;
        p.accounting_profit[t] = p.rate.value * nav + profit;
        p.dividends[t] =
            uniform01(state) * std::max(0.0, p.accounting_profit[t]);
        p.depreciation[t] = uniform(state, 0.0, ranges.max_carry_to_nav) * nav;
        p.cogs[t] = uniform(state, 0.0, ranges.max_carry_to_nav) * nav;
        nav += p.net_investment[t];
    }
    return p;
}

FirmPrimitives random_dividend_variant(const FirmPrimitives& base,
                                       std::uint64_t variant_seed) {
    std::uint64_t state = variant_seed ^ 0xd1b54a32d192ed03ULL;
    FirmPrimitives variant = base;
    for (int t = 0; t < base.horizon; ++t)
        variant.dividends[t] =
            uniform01(state) * std::max(0.0, base.accounting_profit[t]);
    return variant;
}

FuzzSummary fuzz_equivalence(int count, std::uint64_t seed, double tolerance,
                             const TrajectoryRanges& ranges) {
    if (count < 1) throw DomainError("fuzz count must be at least one");
    FuzzSummary summary;
    summary.requested = count;
    summary.master_seed = seed;
    summary.tolerance = tolerance;

    std::uint64_t seeder = seed;
    for (int i = 0; i < count; ++i) {
        FirmTrajectory traj;
        std::uint64_t trajectory_seed = 0;
        for (;;) {
            trajectory_seed = splitmix64(seeder);
            try {
                traj = build_trajectory(random_primitives(trajectory_seed, ranges),
                                        TerminalCondition::zero_goodwill());
                break;
            } catch (const InfeasibleTrajectory&) {
                ++summary.rejected;
            }
        }

        std::uint64_t pick = trajectory_seed ^ 0x2545f4914f6cdd1dULL;
        const int interior =
            traj.horizon() > 1 ? uniform_int(pick, 1, traj.horizon() - 1) : 0;
        for (int t : {0, interior}) {
            const EquivalenceReport report = check_equivalence(traj, t, tolerance);
            summary.max_rel_deviation =
                std::max(summary.max_rel_deviation, report.max_rel_deviation);
            if (!report.pass)
                summary.failures.push_back(
                    {i, trajectory_seed, t, report.max_rel_deviation});
        }
    }
    summary.rejection_rate =
        static_cast<double>(summary.rejected) /
        static_cast<double>(summary.rejected + summary.requested);
    return summary;
}

}  // namespace firmval
