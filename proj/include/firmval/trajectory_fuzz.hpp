#pragma once

#include <cstdint>
#include <vector>

#include "firmval/mm_engine.hpp"

namespace firmval {

/// Sampling ranges for random firm primitives. Defaults match the desk-scale
/// regime the equivalence claim is tested in: T <= 40, r in [0.01, 0.30],
/// pure profit up to +-50% of NAV per period.
struct TrajectoryRanges {
    int min_horizon{1};
    int max_horizon{40};
    double min_rate{0.01};
    double max_rate{0.30};
    double min_initial_nav{500.0};
    double max_initial_nav{100000.0};
    double max_profit_to_nav{0.50};      // |pi[t]| <= this * NAV[t]
    double max_investment_to_nav{0.30};  // |I[t]| <= this * NAV[t]
    double max_carry_to_nav{0.50};       // Depr[t], COGS[t] <= this * NAV[t]
    double min_initial_shares{1.0};
    double max_initial_shares{10000.0};

    void validate() const;
};

/// Deterministic primitives for one seed. The same (seed, ranges) pair
/// always yields the same series, independent of platform stdlib,
/// so recorded failure seeds replay exactly.
FirmPrimitives random_primitives(std::uint64_t seed, const TrajectoryRanges& ranges);

/// Replaces the dividend series with a different feasible one drawn from
/// the variant seed, leaving every other primitive untouched.
FirmPrimitives random_dividend_variant(const FirmPrimitives& base,
                                       std::uint64_t variant_seed);

struct FuzzFailure {
    int index{0};
    std::uint64_t seed{0};
    int t{0};
    double max_rel_deviation{0.0};
};

struct FuzzSummary {
    int requested{0};            // feasible trajectories evaluated
    std::uint64_t master_seed{0};
    double tolerance{0.0};
    int rejected{0};             // infeasible draws discarded along the way
    double rejection_rate{0.0};  // rejected / (rejected + requested)
    double max_rel_deviation{0.0};
    std::vector<FuzzFailure> failures;

    bool pass() const { return failures.empty(); }
};

/// Generates `count` feasible random trajectories and checks five-formula
/// equivalence at t = 0 and at one random interior period of each.
/// Infeasible draws are rejected and counted, never silently retried into
/// the statistics. Failures carry the per-trajectory seed for replay.
FuzzSummary fuzz_equivalence(int count, std::uint64_t seed, double tolerance,
                             const TrajectoryRanges& ranges = {});

}  // namespace firmval
