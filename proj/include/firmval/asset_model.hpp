#pragma once

#include "firmval/fincore.hpp"

namespace firmval {

/// A single productive asset: what it costs, what its services rent for,
/// and what a going concern built around it earns per year.
struct AssetSpec {
    double market_cost{0.0};       // C: purchase price of the asset
    double capital_services{0.0};  // K: units of capital services per year
    double rental_rate{0.0};       // R: rent per unit of services per year
    double salvage_value{0.0};     // S: value recovered after `lifetime` years
    int lifetime{1};               // n: service life in whole years
    double output_price{0.0};      // P: unit price of output
    double annual_output{0.0};     // Q: units of output per year
    double variable_cost{0.0};     // VC: non-labor operating cost per year
    double wage_rate{0.0};         // W: wage per labor unit per year
    double labor_hired{0.0};       // L: labor units hired per year

    double rental_income() const { return rental_rate * capital_services; }
    double wage_bill() const { return wage_rate * labor_hired; }
    void validate() const;  // throws DomainError on a malformed spec
};

/// Passive (rent it out) and active (run it) values of one asset, with the
/// pure-profit decomposition active = passive + goodwill.
struct AssetValuation {
    double passive_value{0.0};
    double active_value{0.0};
    double pure_profit_per_year{0.0};
    double goodwill_simple{0.0};
    /// market_cost minus the computed passive value. Zero when buy/lease
    /// arbitrage holds; reported as a diagnostic, never an error.
    double arbitrage_gap{0.0};
};

/// Rental income annuity plus discounted salvage: R*K*a(n,r) + S/(1+r)^n.
double passive_value(const AssetSpec& asset, Rate r);

/// P*Q - R*K - VC - W*L per year. May be negative.
double pure_profit(const AssetSpec& asset);

/// Going-concern value: (P*Q - VC - W*L)*a(n,r) + S/(1+r)^n.
double active_value(const AssetSpec& asset, Rate r);

/// All four figures plus the arbitrage gap. Satisfies
/// active_value - passive_value == pure_profit * a(n,r) up to rounding.
AssetValuation decompose(const AssetSpec& asset, Rate r);

}  // namespace firmval
