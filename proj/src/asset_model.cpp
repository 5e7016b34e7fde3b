#include "firmval/asset_model.hpp"

namespace firmval {

void AssetSpec::validate() const {
    if (lifetime < 1) throw DomainError("asset lifetime must be at least one year");
    if (capital_services < 0.0 || annual_output < 0.0 || labor_hired < 0.0)
        throw DomainError("capital services, output and labor must be nonnegative");
    if (market_cost < 0.0 || salvage_value < 0.0)
        throw DomainError("market cost and salvage value must be nonnegative");
}

double passive_value(const AssetSpec& asset, Rate r) {
    asset.validate();
    return asset.rental_income() * annuity_pv(asset.lifetime, r) +
           asset.salvage_value * discount_factor(r, asset.lifetime);
}

double pure_profit(const AssetSpec& asset) {
    asset.validate();
    return asset.output_price * asset.annual_output - asset.rental_income() -
           asset.variable_cost - asset.wage_bill();
}

double active_value(const AssetSpec& asset, Rate r) {
    asset.validate();
    const double net_cash = asset.output_price * asset.annual_output -
                            asset.variable_cost - asset.wage_bill();
    return net_cash * annuity_pv(asset.lifetime, r) +
           asset.salvage_value * discount_factor(r, asset.lifetime);
}

AssetValuation decompose(const AssetSpec& asset, Rate r) {
    AssetValuation v;
    v.passive_value = passive_value(asset, r);
    v.active_value = active_value(asset, r);
    v.pure_profit_per_year = pure_profit(asset);
    v.goodwill_simple = v.pure_profit_per_year * annuity_pv(asset.lifetime, r);
    v.arbitrage_gap = asset.market_cost - v.passive_value;
    return v;
}

}  // namespace firmval
