#include "firmval/fincore.hpp"

#include <cmath>

namespace firmval {

namespace {

void require_discountable(Rate r) {
    if (!(r.value > -1.0))
        throw DomainError("rate must be greater than -1");
}

}  // namespace

double discount_factor(Rate r, int k) {
    require_discountable(r);
    if (k < 0) throw DomainError("period index must be nonnegative");
    if (k == 0) return 1.0;
    return std::exp(-static_cast<double>(k) * std::log1p(r.value));
}

double annuity_pv(int n, Rate r) {
    require_discountable(r);
    if (n < 0) throw DomainError("period count must be nonnegative");
    if (n == 0) return 0.0;
    if (r.value == 0.0) return static_cast<double>(n);
    // (1 - (1+r)^-n)/r via expm1/log1p; stays accurate for small r*n.
    return -std::expm1(-static_cast<double>(n) * std::log1p(r.value)) / r.value;
}

double present_value(const CashStream& stream, Rate r) {
    require_discountable(r);
    double total = 0.0;
    for (std::size_t i = 0; i < stream.amounts.size(); ++i)
        total += stream.amounts[i] * discount_factor(r, static_cast<int>(i) + 1);
    return total;
}

double perpetuity_identity_residual(Rate r, int K) {
    if (!(r.value > 0.0)) throw DomainError("rate must be positive");
    if (K < 1) throw DomainError("horizon must be at least one period");
    // Kahan-compensated truncated sum of r/(1+r)^k. The compensation keeps
    // the residual usable even when it is many orders below the summands.
    double sum = 0.0, c = 0.0;
    double factor = 1.0;
    const double step = 1.0 / (1.0 + r.value);
    for (int k = 1; k <= K; ++k) {
        factor *= step;
        const double term = r.value * factor;
        const double y = term - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return 1.0 - sum;
}

}  // namespace firmval
