#pragma once

#include <vector>

#include "firmval/errors.hpp"

namespace firmval {

/// Flat per-period interest rate, e.g. 0.10 for 10% per year.
struct Rate {
    double value{0.0};
};

/// End-of-period payment stream: amounts[k-1] is paid at the end of
/// period k, k = 1..T. Amounts may be negative (outlays).
struct CashStream {
    std::vector<double> amounts;
};

/// 1/(1+r)^k. Requires r > -1 and k >= 0.
double discount_factor(Rate r, int k);

/// Present value of an ordinary annuity of one:
///   a(n, r) = sum_{k=1..n} 1/(1+r)^k
/// Closed form (1 - (1+r)^-n)/r for r > 0; equals n at r = 0.
double annuity_pv(int n, Rate r);

/// sum_{k=1..T} amounts[k-1]/(1+r)^k.
double present_value(const CashStream& stream, Rate r);

/// 1 - sum_{k=1..K} r/(1+r)^k, evaluated as the literal truncated sum.
/// Contract: the result equals (1+r)^-K up to accumulated rounding, which
/// witnesses that the infinite sum of r/(1+r)^k is exactly one dollar.
/// Requires r > 0, K >= 1.
double perpetuity_identity_residual(Rate r, int K);

}  // namespace firmval
