// Exact-rational reference arithmetic for pinning golden values.
//
// Everything here is evaluated with arbitrary-precision rationals and is
// deliberately independent of the double-based engine: sums are written
// out directly from their definitions (no closed forms, no shared
// helpers), so agreement between the two routes is evidence, not
// tautology.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using Rat = boost::multiprecision::cpp_rational;

inline Rat rat(std::int64_t numerator, std::int64_t denominator = 1) {
    return Rat(numerator, denominator);
}

inline double to_double(const Rat& x) { return static_cast<double>(x); }

inline Rat rat_pow(Rat base, long exponent) {
    if (exponent < 0) {
        if (base == 0) throw std::domain_error("zero to a negative power");
        return rat_pow(Rat(denominator(base), numerator(base)), -exponent);
    }
    Rat result = 1;
    while (exponent > 0) {
        if (exponent & 1) result *= base;
        base *= base;
        exponent >>= 1;
    }
    return result;
}

inline Rat discount(const Rat& r, long k) { return rat_pow(1 + r, -k); }

inline Rat annuity(long n, const Rat& r) {
    Rat total = 0;
    for (long k = 1; k <= n; ++k) total += discount(r, k);
    return total;
}

inline Rat present_value(const std::vector<Rat>& amounts, const Rat& r) {
    Rat total = 0;
    for (std::size_t i = 0; i < amounts.size(); ++i)
        total += amounts[i] * discount(r, static_cast<long>(i) + 1);
    return total;
}

inline Rat perpetuity_residual(const Rat& r, long horizon) {
    Rat total = 0;
    for (long k = 1; k <= horizon; ++k) total += r * discount(r, k);
    return 1 - total;
}

/// Backward value recursion V[t] = (A[t] - I[t] + V[t+1]) / (1+r).
inline std::vector<Rat> backward_values(const std::vector<Rat>& profit,
                                        const std::vector<Rat>& investment,
                                        const Rat& r, const Rat& terminal_value) {
    const std::size_t T = profit.size();
    std::vector<Rat> value(T + 1);
    value[T] = terminal_value;
    for (std::size_t t = T; t-- > 0;)
        value[t] = (profit[t] - investment[t] + value[t + 1]) / (1 + r);
    return value;
}

inline std::vector<Rat> nav_path(const Rat& initial_nav,
                                 const std::vector<Rat>& investment) {
    std::vector<Rat> nav(investment.size() + 1);
    nav[0] = initial_nav;
    for (std::size_t t = 0; t < investment.size(); ++t) nav[t + 1] = nav[t] + investment[t];
    return nav;
}

/// NAV[t] plus discounted pure profits plus discounted terminal goodwill.
inline Rat nav_plus_goodwill(const std::vector<Rat>& profit,
                             const std::vector<Rat>& investment,
                             const Rat& initial_nav, const Rat& r,
                             const Rat& terminal_value, long t) {
    const auto nav = nav_path(initial_nav, investment);
    const long T = static_cast<long>(profit.size());
    Rat goodwill = 0;
    for (long k = 1; k <= T - t; ++k)
        goodwill += (profit[t + k - 1] - r * nav[t + k - 1]) * discount(r, k);
    goodwill += (terminal_value - nav[T]) * discount(r, T - t);
    return nav[t] + goodwill;
}

/// Share mechanics in exact arithmetic: per-share prices, issues and
/// repurchases, then the dividend-stream valuation at t.
inline Rat dividend_stream_value(const std::vector<Rat>& profit,
                                 const std::vector<Rat>& investment,
                                 const std::vector<Rat>& dividends,
                                 const Rat& initial_shares, const Rat& r,
                                 const std::vector<Rat>& value, long t) {
    const long T = static_cast<long>(profit.size());
    std::vector<Rat> shares(T + 1), price(T + 1), div_ps(T);
    shares[0] = initial_shares;
    price[0] = value[0] / shares[0];
    for (long u = 0; u < T; ++u) {
        div_ps[u] = dividends[u] / shares[u];
        price[u + 1] = (1 + r) * price[u] - div_ps[u];
        const Rat subscription = investment[u] - (profit[u] - dividends[u]);
        shares[u + 1] = shares[u] + subscription / price[u + 1];
    }
    Rat total = 0;
    for (long k = 1; k <= T - t; ++k)
        total += shares[t] * div_ps[t + k - 1] * discount(r, k);
    total += shares[t] * price[T] * discount(r, T - t);
    return total;
}

}  // namespace oracle
