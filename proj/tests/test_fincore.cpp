#include <doctest.h>

#include "firmval/fincore.hpp"
#include "oracle/rational_oracle.hpp"
#include "test_support.hpp"

using namespace firmval;
using oracle::rat;
using testsupport::rel_close;

TEST_CASE("discount factor definition and golden values") {
    CHECK(discount_factor({0.10}, 0) == 1.0);
    CHECK(discount_factor({0.10}, 1) == doctest::Approx(1.0 / 1.1).epsilon(1e-15));
    // 1000/1331, pinned by the rational oracle.
    const double expected = oracle::to_double(oracle::discount(rat(1, 10), 3));
    CHECK(expected == doctest::Approx(0.7513148009015778).epsilon(1e-15));
    CHECK(rel_close(discount_factor({0.10}, 3), expected, 1e-12));
}

TEST_CASE("discount factor domain errors") {
    CHECK_THROWS_AS(discount_factor({-1.0}, 1), DomainError);
    CHECK_THROWS_AS(discount_factor({-1.5}, 2), DomainError);
    CHECK_THROWS_AS(discount_factor({0.10}, -1), DomainError);
    // r in (-1, 0) is a legal discount factor argument.
    CHECK(discount_factor({-0.5}, 1) == doctest::Approx(2.0));
}

TEST_CASE("annuity golden values") {
    CHECK(annuity_pv(0, {0.10}) == 0.0);
    CHECK(annuity_pv(1, {0.10}) == doctest::Approx(1.0 / 1.1).epsilon(1e-15));
    const double expected = oracle::to_double(oracle::annuity(3, rat(1, 10)));
    CHECK(expected == doctest::Approx(2.4868519909842224).epsilon(1e-15));
    CHECK(rel_close(annuity_pv(3, {0.10}), expected, 1e-12));
    CHECK(annuity_pv(5, {0.0}) == 5.0);
    CHECK_THROWS_AS(annuity_pv(3, {-1.0}), DomainError);
    CHECK_THROWS_AS(annuity_pv(-1, {0.10}), DomainError);
}

TEST_CASE("annuity recurrence matches the closed form") {
    for (double r : {0.001, 0.01, 0.07, 0.10, 0.25, 0.5}) {
        for (int n = 1; n <= 200; ++n) {
            const double recurrence =
                annuity_pv(n - 1, {r}) + discount_factor({r}, n);
            CHECK(rel_close(annuity_pv(n, {r}), recurrence, 1e-12));
        }
    }
}

TEST_CASE("annuity agrees with the rational oracle across a grid") {
    for (auto [num, den] : {std::pair{1L, 100L}, {3L, 50L}, {1L, 10L}, {1L, 4L}}) {
        const oracle::Rat r_exact = rat(num, den);
        const double r = oracle::to_double(r_exact);
        for (long n : {1L, 2L, 7L, 40L, 120L}) {
            const double expected = oracle::to_double(oracle::annuity(n, r_exact));
            CHECK(rel_close(annuity_pv(static_cast<int>(n), {r}), expected, 1e-12));
        }
    }
}

TEST_CASE("present value of streams") {
    CHECK(present_value({}, {0.10}) == 0.0);
    const double level = present_value({{100.0, 100.0, 100.0}}, {0.10});
    CHECK(rel_close(level, 248.68519909842223, 1e-12));

    // A stream paying r*X each period has PV X*(1-(1+r)^-K).
    const double r = 0.07, X = 1234.5;
    const int K = 12;
    CashStream stream;
    stream.amounts.assign(K, r * X);
    CHECK(rel_close(present_value(stream, {r}),
                    X * (1.0 - std::pow(1.0 + r, -K)), 1e-12));
    CHECK_THROWS_AS(present_value(stream, {-1.0}), DomainError);
}

TEST_CASE("present value is additive") {
    testsupport::Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const int length = static_cast<int>(rng.range(0, 30));
        const double r = rng.uniform(0.005, 0.4);
        CashStream a, b, sum;
        for (int i = 0; i < length; ++i) {
            a.amounts.push_back(rng.uniform(-1000.0, 1000.0));
            b.amounts.push_back(rng.uniform(-1000.0, 1000.0));
            sum.amounts.push_back(a.amounts.back() + b.amounts.back());
        }
        const double joint = present_value(sum, {r});
        const double split = present_value(a, {r}) + present_value(b, {r});
        // Scale by the discounted absolute mass so cancelling streams do
        // not inflate the relative gap.
        CashStream magnitude;
        for (int i = 0; i < length; ++i)
            magnitude.amounts.push_back(std::abs(a.amounts[i]) + std::abs(b.amounts[i]));
        const double scale = std::max(1.0, present_value(magnitude, {r}));
        CHECK(std::abs(joint - split) <= 1e-12 * scale);
    }
}

TEST_CASE("perpetuity identity residual equals the discount factor") {
    CHECK(perpetuity_identity_residual({0.10}, 1) ==
          doctest::Approx(1.0 / 1.1).epsilon(1e-15));

    const double r50 = oracle::to_double(oracle::discount(rat(1, 10), 50));
    CHECK(r50 == doctest::Approx(0.00851855127950064).epsilon(1e-14));
    CHECK(rel_close(perpetuity_identity_residual({0.10}, 50), r50, 1e-12));

    // Far past double resolution: the truncated sum collapses to zero
    // while the true residual is ~4.1e-20, so only the absolute gap is
    // meaningful there.
    const double r200 = oracle::to_double(oracle::discount(rat(1, 4), 200));
    CHECK(r200 < 1e-19);
    CHECK(std::abs(perpetuity_identity_residual({0.25}, 200) - r200) <= 1e-12);

    CHECK_THROWS_AS(perpetuity_identity_residual({0.0}, 5), DomainError);
    CHECK_THROWS_AS(perpetuity_identity_residual({-0.2}, 5), DomainError);
    CHECK_THROWS_AS(perpetuity_identity_residual({0.10}, 0), DomainError);
}

TEST_CASE("perpetuity residual tracks discount_factor at 1e-12 relative") {
    // Relative agreement holds while (1+r)^K stays moderate; beyond that
    // the residual sits below the summation noise floor and only the
    // absolute contract (checked above) applies.
    for (double r : {0.01, 0.02, 0.05, 0.10, 0.20, 0.30}) {
        for (int K = 1; K <= 40; ++K) {
            if (std::pow(1.0 + r, K) > 1000.0) break;
            CHECK(rel_close(perpetuity_identity_residual({r}, K),
                            discount_factor({r}, K), 1e-12));
        }
    }
}
