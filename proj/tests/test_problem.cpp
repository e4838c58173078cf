#include <catch2/catch_amalgamated.hpp>

#include "annuli/problem.hpp"

using namespace annuli;

TEST_CASE("normalize_problem reduces annulus pairs to ratios") {
    const auto s = normalize_problem(1, 2, 1, 17.0 / 8.0, 2);
    CHECK(s.r == 2.0);
    CHECK(s.R == 17.0 / 8.0);
    CHECK(s.j == 2);
    CHECK(s.domain_scale == 1.0);
    CHECK(s.target_scale == 1.0);

    const auto fat = normalize_problem(0.5, 2, 1, 17.0 / 8.0, 2);
    CHECK(fat.r == 4.0);
    CHECK(fat.R == 17.0 / 8.0);
    CHECK(fat.domain_scale == 0.5);

    const auto scaled = normalize_problem(3, 6, 5, 10, 1);
    CHECK(scaled.r == 2.0);
    CHECK(scaled.R == 2.0);
    CHECK(scaled.domain_scale == 3.0);
    CHECK(scaled.target_scale == 5.0);
}

TEST_CASE("normalize_problem rejects bad annuli") {
    CHECK_THROWS_AS(normalize_problem(0, 2, 1, 2, 1), InvalidAnnulus);
    CHECK_THROWS_AS(normalize_problem(2, 1, 1, 2, 1), InvalidAnnulus);
    CHECK_THROWS_AS(normalize_problem(1, 2, -1, 2, 1), InvalidAnnulus);
    CHECK_THROWS_AS(normalize_problem(1, 2, 3, 2, 1), InvalidAnnulus);
    CHECK_THROWS_AS(normalize_problem(1, 2, 1, 2, 0), InvalidAnnulus);
    CHECK_THROWS_AS(normalize_problem(1, 2, 1, 2, -3), InvalidAnnulus);
}

TEST_CASE("nitsche_rhs matches the rational value at r=2") {
    // Exact rational check: (1/2) 2^{-2} (1 + 2^4) = 17/8. Both sides are
    // binary-exact doubles.
    const long long num = 17, den = 8;
    CHECK(nitsche_rhs(2.0, 2) == static_cast<double>(num) / static_cast<double>(den));
    CHECK(nitsche_rhs(2.0, 1) == 1.25);
}

TEST_CASE("nitsche_rhs tends to 1 as the annulus degenerates") {
    CHECK(nitsche_rhs(1.0 + 1e-12, 1) == Catch::Approx(1.0).epsilon(1e-10));
    CHECK(nitsche_rhs(1.0 + 1e-12, 5) == Catch::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("is_above_bound classifies the three regimes") {
    CHECK(is_above_bound(ProblemSpec{2.0, 4.0, 2}));         // conformal
    CHECK(is_above_bound(ProblemSpec{2.0, 3.0, 1}));         // elastic
    CHECK(is_above_bound(ProblemSpec{2.0, 17.0 / 8.0, 2}));  // exactly critical
    CHECK_FALSE(is_above_bound(ProblemSpec{4.0, 17.0 / 8.0, 2}));
    // The boundary case counts as above even a hair below, within 1e-12.
    CHECK(is_above_bound(ProblemSpec{2.0, (17.0 / 8.0) * (1.0 - 1e-13), 2}));
}

TEST_CASE("critical_radius inverts the bound") {
    CHECK(critical_radius(17.0 / 8.0, 2) == Catch::Approx(2.0).epsilon(1e-13));
    CHECK(critical_radius(1.0, 1) == 1.0);
    CHECK(critical_radius(1.0, 4) == 1.0);
    CHECK(critical_radius(1.25, 1) == Catch::Approx(2.0).epsilon(1e-13));
    CHECK_THROWS_AS(critical_radius(0.99, 2), InvalidTarget);
}

TEST_CASE("critical_radius agrees with a bisection oracle and is monotone") {
    const int j = 3;
    double prev = 1.0;
    for (double R : {1.01, 1.5, 2.0, 5.0, 9.0}) {
        // Bisection on nitsche_rhs(., j) = R.
        double lo = 1.0 + 1e-15, hi = 64.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (nitsche_rhs(mid, j) < R ? lo : hi) = mid;
        }
        const double rc = critical_radius(R, j);
        CHECK(rc == Catch::Approx(0.5 * (lo + hi)).epsilon(1e-12));
        CHECK(nitsche_rhs(rc, j) == Catch::Approx(R).epsilon(1e-12));
        CHECK(rc > prev);
        prev = rc;
    }
}
