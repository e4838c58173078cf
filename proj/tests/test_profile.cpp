#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "annuli/problem.hpp"
#include "annuli/radial_profile.hpp"
#include "support.hpp"

using namespace annuli;

TEST_CASE("solve_radial reproduces the known profiles") {
    SECTION("critical case r=2, R=17/8, j=2") {
        const auto p = solve_radial(ProblemSpec{2.0, 17.0 / 8.0, 2});
        CHECK(p.A == Catch::Approx(0.5).margin(1e-15));
        CHECK(p.B == Catch::Approx(0.5).margin(1e-15));
        CHECK(p.c1 == Catch::Approx(-4.0).margin(1e-14));  // c1 = -j^2 at the bound
        CHECK(p.regime == Regime::NonElastic);
    }
    SECTION("conformal case r=2, R=4, j=2") {
        const auto p = solve_radial(ProblemSpec{2.0, 4.0, 2});
        CHECK(p.A == 1.0);
        CHECK(p.B == 0.0);
        CHECK(p.c1 == 0.0);
        CHECK(p.regime == Regime::Conformal);
    }
    SECTION("elastic case r=2, R=3, j=1") {
        const auto p = solve_radial(ProblemSpec{2.0, 3.0, 1});
        CHECK(p.A + p.B == Catch::Approx(1.0).margin(1e-15));
        CHECK(p.A * 2.0 + p.B / 2.0 == Catch::Approx(3.0).margin(1e-14));
        CHECK(p.c1 > 0.0);
        CHECK(p.regime == Regime::Elastic);
    }
}

TEST_CASE("c1 closed form agrees with -4 j^2 A B over random problems") {
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 10000; ++trial) {
        const double r = 1.001 + 8.999 * testsupport::uniform01(rng);
        const double R = 1.0 + 9.0 * testsupport::uniform01(rng);
        const int j = 1 + static_cast<int>(6.0 * testsupport::uniform01(rng));
        const ProblemSpec s{r, R, j};
        const auto p = solve_radial(s);  // throws if the two routes disagree
        const double closed = detail::c1_closed_form(r, R, j);
        REQUIRE(std::abs(p.c1 - closed) <= 1e-12 * std::max(1.0, std::abs(closed)));
        REQUIRE(p.c1 >= -static_cast<double>(j) * j * (1.0 + 1e-12));
        // The textbook sum form of the numerator agrees wherever it is
        // well conditioned.
        if (r > 1.05) {
            const double rj = std::pow(r, j);
            const double diff = rj - 1.0 / rj;
            const double sum_form =
                4.0 * j * j * (1.0 + R * R - R * (rj + 1.0 / rj)) / (diff * diff);
            REQUIRE(std::abs(p.c1 - sum_form) <= 1e-10 * std::max(1.0, std::abs(p.c1)));
        }
    }
}

TEST_CASE("profile_eval satisfies the radial ODE") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 200; ++trial) {
        const double r = 1.001 + 8.999 * testsupport::uniform01(rng);
        const double R = 1.0 + 9.0 * testsupport::uniform01(rng);
        const int j = 1 + static_cast<int>(6.0 * testsupport::uniform01(rng));
        const auto p = solve_radial(ProblemSpec{r, R, j});
        for (int i = 0; i <= 16; ++i) {
            const double t = std::exp(std::log(r) * i / 16.0);
            const auto d = profile_eval(p, t);
            const double residual = -j * j * d.g + t * d.dg + t * t * d.d2g;
            REQUIRE(std::abs(residual) <= 1e-10 * (1.0 + std::abs(d.g)));
            // First integral: t^2 G'^2 = j^2 G^2 + c1.
            REQUIRE(t * t * d.dg * d.dg ==
                    Catch::Approx(j * j * d.g * d.g + p.c1).margin(1e-9 * (1 + d.g * d.g)));
        }
    }
}

TEST_CASE("profile_eval known values") {
    const auto crit = critical_profile(2);
    const auto at1 = profile_eval(crit, 1.0);
    CHECK(at1.g == 1.0);
    CHECK(at1.dg == 0.0);
    const auto at2 = profile_eval(crit, 2.0);
    CHECK(at2.g == Catch::Approx(17.0 / 8.0).margin(1e-15));
    CHECK(at2.dg == Catch::Approx(15.0 / 8.0).margin(1e-15));

    const auto conf = solve_radial(ProblemSpec{2.0, 4.0, 2});
    const auto c = profile_eval(conf, 1.5);
    CHECK(c.g == Catch::Approx(2.25).margin(1e-15));
    CHECK(c.dg == Catch::Approx(3.0).margin(1e-15));

    CHECK_THROWS_AS(profile_eval(crit, 0.0), std::domain_error);
    CHECK_THROWS_AS(profile_eval(crit, -1.0), std::domain_error);
}

TEST_CASE("profile derivatives agree with finite differences") {
    const auto p = solve_radial(ProblemSpec{3.0, 2.0, 2});
    const double h = 1e-6;
    for (double t : {1.1, 1.7, 2.4, 2.9}) {
        const auto d = profile_eval(p, t);
        const auto dp = profile_eval(p, t + h);
        const auto dm = profile_eval(p, t - h);
        CHECK(d.dg == Catch::Approx((dp.g - dm.g) / (2 * h)).margin(1e-7));
        CHECK(d.d2g == Catch::Approx((dp.g - 2 * d.g + dm.g) / (h * h)).margin(1e-3));
    }
}

TEST_CASE("profile_invert is the inverse of G") {
    SECTION("conformal: F inverts t^j directly") {
        const auto p = solve_radial(ProblemSpec{2.0, 4.0, 2});
        CHECK(profile_invert(p, 4.0) == Catch::Approx(2.0).margin(1e-14));
        CHECK(profile_invert(p, 1.0) == 1.0);
    }
    SECTION("critical: quadratic branch") {
        const auto p = critical_profile(2);
        CHECK(profile_invert(p, 17.0 / 8.0) == Catch::Approx(2.0).margin(1e-13));
        CHECK(profile_invert(p, 1.0) == Catch::Approx(1.0).margin(1e-13));
    }
    SECTION("F(G(t)) = t across random above-bound problems") {
        std::mt19937_64 rng(31);
        int tested = 0;
        while (tested < 2000) {
            const double r = 1.001 + 8.999 * testsupport::uniform01(rng);
            const double R = 1.0 + 9.0 * testsupport::uniform01(rng);
            const int j = 1 + static_cast<int>(6.0 * testsupport::uniform01(rng));
            const ProblemSpec s{r, R, j};
            if (!is_above_bound(s)) continue;
            ++tested;
            const auto p = solve_radial(s);
            for (int i = 0; i <= 8; ++i) {
                const double t = std::exp(std::log(r) * i / 8.0);
                const double back = profile_invert(p, profile_eval(p, t).g);
                REQUIRE(back == Catch::Approx(t).margin(1e-10 * t));
            }
        }
    }
    SECTION("inversion below the band or on a non-monotone profile fails") {
        const auto p = critical_profile(2);
        CHECK_THROWS_AS(profile_invert(p, 0.5), std::out_of_range);
        const auto below = solve_radial(ProblemSpec{4.0, 17.0 / 8.0, 2});
        CHECK_FALSE(below.monotone());
        CHECK_THROWS_AS(profile_invert(below, 1.5), std::domain_error);
    }
}

TEST_CASE("logarithmic derivative of the inverse") {
    // F'(s)/F(s) = 1 / sqrt(j^2 s^2 + c1), with F' both closed-form
    // (1/G'(F(s))) and by central differences.
    std::mt19937_64 rng(9);
    int tested = 0;
    while (tested < 300) {
        const double r = 1.001 + 8.999 * testsupport::uniform01(rng);
        const double R = 1.0 + 9.0 * testsupport::uniform01(rng);
        const int j = 1 + static_cast<int>(6.0 * testsupport::uniform01(rng));
        const ProblemSpec s{r, R, j};
        if (!is_above_bound(s)) continue;
        const auto p = solve_radial(s);
        if (p.A - p.B < 1e-3) continue;  // keep G' bounded away from 0 at t=1
        ++tested;
        for (int i = 1; i <= 6; ++i) {
            const double svalue = 1.0 + (R - 1.0) * i / 7.0;
            const double t = profile_invert(p, svalue);
            // F'(s)/F(s) = 1/(t G'(t)) = 1/sqrt(j^2 s^2 + c1).
            const double closed = 1.0 / (t * profile_eval(p, t).dg);
            REQUIRE(closed == Catch::Approx(inverse_log_derivative(p, svalue)).margin(1e-10));
            const double h = 1e-5 * svalue;
            const double fd =
                (profile_invert(p, svalue + h) - profile_invert(p, svalue - h)) / (2.0 * h);
            REQUIRE(fd / t == Catch::Approx(inverse_log_derivative(p, svalue))
                                  .margin(1e-10 + 1e2 * h * h));
        }
    }
}

TEST_CASE("G is monotone on the band iff the bound holds") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 2000; ++trial) {
        const double r = 1.001 + 8.999 * testsupport::uniform01(rng);
        const double R = 1.0 + 9.0 * testsupport::uniform01(rng);
        const int j = 1 + static_cast<int>(6.0 * testsupport::uniform01(rng));
        const ProblemSpec s{r, R, j};
        const auto p = solve_radial(s);
        bool increasing = true;
        for (int i = 0; i <= 24; ++i) {
            const double t = std::exp(std::log(r) * i / 24.0);
            if (profile_eval(p, t).dg < -1e-12) increasing = false;
        }
        if (is_above_bound(s)) {
            REQUIRE(increasing);
            REQUIRE(p.monotone());
        } else {
            REQUIRE_FALSE(p.monotone());
            REQUIRE(profile_eval(p, 1.0).dg < 0.0);
        }
    }
}

TEST_CASE("integral identity: int_1^{G(t)} ds/sqrt(j^2 s^2 + c1) = log t") {
    SECTION("closed antiderivative") {
        for (auto spec : {ProblemSpec{2.0, 3.0, 2}, ProblemSpec{2.0, 17.0 / 8.0, 2},
                          ProblemSpec{3.0, 2.0, 1}}) {
            const auto p = solve_radial(spec);
            for (int i = 1; i <= 8; ++i) {
                const double t = std::exp(std::log(spec.r) * i / 8.0);
                const double g = profile_eval(p, t).g;
                REQUIRE(log_radius_integral(p, g) == Catch::Approx(std::log(t)).margin(1e-12));
            }
        }
    }
    SECTION("numeric quadrature, non-critical profile") {
        const auto p = solve_radial(ProblemSpec{2.0, 3.0, 2});  // elastic, smooth integrand
        const double t = 1.7;
        const double g = profile_eval(p, t).g;
        const double quad = testsupport::simpson(
            [&](double s) { return 1.0 / std::sqrt(p.j * p.j * s * s + p.c1); }, 1.0, g, 20000);
        REQUIRE(quad == Catch::Approx(std::log(t)).margin(1e-10));
    }
}

TEST_CASE("closed G^2/t integral matches quadrature") {
    for (auto spec : {ProblemSpec{2.0, 17.0 / 8.0, 2}, ProblemSpec{2.0, 4.0, 2},
                      ProblemSpec{2.0, 3.0, 1}, ProblemSpec{4.0, 17.0 / 8.0, 2}}) {
        const auto p = solve_radial(spec);
        const double quad = testsupport::simpson(
            [&](double t) {
                const double g = profile_eval(p, t).g;
                return g * g / t;
            },
            1.0, spec.r, 40000);
        REQUIRE(integral_g2_over_t(p, spec.r) == Catch::Approx(quad).epsilon(1e-11));
    }
}
