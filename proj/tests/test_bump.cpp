#include "shiftconv/bump.hpp"

#include "shiftconv/numerics.hpp"

#include <doctest.h>

#include <cmath>

using namespace shiftconv;

TEST_CASE("make_bump shape, plateau, support") {
    CHECK_THROWS_AS(make_bump(1.0, 0.5, 2.0, 3.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_bump(1.0, 1.5, 2.0, 3.0, 0.0), std::invalid_argument);

    const SmoothBump b = make_bump(1.0, 1.5, 2.5, 3.0, 2.0);
    CHECK(b.value(0.0) == 0.0);
    CHECK(b.value(-0.5) == 0.0);
    CHECK(b.value(3.5) == 0.0);
    CHECK(b.value(2.0) == 2.0);
    CHECK(b.value((1.5 + 2.5) / 2.0) == 2.0);
    for (double x = 0.5; x <= 3.5; x += 0.01) {
        CHECK(b.value(x) >= 0.0);
        CHECK(b.value(x) <= 2.0 + 1e-15);
    }
    // integral between plateau mass and support mass
    const double integral =
        gl_composite([&](double x) { return b.value(x); }, 1.0, 3.0, 256);
    CHECK(integral > 2.0 * (2.5 - 1.5));
    CHECK(integral < 2.0 * (3.0 - 1.0));
}

TEST_CASE("bump derivatives: analytic vs central differences") {
    const SmoothBump b = make_bump(0.0, 1.0, 2.0, 4.0, 1.5);
    const double h = 1e-6;
    for (double x : {0.3, 0.7, 0.95, 2.2, 3.1, 3.8}) {
        const double fd1 = (b.value(x + h) - b.value(x - h)) / (2.0 * h);
        CHECK(b.derivative(x, 1) == doctest::Approx(fd1).epsilon(1e-6));
        const double fd2 =
            (b.value(x + h) - 2.0 * b.value(x) + b.value(x - h)) / (h * h);
        CHECK(b.derivative(x, 2) == doctest::Approx(fd2).epsilon(1e-4));
    }
    // order-3 falls back to finite differences and stays finite
    CHECK(std::isfinite(b.derivative(0.5, 3)));
}

TEST_CASE("derivative bounds scale with the transition width") {
    // |g'| <= C1/w and |g''| <= C2/w^2 on a dense grid; constants recorded
    const double kC1 = 4.0, kC2 = 16.0;
    for (double w : {0.1, 0.02}) {
        const SmoothBump g = make_bump(1.0, 1.0 + w, 1.5, 1.5 + w, 1.0);
        double d1 = 0.0, d2 = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const double x = 0.95 + (0.6 + 2.0 * w) * i / 9999.0;
            d1 = std::max(d1, std::abs(g.derivative(x, 1)));
            d2 = std::max(d2, std::abs(g.derivative(x, 2)));
        }
        CHECK(d1 <= kC1 / w);
        CHECK(d2 <= kC2 / (w * w));
    }
}

TEST_CASE("make_nu normalization and support") {
    CHECK_THROWS_AS(make_nu(0.5), std::invalid_argument);
    CHECK_THROWS_AS(make_nu(0.0), std::invalid_argument);

    for (double delta : {0.1, 0.25, 0.02}) {
        const NuFunction nu = make_nu(delta);
        CHECK(nu.value(0.0) == 0.0);
        CHECK(nu.value(-delta * 1.01) == 0.0);
        CHECK(nu.value(-delta * 0.49) == 0.0);
        // (1/(2 delta)) integral == 1 to 1e-10, independent quadrature
        const double integral = gl_composite(
            [&](double x) { return nu.value(x); }, -delta, -delta / 2.0, 1024);
        CHECK(integral / (2.0 * delta) == doctest::Approx(1.0).epsilon(1e-10));
    }

    // realized height for delta = 0.1 against a quadrature of the raw shape:
    // height = 2*delta / integral(unit bump)
    const NuFunction nu = make_nu(0.1);
    const SmoothBump unit = make_bump(-0.1, -0.1 + 0.1 / 8.0,
                                      -0.05 - 0.1 / 8.0, -0.05, 1.0);
    const double unit_integral = gl_composite(
        [&](double x) { return unit.value(x); }, -0.1, -0.05, 1024);
    CHECK(nu.realized_height ==
          doctest::Approx(0.2 / unit_integral).epsilon(1e-10));
}

TEST_CASE("dyadic partition telescopes to the indicator of [1,2]") {
    const double U1 = 1.0 / 16.0;
    const auto bumps = dyadic_partition(U1);

    // count within [log2(1/U1), log2(1/U1) + 2]
    const double lg = std::log2(1.0 / U1);
    CHECK(static_cast<double>(bumps.size()) >= lg);
    CHECK(static_cast<double>(bumps.size()) <= lg + 2.0);

    // supports inside [1, 2]
    for (const auto& g : bumps) {
        CHECK(g.support_lo() >= 1.0 - 1e-12);
        CHECK(g.support_hi() <= 2.0 + 1e-12);
    }

    // sum == 1 away from the outermost edges, and slopes cancel on overlaps
    auto total = [&](double x) {
        double s = 0.0;
        for (const auto& g : bumps) s += g.value(x);
        return s;
    };
    CHECK(total(1.5) == doctest::Approx(1.0).epsilon(1e-12));
    const double edge0 = bumps.front().plateau_lo();
    const double edge1 = bumps.back().plateau_hi();
    for (int i = 0; i <= 2000; ++i) {
        const double x = edge0 + (edge1 - edge0) * i / 2000.0;
        CHECK(std::abs(total(x) - 1.0) < 1e-8);
    }
    // sup error outside Delta-neighbourhoods of the endpoints is <= C*U1;
    // here the sum is exactly 1 inside and 0 outside the edges
    CHECK(total(1.0 - 1e-9) == 0.0);
    CHECK(total(2.0 + 1e-9) == 0.0);
}

TEST_CASE("dyadic partition counts stay in the window across U1") {
    for (double U1 : {1.0 / 16.0, 1.0 / 64.0, 1.0 / 256.0, 0.25, 0.2, 0.07}) {
        const auto bumps = dyadic_partition(U1);
        const double lg = std::log2(1.0 / U1);
        CHECK(static_cast<double>(bumps.size()) >= std::max(2.0, lg) - 1e-9);
        CHECK(static_cast<double>(bumps.size()) <= lg + 2.0 + 1e-9);
        // derivative bounds per bump scale, constants recorded
        for (const auto& g : bumps) {
            const double w = g.transition_width();
            double d1 = 0.0;
            for (int i = 0; i < 2000; ++i) {
                const double x = g.support_lo() +
                                 (g.support_hi() - g.support_lo()) * i / 1999.0;
                d1 = std::max(d1, std::abs(g.derivative(x, 1)));
            }
            CHECK(d1 <= 4.0 / w);
        }
    }
    CHECK_THROWS_AS(dyadic_partition(0.3), std::invalid_argument);
    CHECK_THROWS_AS(dyadic_partition(0.0), std::invalid_argument);
}
