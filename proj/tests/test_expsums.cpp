#include "shiftconv/expsums.hpp"

#include "shiftconv/arith.hpp"
#include "shiftconv/forms.hpp"
#include "shiftconv/numerics.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numeric>
#include <random>

using namespace shiftconv;

TEST_CASE("kloosterman trivial cases") {
    CHECK(kloosterman(3, 5, 1) == doctest::Approx(1.0).epsilon(1e-14));
    // S(0,0;q) = phi(q)
    const ArithTables t = build_tables(50);
    for (std::int64_t q : {1, 2, 12, 36, 49})
        CHECK(kloosterman(0, 0, q) ==
              doctest::Approx(static_cast<double>(t.phi(q))).epsilon(1e-12));
    // q = 2: single residue a = 1, phase e((m+n)/2)
    CHECK(kloosterman(1, 1, 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kloosterman(1, 0, 2) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("kloosterman symmetry and twisted multiplicativity") {
    for (std::int64_t q : {5, 7, 12, 35}) {
        const ResidueTables rt(q);
        for (std::int64_t m = 0; m <= 10; ++m)
            for (std::int64_t n = 0; n <= 10; ++n)
                CHECK(rt.kloosterman(m, n) ==
                      doctest::Approx(rt.kloosterman(n, m)).epsilon(1e-9));
    }
    // S(m, n; q1 q2) = S(m qbar2^2, n; q1) S(m qbar1^2, n; q2), (q1, q2) = 1
    for (std::int64_t q1 : {3, 5, 8}) {
        for (std::int64_t q2 : {7, 11}) {
            if (std::gcd(q1, q2) != 1) continue;
            const std::int64_t qb2 = mod_inverse(q2, q1);
            const std::int64_t qb1 = mod_inverse(q1, q2);
            for (std::int64_t m = 1; m <= 4; ++m)
                for (std::int64_t n = 1; n <= 4; ++n) {
                    const double lhs = kloosterman(m, n, q1 * q2);
                    const double rhs =
                        kloosterman(m * qb2 * qb2 % q1, n, q1) *
                        kloosterman(m * qb1 * qb1 % q2, n, q2);
                    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
                }
        }
    }
}

TEST_CASE("Weil-type magnitude monitoring at primes") {
    // recorded observation, not a proof: |S(1,1;p)| <= 2 sqrt(p)
    const ArithTables t = build_tables(2000);
    for (std::int64_t p = 2; p <= 2000; ++p) {
        if (t.smallest_prime_factor[static_cast<std::size_t>(p)] != p) continue;
        CHECK(std::abs(kloosterman(1, 1, p)) <=
              2.0 * std::sqrt(static_cast<double>(p)) + 1e-9);
    }
}

TEST_CASE("ramanujan sums: divisor formula vs Kloosterman path") {
    CHECK(ramanujan_sum(1, 5) == 1);
    CHECK(ramanujan_sum(1, 0) == 1);
    CHECK(ramanujan_sum(2, 1) == -1);
    const ArithTables t = build_tables(300);
    for (std::int64_t q : {2, 3, 4, 9, 10, 49, 60})
        CHECK(ramanujan_sum(q, 0) == static_cast<std::int64_t>(t.phi(q)));
    // the cross-check against S(f, 0; q) runs inside ramanujan_sum itself
    for (std::int64_t q = 1; q <= 40; ++q)
        for (std::int64_t f = -6; f <= 40; ++f) CHECK_NOTHROW(ramanujan_sum(q, f));
}

TEST_CASE("Iwaniec-style triple sum stays under its envelope on small instances") {
    // M = N = Q = 8, unit coefficients, smooth g; envelope
    // Q^{1+eps} (MN)^{1/2} (sum|a|^2 sum|b|^2)^{1/2} with a generous constant
    const double kSuiteConstant = 10.0;
    const SmoothBump gm = make_bump(8.0, 10.0, 14.0, 16.0, 1.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        double am[17], bn[17];
        double a2 = 0.0, b2 = 0.0;
        for (int i = 9; i <= 16; ++i) {
            am[i] = unif(rng);
            bn[i] = unif(rng);
            a2 += am[i] * am[i];
            b2 += bn[i] * bn[i];
        }
        double sum = 0.0;
        for (int q = 9; q <= 16; ++q) {
            const ResidueTables rt(q);
            for (int m = 9; m <= 16; ++m)
                for (int n = 9; n <= 16; ++n)
                    sum += am[m] * bn[n] * gm.value(m) * gm.value(n) *
                           gm.value(q) * rt.kloosterman(m, n);
        }
        const double envelope =
            std::pow(8.0, 1.05) * 8.0 * std::sqrt(a2 * b2);
        CHECK(std::abs(sum) <= kSuiteConstant * envelope);
    }
}

TEST_CASE("exp_sum_S weighted coefficient sums") {
    const HeckeCoeffTable form = holomorphic_form(64);
    const SmoothBump W = make_bump(10.0, 12.0, 18.0, 20.0, 1.0);

    // x = 0: all phases are 1
    double plain = 0.0;
    for (int m = 10; m <= 20; ++m) plain += W.value(m) * form.t[m];
    const std::complex<double> at0 = exp_sum_S(W, form, 0.0);
    CHECK(at0.real() == doctest::Approx(plain).epsilon(1e-14));
    CHECK(at0.imag() == doctest::Approx(0.0).epsilon(1e-14));

    // conjugation under x -> -x
    const std::complex<double> plus = exp_sum_S(W, form, 0.37);
    const std::complex<double> minus = exp_sum_S(W, form, -0.37);
    CHECK(plus.real() == doctest::Approx(minus.real()).epsilon(1e-12));
    CHECK(plus.imag() == doctest::Approx(-minus.imag()).epsilon(1e-12));

    // period 1 in x
    const std::complex<double> shifted = exp_sum_S(W, form, 1.37);
    CHECK(std::abs(plus - shifted) < 1e-9);

    // three-point weight against a hand-rolled sum at x = 0.25
    const SmoothBump tiny = make_bump(4.5, 5.5, 6.5, 7.5, 1.0);
    std::complex<double> byhand(0.0, 0.0);
    for (int m = 5; m <= 7; ++m)
        byhand += tiny.value(m) * form.t[m] *
                  std::exp(std::complex<double>(0.0, 2.0 * kPi * m * 0.25));
    CHECK(std::abs(exp_sum_S(tiny, form, 0.25) - byhand) < 1e-13);

    // support beyond the table errors out
    const SmoothBump wide = make_bump(50.0, 60.0, 70.0, 80.0, 1.0);
    CHECK_THROWS_AS(exp_sum_S(wide, form, 0.0), std::out_of_range);
}
