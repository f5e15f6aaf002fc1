#include "shiftconv/expsums.hpp"

#include "shiftconv/arith.hpp"
#include "shiftconv/forms.hpp"
#include "shiftconv/numerics.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace shiftconv {

ResidueTables::ResidueTables(std::int64_t q) : q_(q) {
    if (q < 1) throw std::invalid_argument("ResidueTables: q must be >= 1");
    units_.reserve(static_cast<std::size_t>(q));
    for (std::int64_t a = 1; a <= q; ++a) {
        if (std::gcd(a, q) == 1) {
            units_.push_back(a % q);
            inverses_.push_back(mod_inverse(a, q));
        }
    }
    cos_.resize(static_cast<std::size_t>(q));
    sin_.resize(static_cast<std::size_t>(q));
    for (std::int64_t j = 0; j < q; ++j) {
        const double ang = kTwoPi * static_cast<double>(j) / static_cast<double>(q);
        cos_[j] = std::cos(ang);
        sin_[j] = std::sin(ang);
    }
}

double ResidueTables::kloosterman(std::int64_t m, std::int64_t n) const {
    std::int64_t mr = m % q_; if (mr < 0) mr += q_;
    std::int64_t nr = n % q_; if (nr < 0) nr += q_;
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < units_.size(); ++i) {
        const std::int64_t idx = (mr * units_[i] + nr * inverses_[i]) % q_;
        re += cos_[idx];
        im += sin_[idx];
    }
    const double tol = 1e-8 * std::max<double>(1.0, static_cast<double>(phi()));
    if (std::abs(im) >= tol)
        throw std::runtime_error(
            "kloosterman: imaginary part " + std::to_string(im) +
            " exceeds tolerance at q=" + std::to_string(q_));
    return re;
}

double kloosterman(std::int64_t m, std::int64_t n, std::int64_t q) {
    return ResidueTables(q).kloosterman(m, n);
}

std::int64_t ramanujan_sum(std::int64_t q, std::int64_t f) {
    if (q < 1) throw std::invalid_argument("ramanujan_sum: q must be >= 1");
    const std::int64_t g = (f == 0) ? q : std::gcd(q, std::abs(f));

    // mu(q/d) by trial factorization of q/d; q stays small in practice
    auto mobius_of = [](std::int64_t v) -> std::int64_t {
        std::int64_t mu = 1;
        for (std::int64_t p = 2; p * p <= v; ++p) {
            if (v % p) continue;
            v /= p;
            if (v % p == 0) return 0;
            mu = -mu;
        }
        if (v > 1) mu = -mu;
        return mu;
    };

    std::int64_t sum = 0;
    for (std::int64_t d = 1; d * d <= g; ++d) {
        if (g % d) continue;
        const std::int64_t e = g / d;
        if (q % d == 0) sum += d * mobius_of(q / d);
        if (e != d && q % e == 0) sum += e * mobius_of(q / e);
    }

    const double cross = kloosterman(f, 0, q);
    if (std::abs(cross - static_cast<double>(sum)) > 1e-6)
        throw std::runtime_error(
            "ramanujan_sum: divisor formula " + std::to_string(sum) +
            " disagrees with Kloosterman path " + std::to_string(cross) +
            " at q=" + std::to_string(q) + ", f=" + std::to_string(f));
    return sum;
}

std::complex<double> exp_sum_S(const SmoothBump& W,
                               const HeckeCoeffTable& coeffs, double x) {
    const double lo = W.support_lo(), hi = W.support_hi();
    std::int64_t m0 = static_cast<std::int64_t>(std::ceil(lo));
    if (m0 < 1) m0 = 1;
    const std::int64_t m1 = static_cast<std::int64_t>(std::floor(hi));
    if (m1 > static_cast<std::int64_t>(coeffs.n_max))
        throw std::out_of_range(
            "exp_sum_S: weight support reaches " + std::to_string(m1) +
            " but the coefficient table ends at " + std::to_string(coeffs.n_max));
    std::complex<double> sum(0.0, 0.0);
    for (std::int64_t m = m0; m <= m1; ++m) {
        const double w = W.value(static_cast<double>(m));
        if (w == 0.0) continue;
        sum += w * coeffs.t[static_cast<std::size_t>(m)] *
               unit_phase(static_cast<double>(m) * x);
    }
    return sum;
}

}  // namespace shiftconv
