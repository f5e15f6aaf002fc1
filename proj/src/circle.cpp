#include "shiftconv/circle.hpp"

#include "shiftconv/expsums.hpp"
#include "shiftconv/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace shiftconv {

namespace {

// a_beta = int nu(y) e(beta y) dy over the nu support; oscillation-aware
// panel count.
std::complex<double> nu_fourier_coeff(const NuFunction& nu, std::int64_t beta) {
    const double s0 = nu.bump.support_lo(), s1 = nu.bump.support_hi();
    const std::size_t panels = static_cast<std::size_t>(
        8 + std::ceil(std::abs(static_cast<double>(beta)) * (s1 - s0)));
    const double b = static_cast<double>(beta);
    const auto re = gl_composite(
        [&](double y) { return nu.value(y) * std::cos(kTwoPi * b * y); },
        s0, s1, panels);
    const auto im = gl_composite(
        [&](double y) { return nu.value(y) * std::sin(kTwoPi * b * y); },
        s0, s1, panels);
    return {re, im};
}

}  // namespace

CircleApprox build_circle_approx(double Q, double delta2, int depth,
                                 int xi_cutoff) {
    if (!(Q >= 4.0))
        throw std::invalid_argument("build_circle_approx: Q must be >= 4");
    if (!(delta2 > 0.0 && delta2 < 1.0 / 3.0))
        throw std::invalid_argument("build_circle_approx: delta2 out of (0, 1/3)");
    if (depth < 1)
        throw std::invalid_argument("build_circle_approx: depth must be >= 1");

    CircleApprox ap;
    ap.Q = Q;
    ap.delta2 = delta2;
    ap.Delta = std::pow(Q, -1.0 + delta2);
    if (!(ap.Delta > 0.0 && ap.Delta < 1.0 / 3.0))
        throw std::invalid_argument(
            "build_circle_approx: resulting Delta out of (0, 1/3)");
    ap.depth = depth;
    ap.xi_cutoff = xi_cutoff > 0 ? xi_cutoff
                                 : 4 * static_cast<int>(std::ceil(Q));
    ap.cutoff_warning = ap.xi_cutoff < static_cast<int>(std::ceil(Q));

    // q-weight: plateau on [1.25 Q, 1.75 Q], height 1
    ap.w = make_bump(Q, 1.25 * Q, 1.75 * Q, 2.0 * Q, 1.0);
    ap.nu = make_nu(ap.Delta);

    const std::int64_t q_hi = static_cast<std::int64_t>(std::floor(2.0 * Q));
    const ArithTables tables =
        build_tables(static_cast<std::uint32_t>(q_hi) + 1);

    NeumaierSum lam;
    for (std::int64_t q = static_cast<std::int64_t>(std::ceil(Q)); q <= q_hi;
         ++q) {
        const double wq = ap.w.value(static_cast<double>(q));
        if (wq == 0.0) continue;
        lam.add(wq * static_cast<double>(tables.phi(q)));
    }
    ap.Lambda = lam.value();
    ap.lambda = 2.0 * ap.Delta * ap.Lambda;
    ap.lambda_over_Q2 = ap.Lambda / (Q * Q);

    // Fourier coefficients of nu and the E-expansion coefficients
    const int cut = ap.xi_cutoff;
    ap.a_beta.assign(2 * cut + 1, {0.0, 0.0});
    for (std::int64_t beta = -cut; beta <= cut; ++beta)
        ap.a_beta[static_cast<std::size_t>(beta + cut)] =
            nu_fourier_coeff(ap.nu, beta);

    ap.c_xi.assign(2 * cut + 1, {0.0, 0.0});
    for (std::int64_t xi = -cut; xi <= cut; ++xi) {
        if (xi == 0) continue;
        const std::int64_t axi = std::abs(xi);
        // divisors d of |xi| with d <= 2Q (w kills everything larger)
        std::vector<std::int64_t> divs;
        for (std::int64_t d = 1; d * d <= axi; ++d) {
            if (axi % d != 0) continue;
            if (d <= q_hi) divs.push_back(d);
            const std::int64_t e = axi / d;
            if (e != d && e <= q_hi) divs.push_back(e);
        }
        std::sort(divs.begin(), divs.end());
        NeumaierSum dsum;
        for (std::int64_t d : divs) {
            // r runs over Q <= d r <= 2Q with mu(r) != 0
            NeumaierSum rsum;
            const std::int64_t r_lo =
                static_cast<std::int64_t>(std::ceil(Q / static_cast<double>(d)));
            const std::int64_t r_hi = q_hi / d;
            for (std::int64_t r = std::max<std::int64_t>(1, r_lo); r <= r_hi;
                 ++r) {
                const int mu = tables.mu(static_cast<std::uint64_t>(r));
                if (mu == 0) continue;
                const double wdr = ap.w.value(static_cast<double>(d * r));
                if (wdr == 0.0) continue;
                rsum.add(mu * wdr);
            }
            dsum.add(static_cast<double>(d) * rsum.value());
        }
        ap.c_xi[static_cast<std::size_t>(xi + cut)] =
            -ap.a_at(-xi) / ap.lambda * dsum.value();
    }

    // depth-k coefficients by iterated truncated convolution of c
    ap.d_xi.assign(static_cast<std::size_t>(depth),
                   std::vector<std::complex<double>>(2 * cut + 1, {0.0, 0.0}));
    std::vector<std::complex<double>> level = ap.c_xi;  // C_1
    ap.d_xi[0] = level;  // d(1) = c, with c_0 = 0
    for (int k = 2; k <= depth; ++k) {
        std::vector<std::complex<double>> next(2 * cut + 1, {0.0, 0.0});
        for (std::int64_t xi = -cut; xi <= cut; ++xi) {
            std::complex<double> acc(0.0, 0.0);
            for (std::int64_t x1 = std::max<std::int64_t>(-cut, xi - cut);
                 x1 <= std::min<std::int64_t>(cut, xi + cut); ++x1) {
                if (x1 == 0 || x1 == xi) continue;  // c_0 = 0 on both factors
                acc += level[static_cast<std::size_t>(x1 + cut)] *
                       ap.c_xi[static_cast<std::size_t>(xi - x1 + cut)];
            }
            next[static_cast<std::size_t>(xi + cut)] = acc;
        }
        level.swap(next);
        for (std::size_t i = 0; i < level.size(); ++i)
            ap.d_xi[static_cast<std::size_t>(k - 1)][i] =
                ap.d_xi[static_cast<std::size_t>(k - 2)][i] + level[i];
    }

    // sorted rationals for fast chi* evaluation
    std::size_t count = 0;
    for (std::int64_t q = static_cast<std::int64_t>(std::ceil(Q)); q <= q_hi;
         ++q)
        if (ap.w.value(static_cast<double>(q)) != 0.0)
            count += static_cast<std::size_t>(tables.phi(q));
    ap.fracs.reserve(count);
    ap.frac_weights.reserve(count);
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(count);
    for (std::int64_t q = static_cast<std::int64_t>(std::ceil(Q)); q <= q_hi;
         ++q) {
        const double wq = ap.w.value(static_cast<double>(q));
        if (wq == 0.0) continue;
        for (std::int64_t a = 1; a <= q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            pairs.emplace_back(static_cast<double>(a) / static_cast<double>(q),
                               wq / ap.lambda);
        }
    }
    std::sort(pairs.begin(), pairs.end());
    for (const auto& pr : pairs) {
        ap.fracs.push_back(pr.first);
        ap.frac_weights.push_back(pr.second);
    }
    return ap;
}

double chi_star(const CircleApprox& ap, double x) {
    x -= std::floor(x);  // period 1
    // nu* (a/q - x) != 0 requires a/q in [x - Delta, x - Delta/2] (mod 1)
    const double lo = x - ap.Delta, hi = x - ap.Delta / 2.0;
    NeumaierSum sum;
    auto accumulate_range = [&](double a, double b) {
        // fractions lie in (0, 1); clip and binary-search
        if (b < 0.0 || a > 1.0) return;
        a = std::max(a, 0.0);
        b = std::min(b, 1.0);
        const auto first = std::lower_bound(ap.fracs.begin(), ap.fracs.end(),
                                            a - 1e-15);
        const auto last =
            std::upper_bound(ap.fracs.begin(), ap.fracs.end(), b + 1e-15);
        for (auto it = first; it != last; ++it) {
            const std::size_t i =
                static_cast<std::size_t>(it - ap.fracs.begin());
            double y = ap.fracs[i] - x;
            y -= std::floor(y);   // into [0, 1)
            y -= 1.0;             // into [-1, 0), where supp nu lives
            const double v = ap.nu.value(y);
            if (v != 0.0) sum.add(ap.frac_weights[i] * v);
        }
    };
    accumulate_range(lo, hi);
    accumulate_range(lo + 1.0, hi + 1.0);
    return sum.value();
}

double variance_V(const CircleApprox& ap, double rel_tol) {
    const auto f = [&](double x) {
        const double e = chi_star(ap, x) - 1.0;
        return e * e;
    };
    QuadratureOptions opt;
    opt.rel_tol = rel_tol;
    opt.abs_tol = 1e-14;
    // resolve the transition scale Delta/8 before trusting the doubling test
    opt.initial_panels = static_cast<std::size_t>(
        std::max(64.0, std::ceil(4.0 / ap.Delta)));
    opt.max_panels = (std::size_t(1) << 20);
    const QuadratureResult res = integrate_adaptive(f, 0.0, 1.0, opt);
    if (!res.converged)
        throw std::runtime_error(
            "variance_V: quadrature did not converge; last estimates " +
            std::to_string(res.value) + " and " +
            std::to_string(res.value - res.error_estimate));
    return res.value;
}

double e_sup_norm(const CircleApprox& ap, int grid_points) {
    if (grid_points < 1)
        throw std::invalid_argument("e_sup_norm: grid_points must be >= 1");
    double sup = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        const double x =
            (static_cast<double>(i) + 0.5) / static_cast<double>(grid_points);
        sup = std::max(sup, std::abs(1.0 - chi_star(ap, x)));
    }
    return sup;
}

// ---------------------------------------------------------------------------
// Shifted-coefficient problems
// ---------------------------------------------------------------------------

ShiftedCoeffProblem make_shifted_problem(const HeckeCoeffTable& coeffs,
                                         std::int64_t n, std::uint32_t L,
                                         double delta, double B) {
    if (L == 0) throw std::invalid_argument("make_shifted_problem: L must be >= 1");
    if (!(delta > 0.0 && delta <= 0.25))
        throw std::invalid_argument("make_shifted_problem: delta out of (0, 1/4]");
    if (!(B >= 1.0 && B + delta / 2.0 <= 2.0))
        throw std::invalid_argument("make_shifted_problem: B window leaves [1, 2]");

    ShiftedCoeffProblem pb;
    pb.coeffs = &coeffs;
    pb.n = n;
    pb.L = L;
    pb.delta = delta;

    const double Ld = static_cast<double>(L);
    const double nd = static_cast<double>(n);
    const double C = B + delta / 2.0;
    const double width = (C - B) * Ld;
    pb.W = make_bump(nd + B * Ld, nd + B * Ld + 0.25 * width,
                     nd + C * Ld - 0.25 * width, nd + C * Ld, 1.0);

    // W0 = 1 on [B L + n, (C + 4 delta) L + n], fading over delta L on each side
    const double b0 = (B - delta) * Ld + nd;
    const double c0 = (C + 5.0 * delta) * Ld + nd;
    pb.W0 = make_bump(b0, B * Ld + nd, (C + 4.0 * delta) * Ld + nd, c0, 1.0);

    pb.m_lo = static_cast<std::int64_t>(std::ceil(pb.W.support_lo()));
    pb.m_hi = static_cast<std::int64_t>(std::floor(pb.W.support_hi()));
    if (pb.m_lo < 1 || pb.m_hi < pb.m_lo)
        throw std::invalid_argument("make_shifted_problem: empty integer window");
    // b_f needs m + f inside supp W0
    pb.f_lo = static_cast<std::int64_t>(std::floor(pb.W0.support_lo())) - pb.m_hi;
    pb.f_hi = static_cast<std::int64_t>(std::ceil(pb.W0.support_hi())) - pb.m_lo;

    const std::int64_t top = pb.m_hi + std::max<std::int64_t>(pb.f_hi, 0);
    if (top > static_cast<std::int64_t>(coeffs.n_max))
        throw std::out_of_range(
            "make_shifted_problem: window reaches " + std::to_string(top) +
            " beyond the coefficient table (" + std::to_string(coeffs.n_max) + ")");
    return pb;
}

std::complex<double> ShiftedCoeffProblem::psi(double x) const {
    return exp_sum_S(W0, *coeffs, x) * exp_sum_S(W, *coeffs, -x);
}

double ShiftedCoeffProblem::psi_sup_norm() const {
    double sup = 0.0;
    for (int i = 0; i < 4096; ++i) {
        const double x = (i + 0.5) / 4096.0;
        sup = std::max(sup, std::abs(psi(x)));
    }
    return sup;
}

double b_f_direct(const ShiftedCoeffProblem& pb, std::int64_t f) {
    const HeckeCoeffTable& c = *pb.coeffs;
    NeumaierSum sum;
    for (std::int64_t m = pb.m_lo; m <= pb.m_hi; ++m) {
        const double wm = pb.W.value(static_cast<double>(m));
        if (wm == 0.0) continue;
        const std::int64_t mf = m + f;
        if (mf < 1 || mf > static_cast<std::int64_t>(c.n_max)) continue;
        const double w0 = pb.W0.value(static_cast<double>(mf));
        if (w0 == 0.0) continue;
        sum.add(c.t[static_cast<std::size_t>(m)] *
                c.t[static_cast<std::size_t>(mf)] * wm * w0);
    }
    return sum.value();
}

double b_f_star(const ShiftedCoeffProblem& pb, const CircleApprox& ap,
                std::int64_t f) {
    // b*_f = b_f - sum_{xi != 0} c_xi b_{f+xi}; b vanishes outside
    // [f_lo, f_hi], which truncates the sum far inside the cutoff.
    std::complex<double> acc(b_f_direct(pb, f), 0.0);
    const std::int64_t xi_lo = std::max<std::int64_t>(-ap.xi_cutoff, pb.f_lo - f);
    const std::int64_t xi_hi = std::min<std::int64_t>(ap.xi_cutoff, pb.f_hi - f);
    for (std::int64_t xi = xi_lo; xi <= xi_hi; ++xi) {
        if (xi == 0) continue;
        const std::complex<double> cxi = ap.c_at(xi);
        if (cxi == std::complex<double>(0.0, 0.0)) continue;
        acc -= cxi * b_f_direct(pb, f + xi);
    }
    return acc.real();
}

double b_f_star_direct(const ShiftedCoeffProblem& pb, const CircleApprox& ap,
                       std::int64_t f) {
    // (1/lambda) sum_q w(q) sum_(a,q)=1 int nu(a/q - x) psi(x) e(-fx) dx,
    // substituted y = a/q - x so the window is the nu support.
    const double s0 = ap.nu.bump.support_lo(), s1 = ap.nu.bump.support_hi();
    const double fd = static_cast<double>(f);
    // psi carries frequencies up to the window edge; resolve e(-fx) and psi
    const double freq =
        std::abs(fd) + static_cast<double>(std::max(std::abs(pb.m_hi),
                                                    std::abs(pb.m_lo)));
    const std::size_t panels =
        static_cast<std::size_t>(8 + std::ceil(2.0 * freq * (s1 - s0)));
    NeumaierSum re;
    for (std::size_t i = 0; i < ap.fracs.size(); ++i) {
        const double aq = ap.fracs[i];
        const double wt = ap.frac_weights[i];
        const auto integrand = [&](double y) {
            const double x = aq - y;
            const std::complex<double> val =
                pb.psi(x) * unit_phase(-fd * x) * ap.nu.value(y);
            return val.real();
        };
        re.add(wt * gl_composite(integrand, s0, s1, panels));
    }
    return re.value();
}

double lemma1_residual(const ShiftedCoeffProblem& pb, const CircleApprox& ap,
                       std::int64_t f, int k) {
    if (k < 1 || k > ap.depth)
        throw std::invalid_argument("lemma1_residual: depth k out of range");
    const std::int64_t cut = ap.xi_cutoff;

    // cache b over every index the reconstruction can touch
    const std::int64_t g_lo = f - 2 * cut, g_hi = f + 2 * cut;
    std::vector<double> b(static_cast<std::size_t>(g_hi - g_lo + 1), 0.0);
    for (std::int64_t g = std::max(g_lo, pb.f_lo);
         g <= std::min(g_hi, pb.f_hi); ++g)
        b[static_cast<std::size_t>(g - g_lo)] = b_f_direct(pb, g);
    auto b_at = [&](std::int64_t g) -> double {
        if (g < g_lo || g > g_hi) return 0.0;
        return b[static_cast<std::size_t>(g - g_lo)];
    };

    auto bstar_at = [&](std::int64_t g) -> double {
        std::complex<double> acc(b_at(g), 0.0);
        const std::int64_t xi_lo = std::max<std::int64_t>(-cut, pb.f_lo - g);
        const std::int64_t xi_hi = std::min<std::int64_t>(cut, pb.f_hi - g);
        for (std::int64_t xi = xi_lo; xi <= xi_hi; ++xi) {
            if (xi == 0) continue;
            acc -= ap.c_at(xi) * b_at(g + xi);
        }
        return acc.real();
    };

    std::complex<double> recon(bstar_at(f), 0.0);
    for (std::int64_t xi = -cut; xi <= cut; ++xi) {
        const std::complex<double> d = ap.d_at(k, xi);
        if (d == std::complex<double>(0.0, 0.0)) continue;
        recon += d * bstar_at(f + xi);
    }
    return std::abs(b_at(f) - recon.real());
}

}  // namespace shiftconv
