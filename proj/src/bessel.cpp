#include "shiftconv/bessel.hpp"

#include "shiftconv/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace shiftconv {

namespace {

constexpr double kSeriesEps = 1e-19;  // long double internals

bool is_negative_integer(double v) {
    return v < -0.5 && std::abs(v - std::round(v)) < 1e-12;
}

}  // namespace

// ---------------------------------------------------------------------------
// Real-order J
// ---------------------------------------------------------------------------

double bessel_J_series(double order, double x) {
    if (x <= 0.0) throw std::invalid_argument("bessel_J_series: x must be > 0");
    if (is_negative_integer(order)) {
        const int n = static_cast<int>(std::lround(-order));
        const double flip = (n % 2 == 0) ? 1.0 : -1.0;
        return flip * bessel_J_series(static_cast<double>(n), x);
    }
    const long double nu = order;
    const long double half = 0.5L * static_cast<long double>(x);
    const long double q = half * half;
    long double term = powl(half, nu) / tgammal(nu + 1.0L);
    long double sum = term;
    for (int m = 0; m < 600; ++m) {
        term *= -q / ((m + 1.0L) * (nu + m + 1.0L));
        sum += term;
        if (fabsl(term) < kSeriesEps * std::max(1.0L, fabsl(sum)) && m > 4)
            break;
    }
    return static_cast<double>(sum);
}

double bessel_J_asymptotic(double order, double x) {
    if (x <= 0.0)
        throw std::invalid_argument("bessel_J_asymptotic: x must be > 0");
    const long double nu = order;
    const long double four_nu2 = 4.0L * nu * nu;
    const long double xi = x;
    // a_{k+1} = a_k (4 nu^2 - (2k+1)^2) / (8 (k+1)); P picks even k, Q odd k,
    // with alternating signs.  Truncate at the smallest term.
    long double P = 1.0L, Q = 0.0L;
    long double a = 1.0L;
    long double scale = 1.0L;  // a_k / x^k
    long double prev_mag = 1.0L;
    for (int k = 0; k < 60; ++k) {
        a = (four_nu2 - (2.0L * k + 1.0L) * (2.0L * k + 1.0L)) / (8.0L * (k + 1.0L));
        scale *= a / xi;
        const long double mag = fabsl(scale);
        if (mag > prev_mag) break;  // divergent regime reached
        const int kk = k + 1;
        const int phase = (kk / 2) % 2;  // sign (-1)^{floor(kk/2)}
        const long double signed_term = (phase ? -scale : scale);
        if (kk % 2 == 0) P += signed_term; else Q += signed_term;
        if (mag < 1e-20L) break;
        prev_mag = mag;
    }
    const long double chi = xi - nu * 1.57079632679489661923L - 0.78539816339744830962L;
    const long double val =
        sqrtl(2.0L / (3.14159265358979323846L * xi)) * (cosl(chi) * P - sinl(chi) * Q);
    return static_cast<double>(val);
}

double bessel_J(double order, double x) {
    if (x <= 0.0) throw std::invalid_argument("bessel_J: x must be > 0");
    const double cutover = 20.0 + order * order;
    return (x <= cutover) ? bessel_J_series(order, x)
                          : bessel_J_asymptotic(order, x);
}

// ---------------------------------------------------------------------------
// Complex log Gamma: Stirling with Bernoulli terms, lifting Re(z) above 9.
// ---------------------------------------------------------------------------

std::complex<double> log_gamma(std::complex<double> z) {
    if (z.real() < 0.5) {
        // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        const std::complex<double> pi_z = kPi * z;
        return std::log(kPi / std::sin(pi_z)) - log_gamma(1.0 - z);
    }
    std::complex<double> shift(0.0, 0.0);
    while (z.real() < 9.0) {
        shift += std::log(z);
        z += 1.0;
    }
    static const double coef[] = {
        1.0 / 12.0,   -1.0 / 360.0,     1.0 / 1260.0, -1.0 / 1680.0,
        1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0,
    };
    const std::complex<double> z2 = z * z;
    std::complex<double> series(0.0, 0.0);
    std::complex<double> zp = z;
    for (double c : coef) {
        series += c / zp;
        zp *= z2;
    }
    const std::complex<double> half_log_two_pi(0.9189385332046727417803297, 0.0);
    return (z - 0.5) * std::log(z) - z + half_log_two_pi + series - shift;
}

std::complex<double> bessel_J_imag_series(double r, double x) {
    if (x <= 0.0)
        throw std::invalid_argument("bessel_J_imag_series: x must be > 0");
    const std::complex<double> nu(0.0, 2.0 * r);
    const std::complex<double> half_x(0.5 * x, 0.0);
    const double q = 0.25 * x * x;
    std::complex<double> term =
        std::exp(nu * std::log(half_x) - log_gamma(nu + 1.0));
    std::complex<double> sum = term;
    for (int m = 0; m < 400; ++m) {
        term *= -q / ((m + 1.0) * (nu + (m + 1.0)));
        sum += term;
        if (std::abs(term) < 1e-17 * std::max(1.0, std::abs(sum)) && m > 4)
            break;
    }
    return sum;
}

// ---------------------------------------------------------------------------
// K of imaginary order, direct representation
// ---------------------------------------------------------------------------

double bessel_K_imag(double r, double x) {
    if (x <= 0.0) throw std::invalid_argument("bessel_K_imag: x must be > 0");
    // cutoff where exp(-x cosh u) drops below 1e-18 relative to the u = 0 value
    const double budget = 42.0;
    const double ratio = (budget + x) / x;
    const double u_max = std::max(1.0, std::acosh(std::max(ratio, 1.0 + 1e-9)));
    const auto f = [&](double u) {
        return std::exp(-x * std::cosh(u)) * std::cos(2.0 * r * u);
    };
    QuadratureOptions opt;
    opt.rel_tol = 1e-12;
    opt.abs_tol = 1e-300;  // K can be legitimately tiny
    opt.initial_panels =
        static_cast<std::size_t>(8 + std::ceil(std::abs(r) * u_max));
    const QuadratureResult res = integrate_adaptive(f, 0.0, u_max, opt);
    if (!res.converged)
        throw std::runtime_error("bessel_K_imag: quadrature did not converge (last delta " +
                                 std::to_string(res.error_estimate) + ")");
    return res.value;
}

// ---------------------------------------------------------------------------
// Oscillatory integrals int_0^inf cos(phase(u)) cos(2ru) du with
// phase = x cosh u or x sinh u: panel walk matched to the local half-period,
// then a two-term integration-by-parts tail.
// ---------------------------------------------------------------------------

namespace {

struct OscillatorySpec {
    double x = 0.0;
    double r = 0.0;
    bool cosh_phase = true;  // else sinh
};

double phase_val(const OscillatorySpec& s, double u) {
    return s.cosh_phase ? s.x * std::cosh(u) : s.x * std::sinh(u);
}
double phase_d1(const OscillatorySpec& s, double u) {
    return s.cosh_phase ? s.x * std::sinh(u) : s.x * std::cosh(u);
}
double phase_d2(const OscillatorySpec& s, double u) {
    return s.cosh_phase ? s.x * std::cosh(u) : s.x * std::sinh(u);
}

// Two-term IBP tail from T: with c(u) = cos(2ru), g = (c/phi')',
//   int_T^inf cos(phi) c du = -sin(phi(T)) c(T)/phi'(T)
//                             - cos(phi(T)) g(T)/phi'(T) + O(((2r+2)/phi'(T))^2)
double ibp_tail(const OscillatorySpec& s, double T) {
    const double phi = phase_val(s, T);
    const double dphi = phase_d1(s, T);
    const double ddphi = phase_d2(s, T);
    const double c = std::cos(2.0 * s.r * T);
    const double cp = -2.0 * s.r * std::sin(2.0 * s.r * T);
    const double g = cp / dphi - c * ddphi / (dphi * dphi);
    return -std::sin(phi) * c / dphi - std::cos(phi) * g / dphi;
}

double oscillatory_cos_integral(const OscillatorySpec& s, double rel_tol) {
    // Choose T so the post-IBP remainder ((2r+2)/phi'(T))^2 is below tol.
    const double target =
        (2.0 * std::abs(s.r) + 2.0) / std::sqrt(std::max(rel_tol * 1e-2, 1e-14));
    const double reach = std::max(1e4, target) / s.x;  // required phi'(T)/x
    const double T = s.cosh_phase ? std::asinh(reach)
                                  : std::acosh(std::max(reach, 2.0));

    const double slow_cap = kPi / (2.0 * (1.0 + 2.0 * std::abs(s.r)));
    NeumaierSum sum;
    double u = 0.0;
    while (u < T) {
        const double local = std::abs(phase_d1(s, std::min(u + 0.25, T)));
        double h = std::min({0.25, slow_cap, kPi / (1.0 + local)});
        if (u + h > T) h = T - u;
        sum.add(gl_panel(
            [&](double v) {
                return std::cos(phase_val(s, v)) * std::cos(2.0 * s.r * v);
            },
            u, u + h, 8));
        u += h;
    }
    sum.add(ibp_tail(s, T));
    return sum.value();
}

}  // namespace

double watson_k_form(double r, double x) {
    if (x <= 0.0) throw std::invalid_argument("watson_k_form: x must be > 0");
    OscillatorySpec s;
    s.x = x;
    s.r = r;
    s.cosh_phase = false;
    return oscillatory_cos_integral(s, 1e-10);
}

double j_minus_combination(double r, double x) {
    if (r == 0.0)
        throw std::invalid_argument(
            "j_minus_combination: r == 0 (removable singularity not implemented)");
    if (x <= 0.0)
        throw std::invalid_argument("j_minus_combination: x must be > 0");
    OscillatorySpec s;
    s.x = x;
    s.r = r;
    s.cosh_phase = true;
    return 2.0 * oscillatory_cos_integral(s, 1e-10);
}

double holomorphic_kernel(int k, double x) {
    if (k < 2 || k % 2 != 0)
        throw std::invalid_argument("holomorphic_kernel: k must be even and >= 2");
    const double sign = (k / 2 % 2 == 0) ? -1.0 : 1.0;  // (-1)^{1 + k/2}
    const auto f = [&](double th) {
        return std::sin(x * std::sin(th)) * std::sin((1.0 - k) * th);
    };
    QuadratureOptions opt;
    opt.rel_tol = 1e-11;
    opt.initial_panels = static_cast<std::size_t>(8 + std::ceil((x + k) / kPi));
    const QuadratureResult res = integrate_adaptive(f, 0.0, kPi, opt);
    return sign * res.value;
}

// ---------------------------------------------------------------------------
// KuznetsovTransform
// ---------------------------------------------------------------------------

namespace {

// int psi(x) x^{-1} cos(omega x) dx over the support, panels per half-period.
double weighted_cosine_moment(const SmoothBump& psi, double omega) {
    const double a = psi.support_lo(), b = psi.support_hi();
    const std::size_t panels = static_cast<std::size_t>(
        2 + std::ceil(std::abs(omega) * (b - a) / kPi));
    if (panels > 5000000)
        throw std::runtime_error(
            "KuznetsovTransform: inner quadrature would need " +
            std::to_string(panels) + " panels; psi support is too wide");
    return gl_composite(
        [&](double x) { return psi.value(x) / x * std::cos(omega * x); }, a, b,
        panels, 12);
}

}  // namespace

KuznetsovTransform::KuznetsovTransform(const SmoothBump& psi, double rel_tol,
                                       double r_design)
    : r_design_(r_design) {
    if (psi.support_lo() <= 0.0 && psi.height() != 0.0)
        throw std::invalid_argument(
            "KuznetsovTransform: psi must be supported in (0, inf)");
    const double h = std::min(0.08, 2.0 / (1.0 + 2.0 * r_design)) *
                     std::clamp(std::pow(rel_tol / 1e-9, 0.25), 0.3, 1.0);
    const double floor_cut = std::max(rel_tol * 1e-3, 1e-15);

    const GaussLegendreRule& rule = gauss_legendre(32);
    auto build = [&](bool cosh_phase) {
        Table t;
        double peak = 0.0;
        int quiet = 0;
        double u = 0.0;
        while (u < 30.0) {
            const double mid = u + 0.5 * h, half = 0.5 * h;
            double panel_max = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double uu = mid + half * rule.nodes[i];
                const double omega =
                    cosh_phase ? std::cosh(uu) : std::sinh(uu);
                const double phi = weighted_cosine_moment(psi, omega);
                t.nodes.push_back(uu);
                t.weights.push_back(half * rule.weights[i]);
                t.phi.push_back(phi);
                panel_max = std::max(panel_max, std::abs(phi));
            }
            peak = std::max(peak, panel_max);
            u += h;
            if (u >= 1.0) {
                if (panel_max < floor_cut * std::max(peak, 1e-300))
                    ++quiet;
                else
                    quiet = 0;
                if (quiet >= 3) break;
            }
        }
        return t;
    };
    cosh_table_ = build(true);
    sinh_table_ = build(false);
}

double KuznetsovTransform::eval(const Table& t, double r) const {
    NeumaierSum s;
    for (std::size_t i = 0; i < t.nodes.size(); ++i)
        s.add(t.weights[i] * t.phi[i] * std::cos(2.0 * r * t.nodes[i]));
    return 2.0 * s.value();
}

double KuznetsovTransform::psi_hat(double r) const { return eval(cosh_table_, r); }

double KuznetsovTransform::psi_hat_minus(double r) const {
    return eval(sinh_table_, r);
}

double psi_hat(const TransformSpec& spec) {
    if (spec.r == 0.0)
        throw std::invalid_argument("psi_hat: r must be nonzero");
    KuznetsovTransform tr(spec.psi, spec.rel_tol,
                          std::max(8.0, 2.0 * std::abs(spec.r)));
    return tr.psi_hat(spec.r);
}

double psi_hat_minus(const TransformSpec& spec) {
    KuznetsovTransform tr(spec.psi, spec.rel_tol,
                          std::max(8.0, 2.0 * std::abs(spec.r)));
    return tr.psi_hat_minus(spec.r);
}

// ---------------------------------------------------------------------------
// Dual-sum weight transform for the summation formula
// ---------------------------------------------------------------------------

double oscillatory_sqrt_transform(const SmoothBump& W, double scale,
                                  double kappa, PhaseKind kind,
                                  double rel_tol) {
    const double a = W.support_lo(), b = W.support_hi();
    if (a <= 0.0)
        throw std::invalid_argument(
            "oscillatory_sqrt_transform: W must be supported in (0, inf)");
    const double sqrt_b = std::sqrt(b), sqrt_a = std::sqrt(a);

    auto inner = [&](double u) {
        const double k_of_u =
            (kind == PhaseKind::cosh_phase) ? std::cosh(u) : std::sinh(u);
        const double omega = scale * k_of_u;  // multiplies sqrt(x)
        const std::size_t panels = static_cast<std::size_t>(
            2 + std::ceil(std::abs(omega) * (sqrt_b - sqrt_a) / kPi));
        return gl_composite(
            [&](double x) { return W.value(x) * std::cos(omega * std::sqrt(x)); },
            a, b, panels, 8);
    };

    const double floor_cut = std::max(rel_tol * 1e-3, 1e-15);
    const double slow_cap = kPi / (2.0 * (1.0 + 2.0 * std::abs(kappa)));

    NeumaierSum total;
    double peak = 0.0;
    int quiet = 0;
    double u = 0.0;
    while (u < 30.0) {
        // resolve both cos(2 kappa u) and the oscillation of the inner
        // integral, whose local u-frequency is at most scale*sqrt(b)*K'(u)
        const double kp = (kind == PhaseKind::cosh_phase)
                              ? std::sinh(u + 0.25)
                              : std::cosh(u + 0.25);
        const double h =
            std::min({0.25, slow_cap, kPi / (1.0 + std::abs(scale) * sqrt_b * kp)});
        const double mid = u + 0.5 * h, half = 0.5 * h;
        const GaussLegendreRule& rule = gauss_legendre(12);
        double panel_val = 0.0, panel_max = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double uu = mid + half * rule.nodes[i];
            const double g = inner(uu);
            panel_max = std::max(panel_max, std::abs(g));
            panel_val += half * rule.weights[i] * g * std::cos(2.0 * kappa * uu);
        }
        total.add(panel_val);
        peak = std::max(peak, panel_max);
        u += h;
        if (u >= 1.0) {
            if (panel_max < floor_cut * std::max(peak, 1e-300))
                ++quiet;
            else
                quiet = 0;
            if (quiet >= 3) break;
        }
    }
    return total.value();
}

}  // namespace shiftconv
