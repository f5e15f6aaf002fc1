#include "shiftconv/spectral.hpp"

#include "shiftconv/arith.hpp"
#include "shiftconv/bessel.hpp"
#include "shiftconv/expsums.hpp"
#include "shiftconv/numerics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace shiftconv {

const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::verified_to_tol: return "verified-to-tol";
        case CheckStatus::data_limited: return "data-limited";
        case CheckStatus::skipped_no_data: return "skipped-no-data";
    }
    return "unknown";
}

std::string IdentityReport::to_json() const {
    nlohmann::json j;
    j["lhs_re"] = lhs.real();
    j["lhs_im"] = lhs.imag();
    j["rhs_re"] = rhs_truncated.real();
    j["rhs_im"] = rhs_truncated.imag();
    j["residual"] = residual;
    j["q_max"] = q_max;
    j["r_max"] = r_max;
    j["forms_used"] = forms_used;
    j["status"] = to_string(status);
    return j.dump();
}

// ---------------------------------------------------------------------------
// zeta(1 + it)
// ---------------------------------------------------------------------------

std::complex<double> zeta_euler_maclaurin(double t, int explicit_terms) {
    const std::complex<double> s(1.0, t);
    const double M = static_cast<double>(explicit_terms);
    std::complex<double> sum(0.0, 0.0);
    for (int n = 1; n <= explicit_terms; ++n)
        sum += std::exp(-s * std::log(static_cast<double>(n)));
    const std::complex<double> Ms = std::exp(-s * std::log(M));
    sum += Ms * M / (s - 1.0);   // M^{1-s}/(s-1)
    sum -= 0.5 * Ms;
    // two correction terms: s/12 M^{-s-1} - s(s+1)(s+2)/720 M^{-s-3}
    sum += s / 12.0 * Ms / M;
    sum -= s * (s + 1.0) * (s + 2.0) / 720.0 * Ms / (M * M * M);
    return sum;
}

std::complex<double> zeta_one_plus_it(double t) {
    return zeta_euler_maclaurin(t, 100);
}

// ---------------------------------------------------------------------------
// Voronoi-type summation check
// ---------------------------------------------------------------------------

IdentityReport voronoi_residual(const MaassFormRecord& form, const SmoothBump& W,
                                std::int64_t a, std::int64_t q, int M,
                                double rel_tol) {
    if (q < 1) throw std::invalid_argument("voronoi_residual: q must be >= 1");
    if (q > 1 && std::gcd(((a % q) + q) % q, q) != 1)
        throw std::invalid_argument("voronoi_residual: (a, q) must be coprime");
    if (W.support_lo() <= 0.0)
        throw std::invalid_argument("voronoi_residual: supp W must be in (0, inf)");

    const HeckeCoeffTable& c = form.coeffs;
    const double kappa = form.kappa;
    const double eps = static_cast<double>(form.parity);

    // finite left side
    const std::int64_t m_lo =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(W.support_lo())));
    const std::int64_t m_hi =
        static_cast<std::int64_t>(std::floor(W.support_hi()));
    if (m_hi > static_cast<std::int64_t>(c.n_max))
        throw std::out_of_range("voronoi_residual: W support beyond coefficient table");
    std::complex<double> lhs(0.0, 0.0);
    for (std::int64_t m = m_lo; m <= m_hi; ++m) {
        const double wm = W.value(static_cast<double>(m));
        if (wm == 0.0) continue;
        lhs += c.t[static_cast<std::size_t>(m)] * wm *
               unit_phase(static_cast<double>(a * m) / static_cast<double>(q));
    }

    if (M > static_cast<int>(c.n_max))
        throw std::out_of_range("voronoi_residual: truncation M beyond coefficient table");

    const std::int64_t abar = (q == 1) ? 0 : mod_inverse(a, q);
    std::complex<double> rhs(0.0, 0.0);
    for (int m = 1; m <= M; ++m) {
        const double tm = c.t[static_cast<std::size_t>(m)];
        if (tm == 0.0) continue;
        const double scale =
            4.0 * kPi * std::sqrt(static_cast<double>(m)) / static_cast<double>(q);
        // int W(x) * jminus(kappa, scale sqrt(x)) dx  (J-part)
        const double Ij = 2.0 * oscillatory_sqrt_transform(
                                    W, scale, kappa, PhaseKind::cosh_phase, rel_tol);
        // int W(x) * cosh(pi kappa) K_{2 i kappa}(scale sqrt(x)) dx  (K-part)
        const double Ik = oscillatory_sqrt_transform(W, scale, kappa,
                                                     PhaseKind::sinh_phase, rel_tol);
        const double mbar = static_cast<double>(m * abar) / static_cast<double>(q);
        rhs += (2.0 / static_cast<double>(q)) * tm * unit_phase(-mbar) * Ij;
        rhs += (4.0 * eps / static_cast<double>(q)) * tm * unit_phase(mbar) * Ik;
    }

    IdentityReport rep;
    rep.lhs = lhs;
    rep.rhs_truncated = rhs;
    rep.residual = std::abs(lhs - rhs);
    rep.terms = M;
    rep.q_max = static_cast<int>(q);
    rep.forms_used = 1;
    const double scale_ref = std::max(1e-30, std::abs(lhs));
    rep.status = (rep.residual <= 1e-4 * scale_ref)
                     ? CheckStatus::verified_to_tol
                     : CheckStatus::data_limited;
    return rep;
}

// ---------------------------------------------------------------------------
// Trace-formula check
// ---------------------------------------------------------------------------

IdentityReport kuznetsov_residual(int m, int n, int sign, const SmoothBump& psi,
                                  const SpectralDataset& dataset,
                                  const KuznetsovTruncation& trunc,
                                  bool include_holomorphic) {
    if (m < 1 || n < 1)
        throw std::invalid_argument("kuznetsov_residual: m, n must be positive");
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("kuznetsov_residual: sign must be +-1");

    IdentityReport rep;
    rep.q_max = trunc.q_max;
    rep.r_max = trunc.r_max;

    // geometric side: exact Kloosterman sums, psi evaluated directly
    const double root = 4.0 * kPi * std::sqrt(static_cast<double>(m) *
                                              static_cast<double>(n));
    NeumaierSum geo;
    int geo_terms = 0;
    for (int q = 1; q <= trunc.q_max; ++q) {
        const double x = root / static_cast<double>(q);
        const double pv = psi.value(x);
        if (pv == 0.0) continue;
        const double S = ResidueTables(q).kloosterman(m, sign * n);
        geo.add(S / static_cast<double>(q) * pv);
        ++geo_terms;
    }
    rep.lhs = geo.value();
    rep.terms = geo_terms;

    if (dataset.maass_forms.empty()) {
        rep.rhs_truncated = 0.0;
        rep.residual = std::abs(rep.lhs);
        rep.status = CheckStatus::skipped_no_data;
        return rep;
    }

    const double r_design =
        std::max({20.0, trunc.r_max,
                  dataset.maass_forms.back().kappa + 1.0});
    KuznetsovTransform transform(psi, 1e-9, r_design);

    // discrete spectrum
    NeumaierSum disc;
    int used = 0;
    for (const MaassFormRecord& rec : dataset.maass_forms) {
        if (used >= trunc.forms) break;
        if (static_cast<std::uint32_t>(std::max(m, n)) > rec.coeffs.n_max) continue;
        const double tj_m = rec.coeffs.t[static_cast<std::size_t>(m)];
        const double tj_n = rec.coeffs.t[static_cast<std::size_t>(n)];
        double term = rec.alpha * tj_m * tj_n;
        if (sign > 0) {
            term *= transform.psi_hat(rec.kappa);
        } else {
            term *= static_cast<double>(rec.parity) *
                    transform.psi_hat_minus(rec.kappa);
        }
        disc.add(term);
        ++used;
    }
    rep.forms_used = used;

    // continuous spectrum: even real integrand, integrate 2/pi int_0^{r_max}
    const auto cont_integrand = [&](double r) {
        const std::complex<double> sm = sigma_2ir(static_cast<std::uint64_t>(m), r);
        const std::complex<double> sn = sigma_2ir(static_cast<std::uint64_t>(n), r);
        const double mn = static_cast<double>(m) * static_cast<double>(n);
        const std::complex<double> phase =
            std::exp(std::complex<double>(0.0, -r * std::log(mn)));
        const std::complex<double> z = zeta_one_plus_it(2.0 * r);
        const double znorm = std::norm(z);
        const double hat = (sign > 0) ? transform.psi_hat(r)
                                      : transform.psi_hat_minus(r);
        return (sm * sn * phase).real() / znorm * hat;
    };
    QuadratureOptions copt;
    copt.rel_tol = 1e-9;
    copt.abs_tol = 1e-13;
    copt.initial_panels = static_cast<std::size_t>(32 + trunc.r_max);
    const QuadratureResult cont =
        integrate_adaptive(cont_integrand, 0.0, trunc.r_max, copt);
    const double continuous = 2.0 / kPi * cont.value;

    double holomorphic = 0.0;
    if (sign > 0 && include_holomorphic && !dataset.holomorphic_bases.empty()) {
        for (const HolomorphicBasis& basis : dataset.holomorphic_bases) {
            if (static_cast<std::uint32_t>(std::max(m, n)) > basis.n_max) continue;
            // hat at the holomorphic points: int h_k(x) psi(x) / x dx
            const auto f = [&](double x) {
                return holomorphic_kernel(basis.weight, x) * psi.value(x) / x;
            };
            const double hk = integrate_adaptive(
                                  f, psi.support_lo(), psi.support_hi())
                                  .value;
            double basis_sum = 0.0;
            for (const auto& row : basis.rho)
                basis_sum += row[static_cast<std::size_t>(m)] *
                             row[static_cast<std::size_t>(n)];
            holomorphic += basis.a_k * basis_sum * hk;
        }
    }

    rep.rhs_truncated = disc.value() + continuous + holomorphic;
    rep.residual = std::abs(rep.lhs - rep.rhs_truncated);
    const double scale_ref =
        std::max({1e-30, std::abs(rep.lhs), std::abs(rep.rhs_truncated)});
    rep.status = (rep.residual <= 1e-4 * scale_ref)
                     ? CheckStatus::verified_to_tol
                     : CheckStatus::data_limited;
    return rep;
}

// ---------------------------------------------------------------------------
// Large-sieve ratio experiments
// ---------------------------------------------------------------------------

namespace {

std::vector<std::complex<double>> random_coefficients(int M, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::complex<double>> a(static_cast<std::size_t>(M));
    for (auto& v : a) v = {gauss(rng), gauss(rng)};
    return a;
}

}  // namespace

SieveResult continuous_sieve_ratio(double K, double Delta, int M, int trials,
                                   std::uint64_t seed) {
    if (M < 1) throw std::invalid_argument("continuous_sieve_ratio: M must be >= 1");
    SieveResult res;
    res.trials = trials;
    if (Delta < 0.0)
        throw std::invalid_argument("continuous_sieve_ratio: Delta must be >= 0");
    if (Delta == 0.0 || trials < 1) {
        res.status = CheckStatus::verified_to_tol;
        return res;
    }

    // fixed quadrature nodes; sigma_{2ir}(m) m^{-ir} cached per (node, m)
    const int panels = static_cast<int>(8 + std::ceil(Delta * std::log1p(M)));
    const GaussLegendreRule& rule = gauss_legendre(16);
    struct Node { double r, wt; };
    std::vector<Node> nodes;
    for (int p = 0; p < panels; ++p) {
        const double a = K + Delta * p / panels;
        const double b = K + Delta * (p + 1) / panels;
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            nodes.push_back({mid + half * rule.nodes[i], half * rule.weights[i]});
    }
    std::vector<std::vector<std::complex<double>>> X(
        nodes.size(), std::vector<std::complex<double>>(static_cast<std::size_t>(M)));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double r = nodes[i].r;
        for (int m = 1; m <= M; ++m) {
            const double lm = std::log(static_cast<double>(m));
            X[i][static_cast<std::size_t>(m - 1)] =
                sigma_2ir(static_cast<std::uint64_t>(m), r) *
                std::exp(std::complex<double>(0.0, -r * lm));
        }
    }

    for (int trial = 0; trial < trials; ++trial) {
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * (trial + 1));
        const auto a = random_coefficients(M, rng);
        double a2 = 0.0;
        for (const auto& v : a) a2 += std::norm(v);
        if (a2 == 0.0) continue;
        NeumaierSum integral;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            std::complex<double> lin(0.0, 0.0);
            for (int mm = 0; mm < M; ++mm)
                lin += a[static_cast<std::size_t>(mm)] * X[i][static_cast<std::size_t>(mm)];
            integral.add(nodes[i].wt * std::norm(lin));
        }
        const double ratio =
            integral.value() / ((Delta * Delta + M) * a2);
        res.max_ratio = std::max(res.max_ratio, ratio);
    }
    res.status = CheckStatus::verified_to_tol;
    return res;
}

SieveResult spectral_sieve_ratio(const SpectralDataset& dataset, double K,
                                 double Delta, int M, int trials,
                                 std::uint64_t seed) {
    if (M < 1) throw std::invalid_argument("spectral_sieve_ratio: M must be >= 1");
    SieveResult res;
    res.trials = trials;
    std::vector<const MaassFormRecord*> window;
    for (const auto& rec : dataset.maass_forms)
        if (rec.kappa >= K && rec.kappa <= K + Delta &&
            rec.coeffs.n_max >= static_cast<std::uint32_t>(M))
            window.push_back(&rec);
    if (window.empty()) {
        res.status = CheckStatus::skipped_no_data;
        return res;
    }
    for (int trial = 0; trial < trials; ++trial) {
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * (trial + 1));
        const auto a = random_coefficients(M, rng);
        double a2 = 0.0;
        for (const auto& v : a) a2 += std::norm(v);
        if (a2 == 0.0) continue;
        NeumaierSum lhs;
        for (const MaassFormRecord* rec : window) {
            std::complex<double> lin(0.0, 0.0);
            for (int m = 1; m <= M; ++m)
                lin += a[static_cast<std::size_t>(m - 1)] *
                       rec->coeffs.t[static_cast<std::size_t>(m)];
            lhs.add(rec->alpha * std::norm(lin));
        }
        const double ratio = lhs.value() / ((K * Delta + M) * a2);
        res.max_ratio = std::max(res.max_ratio, ratio);
    }
    res.status = CheckStatus::data_limited;  // depends on available spectrum
    return res;
}

// ---------------------------------------------------------------------------
// Duality principle
// ---------------------------------------------------------------------------

DualityResult duality_check(const ComplexMatrix& Phi,
                            const std::vector<std::complex<double>>& b,
                            std::uint64_t seed) {
    const std::size_t rows = Phi.size();             // lambda
    const std::size_t cols = rows ? Phi[0].size() : 0;  // theta
    if (rows != b.size())
        throw std::invalid_argument("duality_check: b must have one entry per row");
    for (const auto& row : Phi)
        if (row.size() != cols)
            throw std::invalid_argument("duality_check: ragged matrix");

    DualityResult out;
    double b2 = 0.0;
    for (const auto& v : b) b2 += std::norm(v);

    NeumaierSum lhs;
    for (std::size_t th = 0; th < cols; ++th) {
        std::complex<double> lin(0.0, 0.0);
        for (std::size_t la = 0; la < rows; ++la) lin += b[la] * Phi[la][th];
        lhs.add(std::norm(lin));
    }
    out.lhs = lhs.value();

    if (rows == 0 || cols == 0) {
        out.holds = out.lhs <= 0.0;
        return out;
    }

    // power iteration on A = Phi^H Phi (cols x cols)
    ComplexMatrix A(cols, std::vector<std::complex<double>>(cols, {0.0, 0.0}));
    for (std::size_t i = 0; i < cols; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t la = 0; la < rows; ++la)
                acc += std::conj(Phi[la][i]) * Phi[la][j];
            A[i][j] = acc;
        }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::complex<double>> v(cols);
    double vn = 0.0;
    for (auto& x : v) { x = {gauss(rng), gauss(rng)}; vn += std::norm(x); }
    vn = std::sqrt(vn);
    for (auto& x : v) x /= vn;

    double lam_prev = 0.0, lam = 0.0;
    bool converged = false;
    std::vector<std::complex<double>> Av(cols);
    for (int iter = 0; iter < 10000; ++iter) {
        for (std::size_t i = 0; i < cols; ++i) {
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t j = 0; j < cols; ++j) acc += A[i][j] * v[j];
            Av[i] = acc;
        }
        std::complex<double> rayleigh(0.0, 0.0);
        double norm2 = 0.0;
        for (std::size_t i = 0; i < cols; ++i) {
            rayleigh += std::conj(v[i]) * Av[i];
            norm2 += std::norm(Av[i]);
        }
        lam = rayleigh.real();
        const double an = std::sqrt(norm2);
        if (an < 1e-300) { lam = 0.0; converged = true; break; }
        for (std::size_t i = 0; i < cols; ++i) v[i] = Av[i] / an;
        if (iter > 0 && std::abs(lam - lam_prev) <= 1e-10 * std::max(1e-300, std::abs(lam))) {
            converged = true;
            break;
        }
        lam_prev = lam;
    }
    if (!converged)
        throw std::runtime_error("duality_check: power iteration did not converge");

    out.spectral_norm = std::sqrt(std::max(0.0, lam));
    out.bound = std::max(0.0, lam) * b2;
    out.holds = out.lhs <= out.bound * (1.0 + 1e-8) + 1e-30;
    return out;
}

// ---------------------------------------------------------------------------
// Sobolev inequality check
// ---------------------------------------------------------------------------

SobolevResult sobolev_check(const std::function<std::complex<double>(double)>& f,
                            const std::function<std::complex<double>(double)>& fprime,
                            double a, double Delta, double u) {
    if (!(Delta > 0.0))
        throw std::invalid_argument("sobolev_check: Delta must be positive");
    if (u < a || u > a + Delta)
        throw std::invalid_argument("sobolev_check: u outside [a, a + Delta]");
    QuadratureOptions opt;
    opt.rel_tol = 1e-11;
    const double I0 =
        integrate_adaptive([&](double x) { return std::norm(f(x)); }, a,
                           a + Delta, opt)
            .value;
    const double I1 =
        integrate_adaptive([&](double x) { return std::norm(fprime(x)); }, a,
                           a + Delta, opt)
            .value;
    SobolevResult out;
    out.lhs = std::norm(f(u));
    out.rhs = I0 / Delta + 2.0 * std::sqrt(std::max(0.0, I0) * std::max(0.0, I1));
    out.holds = out.lhs <= out.rhs * (1.0 + 1e-8) + 1e-30;
    return out;
}

}  // namespace shiftconv
