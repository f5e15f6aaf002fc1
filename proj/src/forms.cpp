#include "shiftconv/forms.hpp"

#include "shiftconv/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace shiftconv {

HeckeCoeffTable holomorphic_form(const std::vector<BigInt>& tau) {
    if (tau.size() < 2)
        throw std::invalid_argument("holomorphic_form: empty tau table");
    HeckeCoeffTable form;
    form.kind = FormKind::holomorphic;
    form.weight = 12;
    form.n_max = static_cast<std::uint32_t>(tau.size() - 1);
    form.t.assign(tau.size(), 0.0);
    for (std::uint32_t n = 1; n <= form.n_max; ++n)
        form.t[n] = normalized_hecke_holomorphic(n, tau);
    return form;
}

HeckeCoeffTable holomorphic_form(std::uint32_t n_max) {
    return holomorphic_form(ramanujan_tau_table(n_max));
}

double hecke_multiplicativity_defect(const HeckeCoeffTable& form,
                                     std::uint32_t* bad_m,
                                     std::uint32_t* bad_n) {
    double worst = 0.0;
    std::uint32_t wm = 0, wn = 0;
    const std::uint32_t n_max = form.n_max;
    for (std::uint32_t m = 2; m * m <= n_max; ++m) {
        for (std::uint32_t n = m; m * n <= n_max; ++n) {
            const std::uint32_t g = std::gcd(m, n);
            double rhs = 0.0;
            for (std::uint32_t d = 1; d <= g; ++d) {
                if (g % d) continue;
                rhs += form.t[(std::uint64_t(m) * n) / (std::uint64_t(d) * d)];
            }
            const double defect = std::abs(form.t[m] * form.t[n] - rhs);
            if (defect > worst) { worst = defect; wm = m; wn = n; }
        }
    }
    if (bad_m) *bad_m = wm;
    if (bad_n) *bad_n = wn;
    return worst;
}

double holomorphic_weight_constant(int k) {
    // 2^{2-2k} pi^{-k-1} (k-1)!
    double fact = 1.0;
    for (int j = 2; j < k; ++j) fact *= j;
    return std::ldexp(1.0, 2 - 2 * k) * std::pow(kPi, -k - 1) * fact;
}

namespace {

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
    throw std::runtime_error("spectral dataset parse error at line " +
                             std::to_string(line_no) + ": " + what);
}

// "key=value" -> value; dies if the token does not start with key=
std::string take_kv(const std::string& token, const char* key,
                    std::size_t line_no) {
    const std::string prefix = std::string(key) + "=";
    if (token.rfind(prefix, 0) != 0)
        parse_fail(line_no, "expected " + prefix + "..., got '" + token + "'");
    return token.substr(prefix.size());
}

void validate_coeffs(const HeckeCoeffTable& coeffs, std::size_t form_index) {
    if (std::abs(coeffs.t.at(1) - 1.0) > 1e-9)
        throw std::runtime_error(
            "spectral dataset: form " + std::to_string(form_index) +
            " violates t(1) = 1 (got " + std::to_string(coeffs.t[1]) + ")");
    std::uint32_t bm = 0, bn = 0;
    const double defect = hecke_multiplicativity_defect(coeffs, &bm, &bn);
    if (defect > 1e-6)
        throw std::runtime_error(
            "spectral dataset: form " + std::to_string(form_index) +
            " fails Hecke multiplicativity at (m, n) = (" + std::to_string(bm) +
            ", " + std::to_string(bn) + "), defect " + std::to_string(defect));
}

}  // namespace

SpectralDataset load_spectral_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_spectral_dataset: cannot open " + path);

    SpectralDataset ds;
    std::string line;
    std::size_t line_no = 0;

    auto next_content_line = [&](std::string& out) -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            const auto pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos) continue;
            if (line[pos] == '#') continue;
            out = line;
            return true;
        }
        return false;
    };

    std::string content;
    while (next_content_line(content)) {
        std::istringstream head(content);
        std::string tag;
        head >> tag;
        if (tag == "maass") {
            std::string tk, tp, ta, tn;
            if (!(head >> tk >> tp >> ta >> tn))
                parse_fail(line_no, "malformed maass header");
            MaassFormRecord rec;
            rec.kappa = std::stod(take_kv(tk, "kappa", line_no));
            const int parity = std::stoi(take_kv(tp, "parity", line_no));
            if (parity != 1 && parity != -1)
                parse_fail(line_no, "parity must be +1 or -1");
            rec.parity = parity;
            rec.alpha = std::stod(take_kv(ta, "alpha", line_no));
            const long nmax = std::stol(take_kv(tn, "nmax", line_no));
            if (nmax < 1) parse_fail(line_no, "nmax must be >= 1");
            if (rec.alpha <= 0.0)
                parse_fail(line_no, "alpha must be positive");

            rec.coeffs.kind = FormKind::maass;
            rec.coeffs.kappa = rec.kappa;
            rec.coeffs.parity = rec.parity;
            rec.coeffs.n_max = static_cast<std::uint32_t>(nmax);
            rec.coeffs.t.assign(static_cast<std::size_t>(nmax) + 1, 0.0);
            for (long i = 1; i <= nmax; ++i) {
                std::string row;
                if (!next_content_line(row))
                    parse_fail(line_no, "unexpected end of file inside maass block");
                std::istringstream rs(row);
                long n = 0; double v = 0.0;
                if (!(rs >> n >> v)) parse_fail(line_no, "malformed coefficient row");
                if (n != i)
                    parse_fail(line_no, "coefficient rows must have ascending n; expected " +
                                            std::to_string(i));
                rec.coeffs.t[static_cast<std::size_t>(n)] = v;
            }

            validate_coeffs(rec.coeffs, ds.maass_forms.size());
            if (!ds.maass_forms.empty() &&
                !(rec.kappa > ds.maass_forms.back().kappa))
                throw std::runtime_error(
                    "spectral dataset: kappa values must be strictly increasing "
                    "(form " + std::to_string(ds.maass_forms.size()) + ")");
            ds.maass_forms.push_back(std::move(rec));
        } else if (tag == "holo") {
            std::string tw, ta, tf, tn;
            if (!(head >> tw >> ta >> tf >> tn))
                parse_fail(line_no, "malformed holo header");
            HolomorphicBasis basis;
            basis.weight = std::stoi(take_kv(tw, "weight", line_no));
            basis.a_k = std::stod(take_kv(ta, "a", line_no));
            const long forms = std::stol(take_kv(tf, "forms", line_no));
            const long nmax = std::stol(take_kv(tn, "nmax", line_no));
            if (basis.weight < 12 || basis.weight % 2 != 0)
                parse_fail(line_no, "holo weight must be even and >= 12");
            if (forms < 1 || nmax < 1)
                parse_fail(line_no, "holo forms/nmax must be >= 1");
            basis.n_max = static_cast<std::uint32_t>(nmax);
            const double expected = holomorphic_weight_constant(basis.weight);
            if (std::abs(basis.a_k - expected) > 1e-12 * std::abs(expected))
                throw std::runtime_error(
                    "spectral dataset: a_k mismatch for weight " +
                    std::to_string(basis.weight));
            basis.rho.assign(static_cast<std::size_t>(forms),
                             std::vector<double>(static_cast<std::size_t>(nmax) + 1, 0.0));
            for (long j = 0; j < forms; ++j) {
                for (long i = 1; i <= nmax; ++i) {
                    std::string row;
                    if (!next_content_line(row))
                        parse_fail(line_no, "unexpected end of file inside holo block");
                    std::istringstream rs(row);
                    long n = 0; double v = 0.0;
                    if (!(rs >> n >> v)) parse_fail(line_no, "malformed basis row");
                    if (n != i)
                        parse_fail(line_no, "basis rows must have ascending n");
                    basis.rho[static_cast<std::size_t>(j)]
                             [static_cast<std::size_t>(n)] = v;
                }
            }
            ds.holomorphic_bases.push_back(std::move(basis));
        } else {
            parse_fail(line_no, "unknown block tag '" + tag + "'");
        }
    }
    return ds;
}

void write_dataset(const SpectralDataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_dataset: cannot open " + path);
    char buf[64];
    auto fmt = [&buf](double v) -> std::string {
        std::snprintf(buf, sizeof buf, "%.15g", v);
        return buf;
    };
    for (const MaassFormRecord& rec : ds.maass_forms) {
        out << "maass kappa=" << fmt(rec.kappa) << " parity="
            << (rec.parity > 0 ? "+1" : "-1") << " alpha=" << fmt(rec.alpha)
            << " nmax=" << rec.coeffs.n_max << "\n";
        for (std::uint32_t n = 1; n <= rec.coeffs.n_max; ++n)
            out << n << " " << fmt(rec.coeffs.t[n]) << "\n";
    }
    for (const HolomorphicBasis& basis : ds.holomorphic_bases) {
        out << "holo weight=" << basis.weight << " a=" << fmt(basis.a_k)
            << " forms=" << basis.rho.size() << " nmax=" << basis.n_max << "\n";
        for (const auto& row : basis.rho)
            for (std::uint32_t n = 1; n <= basis.n_max; ++n)
                out << n << " " << fmt(row[n]) << "\n";
    }
}

MomentReport second_fourth_moment_report(const HeckeCoeffTable& form,
                                         std::uint32_t N) {
    if (N == 0 || N > form.n_max)
        throw std::out_of_range("second_fourth_moment_report: N out of range");
    NeumaierSum m2, m4;
    for (std::uint32_t n = 1; n <= N; ++n) {
        const double t2 = form.t[n] * form.t[n];
        m2.add(t2);
        m4.add(t2 * t2);
    }
    MomentReport rep;
    rep.m2 = m2.value();
    rep.m4 = m4.value();
    rep.m2_over_n = rep.m2 / static_cast<double>(N);
    rep.m4_over_n105 = rep.m4 / std::pow(static_cast<double>(N), 1.05);
    return rep;
}

HeckeCoeffTable make_synthetic_maass(double kappa, int parity,
                                     std::uint32_t n_max, std::uint64_t seed) {
    if (parity != 1 && parity != -1)
        throw std::invalid_argument("make_synthetic_maass: parity must be +-1");
    HeckeCoeffTable form;
    form.kind = FormKind::maass;
    form.kappa = kappa;
    form.parity = parity;
    form.n_max = n_max;
    form.t.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
    form.t[1] = 1.0;

    const ArithTables tables = build_tables(std::max<std::uint32_t>(n_max, 2));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);

    // prime values are free; prime powers follow the recursion
    // t(p^{r+1}) = t(p) t(p^r) - t(p^{r-1}); everything else is multiplicative
    std::vector<double> tp(n_max + 1, 0.0);
    for (std::uint32_t p = 2; p <= n_max; ++p)
        if (tables.smallest_prime_factor[p] == p) tp[p] = unif(rng);

    for (std::uint32_t n = 2; n <= n_max; ++n) {
        const std::uint32_t p = tables.smallest_prime_factor[n];
        std::uint32_t m = n, pk = 1;
        while (m % p == 0) { m /= p; pk *= p; }
        if (m > 1) {
            form.t[n] = form.t[m] * form.t[pk];
        } else if (pk == p) {
            form.t[n] = tp[p];
        } else {
            form.t[n] = tp[p] * form.t[pk / p] - form.t[pk / (p * p)];
        }
    }
    return form;
}

}  // namespace shiftconv
