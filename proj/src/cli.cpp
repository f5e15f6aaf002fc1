#include "shiftconv/cli.hpp"

#include "shiftconv/arith.hpp"
#include "shiftconv/bessel.hpp"
#include "shiftconv/circle.hpp"
#include "shiftconv/expsums.hpp"
#include "shiftconv/forms.hpp"
#include "shiftconv/meanvalue.hpp"
#include "shiftconv/numerics.hpp"
#include "shiftconv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace shiftconv {

namespace {

using Config = std::map<std::string, std::string>;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const std::map<std::string, std::vector<std::string>> kKnownKeys = {
    {"tables", {"nmax"}},
    {"tau", {"nmax", "n"}},
    {"kloosterman", {"m", "n", "q"}},
    {"circle", {"Q", "delta2", "depth", "cutoff", "report", "grid"}},
    {"lemma1", {"Q", "delta2", "depth", "cutoff", "n", "L", "delta", "f", "k"}},
    {"bessel", {"order", "r", "x", "what"}},
    {"identities",
     {"data", "m", "n", "a", "q", "M", "qmax", "rmax", "trials", "seed",
      "psi_lo", "psi_hi"}},
    {"sieve", {"data", "K", "delta", "M", "trials", "seed"}},
    {"meanvalue", {"theorem", "N", "L", "F", "delta", "form", "nmax", "threads",
                   "timing"}},
    {"sweep", {"theorem", "N", "Lexp", "Fexp", "delta", "form", "nmax",
               "threads", "slack", "timing"}},
};

Config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Usage("cannot open config file " + path);
    Config cfg;
    std::string line;
    while (std::getline(in, line)) {
        const auto start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        const auto eq = line.find('=', start);
        if (eq == std::string::npos)
            throw Usage("config line without '=': " + line);
        const std::string key = line.substr(start, eq - start);
        std::string value = line.substr(eq + 1);
        while (!value.empty() && (value.back() == '\r' || value.back() == ' '))
            value.pop_back();
        cfg[key] = value;
    }
    return cfg;
}

Config parse_args(const std::string& command,
                  const std::vector<std::string>& args, std::size_t start) {
    Config cli;
    std::string config_path;
    for (std::size_t i = start; i < args.size(); ++i) {
        std::string arg = args[i];
        if (arg.rfind("--", 0) != 0)
            throw Usage("expected --key, got '" + arg + "'");
        arg = arg.substr(2);
        std::string key, value;
        const auto eq = arg.find('=');
        if (eq != std::string::npos) {
            key = arg.substr(0, eq);
            value = arg.substr(eq + 1);
        } else {
            key = arg;
            if (i + 1 >= args.size())
                throw Usage("flag --" + key + " needs a value");
            value = args[++i];
        }
        if (key == "config") {
            config_path = value;
            continue;
        }
        cli[key] = value;
    }
    Config merged;
    if (!config_path.empty()) merged = parse_config_file(config_path);
    for (const auto& kv : cli) merged[kv.first] = kv.second;

    const auto it = kKnownKeys.find(command);
    if (it == kKnownKeys.end()) throw Usage("unknown command '" + command + "'");
    const auto& allowed = it->second;
    for (const auto& kv : merged) {
        if (kv.first == "seed" || kv.first == "threads" || kv.first == "out")
            continue;  // global keys
        if (std::find(allowed.begin(), allowed.end(), kv.first) == allowed.end())
            throw Usage("unknown key '" + kv.first + "' for command " + command);
    }
    return merged;
}

std::string get(const Config& cfg, const std::string& key,
                const std::string& fallback) {
    const auto it = cfg.find(key);
    return it == cfg.end() ? fallback : it->second;
}

double get_d(const Config& cfg, const std::string& key, double fallback) {
    const auto it = cfg.find(key);
    return it == cfg.end() ? fallback : std::stod(it->second);
}

std::int64_t get_i(const Config& cfg, const std::string& key,
                   std::int64_t fallback) {
    const auto it = cfg.find(key);
    return it == cfg.end() ? fallback : std::stoll(it->second);
}

void echo_config(std::ostream& out, const std::string& command,
                 const Config& cfg) {
    out << "# command=" << command << "\n";
    for (const auto& kv : cfg) out << "# " << kv.first << "=" << kv.second << "\n";
}

HeckeCoeffTable load_form(const Config& cfg, std::uint32_t needed) {
    const std::string kind = get(cfg, "form", "holo12");
    const std::uint32_t nmax = static_cast<std::uint32_t>(
        get_i(cfg, "nmax", static_cast<std::int64_t>(needed)));
    if (kind == "holo12") return holomorphic_form(std::max(nmax, needed));
    if (kind == "synthetic")
        return make_synthetic_maass(9.5, +1, std::max(nmax, needed), 42);
    throw Usage("unknown form '" + kind + "' (use holo12 or synthetic)");
}

std::string dataset_path(const Config& cfg) {
    const std::string direct = get(cfg, "data", "");
    if (!direct.empty()) return direct;
    const char* env = std::getenv("SHIFTCONV_DATA");
    if (env != nullptr && env[0] != '\0')
        return std::string(env) + "/maass.txt";
    return {};
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int cmd_tables(const Config& cfg, std::ostream& out) {
    const std::uint32_t nmax =
        static_cast<std::uint32_t>(get_i(cfg, "nmax", 1000));
    const ArithTables t = build_tables(nmax);
    // quick invariant sweep, exact arithmetic
    for (std::uint64_t n = 2; n <= nmax; ++n) {
        std::int64_t mob = 0;
        for (std::uint64_t d : t.divisors(n)) mob += t.mu(d);
        if (mob != 0) throw std::runtime_error("mobius divisor sum failed");
    }
    out << "n_max=" << nmax << "\n";
    out << "phi(" << nmax << ")=" << t.phi(nmax) << "\n";
    out << "d(" << nmax << ")=" << t.d(nmax) << "\n";
    out << "mobius_divisor_sums=ok\n";
    return 0;
}

int cmd_tau(const Config& cfg, std::ostream& out) {
    const std::uint32_t nmax = static_cast<std::uint32_t>(get_i(cfg, "nmax", 30));
    const auto tau = ramanujan_tau_table(nmax);
    const std::int64_t n = get_i(cfg, "n", 0);
    if (n > 0) {
        out << "tau(" << n << ")=" << tau.at(static_cast<std::size_t>(n)).str()
            << "\n";
        return 0;
    }
    for (std::uint32_t i = 1; i <= nmax; ++i)
        out << i << " " << tau[i].str() << "\n";
    return 0;
}

int cmd_kloosterman(const Config& cfg, std::ostream& out) {
    const std::int64_t m = get_i(cfg, "m", 0);
    const std::int64_t n = get_i(cfg, "n", 0);
    const std::int64_t q = get_i(cfg, "q", 1);
    out << fmt(kloosterman(m, n, q)) << "\n";
    return 0;
}

int cmd_circle(const Config& cfg, std::ostream& out) {
    const double Q = get_d(cfg, "Q", 32.0);
    const double delta2 = get_d(cfg, "delta2", 0.1);
    const int depth = static_cast<int>(get_i(cfg, "depth", 3));
    const int cutoff = static_cast<int>(get_i(cfg, "cutoff", 0));
    const CircleApprox ap = build_circle_approx(Q, delta2, depth, cutoff);
    const std::string report = get(cfg, "report", "V");
    out << "Delta=" << fmt(ap.Delta) << "\n";
    out << "Lambda=" << fmt(ap.Lambda) << "\n";
    out << "lambda=" << fmt(ap.lambda) << "\n";
    out << "Lambda_over_Q2=" << fmt(ap.lambda_over_Q2) << "\n";
    if (report == "V") {
        const double V = variance_V(ap);
        const double norm = V * ap.lambda / std::pow(std::log(1.0 / ap.Delta), 3);
        out << "V=" << fmt(V) << "\n";
        out << "V_lambda_over_log3=" << fmt(norm) << "\n";
    } else if (report == "sup") {
        const int grid = static_cast<int>(get_i(cfg, "grid", 4096));
        out << "E_sup=" << fmt(e_sup_norm(ap, grid)) << "\n";
    } else if (report == "coeffs") {
        for (int xi = 0; xi <= std::min(ap.xi_cutoff, 16); ++xi)
            out << "c[" << xi << "]=" << fmt(std::abs(ap.c_at(xi))) << "\n";
    } else {
        throw Usage("unknown report '" + report + "'");
    }
    return 0;
}

int cmd_lemma1(const Config& cfg, std::ostream& out) {
    const double Q = get_d(cfg, "Q", 32.0);
    const double delta2 = get_d(cfg, "delta2", 0.1);
    const int depth = static_cast<int>(get_i(cfg, "depth", 3));
    const int cutoff = static_cast<int>(get_i(cfg, "cutoff", 0));
    const std::int64_t n = get_i(cfg, "n", 1000);
    const std::uint32_t L = static_cast<std::uint32_t>(get_i(cfg, "L", 64));
    const double delta = get_d(cfg, "delta", 0.125);
    const std::int64_t f = get_i(cfg, "f", 2);
    const int k = static_cast<int>(get_i(cfg, "k", depth));

    const HeckeCoeffTable form = load_form(cfg, static_cast<std::uint32_t>(
        n + 4 * static_cast<std::int64_t>(L)));
    const ShiftedCoeffProblem pb = make_shifted_problem(form, n, L, delta);
    const CircleApprox ap = build_circle_approx(Q, delta2, depth, cutoff);
    const double res = lemma1_residual(pb, ap, f, k);
    const double sup = pb.psi_sup_norm();
    out << "residual=" << fmt(res) << "\n";
    out << "psi_sup=" << fmt(sup) << "\n";
    out << "normalized=" << fmt(res / std::max(sup, 1e-300)) << "\n";
    return 0;
}

int cmd_bessel(const Config& cfg, std::ostream& out) {
    const std::string what = get(cfg, "what", "dual");
    if (what == "J") {
        const double order = get_d(cfg, "order", 0.0);
        const double x = get_d(cfg, "x", 1.0);
        out << fmt(bessel_J(order, x)) << "\n";
        return 0;
    }
    if (what == "K") {
        const double r = get_d(cfg, "r", 0.0);
        const double x = get_d(cfg, "x", 1.0);
        out << fmt(bessel_K_imag(r, x)) << "\n";
        return 0;
    }
    if (what == "dual") {
        // the (r, x) agreement grid for the K-kernel plus the J overlap band
        const double rs[] = {0.0, 0.5, 1.0, 2.0};
        const double xs[] = {0.5, 1.0, 2.0, 5.0};
        double worst_k = 0.0;
        for (double r : rs)
            for (double x : xs) {
                const double direct = std::cosh(kPi * r) * bessel_K_imag(r, x);
                const double watson = watson_k_form(r, x);
                worst_k = std::max(worst_k, std::abs(direct - watson));
                out << "K r=" << fmt(r) << " x=" << fmt(x) << " direct="
                    << fmt(direct) << " watson=" << fmt(watson) << "\n";
            }
        double worst_j = 0.0;
        for (double x = 18.0; x <= 22.0; x += 0.5) {
            const double s = bessel_J_series(0.0, x);
            const double a = bessel_J_asymptotic(0.0, x);
            worst_j = std::max(worst_j, std::abs(s - a));
        }
        out << "K_worst_abs_diff=" << fmt(worst_k) << "\n";
        out << "J0_overlap_worst=" << fmt(worst_j) << "\n";
        return 0;
    }
    throw Usage("unknown bessel target '" + what + "'");
}

int cmd_identities(const Config& cfg, std::ostream& out) {
    const std::uint64_t seed =
        static_cast<std::uint64_t>(get_i(cfg, "seed", 1));
    // duality + sobolev property checks
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    int duality_fail = 0, sobolev_fail = 0;
    for (int trial = 0; trial < 100; ++trial) {
        ComplexMatrix Phi(8, std::vector<std::complex<double>>(6));
        for (auto& row : Phi)
            for (auto& v : row) v = {gauss(rng), gauss(rng)};
        std::vector<std::complex<double>> b(8);
        for (auto& v : b) v = {gauss(rng), gauss(rng)};
        if (!duality_check(Phi, b, seed + trial).holds) ++duality_fail;

        std::vector<double> coef(5), coefs(5);
        for (auto& c : coef) c = gauss(rng);
        for (auto& c : coefs) c = gauss(rng);
        const auto f = [&](double x) {
            std::complex<double> v(0.0, 0.0);
            for (int k = 0; k < 5; ++k)
                v += std::complex<double>(coef[k] * std::cos((k + 1) * x),
                                          coefs[k] * std::sin((k + 1) * x));
            return v;
        };
        const auto fp = [&](double x) {
            std::complex<double> v(0.0, 0.0);
            for (int k = 0; k < 5; ++k)
                v += std::complex<double>(-coef[k] * (k + 1) * std::sin((k + 1) * x),
                                          coefs[k] * (k + 1) * std::cos((k + 1) * x));
            return v;
        };
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double a = gauss(rng), Delta = 0.5 + unif(rng);
        const double u = a + Delta * unif(rng);
        if (!sobolev_check(f, fp, a, Delta, u).holds) ++sobolev_fail;
    }
    out << "duality_failures=" << duality_fail << "\n";
    out << "sobolev_failures=" << sobolev_fail << "\n";

    // zeta sanity
    const std::complex<double> z10 = zeta_one_plus_it(10.0);
    out << "zeta(1+10i)=" << fmt(z10.real()) << (z10.imag() < 0 ? "" : "+")
        << fmt(z10.imag()) << "i\n";

    // summation-formula reports need measured spectral data
    const std::string path = dataset_path(cfg);
    if (path.empty()) {
        IdentityReport rep;
        rep.status = CheckStatus::skipped_no_data;
        out << rep.to_json() << "\n";
        return 0;
    }
    const SpectralDataset ds = load_spectral_dataset(path);
    const SmoothBump psi = make_bump(get_d(cfg, "psi_lo", 1.0),
                                     get_d(cfg, "psi_lo", 1.0) + 0.25,
                                     get_d(cfg, "psi_hi", 2.0) - 0.25,
                                     get_d(cfg, "psi_hi", 2.0), 1.0);
    KuznetsovTruncation tr;
    tr.q_max = static_cast<int>(get_i(cfg, "qmax", 64));
    tr.r_max = get_d(cfg, "rmax", 20.0);
    const int m = static_cast<int>(get_i(cfg, "m", 1));
    const int n = static_cast<int>(get_i(cfg, "n", 1));
    out << kuznetsov_residual(m, n, +1, psi, ds, tr).to_json() << "\n";
    out << kuznetsov_residual(m, n, -1, psi, ds, tr).to_json() << "\n";
    if (!ds.maass_forms.empty()) {
        const std::int64_t a = get_i(cfg, "a", 1);
        const std::int64_t q = get_i(cfg, "q", 3);
        const int M = static_cast<int>(get_i(cfg, "M", 64));
        const SmoothBump W = make_bump(2.0, 3.0, 6.0, 8.0, 1.0);
        out << voronoi_residual(ds.maass_forms.front(), W, a, q, M).to_json()
            << "\n";
    }
    return 0;
}

int cmd_sieve(const Config& cfg, std::ostream& out) {
    const double K = get_d(cfg, "K", 10.0);
    const double Delta = get_d(cfg, "delta", 2.0);
    const int M = static_cast<int>(get_i(cfg, "M", 32));
    const int trials = static_cast<int>(get_i(cfg, "trials", 50));
    const std::uint64_t seed = static_cast<std::uint64_t>(get_i(cfg, "seed", 1));
    const SieveResult cont = continuous_sieve_ratio(K, Delta, M, trials, seed);
    out << "continuous_max_ratio=" << fmt(cont.max_ratio) << "\n";
    const std::string path = dataset_path(cfg);
    if (!path.empty()) {
        const SpectralDataset ds = load_spectral_dataset(path);
        const SieveResult spec = spectral_sieve_ratio(ds, K, Delta, M, trials, seed);
        out << "spectral_max_ratio=" << fmt(spec.max_ratio) << "\n";
        out << "spectral_status=" << to_string(spec.status) << "\n";
    } else {
        out << "spectral_status=" << to_string(CheckStatus::skipped_no_data)
            << "\n";
    }
    return 0;
}

BoundShape shape_from_string(const std::string& s) {
    if (s == "1") return BoundShape::theorem1;
    if (s == "2") return BoundShape::theorem2;
    if (s == "3") return BoundShape::theorem3;
    if (s == "conjecture") return BoundShape::conjecture;
    throw Usage("unknown theorem '" + s + "'");
}

int cmd_meanvalue(const Config& cfg, std::ostream& out) {
    MeanValueSpec spec;
    spec.shape = shape_from_string(get(cfg, "theorem", "2"));
    spec.N = static_cast<std::uint32_t>(get_i(cfg, "N", 4096));
    spec.L = static_cast<std::uint32_t>(get_i(cfg, "L", 64));
    spec.F = static_cast<std::uint32_t>(get_i(cfg, "F", 8));
    spec.delta = get_d(cfg, "delta", 0.125);
    spec.weighted =
        spec.shape == BoundShape::theorem1 ||
        (spec.shape == BoundShape::theorem3 && cfg.count("delta") > 0);
    const std::uint32_t needed = 2 * spec.N + 2 * spec.L + 2 * spec.F + 2;
    const HeckeCoeffTable form = load_form(cfg, needed);
    spec.form = &form;
    const int threads = static_cast<int>(get_i(cfg, "threads", 1));
    std::vector<MeanValueSpec> grid{spec};
    SweepResult sweep = envelope_sweep(grid, threads);
    if (get(cfg, "timing", "off") != "on")
        for (auto& rec : sweep.records) rec.runtime_ms = 0;
    out << kCsvHeader << "\n";
    for (const auto& rec : sweep.records) out << rec.csv_row() << "\n";
    return 0;
}

int cmd_sweep(const Config& cfg, std::ostream& out) {
    const std::string ns = get(cfg, "N", "4096,8192,16384");
    std::vector<std::uint32_t> Ns;
    std::stringstream ss(ns);
    std::string tok;
    while (std::getline(ss, tok, ','))
        Ns.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
    if (Ns.empty()) throw Usage("sweep: empty N chain");
    const double lexp = get_d(cfg, "Lexp", 0.5);
    const double fexp = get_d(cfg, "Fexp", 0.3);
    const BoundShape shape = shape_from_string(get(cfg, "theorem", "2"));
    const double delta = get_d(cfg, "delta", 0.125);

    std::uint32_t needed = 0;
    std::vector<MeanValueSpec> grid;
    for (std::uint32_t N : Ns) {
        MeanValueSpec spec;
        spec.shape = shape;
        spec.N = N;
        spec.L = static_cast<std::uint32_t>(
            std::ceil(std::pow(static_cast<double>(N), lexp)));
        spec.F = static_cast<std::uint32_t>(
            std::ceil(std::pow(static_cast<double>(N), fexp)));
        spec.delta = delta;
        spec.weighted = shape == BoundShape::theorem1;
        grid.push_back(spec);
        needed = std::max(needed, 2 * spec.N + 2 * spec.L + 2 * spec.F + 2);
    }
    const HeckeCoeffTable form = load_form(cfg, needed);
    for (auto& spec : grid) spec.form = &form;

    const int threads = static_cast<int>(get_i(cfg, "threads", 1));
    const double slack = get_d(cfg, "slack", 1.5);
    SweepResult sweep = envelope_sweep(grid, threads, slack);
    if (get(cfg, "timing", "off") != "on")
        for (auto& rec : sweep.records) rec.runtime_ms = 0;
    out << kCsvHeader << "\n";
    for (const auto& rec : sweep.records) out << rec.csv_row() << "\n";
    out << "# fitted_exponent=" << fmt(sweep.fitted_exponent) << "\n";
    out << "# envelope_exponent=" << fmt(sweep.envelope_exponent) << "\n";
    out << "# worst_ratio_growth=" << fmt(sweep.worst_ratio_growth) << "\n";
    out << "# slack_ok=" << (sweep.slack_ok ? 1 : 0) << "\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    if (args.empty()) {
        err << "usage: shiftconv <command> [--key value ...]\n"
               "commands: tables tau kloosterman circle lemma1 bessel "
               "identities sieve meanvalue sweep\n";
        return 1;
    }
    const std::string command = args[0];
    try {
        const Config cfg = parse_args(command, args, 1);

        std::ostringstream body;
        echo_config(body, command, cfg);
        int rc = 0;
        if (command == "tables") rc = cmd_tables(cfg, body);
        else if (command == "tau") rc = cmd_tau(cfg, body);
        else if (command == "kloosterman") rc = cmd_kloosterman(cfg, body);
        else if (command == "circle") rc = cmd_circle(cfg, body);
        else if (command == "lemma1") rc = cmd_lemma1(cfg, body);
        else if (command == "bessel") rc = cmd_bessel(cfg, body);
        else if (command == "identities") rc = cmd_identities(cfg, body);
        else if (command == "sieve") rc = cmd_sieve(cfg, body);
        else if (command == "meanvalue") rc = cmd_meanvalue(cfg, body);
        else if (command == "sweep") rc = cmd_sweep(cfg, body);
        else throw Usage("unknown command '" + command + "'");

        const std::string text = body.str();
        const std::string out_path = get(cfg, "out", "");
        if (!out_path.empty()) {
            std::ofstream file(out_path, std::ios::binary);
            if (!file) throw Usage("cannot open output file " + out_path);
            file << text;
        } else {
            out << text;
        }
        return rc;
    } catch (const Usage& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "invalid argument: " << e.what() << "\n";
        return 1;
    } catch (const std::out_of_range& e) {
        err << "out of range: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace shiftconv
