#include "shiftconv/meanvalue.hpp"

#include "shiftconv/numerics.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace shiftconv {

void MeanValueSpec::validate() const {
    if (form == nullptr)
        throw std::invalid_argument("MeanValueSpec: no coefficient table");
    if (N == 0 || L == 0 || F == 0)
        throw std::invalid_argument("MeanValueSpec: N, L, F must be positive");
    if (static_cast<double>(L) > std::pow(static_cast<double>(N), 0.99))
        throw std::invalid_argument("MeanValueSpec: L exceeds N^{0.99}");
    if (weighted) {
        if (!(delta > 0.0 && delta <= 0.25))
            throw std::invalid_argument("MeanValueSpec: delta out of (0, 1/4]");
        if (static_cast<double>(F) > delta * static_cast<double>(L))
            throw std::invalid_argument(
                "MeanValueSpec: weighted runs need F <= delta * L");
        if (!(B >= 1.0 && B + delta / 2.0 <= 2.0))
            throw std::invalid_argument("MeanValueSpec: B window leaves [1, 2]");
    } else {
        if (static_cast<double>(F) > std::pow(static_cast<double>(N), 0.4))
            throw std::invalid_argument(
                "MeanValueSpec: unweighted runs need F <= N^{2/5}");
    }
    const std::uint64_t top = 2ULL * N + 2ULL * L + 2ULL * F;
    if (top > form->n_max)
        throw std::invalid_argument(
            "MeanValueSpec: window reaches " + std::to_string(top) +
            " beyond the coefficient table (" + std::to_string(form->n_max) + ")");
}

namespace {

// Plain left-to-right inner sum; this exact order is what the naive oracle
// in the tests reproduces.
double inner_sum(const std::vector<double>& t, std::uint64_t n, std::uint32_t L,
                 std::uint32_t f, const std::vector<double>* weight) {
    double s = 0.0;
    if (weight == nullptr) {
        for (std::uint32_t l = L + 1; l <= 2 * L; ++l)
            s += t[n + l] * t[n + l + f];
    } else {
        const std::vector<double>& w = *weight;
        for (std::uint32_t l = L + 1; l <= 2 * L; ++l) {
            const double wl = w[l - (L + 1)];
            if (wl == 0.0) continue;
            s += t[n + l] * t[n + l + f] * wl;
        }
    }
    return s;
}

// Per-f partial: Neumaier over n ~ N of the squared inner sum.  The sliding
// update keeps the window sum in plain double, identical to recomputation up
// to roundoff only, so it is reserved for large unweighted runs.
double per_shift_partial(const MeanValueSpec& spec, std::uint32_t f,
                         const std::vector<double>* weight, bool sliding) {
    const std::vector<double>& t = spec.form->t;
    NeumaierSum acc;
    if (!sliding) {
        for (std::uint64_t n = spec.N + 1; n <= 2ULL * spec.N; ++n) {
            const double s = inner_sum(t, n, spec.L, f, weight);
            acc.add(s * s);
        }
    } else {
        std::uint64_t n = spec.N + 1;
        double s = inner_sum(t, n, spec.L, f, weight);
        acc.add(s * s);
        for (++n; n <= 2ULL * spec.N; ++n) {
            s += t[n + 2 * spec.L] * t[n + 2 * spec.L + f] -
                 t[n + spec.L] * t[n + spec.L + f];
            acc.add(s * s);
        }
    }
    return acc.value();
}

std::vector<double> weight_window(const MeanValueSpec& spec) {
    // W_n(n + l) depends only on l: a bump on [B L, C L] in the l variable
    const double Ld = static_cast<double>(spec.L);
    const double C = spec.B + spec.delta / 2.0;
    const double width = (C - spec.B) * Ld;
    const SmoothBump bump =
        make_bump(spec.B * Ld, spec.B * Ld + 0.25 * width,
                  C * Ld - 0.25 * width, C * Ld, 1.0);
    std::vector<double> w(spec.L);
    for (std::uint32_t l = spec.L + 1; l <= 2 * spec.L; ++l)
        w[l - (spec.L + 1)] = bump.value(static_cast<double>(l));
    return w;
}

constexpr std::uint64_t kSlidingThreshold = 1ULL << 33;

std::uint64_t fnv1a(std::uint64_t h, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i) {
        h ^= (bits >> (8 * i)) & 0xffULL;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

double triple_sum(const MeanValueSpec& spec, int threads) {
    spec.validate();
    std::vector<double> wbuf;
    const std::vector<double>* weight = nullptr;
    if (spec.weighted) {
        wbuf = weight_window(spec);
        weight = &wbuf;
    }
    const bool sliding =
        !spec.weighted &&
        static_cast<std::uint64_t>(spec.N) * spec.L * spec.F > kSlidingThreshold;

    std::vector<double> partial(spec.F);
    parallel_for(spec.F, threads, [&](std::size_t i) {
        const std::uint32_t f = spec.F + 1 + static_cast<std::uint32_t>(i);
        partial[i] = per_shift_partial(spec, f, weight, sliding);
    });
    NeumaierSum total;
    for (double p : partial) total.add(p);
    return total.value();
}

double envelope(const MeanValueSpec& spec) {
    const double N = static_cast<double>(spec.N);
    const double L = static_cast<double>(spec.L);
    const double F = static_cast<double>(spec.F);
    const double eps = std::pow(N, 0.05);
    const double dL = spec.delta * L;
    switch (spec.shape) {
        case BoundShape::theorem1:
            return (N * N * N / (dL * dL) + N * N + N * dL * F) * eps;
        case BoundShape::theorem2:
            return (N * N * std::sqrt(F) + N * L * F) * eps;
        case BoundShape::theorem3:
            return spec.weighted
                       ? (N * N * N / (dL * dL) + N * N + N * dL * F) * eps
                       : (N * N * std::sqrt(F) + N * L * F) * eps;
        case BoundShape::conjecture:
            return (N * N + N * L * F) * eps;
    }
    throw std::logic_error("envelope: unknown shape");
}

std::string ExperimentRecord::csv_row() const {
    const char* name = "2";
    switch (shape) {
        case 1: name = "1"; break;
        case 2: name = "2"; break;
        case 3: name = "3"; break;
        case 0: name = "conjecture"; break;
        default: break;
    }
    char buf[320];
    std::snprintf(buf, sizeof buf, "%s,%u,%u,%u,%.17g,%d,%.17g,%.17g,%.17g,%lld",
                  name, N, L, F, delta, weighted ? 1 : 0, measured, envelope,
                  ratio, static_cast<long long>(runtime_ms));
    return buf;
}

SweepResult envelope_sweep(const std::vector<MeanValueSpec>& grid, int threads,
                           double slack_per_doubling) {
    SweepResult out;
    out.records.reserve(grid.size());
    for (const MeanValueSpec& spec : grid) {
        spec.validate();
        const auto t0 = std::chrono::steady_clock::now();
        const double measured = triple_sum(spec, threads);
        const auto t1 = std::chrono::steady_clock::now();
        ExperimentRecord rec;
        rec.N = spec.N;
        rec.L = spec.L;
        rec.F = spec.F;
        rec.delta = spec.delta;
        rec.weighted = spec.weighted;
        rec.shape = static_cast<int>(spec.shape == BoundShape::conjecture
                                         ? 0
                                         : (spec.shape == BoundShape::theorem1
                                                ? 1
                                                : (spec.shape == BoundShape::theorem3 ? 3 : 2)));
        rec.measured = measured;
        rec.envelope = envelope(spec);
        rec.ratio = rec.envelope > 0.0 ? measured / rec.envelope : 0.0;
        rec.runtime_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
        rec.checksum = fnv1a(1469598103934665603ULL, measured);
        out.records.push_back(rec);
    }

    // OLS of log(measured) and log(envelope) against log N
    double sx = 0, sy = 0, sxx = 0, sxy = 0, se = 0, sxe = 0;
    int pts = 0;
    for (const auto& rec : out.records) {
        if (rec.measured <= 0.0 || rec.envelope <= 0.0) continue;
        const double x = std::log(static_cast<double>(rec.N));
        const double y = std::log(rec.measured);
        const double e = std::log(rec.envelope);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        se += e; sxe += x * e;
        ++pts;
    }
    const double denom = pts * sxx - sx * sx;
    if (pts >= 2 && std::abs(denom) > 1e-12) {
        out.fitted_exponent = (pts * sxy - sx * sy) / denom;
        out.envelope_exponent = (pts * sxe - sx * se) / denom;
        out.fit_valid = true;
    }

    for (std::size_t i = 1; i < out.records.size(); ++i) {
        const auto& prev = out.records[i - 1];
        const auto& cur = out.records[i];
        if (prev.ratio <= 0.0 || cur.N <= prev.N) continue;
        const double doublings =
            std::log2(static_cast<double>(cur.N) / static_cast<double>(prev.N));
        const double allowed = std::pow(slack_per_doubling, doublings);
        const double growth = cur.ratio / prev.ratio;
        const double per_doubling = std::pow(growth, 1.0 / std::max(doublings, 1e-9));
        out.worst_ratio_growth = std::max(out.worst_ratio_growth, per_doubling);
        if (growth > allowed) out.slack_ok = false;
    }
    return out;
}

BfMeanSquareResult weighted_bf_meansquare(const HeckeCoeffTable& form,
                                          std::uint32_t N, std::uint32_t F,
                                          std::uint32_t L, double delta,
                                          const CircleApprox& approx,
                                          int threads) {
    if (N == 0 || F == 0 || L == 0)
        throw std::invalid_argument("weighted_bf_meansquare: N, F, L positive");
    if (static_cast<double>(F) > delta * static_cast<double>(L))
        throw std::invalid_argument("weighted_bf_meansquare: need F <= delta*L");

    struct Partial {
        double direct = 0.0, star = 0.0, zero = 0.0;
    };
    std::vector<Partial> partials(N);
    parallel_for(N, threads, [&](std::size_t i) {
        const std::int64_t n = static_cast<std::int64_t>(N) + 1 +
                               static_cast<std::int64_t>(i);
        const ShiftedCoeffProblem pb = make_shifted_problem(form, n, L, delta);
        Partial p;
        NeumaierSum direct, star;
        for (std::int64_t f = -2 * static_cast<std::int64_t>(F);
             f <= 2 * static_cast<std::int64_t>(F); ++f) {
            if (std::abs(f) <= static_cast<std::int64_t>(F) || f == 0) continue;
            const double bd = b_f_direct(pb, f);
            const double bs = b_f_star(pb, approx, f);
            direct.add(bd * bd);
            star.add(bs * bs);
        }
        p.direct = direct.value();
        p.star = star.value();
        const double b0 = b_f_star(pb, approx, 0);
        p.zero = b0 * b0;
        partials[i] = p;
    });

    BfMeanSquareResult out;
    NeumaierSum d, s, z;
    for (const Partial& p : partials) {
        d.add(p.direct);
        s.add(p.star);
        z.add(p.zero);
    }
    out.direct = d.value();
    out.star = s.value();
    out.zero_shift_star = z.value();
    const double Nd = N, Ld = L;
    const double dL = delta * Ld;
    const double eps = std::pow(Nd, 0.05);
    out.envelope_shifted =
        (Nd * Nd * Nd / (dL * dL) + Nd * Nd + Nd * dL * F) * eps;
    out.envelope_zero = Nd * dL * dL * eps;
    return out;
}

}  // namespace shiftconv
