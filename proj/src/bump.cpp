#include "shiftconv/bump.hpp"

#include "shiftconv/numerics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace shiftconv {

namespace {

// f(t) = exp(-1/t) for t > 0, 0 otherwise; the usual smooth step is
// S(t) = f(t) / (f(t) + f(1-t)), rising from 0 at t<=0 to 1 at t>=1.
// Note S(1-t) = 1 - S(t), which is what makes shared-edge bumps telescope
// exactly.
inline double glue_f(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
inline double glue_fp(double t) {
    return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0;
}
inline double glue_fpp(double t) {
    if (t <= 0.0) return 0.0;
    const double it = 1.0 / t;
    return std::exp(-it) * (it * it * it * it - 2.0 * it * it * it);
}

double step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = glue_f(t), b = glue_f(1.0 - t);
    return a / (a + b);
}

double step_d1(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double f = glue_f(t), h = glue_f(1.0 - t);
    const double fp = glue_fp(t), hp = -glue_fp(1.0 - t);
    const double D = f + h;
    return (fp * h - f * hp) / (D * D);
}

double step_d2(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double f = glue_f(t), h = glue_f(1.0 - t);
    const double fp = glue_fp(t), hp = -glue_fp(1.0 - t);
    const double fpp = glue_fpp(t), hpp = glue_fpp(1.0 - t);
    const double D = f + h, Dp = fp + hp;
    const double num1 = fpp * h - f * hpp;
    const double num2 = fp * h - f * hp;
    return num1 / (D * D) - 2.0 * num2 * Dp / (D * D * D);
}

}  // namespace

SmoothBump::SmoothBump(double s0, double p0, double p1, double s1,
                       double height)
    : s0_(s0), p0_(p0), p1_(p1), s1_(s1), height_(height) {}

double SmoothBump::value(double x) const {
    if (height_ == 0.0) return 0.0;
    if (x <= s0_ || x >= s1_) return 0.0;
    if (x >= p0_ && x <= p1_) return height_;
    if (x < p0_) return height_ * step((x - s0_) / (p0_ - s0_));
    return height_ * step((s1_ - x) / (s1_ - p1_));
}

double SmoothBump::transition_width() const {
    return std::min(p0_ - s0_, s1_ - p1_);
}

double SmoothBump::derivative(double x, int order) const {
    if (order <= 0) return value(x);
    if (order == 1) {
        if (x <= s0_ || x >= s1_ || (x >= p0_ && x <= p1_)) return 0.0;
        if (x < p0_) {
            const double w = p0_ - s0_;
            return height_ * step_d1((x - s0_) / w) / w;
        }
        const double w = s1_ - p1_;
        return -height_ * step_d1((s1_ - x) / w) / w;
    }
    if (order == 2) {
        if (x <= s0_ || x >= s1_ || (x >= p0_ && x <= p1_)) return 0.0;
        if (x < p0_) {
            const double w = p0_ - s0_;
            return height_ * step_d2((x - s0_) / w) / (w * w);
        }
        const double w = s1_ - p1_;
        return height_ * step_d2((s1_ - x) / w) / (w * w);
    }
    // central differences on the previous order
    const double h = 1e-3 * transition_width();
    return (derivative(x + h, order - 1) - derivative(x - h, order - 1)) /
           (2.0 * h);
}

SmoothBump make_bump(double s0, double p0, double p1, double s1,
                     double height) {
    if (!(s0 < p0 && p0 <= p1 && p1 < s1))
        throw std::invalid_argument(
            "make_bump: need s0 < p0 <= p1 < s1, got [" + std::to_string(s0) +
            ", " + std::to_string(p0) + ", " + std::to_string(p1) + ", " +
            std::to_string(s1) + "]");
    if (!(height > 0.0))
        throw std::invalid_argument("make_bump: height must be positive");
    return SmoothBump(s0, p0, p1, s1, height);
}

NuFunction make_nu(double delta) {
    if (!(delta > 0.0 && delta < 1.0 / 3.0))
        throw std::invalid_argument("make_nu: delta must lie in (0, 1/3)");
    // support [-Delta, -Delta/2], transitions of width Delta/8 on each side
    const double s0 = -delta;
    const double s1 = -delta / 2.0;
    const double w = delta / 8.0;
    SmoothBump raw = make_bump(s0, s0 + w, s1 - w, s1, 1.0);

    const double integral =
        gl_composite([&raw](double x) { return raw.value(x); }, s0, s1, 512);
    const double target = 2.0 * delta;  // (1/(2 Delta)) * integral == 1
    const double height = target / integral;

    NuFunction nu;
    nu.delta = delta;
    nu.bump = make_bump(s0, s0 + w, s1 - w, s1, height);
    nu.realized_height = height;
    return nu;
}

std::vector<SmoothBump> dyadic_partition(double U1) {
    if (!(U1 > 0.0 && U1 <= 0.25))
        throw std::invalid_argument("dyadic_partition: U1 must be in (0, 1/4]");

    const double log2_inv = std::log2(1.0 / U1);
    const int t_min = std::max(2, static_cast<int>(std::ceil(log2_inv)));
    const int t_max =
        std::max(t_min, static_cast<int>(std::floor(log2_inv)) + 2);

    // T bumps need T+1 edge intervals.  Edge i has width U1 * 2^min(i,T-i,cap);
    // nominal plateau gaps equal the smaller neighbouring edge width, shrunk
    // uniformly if the layout would overflow [1, 2].  Prefer the most dyadic
    // layout (largest cap), then the largest count that fits.
    for (int cap = t_max / 2; cap >= 0; --cap) {
        for (int T = t_max; T >= t_min; --T) {
            std::vector<double> w(T + 1), gap(T);
            double wsum = 0.0, gsum = 0.0;
            for (int i = 0; i <= T; ++i) {
                const int lvl = std::min({i, T - i, cap});
                w[i] = U1 * std::ldexp(1.0, lvl);
                wsum += w[i];
            }
            for (int i = 0; i < T; ++i) {
                gap[i] = std::min(w[i], w[i + 1]);
                gsum += gap[i];
            }
            if (wsum > 1.0 + 1e-12) continue;
            double gamma = gsum > 0.0 ? (1.0 - wsum) / gsum : 0.0;
            double slack = 0.0;
            if (gamma > 1.0) {
                gamma = 1.0;
                slack = 1.0 - wsum - gsum;  // absorbed by the central gap
            }
            std::vector<double> lo(T + 1), hi(T + 1);
            double x = 1.0;
            for (int i = 0; i <= T; ++i) {
                lo[i] = x;
                hi[i] = x + w[i];
                x = hi[i];
                if (i < T) {
                    x += gamma * gap[i];
                    if (i == (T - 1) / 2) x += slack;
                }
            }
            std::vector<SmoothBump> out;
            out.reserve(T);
            for (int i = 1; i <= T; ++i)
                out.push_back(make_bump(lo[i - 1], hi[i - 1], lo[i], hi[i], 1.0));
            return out;
        }
    }
    throw std::runtime_error("dyadic_partition: no feasible layout");
}

}  // namespace shiftconv
