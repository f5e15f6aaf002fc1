// numerics.hpp
//
// Shared numerical plumbing: compensated summation, Gauss-Legendre panel
// quadrature with doubling, and a deterministic parallel-for.  Everything
// here is deliberately order-fixed so that results do not depend on the
// thread budget.

#ifndef SHIFTCONV_NUMERICS_HPP
#define SHIFTCONV_NUMERICS_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace shiftconv {

// ---------------------------------------------------------------------------
// Neumaier-compensated accumulator.  Unlike plain Kahan it also tracks the
// error when the incoming term dominates the running sum.
// ---------------------------------------------------------------------------
class NeumaierSum {
public:
    NeumaierSum() = default;

    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    NeumaierSum& operator+=(double x) { add(x); return *this; }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// ---------------------------------------------------------------------------
// Gauss-Legendre rule.  Nodes/weights are solved at first use by Newton
// iteration on the Legendre polynomial, to machine precision.
// ---------------------------------------------------------------------------
struct GaussLegendreRule {
    std::vector<double> nodes;    // on (-1, 1)
    std::vector<double> weights;
};

// n-point rule; cached per n, thread-safe after first call for a given n.
const GaussLegendreRule& gauss_legendre(int n);

// Integrate f over [a, b] with a single n-point rule.
template <class F>
double gl_panel(F&& f, double a, double b, int n = 16) {
    const GaussLegendreRule& r = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    NeumaierSum s;
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
        s.add(r.weights[i] * f(mid + half * r.nodes[i]));
    return half * s.value();
}

// Composite rule with `panels` equal panels over [a, b].
template <class F>
double gl_composite(F&& f, double a, double b, std::size_t panels, int n = 16) {
    const double h = (b - a) / static_cast<double>(panels);
    NeumaierSum s;
    for (std::size_t p = 0; p < panels; ++p)
        s.add(gl_panel(f, a + h * static_cast<double>(p),
                       a + h * static_cast<double>(p + 1), n));
    return s.value();
}

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;  // |last - previous|
    std::size_t panels = 0;
    bool converged = false;
};

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    std::size_t initial_panels = 8;
    std::size_t max_panels = (std::size_t(1) << 20);
    int points = 16;
};

// Composite Gauss-Legendre with panel-count doubling until two successive
// estimates agree to tolerance.  `converged` is false when the panel budget
// runs out; callers decide whether that is an error.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b,
                                    const QuadratureOptions& opt = {}) {
    QuadratureResult res;
    if (!(b > a)) { res.converged = true; return res; }
    std::size_t panels = opt.initial_panels;
    double prev = gl_composite(f, a, b, panels, opt.points);
    while (panels * 2 <= opt.max_panels) {
        panels *= 2;
        const double cur = gl_composite(f, a, b, panels, opt.points);
        const double diff = std::abs(cur - prev);
        res.value = cur;
        res.error_estimate = diff;
        res.panels = panels;
        if (diff <= std::max(opt.abs_tol, opt.rel_tol * std::abs(cur))) {
            res.converged = true;
            return res;
        }
        prev = cur;
    }
    res.value = prev;
    res.panels = panels;
    return res;
}

// ---------------------------------------------------------------------------
// Deterministic parallel-for.  Work is split into contiguous index chunks;
// each index writes only its own slot, so the merge order (and therefore the
// result) is independent of the thread budget.
// ---------------------------------------------------------------------------
void parallel_for(std::size_t n, int thread_budget,
                  const std::function<void(std::size_t)>& body);

// Convenience: evaluate fn(i) into a vector, in parallel, deterministically.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, int thread_budget, F&& fn) {
    std::vector<T> out(n);
    parallel_for(n, thread_budget, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;

// exp(2*pi*i*alpha) with the argument reduced mod 1 before scaling.
inline std::complex<double> unit_phase(double alpha) {
    double frac = alpha - std::floor(alpha);
    const double ang = kTwoPi * frac;
    return {std::cos(ang), std::sin(ang)};
}

}  // namespace shiftconv

#endif  // SHIFTCONV_NUMERICS_HPP
