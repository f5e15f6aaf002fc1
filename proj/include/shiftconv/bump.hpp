// bump.hpp
//
// Smooth compactly supported plateau weights.  One canonical C^inf glue
// t -> exp(-1/t) drives every bump in the project, so derivative constants
// are uniform and there is a single code path to test.

#ifndef SHIFTCONV_BUMP_HPP
#define SHIFTCONV_BUMP_HPP

#include <vector>

namespace shiftconv {

// ---------------------------------------------------------------------------
// value = height on [p0, p1], 0 outside (s0, s1), C^inf transitions between.
// First two derivatives are analytic; higher orders fall back to central
// differences with step 1e-3 * (transition width).
// ---------------------------------------------------------------------------
class SmoothBump {
public:
    SmoothBump() = default;
    SmoothBump(double s0, double p0, double p1, double s1, double height);

    double operator()(double x) const { return value(x); }
    double value(double x) const;
    double derivative(double x, int order) const;

    double support_lo() const { return s0_; }
    double support_hi() const { return s1_; }
    double plateau_lo() const { return p0_; }
    double plateau_hi() const { return p1_; }
    double height() const { return height_; }
    // Smallest transition width; the natural scale for derivative bounds.
    double transition_width() const;

private:
    double s0_ = 0, p0_ = 0, p1_ = 0, s1_ = 0, height_ = 0;
};

// Throws std::invalid_argument unless s0 < p0 <= p1 < s1 and height > 0.
SmoothBump make_bump(double s0, double p0, double p1, double s1, double height);

// ---------------------------------------------------------------------------
// The circle-method averaging weight: a plateau bump on [-Delta, -Delta/2]
// rescaled so that (1/(2 Delta)) * integral == 1.  The asymmetric support is
// deliberate and preserved.
// ---------------------------------------------------------------------------
struct NuFunction {
    double delta = 0;        // Delta
    SmoothBump bump;         // already rescaled
    double realized_height = 0;

    double value(double x) const { return bump.value(x); }
    double operator()(double x) const { return bump.value(x); }
};

// Throws std::invalid_argument unless 0 < delta < 1/3.
NuFunction make_nu(double delta);

// ---------------------------------------------------------------------------
// Telescoping dyadic family approximating the indicator of [1, 2]: adjacent
// bumps share their transition interval, so slopes cancel exactly and the
// sum equals 1 strictly between the two outermost edges.  Edge widths double
// away from the endpoints.  The number of bumps lands in
// [log2(1/U1), log2(1/U1) + 2].
// ---------------------------------------------------------------------------
std::vector<SmoothBump> dyadic_partition(double U1);

}  // namespace shiftconv

#endif  // SHIFTCONV_BUMP_HPP
