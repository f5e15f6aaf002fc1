// expsums.hpp
//
// Complete exponential sums over residues: Kloosterman sums by direct
// enumeration, Ramanujan sums by the divisor formula (cross-checked against
// the Kloosterman path), and the weighted coefficient sums S(W, x).

#ifndef SHIFTCONV_EXPSUMS_HPP
#define SHIFTCONV_EXPSUMS_HPP

#include "shiftconv/bump.hpp"
#include "shiftconv/forms_fwd.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace shiftconv {

// ---------------------------------------------------------------------------
// Per-modulus tables: inverses of the invertible residues and the q-th roots
// of unity.  Build once per q when evaluating many sums at the same modulus.
// ---------------------------------------------------------------------------
class ResidueTables {
public:
    explicit ResidueTables(std::int64_t q);

    std::int64_t modulus() const { return q_; }
    std::int64_t phi() const { return static_cast<std::int64_t>(units_.size()); }

    // S(m, n; q) = sum over (a,q)=1 of e((ma + n a^{-1})/q); always real.
    // Throws std::runtime_error if the imaginary part of the accumulator
    // exceeds 1e-8 * phi(q).
    double kloosterman(std::int64_t m, std::int64_t n) const;

private:
    std::int64_t q_;
    std::vector<std::int64_t> units_;     // a with gcd(a,q)=1, ascending
    std::vector<std::int64_t> inverses_;  // matching a^{-1} mod q
    std::vector<double> cos_, sin_;       // e(j/q) for j = 0..q-1
};

// One-shot wrappers.
double kloosterman(std::int64_t m, std::int64_t n, std::int64_t q);

// c_q(f) = sum_{d | (q, f)} d * mu(q/d), exact.  Also evaluates the
// Kloosterman path S(f, 0; q) and throws std::runtime_error if the two
// disagree beyond 1e-6.
std::int64_t ramanujan_sum(std::int64_t q, std::int64_t f);

// S(W, x) = sum_m W(m) t(m) e(mx) over the integers in supp W.
// Throws std::out_of_range if supp W sticks out of the coefficient table.
std::complex<double> exp_sum_S(const SmoothBump& W, const HeckeCoeffTable& coeffs,
                               double x);

}  // namespace shiftconv

#endif  // SHIFTCONV_EXPSUMS_HPP
