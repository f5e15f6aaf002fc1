// meanvalue.hpp
//
// The headline triple sums
//   sum_{f ~ F} sum_{n ~ N} | sum_{l ~ L} t(n+l) t(n+l+f) [weight] |^2
// with dyadic ranges m ~ M meaning M < m <= 2M, their bound envelopes, and
// doubling-chain sweeps with fitted growth exponents.

#ifndef SHIFTCONV_MEANVALUE_HPP
#define SHIFTCONV_MEANVALUE_HPP

#include "shiftconv/circle.hpp"
#include "shiftconv/forms.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace shiftconv {

enum class BoundShape {
    theorem1,    // weighted: N^3 (dL)^{-2} + N^2 + N dL F
    theorem2,    // unweighted: N^2 F^{1/2} + N L F
    theorem3,    // holomorphic analogue; same shapes on normalized t
    conjecture,  // N^2 + N L F
};

struct MeanValueSpec {
    const HeckeCoeffTable* form = nullptr;
    std::uint32_t N = 0, L = 0, F = 0;
    double delta = 0.0;        // weighted runs only
    bool weighted = false;
    double B = 1.4;            // weight window [B L + n, C L + n], C = B + delta/2
    BoundShape shape = BoundShape::theorem2;

    void validate() const;     // throws std::invalid_argument
};

// Deterministic: per-f partials accumulated over n in order, merged in f
// order; the thread budget cannot change any bit of the result.
double triple_sum(const MeanValueSpec& spec, int threads = 1);

// Envelope with every epsilon-power rendered as N^{0.05}.
double envelope(const MeanValueSpec& spec);

struct ExperimentRecord {
    std::uint32_t N = 0, L = 0, F = 0;
    double delta = 0.0;
    bool weighted = false;
    int shape = 2;
    double measured = 0.0;
    double envelope = 0.0;
    double ratio = 0.0;
    std::int64_t runtime_ms = 0;
    std::uint64_t checksum = 0;  // bit pattern hash of the measured sum

    std::string csv_row() const;  // matches kCsvHeader
};

inline constexpr const char* kCsvHeader =
    "theorem,N,L,F,delta,weighted,measured,envelope,ratio,runtime_ms";

struct SweepResult {
    std::vector<ExperimentRecord> records;
    double fitted_exponent = 0.0;     // OLS slope of log measured vs log N
    double envelope_exponent = 0.0;   // same for the envelope
    double worst_ratio_growth = 0.0;  // max ratio_{i+1}/ratio_i per doubling
    bool slack_ok = true;             // growth within the configured slack
    bool fit_valid = false;           // needs >= 2 distinct N
};

SweepResult envelope_sweep(const std::vector<MeanValueSpec>& grid, int threads,
                           double slack_per_doubling = 1.5);

struct BfMeanSquareResult {
    double direct = 0.0;         // sum |b_f(n)|^2
    double star = 0.0;           // sum |b*_f(n)|^2
    double zero_shift_star = 0.0;   // sum_n |b*_0(n)|^2
    double envelope_shifted = 0.0;  // N^3 (dL)^{-2} + N^2 + N dL F (eps-dressed)
    double envelope_zero = 0.0;     // N (dL)^2 (eps-dressed)
};

// Mean squares of b_f(n) and b*_f(n) over |f| ~ F, n ~ N at desk scale,
// with the identity path supplying the starred values.
BfMeanSquareResult weighted_bf_meansquare(const HeckeCoeffTable& form,
                                          std::uint32_t N, std::uint32_t F,
                                          std::uint32_t L, double delta,
                                          const CircleApprox& approx,
                                          int threads = 1);

}  // namespace shiftconv

#endif  // SHIFTCONV_MEANVALUE_HPP
