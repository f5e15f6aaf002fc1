// spectral.hpp
//
// Desk-scale checks of the summation formulas and auxiliary inequalities:
// the Voronoi-type transformation, both trace-formula variants (truncated,
// residual-reported), the large-sieve ratio experiments, zeta on the 1-line,
// and the Sobolev / duality-principle property checks.

#ifndef SHIFTCONV_SPECTRAL_HPP
#define SHIFTCONV_SPECTRAL_HPP

#include "shiftconv/bump.hpp"
#include "shiftconv/forms.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace shiftconv {

// Euler-Maclaurin with 100 explicit terms and two correction terms.
// Good to ~1e-9 for |t| <= 100, degrading to ~1e-2 near |t| = 1e3.
std::complex<double> zeta_one_plus_it(double t);

// Oracle variant with a configurable number of explicit terms.
std::complex<double> zeta_euler_maclaurin(double t, int explicit_terms);

enum class CheckStatus { verified_to_tol, data_limited, skipped_no_data };

const char* to_string(CheckStatus s);

struct IdentityReport {
    std::complex<double> lhs;
    std::complex<double> rhs_truncated;
    double residual = 0.0;
    int terms = 0;       // dual/geometric terms used
    int q_max = 0;
    double r_max = 0.0;
    int forms_used = 0;
    CheckStatus status = CheckStatus::skipped_no_data;

    // {"lhs_re":..,"lhs_im":..,"rhs_re":..,"rhs_im":..,"residual":..,
    //  "q_max":..,"r_max":..,"forms_used":..,"status":".."}
    std::string to_json() const;
};

// Sum of t(m) e(ma/q) W(m) against its Bessel-dual expansion truncated at M
// terms.  Requires (a, q) = 1 and supp W compact in (0, inf).
IdentityReport voronoi_residual(const MaassFormRecord& form, const SmoothBump& W,
                                std::int64_t a, std::int64_t q, int M,
                                double rel_tol = 1e-8);

struct KuznetsovTruncation {
    int q_max = 64;
    double r_max = 20.0;
    int forms = 1 << 20;  // spectral terms; clipped to the dataset
};

// sign = +1: same-sign trace formula (discrete + continuous + holomorphic);
// sign = -1: opposite-sign variant (discrete + continuous only).
// The holomorphic term is evaluated only when basis data is present and
// include_holomorphic is set; it is excluded from the residual by default.
IdentityReport kuznetsov_residual(int m, int n, int sign, const SmoothBump& psi,
                                  const SpectralDataset& dataset,
                                  const KuznetsovTruncation& trunc,
                                  bool include_holomorphic = false);

struct SieveResult {
    double max_ratio = 0.0;
    int trials = 0;
    CheckStatus status = CheckStatus::skipped_no_data;
};

// max over seeded trials of
//   int_K^{K+Delta} |sum_{m<=M} a_m sigma_{2ir}(m) m^{-ir}|^2 dr
//   / ((Delta^2 + M) sum |a_m|^2).
SieveResult continuous_sieve_ratio(double K, double Delta, int M, int trials,
                                   std::uint64_t seed);

// max over seeded trials of
//   sum_{K <= kappa_j <= K+Delta} alpha_j |sum_{m<=M} a_m t_j(m)|^2
//   / ((K Delta + M) sum |a_m|^2).
SieveResult spectral_sieve_ratio(const SpectralDataset& dataset, double K,
                                 double Delta, int M, int trials,
                                 std::uint64_t seed);

struct DualityResult {
    double lhs = 0.0;
    double bound = 0.0;
    double spectral_norm = 0.0;
    bool holds = false;
};

using ComplexMatrix = std::vector<std::vector<std::complex<double>>>;

// lhs = sum_theta |sum_lambda b(lambda) Phi(lambda, theta)|^2 against
// s^2 * sum |b|^2 with s the top singular value of Phi (seeded power
// iteration on Phi* Phi to relative 1e-10; throws after 1e4 steps).
DualityResult duality_check(const ComplexMatrix& Phi,
                            const std::vector<std::complex<double>>& b,
                            std::uint64_t seed = 1);

struct SobolevResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

// |f(u)|^2 <= Delta^{-1} int |f|^2 + 2 (int |f|^2)^{1/2} (int |f'|^2)^{1/2}
// on [a, a + Delta], u inside.
SobolevResult sobolev_check(const std::function<std::complex<double>(double)>& f,
                            const std::function<std::complex<double>(double)>& fprime,
                            double a, double Delta, double u);

}  // namespace shiftconv

#endif  // SHIFTCONV_SPECTRAL_HPP
