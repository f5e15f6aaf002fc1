// forms.hpp
//
// Cusp-form coefficient systems.  Holomorphic tables are generated from the
// exact tau table; Maass tables are ingested from text files and validated
// against the Hecke relations, never computed here.

#ifndef SHIFTCONV_FORMS_HPP
#define SHIFTCONV_FORMS_HPP

#include "shiftconv/arith.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace shiftconv {

enum class FormKind { holomorphic, maass };

struct HeckeCoeffTable {
    FormKind kind = FormKind::holomorphic;
    int weight = 12;        // holomorphic only, even, >= 12
    double kappa = 0.0;     // maass only
    int parity = +1;        // maass only, +1 or -1
    std::uint32_t n_max = 0;
    std::vector<double> t;  // t[0] unused, t[1] == 1

    double operator()(std::uint64_t n) const { return t[n]; }
};

// Weight-12 table t(n) = tau(n) / n^{11/2}.
HeckeCoeffTable holomorphic_form(std::uint32_t n_max);
HeckeCoeffTable holomorphic_form(const std::vector<BigInt>& tau);

// Largest violation of t(m) t(n) = sum_{d | (m,n)} t(mn/d^2) over pairs with
// m <= n and m*n <= n_max.  On return, bad_m/bad_n name the worst pair.
double hecke_multiplicativity_defect(const HeckeCoeffTable& form,
                                     std::uint32_t* bad_m = nullptr,
                                     std::uint32_t* bad_n = nullptr);

struct MaassFormRecord {
    double kappa = 0.0;
    int parity = +1;
    double alpha = 0.0;  // |rho(1)|^2 / cosh(pi kappa), taken from the file
    HeckeCoeffTable coeffs;
};

struct HolomorphicBasis {
    int weight = 0;
    double a_k = 0.0;
    std::uint32_t n_max = 0;
    std::vector<std::vector<double>> rho;  // rho[j][n], j = 0..forms-1
};

struct SpectralDataset {
    std::vector<MaassFormRecord> maass_forms;
    std::vector<HolomorphicBasis> holomorphic_bases;

    bool empty() const { return maass_forms.empty() && holomorphic_bases.empty(); }
};

// Line-oriented text format, '#' starts a comment:
//   maass kappa=<decimal> parity=<+1|-1> alpha=<decimal> nmax=<int>
//   <n> <t_n>                (nmax lines, n ascending from 1)
//   holo weight=<even int> a=<decimal> forms=<J> nmax=<int>
//   <n> <rho_{j}(n)>         (J blocks of nmax lines)
// Throws std::runtime_error with a line number on parse errors and with the
// offending (m, n) or form index on invariant violations.
SpectralDataset load_spectral_dataset(const std::string& path);

// Emits exactly the format above with 15 significant digits.
void write_dataset(const SpectralDataset& ds, const std::string& path);

struct MomentReport {
    double m2 = 0.0, m4 = 0.0;
    double m2_over_n = 0.0;
    double m4_over_n105 = 0.0;  // m4 / N^{1.05}
};

// m2 = sum_{n<=N} t(n)^2, m4 = sum_{n<=N} t(n)^4.
MomentReport second_fourth_moment_report(const HeckeCoeffTable& form,
                                         std::uint32_t N);

// Synthetic Hecke-multiplicative coefficient system for exercising the
// machinery when no measured spectral data is available.  Values at primes
// are seeded pseudo-random in [-2, 2] and extended by the Hecke recursion;
// this is NOT an eigenfunction of the Laplacian and identity checks against
// it stay "data-limited" by design.
HeckeCoeffTable make_synthetic_maass(double kappa, int parity,
                                     std::uint32_t n_max, std::uint64_t seed);

// a_k = 2^{2-2k} pi^{-k-1} (k-1)!
double holomorphic_weight_constant(int k);

}  // namespace shiftconv

#endif  // SHIFTCONV_FORMS_HPP
