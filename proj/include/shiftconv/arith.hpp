// arith.hpp
//
// Exact multiplicative-function kernels: linear-sieve tables for mu/phi/d,
// generalized divisor sums sigma_{2ir}, the Ramanujan tau table from the
// eta-product, normalized Hecke eigenvalues, and modular inverses.

#ifndef SHIFTCONV_ARITH_HPP
#define SHIFTCONV_ARITH_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <vector>

namespace shiftconv {

using BigInt = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// Sieve tables, built once and then immutable (safe for concurrent readers).
// Index 0 is unused.
// ---------------------------------------------------------------------------
struct ArithTables {
    std::uint32_t n_max = 0;
    std::vector<std::int8_t> mobius;
    std::vector<std::uint64_t> totient;
    std::vector<std::uint32_t> divisor_count;
    std::vector<std::uint32_t> smallest_prime_factor;

    int mu(std::uint64_t n) const { return mobius.at(n); }
    std::uint64_t phi(std::uint64_t n) const { return totient.at(n); }
    std::uint32_t d(std::uint64_t n) const { return divisor_count.at(n); }

    // Ascending list of divisors of n (n <= n_max), via the spf table.
    std::vector<std::uint64_t> divisors(std::uint64_t n) const;
};

// Linear sieve; throws std::invalid_argument for n_max == 0.
ArithTables build_tables(std::uint32_t n_max);

// sigma_{2ir}(n) = sum_{d|n} d^{2ir}; |result| <= d(n).  Divisors are found
// by trial division, so no tables are needed.
std::complex<double> sigma_2ir(std::uint64_t n, double r);

// tau(n) for n = 1..n_max, exact.  Computed by expanding the 24th power of
// the eta quotient as the 8th power of the sparse cube
//   prod (1-q^j)^3 = sum_{j>=0} (-1)^j (2j+1) q^{j(j+1)/2}.
// Index 0 is unused.
std::vector<BigInt> ramanujan_tau_table(std::uint32_t n_max);

// t(n) = tau(n) / n^{11/2}.  Throws std::out_of_range past the table.
double normalized_hecke_holomorphic(std::uint32_t n,
                                    const std::vector<BigInt>& tau);

// Inverse of a mod q, in [1, q) for q >= 2.  Throws std::invalid_argument
// when gcd(a, q) != 1 or q < 1.  For the trivial ring q == 1 the unique
// residue 0 is returned.
std::int64_t mod_inverse(std::int64_t a, std::int64_t q);

}  // namespace shiftconv

#endif  // SHIFTCONV_ARITH_HPP
