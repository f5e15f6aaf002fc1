#include "shiftconv/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace shiftconv {

std::vector<std::uint64_t> ArithTables::divisors(std::uint64_t n) const {
    if (n == 0 || n > n_max)
        throw std::out_of_range("ArithTables::divisors: n out of range");
    std::vector<std::uint64_t> divs{1};
    std::uint64_t m = n;
    while (m > 1) {
        const std::uint64_t p = smallest_prime_factor[m];
        int e = 0;
        while (m % p == 0) { m /= p; ++e; }
        const std::size_t base = divs.size();
        std::uint64_t pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

ArithTables build_tables(std::uint32_t n_max) {
    if (n_max == 0)
        throw std::invalid_argument("build_tables: n_max must be positive");
    ArithTables t;
    t.n_max = n_max;
    t.mobius.assign(n_max + 1, 0);
    t.totient.assign(n_max + 1, 0);
    t.divisor_count.assign(n_max + 1, 0);
    t.smallest_prime_factor.assign(n_max + 1, 0);

    t.mobius[1] = 1;
    t.totient[1] = 1;
    t.divisor_count[1] = 1;
    t.smallest_prime_factor[1] = 1;

    // exponent of spf(i) in i, needed for the d(n) recurrence
    std::vector<std::uint8_t> spf_exp(n_max + 1, 0);
    std::vector<std::uint32_t> primes;

    for (std::uint32_t i = 2; i <= n_max; ++i) {
        if (t.smallest_prime_factor[i] == 0) {
            t.smallest_prime_factor[i] = i;
            t.mobius[i] = -1;
            t.totient[i] = i - 1;
            t.divisor_count[i] = 2;
            spf_exp[i] = 1;
            primes.push_back(i);
        }
        for (std::uint32_t p : primes) {
            if (p > t.smallest_prime_factor[i]) break;
            const std::uint64_t ip = std::uint64_t(i) * p;
            if (ip > n_max) break;
            t.smallest_prime_factor[ip] = p;
            if (p == t.smallest_prime_factor[i]) {
                t.mobius[ip] = 0;
                t.totient[ip] = t.totient[i] * p;
                spf_exp[ip] = spf_exp[i] + 1;
                t.divisor_count[ip] =
                    t.divisor_count[i] / (spf_exp[i] + 1) * (spf_exp[i] + 2);
                break;
            }
            t.mobius[ip] = -t.mobius[i];
            t.totient[ip] = t.totient[i] * (p - 1);
            spf_exp[ip] = 1;
            t.divisor_count[ip] = t.divisor_count[i] * 2;
        }
    }
    return t;
}

std::complex<double> sigma_2ir(std::uint64_t n, double r) {
    if (n == 0) throw std::invalid_argument("sigma_2ir: n must be positive");
    std::complex<double> sum(0.0, 0.0);
    for (std::uint64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        const double ld = std::log(static_cast<double>(d));
        sum += std::complex<double>(std::cos(2.0 * r * ld),
                                    std::sin(2.0 * r * ld));
        const std::uint64_t e = n / d;
        if (e != d) {
            const double le = std::log(static_cast<double>(e));
            sum += std::complex<double>(std::cos(2.0 * r * le),
                                        std::sin(2.0 * r * le));
        }
    }
    return sum;
}

std::vector<BigInt> ramanujan_tau_table(std::uint32_t n_max) {
    if (n_max == 0)
        throw std::invalid_argument("ramanujan_tau_table: n_max must be positive");
    // Sparse cube: prod (1-q^j)^3 = sum_{j>=0} (-1)^j (2j+1) q^{j(j+1)/2}.
    const std::uint32_t deg = n_max - 1;  // tau(n) is the q^{n-1} coefficient
    struct Term { std::uint32_t off; std::int64_t coef; };
    std::vector<Term> sparse;
    for (std::uint64_t j = 0;; ++j) {
        const std::uint64_t off = j * (j + 1) / 2;
        if (off > deg) break;
        const std::int64_t c = (j % 2 == 0) ? std::int64_t(2 * j + 1)
                                            : -std::int64_t(2 * j + 1);
        sparse.push_back({static_cast<std::uint32_t>(off), c});
    }

    // dense <- dense * sparse, truncated at degree `deg`, seven times
    std::vector<BigInt> dense(deg + 1, BigInt(0));
    for (const Term& s : sparse) dense[s.off] = s.coef;
    for (int mult = 0; mult < 7; ++mult) {
        std::vector<BigInt> next(deg + 1, BigInt(0));
        for (std::uint32_t i = 0; i <= deg; ++i) {
            if (dense[i].is_zero()) continue;
            for (const Term& s : sparse) {
                const std::uint64_t k = std::uint64_t(i) + s.off;
                if (k > deg) break;
                next[k] += dense[i] * s.coef;
            }
        }
        dense.swap(next);
    }

    std::vector<BigInt> tau(n_max + 1, BigInt(0));
    for (std::uint32_t n = 1; n <= n_max; ++n) tau[n] = dense[n - 1];
    return tau;
}

double normalized_hecke_holomorphic(std::uint32_t n,
                                    const std::vector<BigInt>& tau) {
    if (n == 0 || n >= tau.size())
        throw std::out_of_range("normalized_hecke_holomorphic: n=" +
                                std::to_string(n) + " beyond tau table");
    const double num = tau[n].convert_to<double>();
    return num / std::pow(static_cast<double>(n), 5.5);
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t q) {
    if (q < 1) throw std::invalid_argument("mod_inverse: q must be >= 1");
    if (q == 1) return 0;
    std::int64_t a0 = a % q;
    if (a0 < 0) a0 += q;
    // extended Euclid on (a0, q)
    std::int64_t old_r = a0, r = q;
    std::int64_t old_s = 1, s = 0;
    while (r != 0) {
        const std::int64_t quot = old_r / r;
        std::int64_t tmp = old_r - quot * r; old_r = r; r = tmp;
        tmp = old_s - quot * s; old_s = s; s = tmp;
    }
    if (old_r != 1)
        throw std::invalid_argument("mod_inverse: gcd(" + std::to_string(a) +
                                    ", " + std::to_string(q) + ") = " +
                                    std::to_string(old_r) + ", no inverse");
    std::int64_t inv = old_s % q;
    if (inv < 0) inv += q;
    return inv;
}

}  // namespace shiftconv
