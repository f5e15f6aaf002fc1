// circle.hpp
//
// The overlapping-bump approximation chi* to the constant function 1 on the
// circle, built from rationals a/q with q in [Q, 2Q], its Fourier data
// a_beta / c_xi / d_xi, the variance V, and the reconstruction identity that
// expresses a Fourier coefficient b_f through the approximated coefficients
// b*_{f+xi} with a measurable residual.
//
// Fourier conventions used throughout (nu real, supported in [-D, -D/2]):
//   a_beta = int nu(y) e(beta y) dy            so  nu*(y) = sum a_beta e(-beta y)
//   E(x)   = 1 - chi*(x) = sum_{xi != 0} c_xi e(-xi x)
//   c_xi   = -(a_{-xi} / lambda) * sum_{d | xi} d * sum_r w(dr) mu(r)
// With these, b*_f = b_f - sum_{xi != 0} c_xi b_{f+xi} holds exactly.

#ifndef SHIFTCONV_CIRCLE_HPP
#define SHIFTCONV_CIRCLE_HPP

#include "shiftconv/arith.hpp"
#include "shiftconv/bump.hpp"
#include "shiftconv/forms.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace shiftconv {

struct CircleApprox {
    double Q = 0.0;
    double delta2 = 0.0;
    double Delta = 0.0;      // Q^{-1+delta2}
    int depth = 1;           // convolution depth k
    int xi_cutoff = 0;

    SmoothBump w;            // q-weight on [Q, 2Q]
    NuFunction nu;
    double Lambda = 0.0;     // sum_q w(q) phi(q)
    double lambda = 0.0;     // 2 Delta Lambda
    double lambda_over_Q2 = 0.0;

    // index xi + xi_cutoff; coefficients for |xi| <= xi_cutoff
    std::vector<std::complex<double>> a_beta;
    std::vector<std::complex<double>> c_xi;
    // d[k-1][xi + xi_cutoff] is the depth-k coefficient sum
    std::vector<std::vector<std::complex<double>>> d_xi;

    bool cutoff_warning = false;  // xi_cutoff < Q requested

    // rationals a/q sorted ascending, with their weights w(q)/lambda
    std::vector<double> fracs;
    std::vector<double> frac_weights;

    std::complex<double> a_at(std::int64_t beta) const {
        return a_beta[static_cast<std::size_t>(beta + xi_cutoff)];
    }
    std::complex<double> c_at(std::int64_t xi) const {
        return c_xi[static_cast<std::size_t>(xi + xi_cutoff)];
    }
    std::complex<double> d_at(int k, std::int64_t xi) const {
        return d_xi[static_cast<std::size_t>(k - 1)]
                   [static_cast<std::size_t>(xi + xi_cutoff)];
    }
};

// Q >= 4; 0 < delta2 < 1/3 with the resulting Delta in (0, 1/3); depth >= 1.
// xi_cutoff == 0 selects the default 4 * ceil(Q).
CircleApprox build_circle_approx(double Q, double delta2, int depth = 3,
                                 int xi_cutoff = 0);

// (1/lambda) sum_q w(q) sum_{(a,q)=1} nu*(a/q - x); nonnegative.
double chi_star(const CircleApprox& approx, double x);

// V = int_0^1 (chi*(x) - 1)^2 dx by composite quadrature with doubling.
// Throws std::runtime_error carrying the last two estimates when the panel
// budget (2^20) is exhausted.
double variance_V(const CircleApprox& approx, double rel_tol = 1e-10);

// max over a uniform grid of |1 - chi*(x)|.
double e_sup_norm(const CircleApprox& approx, int grid_points = 4096);

// ---------------------------------------------------------------------------
// One shifted-coefficient problem: the base point n, the inner window W
// around [BL+n, CL+n] and the enclosing window W0, plus the derived
// psi_n(x) = S(W0, x) S(W, -x) whose Fourier coefficients are
//   b_f(n) = sum_m t(m) t(m+f) W(m) W0(m+f).
// ---------------------------------------------------------------------------
struct ShiftedCoeffProblem {
    const HeckeCoeffTable* coeffs = nullptr;
    std::int64_t n = 0;
    std::uint32_t L = 0;
    double delta = 0.0;
    SmoothBump W;    // absolute position (around n)
    SmoothBump W0;
    std::int64_t m_lo = 0, m_hi = 0;    // integer support of W
    std::int64_t f_lo = 0, f_hi = 0;    // shifts with possibly nonzero b_f

    std::complex<double> psi(double x) const;
    double psi_sup_norm() const;  // max over a fixed 4096-point grid
};

// B defaults to 1.4; the window is [B L + n, (B + delta/2) L + n] and W0
// covers it with slack delta*L on the left and 5*delta*L on the right.
ShiftedCoeffProblem make_shifted_problem(const HeckeCoeffTable& coeffs,
                                         std::int64_t n, std::uint32_t L,
                                         double delta, double B = 1.4);

// Finite sum over the integer support of W.
double b_f_direct(const ShiftedCoeffProblem& problem, std::int64_t f);

// Identity path: b*_f = b_f - sum_{0 < |xi| <= cutoff} c_xi b_{f+xi}.
double b_f_star(const ShiftedCoeffProblem& problem, const CircleApprox& approx,
                std::int64_t f);

// Independent cross-check path: the double sum over (a, q) against the
// nu-window integral.  Cost grows with Q^2; intended for tiny instances.
double b_f_star_direct(const ShiftedCoeffProblem& problem,
                       const CircleApprox& approx, std::int64_t f);

// | b_f - b*_f - sum_{|xi| <= cutoff} d_xi b*_{f+xi} | at depth k <= approx.depth.
double lemma1_residual(const ShiftedCoeffProblem& problem,
                       const CircleApprox& approx, std::int64_t f, int k);

}  // namespace shiftconv

#endif  // SHIFTCONV_CIRCLE_HPP
