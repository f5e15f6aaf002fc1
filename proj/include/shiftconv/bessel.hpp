// bessel.hpp
//
// Bessel evaluators for real and purely imaginary order, and the integral
// transforms built from them.  Imaginary-order J appears only through the
// sinh-normalized combination the trace formula needs; a complex power
// series is kept as an independent oracle at moderate arguments.
//
// Conventions (all real-valued):
//   j_minus_combination(r, x) = (pi i / 2) (J_{2ir}(x) - J_{-2ir}(x)) / sinh(pi r)
//                             = 2 * int_0^inf cos(x cosh u) cos(2ru) du
//   watson_k_form(r, x)       = cosh(pi r) K_{2ir}(x)
//                             = int_0^inf cos(x sinh u) cos(2ru) du
//   psi_hat(r)       = int_0^inf j_minus_combination(r, x) psi(x) x^{-1} dx
//   psi_hat_minus(r) = 2 cosh(pi r) int_0^inf K_{2ir}(x) psi(x) x^{-1} dx

#ifndef SHIFTCONV_BESSEL_HPP
#define SHIFTCONV_BESSEL_HPP

#include "shiftconv/bump.hpp"

#include <complex>
#include <vector>

namespace shiftconv {

// J_nu(x) for real order: power series for x <= 20 + nu^2, the large-argument
// expansion beyond; the two agree on an overlap band (tested).
double bessel_J(double order, double x);

// Series-only and asymptotic-only paths, exposed for cross-validation.
double bessel_J_series(double order, double x);
double bessel_J_asymptotic(double order, double x);

// J_{2ir}(x) by the complex power series; independent oracle for
// j_minus_combination at moderate (r, x).
std::complex<double> bessel_J_imag_series(double r, double x);

// log Gamma(z), principal branch, by Stirling with argument lifting.
std::complex<double> log_gamma(std::complex<double> z);

// K_{2ir}(x) = int_0^inf exp(-x cosh u) cos(2ru) du, x > 0.
double bessel_K_imag(double r, double x);

// cosh(pi r) K_{2ir}(x) via the oscillatory sinh representation.
double watson_k_form(double r, double x);

// See header comment.  Throws std::invalid_argument for r == 0 (the
// removable singularity of the J-combination is not implemented) or x <= 0.
double j_minus_combination(double r, double x);

// (-1)^{1+k/2} int_0^pi sin(x sin th) sin((1-k) th) dth, k even.
double holomorphic_kernel(int k, double x);

struct TransformSpec {
    SmoothBump psi;       // compact support in (0, inf)
    double r = 0.0;
    double rel_tol = 1e-9;
};

// ---------------------------------------------------------------------------
// Cached transform tables for one test function psi: the inner x-integrals
//   Phi_c(u) = int psi(x) x^{-1} cos(x cosh u) dx
//   Phi_s(u) = int psi(x) x^{-1} cos(x sinh u) dx
// are evaluated once on a panel grid; every spectral point r then costs one
// short cosine quadrature.  Evaluation is valid for |r| <= r_design.
// ---------------------------------------------------------------------------
class KuznetsovTransform {
public:
    explicit KuznetsovTransform(const SmoothBump& psi, double rel_tol = 1e-9,
                                double r_design = 50.0);

    double psi_hat(double r) const;        // even in r; finite at r == 0
    double psi_hat_minus(double r) const;  // even in r; defined at r == 0

    double r_design() const { return r_design_; }

private:
    struct Table {
        std::vector<double> nodes;    // u values
        std::vector<double> weights;  // quadrature weights
        std::vector<double> phi;      // Phi at nodes
    };
    Table cosh_table_, sinh_table_;
    double r_design_ = 0.0;

    double eval(const Table& t, double r) const;
};

// One-shot wrappers per the transform spec (r != 0 enforced for psi_hat).
double psi_hat(const TransformSpec& spec);
double psi_hat_minus(const TransformSpec& spec);

// int_0^inf cos(2 kappa u) * [ int W(x) cos(scale * sqrt(x) * K(u)) dx ] du
// with K = cosh or sinh; the building block of the dual-sum weights in the
// summation formula.  Absolutely convergent thanks to the smooth W.
enum class PhaseKind { cosh_phase, sinh_phase };
double oscillatory_sqrt_transform(const SmoothBump& W, double scale,
                                  double kappa, PhaseKind kind,
                                  double rel_tol = 1e-9);

}  // namespace shiftconv

#endif  // SHIFTCONV_BESSEL_HPP
