#pragma once

#include <complex>
#include <optional>

namespace hyperasym {

using cplx = std::complex<double>;

// Kernel data for a Gevrey order q > 1: k = 1/(q-1), c_q = (k+1)^{k+1} k^{-k}.
struct KernelParams {
    double q = 2.0;
    double k = 1.0;
    double alpha = 2.0;
    double c_q = 4.0;

    static KernelParams from_q(double q);
};

// Gamma function; throws SingularityError at 0, -1, -2, ...
double gamma_real(double x);

// 1/Gamma(x), exactly 0 at the poles of Gamma.
double rgamma(double x);

// sin(pi x) with exact zeros at the integers.
double sin_pi(double x);

// E_beta(z) = sum z^n / Gamma(1 + beta n).
cplx mittag_leffler(double order, cplx z);
cplx mittag_leffler_series(double order, cplx z);
// Large-|z| expansion; throws ConvergenceError if the accuracy target is not reached.
cplx mittag_leffler_asymptotic(double order, cplx z);

// p-th derivative of E_q for integer q >= 1, times exp(log_scale). The scale is folded
// into the exponentials so that large arguments do not overflow.
cplx mittag_leffler_derivative(int q, int p, cplx z, cplx log_scale = 0.0);

// Ecalle kernel C_alpha(tau) = sum (-tau)^n / (n! Gamma(1 - (n+1)/alpha)).
cplx ecalle_kernel(double alpha, cplx tau);
// Real tau >= 0: series for small tau, steepest-descent quadrature beyond.
double ecalle_kernel(double alpha, double tau);
cplx ecalle_kernel_series(double alpha, cplx tau, double tol = 1e-17);
double ecalle_kernel_steepest(double alpha, double tau);

// Gamma(1 + q l) / l! * t_abs^l * exp(-i theta l).
cplx gamma_moment(int l, double q, double t_abs, double theta);

// Integral over tau in [0, inf) of C_q(tau) (t_abs tau^q)^l.
double kernel_moment_quadrature(int l, double q, double t_abs);

struct KernelBoundFit {
    double C = 0.0;          // max |C_q(tau)| exp(tau^{k+1}/c)
    double c = 0.0;          // exponent constant used
    double worst_tau = 0.0;
    bool within(double cap) const { return C <= cap; }
};

// Fits C in |C_q(tau)| <= C exp(-tau^{k+1}/c) on [0, tau_max].
KernelBoundFit fit_kernel_bound(double q, double tau_max = 6.0, double step = 0.01,
                                std::optional<double> c_override = std::nullopt);

}  // namespace hyperasym
