#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace hyperasym {

using cplx = std::complex<double>;

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;
};

// Gauss-Legendre rule with n points (cached).
const GaussRule& gauss_legendre(int n);

struct QuadOptions {
    double abs_tol = 0.0;
    double rel_tol = 1e-13;
    // stop once the error estimate is below noise_floor * eps * integral of |f|
    double noise_floor = 50.0;
    int max_intervals = 4000;
};

struct Integral {
    cplx value;
    double error = 0.0;
    double abs_integral = 0.0;   // integral of |f|
    int evaluations = 0;
    bool converged = true;
};

using RealLineFn = std::function<cplx(double)>;

// Globally adaptive Gauss-Kronrod (7/15) over [a, b].
Integral integrate_adaptive(const RealLineFn& f, double a, double b, const QuadOptions& opts = {});

// Same, starting from the given breakpoints (sorted).
Integral integrate_adaptive(const RealLineFn& f, std::span<const double> breakpoints, const QuadOptions& opts = {});

}  // namespace hyperasym
