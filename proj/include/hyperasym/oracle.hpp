#pragma once

#include <complex>

#include "hyperasym/datum.hpp"

namespace hyperasym {

struct SimpleEquation;
class AnalyticDatum;

struct ErrorReport {
    cplx t;
    cplx z;
    int level = 0;
    cplx approx;
    cplx exact;
    double abs_err = 0.0;
    double predicted_bound = 0.0;
};

ErrorReport compare(cplx approx, cplx exact, double predicted_bound, cplx t = 0.0, cplx z = 0.0, int level = 0);

struct OracleOptions {
    double rel_tol = 1e-12;
    int max_intervals = 20000;
};

// u(t, z) = (4 pi t)^{-1/2} int over e^{i theta/2} R of exp(-s^2 / 4t) phi(z + s) ds, t = t_abs e^{i theta}.
// Throws StokesDirectionError when the line hits a pole.
cplx heat_direct(const AnalyticDatum& datum, double theta, double t_abs, cplx z, const OracleOptions& opts = {});

// The same line integral by composite Gauss-Legendre on uniform panels (convergence studies).
cplx heat_direct_fixed(const AnalyticDatum& datum, double theta, double t_abs, cplx z, int panels, int order = 8);

// int_0^inf C_q(tau) v(t_abs tau^q e^{i theta}, z) dtau for the simple equation.
cplx simple_direct(const SimpleEquation& eq, const AnalyticDatum& datum, double theta, double t_abs, cplx z,
                   const OracleOptions& opts = {});

}  // namespace hyperasym
