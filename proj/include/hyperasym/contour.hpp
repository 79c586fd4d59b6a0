#pragma once

#include <complex>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "hyperasym/datum.hpp"

namespace hyperasym {

using cplx = std::complex<double>;

// center + radius e^{i phi}, phi from start to start + sweep (sweep > 0: counter-clockwise)
struct Arc {
    cplx center;
    double radius = 0.0;
    double start = 0.0;
    double sweep = 0.0;

    cplx point(double phi) const { return center + std::polar(radius, phi); }
    bool full_circle() const;
    double length() const { return radius * sweep; }
};

struct ContourSpec {
    cplx big_center;
    double big_radius = 0.0;
    cplx small_center;
    double small_radius = 0.0;
    std::vector<Arc> arcs;

    // winding number of the curve around p (numerical, rounded)
    int winding_number(cplx p) const;
    bool in_union(cplx p) const;
    double length() const;
};

// Positively oriented boundary of the union of two discs. Nested discs give a single
// circle; disjoint discs give two circles.
ContourSpec two_disc_boundary(cplx c1, double r1, cplx c2, double r2);

// rho_n = 2 - 2^{-n}
double omega_rho(int n);

// Big radius of Omega_n: level-0 radius - eps for n = 0, d(sigma_n) - rho_n eps otherwise.
double omega_big_radius(int n, cplx sigma_n, double eps, const SingularGeometry& geom);

// Omega_n(sigma_n, s) with big radius as above and small radius 2^{-n-1} eps.
ContourSpec build_omega(int n, cplx sigma_n, cplx s, double eps, const SingularGeometry& geom);

struct ContourOptions {
    int initial_nodes = 64;
    int max_nodes = 1 << 14;
    double rel_tol = 1e-13;
    double abs_tol = 0.0;
};

struct ContourIntegral {
    cplx value;
    double error = 0.0;
    double abs_integral = 0.0;
    int nodes = 0;
    bool converged = true;
};

using ComplexFn = std::function<cplx(cplx)>;

// Contour integral of f dw. Full circles use the trapezoid rule, partial arcs composite
// Gauss-Legendre; both double their nodes until successive estimates agree.
// Throws ConvergenceError if max_nodes is reached.
ContourIntegral integrate(const ContourSpec& contour, const ComplexFn& f, const ContourOptions& opts = {});
ContourIntegral integrate(const Arc& arc, const ComplexFn& f, const ContourOptions& opts = {});

// (1 / 2 pi i) times the contour integral.
cplx cauchy_integral(const ContourSpec& contour, const ComplexFn& f, const ContourOptions& opts = {});

// d(x_0) >= eps for a chain x_0, ..., x_{n+1} = s.
bool clearance_check(std::span<const cplx> chain, double eps, const SingularGeometry& geom);

// Random chain with x_k on Omega_k(sigma_k, x_{k+1}), sigma_0 = 0; sigmas holds sigma_1..sigma_n.
std::vector<cplx> sample_chain(cplx s, std::span<const double> sigmas, double eps, const SingularGeometry& geom,
                               std::mt19937_64& rng);
// Same with precomputed big radii R_0..R_n.
std::vector<cplx> sample_chain(cplx s, std::span<const double> sigmas, std::span<const double> big_radii, double eps,
                               std::mt19937_64& rng);

}  // namespace hyperasym
