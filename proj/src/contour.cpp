#include "hyperasym/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hyperasym/errors.hpp"
#include "hyperasym/quadrature.hpp"
#include "hyperasym/simd.hpp"

namespace hyperasym {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

Arc circle(cplx c, double r) { return Arc{c, r, 0.0, kTwoPi}; }

ContourIntegral trapezoid_circle(const Arc& arc, const ComplexFn& f, const ContourOptions& opts) {
    ContourIntegral out;
    std::vector<cplx> fv, dw;
    auto sample = [&](int M, int stride, int offset) {
        fv.clear();
        dw.clear();
        double absum = 0.0;
        for (int k = offset; k < M; k += stride) {
            const double phi = arc.start + kTwoPi * k / M;
            const cplx e = std::polar(1.0, phi);
            const cplx x = arc.center + arc.radius * e;
            const cplx v = f(x);
            fv.push_back(v);
            dw.push_back(cplx(0.0, arc.radius) * e);
            absum += std::abs(v);
        }
        return std::make_pair(simd::dot(fv, dw), absum);
    };
    int M = std::max(opts.initial_nodes, 4);
    auto [sum, absum] = sample(M, 1, 0);
    cplx value = sum * (kTwoPi / M);
    double absint = absum * arc.radius * (kTwoPi / M);
    while (true) {
        if (2 * M > opts.max_nodes) {
            out.converged = false;
            break;
        }
        auto [s2, a2] = sample(2 * M, 2, 1);
        sum += s2;
        absum += a2;
        M *= 2;
        const cplx next = sum * (kTwoPi / M);
        absint = absum * arc.radius * (kTwoPi / M);
        const double diff = std::abs(next - value);
        value = next;
        out.error = diff;
        const double target = std::max({opts.abs_tol, opts.rel_tol * std::abs(value), 10.0 * kEps * absint});
        if (diff <= target) break;
    }
    out.value = value;
    out.abs_integral = absint;
    out.nodes = M;
    return out;
}

ContourIntegral gauss_arc(const Arc& arc, const ComplexFn& f, const ContourOptions& opts) {
    constexpr int kOrder = 16;
    const GaussRule& rule = gauss_legendre(kOrder);
    ContourIntegral out;
    auto evaluate = [&](int panels, double& absint) {
        std::vector<cplx> fv, dw;
        fv.reserve(panels * kOrder);
        dw.reserve(panels * kOrder);
        absint = 0.0;
        const double h = arc.sweep / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = arc.start + (p + 0.5) * h;
            for (int i = 0; i < kOrder; ++i) {
                const double phi = mid + 0.5 * h * rule.nodes[i];
                const cplx e = std::polar(1.0, phi);
                const cplx v = f(arc.center + arc.radius * e);
                const cplx d = cplx(0.0, arc.radius) * e * (0.5 * h * rule.weights[i]);
                fv.push_back(v);
                dw.push_back(d);
                absint += std::abs(v) * std::abs(d);
            }
        }
        return simd::dot(fv, dw);
    };
    int panels = std::max(1, opts.initial_nodes / kOrder);
    double absint = 0.0;
    cplx value = evaluate(panels, absint);
    while (true) {
        if (2 * panels * kOrder > opts.max_nodes) {
            out.converged = false;
            break;
        }
        panels *= 2;
        const cplx next = evaluate(panels, absint);
        const double diff = std::abs(next - value);
        value = next;
        out.error = diff;
        const double target = std::max({opts.abs_tol, opts.rel_tol * std::abs(value), 10.0 * kEps * absint});
        if (diff <= target) break;
    }
    out.value = value;
    out.abs_integral = absint;
    out.nodes = panels * kOrder;
    return out;
}

}  // namespace

bool Arc::full_circle() const { return std::abs(sweep - kTwoPi) < 1e-14; }

double ContourSpec::length() const {
    double l = 0.0;
    for (const Arc& a : arcs) l += a.length();
    return l;
}

bool ContourSpec::in_union(cplx p) const {
    return std::abs(p - big_center) < big_radius || std::abs(p - small_center) < small_radius;
}

int ContourSpec::winding_number(cplx p) const {
    double total = 0.0;
    for (const Arc& a : arcs) {
        const int n = 2048;
        cplx prev = a.point(a.start) - p;
        for (int k = 1; k <= n; ++k) {
            const cplx cur = a.point(a.start + a.sweep * k / n) - p;
            total += std::arg(cur / prev);
            prev = cur;
        }
    }
    return static_cast<int>(std::lround(total / kTwoPi));
}

ContourSpec two_disc_boundary(cplx c1, double r1, cplx c2, double r2) {
    if (!(r1 > 0.0) || !(r2 > 0.0)) throw GeometryError("degenerate contour: nonpositive radius");
    ContourSpec spec{c1, r1, c2, r2, {}};
    const double d = std::abs(c2 - c1);
    if (d + r2 <= r1) {
        spec.arcs = {circle(c1, r1)};
    } else if (d + r1 <= r2) {
        spec.arcs = {circle(c2, r2)};
    } else if (d >= r1 + r2) {
        spec.arcs = {circle(c1, r1), circle(c2, r2)};
    } else {
        const double alpha = std::arg(c2 - c1);
        const double a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
        const double b1 = std::acos(std::clamp(a / r1, -1.0, 1.0));
        const double b2 = std::acos(std::clamp((d - a) / r2, -1.0, 1.0));
        spec.arcs = {Arc{c1, r1, alpha + b1, kTwoPi - 2.0 * b1}, Arc{c2, r2, alpha + kPi + b2, kTwoPi - 2.0 * b2}};
    }
    return spec;
}

double omega_rho(int n) { return 2.0 - std::ldexp(1.0, -n); }

double omega_big_radius(int n, cplx sigma_n, double eps, const SingularGeometry& geom) {
    if (n == 0) return geom.level0_radius() - eps;
    return geom.distance(sigma_n) - omega_rho(n) * eps;
}

ContourSpec build_omega(int n, cplx sigma_n, cplx s, double eps, const SingularGeometry& geom) {
    if (n < 0) throw InputError("level must be nonnegative");
    if (!(eps > 0.0)) throw InputError("eps must be positive");
    const double R = omega_big_radius(n, sigma_n, eps, geom);
    if (!(R > 0.0)) throw GeometryError("degenerate contour: big radius " + std::to_string(R) + " at level " + std::to_string(n));
    return two_disc_boundary(sigma_n, R, s, std::ldexp(eps, -n - 1));
}

ContourIntegral integrate(const Arc& arc, const ComplexFn& f, const ContourOptions& opts) {
    ContourIntegral r = arc.full_circle() ? trapezoid_circle(arc, f, opts) : gauss_arc(arc, f, opts);
    if (!r.converged)
        throw ConvergenceError("contour quadrature did not converge within " + std::to_string(opts.max_nodes) + " nodes");
    return r;
}

ContourIntegral integrate(const ContourSpec& contour, const ComplexFn& f, const ContourOptions& opts) {
    ContourIntegral total;
    total.value = 0.0;
    for (const Arc& arc : contour.arcs) {
        const ContourIntegral r = integrate(arc, f, opts);
        total.value += r.value;
        total.error += r.error;
        total.abs_integral += r.abs_integral;
        total.nodes += r.nodes;
    }
    return total;
}

cplx cauchy_integral(const ContourSpec& contour, const ComplexFn& f, const ContourOptions& opts) {
    return integrate(contour, f, opts).value / cplx(0.0, kTwoPi);
}

bool clearance_check(std::span<const cplx> chain, double eps, const SingularGeometry& geom) {
    if (chain.empty()) return false;
    return geom.distance(chain.front()) >= eps;
}

std::vector<cplx> sample_chain(cplx s, std::span<const double> sigmas, std::span<const double> big_radii, double eps,
                               std::mt19937_64& rng) {
    const int n = static_cast<int>(sigmas.size());
    if (big_radii.size() != sigmas.size() + 1) throw InputError("need one big radius per level");
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<cplx> chain(n + 2);
    chain[n + 1] = s;
    for (int k = n; k >= 0; --k) {
        const double sigma = k == 0 ? 0.0 : sigmas[k - 1];
        const ContourSpec c = two_disc_boundary(sigma, big_radii[k], chain[k + 1], std::ldexp(eps, -k - 1));
        // pick an arc with equal probability, then a uniform angle on it
        const Arc& arc = c.arcs[std::min<std::size_t>(c.arcs.size() - 1, static_cast<std::size_t>(u(rng) * c.arcs.size()))];
        chain[k] = arc.point(arc.start + arc.sweep * u(rng));
    }
    return chain;
}

std::vector<cplx> sample_chain(cplx s, std::span<const double> sigmas, double eps, const SingularGeometry& geom,
                               std::mt19937_64& rng) {
    std::vector<double> radii;
    for (std::size_t k = 0; k <= sigmas.size(); ++k)
        radii.push_back(omega_big_radius(static_cast<int>(k), k == 0 ? 0.0 : sigmas[k - 1], eps, geom));
    for (double r : radii)
        if (!(r > 0.0)) throw GeometryError("degenerate contour in chain sampling");
    return sample_chain(s, sigmas, radii, eps, rng);
}

}  // namespace hyperasym
