#include "hyperasym/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hyperasym/borel_engine.hpp"
#include "hyperasym/errors.hpp"
#include "hyperasym/quadrature.hpp"

namespace hyperasym {

ErrorReport compare(cplx approx, cplx exact, double predicted_bound, cplx t, cplx z, int level) {
    ErrorReport r;
    r.t = t;
    r.z = z;
    r.level = level;
    r.approx = approx;
    r.exact = exact;
    r.abs_err = std::abs(approx - exact);
    r.predicted_bound = predicted_bound;
    return r;
}

namespace {

struct HeatLine {
    cplx dir;
    double smax = 0.0;
};

HeatLine heat_line(const AnalyticDatum& datum, double theta, double t_abs, cplx z) {
    const double B = growth_bound(datum, 2.0).B;
    const double decay = 1.0 / (4.0 * t_abs) - B;
    if (!(decay > 0.0)) throw InputError("heat_direct: Gaussian decay does not dominate the datum growth");
    HeatLine line{std::polar(1.0, 0.5 * theta), std::sqrt(80.0 / decay) + 1.0};
    for (const PoleTerm& p : datum.poles()) {
        const cplx rel = (p.location - z) / line.dir;
        if (std::abs(rel.imag()) <= 1e-12 * std::abs(rel) && rel.real() != 0.0)
            throw StokesDirectionError("heat_direct: integration line passes through a pole");
    }
    return line;
}

}  // namespace

cplx heat_direct(const AnalyticDatum& datum, double theta, double t_abs, cplx z, const OracleOptions& opts) {
    if (!(t_abs > 0.0)) return datum.eval(z);
    const HeatLine line = heat_line(datum, theta, t_abs, z);
    const cplx dir = line.dir;
    const double smax = line.smax;

    std::vector<double> bp;
    const double width = std::max(std::sqrt(t_abs), 2.0 * smax / 400.0);
    const int panels = static_cast<int>(std::ceil(2.0 * smax / width));
    for (int i = 0; i <= panels; ++i) bp.push_back(-smax + 2.0 * smax * i / panels);
    // refine where the line passes closest to a pole
    for (const PoleTerm& p : datum.poles()) {
        const cplx rel = (p.location - z) / dir;
        const double d = std::abs(rel.imag());
        for (double off : {-d, -0.5 * d, 0.0, 0.5 * d, d}) {
            const double x = rel.real() + off;
            if (std::abs(x) < smax) bp.push_back(x);
        }
    }
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

    auto f = [&](double sigma) -> cplx {
        const double g = std::exp(-sigma * sigma / (4.0 * t_abs));
        if (g == 0.0) return 0.0;
        return g * datum.eval(z + dir * sigma);
    };
    QuadOptions qo;
    qo.rel_tol = opts.rel_tol;
    qo.max_intervals = opts.max_intervals;
    const Integral I = integrate_adaptive(f, bp, qo);
    if (!I.converged) throw ConvergenceError("heat_direct: quadrature did not converge");
    return I.value / (2.0 * std::sqrt(std::numbers::pi * t_abs));
}

cplx heat_direct_fixed(const AnalyticDatum& datum, double theta, double t_abs, cplx z, int panels, int order) {
    if (panels < 1) throw InputError("heat_direct_fixed: need at least one panel");
    if (!(t_abs > 0.0)) return datum.eval(z);
    const HeatLine line = heat_line(datum, theta, t_abs, z);
    const GaussRule& rule = gauss_legendre(order);
    const double h = 2.0 * line.smax / panels;
    cplx acc = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double mid = -line.smax + (i + 0.5) * h;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            const double sigma = mid + 0.5 * h * rule.nodes[k];
            acc += rule.weights[k] * std::exp(-sigma * sigma / (4.0 * t_abs)) * datum.eval(z + line.dir * sigma);
        }
    }
    return 0.5 * h * acc / (2.0 * std::sqrt(std::numbers::pi * t_abs));
}

cplx simple_direct(const SimpleEquation& eq, const AnalyticDatum& datum, double theta, double t_abs, cplx z,
                   const OracleOptions& opts) {
    const BorelFunction v(eq, datum, z);
    LaplaceOptions lo;
    lo.rel_tol = opts.rel_tol;
    return laplace_sum([&](cplx T) { return v(T); }, eq.q, theta, t_abs, lo);
}

}  // namespace hyperasym
