#include "hyperasym/heat_engine.hpp"

#include <cmath>

namespace hyperasym {

cplx heat_f0(const AnalyticDatum& datum, double theta, cplx z, cplx s) {
    const cplx y = std::polar(1.0, 0.5 * theta) * std::sqrt(s);
    return 0.5 * (datum.eval(z + y) + datum.eval(z - y));
}

cplx partial_sum_level0(const AnalyticDatum& datum, cplx t, cplx z, int N0) {
    if (N0 <= 0) return 0.0;
    const std::vector<cplx> c = datum.taylor_coeffs(z, 2 * N0);
    // c_{2k} (2k)!/k! t^k, accumulated as a running product
    cplx sum = 0.0, tk = 1.0;
    double ratio = 1.0;
    for (int k = 0; k < N0; ++k) {
        if (k > 0) {
            ratio *= (2.0 * k - 1.0) * (2.0 * k) / k;
            tk *= t;
        }
        sum += c[2 * k] * ratio * tk;
    }
    return sum;
}

HeatEngine::HeatEngine(AnalyticDatum datum, Direction direction, EngineOptions opts)
    : HyperEngine(std::move(datum), std::move(direction), LaplaceKernel::gaussian(), 2.0, 1.0, opts) {}

cplx HeatEngine::f0(cplx s, cplx z) const { return heat_f0(datum_, direction_.theta(), z, s); }

std::vector<cplx> HeatEngine::b0(cplx z, int count) const {
    const std::vector<cplx> c = datum_.taylor_coeffs(z, 2 * count);
    std::vector<cplx> b(count);
    for (int k = 0; k < count; ++k) b[k] = c[2 * k] * std::polar(1.0, k * direction_.theta());
    return b;
}

}  // namespace hyperasym
