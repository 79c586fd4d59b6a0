#pragma once

#include <complex>
#include <vector>

#include "hyperasym/chain.hpp"
#include "hyperasym/datum.hpp"

namespace hyperasym {

// f_0(s) = (phi(z + e^{i theta/2} sqrt s) + phi(z - e^{i theta/2} sqrt s)) / 2
cplx heat_f0(const AnalyticDatum& datum, double theta, cplx z, cplx s);

// sum_{k<N0} phi^{(2k)}(z) t^k / k!
cplx partial_sum_level0(const AnalyticDatum& datum, cplx t, cplx z, int N0);

// Hyperasymptotic expansion of u_t = u_zz, u(0, z) = phi(z), along the ray arg t = theta.
class HeatEngine : public HyperEngine {
public:
    HeatEngine(AnalyticDatum datum, Direction direction, EngineOptions opts = {});

    cplx f0(cplx s, cplx z) const override;
    // b_{0,k} = phi^{(2k)}(z) e^{i k theta} / (2k)!
    std::vector<cplx> b0(cplx z, int count) const override;
};

}  // namespace hyperasym
