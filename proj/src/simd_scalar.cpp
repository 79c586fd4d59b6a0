#include "hyperasym/simd.hpp"

namespace hyperasym::simd::scalar {

cplx cauchy_sum(std::span<const cplx> weights, std::span<const cplx> nodes, cplx w) {
    double re = 0.0, im = 0.0;
    const double wr = w.real(), wi = w.imag();
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const double dr = nodes[k].real() - wr;
        const double di = nodes[k].imag() - wi;
        const double n = dr * dr + di * di;
        const double gr = weights[k].real(), gi = weights[k].imag();
        // g * conj(d) / |d|^2
        re += (gr * dr + gi * di) / n;
        im += (gi * dr - gr * di) / n;
    }
    return {re, im};
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double ar = a[k].real(), ai = a[k].imag();
        const double br = b[k].real(), bi = b[k].imag();
        re += ar * br - ai * bi;
        im += ar * bi + ai * br;
    }
    return {re, im};
}

cplx weighted_sum(std::span<const double> w, std::span<const cplx> f) {
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        re += w[k] * f[k].real();
        im += w[k] * f[k].imag();
    }
    return {re, im};
}

}  // namespace hyperasym::simd::scalar
