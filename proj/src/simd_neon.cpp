#include <arm_neon.h>

#include "hyperasym/simd.hpp"

namespace hyperasym::simd::neon {

namespace {

inline const double* raw(std::span<const cplx> v) {
    return reinterpret_cast<const double*>(v.data());
}

inline cplx to_cplx(float64x2_t v) { return {vgetq_lane_f64(v, 0), vgetq_lane_f64(v, 1)}; }

}  // namespace

cplx cauchy_sum(std::span<const cplx> weights, std::span<const cplx> nodes, cplx w) {
    const double* x = raw(nodes);
    const double* g = raw(weights);
    const double wpair[2] = {w.real(), w.imag()};
    const float64x2_t wv = vld1q_f64(wpair);
    const double sgn[2] = {1.0, -1.0};
    const float64x2_t sign = vld1q_f64(sgn);
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    auto step = [&](std::size_t i) {
        const float64x2_t d = vsubq_f64(vld1q_f64(x + 2 * i), wv);
        const float64x2_t gv = vld1q_f64(g + 2 * i);
        const float64x2_t dd = vmulq_f64(d, d);
        const float64x2_t nrm = vdupq_n_f64(vaddvq_f64(dd));
        const float64x2_t dr = vdupq_laneq_f64(d, 0);
        const float64x2_t di = vdupq_laneq_f64(d, 1);
        const float64x2_t gsw = vextq_f64(gv, gv, 1);
        const float64x2_t t = vmulq_f64(vmulq_f64(gsw, di), sign);
        return vdivq_f64(vaddq_f64(vmulq_f64(gv, dr), t), nrm);
    };
    const std::size_t n = nodes.size();
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        acc0 = vaddq_f64(acc0, step(k));
        acc1 = vaddq_f64(acc1, step(k + 1));
    }
    if (k < n) acc0 = vaddq_f64(acc0, step(k));
    return to_cplx(vaddq_f64(acc0, acc1));
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
    const double* pa = raw(a);
    const double* pb = raw(b);
    const double sgn[2] = {-1.0, 1.0};
    const float64x2_t sign = vld1q_f64(sgn);
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    auto step = [&](std::size_t i) {
        const float64x2_t av = vld1q_f64(pa + 2 * i);
        const float64x2_t bv = vld1q_f64(pb + 2 * i);
        const float64x2_t br = vdupq_laneq_f64(bv, 0);
        const float64x2_t bi = vdupq_laneq_f64(bv, 1);
        const float64x2_t asw = vextq_f64(av, av, 1);
        return vaddq_f64(vmulq_f64(av, br), vmulq_f64(vmulq_f64(asw, bi), sign));
    };
    const std::size_t n = a.size();
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        acc0 = vaddq_f64(acc0, step(k));
        acc1 = vaddq_f64(acc1, step(k + 1));
    }
    if (k < n) acc0 = vaddq_f64(acc0, step(k));
    return to_cplx(vaddq_f64(acc0, acc1));
}

cplx weighted_sum(std::span<const double> w, std::span<const cplx> f) {
    const double* pf = raw(f);
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    const std::size_t n = w.size();
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        acc0 = vfmaq_n_f64(acc0, vld1q_f64(pf + 2 * k), w[k]);
        acc1 = vfmaq_n_f64(acc1, vld1q_f64(pf + 2 * k + 2), w[k + 1]);
    }
    if (k < n) acc0 = vfmaq_n_f64(acc0, vld1q_f64(pf + 2 * k), w[k]);
    return to_cplx(vaddq_f64(acc0, acc1));
}

}  // namespace hyperasym::simd::neon
