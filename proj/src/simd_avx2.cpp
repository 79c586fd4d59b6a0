#include <immintrin.h>

#include "hyperasym/simd.hpp"

namespace hyperasym::simd::avx2 {

namespace {

inline cplx hsum(__m256d acc) {
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return {_mm_cvtsd_f64(s), _mm_cvtsd_f64(_mm_unpackhi_pd(s, s))};
}

inline const double* raw(std::span<const cplx> v) {
    return reinterpret_cast<const double*>(v.data());
}

}  // namespace

cplx cauchy_sum(std::span<const cplx> weights, std::span<const cplx> nodes, cplx w) {
    const std::size_t n = nodes.size();
    const double* x = raw(nodes);
    const double* g = raw(weights);
    const __m256d wv = _mm256_setr_pd(w.real(), w.imag(), w.real(), w.imag());
    const __m256d conj_mask = _mm256_setr_pd(0.0, -0.0, 0.0, -0.0);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t k = 0;
    auto step = [&](std::size_t i) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + 2 * i), wv);
        const __m256d gv = _mm256_loadu_pd(g + 2 * i);
        const __m256d dd = _mm256_mul_pd(d, d);
        const __m256d nrm = _mm256_add_pd(dd, _mm256_permute_pd(dd, 0b0101));
        const __m256d dr = _mm256_movedup_pd(d);
        const __m256d di = _mm256_permute_pd(d, 0b1111);
        const __m256d gsw = _mm256_permute_pd(gv, 0b0101);
        // (gr dr + gi di, gi dr - gr di)
        const __m256d t = _mm256_xor_pd(_mm256_mul_pd(gsw, di), conj_mask);
        return _mm256_div_pd(_mm256_add_pd(_mm256_mul_pd(gv, dr), t), nrm);
    };
    for (; k + 4 <= n; k += 4) {
        acc0 = _mm256_add_pd(acc0, step(k));
        acc1 = _mm256_add_pd(acc1, step(k + 2));
    }
    for (; k + 2 <= n; k += 2) acc0 = _mm256_add_pd(acc0, step(k));
    cplx out = hsum(_mm256_add_pd(acc0, acc1));
    if (k < n) out += scalar::cauchy_sum(weights.subspan(k), nodes.subspan(k), w);
    return out;
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
    const std::size_t n = a.size();
    const double* pa = raw(a);
    const double* pb = raw(b);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    auto step = [&](std::size_t i) {
        const __m256d av = _mm256_loadu_pd(pa + 2 * i);
        const __m256d bv = _mm256_loadu_pd(pb + 2 * i);
        const __m256d br = _mm256_movedup_pd(bv);
        const __m256d bi = _mm256_permute_pd(bv, 0b1111);
        const __m256d asw = _mm256_permute_pd(av, 0b0101);
        return _mm256_addsub_pd(_mm256_mul_pd(av, br), _mm256_mul_pd(asw, bi));
    };
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        acc0 = _mm256_add_pd(acc0, step(k));
        acc1 = _mm256_add_pd(acc1, step(k + 2));
    }
    for (; k + 2 <= n; k += 2) acc0 = _mm256_add_pd(acc0, step(k));
    cplx out = hsum(_mm256_add_pd(acc0, acc1));
    if (k < n) out += scalar::dot(a.subspan(k), b.subspan(k));
    return out;
}

cplx weighted_sum(std::span<const double> w, std::span<const cplx> f) {
    const std::size_t n = w.size();
    const double* pf = raw(f);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    auto step = [&](std::size_t i) {
        const __m128d wp = _mm_loadu_pd(w.data() + i);
        const __m256d wd = _mm256_set_m128d(_mm_unpackhi_pd(wp, wp), _mm_unpacklo_pd(wp, wp));
        return _mm256_mul_pd(wd, _mm256_loadu_pd(pf + 2 * i));
    };
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        acc0 = _mm256_add_pd(acc0, step(k));
        acc1 = _mm256_add_pd(acc1, step(k + 2));
    }
    for (; k + 2 <= n; k += 2) acc0 = _mm256_add_pd(acc0, step(k));
    cplx out = hsum(_mm256_add_pd(acc0, acc1));
    if (k < n) out += scalar::weighted_sum(w.subspan(k), f.subspan(k));
    return out;
}

}  // namespace hyperasym::simd::avx2
