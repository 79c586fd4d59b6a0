#pragma once

#include <complex>
#include <span>
#include <string_view>

namespace hyperasym::simd {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2, neon };

// sum_k weights[k] / (nodes[k] - w)
cplx cauchy_sum(std::span<const cplx> weights, std::span<const cplx> nodes, cplx w);

// sum_k a[k] * b[k]
cplx dot(std::span<const cplx> a, std::span<const cplx> b);

// sum_k w[k] * f[k]
cplx weighted_sum(std::span<const double> w, std::span<const cplx> f);

// Best instruction set supported by the running CPU.
Isa detected_isa();
Isa active_isa();
// Throws std::invalid_argument if the CPU (or build) lacks the requested set.
void set_isa(Isa isa);
bool isa_available(Isa isa);
std::string_view isa_name(Isa isa);

namespace scalar {
cplx cauchy_sum(std::span<const cplx> weights, std::span<const cplx> nodes, cplx w);
cplx dot(std::span<const cplx> a, std::span<const cplx> b);
cplx weighted_sum(std::span<const double> w, std::span<const cplx> f);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
cplx cauchy_sum(std::span<const cplx> weights, std::span<const cplx> nodes, cplx w);
cplx dot(std::span<const cplx> a, std::span<const cplx> b);
cplx weighted_sum(std::span<const double> w, std::span<const cplx> f);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
cplx cauchy_sum(std::span<const cplx> weights, std::span<const cplx> nodes, cplx w);
cplx dot(std::span<const cplx> a, std::span<const cplx> b);
cplx weighted_sum(std::span<const double> w, std::span<const cplx> f);
}  // namespace neon
#endif

}  // namespace hyperasym::simd
