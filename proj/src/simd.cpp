#include "hyperasym/simd.hpp"

#include <atomic>
#include <stdexcept>
#include <string>

namespace hyperasym::simd {

namespace {

struct Table {
    cplx (*cauchy)(std::span<const cplx>, std::span<const cplx>, cplx);
    cplx (*dot)(std::span<const cplx>, std::span<const cplx>);
    cplx (*weighted)(std::span<const double>, std::span<const cplx>);
};

constexpr Table scalar_table{scalar::cauchy_sum, scalar::dot, scalar::weighted_sum};
#if defined(__x86_64__) || defined(_M_X64)
constexpr Table avx2_table{avx2::cauchy_sum, avx2::dot, avx2::weighted_sum};
#endif
#if defined(__aarch64__)
constexpr Table neon_table{neon::cauchy_sum, neon::dot, neon::weighted_sum};
#endif

const Table* table_for(Isa isa) {
    switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
        case Isa::avx2: return &avx2_table;
#endif
#if defined(__aarch64__)
        case Isa::neon: return &neon_table;
#endif
        default: return &scalar_table;
    }
}

std::atomic<int>& current() {
    static std::atomic<int> isa{static_cast<int>(detected_isa())};
    return isa;
}

const Table& active() { return *table_for(static_cast<Isa>(current().load(std::memory_order_relaxed))); }

}  // namespace

Isa detected_isa() {
#if defined(__x86_64__) || defined(_M_X64)
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::avx2;
    return Isa::scalar;
#elif defined(__aarch64__)
    return Isa::neon;
#else
    return Isa::scalar;
#endif
}

bool isa_available(Isa isa) {
    if (isa == Isa::scalar) return true;
    return detected_isa() == isa;
}

Isa active_isa() { return static_cast<Isa>(current().load()); }

void set_isa(Isa isa) {
    if (!isa_available(isa)) throw std::invalid_argument("instruction set not available: " + std::string(isa_name(isa)));
    current().store(static_cast<int>(isa));
}

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
        default: return "scalar";
    }
}

cplx cauchy_sum(std::span<const cplx> weights, std::span<const cplx> nodes, cplx w) {
    return active().cauchy(weights, nodes, w);
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) { return active().dot(a, b); }

cplx weighted_sum(std::span<const double> w, std::span<const cplx> f) { return active().weighted(w, f); }

}  // namespace hyperasym::simd
