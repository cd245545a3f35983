#include "qdnand/kernels/kernels.hpp"

#include "qdnand/errors.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace qdnand::kernels {

namespace {

constexpr KernelTable kScalar{Isa::scalar, &green_roots_scalar, &transmission_scalar};
#if defined(QDNAND_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::avx2, &green_roots_avx2, &transmission_avx2};
#endif
#if defined(QDNAND_HAVE_NEON)
constexpr KernelTable kNeon{Isa::neon, &green_roots_neon, &transmission_neon};
#endif

std::atomic<const KernelTable*> g_active{nullptr};

} // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
    }
    return "unknown";
}

bool isa_available(Isa isa) {
    switch (isa) {
    case Isa::scalar:
        return true;
    case Isa::avx2:
#if defined(QDNAND_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    case Isa::neon:
#if defined(QDNAND_HAVE_NEON)
        return true;
#else
        return false;
#endif
    }
    return false;
}

std::vector<Isa> available_isas() {
    std::vector<Isa> out;
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
        if (isa_available(isa)) {
            out.push_back(isa);
        }
    }
    return out;
}

Isa detect_isa() {
    if (const char* env = std::getenv("QDNAND_KERNEL")) {
        const std::string want(env);
        for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
            if (want == isa_name(isa) && isa_available(isa)) {
                return isa;
            }
        }
    }
    if (isa_available(Isa::avx2)) {
        return Isa::avx2;
    }
    if (isa_available(Isa::neon)) {
        return Isa::neon;
    }
    return Isa::scalar;
}

const KernelTable& kernels_for(Isa isa) {
    if (!isa_available(isa)) {
        throw InputError("kernel variant '" + std::string(isa_name(isa)) +
                         "' is not available on this CPU");
    }
    switch (isa) {
#if defined(QDNAND_HAVE_AVX2)
    case Isa::avx2: return kAvx2;
#endif
#if defined(QDNAND_HAVE_NEON)
    case Isa::neon: return kNeon;
#endif
    default: return kScalar;
    }
}

const KernelTable& active_kernels() {
    const KernelTable* table = g_active.load(std::memory_order_acquire);
    if (table == nullptr) {
        table = &kernels_for(detect_isa());
        g_active.store(table, std::memory_order_release);
    }
    return *table;
}

void select_isa(Isa isa) {
    g_active.store(&kernels_for(isa), std::memory_order_release);
}

} // namespace qdnand::kernels
