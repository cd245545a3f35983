#pragma once

// Batched inner loops over energy grids.
//
// Every variant performs the same IEEE operations in the same order (no
// fused multiply-add), so the SIMD kernels agree with the scalar reference
// bit for bit. The tests hold them to exact equality.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace qdnand::kernels {

/// Dot network flattened into evaluation order (children before parents).
/// The root is the last entry.
struct FlatTree {
    std::vector<double> epsilon;
    std::vector<std::int32_t> left;  ///< position of first child, -1 if none
    std::vector<std::int32_t> right; ///< position of second child, -1 if none
    std::vector<double> left_t2;     ///< squared coupling to the first child
    std::vector<double> right_t2;

    std::size_t size() const { return epsilon.size(); }
};

/// Probe-dot constants for the two-lead transmission.
struct ProbeCoefficients {
    double eps0 = 0.0;
    double gamma_l = 0.05;
    double gamma_r = 0.05;
    double t1_sq = 1.0;
};

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

using GreenRootsFn = void (*)(const FlatTree& tree, const double* energies, std::size_t count,
                              double gamma, double* out_re, double* out_im);

using TransmissionFn = void (*)(const double* energies, const double* g_re, const double* g_im,
                                std::size_t count, const ProbeCoefficients& probe, double* out);

struct KernelTable {
    Isa isa;
    GreenRootsFn green_roots;
    TransmissionFn transmission;
};

bool isa_available(Isa isa);

/// Best variant the running CPU supports. QDNAND_KERNEL=scalar|avx2|neon
/// overrides the choice when that variant is available.
Isa detect_isa();

const KernelTable& kernels_for(Isa isa);
const KernelTable& active_kernels();

/// Pins the active variant (tests, benchmarks). Throws if unavailable.
void select_isa(Isa isa);

std::vector<Isa> available_isas();

// Per-variant entry points; only the ones built for this target exist.
void green_roots_scalar(const FlatTree&, const double*, std::size_t, double, double*, double*);
void transmission_scalar(const double*, const double*, const double*, std::size_t,
                         const ProbeCoefficients&, double*);
#if defined(QDNAND_HAVE_AVX2)
void green_roots_avx2(const FlatTree&, const double*, std::size_t, double, double*, double*);
void transmission_avx2(const double*, const double*, const double*, std::size_t,
                       const ProbeCoefficients&, double*);
#endif
#if defined(QDNAND_HAVE_NEON)
void green_roots_neon(const FlatTree&, const double*, std::size_t, double, double*, double*);
void transmission_neon(const double*, const double*, const double*, std::size_t,
                       const ProbeCoefficients&, double*);
#endif

} // namespace qdnand::kernels
