#include "qdnand/kernels/kernels.hpp"

#include <arm_neon.h>

namespace qdnand::kernels {

namespace {

constexpr std::size_t kLanes = 2;

inline float64x2_t load_padded(const double* src, std::size_t available) {
    if (available >= kLanes) {
        return vld1q_f64(src);
    }
    return vdupq_n_f64(src[0]);
}

inline void store_partial(double* dst, float64x2_t v, std::size_t available) {
    if (available >= kLanes) {
        vst1q_f64(dst, v);
    } else {
        dst[0] = vgetq_lane_f64(v, 0);
    }
}

} // namespace

void green_roots_neon(const FlatTree& tree, const double* energies, std::size_t count,
                      double gamma, double* out_re, double* out_im) {
    const std::size_t n = tree.size();
    std::vector<double> g_re(n * kLanes);
    std::vector<double> g_im(n * kLanes);
    const float64x2_t gam = vdupq_n_f64(gamma);

    for (std::size_t e = 0; e < count; e += kLanes) {
        const std::size_t avail = count - e;
        const float64x2_t energy = load_padded(energies + e, avail);
        for (std::size_t pos = 0; pos < n; ++pos) {
            float64x2_t re = vsubq_f64(energy, vdupq_n_f64(tree.epsilon[pos]));
            float64x2_t im = gam;
            const std::int32_t l = tree.left[pos];
            if (l >= 0) {
                const float64x2_t t2 = vdupq_n_f64(tree.left_t2[pos]);
                const std::size_t off = static_cast<std::size_t>(l) * kLanes;
                re = vsubq_f64(re, vmulq_f64(t2, vld1q_f64(&g_re[off])));
                im = vsubq_f64(im, vmulq_f64(t2, vld1q_f64(&g_im[off])));
            }
            const std::int32_t r = tree.right[pos];
            if (r >= 0) {
                const float64x2_t t2 = vdupq_n_f64(tree.right_t2[pos]);
                const std::size_t off = static_cast<std::size_t>(r) * kLanes;
                re = vsubq_f64(re, vmulq_f64(t2, vld1q_f64(&g_re[off])));
                im = vsubq_f64(im, vmulq_f64(t2, vld1q_f64(&g_im[off])));
            }
            const float64x2_t norm = vaddq_f64(vmulq_f64(re, re), vmulq_f64(im, im));
            vst1q_f64(&g_re[pos * kLanes], vdivq_f64(re, norm));
            vst1q_f64(&g_im[pos * kLanes], vdivq_f64(vnegq_f64(im), norm));
        }
        const std::size_t root = (n - 1) * kLanes;
        store_partial(out_re + e, vld1q_f64(&g_re[root]), avail);
        store_partial(out_im + e, vld1q_f64(&g_im[root]), avail);
    }
}

void transmission_neon(const double* energies, const double* g_re, const double* g_im,
                       std::size_t count, const ProbeCoefficients& probe, double* out) {
    const float64x2_t eps0 = vdupq_n_f64(probe.eps0);
    const float64x2_t t1sq = vdupq_n_f64(probe.t1_sq);
    const float64x2_t half_width = vdupq_n_f64(0.5 * (probe.gamma_l + probe.gamma_r));
    const float64x2_t numerator = vdupq_n_f64(probe.gamma_l * probe.gamma_r);

    for (std::size_t e = 0; e < count; e += kLanes) {
        const std::size_t avail = count - e;
        float64x2_t a = vsubq_f64(load_padded(energies + e, avail), eps0);
        a = vsubq_f64(a, vmulq_f64(t1sq, load_padded(g_re + e, avail)));
        const float64x2_t b = vsubq_f64(half_width, vmulq_f64(t1sq, load_padded(g_im + e, avail)));
        const float64x2_t denom = vaddq_f64(vmulq_f64(a, a), vmulq_f64(b, b));
        store_partial(out + e, vdivq_f64(numerator, denom), avail);
    }
}

} // namespace qdnand::kernels
