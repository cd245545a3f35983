#include "qdnand/kernels/kernels.hpp"

#include <immintrin.h>

namespace qdnand::kernels {

namespace {

constexpr std::size_t kLanes = 4;

inline __m256d negate(__m256d v) {
    return _mm256_xor_pd(v, _mm256_set1_pd(-0.0));
}

// Loads up to four values, repeating the last one into unused lanes.
inline __m256d load_padded(const double* src, std::size_t available) {
    if (available >= kLanes) {
        return _mm256_loadu_pd(src);
    }
    alignas(32) double tmp[kLanes];
    for (std::size_t i = 0; i < kLanes; ++i) {
        tmp[i] = src[i < available ? i : available - 1];
    }
    return _mm256_load_pd(tmp);
}

inline void store_partial(double* dst, __m256d v, std::size_t available) {
    if (available >= kLanes) {
        _mm256_storeu_pd(dst, v);
        return;
    }
    alignas(32) double tmp[kLanes];
    _mm256_store_pd(tmp, v);
    for (std::size_t i = 0; i < available; ++i) {
        dst[i] = tmp[i];
    }
}

} // namespace

void green_roots_avx2(const FlatTree& tree, const double* energies, std::size_t count,
                      double gamma, double* out_re, double* out_im) {
    const std::size_t n = tree.size();
    std::vector<double> g_re(n * kLanes);
    std::vector<double> g_im(n * kLanes);
    const __m256d gam = _mm256_set1_pd(gamma);

    for (std::size_t e = 0; e < count; e += kLanes) {
        const std::size_t avail = count - e;
        const __m256d energy = load_padded(energies + e, avail);
        for (std::size_t pos = 0; pos < n; ++pos) {
            __m256d re = _mm256_sub_pd(energy, _mm256_set1_pd(tree.epsilon[pos]));
            __m256d im = gam;
            const std::int32_t l = tree.left[pos];
            if (l >= 0) {
                const __m256d t2 = _mm256_set1_pd(tree.left_t2[pos]);
                const std::size_t off = static_cast<std::size_t>(l) * kLanes;
                re = _mm256_sub_pd(re, _mm256_mul_pd(t2, _mm256_loadu_pd(&g_re[off])));
                im = _mm256_sub_pd(im, _mm256_mul_pd(t2, _mm256_loadu_pd(&g_im[off])));
            }
            const std::int32_t r = tree.right[pos];
            if (r >= 0) {
                const __m256d t2 = _mm256_set1_pd(tree.right_t2[pos]);
                const std::size_t off = static_cast<std::size_t>(r) * kLanes;
                re = _mm256_sub_pd(re, _mm256_mul_pd(t2, _mm256_loadu_pd(&g_re[off])));
                im = _mm256_sub_pd(im, _mm256_mul_pd(t2, _mm256_loadu_pd(&g_im[off])));
            }
            const __m256d norm = _mm256_add_pd(_mm256_mul_pd(re, re), _mm256_mul_pd(im, im));
            _mm256_storeu_pd(&g_re[pos * kLanes], _mm256_div_pd(re, norm));
            _mm256_storeu_pd(&g_im[pos * kLanes], _mm256_div_pd(negate(im), norm));
        }
        const std::size_t root = (n - 1) * kLanes;
        store_partial(out_re + e, _mm256_loadu_pd(&g_re[root]), avail);
        store_partial(out_im + e, _mm256_loadu_pd(&g_im[root]), avail);
    }
}

void transmission_avx2(const double* energies, const double* g_re, const double* g_im,
                       std::size_t count, const ProbeCoefficients& probe, double* out) {
    const __m256d eps0 = _mm256_set1_pd(probe.eps0);
    const __m256d t1sq = _mm256_set1_pd(probe.t1_sq);
    const __m256d half_width = _mm256_set1_pd(0.5 * (probe.gamma_l + probe.gamma_r));
    const __m256d numerator = _mm256_set1_pd(probe.gamma_l * probe.gamma_r);

    for (std::size_t e = 0; e < count; e += kLanes) {
        const std::size_t avail = count - e;
        __m256d a = _mm256_sub_pd(load_padded(energies + e, avail), eps0);
        a = _mm256_sub_pd(a, _mm256_mul_pd(t1sq, load_padded(g_re + e, avail)));
        const __m256d b =
            _mm256_sub_pd(half_width, _mm256_mul_pd(t1sq, load_padded(g_im + e, avail)));
        const __m256d denom = _mm256_add_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
        store_partial(out + e, _mm256_div_pd(numerator, denom), avail);
    }
}

} // namespace qdnand::kernels
