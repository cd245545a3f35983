#include "qdnand/kernels/kernels.hpp"

namespace qdnand::kernels {

// Reference implementation. The recursion at each dot is
//   G^{-1} = E + i gamma - eps - tl^2 G_left - tr^2 G_right
// and G = conj(D) / |D|^2 with the terms accumulated in exactly this order.
void green_roots_scalar(const FlatTree& tree, const double* energies, std::size_t count,
                        double gamma, double* out_re, double* out_im) {
    const std::size_t n = tree.size();
    std::vector<double> g_re(n);
    std::vector<double> g_im(n);

    for (std::size_t e = 0; e < count; ++e) {
        const double energy = energies[e];
        for (std::size_t pos = 0; pos < n; ++pos) {
            double re = energy - tree.epsilon[pos];
            double im = gamma;
            const std::int32_t l = tree.left[pos];
            if (l >= 0) {
                re = re - tree.left_t2[pos] * g_re[static_cast<std::size_t>(l)];
                im = im - tree.left_t2[pos] * g_im[static_cast<std::size_t>(l)];
            }
            const std::int32_t r = tree.right[pos];
            if (r >= 0) {
                re = re - tree.right_t2[pos] * g_re[static_cast<std::size_t>(r)];
                im = im - tree.right_t2[pos] * g_im[static_cast<std::size_t>(r)];
            }
            const double norm = re * re + im * im;
            g_re[pos] = re / norm;
            g_im[pos] = -im / norm;
        }
        out_re[e] = g_re[n - 1];
        out_im[e] = g_im[n - 1];
    }
}

void transmission_scalar(const double* energies, const double* g_re, const double* g_im,
                         std::size_t count, const ProbeCoefficients& probe, double* out) {
    const double half_width = 0.5 * (probe.gamma_l + probe.gamma_r);
    const double numerator = probe.gamma_l * probe.gamma_r;
    for (std::size_t e = 0; e < count; ++e) {
        double a = energies[e] - probe.eps0;
        a = a - probe.t1_sq * g_re[e];
        const double b = half_width - probe.t1_sq * g_im[e];
        const double denom = a * a + b * b;
        out[e] = numerator / denom;
    }
}

} // namespace qdnand::kernels
