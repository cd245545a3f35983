#pragma once

// Monte Carlo readout statistics over disorder samples.

#include "qdnand/model.hpp"
#include "qdnand/transport.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace qdnand {

struct EnsembleConfig {
    int depth = 1;
    /// Fixed inputs; when absent each trial draws i.i.d. bits with P(0) = p_zero.
    std::optional<std::vector<Bit>> input_bits;
    double p_zero = 0.5;
    std::set<int> not_markers;
    double delta = 10.0;
    double gamma = 1e-6;
    DisorderSpec disorder;
    ProbeSpec probe;
    int trials = 1;
    std::uint64_t base_seed = 0;
    int threads = 1;

    void validate() const;
};

struct EnsembleResult {
    EnsembleConfig config;
    int trials = 0;
    double success_rate = 0.0;   ///< unambiguous and equal to the classical value
    double failure_rate = 0.0;   ///< unambiguous and wrong
    double ambiguous_rate = 0.0;
    /// Resonance position (argmax of T over the shift grid) over trials whose
    /// classical value is 1.
    int shift_samples = 0;
    double shift_mean = 0.0;
    double shift_rms = 0.0;
    double shift_grid_step = 0.0;
};

/// Number of points and half-width (units of t / sqrt(N)) of the grid used
/// to locate the resonance.
inline constexpr int kShiftGridPoints = 401;
inline constexpr double kShiftGridHalfWidth = 4.0;

std::vector<double> shift_grid(int depth);

/// Grid energy maximising the probe transmission (the thermal average when
/// the probe temperature is nonzero). Ties resolve to the lowest energy.
double resonance_position(const TreeEvaluator& tree, const ProbeSpec& probe,
                          std::span<const double> grid);

/// Trial i uses seed mix_seed(base_seed, i) for disorder and, with random
/// inputs, mix_seed(that seed, 1) for the bits.
EnsembleResult run_ensemble(const EnsembleConfig& config);

/// Fixed-input convenience overload.
EnsembleResult run_ensemble(const TreeSpec& tree, double delta, double gamma,
                            const DisorderSpec& disorder, const ProbeSpec& probe, int trials,
                            std::uint64_t base_seed);

struct ShiftPoint {
    int n = 0;
    double rms_shift = 0.0;
    double grid_step = 0.0;
};

/// RMS resonance shift of disordered worst-case trees, one entry per depth.
std::vector<ShiftPoint> shift_scaling(std::span<const int> depths, double sigma_eps, int trials,
                                      std::uint64_t base_seed, const ProbeSpec& probe = {},
                                      double delta = 10.0, double gamma = 1e-6);

} // namespace qdnand
