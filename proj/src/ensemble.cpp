#include "qdnand/ensemble.hpp"

#include "qdnand/classical.hpp"
#include "qdnand/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

namespace qdnand {

namespace {

enum class Outcome { success, failure, ambiguous };

struct Trial {
    Outcome outcome = Outcome::failure;
    bool truth_one = false;
    double shift = 0.0;
};

Trial run_trial(const EnsembleConfig& c, std::size_t index, std::span<const double> grid) {
    const std::uint64_t seed = mix_seed(c.base_seed, index);
    TreeSpec tree;
    if (c.input_bits) {
        tree = build_tree(c.depth, std::span<const Bit>(*c.input_bits));
    } else {
        const auto bits = draw_bits(1 << c.depth, c.p_zero, mix_seed(seed, 1));
        tree = build_tree(c.depth, std::span<const Bit>(bits));
    }
    tree = with_not_markers(std::move(tree), c.not_markers);

    DisorderSpec d = c.disorder;
    d.seed = seed;
    const DotParameters params =
        sample_disorder(tree, ideal_parameters(tree, c.delta, c.gamma), d);
    const TreeEvaluator eval(tree, params);

    Trial t;
    const Bit truth = eval_nand(tree);
    const Readout r = readout(eval, c.probe);
    if (r.ambiguous) {
        t.outcome = Outcome::ambiguous;
    } else {
        t.outcome = r.bit == truth ? Outcome::success : Outcome::failure;
    }
    t.truth_one = truth == 1;
    if (t.truth_one) {
        t.shift = resonance_position(eval, c.probe, grid);
    }
    return t;
}

} // namespace

void EnsembleConfig::validate() const {
    if (depth < 1) {
        throw InputError("ensemble depth must be at least 1");
    }
    if (trials < 1) {
        throw InputError("ensemble needs at least one trial");
    }
    if (threads < 1) {
        throw InputError("ensemble needs at least one thread");
    }
    if (input_bits && input_bits->size() != (std::size_t{1} << depth)) {
        throw InputError("depth " + std::to_string(depth) + " needs " +
                         std::to_string(1 << depth) + " input bits, got " +
                         std::to_string(input_bits->size()));
    }
    if (!(p_zero >= 0.0 && p_zero <= 1.0)) {
        throw InputError("p_zero must lie in [0, 1]");
    }
    disorder.validate();
    probe.validate();
    if (probe.eps0 != 0.0 || probe.e_f != 0.0) {
        throw InputError("ensemble readout needs the probe tuned to eps0 = 0 and E_f = 0");
    }
}

std::vector<double> shift_grid(int depth) {
    const double half = kShiftGridHalfWidth / std::sqrt(static_cast<double>(1 << depth));
    const int mid = kShiftGridPoints / 2;
    std::vector<double> grid(kShiftGridPoints);
    for (int i = 0; i < kShiftGridPoints; ++i) {
        grid[static_cast<std::size_t>(i)] = half * (i - mid) / mid;
    }
    return grid;
}

double resonance_position(const TreeEvaluator& tree, const ProbeSpec& probe,
                          std::span<const double> grid) {
    if (grid.empty()) {
        throw InputError("resonance search grid is empty");
    }
    std::vector<double> value(grid.size());
    if (probe.temperature == 0.0) {
        std::vector<double> re(grid.size());
        std::vector<double> im(grid.size());
        tree.evaluate(grid, re, im);
        kernels::active_kernels().transmission(grid.data(), re.data(), im.data(), grid.size(),
                                               probe.coefficients(), value.data());
    } else {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            ProbeSpec p = probe;
            p.e_f = grid[i];
            value[i] = conductance(tree, p);
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (value[i] > value[best]) {
            best = i;
        }
    }
    return grid[best];
}

EnsembleResult run_ensemble(const EnsembleConfig& config) {
    config.validate();
    const auto n = static_cast<std::size_t>(config.trials);
    const std::vector<double> grid = shift_grid(config.depth);
    std::vector<Trial> trials(n);

    const auto workers = std::min(static_cast<std::size_t>(config.threads), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            trials[i] = run_trial(config, i, grid);
        }
    } else {
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < n; i += workers) {
                        trials[i] = run_trial(config, i, grid);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
        for (const auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    // Aggregated in trial order so the result does not depend on scheduling.
    EnsembleResult r;
    r.config = config;
    r.trials = config.trials;
    r.shift_grid_step = grid[1] - grid[0];
    std::size_t ok = 0;
    std::size_t bad = 0;
    std::size_t flagged = 0;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const Trial& t : trials) {
        switch (t.outcome) {
        case Outcome::success: ++ok; break;
        case Outcome::failure: ++bad; break;
        case Outcome::ambiguous: ++flagged; break;
        }
        if (t.truth_one) {
            ++r.shift_samples;
            sum += t.shift;
            sum_sq += t.shift * t.shift;
        }
    }
    const auto total = static_cast<double>(n);
    r.success_rate = static_cast<double>(ok) / total;
    r.failure_rate = static_cast<double>(bad) / total;
    r.ambiguous_rate = static_cast<double>(flagged) / total;
    if (r.shift_samples > 0) {
        r.shift_mean = sum / r.shift_samples;
        r.shift_rms = std::sqrt(sum_sq / r.shift_samples);
    }
    return r;
}

EnsembleResult run_ensemble(const TreeSpec& tree, double delta, double gamma,
                            const DisorderSpec& disorder, const ProbeSpec& probe, int trials,
                            std::uint64_t base_seed) {
    EnsembleConfig c;
    c.depth = tree.depth;
    c.input_bits = tree.input_bits;
    c.not_markers = tree.not_markers;
    c.delta = delta;
    c.gamma = gamma;
    c.disorder = disorder;
    c.probe = probe;
    c.trials = trials;
    c.base_seed = base_seed;
    return run_ensemble(c);
}

std::vector<ShiftPoint> shift_scaling(std::span<const int> depths, double sigma_eps, int trials,
                                      std::uint64_t base_seed, const ProbeSpec& probe,
                                      double delta, double gamma) {
    if (trials < 1) {
        throw InputError("shift_scaling needs at least one trial");
    }
    if (!(sigma_eps >= 0.0)) {
        throw InputError("sigma_eps must be non-negative");
    }
    probe.validate();
    std::vector<ShiftPoint> out;
    for (int depth : depths) {
        if (depth < 1 || depth > 12) {
            throw InputError("shift_scaling depths must lie in 1..12, got " +
                             std::to_string(depth));
        }
        const TreeSpec tree = worst_case_tree(depth);
        const DotParameters ideal = ideal_parameters(tree, delta, gamma);
        const std::vector<double> grid = shift_grid(depth);
        double sum_sq = 0.0;
        for (int i = 0; i < trials; ++i) {
            DisorderSpec d;
            d.sigma_eps = sigma_eps;
            d.seed = mix_seed(base_seed, static_cast<std::uint64_t>(i));
            const TreeEvaluator eval(tree, sample_disorder(tree, ideal, d));
            const double e = resonance_position(eval, probe, grid);
            sum_sq += e * e;
        }
        out.push_back({1 << depth, std::sqrt(sum_sq / trials), grid[1] - grid[0]});
    }
    return out;
}

} // namespace qdnand
