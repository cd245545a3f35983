#include "qdnand/transport.hpp"

#include "qdnand/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace qdnand {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
using Gauss = boost::math::quadrature::gauss<double, 7>;

constexpr std::size_t kPointsPerPanel = 15;
constexpr std::size_t kMaxEvaluations = std::size_t{1} << 22;

struct Panel {
    double lo = 0.0;
    double hi = 0.0;
    double value = 0.0;
    double error = 0.0;
};

// Fills ys[i] = f(xs[i]) for a whole batch.
using BatchIntegrand = std::function<void(std::span<const double>, std::span<double>)>;

void evaluate_panels(std::span<Panel> panels, const BatchIntegrand& f) {
    const auto& xk = Kronrod::abscissa();
    const auto& wk = Kronrod::weights();
    const auto& wg = Gauss::weights();

    std::vector<double> xs;
    xs.reserve(panels.size() * kPointsPerPanel);
    for (const Panel& p : panels) {
        const double mid = 0.5 * (p.lo + p.hi);
        const double half = 0.5 * (p.hi - p.lo);
        xs.push_back(mid);
        for (std::size_t j = 1; j < xk.size(); ++j) {
            xs.push_back(mid - half * xk[j]);
            xs.push_back(mid + half * xk[j]);
        }
    }
    std::vector<double> ys(xs.size());
    f(xs, ys);

    for (std::size_t k = 0; k < panels.size(); ++k) {
        const double* y = ys.data() + k * kPointsPerPanel;
        double kronrod = wk[0] * y[0];
        double gauss = wg[0] * y[0];
        for (std::size_t j = 1; j < xk.size(); ++j) {
            const double pair = y[2 * j - 1] + y[2 * j];
            kronrod += wk[j] * pair;
            // Gauss nodes are the even-indexed Kronrod abscissae.
            if (j % 2 == 0) {
                gauss += wg[j / 2] * pair;
            }
        }
        const double half = 0.5 * (panels[k].hi - panels[k].lo);
        panels[k].value = half * kronrod;
        panels[k].error = half * std::abs(kronrod - gauss);
    }
}

// Globally adaptive Gauss-Kronrod: every panel whose error estimate exceeds
// its share of the budget is bisected, until the summed estimate is within
// tolerance of the summed value.
double integrate(double lo, double hi, std::size_t initial_panels, const BatchIntegrand& f) {
    std::vector<Panel> panels(initial_panels);
    const double width = (hi - lo) / static_cast<double>(initial_panels);
    for (std::size_t k = 0; k < initial_panels; ++k) {
        panels[k].lo = lo + width * static_cast<double>(k);
        panels[k].hi = k + 1 == initial_panels ? hi : lo + width * static_cast<double>(k + 1);
    }
    evaluate_panels(panels, f);
    std::size_t used = panels.size() * kPointsPerPanel;

    while (true) {
        double total = 0.0;
        double error = 0.0;
        for (const Panel& p : panels) {
            total += p.value;
            error += p.error;
        }
        if (error <= kQuadratureTolerance * std::abs(total)) {
            return total;
        }

        const double share = kQuadratureTolerance * std::abs(total) / static_cast<double>(panels.size());
        std::vector<Panel> next;
        std::vector<Panel> fresh;
        next.reserve(panels.size() * 2);
        for (const Panel& p : panels) {
            if (p.error > share) {
                const double mid = 0.5 * (p.lo + p.hi);
                fresh.push_back({p.lo, mid});
                fresh.push_back({mid, p.hi});
            }
        }
        used += fresh.size() * kPointsPerPanel;
        if (used > kMaxEvaluations) {
            const double achieved = total != 0.0 ? error / std::abs(total) : error;
            throw NumericalError("thermal quadrature did not converge", achieved);
        }
        evaluate_panels(fresh, f);
        std::size_t f_index = 0;
        for (const Panel& p : panels) {
            if (p.error > share) {
                next.push_back(fresh[f_index++]);
                next.push_back(fresh[f_index++]);
            } else {
                next.push_back(p);
            }
        }
        panels = std::move(next);
    }
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

void ProbeSpec::validate() const {
    if (!(gamma_l > 0.0) || !(gamma_r > 0.0)) {
        throw InputError("lead broadenings must be positive");
    }
    if (!(temperature >= 0.0)) {
        throw InputError("temperature must be non-negative");
    }
    if (!std::isfinite(t1) || !std::isfinite(eps0) || !std::isfinite(e_f)) {
        throw InputError("probe parameters must be finite");
    }
}

kernels::ProbeCoefficients ProbeSpec::coefficients() const {
    return {eps0, gamma_l, gamma_r, t1 * t1};
}

ProbeSpec balanced_probe(double Gamma) {
    if (!(Gamma > 0.0)) {
        throw InputError("lead broadening must be positive");
    }
    ProbeSpec p;
    p.gamma_l = 0.5 * Gamma;
    p.gamma_r = 0.5 * Gamma;
    p.t1 = std::sqrt((std::sqrt(2.0) - 1.0) * 0.5 * Gamma);
    return p;
}

Complex probe_green(const GreenValue& g1, const ProbeSpec& probe, double energy) {
    probe.validate();
    const Complex inverse(energy - probe.eps0, 0.5 * (probe.gamma_l + probe.gamma_r));
    return 1.0 / (inverse - probe.t1 * probe.t1 * g1.value);
}

double transmission_from_green(Complex g1, const ProbeSpec& probe, double energy) {
    const auto c = probe.coefficients();
    const double re = g1.real();
    const double im = g1.imag();
    double out = 0.0;
    kernels::active_kernels().transmission(&energy, &re, &im, 1, c, &out);
    return out;
}

double transmission(const TreeSpec& tree, const DotParameters& params, const ProbeSpec& probe,
                    double energy) {
    probe.validate();
    const TreeEvaluator eval(tree, params);
    return transmission_from_green(eval(energy), probe, energy);
}

double thermal_weight(double energy, double e_f, double temperature) {
    const double x = (energy - e_f) / (2.0 * temperature);
    const double c = std::cosh(x);
    return 1.0 / (4.0 * temperature * c * c);
}

double thermal_weight_integral(double e_f, double temperature) {
    const double half = kThermalWindow * temperature;
    return integrate(e_f - half, e_f + half, 64, [&](std::span<const double> xs, std::span<double> ys) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            ys[i] = thermal_weight(xs[i], e_f, temperature);
        }
    });
}

double conductance(const TreeEvaluator& tree, const ProbeSpec& probe) {
    probe.validate();
    const auto coeffs = probe.coefficients();
    const auto& k = kernels::active_kernels();

    if (probe.temperature == 0.0) {
        return transmission_from_green(tree(probe.e_f), probe, probe.e_f);
    }

    const double kt = probe.temperature;
    const double half = kThermalWindow * kt;

    // Initial panels no wider than a quarter of the bare probe linewidth.
    const double linewidth = 0.5 * (probe.gamma_l + probe.gamma_r);
    const double wanted = std::ceil(2.0 * half / (0.25 * linewidth));
    const auto cap = static_cast<double>(kMaxEvaluations / (4 * kPointsPerPanel));
    const auto panels = static_cast<std::size_t>(std::clamp(wanted, 64.0, cap));

    std::vector<double> re;
    std::vector<double> im;
    std::vector<double> t;
    return integrate(probe.e_f - half, probe.e_f + half, panels,
                     [&](std::span<const double> xs, std::span<double> ys) {
                         const std::size_t n = xs.size();
                         re.resize(n);
                         im.resize(n);
                         t.resize(n);
                         tree.evaluate(xs, re, im);
                         k.transmission(xs.data(), re.data(), im.data(), n, coeffs, t.data());
                         for (std::size_t i = 0; i < n; ++i) {
                             ys[i] = thermal_weight(xs[i], probe.e_f, kt) * t[i];
                         }
                     });
}

double conductance(const TreeSpec& tree, const DotParameters& params, const ProbeSpec& probe) {
    return conductance(TreeEvaluator(tree, params), probe);
}

std::string axis_name(SweepAxis axis) {
    return axis == SweepAxis::energy ? "energy" : "eps0";
}

ConductanceTrace sweep(const TreeSpec& tree, const DotParameters& params, const ProbeSpec& probe,
                       SweepAxis axis, std::span<const double> grid) {
    probe.validate();
    if (grid.empty()) {
        throw InputError("sweep grid is empty");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw InputError("sweep grid must be strictly increasing");
        }
    }

    const TreeEvaluator eval(tree, params);
    ConductanceTrace trace;
    trace.axis = axis;
    trace.grid.assign(grid.begin(), grid.end());
    trace.transmission.reserve(grid.size());
    trace.conductance.reserve(grid.size());

    if (axis == SweepAxis::energy) {
        const auto g1 = eval.evaluate(grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            ProbeSpec p = probe;
            p.e_f = grid[i];
            trace.transmission.push_back(transmission_from_green(g1[i], p, grid[i]));
            trace.conductance.push_back(conductance(eval, p));
        }
    } else {
        const Complex g_fermi = eval(probe.e_f);
        for (double eps0 : grid) {
            ProbeSpec p = probe;
            p.eps0 = eps0;
            trace.transmission.push_back(transmission_from_green(g_fermi, p, probe.e_f));
            trace.conductance.push_back(conductance(eval, p));
        }
    }

    trace.metadata = {
        {"axis", axis_name(axis)},
        {"depth", std::to_string(tree.depth)},
        {"bits", format_bits(tree.input_bits)},
        {"gamma", fmt(params.gamma)},
        {"delta", fmt(params.delta)},
        {"gamma_l", fmt(probe.gamma_l)},
        {"gamma_r", fmt(probe.gamma_r)},
        {"t1", fmt(probe.t1)},
        {"eps0", fmt(probe.eps0)},
        {"e_f", fmt(probe.e_f)},
        {"temperature", fmt(probe.temperature)},
    };
    return trace;
}

Readout readout(const TreeEvaluator& tree, const ProbeSpec& probe) {
    if (probe.eps0 != 0.0 || probe.e_f != 0.0) {
        throw InputError("readout needs the probe tuned to eps0 = 0 and E_f = 0");
    }
    Readout r;
    r.conductance = conductance(tree, probe);
    r.bit = r.conductance >= kReadoutThreshold ? 1 : 0;
    r.ambiguous =
        r.conductance >= kReadoutAmbiguousLow && r.conductance <= kReadoutAmbiguousHigh;
    return r;
}

Readout readout(const TreeSpec& tree, const DotParameters& params, const ProbeSpec& probe) {
    return readout(TreeEvaluator(tree, params), probe);
}

} // namespace qdnand
