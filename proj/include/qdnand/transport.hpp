#pragma once

// Probe-dot transport: the tree's root Green's function G1 enters the
// probe dot through t1, the probe couples to two wide-band leads with
// broadenings gamma_l and gamma_r, and the two-lead transmission
//   T(E) = gamma_l gamma_r |G0(E)|^2,
//   G0^{-1} = E - eps0 + i (gamma_l + gamma_r)/2 - t1^2 G1(E)
// is thermally averaged into a conductance in units of e^2/h.

#include "qdnand/greens.hpp"
#include "qdnand/model.hpp"

#include <string>
#include <utility>
#include <vector>

namespace qdnand {

struct ProbeSpec {
    double gamma_l = 0.05;
    double gamma_r = 0.05;
    double t1 = 1.0;
    double eps0 = 0.0;
    double e_f = 0.0;
    double temperature = 0.0; ///< k_B T

    void validate() const;
    kernels::ProbeCoefficients coefficients() const;
};

/// Symmetric leads of total broadening Gamma with t1^2 = (sqrt2 - 1) Gamma / 2,
/// which puts the readout threshold at |G1(0)| = 1 for a purely imaginary G1.
ProbeSpec balanced_probe(double Gamma);

/// Readout threshold and ambiguity band on the conductance (e^2/h).
inline constexpr double kReadoutThreshold = 0.5;
inline constexpr double kReadoutAmbiguousLow = 0.25;
inline constexpr double kReadoutAmbiguousHigh = 0.75;

/// Quadrature controls for the thermal average.
inline constexpr double kThermalWindow = 20.0; ///< half-width in units of k_B T
inline constexpr double kQuadratureTolerance = 1e-8;

Complex probe_green(const GreenValue& g1, const ProbeSpec& probe, double energy);

double transmission_from_green(Complex g1, const ProbeSpec& probe, double energy);

double transmission(const TreeSpec& tree, const DotParameters& params, const ProbeSpec& probe,
                    double energy);

/// -df/dE for the Fermi function: (1/4kT) sech^2((E - E_f)/2kT).
double thermal_weight(double energy, double e_f, double temperature);

/// Integral of thermal_weight over the quadrature window, computed with the
/// same rule the conductance uses.
double thermal_weight_integral(double e_f, double temperature);

double conductance(const TreeEvaluator& tree, const ProbeSpec& probe);
double conductance(const TreeSpec& tree, const DotParameters& params, const ProbeSpec& probe);

enum class SweepAxis { energy, eps0 };

std::string axis_name(SweepAxis axis);

struct ConductanceTrace {
    SweepAxis axis = SweepAxis::eps0;
    std::vector<double> grid;
    std::vector<double> transmission;
    std::vector<double> conductance;
    std::vector<std::pair<std::string, std::string>> metadata;
};

/// On the energy axis each grid point is used as both the transmission
/// energy and the Fermi level; on the eps0 axis it replaces the probe detuning.
ConductanceTrace sweep(const TreeSpec& tree, const DotParameters& params, const ProbeSpec& probe,
                       SweepAxis axis, std::span<const double> grid);

struct Readout {
    Bit bit = 0;
    double conductance = 0.0;
    bool ambiguous = false;
};

/// Requires the probe tuned to eps0 = 0 and E_f = 0.
Readout readout(const TreeEvaluator& tree, const ProbeSpec& probe);
Readout readout(const TreeSpec& tree, const DotParameters& params, const ProbeSpec& probe);

} // namespace qdnand
