#pragma once

// Run configuration, parsing and command dispatch for the qdnand tool.
//
// Configs are UTF-8 text, one `section.key = value` per line, `#` starts a
// comment. Unknown keys are errors. Every command writes either to stdout or
// to output.path; files are written atomically and get a `.meta` sidecar
// holding the full effective config in the same format.

#include "qdnand/errors.hpp"
#include "qdnand/layout.hpp"
#include "qdnand/transport.hpp"

#include <cstdint>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qdnand {

enum class Command { evaluate, sweep, ensemble, layout, feasibility, classical };

std::string command_name(Command c);

struct RunConfig {
    Command command = Command::evaluate;

    // tree
    int depth = 1;
    std::string bits;          ///< empty: random inputs (ensemble only)
    double p_zero = 0.5;       ///< P(bit = 0) for random inputs
    std::set<int> not_markers;

    // physics, units of t
    double delta = 10.0;
    double gamma = 1e-6;
    double gamma_l = 0.05;
    double gamma_r = 0.05;
    double t1 = 1.0;
    bool t1_balanced = false; ///< t1 from balanced_probe(gamma_l + gamma_r)
    double eps0 = 0.0;
    double e_f = 0.0;
    double kT = 0.0;

    // disorder, also the seeds and run count for classical
    double sigma_t = 0.0;
    double sigma_eps = 0.0;
    double coupling_floor = kDefaultCouplingFloor;
    std::uint64_t seed = 0;
    int trials = 100;
    int threads = 1;

    // sweep
    std::string axis = "eps0";
    double sweep_min = -0.5;
    double sweep_max = 0.5;
    int points = 201;

    // device, for feasibility
    DeviceParameters device;

    // output
    std::string output_path; ///< empty: stdout
    std::string output_format = "csv";

    ProbeSpec probe() const;
    DisorderSpec disorder() const;
};

/// Collects every problem found, one "line N: key: reason" entry each.
class ConfigError : public InputError {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

/// Parses and validates; throws ConfigError listing all problems.
RunConfig parse_config(std::string_view text);

/// As above, then applies each override line, which may replace a key.
RunConfig parse_config(std::string_view text, std::span<const std::string> overrides);

/// Every key with its effective value; parse_config reads it back unchanged.
std::string format_config(const RunConfig& config);

/// 17 significant digits, so every double reads back exactly.
std::string format_real(double v);

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitAmbiguous = 2;

/// Executes the command. Reports go to `out`, diagnostics to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Writes `contents` to a sibling temporary file and renames it over `path`.
void write_atomic(const std::string& path, std::string_view contents);

} // namespace qdnand
