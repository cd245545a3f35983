#include "qdnand/cli.hpp"

#include "qdnand/classical.hpp"
#include "qdnand/ensemble.hpp"
#include "qdnand/greens.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace qdnand {

namespace {

using Setter = std::function<std::optional<std::string>(RunConfig&, std::string_view)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Field {
    const char* key;
    Setter set;
    Getter get;
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<std::string> read_real(std::string_view text, double& out) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        return "expected a real number, got '" + std::string(text) + "'";
    }
    if (!std::isfinite(v)) {
        return "value must be finite";
    }
    out = v;
    return std::nullopt;
}

template <typename Int>
std::optional<std::string> read_int(std::string_view text, Int& out) {
    Int v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        return "expected an integer, got '" + std::string(text) + "'";
    }
    out = v;
    return std::nullopt;
}

Field real_field(const char* key, double RunConfig::*member) {
    return {key,
            [member](RunConfig& c, std::string_view v) { return read_real(v, c.*member); },
            [member](const RunConfig& c) { return format_real(c.*member); }};
}

Field device_field(const char* key, double DeviceParameters::*member) {
    return {key,
            [member](RunConfig& c, std::string_view v) { return read_real(v, c.device.*member); },
            [member](const RunConfig& c) { return format_real(c.device.*member); }};
}

template <typename Int>
Field int_field(const char* key, Int RunConfig::*member) {
    return {key,
            [member](RunConfig& c, std::string_view v) { return read_int(v, c.*member); },
            [member](const RunConfig& c) { return std::to_string(c.*member); }};
}

Field string_field(const char* key, std::string RunConfig::*member) {
    return {key,
            [member](RunConfig& c, std::string_view v) -> std::optional<std::string> {
                c.*member = std::string(v);
                return std::nullopt;
            },
            [member](const RunConfig& c) { return c.*member; }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        {"command",
         [](RunConfig& c, std::string_view v) -> std::optional<std::string> {
             for (Command cmd : {Command::evaluate, Command::sweep, Command::ensemble,
                                 Command::layout, Command::feasibility, Command::classical}) {
                 if (v == command_name(cmd)) {
                     c.command = cmd;
                     return std::nullopt;
                 }
             }
             return "unknown command '" + std::string(v) +
                    "' (evaluate, sweep, ensemble, layout, feasibility, classical)";
         },
         [](const RunConfig& c) { return command_name(c.command); }},
        int_field("tree.depth", &RunConfig::depth),
        string_field("tree.bits", &RunConfig::bits),
        real_field("tree.p_zero", &RunConfig::p_zero),
        {"tree.not",
         [](RunConfig& c, std::string_view v) -> std::optional<std::string> {
             c.not_markers.clear();
             while (!v.empty()) {
                 const auto comma = v.find(',');
                 const auto item = trim(v.substr(0, comma));
                 int node = 0;
                 if (auto e = read_int(item, node)) {
                     return e;
                 }
                 c.not_markers.insert(node);
                 v = comma == std::string_view::npos ? std::string_view{} : v.substr(comma + 1);
             }
             return std::nullopt;
         },
         [](const RunConfig& c) {
             std::string s;
             for (int n : c.not_markers) {
                 s += (s.empty() ? "" : ",") + std::to_string(n);
             }
             return s;
         }},
        real_field("physics.delta", &RunConfig::delta),
        real_field("physics.gamma", &RunConfig::gamma),
        real_field("physics.gamma_l", &RunConfig::gamma_l),
        real_field("physics.gamma_r", &RunConfig::gamma_r),
        {"physics.t1",
         [](RunConfig& c, std::string_view v) -> std::optional<std::string> {
             if (v == "balanced") {
                 c.t1_balanced = true;
                 return std::nullopt;
             }
             c.t1_balanced = false;
             return read_real(v, c.t1);
         },
         [](const RunConfig& c) { return c.t1_balanced ? std::string("balanced") : format_real(c.t1); }},
        real_field("physics.eps0", &RunConfig::eps0),
        real_field("physics.e_f", &RunConfig::e_f),
        real_field("physics.kT", &RunConfig::kT),
        real_field("disorder.sigma_t", &RunConfig::sigma_t),
        real_field("disorder.sigma_eps", &RunConfig::sigma_eps),
        real_field("disorder.coupling_floor", &RunConfig::coupling_floor),
        int_field("disorder.seed", &RunConfig::seed),
        int_field("disorder.trials", &RunConfig::trials),
        int_field("disorder.threads", &RunConfig::threads),
        string_field("sweep.axis", &RunConfig::axis),
        real_field("sweep.min", &RunConfig::sweep_min),
        real_field("sweep.max", &RunConfig::sweep_max),
        int_field("sweep.points", &RunConfig::points),
        device_field("device.gamma", &DeviceParameters::gamma),
        device_field("device.t", &DeviceParameters::t),
        device_field("device.alpha_orb", &DeviceParameters::alpha_orb),
        device_field("device.Gamma", &DeviceParameters::Gamma),
        device_field("device.sigma_eps", &DeviceParameters::sigma_eps),
        device_field("device.sigma_t", &DeviceParameters::sigma_t),
        device_field("device.kT", &DeviceParameters::kT),
        device_field("device.spacing_nm", &DeviceParameters::spacing_nm),
        string_field("output.path", &RunConfig::output_path),
        string_field("output.format", &RunConfig::output_format),
    };
    return table;
}

bool needs_tree(Command c) { return c != Command::feasibility; }

void validate(const RunConfig& c, std::vector<std::string>& problems) {
    auto problem = [&](const std::string& key, const std::string& why) {
        problems.push_back(key + ": " + why);
    };
    auto positive = [&](const char* key, double v) {
        if (!(v > 0.0)) {
            problem(key, "must be positive, got " + format_real(v));
        }
    };
    auto non_negative = [&](const char* key, double v) {
        if (!(v >= 0.0)) {
            problem(key, "must be non-negative, got " + format_real(v));
        }
    };

    if (needs_tree(c.command)) {
        const int max_depth = c.command == Command::layout ? kLayoutMaxDepth : 24;
        if (c.depth < 1 || c.depth > max_depth) {
            problem("tree.depth", "must lie in 1.." + std::to_string(max_depth) + ", got " +
                                      std::to_string(c.depth));
        } else {
            const std::size_t want = std::size_t{1} << c.depth;
            if (c.bits.empty()) {
                if (c.command != Command::ensemble) {
                    problem("tree.bits", "required for " + command_name(c.command));
                }
            } else if (c.bits.size() != want) {
                problem("tree.bits", std::to_string(c.bits.size()) + " bits given but depth " +
                                         std::to_string(c.depth) + " needs " +
                                         std::to_string(want));
            }
            for (int node : c.not_markers) {
                if (node < 1 || node >= (1 << c.depth)) {
                    problem("tree.not", "node " + std::to_string(node) +
                                            " is not an internal node of a depth-" +
                                            std::to_string(c.depth) + " tree");
                }
            }
        }
        if (c.bits.find_first_not_of("01") != std::string::npos) {
            problem("tree.bits", "only the characters 0 and 1 are allowed");
        }
        if (!(c.p_zero >= 0.0 && c.p_zero <= 1.0)) {
            problem("tree.p_zero", "must lie in [0, 1]");
        }
    }

    positive("physics.delta", c.delta);
    non_negative("physics.gamma", c.gamma);
    positive("physics.gamma_l", c.gamma_l);
    positive("physics.gamma_r", c.gamma_r);
    non_negative("physics.kT", c.kT);

    non_negative("disorder.sigma_t", c.sigma_t);
    non_negative("disorder.sigma_eps", c.sigma_eps);
    non_negative("disorder.coupling_floor", c.coupling_floor);
    if (!(c.sigma_t < 1.0)) {
        problem("disorder.sigma_t", "must be below the mean coupling 1");
    }
    if (c.trials < 1) {
        problem("disorder.trials", "must be at least 1");
    }
    if (c.threads < 1) {
        problem("disorder.threads", "must be at least 1");
    }

    if (c.axis != "eps0" && c.axis != "energy") {
        problem("sweep.axis", "must be eps0 or energy, got '" + c.axis + "'");
    }
    if (!(c.sweep_min < c.sweep_max)) {
        problem("sweep.min", "must be below sweep.max (" + format_real(c.sweep_min) +
                                 " >= " + format_real(c.sweep_max) + ")");
    }
    if (c.points < 2) {
        problem("sweep.points", "must be at least 2");
    }

    positive("device.gamma", c.device.gamma);
    positive("device.t", c.device.t);
    positive("device.alpha_orb", c.device.alpha_orb);
    positive("device.Gamma", c.device.Gamma);
    positive("device.sigma_eps", c.device.sigma_eps);
    positive("device.sigma_t", c.device.sigma_t);
    positive("device.kT", c.device.kT);
    positive("device.spacing_nm", c.device.spacing_nm);

    if (c.output_format != "csv" && c.output_format != "text") {
        problem("output.format", "must be csv or text, got '" + c.output_format + "'");
    }
    if (c.command == Command::ensemble && (c.eps0 != 0.0 || c.e_f != 0.0)) {
        problem("physics.eps0", "ensemble readout needs eps0 = 0 and e_f = 0");
    }
}

using Row = std::vector<std::string>;

struct Table {
    Row header;
    std::vector<Row> rows;
};

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string q = "\"";
    for (char ch : s) {
        q += ch;
        if (ch == '"') {
            q += '"';
        }
    }
    return q + "\"";
}

std::string render(const Table& t, const std::string& format) {
    std::string out;
    const bool csv = format == "csv";
    auto line = [&](const Row& r, bool header) {
        if (!csv && header) {
            out += "# ";
        }
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i > 0) {
                out += csv ? "," : " ";
            }
            out += csv ? csv_cell(r[i]) : r[i];
        }
        out += '\n';
    };
    line(t.header, true);
    for (const Row& r : t.rows) {
        line(r, false);
    }
    return out;
}

TreeSpec make_tree(const RunConfig& c) {
    return with_not_markers(build_tree(c.depth, std::string_view(c.bits)), c.not_markers);
}

DotParameters make_params(const RunConfig& c, const TreeSpec& tree) {
    DotParameters p = ideal_parameters(tree, c.delta, c.gamma);
    if (c.sigma_t > 0.0 || c.sigma_eps > 0.0) {
        p = sample_disorder(tree, p, c.disorder());
    }
    return p;
}

Table key_values(std::vector<std::pair<std::string, std::string>> kv) {
    Table t{{"quantity", "value"}, {}};
    for (auto& [k, v] : kv) {
        t.rows.push_back({std::move(k), std::move(v)});
    }
    return t;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

} // namespace

std::string command_name(Command c) {
    switch (c) {
    case Command::evaluate: return "evaluate";
    case Command::sweep: return "sweep";
    case Command::ensemble: return "ensemble";
    case Command::layout: return "layout";
    case Command::feasibility: return "feasibility";
    case Command::classical: return "classical";
    }
    return "evaluate";
}

ProbeSpec RunConfig::probe() const {
    ProbeSpec p;
    if (t1_balanced) {
        p = balanced_probe(gamma_l + gamma_r);
    } else {
        p.t1 = t1;
    }
    p.gamma_l = gamma_l;
    p.gamma_r = gamma_r;
    p.eps0 = eps0;
    p.e_f = e_f;
    p.temperature = kT;
    return p;
}

DisorderSpec RunConfig::disorder() const {
    DisorderSpec d;
    d.sigma_t = sigma_t;
    d.sigma_eps = sigma_eps;
    d.seed = seed;
    d.coupling_floor = coupling_floor;
    return d;
}

ConfigError::ConfigError(std::vector<std::string> problems)
    : InputError([&] {
          std::string msg = "invalid configuration";
          for (const auto& p : problems) {
              msg += "\n  " + p;
          }
          return msg;
      }()),
      problems_(std::move(problems)) {}

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void parse_lines(std::string_view text, const std::string& source, bool overriding, RunConfig& c,
                 std::map<std::string, std::string>& seen, std::vector<std::string>& problems) {
    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) {
            continue;
        }
        const std::string where = source + " " + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            problems.push_back(where + ": expected key = value, got '" + std::string(line) + "'");
            continue;
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));

        const auto& table = fields();
        const auto it = std::find_if(table.begin(), table.end(),
                                     [&](const Field& f) { return key == f.key; });
        if (it == table.end()) {
            problems.push_back(where + ": " + key + ": unknown key");
            continue;
        }
        if (auto [pos, fresh] = seen.emplace(key, where); !fresh) {
            if (!overriding) {
                problems.push_back(where + ": " + key + ": already set on " + pos->second);
                continue;
            }
            pos->second = where;
        }
        if (auto e = it->set(c, value)) {
            problems.push_back(where + ": " + key + ": " + *e);
        }
    }
}

} // namespace

RunConfig parse_config(std::string_view text, std::span<const std::string> overrides) {
    RunConfig c;
    std::vector<std::string> problems;
    std::map<std::string, std::string> seen;
    parse_lines(text, "line", false, c, seen, problems);
    for (std::size_t i = 0; i < overrides.size(); ++i) {
        parse_lines(overrides[i], "override", true, c, seen, problems);
    }
    if (seen.count("command") == 0) {
        problems.push_back("command: missing");
    }
    validate(c, problems);
    if (!problems.empty()) {
        throw ConfigError(std::move(problems));
    }
    return c;
}

RunConfig parse_config(std::string_view text) {
    return parse_config(text, {});
}

std::string format_config(const RunConfig& config) {
    std::string out;
    for (const Field& f : fields()) {
        out += std::string(f.key) + " = " + f.get(config) + "\n";
    }
    return out;
}

void write_atomic(const std::string& path, std::string_view contents) {
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw InputError("cannot open " + tmp.string() + " for writing");
        }
        f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!f) {
            throw InputError("write to " + tmp.string() + " failed");
        }
    }
    std::filesystem::rename(tmp, target);
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        std::vector<std::string> problems;
        validate(c, problems);
        if (!problems.empty()) {
            throw ConfigError(std::move(problems));
        }

        Table table;
        int code = kExitOk;
        std::string summary;

        switch (c.command) {
        case Command::evaluate: {
            const TreeSpec tree = make_tree(c);
            const DotParameters params = make_params(c, tree);
            const TreeEvaluator eval(tree, params);
            const ProbeSpec probe = c.probe();
            const LogicalForm form = classify(tree, params);
            const Bit truth = eval_nand(tree);

            std::vector<std::pair<std::string, std::string>> kv;
            if (probe.eps0 == 0.0 && probe.e_f == 0.0) {
                const Readout r = readout(eval, probe);
                kv.push_back({"readout_bit", std::to_string(r.bit)});
                kv.push_back({"conductance", format_real(r.conductance)});
                kv.push_back({"readout_ambiguous", yes_no(r.ambiguous)});
                code = r.ambiguous ? kExitAmbiguous : kExitOk;
            } else {
                kv.push_back({"conductance", format_real(conductance(eval, probe))});
            }
            kv.push_back({"form_bit", std::to_string(form.bit)});
            kv.push_back({"alpha", format_real(form.alpha)});
            kv.push_back({"beta", format_real(form.beta)});
            kv.push_back({"form_ambiguous", yes_no(form.ambiguous)});
            kv.push_back({"classical_bit", std::to_string(truth)});
            table = key_values(std::move(kv));
            break;
        }
        case Command::sweep: {
            const TreeSpec tree = make_tree(c);
            const DotParameters params = make_params(c, tree);
            std::vector<double> grid(static_cast<std::size_t>(c.points));
            for (int i = 0; i < c.points; ++i) {
                grid[static_cast<std::size_t>(i)] =
                    c.sweep_min + (c.sweep_max - c.sweep_min) * i / (c.points - 1);
            }
            grid.back() = c.sweep_max;
            const SweepAxis axis = c.axis == "energy" ? SweepAxis::energy : SweepAxis::eps0;
            const ConductanceTrace trace = sweep(tree, params, c.probe(), axis, grid);
            table.header = {axis_name(axis), "transmission", "conductance"};
            for (std::size_t i = 0; i < grid.size(); ++i) {
                table.rows.push_back({format_real(trace.grid[i]),
                                      format_real(trace.transmission[i]),
                                      format_real(trace.conductance[i])});
            }
            summary = std::to_string(grid.size()) + " points";
            break;
        }
        case Command::ensemble: {
            EnsembleConfig e;
            e.depth = c.depth;
            if (!c.bits.empty()) {
                e.input_bits = parse_bits(c.bits);
            }
            e.p_zero = c.p_zero;
            e.not_markers = c.not_markers;
            e.delta = c.delta;
            e.gamma = c.gamma;
            e.disorder = c.disorder();
            e.probe = c.probe();
            e.trials = c.trials;
            e.base_seed = c.seed;
            e.threads = c.threads;
            const EnsembleResult r = run_ensemble(e);
            table.header = {"trials",        "success_rate",  "failure_rate",
                            "ambiguous_rate", "shift_samples", "shift_mean",
                            "shift_rms",     "shift_grid_step"};
            table.rows.push_back({std::to_string(r.trials), format_real(r.success_rate),
                                  format_real(r.failure_rate), format_real(r.ambiguous_rate),
                                  std::to_string(r.shift_samples), format_real(r.shift_mean),
                                  format_real(r.shift_rms), format_real(r.shift_grid_step)});
            summary = "success rate " + format_real(r.success_rate);
            break;
        }
        case Command::layout: {
            const TreeSpec tree = make_tree(c);
            const LayoutGraph g = build_hfractal(tree);
            table.header = {"id", "x", "y", "role", "level", "node"};
            for (std::size_t i = 0; i < g.dots.size(); ++i) {
                const LayoutDot& d = g.dots[i];
                const DotRole& r = g.roles[i];
                table.rows.push_back({std::to_string(d.id), std::to_string(d.x),
                                      std::to_string(d.y), r.inverter ? "inverter" : "node",
                                      std::to_string(r.level), std::to_string(r.node)});
            }
            summary = std::to_string(g.dots.size()) + " dots, bounding box " +
                      std::to_string(g.width()) + " x " + std::to_string(g.height());
            break;
        }
        case Command::feasibility: {
            const FeasibilityReport r = feasibility(c.device);
            table = key_values({
                {"n_max", std::to_string(r.n_max)},
                {"log2_n", std::to_string(r.log2_n)},
                {"area_mm2", format_real(r.area_mm2)},
                {"eval_time_ns", format_real(r.eval_time_ns)},
                {"limiting_factor", r.limiting_factor},
            });
            break;
        }
        case Command::classical: {
            const TreeSpec tree = make_tree(c);
            const Bit truth = eval_nand(tree);
            table.header = {"run", "seed", "result", "queries"};
            long long total = 0;
            for (int i = 0; i < c.trials; ++i) {
                const std::uint64_t s = mix_seed(c.seed, static_cast<std::uint64_t>(i));
                const QueryStats q = eval_randomized(tree, tree.input_bits, s);
                total += q.queries;
                table.rows.push_back({std::to_string(i), std::to_string(s),
                                      std::to_string(q.result), std::to_string(q.queries)});
            }
            summary = "result " + std::to_string(truth) + ", mean queries " +
                      format_real(static_cast<double>(total) / c.trials);
            break;
        }
        }

        const std::string body = render(table, c.output_format);
        if (c.output_path.empty()) {
            out << body;
        } else {
            write_atomic(c.output_path, body);
            write_atomic(c.output_path + ".meta", format_config(c));
            out << "wrote " << c.output_path;
            if (!summary.empty()) {
                out << " (" << summary << ")";
            }
            out << '\n';
        }
        return code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
}

} // namespace qdnand
