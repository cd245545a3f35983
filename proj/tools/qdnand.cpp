#include "qdnand/cli.hpp"
#include "qdnand/kernels/kernels.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"Quantum-dot NAND tree simulator"};
    app.set_version_flag("--version", "qdnand 1.0");

    std::string config_path;
    std::vector<std::string> overrides;
    std::string output;
    std::string kernel;
    bool dump = false;
    bool list_kernels = false;

    app.add_option("config", config_path, "Config file (key = value lines), '-' for stdin");
    app.add_option("-s,--set", overrides, "Extra key=value line, applied after the file")
        ->take_all()
        ->allow_extra_args(false);
    app.add_option("-o,--output", output, "Shortcut for output.path");
    app.add_option("--kernel", kernel, "Force a kernel variant (scalar, avx2, neon)");
    app.add_flag("--dump-config", dump, "Print the effective config and exit");
    app.add_flag("--list-kernels", list_kernels, "Print the kernel variants available here");
    CLI11_PARSE(app, argc, argv);

    if (list_kernels) {
        for (auto isa : qdnand::kernels::available_isas()) {
            std::cout << qdnand::kernels::isa_name(isa)
                      << (isa == qdnand::kernels::active_kernels().isa ? " (active)" : "") << '\n';
        }
        return 0;
    }

    std::string text;
    if (config_path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else if (!config_path.empty()) {
        std::ifstream f(config_path, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot read " << config_path << '\n';
            return qdnand::kExitError;
        }
        text.assign(std::istreambuf_iterator<char>(f), {});
    }
    if (!output.empty()) {
        overrides.push_back("output.path = " + output);
    }

    try {
        if (!kernel.empty()) {
            bool found = false;
            for (auto isa : {qdnand::kernels::Isa::scalar, qdnand::kernels::Isa::avx2,
                             qdnand::kernels::Isa::neon}) {
                if (kernel == qdnand::kernels::isa_name(isa)) {
                    qdnand::kernels::select_isa(isa);
                    found = true;
                }
            }
            if (!found) {
                std::cerr << "error: unknown kernel '" << kernel << "'\n";
                return qdnand::kExitError;
            }
        }
        const qdnand::RunConfig config = qdnand::parse_config(text, overrides);
        if (dump) {
            std::cout << qdnand::format_config(config);
            return 0;
        }
        return qdnand::run(config, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return qdnand::kExitError;
    }
}
