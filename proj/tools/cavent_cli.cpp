// Command-line front end: simulate, sweep and validate subcommands.

#include "cavent/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

cavent::ConfigEntries parse_overrides(const std::vector<std::string>& sets) {
    cavent::ConfigEntries out;
    for (const auto& s : sets) {
        const auto entries = cavent::parse_config_text(s);
        if (entries.size() != 1) throw cavent::ConfigError("--set expects key=value, got '" + s + "'");
        out.push_back(entries.front());
    }
    return out;
}

/// Writes to `path`, or stdout when empty. Output goes through a buffer so a
/// failed run leaves no partial file behind.
int emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return 0;
    }
    std::ofstream f(path);
    if (!f) {
        std::cerr << "cannot write '" << path << "'\n";
        return 1;
    }
    f << text;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-cavity entanglement via a virtual two-photon process"};
    app.require_subcommand(1);

    std::string scenario, config, out;
    std::vector<std::string> sets;

    auto* sim = app.add_subcommand("simulate", "Run one scenario and write its observables as CSV");
    sim->add_option("--scenario", scenario, "Builtin scenario (fig2 .. fig7)");
    sim->add_option("--config", config, "key = value configuration file")->check(CLI::ExistingFile);
    sim->add_option("--out", out, "Output CSV (default: stdout)");
    sim->add_option("--set", sets, "Override a config key, e.g. --set kappa=0.001");

    auto* sweep = app.add_subcommand("sweep", "Sweep one parameter and write a summary CSV");
    sweep->add_option("--config", config, "Sweep configuration file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--out", out, "Summary CSV")->required();
    sweep->add_option("--set", sets, "Override a config key");

    auto* validate = app.add_subcommand("validate", "Print the parameter-regime report");
    validate->add_option("--config", config, "Configuration file");
    validate->add_option("--scenario", scenario, "Builtin scenario");
    validate->add_option("--set", sets, "Override a config key");

    CLI11_PARSE(app, argc, argv);

    try {
        const auto file = config.empty() ? cavent::ConfigEntries{} : cavent::read_config_file(config);
        const auto overrides = parse_overrides(sets);
        const auto base = scenario.empty() ? std::nullopt : std::optional<std::string>(scenario);

        if (*sim || *validate) {
            bool named = base.has_value();
            for (const auto& [k, v] : file) named = named || k == "scenario";
            for (const auto& [k, v] : overrides) named = named || k == "scenario";
            if (!named && file.empty() && overrides.empty())
                throw cavent::ConfigError("give --scenario or --config");
        }

        if (*sim) {
            const auto cfg = cavent::build_scenario(file, overrides, base);
            std::ostringstream csv;
            const int code = cavent::run(cfg, csv, std::cerr);
            if (code != cavent::exit_ok) return code;
            return emit(out, csv.str());
        }
        if (*sweep) {
            const auto sw = cavent::build_sweep(file, overrides);
            std::ostringstream csv;
            const int code = cavent::run_sweep(sw, csv, std::cerr);
            if (const int io = emit(out, csv.str()); io != 0) return io;
            return code;
        }
        const auto cfg = cavent::build_scenario(file, overrides, base);
        cfg.validate();
        const auto p = cfg.resolved_params();
        std::cout << "scenario " << cfg.name << '\n';
        cavent::print_regime(std::cout, cavent::validate_regime(p));
        if (p.degenerate_detuning()) std::cout << "T0 = " << cavent::t0(p) << '\n';
        return cavent::exit_ok;
    } catch (const cavent::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return cavent::exit_config;
    }
}
