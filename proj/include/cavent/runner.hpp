#pragma once

/**
 * @file runner.hpp
 * @brief Scenario configuration, builtin figure scenarios, CSV output and
 * parameter sweeps.
 *
 * A configuration file is a flat list of `key = value` lines; `#` starts a
 * comment. Recognised keys:
 *
 *   scenario     builtin scenario used as the starting point (fig2 .. fig7)
 *   name         free-form label written to the CSV header
 *   hamiltonian  full | two_photon | effective
 *   atom, m, n   initial basis state |atom, m, n>   (atom: g, i1, i2, e)
 *   g, delta1, delta2, delta, delta_small, kappa, gamma
 *   n_max        Fock truncation (defaults to the initial excitation number)
 *   t_end, n_points, bell_m, lindblad, step
 *   axis, values, reduction      (sweeps only)
 *
 * `delta` sets delta1 and delta2 together.
 */

#include "cavent/evolve.hpp"
#include "cavent/hilbert.hpp"
#include "cavent/model.hpp"
#include "cavent/observe.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace cavent {

/// Rejected configuration (exit code 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_invariant = 3;

/// Environment variable that caps sweep parallelism.
inline constexpr const char* threads_env = "CAVENT_THREADS";

struct InitialState {
    Level atom = Level::g;
    int m = 0;
    int n = 0;
};

struct ScenarioConfig {
    std::string name = "custom";
    HamiltonianLevel hamiltonian = HamiltonianLevel::full;
    InitialState initial;
    ModelParams params;
    std::optional<int> n_max;  // unset: the initial excitation number
    TimeGrid grid{0.0, 100.0, 101};
    std::optional<int> bell_target_m;
    bool lindblad = false;
    std::optional<double> step;

    int required_n_max() const { return initial_excitations(initial.atom, initial.m, initial.n); }
    bool uses_lindblad() const { return lindblad || params.kappa > 0.0 || params.gamma > 0.0; }

    /// Params with the truncation filled in. Throws ConfigError on any invalid field.
    ModelParams resolved_params() const {
        ModelParams p = params;
        p.n_max = n_max.value_or(required_n_max());
        return p;
    }

    HilbertSpace space() const { return make_space(resolved_params().n_max, atom_dim_for(hamiltonian)); }

    void validate() const {
        const auto fail = [](const std::string& msg) { throw ConfigError(msg); };
        if (initial.m < 0 || initial.n < 0) fail("initial photon numbers must be >= 0");
        const int need = required_n_max();
        if (n_max && *n_max < need)
            fail("n_max=" + std::to_string(*n_max) + " is below the initial excitation number " + std::to_string(need));
        const ModelParams p = resolved_params();
        if (initial.m + initial.n > p.n_max) fail("initial photon total exceeds n_max");
        try {
            p.validate();
            grid.validate();
            if (hamiltonian != HamiltonianLevel::full) p.require_degenerate(to_string(hamiltonian));
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
        if (!make_space(p.n_max, atom_dim_for(hamiltonian)).has_level(initial.atom))
            fail(std::string("atom level ") + to_string(initial.atom) + " does not exist in the " +
                 to_string(hamiltonian) + " model");
        if (bell_target_m && (*bell_target_m < 1 || *bell_target_m > p.n_max))
            fail("bell_m must lie in [1, n_max]");
        if (step && !(*step > 0.0)) fail("step must be > 0");
    }
};

inline ScenarioConfig builtin_scenario(const std::string& name) {
    ScenarioConfig c;
    c.name = name;
    c.hamiltonian = HamiltonianLevel::full;
    c.params = ModelParams{};
    const bool adiabatic = name == "fig2" || name == "fig3";
    const bool two_photons = name == "fig2" || name == "fig4" || name == "fig6";
    const bool known = adiabatic || name == "fig4" || name == "fig5" || name == "fig6" || name == "fig7";
    if (!known) throw ConfigError("unknown scenario '" + name + "' (expected fig2 .. fig7)");

    if (adiabatic) {
        c.params.delta_1 = c.params.delta_2 = 20.0;
        c.params.delta_small = 5.0;
        c.grid = {0.0, 1600.0, 1600};
    } else {
        c.params.delta_1 = c.params.delta_2 = 8.0;
        c.params.delta_small = 3.0;
        c.grid = {0.0, 160.0, 800};
    }
    if (name == "fig6" || name == "fig7") c.params.kappa = 0.005;
    if (two_photons) {
        c.initial = {Level::g, 0, 2};
        c.bell_target_m = 2;
    } else {
        c.initial = {Level::g, 4, 0};
        c.bell_target_m = 4;
    }
    c.lindblad = c.params.kappa > 0.0;
    return c;
}

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size() || !std::isfinite(x)) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected a finite number, got '" + v + "'");
    }
}

inline int to_int(const std::string& key, const std::string& v) {
    const double x = to_double(key, v);
    if (x != std::floor(x) || std::abs(x) > 1e9) throw ConfigError("key '" + key + "': expected an integer");
    return static_cast<int>(x);
}

inline bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("key '" + key + "': expected true/false");
}

inline Level to_level(const std::string& v) {
    if (v == "g") return Level::g;
    if (v == "i1") return Level::i1;
    if (v == "i2") return Level::i2;
    if (v == "e") return Level::e;
    throw ConfigError("unknown atom level '" + v + "'");
}

inline HamiltonianLevel to_hamiltonian(const std::string& v) {
    if (v == "full") return HamiltonianLevel::full;
    if (v == "two_photon") return HamiltonianLevel::two_photon;
    if (v == "effective") return HamiltonianLevel::effective;
    throw ConfigError("unknown hamiltonian '" + v + "'");
}

}  // namespace detail

/// Ordered key/value pairs from a config document.
using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

inline ConfigEntries parse_config_text(const std::string& text) {
    ConfigEntries out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        auto key = detail::trim(line.substr(0, eq));
        auto value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

inline ConfigEntries read_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

inline bool is_sweep_key(const std::string& key) { return key == "axis" || key == "values" || key == "reduction"; }

/// Applies one key to a scenario. `scenario` keys are handled by the caller.
inline void apply_setting(ScenarioConfig& c, const std::string& key, const std::string& v) {
    using namespace detail;
    if (key == "name") c.name = v;
    else if (key == "hamiltonian") c.hamiltonian = to_hamiltonian(v);
    else if (key == "atom") c.initial.atom = to_level(v);
    else if (key == "m") c.initial.m = to_int(key, v);
    else if (key == "n") c.initial.n = to_int(key, v);
    else if (key == "g") c.params.g = to_double(key, v);
    else if (key == "delta1") c.params.delta_1 = to_double(key, v);
    else if (key == "delta2") c.params.delta_2 = to_double(key, v);
    else if (key == "delta") c.params.delta_1 = c.params.delta_2 = to_double(key, v);
    else if (key == "delta_small") c.params.delta_small = to_double(key, v);
    else if (key == "kappa") c.params.kappa = to_double(key, v);
    else if (key == "gamma") c.params.gamma = to_double(key, v);
    else if (key == "n_max") c.n_max = to_int(key, v);
    else if (key == "t_end") c.grid.t_end = to_double(key, v);
    else if (key == "n_points") c.grid.n_points = to_int(key, v);
    else if (key == "bell_m") {
        if (v == "none") c.bell_target_m.reset();
        else c.bell_target_m = to_int(key, v);
    } else if (key == "lindblad") c.lindblad = to_bool(key, v);
    else if (key == "step") c.step = to_double(key, v);
    else throw ConfigError("unknown config key '" + key + "'");
}

/// Builds a scenario from config entries then overrides. A `scenario` entry
/// (or `scenario_override`) selects the builtin starting point.
inline ScenarioConfig build_scenario(const ConfigEntries& entries, const ConfigEntries& overrides = {},
                                     const std::optional<std::string>& scenario_override = std::nullopt) {
    std::optional<std::string> base = scenario_override;
    if (!base)
        for (const auto& [k, v] : entries)
            if (k == "scenario") base = v;
    for (const auto& [k, v] : overrides)
        if (k == "scenario") base = v;

    ScenarioConfig c = base ? builtin_scenario(*base) : ScenarioConfig{};
    for (const auto* list : {&entries, &overrides})
        for (const auto& [k, v] : *list) {
            if (k == "scenario" || is_sweep_key(k)) continue;
            apply_setting(c, k, v);
        }
    return c;
}

/// Simulates a scenario and evaluates every observable at each grid point.
inline std::vector<ObservableRecord> simulate(const ScenarioConfig& cfg) {
    cfg.validate();
    const ModelParams p = cfg.resolved_params();
    const HilbertSpace space = cfg.space();
    const auto H = hamiltonian(cfg.hamiltonian, p, space);
    const auto psi0 = basis_state(space, cfg.initial.atom, cfg.initial.m, cfg.initial.n);

    std::vector<ObservableRecord> records;
    records.reserve(static_cast<std::size_t>(cfg.grid.n_points));
    if (!cfg.uses_lindblad()) {
        UnitaryPropagator(H).run(psi0, cfg.grid, [&](int, double t, const StateVector& psi) {
            records.push_back(observe(psi, t, cfg.bell_target_m));
        });
    } else {
        const auto c_ops = collapse_operators(p, space);
        const double step = cfg.step.value_or(default_step(H, c_ops));
        propagate_lindblad(H, c_ops, DensityMatrix::pure(psi0), cfg.grid, step,
                           [&](int, double t, const DensityMatrix& rho) {
                               records.push_back(observe(rho, t, cfg.bell_target_m));
                           });
    }
    return records;
}

inline std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline const std::vector<std::pair<int, int>>& csv_population_labels() {
    static const std::vector<std::pair<int, int>> labels{{0, 2}, {2, 0}, {4, 0}, {2, 2}, {0, 4}};
    return labels;
}

inline void write_csv_header(std::ostream& os, const ScenarioConfig& cfg) {
    const ModelParams p = cfg.resolved_params();
    os << "# scenario: " << cfg.name << '\n';
    os << "# hamiltonian: " << to_string(cfg.hamiltonian) << (cfg.uses_lindblad() ? " (lindblad)" : " (unitary)")
       << '\n';
    os << "# initial: |" << to_string(cfg.initial.atom) << ',' << cfg.initial.m << ',' << cfg.initial.n << ">\n";
    os << "# params: g=" << format_number(p.g) << " delta1=" << format_number(p.delta_1)
       << " delta2=" << format_number(p.delta_2) << " delta_small=" << format_number(p.delta_small)
       << " kappa=" << format_number(p.kappa) << " gamma=" << format_number(p.gamma) << " n_max=" << p.n_max << '\n';
    if (p.degenerate_detuning()) os << "# T0: " << format_number(t0(p)) << '\n';
    print_regime(os, validate_regime(p), "# regime: ");
    os << "t,P_02,P_20,P_40,P_22,P_04,p_ground,entropy_bits,bell_fidelity,n_expect,trace\n";
}

inline void write_csv_row(std::ostream& os, const ObservableRecord& r, int n_max) {
    os << format_number(r.t);
    for (const auto& [m, n] : csv_population_labels()) {
        os << ',';
        if (m <= n_max && n <= n_max) os << format_number(r.population(m, n));
    }
    os << ',' << format_number(r.p_ground) << ',' << format_number(r.entropy_bits) << ',';
    if (r.bell_fidelity) os << format_number(*r.bell_fidelity);
    os << ',' << format_number(r.n_expect) << ',';
    if (r.trace) os << format_number(*r.trace);
    os << '\n';
}

/// Runs one scenario, writing the CSV to `out` and diagnostics to `diag`.
inline int run(const ScenarioConfig& cfg, std::ostream& out, std::ostream& diag) {
    try {
        cfg.validate();
        const auto records = simulate(cfg);
        write_csv_header(out, cfg);
        const int n_max = cfg.resolved_params().n_max;
        for (const auto& r : records) write_csv_row(out, r, n_max);
        return exit_ok;
    } catch (const ConfigError& e) {
        diag << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const InvariantViolation& e) {
        diag << "numerical invariant violated [" << e.invariant() << "]: " << e.what() << '\n';
        return exit_invariant;
    }
}

// ---------------------------------------------------------------------------
// Sweeps

enum class Reduction { peak_fidelity, peak_entropy, time_of_peak };

inline const char* to_string(Reduction r) {
    switch (r) {
        case Reduction::peak_fidelity: return "peak_fidelity";
        case Reduction::peak_entropy: return "peak_entropy";
        case Reduction::time_of_peak: return "time_of_peak";
    }
    return "?";
}

struct SweepConfig {
    ScenarioConfig base;
    std::string axis;  // delta_1, delta_2, delta (both), delta_small, kappa, gamma
    std::vector<double> values;
    Reduction reduction = Reduction::peak_fidelity;

    void validate() const {
        if (axis != "delta_1" && axis != "delta_2" && axis != "delta" && axis != "delta_small" && axis != "kappa" &&
            axis != "gamma")
            throw ConfigError("unknown sweep axis '" + axis + "'");
        if (values.empty()) throw ConfigError("sweep needs at least one value");
        for (double v : values)
            if (!std::isfinite(v)) throw ConfigError("sweep values must be finite");
        if (reduction == Reduction::peak_fidelity && !base.bell_target_m)
            throw ConfigError("peak_fidelity reduction needs bell_m");
    }

    ScenarioConfig point(double v) const {
        ScenarioConfig c = base;
        if (axis == "delta_1") c.params.delta_1 = v;
        else if (axis == "delta_2") c.params.delta_2 = v;
        else if (axis == "delta") c.params.delta_1 = c.params.delta_2 = v;
        else if (axis == "delta_small") c.params.delta_small = v;
        else if (axis == "kappa") c.params.kappa = v;
        else if (axis == "gamma") c.params.gamma = v;
        return c;
    }
};

inline SweepConfig build_sweep(const ConfigEntries& entries, const ConfigEntries& overrides = {}) {
    SweepConfig s;
    s.base = build_scenario(entries, overrides);
    bool have_axis = false, have_values = false;
    for (const auto* list : {&entries, &overrides})
        for (const auto& [k, v] : *list) {
            if (k == "axis") {
                s.axis = v == "delta1" ? "delta_1" : v == "delta2" ? "delta_2" : v;
                have_axis = true;
            } else if (k == "values") {
                s.values.clear();
                std::stringstream ss(v);
                std::string item;
                while (std::getline(ss, item, ',')) s.values.push_back(detail::to_double("values", detail::trim(item)));
                have_values = true;
            } else if (k == "reduction") {
                if (v == "peak_fidelity") s.reduction = Reduction::peak_fidelity;
                else if (v == "peak_entropy") s.reduction = Reduction::peak_entropy;
                else if (v == "time_of_peak") s.reduction = Reduction::time_of_peak;
                else throw ConfigError("unknown reduction '" + v + "'");
            }
        }
    if (!have_axis) throw ConfigError("sweep config needs 'axis'");
    if (!have_values) throw ConfigError("sweep config needs 'values'");
    s.validate();
    return s;
}

/// Reduces a simulated run. time_of_peak locates the fidelity maximum when a
/// Bell target is configured, the entropy maximum otherwise.
inline double reduce(const std::vector<ObservableRecord>& records, Reduction how) {
    if (records.empty()) throw std::invalid_argument("nothing to reduce");
    const bool has_bell = records.front().bell_fidelity.has_value();
    const auto fid = [](const ObservableRecord& r) { return r.bell_fidelity.value_or(0.0); };
    const auto ent = [](const ObservableRecord& r) { return r.entropy_bits; };
    const auto argmax = [&](auto key) {
        return std::max_element(records.begin(), records.end(),
                                [&](const auto& x, const auto& y) { return key(x) < key(y); });
    };
    switch (how) {
        case Reduction::peak_fidelity:
            if (!has_bell) throw ConfigError("peak_fidelity reduction needs bell_m");
            return fid(*argmax(fid));
        case Reduction::peak_entropy: return ent(*argmax(ent));
        case Reduction::time_of_peak: return has_bell ? argmax(fid)->t : argmax(ent)->t;
    }
    return 0.0;
}

struct SweepRow {
    double value = 0.0;
    std::optional<double> result;  // empty: failed
    std::string error;
    int code = exit_ok;
};

inline unsigned sweep_threads() {
    if (const char* env = std::getenv(threads_env)) {
        const int n = std::atoi(env);
        if (n > 0) return static_cast<unsigned>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

/// Evaluates every sweep point; rows come back sorted by axis value.
inline std::vector<SweepRow> evaluate_sweep(const SweepConfig& sweep, unsigned threads = sweep_threads()) {
    sweep.validate();
    std::vector<SweepRow> rows(sweep.values.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            SweepRow& row = rows[i];
            row.value = sweep.values[i];
            try {
                row.result = reduce(simulate(sweep.point(row.value)), sweep.reduction);
            } catch (const InvariantViolation& e) {
                row.error = e.what();
                row.code = exit_invariant;
            } catch (const std::exception& e) {
                row.error = e.what();
                row.code = exit_config;
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(rows.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& x, const SweepRow& y) { return x.value < y.value; });
    return rows;
}

inline int run_sweep(const SweepConfig& sweep, std::ostream& out, std::ostream& diag,
                     unsigned threads = sweep_threads()) {
    std::vector<SweepRow> rows;
    try {
        rows = evaluate_sweep(sweep, threads);
    } catch (const ConfigError& e) {
        diag << "config error: " << e.what() << '\n';
        return exit_config;
    }
    out << "# sweep of " << sweep.axis << " over scenario " << sweep.base.name << '\n';
    out << sweep.axis << ',' << to_string(sweep.reduction) << ",status\n";
    int code = exit_ok;
    for (const auto& r : rows) {
        out << format_number(r.value) << ',';
        if (r.result) {
            out << format_number(*r.result) << ",ok\n";
        } else {
            out << ",failed\n";
            diag << sweep.axis << '=' << format_number(r.value) << " failed: " << r.error << '\n';
            code = std::max(code, r.code);
        }
    }
    return code;
}

}  // namespace cavent
