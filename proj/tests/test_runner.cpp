#include "cavent/runner.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace cavent;

namespace {

std::vector<std::string> data_rows(const std::string& csv) {
    std::vector<std::string> rows;
    std::istringstream in(csv);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        rows.push_back(line);
    }
    return rows;
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(s);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
}

ScenarioConfig short_fig(const std::string& name, double t_end, int n_points) {
    auto c = builtin_scenario(name);
    c.grid = {0.0, t_end, n_points};
    return c;
}

}  // namespace

TEST(BuiltinScenario, Figures) {
    const auto f2 = builtin_scenario("fig2");
    EXPECT_EQ(f2.hamiltonian, HamiltonianLevel::full);
    EXPECT_EQ(f2.params.delta_1, 20.0);
    EXPECT_EQ(f2.params.delta_2, 20.0);
    EXPECT_EQ(f2.params.delta_small, 5.0);
    EXPECT_EQ(f2.initial.atom, Level::g);
    EXPECT_EQ(f2.initial.m, 0);
    EXPECT_EQ(f2.initial.n, 2);
    EXPECT_EQ(f2.bell_target_m, 2);
    EXPECT_EQ(f2.grid.t_end, 1600.0);
    EXPECT_EQ(f2.grid.n_points, 1600);
    EXPECT_FALSE(f2.uses_lindblad());

    const auto f3 = builtin_scenario("fig3");
    EXPECT_EQ(f3.initial.m, 4);
    EXPECT_EQ(f3.bell_target_m, 4);
    EXPECT_EQ(f3.resolved_params().n_max, 4);

    const auto f6 = builtin_scenario("fig6");
    EXPECT_EQ(f6.params.kappa, 0.005);
    EXPECT_EQ(f6.params.delta_1, 8.0);
    EXPECT_EQ(f6.params.delta_small, 3.0);
    EXPECT_EQ(f6.grid.n_points, 800);
    EXPECT_TRUE(f6.uses_lindblad());

    const auto f7 = builtin_scenario("fig7");
    EXPECT_EQ(f7.initial.m, 4);
    EXPECT_EQ(f7.params.kappa, 0.005);

    EXPECT_THROW(builtin_scenario("fig9"), ConfigError);
}

TEST(ConfigParsing, KeysAndOverrides) {
    const auto entries = parse_config_text(R"(
        # adiabatic run with decay
        scenario = fig2
        kappa = 0.001   # weak
        t_end = 50
        n_points = 11
    )");
    auto c = build_scenario(entries, {{"kappa", "0.002"}});
    EXPECT_EQ(c.params.kappa, 0.002);
    EXPECT_EQ(c.grid.t_end, 50.0);
    EXPECT_EQ(c.params.delta_1, 20.0);
    EXPECT_TRUE(c.uses_lindblad());

    c = build_scenario(entries, {}, std::string("fig4"));
    EXPECT_EQ(c.params.delta_1, 8.0);
    EXPECT_EQ(c.params.kappa, 0.001);

    EXPECT_THROW(parse_config_text("kappa 0.1"), ConfigError);
    EXPECT_THROW(build_scenario(parse_config_text("colour = red")), ConfigError);
    EXPECT_THROW(build_scenario(parse_config_text("kappa = fast")), ConfigError);
    EXPECT_THROW(build_scenario(parse_config_text("hamiltonian = exact")), ConfigError);
    EXPECT_THROW(build_scenario(parse_config_text("atom = f")), ConfigError);

    c = build_scenario(parse_config_text("hamiltonian = effective\nm = 2\ndelta = 12\nbell_m = 2"));
    EXPECT_EQ(c.hamiltonian, HamiltonianLevel::effective);
    EXPECT_EQ(c.params.delta_1, 12.0);
    EXPECT_EQ(c.params.delta_2, 12.0);
    EXPECT_NO_THROW(c.validate());
}

TEST(ScenarioValidation, Rejections) {
    auto c = builtin_scenario("fig2");
    c.n_max = 1;
    EXPECT_THROW(c.validate(), ConfigError);
    std::ostringstream out, diag;
    EXPECT_EQ(run(c, out, diag), exit_config);
    EXPECT_NE(diag.str().find("n_max"), std::string::npos);

    c = builtin_scenario("fig2");
    c.hamiltonian = HamiltonianLevel::two_photon;
    c.initial.atom = Level::i1;
    EXPECT_THROW(c.validate(), ConfigError);

    c = builtin_scenario("fig2");
    c.hamiltonian = HamiltonianLevel::effective;
    c.params.delta_2 = -20;
    EXPECT_THROW(c.validate(), ConfigError);

    c = builtin_scenario("fig2");
    c.bell_target_m = 3;
    EXPECT_THROW(c.validate(), ConfigError);

    c = builtin_scenario("fig2");
    c.initial.atom = Level::e;  // |e,0,2> carries four quanta
    EXPECT_NO_THROW(c.validate());  // default truncation follows the excitation number
    c.n_max = 2;
    EXPECT_THROW(c.validate(), ConfigError);
    c.n_max = 4;
    EXPECT_NO_THROW(c.validate());
}

TEST(Run, CsvSchema) {
    std::ostringstream out, diag;
    ASSERT_EQ(run(short_fig("fig2", 20, 5), out, diag), exit_ok) << diag.str();
    const std::string csv = out.str();
    EXPECT_NE(csv.find("t,P_02,P_20,P_40,P_22,P_04,p_ground,entropy_bits,bell_fidelity,n_expect,trace\n"),
              std::string::npos);
    EXPECT_NE(csv.find("# regime: Delta/delta = 4"), std::string::npos);
    const auto rows = data_rows(csv);
    ASSERT_EQ(rows.size(), 5u);
    const auto first = split(rows.front());
    ASSERT_EQ(first.size(), 11u);
    EXPECT_EQ(first[0], "0");
    EXPECT_EQ(first[1], "1");        // P_02
    EXPECT_EQ(first[3], "");         // P_40 outside n_max = 2
    EXPECT_EQ(first[8], "0.5");      // bell fidelity of |g,0,2>
    EXPECT_EQ(first[9], "2");        // excitation number
    EXPECT_EQ(first[10], "");        // trace only for mixed states
}

TEST(Run, Deterministic) {
    const auto cfg = short_fig("fig6", 10, 6);
    std::ostringstream a, b, diag;
    ASSERT_EQ(run(cfg, a, diag), exit_ok);
    ASSERT_EQ(run(cfg, b, diag), exit_ok);
    EXPECT_EQ(a.str(), b.str());
}

TEST(Run, Fig6TraceColumn) {
    std::ostringstream out, diag;
    ASSERT_EQ(run(builtin_scenario("fig6"), out, diag), exit_ok) << diag.str();
    const auto rows = data_rows(out.str());
    ASSERT_EQ(rows.size(), 800u);
    for (const auto& r : rows) {
        const double tr = std::stod(split(r)[10]);
        EXPECT_NEAR(tr, 1.0, 1e-6);
    }
}

TEST(Run, InvariantViolationExitCode) {
    auto c = short_fig("fig6", 100, 3);
    c.step = 5.0;  // far beyond RK4 stability
    std::ostringstream out, diag;
    EXPECT_EQ(run(c, out, diag), exit_invariant);
    EXPECT_NE(diag.str().find("invariant"), std::string::npos);
    EXPECT_TRUE(out.str().empty());
}

TEST(Reduce, PicksExtremes) {
    std::vector<ObservableRecord> recs(3);
    for (int k = 0; k < 3; ++k) {
        recs[k].t = k;
        recs[k].bell_fidelity = std::vector<double>{0.5, 0.9, 0.7}[k];
        recs[k].entropy_bits = std::vector<double>{0.1, 0.3, 0.8}[k];
    }
    EXPECT_EQ(reduce(recs, Reduction::peak_fidelity), 0.9);
    EXPECT_EQ(reduce(recs, Reduction::peak_entropy), 0.8);
    EXPECT_EQ(reduce(recs, Reduction::time_of_peak), 1.0);
    for (auto& r : recs) r.bell_fidelity.reset();
    EXPECT_EQ(reduce(recs, Reduction::time_of_peak), 2.0);
    EXPECT_THROW(reduce(recs, Reduction::peak_fidelity), ConfigError);
}

TEST(Sweep, SingleValueMatchesRun) {
    SweepConfig s;
    s.base = short_fig("fig4", 40, 81);
    s.axis = "kappa";
    s.values = {0.0};
    s.reduction = Reduction::peak_fidelity;
    const auto rows = evaluate_sweep(s, 1);
    ASSERT_EQ(rows.size(), 1u);
    ASSERT_TRUE(rows[0].result.has_value());
    EXPECT_EQ(*rows[0].result, reduce(simulate(s.base), Reduction::peak_fidelity));
}

TEST(Sweep, OrderingAndFailureIsolation) {
    SweepConfig s;
    s.base = short_fig("fig4", 20, 21);
    s.axis = "delta_small";
    s.values = {3.0, 0.0, 2.5};  // delta_small = 0 is invalid
    s.reduction = Reduction::peak_entropy;
    std::ostringstream out, diag;
    EXPECT_EQ(run_sweep(s, out, diag, 3), exit_config);
    const auto rows = data_rows(out.str());
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0], "0,,failed");
    EXPECT_EQ(split(rows[1])[0], "2.5");
    EXPECT_EQ(split(rows[1])[2], "ok");
    EXPECT_EQ(split(rows[2])[0], "3");
}

TEST(Sweep, ParallelEqualsSerial) {
    SweepConfig s;
    s.base = short_fig("fig6", 30, 31);
    s.axis = "kappa";
    s.values = {0.005, 0.0, 0.001, 0.01};
    s.reduction = Reduction::peak_fidelity;
    std::ostringstream serial, parallel, diag;
    ASSERT_EQ(run_sweep(s, serial, diag, 1), exit_ok);
    ASSERT_EQ(run_sweep(s, parallel, diag, 4), exit_ok);
    EXPECT_EQ(serial.str(), parallel.str());
}

// Decoherence lowers the attainable Bell fidelity.
TEST(Sweep, KappaDegradesPeakFidelity) {
    SweepConfig s;
    s.base = builtin_scenario("fig6");
    s.axis = "kappa";
    s.values = {0.0, 0.001, 0.005};
    s.reduction = Reduction::peak_fidelity;
    const auto rows = evaluate_sweep(s);
    ASSERT_EQ(rows.size(), 3u);
    for (const auto& r : rows) ASSERT_TRUE(r.result.has_value()) << r.error;
    EXPECT_GT(*rows[0].result, *rows[1].result);
    EXPECT_GT(*rows[1].result, *rows[2].result);
}

TEST(Sweep, ConfigBuild) {
    const auto s = build_sweep(parse_config_text("scenario = fig4\naxis = delta\nvalues = 8, 20\nreduction = time_of_peak"));
    EXPECT_EQ(s.axis, "delta");
    ASSERT_EQ(s.values.size(), 2u);
    EXPECT_EQ(s.point(20).params.delta_2, 20.0);
    EXPECT_THROW(build_sweep(parse_config_text("scenario = fig4\naxis = omega\nvalues = 1")), ConfigError);
    EXPECT_THROW(build_sweep(parse_config_text("scenario = fig4\naxis = kappa")), ConfigError);
    EXPECT_THROW(build_sweep(parse_config_text("scenario = fig4\naxis = kappa\nvalues = 1,x")), ConfigError);
}
