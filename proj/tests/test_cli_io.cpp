#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "spin2/config.hpp"
#include "spin2/driver.hpp"
#include "spin2/io.hpp"
#include "test_utils.hpp"

using namespace spin2;

namespace {

const char* kMinimalConfig = R"({
  "model": {"beta1": 1.0, "beta2": -2.0, "M": 0.5}
})";

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

} // namespace

TEST_CASE("config defaults follow the reference setup") {
    const RunConfig cfg = parse_run_config(kMinimalConfig);
    CHECK(cfg.model.beta0 == 100.0);
    CHECK(cfg.model.M == 0.5);
    CHECK(cfg.grid.dim == 1);
    CHECK(cfg.grid.cells[0] == 1280);            // h = 1/64 on [-10,10]
    CHECK(cfg.grid.h(0) == doctest::Approx(1.0 / 64.0));
    CHECK(cfg.stepper.dt == 0.005);
    CHECK(cfg.stepper.eps == 1e-7);

    const RunConfig c2 = parse_run_config(R"({"model": {"beta1": 0, "beta2": 1},
                                              "grid": {"dim": 2}})");
    CHECK(c2.grid.cells[0] == 320);              // h = 1/16 on [-10,10]^2
    CHECK(c2.grid.h(1) == doctest::Approx(1.0 / 16.0));
}

TEST_CASE("config validation errors") {
    CHECK_THROWS_AS(parse_run_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"model": {"beta2": 1.0}})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"model": {"beta1": 0, "beta2": 1, "M": 2.5}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"model": {"beta1": 0, "beta2": 1}, "typo": 1})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_run_config(
                        R"({"model": {"beta1": 0, "beta2": 1,
                            "potential": {"kind": "quartic"}}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"model": {"beta1": 0, "beta2": 1},
                                         "stepper": {"dt": -1}})"),
                    ConfigError);

    // negative M is folded into the mirror convention
    const RunConfig cfg =
        parse_run_config(R"({"model": {"beta1": 1.0, "beta2": -2.0, "M": -0.5}})");
    CHECK(cfg.model.mirrored);
    CHECK(cfg.model.M == 0.5);
}

TEST_CASE("sweep config") {
    const char* text = R"({
      "model": {"beta1": -1.0, "beta2": 2.0},
      "sweep": {"parameter": "M", "values": [0.0, 0.5, 1.5]}
    })";
    const SweepConfig s = parse_sweep_config(text);
    CHECK(s.parameter == "M");
    CHECK(s.values.size() == 3);

    CHECK_THROWS_AS(parse_sweep_config(R"({"model": {"beta1": 0, "beta2": 1},
                                           "sweep": {"parameter": "M", "values": []}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_sweep_config(R"({"model": {"beta1": 0, "beta2": 1},
                                           "sweep": {"parameter": "eta", "values": [1]}})"),
                    ConfigError);
}

TEST_CASE("field snapshot round trip preserves the state and its energy") {
    auto r = testutil::rng(71);
    for (int dim = 1; dim <= 2; ++dim) {
        Grid g = dim == 1 ? make_grid_1d(-10.0, 10.0, 64) : make_grid_2d(-3, 3, 12, -2, 2, 10);
        const SpinorField f = testutil::random_spinor(g, r);
        const auto path = temp_file(dim == 1 ? "spin2_roundtrip_1d.tsv" : "spin2_roundtrip_2d.tsv");
        write_field_snapshot(path.string(), f);
        const SpinorField back = read_field_snapshot(path.string());

        REQUIRE(back.grid.dim == g.dim);
        for (int c = 0; c < 5; ++c)
            for (std::size_t j = 0; j < g.size(); ++j) CHECK(back.c[c][j] == f.c[c][j]);

        ModelParams p = make_params(30.0, -1.0, 2.0, 0.5);
        CHECK(total_energy(back, p) == doctest::Approx(total_energy(f, p)).epsilon(1e-12));
        std::filesystem::remove(path);
    }
}

TEST_CASE("dry run echoes the projected initial data") {
    RunConfig cfg = parse_run_config(kMinimalConfig);
    cfg.grid = make_grid_1d(-10.0, 10.0, 128);
    const RunOutcome out = execute_run(cfg, /*dry_run=*/true);
    CHECK(out.dry_run);
    CHECK(out.diag.iterations == 0);
    CHECK(out.report.total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out.report.magnetization == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("summaries are deterministic and mirror negative magnetization") {
    RunConfig cfg = parse_run_config(R"({"model": {"beta1": 1.0, "beta2": -2.0, "M": -0.5}})");
    cfg.grid = make_grid_1d(-10.0, 10.0, 128);
    cfg.stepper.eps = 1e-6;

    const RunOutcome a = execute_run(cfg);
    const RunOutcome b = execute_run(cfg);
    CHECK(summary_json(cfg, a) == summary_json(cfg, b));

    // mirrored reporting: mass sits in l = -2 rather than l = +2
    CHECK(a.report.magnetization == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(a.report.comp[4] == doctest::Approx(0.625).epsilon(1e-10));
    CHECK(a.report.comp[0] == doctest::Approx(0.375).epsilon(1e-10));
}

TEST_CASE("run outputs land in the output directory") {
    RunConfig cfg = parse_run_config(kMinimalConfig);
    cfg.grid = make_grid_1d(-10.0, 10.0, 128);
    cfg.stepper.eps = 1e-6;
    const auto dir = std::filesystem::temp_directory_path() / "spin2_run_out";
    std::filesystem::remove_all(dir);
    cfg.output_dir = dir.string();

    const RunOutcome out = execute_run(cfg);
    write_run_outputs(cfg, out);
    CHECK(std::filesystem::exists(dir / "summary.json"));
    CHECK(std::filesystem::exists(dir / "fields.tsv"));
    CHECK(std::filesystem::exists(dir / "diagnostics.tsv"));

    // the snapshot re-evaluates to the same energy
    const SpinorField back = read_field_snapshot((dir / "fields.tsv").string());
    CHECK(total_energy(back, cfg.model) == doctest::Approx(out.energy).epsilon(1e-12));
    std::filesystem::remove_all(dir);
}

TEST_CASE("landscape table writer") {
    const auto rows = landscape_grid(0.0, -1.0, 20.0, 0.0, 21);
    const auto path = temp_file("spin2_landscape.tsv");
    write_landscape(path.string(), rows);
    std::ifstream in(path);
    std::string line;
    std::size_t count = 0;
    bool saw_argmin = false;
    while (std::getline(in, line)) {
        ++count;
        if (line.size() > 2 && line.back() == '1') saw_argmin = true;
    }
    CHECK(count == rows.size() + 1);
    CHECK(saw_argmin);
    std::filesystem::remove(path);
}

TEST_CASE("seeded perturbation is reproducible and still projected") {
    RunConfig cfg = parse_run_config(kMinimalConfig);
    cfg.grid = make_grid_1d(-10.0, 10.0, 128);
    cfg.perturb = 0.05;
    cfg.seed = 1234;
    const RunOutcome a = execute_run(cfg, true);
    const RunOutcome b = execute_run(cfg, true);
    CHECK(a.report.total == doctest::Approx(1.0).epsilon(1e-12));
    for (int c = 0; c < 5; ++c)
        for (std::size_t j = 0; j < cfg.grid.size(); ++j)
            CHECK(a.state.c[c][j] == b.state.c[c][j]);
}
