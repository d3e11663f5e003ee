#include <doctest.h>

#include <cstdio>
#include <sstream>

#include "pstchain/run.hpp"

using namespace pstchain;

TEST_CASE("minimal config resolves defaults") {
    const RunConfig cfg = parse_config(
        R"({"experiment":"steady-state","N":600,"E":1.0,"injection":"end","master_seed":42})");
    CHECK(cfg.experiment == Experiment::SteadyState);
    CHECK(cfg.n_values == std::vector<int>{600});
    CHECK(cfg.e_values == std::vector<double>{1.0});
    CHECK(cfg.n_realizations == 100);
    CHECK(cfg.j_max == 1.0);
    CHECK(cfg.master_seed == 42);
    CHECK(cfg.window.t_start_tm == 5.0);
    CHECK(cfg.window.t_end_tm == 7.0);
    CHECK(cfg.window.n_samples == 100);
    CHECK(cfg.injection.kind == InjectionSpec::Kind::End);
}

TEST_CASE("field-level diagnostics") {
    auto field_of = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            return e.field();
        }
        return std::string("no error");
    };
    CHECK(field_of(R"({"experiment":"steady-state","N":10,"E":-0.1,"master_seed":1})") == "E");
    CHECK(field_of(R"({"experiment":"steady-state","N":10,"E":1.0})") == "master_seed");
    CHECK(field_of(R"({"experiment":"steady-state","N":1,"E":1.0,"master_seed":1})") == "N");
    CHECK(field_of(R"({"experiment":"steady-state","N":10,"E":1.0,"master_seed":1,"bogus":3})") ==
          "bogus");
    CHECK(field_of(R"({"experiment":"nope"})") == "experiment");
    CHECK(field_of(R"({"N":10})") == "experiment");
    CHECK(field_of(R"({"experiment":"couplings","N":"ten"})") == "N");
    CHECK(field_of(R"({"experiment":"couplings","N":4,"rng_algorithm":"other"})") ==
          "rng_algorithm");
}

TEST_CASE("couplings need no seed, everything else does") {
    CHECK_NOTHROW(parse_config(R"({"experiment":"couplings","N":4})"));
    CHECK_THROWS_AS(parse_config(R"({"experiment":"eigen-report","N":10,"E":1.0})"), ConfigError);
}

TEST_CASE("experiment-specific window defaults") {
    const RunConfig evolve = parse_config(
        R"({"experiment":"evolve","N":8,"E":0.0,"master_seed":1})");
    CHECK(evolve.window.t_start_tm == 0.0);
    CHECK(evolve.window.t_end_tm == 2.0);
    CHECK(evolve.window.n_samples == 201);
}

TEST_CASE("nested objects parse strictly") {
    const RunConfig cfg = parse_config(R"({
        "experiment": "delta-fit",
        "chain": {"N": [100, 200], "J_max": 1.0, "law": "pst"},
        "E": [0.5, 1.0],
        "master_seed": 7,
        "fit_range": {"lo": 10, "hi": 60},
        "window": {"start_tM": 5.0, "end_tM": 7.0, "samples": 100}
    })");
    CHECK(cfg.n_values == std::vector<int>{100, 200});
    CHECK(cfg.e_values == std::vector<double>{0.5, 1.0});
    REQUIRE(cfg.fit_range.has_value());
    CHECK(cfg.fit_range->first == 10);
    CHECK(cfg.fit_range->second == 60);

    CHECK_THROWS_AS(parse_config(R"({"experiment":"couplings","chain":{"M":4}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"experiment":"couplings","N":4,"window":{"zzz":1}})"),
                    ConfigError);
}

TEST_CASE("uniform law is rejected where protocols need t_M") {
    CHECK_THROWS_AS(
        parse_config(
            R"({"experiment":"steady-state","N":10,"E":1.0,"master_seed":1,"chain":{"law":"uniform"}})"),
        ConfigError);
    CHECK_NOTHROW(parse_config(R"({"experiment":"couplings","N":10,"chain":{"law":"uniform"}})"));
}

TEST_CASE("manifest feeds back as a config") {
    RunConfig cfg = parse_config(
        R"({"experiment":"steady-state","N":16,"E":0.5,"master_seed":9,"n_realizations":3})");
    cfg.out_dir = "some/dir";
    const std::string manifest = manifest_json(cfg, {"steady_state_N16_E0.5.csv"});
    const RunConfig replay = parse_config(manifest);
    CHECK(replay.experiment == cfg.experiment);
    CHECK(replay.n_values == cfg.n_values);
    CHECK(replay.e_values == cfg.e_values);
    CHECK(replay.master_seed == cfg.master_seed);
    CHECK(replay.n_realizations == cfg.n_realizations);
    CHECK(replay.window.t_start_tm == cfg.window.t_start_tm);
    CHECK(replay.window.n_samples == cfg.window.n_samples);
    CHECK(replay.out_dir == cfg.out_dir);
    CHECK(replay.threshold == cfg.threshold);
    CHECK(replay.top_k == cfg.top_k);
    CHECK(replay.workers == cfg.workers);
}

TEST_CASE("csv formatting round-trips doubles") {
    ResultTable t;
    t.columns = {"a", "b"};
    t.units = {"x", "y"};
    const double tricky = 0.1 + 0.2; // does not print exactly at low precision
    t.rows.push_back({tricky, 1.0 / 3.0});
    std::ostringstream os;
    write_csv(t, os, "manifest.json");
    const std::string text = os.str();
    CHECK(text.find("a,b\n") == 0);
    CHECK(text.find("# units: x,y\n") != std::string::npos);
    CHECK(text.find("# manifest: manifest.json\n") != std::string::npos);
    double back1 = 0, back2 = 0;
    std::sscanf(text.substr(text.rfind('\n', text.size() - 2)).c_str() + 1, "%lf,%lf", &back1,
                &back2);
    CHECK(back1 == tricky);
    CHECK(back2 == 1.0 / 3.0);
}
