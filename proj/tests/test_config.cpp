#include "bates/config.hpp"
#include "bates/errors.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace bates;

TEST_CASE("defaults from an empty document") {
    const RunConfig c = parse_run_config("{}");
    CHECK(c.case_config.name == "I");
    CHECK(c.n_ref == 10000);
    CHECK(c.scheme.adaptation == 1);
    CHECK(c.sweep_schemes.size() == 9);
    CHECK(c.sweep_steps.size() == 20);
    CHECK_FALSE(c.output.has_value());
}

TEST_CASE("all sections") {
    const RunConfig c = parse_run_config(R"({
        "model": {"case": "IV", "K": 90},
        "grid": {"m1": 50, "m2": 25, "smax_mult": 6, "vmax": 4, "stretch_s": 12, "stretch_v": 0.02},
        "scheme": {"adaptation": 3, "family": "Do", "theta": 0.5, "n": 77, "n_ref": 500},
        "sweep": {"schemes": [{"adaptation": 2, "family": "MCS", "theta": 0.3333333333333333}], "n_values": [10, 20]},
        "output": {"path": "out.csv", "cache_dir": "cache"}
    })");
    CHECK(c.case_config.name == "IV");
    CHECK(c.case_config.params.K == 90.0);
    CHECK(c.case_config.params.lambda == 10.0);
    CHECK(c.case_config.grid.m1 == 50);
    CHECK(c.case_config.grid.stretch_v == 0.02);
    CHECK(c.scheme.adaptation == 3);
    CHECK(c.scheme.family == Family::Do);
    CHECK(c.scheme.n_steps == 77);
    CHECK(c.n_ref == 500);
    REQUIRE(c.sweep_schemes.size() == 1);
    CHECK(c.sweep_schemes[0].adaptation == 2);
    CHECK(c.sweep_steps == std::vector<std::size_t>{10, 20});
    CHECK(c.output->string() == "out.csv");
    CHECK(c.cache_dir->string() == "cache");
}

TEST_CASE("custom model and log-spaced sweep") {
    const RunConfig c = parse_run_config(R"({"model": {"kappa": 3, "eta": 0.05, "sigma": 0.3, "rho": -0.2,
        "r": 0.02, "lambda": 1, "gamma": -0.1, "delta": 0.2, "T": 1, "K": 100},
        "sweep": {"n_min": 5, "n_max": 50, "count": 4}})");
    CHECK(c.case_config.name == "custom");
    CHECK(c.case_config.params.kappa == 3.0);
    CHECK(c.sweep_steps == std::vector<std::size_t>{5, 11, 23, 50});
}

TEST_CASE("rejections") {
    CHECK_THROWS_AS(parse_run_config(R"({"extra": 1})"), ParameterError);
    CHECK_THROWS_AS(parse_run_config(R"({"grid": {"m3": 1}})"), ParameterError);
    CHECK_THROWS_AS(parse_run_config(R"({"scheme": {"theta": 0}})"), ParameterError);
    CHECK_THROWS_AS(parse_run_config(R"({"scheme": {"family": "HV"}})"), ParameterError);
    CHECK_THROWS_AS(parse_run_config(R"({"model": {"case": "VI"}})"), ParameterError);
    CHECK_THROWS_AS(parse_run_config(R"({"model": {"sigma": -1}})"), ParameterError);
    CHECK_THROWS_AS(parse_run_config(R"({"scheme": {"n": "many"}})"), ParameterError);
    CHECK_THROWS_AS(parse_run_config(R"({"sweep": {"n_values": [10], "count": 3}})"), ParameterError);
    CHECK_THROWS_AS(parse_run_config("{not json"), ParameterError);
    CHECK_THROWS_AS(load_run_config("/nonexistent/run.json"), ParameterError);
}

TEST_CASE("load from file") {
    const auto path = std::filesystem::temp_directory_path() / "bates_cfg_test.json";
    {
        std::ofstream out(path);
        out << R"({"model": {"case": "II"}})";
    }
    CHECK(load_run_config(path).case_config.params.lambda == 5.0);
    std::filesystem::remove(path);
}
