#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "randsrc/experiment.hpp"
#include "randsrc/spectral_oracle.hpp"

using namespace randsrc;
namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.equation = Equation::heat;
    c.dim = 1;
    c.grid = GridSpec::line(16, 32, 1.0);
    c.f_name = "sine";
    c.g_name = "bubble";
    c.observation_points = {BoundaryPoint::left(), BoundaryPoint::right()};
    c.paths = 40;
    c.sigma = 0.05;
    c.alpha = 1e-2;
    c.epsilon = 1e-3;
    c.max_sweeps = 20;
    c.master_seed = 7;
    return c;
}

}  // namespace

TEST_CASE("presets carry the published parameters") {
    const auto ex1 = preset("ex1");
    CHECK(ex1.equation == Equation::heat);
    CHECK(ex1.grid.nx == 64);    // hx = 2^-6
    CHECK(ex1.grid.nt == 128);   // ht = 2^-7
    CHECK(ex1.alpha == 1e-2);
    CHECK(ex1.epsilon == 2e-3);
    CHECK(ex1.f_name == "sine");
    CHECK(ex1.g_name == "bubble");
    CHECK(ex1.paths == 5000);
    CHECK(ex1.sigma == 0.0);
    CHECK(ex1.observation_points.size() == 2);

    const auto ex2 = preset("ex2");
    CHECK(ex2.equation == Equation::wave);
    CHECK(ex2.alpha == 5e-7);
    CHECK(ex2.epsilon == 1e-4);
    CHECK(ex2.f_name == "cosine2");
    CHECK(ex2.paths == 10000);

    const auto ex3 = preset("ex3");
    CHECK(ex3.dim == 2);
    CHECK(ex3.grid.nx == 32);
    CHECK(ex3.grid.ny == 32);
    CHECK(ex3.alpha == 1e-9);
    CHECK(ex3.epsilon == 1e-6);
    REQUIRE(ex3.observation_points.size() == 3);
    CHECK(ex3.observation_points[0].side == Side::x0);
    CHECK(ex3.observation_points[0].offset == doctest::Approx(0.2));
    CHECK(ex3.observation_points[1].side == Side::y0);
    CHECK(ex3.observation_points[1].offset == doctest::Approx(0.6));
    CHECK(ex3.observation_points[2].side == Side::x1);
    CHECK(ex3.observation_points[2].offset == doctest::Approx(0.4));
    CHECK(preset("ex3-single").observation_points.size() == 1);
    CHECK_THROWS_AS(preset("nope"), std::invalid_argument);
}

TEST_CASE("config validation rejects out-of-scope combinations") {
    auto c = small_config();
    c.equation = Equation::wave;
    c.dim = 2;
    c.grid = GridSpec::square(8, 8, 16, 1.0);
    c.g_name = "bubble2d";
    c.observation_points = {BoundaryPoint::at(0.0, 0.5)};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);

    auto bad = small_config();
    bad.alpha = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = small_config();
    bad.f_name = "mystery";
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("config file parsing") {
    const fs::path path = fs::temp_directory_path() / "randsrc_test_config.cfg";
    {
        std::ofstream out(path);
        out << "[model]\n"
            << "equation = wave\n"
            << "dim = 1\n"
            << "f = cosine2\n"
            << "g = bubble\n"
            << "# comment line\n"
            << "[grid]\n"
            << "nx = 64\n"
            << "nt = 128\n"
            << "final_time = 1.0\n"
            << "[observation]\n"
            << "points = 0;1\n"
            << "[sampling]\n"
            << "paths = 123\n"
            << "noise_level = 0.25 ; trailing comment\n"
            << "seed = 99\n"
            << "[inversion]\n"
            << "alpha = 5e-7\n"
            << "epsilon = 1e-4\n"
            << "max_sweeps = 77\n";
    }
    const auto c = load_config(path.string());
    CHECK(c.equation == Equation::wave);
    CHECK(c.f_name == "cosine2");
    CHECK(c.paths == 123);
    CHECK(c.sigma == 0.25);
    CHECK(c.master_seed == 99);
    CHECK(c.alpha == 5e-7);
    CHECK(c.max_sweeps == 77);
    fs::remove(path);

    CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), std::invalid_argument);
}

TEST_CASE("config echo round-trips through JSON") {
    for (const std::string name : {"ex1", "ex2", "ex3"}) {
        const auto original = preset(name);
        const auto restored = config_from_json(config_to_json(original));
        CHECK(restored.equation == original.equation);
        CHECK(restored.dim == original.dim);
        CHECK(restored.grid.nx == original.grid.nx);
        CHECK(restored.grid.ny == original.grid.ny);
        CHECK(restored.grid.nt == original.grid.nt);
        CHECK(restored.grid.final_time == original.grid.final_time);
        CHECK(restored.f_name == original.f_name);
        CHECK(restored.g_name == original.g_name);
        CHECK(restored.paths == original.paths);
        CHECK(restored.sigma == original.sigma);
        CHECK(restored.alpha == original.alpha);
        CHECK(restored.epsilon == original.epsilon);
        CHECK(restored.max_sweeps == original.max_sweeps);
        CHECK(restored.master_seed == original.master_seed);
        CHECK(restored.kernel_tolerance == original.kernel_tolerance);
        REQUIRE(restored.observation_points.size() == original.observation_points.size());
        for (std::size_t i = 0; i < original.observation_points.size(); ++i)
            CHECK(restored.observation_points[i].same_point(original.observation_points[i]));
    }
}

TEST_CASE("format_double survives a parse round trip") {
    for (double v : {1.0 / 3.0, 0.1875, 2.2250738585072014e-308, 12345.678901234567, -0.0078125}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("run_experiment writes reproducible artifacts") {
    auto config = small_config();
    const fs::path dir = fs::temp_directory_path() / "randsrc_exp_a";
    const fs::path dir2 = fs::temp_directory_path() / "randsrc_exp_b";
    fs::remove_all(dir);
    fs::remove_all(dir2);
    config.output_dir = dir.string();
    const auto result = run_experiment(config);

    CHECK(fs::exists(result.variance_csv));
    CHECK(fs::exists(result.kernel_csv));
    CHECK(fs::exists(result.reconstruction_csv));
    CHECK(fs::exists(result.summary_json));

    // summary parses and its embedded config round-trips
    nlohmann::json summary;
    std::ifstream(result.summary_json) >> summary;
    const auto echoed = config_from_json(summary.at("config"));
    CHECK(echoed.paths == config.paths);
    CHECK(echoed.master_seed == config.master_seed);
    CHECK(summary.at("error_metrics").at("relative_l2").get<double>() == result.interior_error);

    // a second run with the same config produces byte-identical CSV payloads
    auto config2 = config;
    config2.output_dir = dir2.string();
    config2.workers = 3;
    const auto result2 = run_experiment(config2);
    CHECK(read_file(result.variance_csv) == read_file(result2.variance_csv));
    CHECK(read_file(result.kernel_csv) == read_file(result2.kernel_csv));
    CHECK(read_file(result.reconstruction_csv) == read_file(result2.reconstruction_csv));

    // CSV readers invert the writers
    const auto variances = read_variance_csv(result.variance_csv);
    REQUIRE(variances.size() == result.variances.size());
    for (std::size_t pt = 0; pt < variances.size(); ++pt) {
        CHECK(variances[pt].values == result.variances[pt].values);
        CHECK(variances[pt].z.same_point(result.variances[pt].z));
        CHECK(variances[pt].path_count == config.paths);
    }
    const auto kernels = read_kernel_csv(result.kernel_csv, config.equation);
    REQUIRE(kernels.size() == result.kernels.size());
    for (std::size_t pt = 0; pt < kernels.size(); ++pt) CHECK(kernels[pt].values == result.kernels[pt].values);

    fs::remove_all(dir);
    fs::remove_all(dir2);
}

TEST_CASE("experiment errors carry the failing stage") {
    auto config = small_config();
    config.output_dir = "/dev/null/cannot_exist_here";
    try {
        run_experiment(config);
        FAIL("expected ExperimentError");
    } catch (const ExperimentError& e) {
        CHECK(e.stage == "write");
        CHECK(std::string(e.what()).find("config") != std::string::npos);
    }
}

TEST_CASE("discontinuous strength profile stays recoverable") {
    // Gibbs behavior at the jumps dominates; the interior error stays bounded
    auto config = preset("ex2");
    config.f_name = "steps";
    const auto result = run_experiment_in_memory(config);
    CHECK(result.interior_error <= 0.35);
}

TEST_CASE("snapped 2D observation points appear in the variance metadata") {
    auto config = preset("ex3-single");
    config.paths = 5;
    config.grid = GridSpec::square(16, 16, 16, 1.0);
    config.max_sweeps = 2;
    const auto result = run_experiment_in_memory(config);
    REQUIRE(result.snapped_points.size() == 1);
    CHECK(result.snapped_points[0].offset == doctest::Approx(3.0 / 16.0));  // 0.2 -> 0.1875
    CHECK(result.snapped_points[0].requested_offset == doctest::Approx(0.2));
    CHECK(result.variances[0].z.same_point(result.snapped_points[0]));
}
