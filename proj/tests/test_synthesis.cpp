#include <doctest.h>

#include <cmath>
#include <numbers>

#include "randsrc/spectral_oracle.hpp"
#include "randsrc/synthesis.hpp"

using namespace randsrc;

namespace {
constexpr double kPi = std::numbers::pi;

FluxEnsemble manual_ensemble(std::vector<std::vector<double>> series_per_path, double ht) {
    FluxEnsemble ens;
    ens.observation_points = {BoundaryPoint::left()};
    ens.path_count = static_cast<int>(series_per_path.size());
    ens.sigma = 0.0;
    ens.ht = ht;
    ens.clean = {series_per_path};
    ens.noisy = {std::move(series_per_path)};
    return ens;
}
}  // namespace

TEST_CASE("variance of the zero ensemble is zero") {
    const auto ens = manual_ensemble({{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}}, 0.5);
    const auto v = variance_series(ens, BoundaryPoint::left());
    for (double x : v.values) CHECK(x == 0.0);
}

TEST_CASE("single constant-flux path reproduces the displayed formula") {
    // flux = 1 at every level, P = 1: V_j = ht * j^2
    const double ht = 1.0 / 128.0;
    const auto ens = manual_ensemble({std::vector<double>(128, 1.0)}, ht);
    const auto v = variance_series(ens, BoundaryPoint::left());
    for (std::size_t j = 1; j <= v.values.size(); ++j)
        CHECK(v.values[j - 1] == doctest::Approx(ht * j * j).epsilon(1e-13));
}

TEST_CASE("single path: sqrt(V_j P / ht) recovers the partial sums") {
    const double ht = 0.25;
    const std::vector<double> flux{0.5, -1.25, 2.0, 0.125};
    const auto ens = manual_ensemble({flux}, ht);
    const auto v = variance_series(ens, BoundaryPoint::left());
    double partial = 0.0;
    for (std::size_t j = 0; j < flux.size(); ++j) {
        partial += flux[j];
        CHECK(std::sqrt(v.values[j] * 1.0 / ht) == doctest::Approx(std::abs(partial)).epsilon(1e-13));
    }
}

TEST_CASE("unknown observation point is rejected") {
    const auto ens = manual_ensemble({{1.0, 2.0}}, 0.5);
    CHECK_THROWS_AS(variance_series(ens, BoundaryPoint::right()), std::invalid_argument);
}

TEST_CASE("f -> 2f scales V by exactly 4; f -> -f leaves V bit-identical") {
    GridSpec grid = GridSpec::line(32, 64, 1.0);
    ForwardModel model{Equation::heat, grid, TemporalProfile::sine(), SpatialProfile::bubble_1d(),
                       {BoundaryPoint::left(), BoundaryPoint::right()}, 4242};
    const auto base = synthesize_variance_series(model, 50, 0.0);

    ForwardModel doubled = model;
    doubled.f = TemporalProfile::custom([](double t) { return 2.0 * std::sin(2.0 * kPi * t); });
    const auto v2 = synthesize_variance_series(doubled, 50, 0.0);

    ForwardModel negated = model;
    negated.f = TemporalProfile::custom([](double t) { return -std::sin(2.0 * kPi * t); });
    const auto vneg = synthesize_variance_series(negated, 50, 0.0);

    for (std::size_t pt = 0; pt < base.size(); ++pt) {
        for (std::size_t j = 0; j < base[pt].values.size(); ++j) {
            CHECK(v2[pt].values[j] == 4.0 * base[pt].values[j]);
            CHECK(vneg[pt].values[j] == base[pt].values[j]);
        }
    }
}

TEST_CASE("streaming synthesis matches the materialized ensemble bit for bit") {
    GridSpec grid = GridSpec::line(32, 64, 1.0);
    ForwardModel model{Equation::heat, grid, TemporalProfile::sine(), SpatialProfile::bubble_1d(),
                       {BoundaryPoint::left(), BoundaryPoint::right()}, 777};
    const int paths = 130;  // exercises a ragged final chunk
    const double sigma = 0.1;

    const auto streamed = synthesize_variance_series(model, paths, sigma, 3);
    const auto ensemble = synthesize_flux_ensemble(model, paths, sigma, 2);
    for (std::size_t pt = 0; pt < streamed.size(); ++pt) {
        const auto direct = variance_series(ensemble, model.observation_points[pt]);
        CHECK(streamed[pt].values == direct.values);
        CHECK(streamed[pt].path_count == paths);
        CHECK(streamed[pt].sigma == sigma);
    }
}

TEST_CASE("optional mean-centering subtracts exactly the squared empirical mean") {
    GridSpec grid = GridSpec::line(16, 32, 1.0);
    ForwardModel model{Equation::heat, grid, TemporalProfile::sine(), SpatialProfile::bubble_1d(),
                       {BoundaryPoint::left()}, 31337};
    const int paths = 150;
    const auto ensemble = synthesize_flux_ensemble(model, paths, 0.0);
    const auto raw = variance_series(ensemble, BoundaryPoint::left(), false);
    const auto centered = variance_series(ensemble, BoundaryPoint::left(), true);
    const auto streamed = synthesize_variance_series(model, paths, 0.0, 2, true);

    // (1/P) sum (S - S_bar)^2 = (1/P) sum S^2 - S_bar^2
    for (int j = 0; j < grid.nt; ++j) {
        double mean = 0.0;
        for (int p = 0; p < paths; ++p) {
            double partial = 0.0;
            for (int l = 0; l <= j; ++l) partial += ensemble.noisy[0][p][l];
            mean += partial;
        }
        mean /= paths;
        const double expected = raw.values[j] - grid.ht() * mean * mean;
        CHECK(centered.values[j] == doctest::Approx(expected).epsilon(1e-10));
        CHECK(centered.values[j] <= raw.values[j]);
        CHECK(streamed[0].values[j] == doctest::Approx(centered.values[j]).epsilon(1e-12));
    }
}

TEST_CASE("V_j stays nonnegative and converges toward the analytic variance in P") {
    GridSpec grid = GridSpec::line(64, 128, 1.0);
    ForwardModel model{Equation::heat, grid, TemporalProfile::sine(), SpatialProfile::bubble_1d(),
                       {BoundaryPoint::left()}, 42};

    const double av = analytic_variance(BoundaryPoint::left(), model.g, model.f, Equation::heat, 1.0, grid, 512);
    double dev_small = 0.0, dev_large = 0.0;
    for (int paths : {1000, 5000}) {
        const auto v = synthesize_variance_series(model, paths, 0.0);
        for (double x : v[0].values) CHECK(x >= 0.0);
        const double measured = grid.ht() * v[0].values.back();
        (paths == 1000 ? dev_small : dev_large) = std::abs(measured - av) / av;
    }
    CHECK(dev_large < dev_small);
}
