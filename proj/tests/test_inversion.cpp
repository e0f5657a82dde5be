#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

#include "randsrc/inversion.hpp"
#include "randsrc/spectral_basis.hpp"
#include "test_oracles.hpp"

using namespace randsrc;

namespace {
constexpr double kPi = std::numbers::pi;

VolterraBlock make_block(std::vector<double> kernel, std::vector<double> rhs,
                         BoundaryPoint z = BoundaryPoint::left()) {
    VolterraBlock b;
    b.z = z;
    b.kernel_sq.resize(kernel.size());
    for (std::size_t i = 0; i < kernel.size(); ++i) b.kernel_sq[i] = kernel[i] * kernel[i];
    b.rhs = std::move(rhs);
    return b;
}

// dense reference for one regularized update, on an independent code path
std::vector<double> dense_update(const VolterraBlock& block, const std::vector<double>& state, double alpha) {
    const int n = static_cast<int>(state.size());
    Eigen::MatrixXd G(n, n);
    G.setZero();
    for (int j = 0; j < n; ++j)
        for (int k = 0; k <= j; ++k) G(j, k) = block.kernel_sq[j - k];
    Eigen::MatrixXd M = G.transpose() * G + alpha * Eigen::MatrixXd::Identity(n, n);
    Eigen::Map<const Eigen::VectorXd> f(state.data(), n);
    Eigen::Map<const Eigen::VectorXd> v(block.rhs.data(), n);
    Eigen::VectorXd next = f + M.fullPivLu().solve(G.transpose() * (v - G * f));
    return {next.data(), next.data() + n};
}
}  // namespace

TEST_CASE("system assembly: Toeplitz structure from kernel values") {
    KernelTable kernel;
    kernel.z = BoundaryPoint::left();
    kernel.equation = Equation::heat;
    kernel.ht = 0.5;
    kernel.times = {0.5, 1.0, 1.5};
    kernel.values = {2.0, 3.0, 4.0};  // (a, b, c)

    VarianceSeries v;
    v.z = BoundaryPoint::left();
    v.ht = 0.5;
    v.values = {1.0, 1.0, 1.0};

    const auto system = build_volterra_system({kernel}, {v});
    const auto dense = dense_block_matrix(system.blocks[0]);
    CHECK(dense == std::vector<std::vector<double>>{{4.0, 0.0, 0.0}, {9.0, 4.0, 0.0}, {16.0, 9.0, 4.0}});

    // Toeplitz invariant: entry depends only on j - k
    for (int j = 0; j + 1 < 3; ++j)
        for (int k = 0; k <= j; ++k) CHECK(dense[j][k] == dense[j + 1][k + 1]);

    VarianceSeries mismatched = v;
    mismatched.ht = 0.25;
    CHECK_THROWS_AS(build_volterra_system({kernel}, {mismatched}), std::invalid_argument);
    VarianceSeries elsewhere = v;
    elsewhere.z = BoundaryPoint::right();
    CHECK_THROWS_AS(build_volterra_system({kernel}, {elsewhere}), std::invalid_argument);
}

TEST_CASE("heat-kernel system has a strictly positive diagonal") {
    const auto grid = GridSpec::line(64, 128, 1.0);
    const auto table = kernel_table(BoundaryPoint::left(), SpatialProfile::bubble_1d(), Equation::heat, grid,
                                    1e-8);
    VarianceSeries v;
    v.z = BoundaryPoint::left();
    v.ht = grid.ht();
    v.values.assign(grid.nt, 0.0);
    const auto system = build_volterra_system({table}, {v});
    CHECK(system.blocks[0].kernel_sq[0] > 0.0);  // G_0(2^-7)^2
}

TEST_CASE("kaczmarz step: scalar formula, exact state fixed, dense oracle") {
    // 1x1: G = g0^2, V = v, state 0 -> g0^2 v / (g0^4 + alpha)
    const double g0 = 0.7, v = 1.3, alpha = 1e-2;
    const auto one = kaczmarz_step({0.0}, make_block({g0}, {v}), alpha);
    CHECK(one[0] == doctest::Approx(g0 * g0 * v / (g0 * g0 * g0 * g0 + alpha)).epsilon(1e-15));

    // consistent state is a fixed point
    const auto block = make_block({0.5, 0.3, 0.2}, {});
    std::vector<double> truth{1.0, 2.0, 0.5};
    auto consistent = block;
    consistent.rhs = oracles::matvec(oracles::toeplitz(block.kernel_sq), truth);
    const auto unchanged = kaczmarz_step(truth, consistent, 1e-2);
    for (int i = 0; i < 3; ++i) CHECK(unchanged[i] == doctest::Approx(truth[i]).epsilon(1e-12));

    // 3x3 against the dense reference
    auto b3 = make_block({0.9, 0.4, 0.1}, {0.3, -0.2, 0.8});
    const std::vector<double> state{0.1, 0.0, -0.3};
    const auto mine = kaczmarz_step(state, b3, 1e-2);
    const auto ref = dense_update(b3, state, 1e-2);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(mine[i] - ref[i]) <= 1e-10);

    // random 8x8 blocks
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> kernel(8), rhs(8), state8(8);
        for (auto& x : kernel) x = unif(rng);
        for (auto& x : rhs) x = unif(rng) - 0.5;
        for (auto& x : state8) x = unif(rng) - 0.5;
        const auto blockr = make_block(kernel, rhs);
        const auto a = kaczmarz_step(state8, blockr, 1e-2);
        const auto b = dense_update(blockr, state8, 1e-2);
        for (int i = 0; i < 8; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-10);
    }

    CHECK_THROWS_AS(kaczmarz_step({0.0, 0.0}, make_block({1.0}, {1.0}), 1e-2), std::invalid_argument);
    CHECK_THROWS_AS(kaczmarz_step({0.0}, make_block({1.0}, {1.0}), 0.0), std::invalid_argument);
}

TEST_CASE("invert: trivial stopping, convergence flag, clamping") {
    VolterraSystem system;
    system.ht = 0.1;
    system.blocks = {make_block({0.5, 0.2}, {0.4, 0.6})};

    // epsilon at least the initial residual: returns the zero iterate untouched
    const auto zero = kaczmarz_invert(system, KaczmarzConfig{1e-3, 10.0, 50, {}});
    CHECK(zero.iterations == 0);
    CHECK(zero.converged);
    CHECK(zero.f_squared == std::vector<double>{0.0, 0.0});

    // cap reached: flagged, not thrown
    const auto capped = kaczmarz_invert(system, KaczmarzConfig{1e-3, 1e-15, 3, {}});
    CHECK_FALSE(capped.converged);
    CHECK(capped.residual_history.size() == 3);

    // negative rhs forces negative f^2 entries, which are clamped and counted
    VolterraSystem neg;
    neg.ht = 0.1;
    neg.blocks = {make_block({1.0, 0.5}, {-2.0, -1.0})};
    const auto rec = kaczmarz_invert(neg, KaczmarzConfig{1e-8, 1e-12, 200, {}});
    CHECK(rec.clamped_count > 0);
    for (std::size_t k = 0; k < rec.strength.size(); ++k) {
        CHECK(rec.strength[k] >= 0.0);
        if (rec.f_squared[k] >= 0.0)
            CHECK(rec.strength[k] == doctest::Approx(std::sqrt(rec.f_squared[k])).epsilon(1e-14));
        else
            CHECK(rec.strength[k] == 0.0);
    }

    CHECK_THROWS_AS(kaczmarz_invert(VolterraSystem{}, KaczmarzConfig{}), std::invalid_argument);
    CHECK_THROWS_AS(kaczmarz_invert(system, KaczmarzConfig{1e-2, 1e-3, 10, {0, 5}}), std::invalid_argument);
}

TEST_CASE("single block and its duplicate share the fixed point") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unif(0.05, 0.3);
    std::vector<double> kernel(8), truth(8);
    for (auto& x : kernel) x = unif(rng);
    kernel[0] = 0.9;  // dominant diagonal keeps the solve floor well below 1e-10
    for (auto& x : truth) x = unif(rng);
    auto block = make_block(kernel, {});
    block.rhs = oracles::matvec(oracles::toeplitz(block.kernel_sq), truth);

    VolterraSystem one;
    one.ht = 0.1;
    one.blocks = {block};
    VolterraSystem two;
    two.ht = 0.1;
    two.blocks = {block, block};

    const KaczmarzConfig config{1e-6, 1e-13, 2000, {}};
    const auto ra = kaczmarz_invert(one, config);
    const auto rb = kaczmarz_invert(two, config);
    for (int i = 0; i < 8; ++i) CHECK(std::abs(ra.f_squared[i] - rb.f_squared[i]) <= 1e-10);
}

TEST_CASE("scaling covariance: V -> c^2 V scales the iterates by exactly c^2") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> unif(0.1, 1.0);
    std::vector<double> kernel(16), rhs(16);
    for (auto& x : kernel) x = unif(rng);
    for (auto& x : rhs) x = unif(rng);

    VolterraSystem base;
    base.ht = 0.1;
    base.blocks = {make_block(kernel, rhs)};
    VolterraSystem scaled = base;
    for (auto& v : scaled.blocks[0].rhs) v *= 4.0;  // c = 2

    // tiny epsilon so both run the same fixed number of sweeps
    const KaczmarzConfig config{1e-3, 1e-300, 25, {}};
    const auto a = kaczmarz_invert(base, config);
    const auto b = kaczmarz_invert(scaled, config);
    for (int i = 0; i < 16; ++i) CHECK(b.f_squared[i] == 4.0 * a.f_squared[i]);
}

TEST_CASE("two-block consistent system recovers a smooth f^2") {
    // sine-squared profile on a heat-type kernel, V built as the exact product
    const int nt = 128;
    const double ht = 1.0 / nt;
    std::vector<double> kernel(nt);
    for (int j = 1; j <= nt; ++j) kernel[j - 1] = (1.0 / 12.0) * (1.0 - std::exp(-kPi * kPi * j * ht));
    std::vector<double> truth(nt);
    for (int k = 0; k < nt; ++k) truth[k] = std::pow(std::sin(2.0 * kPi * k * ht), 2);

    auto block = make_block(kernel, {});
    block.rhs = oracles::matvec(oracles::toeplitz(block.kernel_sq), truth);
    VolterraSystem system;
    system.ht = ht;
    system.blocks = {block, block};

    const auto rec = kaczmarz_invert(system, KaczmarzConfig{1e-4, 1e-10, 4000, {}});
    double num = 0.0, den = 0.0;
    for (int k = 0; k < nt; ++k) {
        const double t = k * ht;
        if (t < 0.1 || t > 0.9) continue;
        num += (rec.f_squared[k] - truth[k]) * (rec.f_squared[k] - truth[k]);
        den += truth[k] * truth[k];
    }
    CHECK(std::sqrt(num / den) <= 0.05);
}

TEST_CASE("reconstruction error metric") {
    const double ht = 1.0 / 128.0;
    const auto truth = TemporalProfile::sine();
    std::vector<double> exact(128), zero(128, 0.0), inflated(128);
    for (int k = 0; k < 128; ++k) {
        exact[k] = std::abs(truth(k * ht));
        inflated[k] = 1.1 * exact[k];
    }
    CHECK(reconstruction_error(exact, truth, 0.0, 1.0, ht) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(reconstruction_error(zero, truth, 0.0, 1.0, ht) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(reconstruction_error(inflated, truth, 0.0, 1.0, ht) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK_THROWS_AS(reconstruction_error(exact, truth, 0.9, 0.1, ht), std::invalid_argument);
    CHECK_THROWS_AS(reconstruction_error(exact, truth, 0.501 * ht, 0.999 * ht, ht), std::invalid_argument);
}
