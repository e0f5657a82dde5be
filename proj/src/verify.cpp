#include "randsrc/verify.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <numbers>
#include <sstream>

#include "randsrc/experiment.hpp"
#include "randsrc/fdm_forward.hpp"
#include "randsrc/spectral_basis.hpp"
#include "randsrc/spectral_oracle.hpp"
#include "randsrc/stochastic_paths.hpp"
#include "randsrc/synthesis.hpp"

namespace randsrc {

namespace {

constexpr double kPi = std::numbers::pi;

// One-sided: a check passes when measured <= tolerance. Symmetric checks
// report the absolute deviation.
CheckResult check(const std::string& name, double measured, double tolerance, const std::string& detail = "") {
    return CheckResult{name, measured <= tolerance, measured, tolerance, detail};
}

// Brute-force Poisson flux: solves -v'' = g on a fine grid and returns
// -dv/dn at the endpoint via a second-order one-sided difference.
double poisson_flux_1d(const SpatialProfile& g, const BoundaryPoint& z, int n = 16384) {
    const double h = 1.0 / n;
    std::vector<double> rhs(n - 1), diag(n - 1, 2.0 / (h * h));
    for (int i = 1; i < n; ++i) rhs[i - 1] = g(Point{i * h, 0.0});
    // Thomas with constant coefficients -1/h^2, 2/h^2, -1/h^2
    const double off = -1.0 / (h * h);
    std::vector<double> cp(n - 1), v(n - 1);
    cp[0] = off / diag[0];
    v[0] = rhs[0] / diag[0];
    for (int i = 1; i < n - 1; ++i) {
        const double denom = diag[i] - off * cp[i - 1];
        cp[i] = off / denom;
        v[i] = (rhs[i] - off * v[i - 1]) / denom;
    }
    for (int i = n - 3; i >= 0; --i) v[i] -= cp[i] * v[i + 1];
    if (z.side == Side::x0) return (4.0 * v[0] - v[1]) / (2.0 * h);           // v'(0), v(0)=0
    return -(-4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);                          // -v'(1)
}

// Same on the unit square with the 5-point Laplacian; returns -dv/dn at a
// boundary point aligned with the fine grid.
double poisson_flux_2d(const SpatialProfile& g, const BoundaryPoint& z, int n = 192) {
    const double h = 1.0 / n;
    const int m = n - 1;
    Eigen::SparseMatrix<double> A(m * m, m * m);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(m) * m * 5);
    auto id = [m](int i, int j) { return i * m + j; };
    const double c = 1.0 / (h * h);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            trip.emplace_back(id(i, j), id(i, j), 4.0 * c);
            if (i > 0) trip.emplace_back(id(i, j), id(i - 1, j), -c);
            if (i + 1 < m) trip.emplace_back(id(i, j), id(i + 1, j), -c);
            if (j > 0) trip.emplace_back(id(i, j), id(i, j - 1), -c);
            if (j + 1 < m) trip.emplace_back(id(i, j), id(i, j + 1), -c);
        }
    }
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> solver(A);
    Eigen::VectorXd rhs(m * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) rhs[id(i, j)] = g(Point{(i + 1) * h, (j + 1) * h});
    const Eigen::VectorXd v = solver.solve(rhs);

    const int k = static_cast<int>(std::llround(z.offset / h));
    auto at = [&](int i, int j) { return v[id(i - 1, j - 1)]; };  // 1-based interior
    switch (z.side) {
        case Side::x0: return (4.0 * at(1, k) - at(2, k)) / (2.0 * h);
        case Side::x1: return (4.0 * at(n - 1, k) - at(n - 2, k)) / (2.0 * h);
        case Side::y0: return (4.0 * at(k, 1) - at(k, 2)) / (2.0 * h);
        default: return (4.0 * at(k, n - 1) - at(k, n - 2)) / (2.0 * h);
    }
}

VerifyReport verify_kernel() {
    VerifyReport report;
    const auto g1 = SpatialProfile::bubble_1d();
    const auto z0 = BoundaryPoint::left();

    report.checks.push_back(check("kernel.zero_at_t0_heat", std::abs(kernel_value(z0, g1, Equation::heat, 0.0, 64)), 0.0));
    report.checks.push_back(check("kernel.zero_at_t0_wave", std::abs(kernel_value(z0, g1, Equation::wave, 0.0, 64)), 0.0));

    const double steady = kernel_value(z0, g1, Equation::heat, 5.0, 256);
    report.checks.push_back(check("kernel.steady_state_vs_1_12", std::abs(steady - 1.0 / 12.0), 1e-6,
                                  "G_0(5) with 256 modes against the closed-form limit 1/12"));

    for (const auto& z : {BoundaryPoint::left(), BoundaryPoint::right()}) {
        const double oracle = poisson_flux_1d(g1, z);
        const double series = kernel_value(z, g1, Equation::heat, 5.0, 512);
        report.checks.push_back(check("kernel.poisson_oracle_1d_" + z.describe(),
                                      std::abs((series - oracle) / oracle), 1e-4,
                                      "series limit vs brute-force Poisson flux"));
    }
    {
        const auto g2 = SpatialProfile::bubble_2d();
        const auto z = BoundaryPoint::on_side(Side::x0, 0.1875);
        // second-order flux values at two resolutions, Richardson-extrapolated
        const double coarse = poisson_flux_2d(g2, z, 128);
        const double fine = poisson_flux_2d(g2, z, 256);
        const double oracle = (4.0 * fine - coarse) / 3.0;
        const double series = kernel_value(z, g2, Equation::heat, 5.0, 2048);
        report.checks.push_back(check("kernel.poisson_oracle_2d", std::abs((series - oracle) / oracle), 1e-4,
                                      "2D series limit vs extrapolated 5-point Poisson solves"));
    }
    {
        const auto table = kernel_table(z0, g1, Equation::heat, GridSpec::line(64, 128, 1.0), 1e-8);
        double violation = 0.0;
        for (std::size_t j = 1; j < table.values.size(); ++j)
            violation = std::max(violation, table.values[j - 1] - table.values[j]);
        report.checks.push_back(check("kernel.heat_table_monotone", violation, 0.0,
                                      "largest decrease between consecutive entries"));
    }
    return report;
}

VerifyReport verify_isometry() {
    VerifyReport report;
    const int paths = 100000;
    const int nt = 128;
    const double ht = 1.0 / nt;
    const auto f = TemporalProfile::sine();

    std::vector<double> fvals(nt);
    double target = 0.0;
    for (int k = 0; k < nt; ++k) {
        fvals[k] = f(k * ht);
        target += fvals[k] * fvals[k];
    }
    target *= ht;

    double sum = 0.0, sum_sq = 0.0;
    double pooled_sum = 0.0;
    long long pooled_count = 0;
    for (int p = 0; p < paths; ++p) {
        const auto dW = brownian_increments(SeedSpec{20240901, static_cast<std::uint64_t>(p)}, nt, ht);
        double s = 0.0;
        for (int k = 0; k < nt; ++k) {
            s += fvals[k] * dW.values[k];
            pooled_sum += dW.values[k];
        }
        pooled_count += nt;
        sum += s;
        sum_sq += s * s;
    }
    const double mean = sum / paths;
    const double var = (sum_sq - paths * mean * mean) / (paths - 1);
    const double se = target * std::sqrt(2.0 / paths);
    report.checks.push_back(check("isometry.ito_variance", std::abs(var - target), 4.0 * se,
                                  "Var(sum f dW) vs ht * sum f^2 at P=1e5"));
    report.checks.push_back(check("isometry.increment_mean", std::abs(pooled_sum / pooled_count),
                                  4.0 * std::sqrt(ht / static_cast<double>(pooled_count)),
                                  "pooled increment mean"));

    double umin = 1.0, umax = -1.0, usum = 0.0;
    const int draws = 100000;
    const auto uniforms = uniform_noise(SeedSpec{20240901, 7, StreamTag::measurement_noise}, draws);
    for (double u : uniforms) {
        umin = std::min(umin, u);
        umax = std::max(umax, u);
        usum += u;
    }
    report.checks.push_back(check("isometry.uniform_support", std::max(std::abs(umin), std::abs(umax)) - 1.0,
                                  0.0, "all draws inside [-1,1]"));
    report.checks.push_back(
        check("isometry.uniform_mean", std::abs(usum / draws), 4.0 / std::sqrt(3.0 * draws), "CLT bound"));

    // cross-stream correlation: brownian vs measurement-noise of the same path
    double cxy = 0.0, cxx = 0.0, cyy = 0.0;
    const auto gauss = brownian_increments(SeedSpec{20240901, 7, StreamTag::brownian}, draws, 1.0);
    for (int i = 0; i < draws; ++i) {
        cxy += gauss.values[i] * uniforms[i];
        cxx += gauss.values[i] * gauss.values[i];
        cyy += uniforms[i] * uniforms[i];
    }
    report.checks.push_back(check("isometry.stream_independence", std::abs(cxy / std::sqrt(cxx * cyy)), 0.01,
                                  "empirical correlation between stream tags"));
    return report;
}

VerifyReport verify_variance() {
    VerifyReport report;
    ExperimentConfig config = preset("ex1");
    config.sigma = 0.0;

    ForwardModel model{config.equation, config.grid, config.f_true(), config.g_profile(),
                       config.observation_points, config.master_seed};
    const auto variances = synthesize_variance_series(model, config.paths, config.sigma, config.workers);

    const auto g = config.g_profile();
    for (double t : {0.5, 1.0}) {
        const int j = static_cast<int>(std::llround(t / config.grid.ht()));
        for (std::size_t pt = 0; pt < variances.size(); ++pt) {
            const double measured = config.grid.ht() * variances[pt].values[j - 1];
            const double predicted =
                analytic_variance(variances[pt].z, g, config.f_true(), config.equation, t, config.grid, 512);
            std::ostringstream name;
            name << "variance.identity_z" << pt << "_t" << t;
            report.checks.push_back(check(name.str(), std::abs((measured - predicted) / predicted), 0.10,
                                          "ht*V_j vs convolution integral, P=5000"));
        }
    }
    return report;
}

VerifyReport verify_oracle() {
    VerifyReport report;
    const auto f = TemporalProfile::sine();
    const auto g = SpatialProfile::bubble_1d();
    const auto modes = eigen_modes(SpatialDomain::interval(), 64);
    const int paths = 100;

    auto discrepancy = [&](const GridSpec& grid) {
        double num = 0.0, den = 0.0;
        for (int p = 0; p < paths; ++p) {
            const auto dW =
                brownian_increments(SeedSpec{555, static_cast<std::uint64_t>(p)}, grid.nt, grid.ht());
            const auto fdm = solve_heat_1d(grid, f, g, dW);
            const auto spec = spectral_heat_path(modes, f, g, dW);
            const auto field = spectral_field_on_grid(spec.back(), modes, grid);
            const auto& u = fdm.back().values;
            for (int i = 1; i < grid.nx; ++i) {
                const double d = u[i] - field[i];
                num += d * d * grid.hx();
                den += field[i] * field[i] * grid.hx();
            }
        }
        return std::sqrt(num / den);
    };

    const double coarse = discrepancy(GridSpec::line(64, 128, 1.0));
    const double fine = discrepancy(GridSpec::line(128, 256, 1.0));
    report.checks.push_back(check("oracle.fdm_vs_spectral", coarse, 0.10,
                                  "pathwise L2 discrepancy at T=1, 100 shared-noise paths"));
    report.checks.push_back(check("oracle.refinement_decreases", fine - coarse, 0.0,
                                  "discrepancy at halved steps minus coarse"));
    return report;
}

}  // namespace

VerifyReport verify(VerifySuite suite) {
    switch (suite) {
        case VerifySuite::kernel: return verify_kernel();
        case VerifySuite::isometry: return verify_isometry();
        case VerifySuite::variance: return verify_variance();
        default: return verify_oracle();
    }
}

VerifySuite parse_suite(const std::string& name) {
    if (name == "kernel") return VerifySuite::kernel;
    if (name == "isometry") return VerifySuite::isometry;
    if (name == "variance") return VerifySuite::variance;
    if (name == "oracle") return VerifySuite::oracle;
    throw std::invalid_argument("unknown verify suite '" + name + "' (kernel|isometry|variance|oracle)");
}

std::string suite_name(VerifySuite suite) {
    switch (suite) {
        case VerifySuite::kernel: return "kernel";
        case VerifySuite::isometry: return "isometry";
        case VerifySuite::variance: return "variance";
        default: return "oracle";
    }
}

}  // namespace randsrc
