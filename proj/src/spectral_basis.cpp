#include "randsrc/spectral_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

namespace randsrc {

namespace {
constexpr double kPi = std::numbers::pi;

// Composite Simpson over [0,1] with n (even) intervals.
template <class F>
double simpson01(F&& f, int n) {
    if (n % 2 != 0) ++n;
    const double h = 1.0 / n;
    double sum = f(0.0) + f(1.0);
    for (int i = 1; i < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(i * h);
    return sum * h / 3.0;
}
}  // namespace

double EigenMode::operator()(Point pt) const {
    if (dim == 1) return std::sqrt(2.0) * std::sin(index.p * kPi * pt.x);
    return 2.0 * std::sin(index.p * kPi * pt.x) * std::sin(index.q * kPi * pt.y);
}

std::vector<EigenMode> eigen_modes(const SpatialDomain& domain, int count) {
    if (count < 1) throw std::invalid_argument("eigen_modes: count must be positive");
    std::vector<EigenMode> modes;
    modes.reserve(count);
    if (domain.dim == 1) {
        for (int n = 1; n <= count; ++n)
            modes.push_back({ModeIndex{n, 0}, static_cast<double>(n) * n * kPi * kPi, 1});
        return modes;
    }
    if (domain.dim != 2) throw std::invalid_argument("eigen_modes: dim must be 1 or 2");

    // Enumerate tensor pairs inside a square large enough that the first
    // `count` eigenvalues are complete: any pair outside {p,q <= K} has
    // p^2+q^2 > K^2, so completeness holds once the count-th sum is <= K^2.
    int K = static_cast<int>(std::ceil(2.0 * std::sqrt(count / kPi))) + 2;
    for (;;) {
        std::vector<std::tuple<long long, int, int>> pairs;
        pairs.reserve(static_cast<std::size_t>(K) * K);
        for (int p = 1; p <= K; ++p)
            for (int q = 1; q <= K; ++q) pairs.emplace_back(static_cast<long long>(p) * p + q * q, p, q);
        std::sort(pairs.begin(), pairs.end());
        if (pairs.size() >= static_cast<std::size_t>(count) &&
            std::get<0>(pairs[count - 1]) <= static_cast<long long>(K) * K) {
            for (int i = 0; i < count; ++i) {
                const auto& [s, p, q] = pairs[i];
                modes.push_back({ModeIndex{p, q}, s * kPi * kPi, 2});
            }
            return modes;
        }
        K *= 2;
    }
}

double boundary_normal_derivative(const EigenMode& mode, const BoundaryPoint& z) {
    if (mode.dim != z.dim) throw std::invalid_argument("boundary_normal_derivative: dimension mismatch");
    const int p = mode.index.p;
    if (mode.dim == 1) {
        // phi' (x) = sqrt(2) p pi cos(p pi x)
        const double d = std::sqrt(2.0) * p * kPi;
        if (z.side == Side::x0) return -d;
        if (z.side == Side::x1) return d * ((p % 2 == 0) ? 1.0 : -1.0);
        throw std::invalid_argument("boundary_normal_derivative: 1D boundary point must be an endpoint");
    }
    const int q = mode.index.q;
    const double sp = std::sin(p * kPi * z.offset);
    const double sq = std::sin(q * kPi * z.offset);
    switch (z.side) {
        case Side::x0:
            return -2.0 * p * kPi * sq;
        case Side::x1:
            return 2.0 * p * kPi * ((p % 2 == 0) ? 1.0 : -1.0) * sq;
        case Side::y0:
            return -2.0 * q * kPi * sp;
        default:
            return 2.0 * q * kPi * ((q % 2 == 0) ? 1.0 : -1.0) * sp;
    }
}

double flux_coefficient(const EigenMode& mode, const BoundaryPoint& z) {
    return -boundary_normal_derivative(mode, z) / mode.lambda;
}

double source_coefficient_quadrature(const SpatialProfile& g, const EigenMode& mode, int points_per_axis) {
    if (g.dim() != mode.dim) throw std::invalid_argument("source_coefficient: dimension mismatch");
    if (mode.dim == 1)
        return simpson01([&](double x) { return g(Point{x, 0.0}) * mode(Point{x, 0.0}); }, points_per_axis);
    // tensor Simpson over the square
    int n = points_per_axis;
    if (n % 2 != 0) ++n;
    const double h = 1.0 / n;
    auto weight = [n](int i) { return (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0); };
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = i * h;
        double row = 0.0;
        for (int j = 0; j <= n; ++j) {
            const double y = j * h;
            row += weight(j) * g(Point{x, y}) * mode(Point{x, y});
        }
        sum += weight(i) * row;
    }
    return sum * h * h / 9.0;
}

double source_coefficient(const SpatialProfile& g, const EigenMode& mode) {
    if (auto closed = g.known_coefficient(mode.index)) return *closed;
    return source_coefficient_quadrature(g, mode, mode.dim == 1 ? 4096 : 512);
}

KernelSeries::KernelSeries(const BoundaryPoint& z, const SpatialProfile& g, int truncation) {
    const auto modes = eigen_modes(SpatialDomain{z.dim}, truncation);
    lambda_.reserve(modes.size());
    weight_.reserve(modes.size());
    for (const auto& mode : modes) {
        lambda_.push_back(mode.lambda);
        weight_.push_back(flux_coefficient(mode, z) * source_coefficient(g, mode));
    }
}

double KernelSeries::operator()(Equation eq, double t) const {
    if (t < 0.0) throw std::invalid_argument("kernel: t must be nonnegative");
    double sum = 0.0;
    if (eq == Equation::heat) {
        for (std::size_t n = 0; n < lambda_.size(); ++n)
            sum += weight_[n] * (1.0 - std::exp(-lambda_[n] * t));
    } else {
        for (std::size_t n = 0; n < lambda_.size(); ++n)
            sum += weight_[n] * (1.0 - std::cos(std::sqrt(lambda_[n]) * t));
    }
    return sum;
}

double kernel_value(const BoundaryPoint& z, const SpatialProfile& g, Equation eq, double t, int truncation) {
    if (truncation < 1) throw std::invalid_argument("kernel_value: truncation must be positive");
    return KernelSeries(z, g, truncation)(eq, t);
}

KernelTable kernel_table(const BoundaryPoint& z, const SpatialProfile& g, Equation eq, const GridSpec& grid,
                         double tolerance, int max_modes) {
    if (!(tolerance > 0.0)) throw std::invalid_argument("kernel_table: tolerance must be positive");
    const int nt = grid.nt;
    const double ht = grid.ht();

    KernelTable table;
    table.z = z;
    table.equation = eq;
    table.ht = ht;
    table.times.resize(nt);
    for (int j = 1; j <= nt; ++j) table.times[j - 1] = j * ht;

    int truncation = 64;
    std::vector<double> values(nt);
    {
        KernelSeries series(z, g, truncation);
        for (int j = 0; j < nt; ++j) values[j] = series(eq, table.times[j]);
    }
    double change = 0.0;
    while (truncation < max_modes) {
        const int doubled = std::min(2 * truncation, max_modes);
        // contribution of the newly added modes only
        const auto modes = eigen_modes(SpatialDomain{z.dim}, doubled);
        std::vector<double> next = values;
        change = 0.0;
        for (int n = truncation; n < doubled; ++n) {
            const double w = flux_coefficient(modes[n], z) * source_coefficient(g, modes[n]);
            const double lam = modes[n].lambda;
            for (int j = 0; j < nt; ++j) {
                const double t = table.times[j];
                next[j] += w * (eq == Equation::heat ? (1.0 - std::exp(-lam * t))
                                                     : (1.0 - std::cos(std::sqrt(lam) * t)));
            }
        }
        for (int j = 0; j < nt; ++j) change = std::max(change, std::abs(next[j] - values[j]));
        values = std::move(next);
        truncation = doubled;
        if (change < tolerance) {
            table.values = std::move(values);
            table.truncation = truncation;
            return table;
        }
    }
    throw TruncationLimitError(max_modes, change, tolerance);
}

}  // namespace randsrc
