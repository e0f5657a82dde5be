#include "randsrc/spectral_oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace randsrc {

namespace {
void check_modes(const std::vector<EigenMode>& modes) {
    if (modes.empty()) throw std::invalid_argument("spectral path: empty mode set");
}
}  // namespace

std::vector<SpectralState> spectral_heat_path(const std::vector<EigenMode>& modes, const TemporalProfile& f,
                                              const SpatialProfile& g, const IncrementSeries& dW) {
    check_modes(modes);
    const int nmodes = static_cast<int>(modes.size());
    const int nt = static_cast<int>(dW.values.size());
    const double ht = dW.ht;

    std::vector<double> decay(nmodes), gn(nmodes);
    for (int n = 0; n < nmodes; ++n) {
        decay[n] = std::exp(-modes[n].lambda * ht);
        gn[n] = source_coefficient(g, modes[n]);
    }

    std::vector<SpectralState> states(nt + 1);
    states[0] = {std::vector<double>(nmodes, 0.0), {}, 0};
    std::vector<double> a(nmodes, 0.0);
    for (int k = 0; k < nt; ++k) {
        const double impulse = f(k * ht) * dW.values[k];
        for (int n = 0; n < nmodes; ++n) a[n] = decay[n] * (a[n] + gn[n] * impulse);
        states[k + 1] = {a, {}, k + 1};
    }
    return states;
}

std::vector<SpectralState> spectral_wave_path(const std::vector<EigenMode>& modes, const TemporalProfile& f,
                                              const SpatialProfile& g, const IncrementSeries& dW) {
    check_modes(modes);
    const int nmodes = static_cast<int>(modes.size());
    const int nt = static_cast<int>(dW.values.size());
    const double ht = dW.ht;

    std::vector<double> cosw(nmodes), sinw(nmodes), omega(nmodes), gn(nmodes);
    for (int n = 0; n < nmodes; ++n) {
        omega[n] = std::sqrt(modes[n].lambda);
        cosw[n] = std::cos(omega[n] * ht);
        sinw[n] = std::sin(omega[n] * ht);
        gn[n] = source_coefficient(g, modes[n]);
    }

    std::vector<SpectralState> states(nt + 1);
    states[0] = {std::vector<double>(nmodes, 0.0), std::vector<double>(nmodes, 0.0), 0};
    std::vector<double> a(nmodes, 0.0), v(nmodes, 0.0);
    for (int k = 0; k < nt; ++k) {
        const double impulse = f(k * ht) * dW.values[k];
        for (int n = 0; n < nmodes; ++n) {
            const double vn = v[n] + gn[n] * impulse;  // velocity kick at the step start
            const double an = a[n];
            a[n] = an * cosw[n] + vn * sinw[n] / omega[n];
            v[n] = -an * omega[n] * sinw[n] + vn * cosw[n];
        }
        states[k + 1] = {a, v, k + 1};
    }
    return states;
}

std::vector<double> spectral_field_on_grid(const SpectralState& state, const std::vector<EigenMode>& modes,
                                           const GridSpec& grid) {
    if (state.coeffs.size() != modes.size())
        throw std::invalid_argument("spectral_field_on_grid: coefficient/mode count mismatch");
    if (grid.dim == 1) {
        std::vector<double> field(grid.nx + 1, 0.0);
        for (int i = 1; i < grid.nx; ++i) {
            const Point p{i * grid.hx(), 0.0};
            double u = 0.0;
            for (std::size_t n = 0; n < modes.size(); ++n) u += state.coeffs[n] * modes[n](p);
            field[i] = u;
        }
        return field;
    }
    const int stride = grid.ny + 1;
    std::vector<double> field((grid.nx + 1) * stride, 0.0);
    for (int i = 1; i < grid.nx; ++i) {
        for (int j = 1; j < grid.ny; ++j) {
            const Point p{i * grid.hx(), j * grid.hy()};
            double u = 0.0;
            for (std::size_t n = 0; n < modes.size(); ++n) u += state.coeffs[n] * modes[n](p);
            field[i * stride + j] = u;
        }
    }
    return field;
}

std::vector<double> spectral_boundary_flux(const std::vector<SpectralState>& states,
                                           const std::vector<EigenMode>& modes, const BoundaryPoint& z) {
    const int nt = static_cast<int>(states.size()) - 1;
    std::vector<double> weights(modes.size());
    for (std::size_t n = 0; n < modes.size(); ++n) weights[n] = boundary_normal_derivative(modes[n], z);
    std::vector<double> flux(nt);
    for (int j = 1; j <= nt; ++j) {
        double v = 0.0;
        for (std::size_t n = 0; n < modes.size(); ++n) v += states[j].coeffs[n] * weights[n];
        flux[j - 1] = v;
    }
    return flux;
}

double analytic_variance(const BoundaryPoint& z, const SpatialProfile& g, const TemporalProfile& f, Equation eq,
                         double t, const GridSpec& grid, int truncation) {
    if (t < 0.0 || t > grid.final_time + 1e-12)
        throw std::invalid_argument("analytic_variance: t outside [0, T]");
    if (t == 0.0) return 0.0;

    const KernelSeries series(z, g, truncation);
    // composite Simpson at 4x the FDM time resolution
    int m = static_cast<int>(std::ceil(t / (grid.ht() / 4.0)));
    if (m % 2 != 0) ++m;
    m = std::max(m, 2);
    const double h = t / m;
    auto integrand = [&](double tau) {
        const double fv = f(tau);
        const double gv = series(eq, t - tau);
        return fv * fv * gv * gv;
    };
    double sum = integrand(0.0) + integrand(t);
    for (int i = 1; i < m; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * integrand(i * h);
    return sum * h / 3.0;
}

double analytic_variance(const KernelTable& kernel, const TemporalProfile& f, double t) {
    const double h = kernel.ht;
    const int m = static_cast<int>(std::llround(t / h));
    if (m < 0 || std::abs(t - m * h) > 1e-9 * std::max(1.0, t))
        throw std::invalid_argument("analytic_variance: t must lie on the kernel's time grid");
    if (m == 0) return 0.0;
    if (m > static_cast<int>(kernel.values.size()))
        throw std::invalid_argument("analytic_variance: t beyond the kernel table");

    // Simpson on tau = 0..t at the table spacing; G(t - tau) = values[m-1-i], G(0) = 0.
    auto integrand = [&](int i) {
        const double fv = f(i * h);
        const double gv = (i == m) ? 0.0 : kernel.values[m - 1 - i];
        return fv * fv * gv * gv;
    };
    if (m % 2 == 0) {
        double sum = integrand(0) + integrand(m);
        for (int i = 1; i < m; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * integrand(i);
        return sum * h / 3.0;
    }
    // odd interval count: trapezoid on the first cell, Simpson on the rest
    double sum = 0.5 * h * (integrand(0) + integrand(1));
    if (m > 1) {
        double s = integrand(1) + integrand(m);
        for (int i = 2; i < m; ++i) s += ((i - 1) % 2 == 1 ? 4.0 : 2.0) * integrand(i);
        sum += s * h / 3.0;
    }
    return sum;
}

}  // namespace randsrc
