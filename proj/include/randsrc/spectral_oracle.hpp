#pragma once

#include <vector>

#include "randsrc/domain.hpp"
#include "randsrc/profiles.hpp"
#include "randsrc/spectral_basis.hpp"
#include "randsrc/stochastic_paths.hpp"

namespace randsrc {

/// Spectral coefficients of the mild solution at one time level. `velocity`
/// is populated for the wave evolution only.
struct SpectralState {
    std::vector<double> coeffs;
    std::vector<double> velocity;
    int time_index = 0;
};

/// Mild-solution simulator for the heat case: per mode the exact exponential
/// update a_n(t_{k+1}) = exp(-lambda_n ht) (a_n(t_k) + g_n f(t_k) dW_k),
/// the left-point discretization of the stochastic convolution.
std::vector<SpectralState> spectral_heat_path(const std::vector<EigenMode>& modes, const TemporalProfile& f,
                                              const SpatialProfile& g, const IncrementSeries& dW);

/// Wave case: per mode the exact rotation of (a, a') with frequency
/// sqrt(lambda_n) over each step, the impulse g_n f(t_k) dW_k added to the
/// velocity at the step start.
std::vector<SpectralState> spectral_wave_path(const std::vector<EigenMode>& modes, const TemporalProfile& f,
                                              const SpatialProfile& g, const IncrementSeries& dW);

/// Field values of a spectral state on the FDM grid nodes.
std::vector<double> spectral_field_on_grid(const SpectralState& state, const std::vector<EigenMode>& modes,
                                           const GridSpec& grid);

/// Exact boundary flux sum_n a_n(t) d(phi_n)/dn(z) at levels t_1..t_nt.
std::vector<double> spectral_boundary_flux(const std::vector<SpectralState>& states,
                                           const std::vector<EigenMode>& modes, const BoundaryPoint& z);

/// The variance of the time-integrated flux predicted by the recovery
/// identity: integral_0^t f(tau)^2 G_z(t-tau)^2 dtau, by composite Simpson
/// with step ht/4 (4x the FDM time resolution). `truncation` bounds the
/// kernel series.
double analytic_variance(const BoundaryPoint& z, const SpatialProfile& g, const TemporalProfile& f, Equation eq,
                         double t, const GridSpec& grid, int truncation = 512);

/// Same integral evaluated from a tabulated kernel; the quadrature runs at the
/// table's own resolution, so pass a table built on a fine grid when accuracy
/// beyond its spacing is needed. `t` must lie on the table's time grid.
double analytic_variance(const KernelTable& kernel, const TemporalProfile& f, double t);

}  // namespace randsrc
