#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "randsrc/domain.hpp"
#include "randsrc/profiles.hpp"
#include "randsrc/stochastic_paths.hpp"

namespace randsrc {

/// Grid function at one time level. Boundary nodes are identically zero
/// (homogeneous Dirichlet). 1D: values[i], i = 0..nx. 2D: x-major layout,
/// values[i*(ny+1)+j] = u(x_i, y_j).
struct FieldState {
    std::vector<double> values;
    int time_index = 0;
};

/// Implicit Euler for u_t - u_xx = f(t) g(x) dW/dt on the unit interval:
/// (I - ht d_x^2) u^{j+1} = u^j + f(t_j) g(x_i) dW_j, u^0 = 0.
/// Returns all levels u^0..u^nt; each step is one exact tridiagonal solve.
std::vector<FieldState> solve_heat_1d(const GridSpec& grid, const TemporalProfile& f, const SpatialProfile& g,
                                      const IncrementSeries& dW);

/// Same scheme with the 5-point Laplacian on the unit square; each step solves
/// the sparse SPD system (I - ht Lap_h) u^{j+1} = u^j + f(t_j) g dW_j with a
/// Cholesky factorization computed once per grid.
std::vector<FieldState> solve_heat_2d(const GridSpec& grid, const TemporalProfile& f, const SpatialProfile& g,
                                      const IncrementSeries& dW);

/// Averaged implicit three-level scheme for the 1D wave equation:
///   dt^2 u_i^j - (1/4)(d_x^2 u^{j+1} + 2 d_x^2 u^j + d_x^2 u^{j-1})
///       = f(t_j) g(x_i) dW_j / ht,
/// with the first level from (2/ht^2) u^1 - (1/2) d_x^2 u^1 = f(t_0) g dW_0 / ht.
/// Unconditionally stable; one tridiagonal solve per level.
std::vector<FieldState> solve_wave_1d(const GridSpec& grid, const TemporalProfile& f, const SpatialProfile& g,
                                      const IncrementSeries& dW);

/// One-sided difference flux at a grid-aligned boundary point, one value per
/// time level t_1..t_nt. 1D follows the synthesis formulas: at x=0,
/// -(u_1 - u_0)/hx; at x=1, (u_{nx-1} - u_nx)/hx. 2D uses the outward-normal
/// one-sided difference (u at the boundary node minus the first interior node
/// along the inward direction) / h.
std::vector<double> boundary_flux(const std::vector<FieldState>& states, const BoundaryPoint& z,
                                  const GridSpec& grid);

/// Snaps a 2D boundary point to the nearest boundary grid node (corners
/// excluded); records the requested coordinate. 1D points pass through.
BoundaryPoint snap_to_grid(const BoundaryPoint& z, const GridSpec& grid);

/// Inputs of one forward synthesis run.
struct ForwardModel {
    Equation equation = Equation::heat;
    GridSpec grid;
    TemporalProfile f = TemporalProfile::sine();
    SpatialProfile g = SpatialProfile::bubble_1d();
    std::vector<BoundaryPoint> observation_points;  // grid-aligned (snap first)
    std::uint64_t master_seed = 0;
};

/// Per-path, per-point boundary flux series at levels t_1..t_nt, before and
/// after measurement noise. series index: [point][path][j-1].
struct FluxEnsemble {
    std::vector<BoundaryPoint> observation_points;
    int path_count = 0;
    double sigma = 0.0;
    double ht = 0.0;
    std::vector<std::vector<std::vector<double>>> clean;
    std::vector<std::vector<std::vector<double>>> noisy;
};

/// Runs `paths` independent sample paths of the configured solver and extracts
/// (noisy) boundary flux at every observation point. Noisy values add
/// sigma * U with U ~ Uniform[-1,1] drawn per point, per time level, per path
/// from the path's measurement-noise stream (consumed point-major in list
/// order). Reproducible per master seed and independent of `workers`.
FluxEnsemble synthesize_flux_ensemble(const ForwardModel& model, int paths, double sigma, int workers = 0);

/// Flux series of one sample path, per observation point.
struct PathFlux {
    std::vector<std::vector<double>> clean;
    std::vector<std::vector<double>> noisy;
};

/// Per-worker forward engine: owns the factorized solver and produces the
/// flux series of any path index on demand. One instance serves one thread.
class PathFluxGenerator {
   public:
    PathFluxGenerator(const ForwardModel& model, double sigma);
    PathFluxGenerator(PathFluxGenerator&&) noexcept;
    PathFluxGenerator& operator=(PathFluxGenerator&&) noexcept;
    ~PathFluxGenerator();

    PathFlux run(int path_index) const;

   private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace randsrc
