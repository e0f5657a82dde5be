#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "randsrc/domain.hpp"
#include "randsrc/profiles.hpp"
#include "randsrc/spectral_basis.hpp"
#include "randsrc/synthesis.hpp"

namespace randsrc {

/// One measurement block of the discrete Volterra system V = G f. The lower
/// triangular Toeplitz matrix is stored by its first column
/// kernel_sq[i] = G_z(t_{i+1})^2, so G(j,k) = kernel_sq[j-k] for j >= k
/// (0-based) and the full matrix never needs to be materialized.
struct VolterraBlock {
    BoundaryPoint z;
    std::vector<double> kernel_sq;
    std::vector<double> rhs;
};

struct VolterraSystem {
    double ht = 0.0;
    std::vector<VolterraBlock> blocks;

    int dimension() const { return blocks.empty() ? 0 : static_cast<int>(blocks.front().kernel_sq.size()); }
};

struct KaczmarzConfig {
    double alpha = 1e-2;
    double epsilon = 2e-3;
    int max_sweeps = 500;
    /// Cyclic visiting order of the blocks; empty means 0,1,...,B-1.
    std::vector<int> block_order;
};

/// Result of the regularized block Kaczmarz iteration. f_squared[k]
/// approximates f(t_k)^2 at t_k = k*ht, k = 0..nt-1; strength is
/// sqrt(max(f_squared, 0)) with the number of clamped negatives reported.
struct Reconstruction {
    std::vector<double> f_squared;
    std::vector<double> strength;
    int iterations = 0;  // block updates applied
    bool converged = false;
    std::vector<double> residual_history;  // combined residual after each sweep
    int clamped_count = 0;
};

/// Thrown when an inner regularized normal solve cannot reach the required
/// backward error even after iterative refinement.
class NumericalFailure : public std::runtime_error {
   public:
    NumericalFailure(const std::string& what, double residual, double condition_estimate)
        : std::runtime_error(what + " (relative residual " + std::to_string(residual) +
                             ", condition estimate " + std::to_string(condition_estimate) + ")"),
          residual(residual),
          condition_estimate(condition_estimate) {}

    double residual;
    double condition_estimate;
};

/// Pairs kernel tables with variance series (matching observation points and
/// time grids) into the block system.
VolterraSystem build_volterra_system(const std::vector<KernelTable>& kernels,
                                     const std::vector<VarianceSeries>& variances);

/// Dense matrix of one block, for tests and diagnostics.
std::vector<std::vector<double>> dense_block_matrix(const VolterraBlock& block);

/// One regularized Kaczmarz update
///   f <- f + (G^T G + alpha I)^{-1} G^T (V - G f),
/// the inner SPD solve done by Cholesky with iterative refinement to a
/// normwise backward error of at most 1e-12.
std::vector<double> kaczmarz_step(const std::vector<double>& state, const VolterraBlock& block, double alpha);

/// Full iteration: starts from f = 0, cycles the blocks in order, and stops
/// once the combined residual sum_z ||G_z f - V_z|| drops below epsilon
/// (checked before the first sweep and after each sweep) or after max_sweeps
/// sweeps, whichever comes first. Hitting the cap is reported via
/// converged=false, not an exception. The per-block normal factorizations are
/// computed once and reused across sweeps.
Reconstruction kaczmarz_invert(const VolterraSystem& system, const KaczmarzConfig& config);

/// Relative l2 error of the strength samples against |truth| over grid points
/// t_k = k*ht inside [t_a, t_b].
double reconstruction_error(const std::vector<double>& strength, const TemporalProfile& truth, double t_a,
                            double t_b, double ht);

}  // namespace randsrc
