#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "randsrc/domain.hpp"
#include "randsrc/profiles.hpp"

namespace randsrc {

/// One Dirichlet-Laplacian eigenpair on the unit interval or square.
/// 1D: lambda = (p pi)^2, phi(x) = sqrt(2) sin(p pi x).
/// 2D: lambda = (p^2+q^2) pi^2, phi(x,y) = 2 sin(p pi x) sin(q pi y).
struct EigenMode {
    ModeIndex index;
    double lambda = 0.0;
    int dim = 1;

    double operator()(Point pt) const;
};

/// Sampled recovery kernel G_z(t_j), j = 1..nt, t_j = j*ht. values[0]
/// corresponds to t = ht, never t = 0.
struct KernelTable {
    BoundaryPoint z;
    Equation equation = Equation::heat;
    double ht = 0.0;
    std::vector<double> times;
    std::vector<double> values;
    int truncation = 0;
};

/// Thrown when the adaptive truncation of the kernel series fails to settle
/// below the hard mode cap.
class TruncationLimitError : public std::runtime_error {
   public:
    TruncationLimitError(int cap, double residual_change, double tolerance)
        : std::runtime_error("kernel series truncation hit the cap of " + std::to_string(cap) +
                             " modes; last doubling still changed the table by " +
                             std::to_string(residual_change) + " (tolerance " +
                             std::to_string(tolerance) + ")"),
          cap(cap),
          residual_change(residual_change) {}

    int cap;
    double residual_change;
};

/// First `count` eigenmodes in nondecreasing eigenvalue order. 2D ties are
/// broken lexicographically by (p,q).
std::vector<EigenMode> eigen_modes(const SpatialDomain& domain, int count);

/// Outward normal derivative d(phi)/dn at the boundary point z.
double boundary_normal_derivative(const EigenMode& mode, const BoundaryPoint& z);

/// Flux coefficient c_{z,n} = -(1/lambda_n) d(phi_n)/dn (z).
double flux_coefficient(const EigenMode& mode, const BoundaryPoint& z);

/// Source coefficient g_n = <g, phi_n>. Uses the profile's closed form when it
/// has one, otherwise composite Simpson with `points_per_axis` intervals
/// (defaults are at least 16x finer than the experiment grids).
double source_coefficient(const SpatialProfile& g, const EigenMode& mode);
double source_coefficient_quadrature(const SpatialProfile& g, const EigenMode& mode, int points_per_axis);

/// Recovery kernel value
///   heat: sum_n c_{z,n} g_n (1 - exp(-lambda_n t)),
///   wave: sum_n c_{z,n} g_n (1 - cos(sqrt(lambda_n) t)),
/// truncated after `truncation` modes.
double kernel_value(const BoundaryPoint& z, const SpatialProfile& g, Equation eq, double t, int truncation);

/// Tabulates the kernel on t_j = j*ht, j = 1..nt. The truncation is doubled
/// until one more doubling changes every table entry by less than `tolerance`
/// in absolute value (hard cap `max_modes`).
KernelTable kernel_table(const BoundaryPoint& z, const SpatialProfile& g, Equation eq, const GridSpec& grid,
                         double tolerance, int max_modes = 100000);

/// Precomputed per-mode weights c_{z,n} g_n for fast kernel evaluation at
/// arbitrary times (shared by kernel_table and the analytic variance).
class KernelSeries {
   public:
    KernelSeries(const BoundaryPoint& z, const SpatialProfile& g, int truncation);

    double operator()(Equation eq, double t) const;
    int truncation() const { return static_cast<int>(lambda_.size()); }

   private:
    std::vector<double> lambda_;
    std::vector<double> weight_;
};

}  // namespace randsrc
