#pragma once

#include <vector>

#include "randsrc/domain.hpp"
#include "randsrc/fdm_forward.hpp"

namespace randsrc {

/// Measured variance series at one observation point:
///   V_j = (ht / P) * sum_p [ sum_{k=0}^{j-1} flux(z, t_{k+1}, omega_p) ]^2,
/// j = 1..nt, the raw second-moment estimator with no mean subtraction. The
/// inner sum runs over the first j entries of the stored flux series
/// (levels t_1..t_j).
struct VarianceSeries {
    BoundaryPoint z;
    std::vector<double> values;
    int path_count = 0;
    double sigma = 0.0;
    double ht = 0.0;
};

/// V series for one observation point of a materialized ensemble. The
/// analytically zero-mean partial sums are squared as-is by default;
/// center_mean subtracts the empirical mean first (population convention,
/// V_j = (ht/P) sum (S - S_bar)^2), an O(1/P) correction.
VarianceSeries variance_series(const FluxEnsemble& ensemble, const BoundaryPoint& z, bool center_mean = false);

/// Streaming synthesis: runs the forward model path by path and accumulates
/// the squared partial sums directly, never holding the ensemble. Paths are
/// accumulated in fixed chunks (in path order) and the chunk totals combined
/// by pairwise summation, so the result is bit-identical for any worker
/// count and matches variance_series() on the materialized ensemble.
std::vector<VarianceSeries> synthesize_variance_series(const ForwardModel& model, int paths, double sigma,
                                                       int workers = 0, bool center_mean = false);

}  // namespace randsrc
