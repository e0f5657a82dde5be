#include "randsrc/synthesis.hpp"

#include <algorithm>
#include <stdexcept>

#include "randsrc/detail/parallel.hpp"

namespace randsrc {

namespace {

// Fixed accumulation chunk: paths [c*kChunk, (c+1)*kChunk) are summed in path
// order by whichever worker owns chunk c, and the chunk totals are combined
// pairwise in chunk order. The result is independent of the worker count.
constexpr int kChunk = 64;

std::vector<double> reduce_chunks(const std::vector<std::vector<double>>& acc, int nt, int offset) {
    std::vector<double> out(nt);
    std::vector<double> gather(acc.size());
    for (int j = 0; j < nt; ++j) {
        for (std::size_t c = 0; c < acc.size(); ++c) gather[c] = acc[c][offset + j];
        out[j] = detail::pairwise_sum(gather.data(), static_cast<int>(gather.size()));
    }
    return out;
}

// per chunk: squared partial sums, then (for the centered variant) the plain
// partial sums in the second half of the accumulator slab
void accumulate_path(const std::vector<double>& flux, double* acc_sq, double* acc_sum) {
    double partial = 0.0;
    for (std::size_t j = 0; j < flux.size(); ++j) {
        partial += flux[j];
        acc_sq[j] += partial * partial;
        if (acc_sum != nullptr) acc_sum[j] += partial;
    }
}

std::vector<double> finalize_values(const std::vector<std::vector<double>>& acc, int nt, int offset,
                                    int sum_offset, double ht, int paths, bool center_mean) {
    std::vector<double> values = reduce_chunks(acc, nt, offset);
    if (center_mean) {
        const std::vector<double> sums = reduce_chunks(acc, nt, sum_offset);
        for (int j = 0; j < nt; ++j) {
            const double mean = sums[j] / paths;
            values[j] = ht * (values[j] / paths - mean * mean);
        }
    } else {
        for (auto& v : values) v *= ht / paths;
    }
    return values;
}

}  // namespace

VarianceSeries variance_series(const FluxEnsemble& ensemble, const BoundaryPoint& z, bool center_mean) {
    int point = -1;
    for (std::size_t i = 0; i < ensemble.observation_points.size(); ++i)
        if (ensemble.observation_points[i].same_point(z)) point = static_cast<int>(i);
    if (point < 0)
        throw std::invalid_argument("variance_series: " + z.describe() + " is not an observation point");

    const auto& series = ensemble.noisy[point];
    const int paths = ensemble.path_count;
    const int nt = series.empty() ? 0 : static_cast<int>(series.front().size());
    const int chunks = (paths + kChunk - 1) / kChunk;
    const int width = center_mean ? 2 * nt : nt;
    std::vector<std::vector<double>> acc(chunks, std::vector<double>(width, 0.0));
    for (int c = 0; c < chunks; ++c) {
        const int end = std::min(paths, (c + 1) * kChunk);
        for (int p = c * kChunk; p < end; ++p)
            accumulate_path(series[p], acc[c].data(), center_mean ? acc[c].data() + nt : nullptr);
    }

    VarianceSeries out;
    out.z = ensemble.observation_points[point];
    out.path_count = paths;
    out.sigma = ensemble.sigma;
    out.ht = ensemble.ht;
    out.values = finalize_values(acc, nt, 0, nt, ensemble.ht, paths, center_mean);
    return out;
}

std::vector<VarianceSeries> synthesize_variance_series(const ForwardModel& model, int paths, double sigma,
                                                       int workers, bool center_mean) {
    if (paths < 1) throw std::invalid_argument("synthesize_variance_series: need at least one path");
    const int npts = static_cast<int>(model.observation_points.size());
    const int nt = model.grid.nt;
    const int chunks = (paths + kChunk - 1) / kChunk;
    const int width = center_mean ? 2 * npts * nt : npts * nt;
    std::vector<std::vector<double>> acc(chunks, std::vector<double>(width, 0.0));

    detail::parallel_path_loop(
        chunks, /*chunk_size=*/1, workers, [&] { return PathFluxGenerator(model, sigma); },
        [&](PathFluxGenerator& gen, int c) {
            const int begin = c * kChunk;
            const int end = std::min(paths, begin + kChunk);
            for (int p = begin; p < end; ++p) {
                const PathFlux flux = gen.run(p);
                for (int pt = 0; pt < npts; ++pt)
                    accumulate_path(flux.noisy[pt], acc[c].data() + pt * nt,
                                    center_mean ? acc[c].data() + (npts + pt) * nt : nullptr);
            }
        });

    std::vector<VarianceSeries> out(npts);
    for (int pt = 0; pt < npts; ++pt) {
        out[pt].z = model.observation_points[pt];
        out[pt].path_count = paths;
        out[pt].sigma = sigma;
        out[pt].ht = model.grid.ht();
        out[pt].values =
            finalize_values(acc, nt, pt * nt, (npts + pt) * nt, model.grid.ht(), paths, center_mean);
    }
    return out;
}

}  // namespace randsrc
