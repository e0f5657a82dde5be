#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "randsrc/domain.hpp"
#include "randsrc/fdm_forward.hpp"
#include "randsrc/inversion.hpp"
#include "randsrc/profiles.hpp"
#include "randsrc/spectral_basis.hpp"
#include "randsrc/synthesis.hpp"

namespace randsrc {

/// Complete description of one experiment: forward model, sampling, kernel and
/// inversion parameters, output location.
struct ExperimentConfig {
    Equation equation = Equation::heat;
    int dim = 1;
    GridSpec grid = GridSpec::line(64, 128, 1.0);
    std::string f_name = "sine";
    std::string g_name = "bubble";
    std::vector<BoundaryPoint> observation_points = {BoundaryPoint::left(), BoundaryPoint::right()};
    int paths = 5000;
    double sigma = 0.0;
    double alpha = 1e-2;
    double epsilon = 2e-3;
    int max_sweeps = 500;
    double kernel_tolerance = 1e-8;
    std::uint64_t master_seed = 42;
    int workers = 0;
    std::string output_dir = "out";

    TemporalProfile f_true() const { return TemporalProfile::named(f_name); }
    SpatialProfile g_profile() const { return named_spatial_profile(g_name, dim); }

    /// Rejects out-of-scope combinations (2D wave) and nonpositive parameters.
    void validate() const;
};

/// Presets reproducing the three experiments: "ex1" (1D heat, f = sin 2 pi t),
/// "ex2" (1D wave, two-mode cosine), "ex3" (2D heat, three observation points).
ExperimentConfig preset(const std::string& name);

/// Reads the sectioned key=value config format (see presets/ for samples).
ExperimentConfig load_config(const std::string& path);

nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Stage-tagged failure; the message carries the failing stage and a compact
/// config echo so runs are diagnosable from logs alone.
class ExperimentError : public std::runtime_error {
   public:
    ExperimentError(const std::string& stage, const std::string& what, const ExperimentConfig& config)
        : std::runtime_error("stage '" + stage + "' failed: " + what +
                             " | config: " + config_to_json(config).dump()),
          stage(stage) {}

    std::string stage;
};

struct ExperimentResult {
    std::vector<BoundaryPoint> snapped_points;
    std::vector<KernelTable> kernels;
    std::vector<VarianceSeries> variances;
    Reconstruction reconstruction;
    double interior_error = 0.0;  // vs |f_true| on [0.05 T, 0.95 T]
    std::string variance_csv;
    std::string kernel_csv;
    std::string reconstruction_csv;
    std::string summary_json;
};

/// End-to-end pipeline: snap points, tabulate kernels, synthesize the variance
/// data, invert, score, and write all artifacts (written only after every
/// stage succeeded, so failures leave no partial outputs). Fully reproducible
/// from (config, master_seed) for any worker count; only the summary's
/// timestamp differs between runs.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Computation without the filesystem side effects (used by the CLI stages and
/// tests).
ExperimentResult run_experiment_in_memory(const ExperimentConfig& config);

// --- artifact I/O -----------------------------------------------------------

/// All floating-point CSV output uses 17 significant digits.
std::string format_double(double v);

void write_variance_csv(const std::string& path, const ExperimentConfig& config,
                        const std::vector<VarianceSeries>& variances);
void write_kernel_csv(const std::string& path, const ExperimentConfig& config,
                      const std::vector<KernelTable>& kernels);
void write_reconstruction_csv(const std::string& path, const ExperimentConfig& config,
                              const Reconstruction& reconstruction,
                              const std::optional<TemporalProfile>& truth);
void write_flux_csv(const std::string& path, const ExperimentConfig& config, const FluxEnsemble& ensemble);

std::vector<VarianceSeries> read_variance_csv(const std::string& path);
std::vector<KernelTable> read_kernel_csv(const std::string& path, Equation eq);

}  // namespace randsrc
