#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "randsrc/experiment.hpp"
#include "randsrc/spectral_oracle.hpp"
#include "randsrc/verify.hpp"

namespace fs = std::filesystem;
using namespace randsrc;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string preset_name;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = -1;
    int paths = 0;
    double sigma = -1.0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "Config file (sectioned key=value)");
    cmd->add_option("--preset", opts.preset_name, "Built-in preset: ex1, ex2, ex3, ex3-single");
    cmd->add_option("--out", opts.out_dir, "Output directory");
    cmd->add_option("--seed", opts.seed, "Master seed")->each([&](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--workers", opts.workers, "Worker threads (0 = hardware)");
    cmd->add_option("--paths", opts.paths, "Override sample path count");
    cmd->add_option("--noise", opts.sigma, "Override noise level sigma");
}

ExperimentConfig resolve_config(const CommonOpts& opts) {
    ExperimentConfig config;
    if (!opts.config_path.empty() && !opts.preset_name.empty())
        throw CLI::ValidationError("--config and --preset are mutually exclusive");
    if (!opts.config_path.empty())
        config = load_config(opts.config_path);
    else
        config = preset(opts.preset_name.empty() ? "ex1" : opts.preset_name);
    if (opts.seed_set) config.master_seed = opts.seed;
    if (opts.workers >= 0) config.workers = opts.workers;
    if (!opts.out_dir.empty()) config.output_dir = opts.out_dir;
    if (opts.paths > 0) config.paths = opts.paths;
    if (opts.sigma >= 0.0) config.sigma = opts.sigma;
    config.validate();
    return config;
}

ForwardModel forward_model(const ExperimentConfig& config) {
    ForwardModel model{config.equation, config.grid, config.f_true(), config.g_profile(), {}, config.master_seed};
    for (const auto& z : config.observation_points) model.observation_points.push_back(snap_to_grid(z, config.grid));
    return model;
}

int report_to_console(const VerifyReport& report) {
    int failed = 0;
    for (const auto& c : report.checks) {
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "  measured=" << format_double(c.measured)
                  << " tol=" << format_double(c.tolerance);
        if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
        std::cout << "\n";
        if (!c.pass) ++failed;
    }
    return failed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic heat/wave source-strength recovery toolkit"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* cmd_run = app.add_subcommand("run", "Full pipeline: synthesize, kernel, invert, score");
    add_common(cmd_run, opts);

    auto* cmd_simulate = app.add_subcommand("simulate", "Forward-solve one sample path and dump its flux");
    add_common(cmd_simulate, opts);
    int path_index = 0;
    cmd_simulate->add_option("--path", path_index, "Path index to simulate");

    auto* cmd_synth = app.add_subcommand("synthesize", "Sample the flux ensemble and write the variance series");
    add_common(cmd_synth, opts);
    bool dump_flux = false;
    cmd_synth->add_flag("--dump-flux", dump_flux, "Also write the per-path flux CSV");

    auto* cmd_kernel = app.add_subcommand("kernel", "Tabulate the recovery kernels");
    add_common(cmd_kernel, opts);

    auto* cmd_invert = app.add_subcommand("invert", "Invert stored variance/kernel CSVs");
    add_common(cmd_invert, opts);
    std::string variance_path, kernel_path;
    cmd_invert->add_option("--variance", variance_path, "variance.csv from synthesize")->required();
    cmd_invert->add_option("--kernel", kernel_path, "kernel.csv from kernel")->required();

    auto* cmd_verify = app.add_subcommand("verify", "Run validation suites");
    std::vector<std::string> suites;
    cmd_verify->add_option("--suite", suites, "kernel, isometry, variance, oracle (default: all)");
    bool as_json = false;
    cmd_verify->add_flag("--json", as_json, "Machine-readable JSON report");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) {
            const ExperimentConfig config = resolve_config(opts);
            const ExperimentResult result = run_experiment(config);
            std::cout << "wrote " << result.variance_csv << ", " << result.kernel_csv << ", "
                      << result.reconstruction_csv << ", " << result.summary_json << "\n";
            std::cout << "iterations=" << result.reconstruction.iterations
                      << " converged=" << (result.reconstruction.converged ? "yes" : "no")
                      << " clamped=" << result.reconstruction.clamped_count
                      << " interior_error=" << format_double(result.interior_error) << "\n";
            return 0;
        }
        if (cmd_simulate->parsed()) {
            const ExperimentConfig config = resolve_config(opts);
            const ForwardModel model = forward_model(config);
            const FluxEnsemble single = [&] {
                PathFluxGenerator gen(model, config.sigma);
                PathFlux flux = gen.run(path_index);
                FluxEnsemble e;
                e.observation_points = model.observation_points;
                e.path_count = 1;
                e.sigma = config.sigma;
                e.ht = config.grid.ht();
                for (std::size_t pt = 0; pt < flux.clean.size(); ++pt) {
                    e.clean.push_back({std::move(flux.clean[pt])});
                    e.noisy.push_back({std::move(flux.noisy[pt])});
                }
                return e;
            }();
            fs::create_directories(config.output_dir);
            const std::string path = (fs::path(config.output_dir) / "flux.csv").string();
            write_flux_csv(path, config, single);
            std::cout << "wrote " << path << " (path " << path_index << ")\n";
            return 0;
        }
        if (cmd_synth->parsed()) {
            const ExperimentConfig config = resolve_config(opts);
            const ForwardModel model = forward_model(config);
            fs::create_directories(config.output_dir);
            const std::string vpath = (fs::path(config.output_dir) / "variance.csv").string();
            if (dump_flux) {
                const FluxEnsemble ensemble =
                    synthesize_flux_ensemble(model, config.paths, config.sigma, config.workers);
                std::vector<VarianceSeries> variances;
                for (const auto& z : model.observation_points)
                    variances.push_back(variance_series(ensemble, z));
                write_variance_csv(vpath, config, variances);
                const std::string fpath = (fs::path(config.output_dir) / "flux.csv").string();
                write_flux_csv(fpath, config, ensemble);
                std::cout << "wrote " << vpath << ", " << fpath << "\n";
            } else {
                const auto variances =
                    synthesize_variance_series(model, config.paths, config.sigma, config.workers);
                write_variance_csv(vpath, config, variances);
                std::cout << "wrote " << vpath << "\n";
            }
            return 0;
        }
        if (cmd_kernel->parsed()) {
            const ExperimentConfig config = resolve_config(opts);
            std::vector<KernelTable> kernels;
            for (const auto& z : config.observation_points)
                kernels.push_back(kernel_table(snap_to_grid(z, config.grid), config.g_profile(), config.equation,
                                               config.grid, config.kernel_tolerance));
            fs::create_directories(config.output_dir);
            const std::string path = (fs::path(config.output_dir) / "kernel.csv").string();
            write_kernel_csv(path, config, kernels);
            std::cout << "wrote " << path << "\n";
            return 0;
        }
        if (cmd_invert->parsed()) {
            const ExperimentConfig config = resolve_config(opts);
            const auto variances = read_variance_csv(variance_path);
            const auto kernels = read_kernel_csv(kernel_path, config.equation);
            const VolterraSystem system = build_volterra_system(kernels, variances);
            KaczmarzConfig kc{config.alpha, config.epsilon, config.max_sweeps, {}};
            const Reconstruction rec = kaczmarz_invert(system, kc);
            fs::create_directories(config.output_dir);
            const std::string path = (fs::path(config.output_dir) / "reconstruction.csv").string();
            write_reconstruction_csv(path, config, rec, config.f_true());
            std::cout << "wrote " << path << " iterations=" << rec.iterations
                      << " converged=" << (rec.converged ? "yes" : "no") << "\n";
            return 0;
        }
        if (cmd_verify->parsed()) {
            if (suites.empty()) suites = {"kernel", "isometry", "variance", "oracle"};
            int failed = 0;
            nlohmann::json all = nlohmann::json::array();
            for (const auto& name : suites) {
                const VerifyReport report = verify(parse_suite(name));
                if (as_json) {
                    for (const auto& c : report.checks)
                        all.push_back({{"suite", name},
                                       {"name", c.name},
                                       {"pass", c.pass},
                                       {"measured", c.measured},
                                       {"tolerance", c.tolerance},
                                       {"detail", c.detail}});
                    for (const auto& c : report.checks)
                        if (!c.pass) ++failed;
                } else {
                    std::cout << "== suite " << name << "\n";
                    failed += report_to_console(report);
                }
            }
            if (as_json) std::cout << all.dump(2) << "\n";
            return failed == 0 ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
