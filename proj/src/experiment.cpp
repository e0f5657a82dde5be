#include "randsrc/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "randsrc/spectral_oracle.hpp"

namespace randsrc {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void ExperimentConfig::validate() const {
    if (dim != 1 && dim != 2) throw std::invalid_argument("config: dim must be 1 or 2");
    if (equation == Equation::wave && dim == 2)
        throw std::invalid_argument("config: the 2D wave case is not supported");
    if (grid.dim != dim) throw std::invalid_argument("config: grid dimension does not match dim");
    if (paths < 1) throw std::invalid_argument("config: paths must be positive");
    if (sigma < 0.0) throw std::invalid_argument("config: noise level must be nonnegative");
    if (!(alpha > 0.0) || !(epsilon > 0.0) || max_sweeps < 1)
        throw std::invalid_argument("config: alpha, epsilon must be positive and max_sweeps >= 1");
    if (!(kernel_tolerance > 0.0)) throw std::invalid_argument("config: kernel tolerance must be positive");
    if (observation_points.empty()) throw std::invalid_argument("config: need at least one observation point");
    for (const auto& z : observation_points)
        if (z.dim != dim) throw std::invalid_argument("config: observation point dimension mismatch");
    f_true();
    g_profile();
}

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig c;
    if (name == "ex1") {
        // 1D heat: g = x(1-x), hx = 2^-6, ht = 2^-7, f = sin(2 pi t)
        c.equation = Equation::heat;
        c.dim = 1;
        c.grid = GridSpec::line(64, 128, 1.0);
        c.f_name = "sine";
        c.g_name = "bubble";
        c.observation_points = {BoundaryPoint::left(), BoundaryPoint::right()};
        c.paths = 5000;
        c.sigma = 0.0;
        c.alpha = 1e-2;
        c.epsilon = 2e-3;
        c.max_sweeps = 500;
        return c;
    }
    if (name == "ex2") {
        // 1D wave: same g and grid, two-mode cosine profile
        c.equation = Equation::wave;
        c.dim = 1;
        c.grid = GridSpec::line(64, 128, 1.0);
        c.f_name = "cosine2";
        c.g_name = "bubble";
        c.observation_points = {BoundaryPoint::left(), BoundaryPoint::right()};
        c.paths = 10000;
        c.sigma = 0.0;
        c.alpha = 5e-7;
        c.epsilon = 1e-4;
        c.max_sweeps = 200;
        return c;
    }
    if (name == "ex3" || name == "ex3-single") {
        // 2D heat: g = xy(1-x)(1-y), hx = hy = 2^-5, ht = 2^-7
        c.equation = Equation::heat;
        c.dim = 2;
        c.grid = GridSpec::square(32, 32, 128, 1.0);
        c.f_name = "cosine2";
        c.g_name = "bubble2d";
        c.observation_points = {BoundaryPoint::at(0.0, 0.2)};
        if (name == "ex3")
            c.observation_points = {BoundaryPoint::at(0.0, 0.2), BoundaryPoint::at(0.6, 0.0),
                                    BoundaryPoint::at(1.0, 0.4)};
        c.paths = 5000;
        c.sigma = 0.0;
        c.alpha = 1e-9;
        c.epsilon = 1e-6;
        c.max_sweeps = 10;
        return c;
    }
    throw std::invalid_argument("unknown preset '" + name + "' (expected ex1, ex2, ex3, ex3-single)");
}

// --- config file ------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

using Sections = std::map<std::string, std::map<std::string, std::string>>;

Sections parse_ini(std::istream& in) {
    Sections sections;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(lineno) + ": malformed section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        sections[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return sections;
}

class SectionReader {
   public:
    SectionReader(const Sections& sections, std::string name) : name_(std::move(name)) {
        if (auto it = sections.find(name_); it != sections.end()) values_ = &it->second;
    }

    std::string get(const std::string& key, const std::string& fallback) const {
        if (values_) {
            if (auto it = values_->find(key); it != values_->end()) return it->second;
        }
        return fallback;
    }

    double get_double(const std::string& key, double fallback) const {
        const std::string raw = get(key, "");
        if (raw.empty()) return fallback;
        try {
            return std::stod(raw);
        } catch (const std::exception&) {
            throw std::invalid_argument("config: " + name_ + "." + key + " is not a number: '" + raw + "'");
        }
    }

    long long get_int(const std::string& key, long long fallback) const {
        const std::string raw = get(key, "");
        if (raw.empty()) return fallback;
        try {
            return std::stoll(raw);
        } catch (const std::exception&) {
            throw std::invalid_argument("config: " + name_ + "." + key + " is not an integer: '" + raw + "'");
        }
    }

   private:
    std::string name_;
    const std::map<std::string, std::string>* values_ = nullptr;
};

std::vector<BoundaryPoint> parse_points(const std::string& text, int dim) {
    std::vector<BoundaryPoint> points;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ';')) {
        token = trim(token);
        if (token.empty()) continue;
        if (dim == 1) {
            if (token == "0" || token == "left")
                points.push_back(BoundaryPoint::left());
            else if (token == "1" || token == "right")
                points.push_back(BoundaryPoint::right());
            else
                throw std::invalid_argument("config: 1D observation point must be 0 or 1, got '" + token + "'");
        } else {
            if (token.front() != '(' || token.back() != ')')
                throw std::invalid_argument("config: 2D observation point must look like (x,y)");
            const std::string inner = token.substr(1, token.size() - 2);
            const auto comma = inner.find(',');
            if (comma == std::string::npos)
                throw std::invalid_argument("config: 2D observation point must look like (x,y)");
            points.push_back(
                BoundaryPoint::at(std::stod(trim(inner.substr(0, comma))), std::stod(trim(inner.substr(comma + 1)))));
        }
    }
    if (points.empty()) throw std::invalid_argument("config: empty observation point list");
    return points;
}

std::string points_to_string(const std::vector<BoundaryPoint>& points, int dim) {
    std::ostringstream out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i) out << ";";
        if (dim == 1) {
            out << (points[i].side == Side::x0 ? "0" : "1");
        } else {
            const Point p = points[i].location();
            out << "(" << format_double(p.x) << "," << format_double(p.y) << ")";
        }
    }
    return out.str();
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    const Sections sections = parse_ini(in);

    ExperimentConfig c;
    const SectionReader model(sections, "model");
    const std::string eq = model.get("equation", "heat");
    if (eq == "heat")
        c.equation = Equation::heat;
    else if (eq == "wave")
        c.equation = Equation::wave;
    else
        throw std::invalid_argument("config: model.equation must be heat or wave");
    c.dim = static_cast<int>(model.get_int("dim", 1));
    c.f_name = model.get("f", "sine");
    c.g_name = model.get("g", c.dim == 1 ? "bubble" : "bubble2d");

    const SectionReader grid(sections, "grid");
    const int nx = static_cast<int>(grid.get_int("nx", 64));
    const int ny = static_cast<int>(grid.get_int("ny", nx));
    const int nt = static_cast<int>(grid.get_int("nt", 128));
    const double T = grid.get_double("final_time", 1.0);
    c.grid = c.dim == 1 ? GridSpec::line(nx, nt, T) : GridSpec::square(nx, ny, nt, T);

    const SectionReader obs(sections, "observation");
    c.observation_points = parse_points(obs.get("points", c.dim == 1 ? "0;1" : "(0,0.2)"), c.dim);

    const SectionReader sampling(sections, "sampling");
    c.paths = static_cast<int>(sampling.get_int("paths", 5000));
    c.sigma = sampling.get_double("noise_level", 0.0);
    c.master_seed = static_cast<std::uint64_t>(sampling.get_int("seed", 42));
    c.workers = static_cast<int>(sampling.get_int("workers", 0));

    const SectionReader kernel(sections, "kernel");
    c.kernel_tolerance = kernel.get_double("tolerance", 1e-8);

    const SectionReader inversion(sections, "inversion");
    c.alpha = inversion.get_double("alpha", 1e-2);
    c.epsilon = inversion.get_double("epsilon", 2e-3);
    c.max_sweeps = static_cast<int>(inversion.get_int("max_sweeps", 500));

    const SectionReader output(sections, "output");
    c.output_dir = output.get("directory", "out");

    c.validate();
    return c;
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["model"] = {{"equation", to_string(c.equation)}, {"dim", c.dim}, {"f", c.f_name}, {"g", c.g_name}};
    j["grid"] = {{"nx", c.grid.nx}, {"ny", c.grid.ny}, {"nt", c.grid.nt}, {"final_time", c.grid.final_time}};
    j["observation"] = {{"points", points_to_string(c.observation_points, c.dim)}};
    j["sampling"] = {{"paths", c.paths}, {"noise_level", c.sigma}, {"seed", c.master_seed}, {"workers", c.workers}};
    j["kernel"] = {{"tolerance", c.kernel_tolerance}};
    j["inversion"] = {{"alpha", c.alpha}, {"epsilon", c.epsilon}, {"max_sweeps", c.max_sweeps}};
    j["output"] = {{"directory", c.output_dir}};
    return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    const auto& model = j.at("model");
    c.equation = model.at("equation").get<std::string>() == "wave" ? Equation::wave : Equation::heat;
    c.dim = model.at("dim").get<int>();
    c.f_name = model.at("f").get<std::string>();
    c.g_name = model.at("g").get<std::string>();
    const auto& grid = j.at("grid");
    c.grid = c.dim == 1
                 ? GridSpec::line(grid.at("nx").get<int>(), grid.at("nt").get<int>(),
                                  grid.at("final_time").get<double>())
                 : GridSpec::square(grid.at("nx").get<int>(), grid.at("ny").get<int>(), grid.at("nt").get<int>(),
                                    grid.at("final_time").get<double>());
    c.observation_points = parse_points(j.at("observation").at("points").get<std::string>(), c.dim);
    const auto& sampling = j.at("sampling");
    c.paths = sampling.at("paths").get<int>();
    c.sigma = sampling.at("noise_level").get<double>();
    c.master_seed = sampling.at("seed").get<std::uint64_t>();
    c.workers = sampling.at("workers").get<int>();
    c.kernel_tolerance = j.at("kernel").at("tolerance").get<double>();
    const auto& inversion = j.at("inversion");
    c.alpha = inversion.at("alpha").get<double>();
    c.epsilon = inversion.at("epsilon").get<double>();
    c.max_sweeps = inversion.at("max_sweeps").get<int>();
    c.output_dir = j.at("output").at("directory").get<std::string>();
    c.validate();
    return c;
}

// --- pipeline ----------------------------------------------------------------

ExperimentResult run_experiment_in_memory(const ExperimentConfig& config) {
    config.validate();
    ExperimentResult result;

    try {
        for (const auto& z : config.observation_points)
            result.snapped_points.push_back(snap_to_grid(z, config.grid));
    } catch (const std::exception& e) {
        throw ExperimentError("snap", e.what(), config);
    }

    try {
        const SpatialProfile g = config.g_profile();
        for (const auto& z : result.snapped_points)
            result.kernels.push_back(kernel_table(z, g, config.equation, config.grid, config.kernel_tolerance));
    } catch (const std::exception& e) {
        throw ExperimentError("kernel", e.what(), config);
    }

    try {
        ForwardModel model{config.equation, config.grid,   config.f_true(),
                           config.g_profile(), result.snapped_points, config.master_seed};
        result.variances = synthesize_variance_series(model, config.paths, config.sigma, config.workers);
    } catch (const std::exception& e) {
        throw ExperimentError("synthesize", e.what(), config);
    }

    try {
        const VolterraSystem system = build_volterra_system(result.kernels, result.variances);
        KaczmarzConfig kc{config.alpha, config.epsilon, config.max_sweeps, {}};
        result.reconstruction = kaczmarz_invert(system, kc);
    } catch (const std::exception& e) {
        throw ExperimentError("invert", e.what(), config);
    }

    try {
        const double T = config.grid.final_time;
        result.interior_error =
            reconstruction_error(result.reconstruction.strength, config.f_true(), 0.05 * T, 0.95 * T,
                                 config.grid.ht());
    } catch (const std::exception& e) {
        throw ExperimentError("score", e.what(), config);
    }
    return result;
}

namespace {

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::json point_metadata(const std::vector<BoundaryPoint>& points) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Point p = points[i].location();
        arr.push_back({{"id", i},
                       {"side", to_string(points[i].side)},
                       {"x", p.x},
                       {"y", points[i].dim == 2 ? p.y : 0.0},
                       {"requested_offset", points[i].requested_offset},
                       {"offset", points[i].offset}});
    }
    return arr;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    ExperimentResult result = run_experiment_in_memory(config);

    try {
        const fs::path dir(config.output_dir);
        fs::create_directories(dir);
        result.variance_csv = (dir / "variance.csv").string();
        result.kernel_csv = (dir / "kernel.csv").string();
        result.reconstruction_csv = (dir / "reconstruction.csv").string();
        result.summary_json = (dir / "summary.json").string();

        // stage everything under temporary names and rename once all writes
        // succeeded, so a failure never leaves partial artifacts behind
        write_variance_csv(result.variance_csv + ".tmp", config, result.variances);
        write_kernel_csv(result.kernel_csv + ".tmp", config, result.kernels);
        write_reconstruction_csv(result.reconstruction_csv + ".tmp", config, result.reconstruction,
                                 config.f_true());

        nlohmann::json summary;
        summary["schema"] = "randsrc.summary.v1";
        summary["timestamp"] = timestamp_utc();
        summary["config"] = config_to_json(config);
        summary["snapped_points"] = point_metadata(result.snapped_points);
        summary["iterations"] = result.reconstruction.iterations;
        summary["sweeps"] = result.reconstruction.residual_history.size();
        summary["converged"] = result.reconstruction.converged;
        summary["final_residual"] = result.reconstruction.residual_history.empty()
                                        ? 0.0
                                        : result.reconstruction.residual_history.back();
        summary["clamped_count"] = result.reconstruction.clamped_count;
        summary["kernel_truncation"] = nlohmann::json::array();
        for (const auto& k : result.kernels) summary["kernel_truncation"].push_back(k.truncation);
        summary["error_metrics"] = {{"interior_window", {0.05 * config.grid.final_time, 0.95 * config.grid.final_time}},
                                    {"relative_l2", result.interior_error},
                                    {"variance_standard_error_factor", std::sqrt(2.0 / config.paths)}};
        summary["files"] = {{"variance", result.variance_csv},
                            {"kernel", result.kernel_csv},
                            {"reconstruction", result.reconstruction_csv}};
        {
            std::ofstream out(result.summary_json + ".tmp");
            if (!out) throw std::runtime_error("cannot open '" + result.summary_json + "' for writing");
            out << summary.dump(2) << "\n";
        }
        for (const auto& path :
             {result.variance_csv, result.kernel_csv, result.reconstruction_csv, result.summary_json})
            fs::rename(path + ".tmp", path);
    } catch (const ExperimentError&) {
        throw;
    } catch (const std::exception& e) {
        std::error_code ignore;
        for (const auto& path :
             {result.variance_csv, result.kernel_csv, result.reconstruction_csv, result.summary_json})
            if (!path.empty()) fs::remove(path + ".tmp", ignore);
        throw ExperimentError("write", e.what(), config);
    }
    return result;
}

// --- CSV I/O ------------------------------------------------------------------

namespace {

void write_csv_header(std::ofstream& out, const std::string& schema, const ExperimentConfig& config,
                      const std::vector<BoundaryPoint>& points) {
    out << "# schema=" << schema << "\n";
    out << "# equation=" << to_string(config.equation) << " dim=" << config.dim << " nx=" << config.grid.nx;
    if (config.dim == 2) out << " ny=" << config.grid.ny;
    out << " nt=" << config.grid.nt << " T=" << format_double(config.grid.final_time) << "\n";
    out << "# paths=" << config.paths << " sigma=" << format_double(config.sigma)
        << " seed=" << config.master_seed << "\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        out << "# point " << i << ": side=" << to_string(points[i].side)
            << " offset=" << format_double(points[i].offset)
            << " requested=" << format_double(points[i].requested_offset) << "\n";
    }
}

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace

void write_variance_csv(const std::string& path, const ExperimentConfig& config,
                        const std::vector<VarianceSeries>& variances) {
    auto out = open_csv(path);
    std::vector<BoundaryPoint> points;
    for (const auto& v : variances) points.push_back(v.z);
    write_csv_header(out, "randsrc.variance.v1", config, points);
    out << "point_id,j,t_j,V\n";
    for (std::size_t pt = 0; pt < variances.size(); ++pt) {
        const auto& v = variances[pt];
        for (std::size_t j = 0; j < v.values.size(); ++j)
            out << pt << "," << (j + 1) << "," << format_double((j + 1) * v.ht) << ","
                << format_double(v.values[j]) << "\n";
    }
}

void write_kernel_csv(const std::string& path, const ExperimentConfig& config,
                      const std::vector<KernelTable>& kernels) {
    auto out = open_csv(path);
    std::vector<BoundaryPoint> points;
    for (const auto& k : kernels) points.push_back(k.z);
    write_csv_header(out, "randsrc.kernel.v1", config, points);
    for (std::size_t pt = 0; pt < kernels.size(); ++pt)
        out << "# truncation " << pt << ": " << kernels[pt].truncation << "\n";
    out << "point_id,j,t_j,G\n";
    for (std::size_t pt = 0; pt < kernels.size(); ++pt) {
        const auto& k = kernels[pt];
        for (std::size_t j = 0; j < k.values.size(); ++j)
            out << pt << "," << (j + 1) << "," << format_double(k.times[j]) << ","
                << format_double(k.values[j]) << "\n";
    }
}

void write_reconstruction_csv(const std::string& path, const ExperimentConfig& config,
                              const Reconstruction& reconstruction,
                              const std::optional<TemporalProfile>& truth) {
    auto out = open_csv(path);
    write_csv_header(out, "randsrc.reconstruction.v1", config, {});
    out << "j,t_j,f_squared,strength";
    if (truth) out << ",truth_abs";
    out << "\n";
    const double ht = config.grid.ht();
    for (std::size_t k = 0; k < reconstruction.f_squared.size(); ++k) {
        const double t = k * ht;
        out << k << "," << format_double(t) << "," << format_double(reconstruction.f_squared[k]) << ","
            << format_double(reconstruction.strength[k]);
        if (truth) out << "," << format_double(std::abs((*truth)(t)));
        out << "\n";
    }
}

void write_flux_csv(const std::string& path, const ExperimentConfig& config, const FluxEnsemble& ensemble) {
    auto out = open_csv(path);
    write_csv_header(out, "randsrc.flux.v1", config, ensemble.observation_points);
    out << "path,point_id,j,t_j,flux,flux_noisy\n";
    for (int p = 0; p < ensemble.path_count; ++p)
        for (std::size_t pt = 0; pt < ensemble.observation_points.size(); ++pt)
            for (std::size_t j = 0; j < ensemble.clean[pt][p].size(); ++j)
                out << p << "," << pt << "," << (j + 1) << "," << format_double((j + 1) * ensemble.ht) << ","
                    << format_double(ensemble.clean[pt][p][j]) << ","
                    << format_double(ensemble.noisy[pt][p][j]) << "\n";
}

namespace {

struct CsvContent {
    std::vector<BoundaryPoint> points;
    // per point: (j, t, value)
    std::vector<std::vector<std::pair<double, double>>> rows;
    int paths = 0;
    double sigma = 0.0;
};

CsvContent read_point_csv(const std::string& path, const std::string& schema) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    CsvContent content;
    std::string line;
    bool saw_schema = false;
    int dim = 1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::stringstream ss(line);
            std::string hash, word;
            ss >> hash >> word;
            if (word.rfind("schema=", 0) == 0) {
                if (word.substr(7) != schema)
                    throw std::invalid_argument("'" + path + "': expected schema " + schema);
                saw_schema = true;
            } else if (word.rfind("equation=", 0) == 0) {
                std::string token;
                while (ss >> token)
                    if (token.rfind("dim=", 0) == 0) dim = std::stoi(token.substr(4));
            } else if (word.rfind("paths=", 0) == 0) {
                content.paths = std::stoi(word.substr(6));
                std::string token;
                while (ss >> token)
                    if (token.rfind("sigma=", 0) == 0) content.sigma = std::stod(token.substr(6));
            } else if (word == "point") {
                int id;
                std::string colon, side_kv, offset_kv, requested_kv;
                ss >> id >> colon >> side_kv >> offset_kv >> requested_kv;
                auto value_of = [](const std::string& kv) { return kv.substr(kv.find('=') + 1); };
                const std::string side_name = value_of(side_kv);
                Side side = Side::x0;
                if (side_name == "x1") side = Side::x1;
                else if (side_name == "y0") side = Side::y0;
                else if (side_name == "y1") side = Side::y1;
                BoundaryPoint z;
                z.dim = dim;
                z.side = side;
                z.offset = std::stod(value_of(offset_kv));
                z.requested_offset = std::stod(value_of(requested_kv));
                content.points.push_back(z);
                content.rows.emplace_back();
            }
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(line.front()))) continue;  // column header
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() < 4) throw std::invalid_argument("'" + path + "': malformed row '" + line + "'");
        const int pt = std::stoi(cells[0]);
        if (pt < 0 || pt >= static_cast<int>(content.rows.size()))
            throw std::invalid_argument("'" + path + "': point id out of range");
        content.rows[pt].emplace_back(std::stod(cells[2]), std::stod(cells[3]));
    }
    if (!saw_schema) throw std::invalid_argument("'" + path + "': missing schema header");
    return content;
}

}  // namespace

std::vector<VarianceSeries> read_variance_csv(const std::string& path) {
    const CsvContent content = read_point_csv(path, "randsrc.variance.v1");
    std::vector<VarianceSeries> out;
    for (std::size_t pt = 0; pt < content.points.size(); ++pt) {
        VarianceSeries v;
        v.z = content.points[pt];
        v.path_count = content.paths;
        v.sigma = content.sigma;
        if (content.rows[pt].empty()) throw std::invalid_argument("'" + path + "': empty variance series");
        v.ht = content.rows[pt].front().first;
        for (const auto& [t, value] : content.rows[pt]) v.values.push_back(value);
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<KernelTable> read_kernel_csv(const std::string& path, Equation eq) {
    const CsvContent content = read_point_csv(path, "randsrc.kernel.v1");
    std::vector<KernelTable> out;
    for (std::size_t pt = 0; pt < content.points.size(); ++pt) {
        KernelTable k;
        k.z = content.points[pt];
        k.equation = eq;
        if (content.rows[pt].empty()) throw std::invalid_argument("'" + path + "': empty kernel table");
        k.ht = content.rows[pt].front().first;
        for (const auto& [t, value] : content.rows[pt]) {
            k.times.push_back(t);
            k.values.push_back(value);
        }
        out.push_back(std::move(k));
    }
    return out;
}

}  // namespace randsrc
