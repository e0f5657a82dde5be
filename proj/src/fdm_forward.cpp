#include "randsrc/fdm_forward.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <memory>
#include <stdexcept>

#include "randsrc/detail/parallel.hpp"

namespace randsrc {

namespace {

// Constant-coefficient tridiagonal solve (Thomas), factored once.
class Tridiagonal {
   public:
    Tridiagonal() = default;
    Tridiagonal(int n, double diag, double off) : n_(n), off_(off), cp_(n), denom_(n) {
        denom_[0] = diag;
        cp_[0] = off / denom_[0];
        for (int i = 1; i < n; ++i) {
            denom_[i] = diag - off * cp_[i - 1];
            cp_[i] = off / denom_[i];
        }
    }

    void solve_in_place(std::vector<double>& d) const {
        d[0] /= denom_[0];
        for (int i = 1; i < n_; ++i) d[i] = (d[i] - off_ * d[i - 1]) / denom_[i];
        for (int i = n_ - 2; i >= 0; --i) d[i] -= cp_[i] * d[i + 1];
    }

   private:
    int n_ = 0;
    double off_ = 0.0;
    std::vector<double> cp_;
    std::vector<double> denom_;
};

struct ForwardSolver {
    virtual ~ForwardSolver() = default;
    virtual std::vector<FieldState> run(const IncrementSeries& dW) const = 0;
};

void check_increments(const GridSpec& grid, const IncrementSeries& dW) {
    if (static_cast<int>(dW.values.size()) != grid.nt)
        throw std::invalid_argument("increment series length does not match the time grid");
    if (std::abs(dW.ht - grid.ht()) > 1e-12 * grid.ht())
        throw std::invalid_argument("increment series step does not match the time grid");
}

class HeatSolver1D : public ForwardSolver {
   public:
    HeatSolver1D(const GridSpec& grid, const TemporalProfile& f, const SpatialProfile& g) : grid_(grid) {
        const int n = grid.nx - 1;
        const double r = grid.ht() / (grid.hx() * grid.hx());
        tri_ = Tridiagonal(n, 1.0 + 2.0 * r, -r);
        gvals_.resize(n);
        for (int i = 1; i < grid.nx; ++i) gvals_[i - 1] = g(Point{i * grid.hx(), 0.0});
        fvals_.resize(grid.nt);
        for (int j = 0; j < grid.nt; ++j) fvals_[j] = f(j * grid.ht());
    }

    std::vector<FieldState> run(const IncrementSeries& dW) const override {
        check_increments(grid_, dW);
        const int n = grid_.nx - 1;
        std::vector<FieldState> states(grid_.nt + 1);
        states[0] = {std::vector<double>(grid_.nx + 1, 0.0), 0};
        std::vector<double> interior(n, 0.0), rhs(n);
        for (int j = 0; j < grid_.nt; ++j) {
            const double force = fvals_[j] * dW.values[j];
            for (int i = 0; i < n; ++i) rhs[i] = interior[i] + force * gvals_[i];
            tri_.solve_in_place(rhs);
            interior = rhs;
            FieldState state{std::vector<double>(grid_.nx + 1, 0.0), j + 1};
            for (int i = 0; i < n; ++i) state.values[i + 1] = interior[i];
            states[j + 1] = std::move(state);
        }
        return states;
    }

   private:
    GridSpec grid_;
    Tridiagonal tri_;
    std::vector<double> gvals_;
    std::vector<double> fvals_;
};

class WaveSolver1D : public ForwardSolver {
   public:
    WaveSolver1D(const GridSpec& grid, const TemporalProfile& f, const SpatialProfile& g) : grid_(grid) {
        const int n = grid.nx - 1;
        const double s = grid.ht() * grid.ht() / (4.0 * grid.hx() * grid.hx());
        quarter_ = grid.ht() * grid.ht() / 4.0;
        tri_ = Tridiagonal(n, 1.0 + 2.0 * s, -s);
        gvals_.resize(n);
        for (int i = 1; i < grid.nx; ++i) gvals_[i - 1] = g(Point{i * grid.hx(), 0.0});
        fvals_.resize(grid.nt);
        for (int j = 0; j < grid.nt; ++j) fvals_[j] = f(j * grid.ht());
    }

    std::vector<FieldState> run(const IncrementSeries& dW) const override {
        check_increments(grid_, dW);
        const int n = grid_.nx - 1;
        const double ht = grid_.ht();
        const double inv_hx2 = 1.0 / (grid_.hx() * grid_.hx());
        auto lap = [&](const std::vector<double>& u, int i) {
            const double left = i > 0 ? u[i - 1] : 0.0;
            const double right = i + 1 < n ? u[i + 1] : 0.0;
            return (left - 2.0 * u[i] + right) * inv_hx2;
        };

        std::vector<FieldState> states(grid_.nt + 1);
        states[0] = {std::vector<double>(grid_.nx + 1, 0.0), 0};
        std::vector<double> prev(n, 0.0), curr(n), rhs(n);

        // first level: (I - ht^2/4 d_x^2) u^1 = (ht/2) f(t_0) g dW_0
        const double f0 = 0.5 * ht * fvals_[0] * dW.values[0];
        for (int i = 0; i < n; ++i) rhs[i] = f0 * gvals_[i];
        tri_.solve_in_place(rhs);
        curr = rhs;
        states[1] = to_state(curr, 1);

        for (int j = 1; j < grid_.nt; ++j) {
            const double force = ht * fvals_[j] * dW.values[j];
            for (int i = 0; i < n; ++i)
                rhs[i] = 2.0 * curr[i] - prev[i] + quarter_ * (2.0 * lap(curr, i) + lap(prev, i)) +
                         force * gvals_[i];
            tri_.solve_in_place(rhs);
            prev.swap(curr);
            curr = rhs;
            states[j + 1] = to_state(curr, j + 1);
        }
        return states;
    }

   private:
    FieldState to_state(const std::vector<double>& interior, int j) const {
        FieldState state{std::vector<double>(grid_.nx + 1, 0.0), j};
        for (std::size_t i = 0; i < interior.size(); ++i) state.values[i + 1] = interior[i];
        return state;
    }

    GridSpec grid_;
    Tridiagonal tri_;
    double quarter_ = 0.0;
    std::vector<double> gvals_;
    std::vector<double> fvals_;
};

class HeatSolver2D : public ForwardSolver {
   public:
    HeatSolver2D(const GridSpec& grid, const TemporalProfile& f, const SpatialProfile& g) : grid_(grid) {
        const int mx = grid.nx - 1, my = grid.ny - 1;
        const double ax = grid.ht() / (grid.hx() * grid.hx());
        const double ay = grid.ht() / (grid.hy() * grid.hy());
        Eigen::SparseMatrix<double> A(mx * my, mx * my);
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<std::size_t>(mx) * my * 5);
        auto id = [my](int i, int j) { return i * my + j; };  // i over x, j over y (0-based interior)
        for (int i = 0; i < mx; ++i) {
            for (int j = 0; j < my; ++j) {
                trip.emplace_back(id(i, j), id(i, j), 1.0 + 2.0 * ax + 2.0 * ay);
                if (i > 0) trip.emplace_back(id(i, j), id(i - 1, j), -ax);
                if (i + 1 < mx) trip.emplace_back(id(i, j), id(i + 1, j), -ax);
                if (j > 0) trip.emplace_back(id(i, j), id(i, j - 1), -ay);
                if (j + 1 < my) trip.emplace_back(id(i, j), id(i, j + 1), -ay);
            }
        }
        A.setFromTriplets(trip.begin(), trip.end());
        solver_.compute(A);
        if (solver_.info() != Eigen::Success)
            throw std::runtime_error("heat 2D: Cholesky factorization of the implicit step failed");

        gvals_.resize(mx * my);
        for (int i = 0; i < mx; ++i)
            for (int j = 0; j < my; ++j)
                gvals_[id(i, j)] = g(Point{(i + 1) * grid.hx(), (j + 1) * grid.hy()});
        fvals_.resize(grid.nt);
        for (int j = 0; j < grid.nt; ++j) fvals_[j] = f(j * grid.ht());
    }

    std::vector<FieldState> run(const IncrementSeries& dW) const override {
        check_increments(grid_, dW);
        const int mx = grid_.nx - 1, my = grid_.ny - 1;
        const int stride = grid_.ny + 1;
        std::vector<FieldState> states(grid_.nt + 1);
        states[0] = {std::vector<double>((grid_.nx + 1) * stride, 0.0), 0};
        Eigen::VectorXd u = Eigen::VectorXd::Zero(mx * my);
        Eigen::VectorXd rhs(mx * my);
        for (int j = 0; j < grid_.nt; ++j) {
            const double force = fvals_[j] * dW.values[j];
            for (int k = 0; k < mx * my; ++k) rhs[k] = u[k] + force * gvals_[k];
            u = solver_.solve(rhs);
            FieldState state{std::vector<double>((grid_.nx + 1) * stride, 0.0), j + 1};
            for (int ix = 0; ix < mx; ++ix)
                for (int iy = 0; iy < my; ++iy) state.values[(ix + 1) * stride + (iy + 1)] = u[ix * my + iy];
            states[j + 1] = std::move(state);
        }
        return states;
    }

   private:
    GridSpec grid_;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> solver_;
    std::vector<double> gvals_;
    std::vector<double> fvals_;
};

std::unique_ptr<ForwardSolver> make_solver(const ForwardModel& model) {
    if (model.equation == Equation::wave) {
        if (model.grid.dim != 1) throw std::invalid_argument("wave solver is one-dimensional only");
        return std::make_unique<WaveSolver1D>(model.grid, model.f, model.g);
    }
    if (model.grid.dim == 1) return std::make_unique<HeatSolver1D>(model.grid, model.f, model.g);
    return std::make_unique<HeatSolver2D>(model.grid, model.f, model.g);
}

int snapped_index(const BoundaryPoint& z, const GridSpec& grid) {
    const int n = (z.side == Side::x0 || z.side == Side::x1) ? grid.ny : grid.nx;
    const double h = 1.0 / n;
    const int k = static_cast<int>(std::llround(z.offset / h));
    if (k < 1 || k > n - 1 || std::abs(z.offset - k * h) > 1e-9)
        throw std::invalid_argument("boundary point " + z.describe() + " is not aligned with the grid");
    return k;
}

}  // namespace

std::vector<FieldState> solve_heat_1d(const GridSpec& grid, const TemporalProfile& f, const SpatialProfile& g,
                                      const IncrementSeries& dW) {
    if (grid.dim != 1) throw std::invalid_argument("solve_heat_1d: grid must be one-dimensional");
    return HeatSolver1D(grid, f, g).run(dW);
}

std::vector<FieldState> solve_heat_2d(const GridSpec& grid, const TemporalProfile& f, const SpatialProfile& g,
                                      const IncrementSeries& dW) {
    if (grid.dim != 2) throw std::invalid_argument("solve_heat_2d: grid must be two-dimensional");
    return HeatSolver2D(grid, f, g).run(dW);
}

std::vector<FieldState> solve_wave_1d(const GridSpec& grid, const TemporalProfile& f, const SpatialProfile& g,
                                      const IncrementSeries& dW) {
    if (grid.dim != 1) throw std::invalid_argument("solve_wave_1d: grid must be one-dimensional");
    return WaveSolver1D(grid, f, g).run(dW);
}

std::vector<double> boundary_flux(const std::vector<FieldState>& states, const BoundaryPoint& z,
                                  const GridSpec& grid) {
    if (z.dim != grid.dim) throw std::invalid_argument("boundary_flux: dimension mismatch");
    const int nt = static_cast<int>(states.size()) - 1;
    std::vector<double> flux(nt);
    if (grid.dim == 1) {
        const double inv_hx = 1.0 / grid.hx();
        if (z.side != Side::x0 && z.side != Side::x1)
            throw std::invalid_argument("boundary_flux: 1D point must be an endpoint");
        for (int j = 1; j <= nt; ++j) {
            const auto& u = states[j].values;
            flux[j - 1] = (z.side == Side::x0) ? -(u[1] - u[0]) * inv_hx
                                               : (u[grid.nx - 1] - u[grid.nx]) * inv_hx;
        }
        return flux;
    }
    const int k = snapped_index(z, grid);
    const int stride = grid.ny + 1;
    for (int j = 1; j <= nt; ++j) {
        const auto& u = states[j].values;
        double v = 0.0;
        switch (z.side) {
            case Side::x0:
                v = (u[0 * stride + k] - u[1 * stride + k]) / grid.hx();
                break;
            case Side::x1:
                v = (u[grid.nx * stride + k] - u[(grid.nx - 1) * stride + k]) / grid.hx();
                break;
            case Side::y0:
                v = (u[k * stride + 0] - u[k * stride + 1]) / grid.hy();
                break;
            default:
                v = (u[k * stride + grid.ny] - u[k * stride + grid.ny - 1]) / grid.hy();
                break;
        }
        flux[j - 1] = v;
    }
    return flux;
}

BoundaryPoint snap_to_grid(const BoundaryPoint& z, const GridSpec& grid) {
    if (z.dim == 1) return z;
    const int n = (z.side == Side::x0 || z.side == Side::x1) ? grid.ny : grid.nx;
    const double h = 1.0 / n;
    int k = static_cast<int>(std::llround(z.offset / h));
    k = std::clamp(k, 1, n - 1);
    BoundaryPoint snapped = z;
    snapped.offset = k * h;
    return snapped;
}

struct PathFluxGenerator::Impl {
    ForwardModel model;
    double sigma = 0.0;
    std::unique_ptr<ForwardSolver> solver;
};

PathFluxGenerator::PathFluxGenerator(const ForwardModel& model, double sigma)
    : impl_(std::make_unique<Impl>()) {
    if (sigma < 0.0) throw std::invalid_argument("noise level must be nonnegative");
    if (model.observation_points.empty()) throw std::invalid_argument("no observation points configured");
    impl_->model = model;
    impl_->sigma = sigma;
    impl_->solver = make_solver(model);
}

PathFluxGenerator::PathFluxGenerator(PathFluxGenerator&&) noexcept = default;
PathFluxGenerator& PathFluxGenerator::operator=(PathFluxGenerator&&) noexcept = default;
PathFluxGenerator::~PathFluxGenerator() = default;

PathFlux PathFluxGenerator::run(int path_index) const {
    const auto& model = impl_->model;
    const int npts = static_cast<int>(model.observation_points.size());
    const int nt = model.grid.nt;
    const double sigma = impl_->sigma;

    const auto dW = brownian_increments(
        SeedSpec{model.master_seed, static_cast<std::uint64_t>(path_index), StreamTag::brownian}, nt,
        model.grid.ht());
    const auto states = impl_->solver->run(dW);

    PathFlux out;
    out.clean.resize(npts);
    out.noisy.resize(npts);
    std::vector<double> noise;
    if (sigma > 0.0)
        noise = uniform_noise(SeedSpec{model.master_seed, static_cast<std::uint64_t>(path_index),
                                       StreamTag::measurement_noise},
                              npts * nt);
    for (int pt = 0; pt < npts; ++pt) {
        out.clean[pt] = boundary_flux(states, model.observation_points[pt], model.grid);
        if (sigma > 0.0) {
            out.noisy[pt].resize(nt);
            for (int j = 0; j < nt; ++j) out.noisy[pt][j] = out.clean[pt][j] + sigma * noise[pt * nt + j];
        } else {
            out.noisy[pt] = out.clean[pt];
        }
    }
    return out;
}

FluxEnsemble synthesize_flux_ensemble(const ForwardModel& model, int paths, double sigma, int workers) {
    if (paths < 1) throw std::invalid_argument("synthesize_flux_ensemble: need at least one path");

    const int npts = static_cast<int>(model.observation_points.size());
    FluxEnsemble ens;
    ens.observation_points = model.observation_points;
    ens.path_count = paths;
    ens.sigma = sigma;
    ens.ht = model.grid.ht();
    ens.clean.assign(npts, std::vector<std::vector<double>>(paths));
    ens.noisy.assign(npts, std::vector<std::vector<double>>(paths));

    detail::parallel_path_loop(
        paths, /*chunk_size=*/64, workers, [&] { return PathFluxGenerator(model, sigma); },
        [&](PathFluxGenerator& gen, int p) {
            auto flux = gen.run(p);
            for (int pt = 0; pt < npts; ++pt) {
                ens.clean[pt][p] = std::move(flux.clean[pt]);
                ens.noisy[pt][p] = std::move(flux.noisy[pt]);
            }
        });
    return ens;
}

}  // namespace randsrc
