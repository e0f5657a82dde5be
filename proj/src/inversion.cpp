#include "randsrc/inversion.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numeric>

namespace randsrc {

namespace {

Eigen::MatrixXd toeplitz_dense(const std::vector<double>& col) {
    const int n = static_cast<int>(col.size());
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k <= j; ++k) G(j, k) = col[j - k];
    return G;
}

// Cholesky with iterative refinement; enforces a normwise backward error of
// 1e-12 and reports condition diagnostics when it cannot be reached.
Eigen::VectorXd solve_refined(const Eigen::LLT<Eigen::MatrixXd>& llt, const Eigen::MatrixXd& M,
                              const Eigen::VectorXd& w, double alpha) {
    constexpr double kTarget = 1e-12;
    Eigen::VectorXd x = llt.solve(w);
    const double mnorm = M.cwiseAbs().rowwise().sum().maxCoeff();
    double backward = 0.0;
    for (int pass = 0; pass < 4; ++pass) {
        const Eigen::VectorXd r = w - M * x;
        backward = r.norm() / (w.norm() + mnorm * x.norm() + 1e-300);
        if (backward <= kTarget) return x;
        x += llt.solve(r);
    }
    const Eigen::VectorXd r = w - M * x;
    backward = r.norm() / (w.norm() + mnorm * x.norm() + 1e-300);
    if (backward <= kTarget) return x;
    throw NumericalFailure("regularized normal solve did not reach the required backward error", backward,
                           mnorm / alpha);
}

struct PreparedBlock {
    Eigen::MatrixXd G;
    Eigen::MatrixXd M;  // G^T G + alpha I
    Eigen::LLT<Eigen::MatrixXd> llt;
    Eigen::VectorXd rhs;
};

PreparedBlock prepare(const VolterraBlock& block, double alpha) {
    PreparedBlock p;
    p.G = toeplitz_dense(block.kernel_sq);
    p.M = p.G.transpose() * p.G;
    p.M.diagonal().array() += alpha;
    p.llt.compute(p.M);
    if (p.llt.info() != Eigen::Success)
        throw NumericalFailure("regularized normal matrix is not positive definite", 1.0,
                               p.M.cwiseAbs().rowwise().sum().maxCoeff() / alpha);
    p.rhs = Eigen::Map<const Eigen::VectorXd>(block.rhs.data(), block.rhs.size());
    return p;
}

}  // namespace

VolterraSystem build_volterra_system(const std::vector<KernelTable>& kernels,
                                     const std::vector<VarianceSeries>& variances) {
    if (kernels.empty() || kernels.size() != variances.size())
        throw std::invalid_argument("build_volterra_system: kernel/variance lists must match");
    VolterraSystem system;
    system.ht = variances.front().ht;
    for (const auto& variance : variances) {
        const KernelTable* match = nullptr;
        for (const auto& kernel : kernels)
            if (kernel.z.same_point(variance.z)) match = &kernel;
        if (!match)
            throw std::invalid_argument("build_volterra_system: no kernel for point " + variance.z.describe());
        if (std::abs(match->ht - variance.ht) > 1e-12 * variance.ht ||
            match->values.size() != variance.values.size())
            throw std::invalid_argument("build_volterra_system: kernel and variance grids differ");

        VolterraBlock block;
        block.z = variance.z;
        block.kernel_sq.resize(match->values.size());
        for (std::size_t i = 0; i < match->values.size(); ++i)
            block.kernel_sq[i] = match->values[i] * match->values[i];
        block.rhs = variance.values;
        system.blocks.push_back(std::move(block));
    }
    return system;
}

std::vector<std::vector<double>> dense_block_matrix(const VolterraBlock& block) {
    const int n = static_cast<int>(block.kernel_sq.size());
    std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k <= j; ++k) out[j][k] = block.kernel_sq[j - k];
    return out;
}

std::vector<double> kaczmarz_step(const std::vector<double>& state, const VolterraBlock& block, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("kaczmarz_step: alpha must be positive");
    if (state.size() != block.kernel_sq.size() || state.size() != block.rhs.size())
        throw std::invalid_argument("kaczmarz_step: dimension mismatch");
    PreparedBlock p = prepare(block, alpha);
    const Eigen::Map<const Eigen::VectorXd> f(state.data(), state.size());
    const Eigen::VectorXd residual = p.rhs - p.G * f;
    const Eigen::VectorXd update = solve_refined(p.llt, p.M, p.G.transpose() * residual, alpha);
    Eigen::VectorXd next = f + update;
    return std::vector<double>(next.data(), next.data() + next.size());
}

Reconstruction kaczmarz_invert(const VolterraSystem& system, const KaczmarzConfig& config) {
    if (system.blocks.empty()) throw std::invalid_argument("kaczmarz_invert: no measurement blocks");
    if (!(config.alpha > 0.0) || !(config.epsilon > 0.0) || config.max_sweeps < 1)
        throw std::invalid_argument("kaczmarz_invert: alpha, epsilon must be positive and max_sweeps >= 1");
    const int n = system.dimension();
    for (const auto& block : system.blocks)
        if (static_cast<int>(block.kernel_sq.size()) != n || static_cast<int>(block.rhs.size()) != n)
            throw std::invalid_argument("kaczmarz_invert: inconsistent block dimensions");

    std::vector<int> order = config.block_order;
    if (order.empty()) {
        order.resize(system.blocks.size());
        std::iota(order.begin(), order.end(), 0);
    }
    for (int b : order)
        if (b < 0 || b >= static_cast<int>(system.blocks.size()))
            throw std::invalid_argument("kaczmarz_invert: block_order index out of range");

    std::vector<PreparedBlock> prepared;
    prepared.reserve(system.blocks.size());
    for (const auto& block : system.blocks) prepared.push_back(prepare(block, config.alpha));

    auto combined_residual = [&](const Eigen::VectorXd& f) {
        double sum = 0.0;
        for (const auto& p : prepared) sum += (p.G * f - p.rhs).norm();
        return sum;
    };

    Reconstruction rec;
    Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
    double residual = combined_residual(f);
    rec.converged = residual < config.epsilon;
    int sweeps = 0;
    while (!rec.converged && sweeps < config.max_sweeps) {
        for (int b : order) {
            const auto& p = prepared[b];
            const Eigen::VectorXd update = solve_refined(p.llt, p.M, p.G.transpose() * (p.rhs - p.G * f),
                                                         config.alpha);
            f += update;
            ++rec.iterations;
        }
        ++sweeps;
        residual = combined_residual(f);
        rec.residual_history.push_back(residual);
        rec.converged = residual < config.epsilon;
    }

    rec.f_squared.assign(f.data(), f.data() + n);
    rec.strength.resize(n);
    for (int k = 0; k < n; ++k) {
        if (rec.f_squared[k] < 0.0) {
            ++rec.clamped_count;
            rec.strength[k] = 0.0;
        } else {
            rec.strength[k] = std::sqrt(rec.f_squared[k]);
        }
    }
    return rec;
}

double reconstruction_error(const std::vector<double>& strength, const TemporalProfile& truth, double t_a,
                            double t_b, double ht) {
    if (!(t_a <= t_b)) throw std::invalid_argument("reconstruction_error: empty window");
    double num = 0.0, den = 0.0;
    int count = 0;
    for (std::size_t k = 0; k < strength.size(); ++k) {
        const double t = k * ht;
        if (t < t_a || t > t_b) continue;
        const double target = std::abs(truth(t));
        num += (strength[k] - target) * (strength[k] - target);
        den += target * target;
        ++count;
    }
    if (count == 0) throw std::invalid_argument("reconstruction_error: window contains no grid points");
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(num / den);
}

}  // namespace randsrc
