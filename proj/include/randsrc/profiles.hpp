#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "randsrc/domain.hpp"

namespace randsrc {

/// Spatial source component g. Ships the closed-form profiles used in the
/// experiments plus tabulated / user-supplied evaluators. Named polynomial
/// profiles expose their sine-basis coefficients so series sums do not need
/// quadrature.
class SpatialProfile {
   public:
    /// g(x) = x(1-x) on the unit interval.
    static SpatialProfile bubble_1d();
    /// g(x,y) = x y (1-x)(1-y) on the unit square.
    static SpatialProfile bubble_2d();
    /// g identically zero.
    static SpatialProfile zero(int dim);
    /// g equal to a Dirichlet eigenfunction (mainly for tests): 1D sqrt(2) sin(p pi x),
    /// 2D 2 sin(p pi x) sin(q pi y).
    static SpatialProfile eigenfunction(int dim, ModeIndex index);
    static SpatialProfile custom(int dim, std::function<double(Point)> eval, std::string name = "custom");
    /// Piecewise-linear interpolant of samples on the uniform grid with
    /// `values.size()-1` cells per axis (1D only).
    static SpatialProfile tabulated_1d(std::vector<double> values);

    double operator()(Point p) const { return eval_(p); }
    int dim() const { return dim_; }
    const std::string& name() const { return name_; }

    /// Closed-form coefficient <g, phi_index> when the profile knows one.
    std::optional<double> known_coefficient(const ModeIndex& index) const;

   private:
    enum class Form { bubble1d, bubble2d, zero, eigen, other };

    SpatialProfile(int dim, Form form, std::function<double(Point)> eval, std::string name)
        : dim_(dim), form_(form), eval_(std::move(eval)), name_(std::move(name)) {}

    int dim_;
    Form form_;
    std::function<double(Point)> eval_;
    std::string name_;
    ModeIndex eigen_index_{};
};

/// Temporal source component f. The named profiles are the test cases used in
/// the experiments; arbitrary evaluators and tabulated series are accepted too.
class TemporalProfile {
   public:
    /// f(t) = sin(2 pi t).
    static TemporalProfile sine();
    /// f(t) = 0.6 - 0.3 cos(2 pi t) - 0.3 cos(4 pi t).
    static TemporalProfile two_mode_cosine();
    /// f(t) = 1.5 on (0.2, 0.6], 1.0 on (0.6, 0.8], 0 elsewhere.
    static TemporalProfile two_step();
    static TemporalProfile constant(double value);
    static TemporalProfile custom(std::function<double(double)> eval, std::string name = "custom");
    /// Piecewise-linear interpolant of values at t_k = k*ht, k = 0..n-1.
    static TemporalProfile tabulated(std::vector<double> values, double ht);

    /// Look up a named profile ("sine", "cosine2", "steps", "const:<v>").
    static TemporalProfile named(const std::string& name);

    double operator()(double t) const { return eval_(t); }
    const std::string& name() const { return name_; }

   private:
    TemporalProfile(std::function<double(double)> eval, std::string name)
        : eval_(std::move(eval)), name_(std::move(name)) {}

    std::function<double(double)> eval_;
    std::string name_;
};

/// Look up a named spatial profile ("bubble", "bubble2d", "zero").
SpatialProfile named_spatial_profile(const std::string& name, int dim);

}  // namespace randsrc
