#include "randsrc/profiles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace randsrc {

namespace {
constexpr double kPi = std::numbers::pi;

// integral_0^1 x(1-x) sqrt(2) sin(n pi x) dx
double bubble_sine_coefficient(int n) {
    const double odd = (n % 2 == 1) ? 2.0 : 0.0;
    return 2.0 * std::sqrt(2.0) * odd / (static_cast<double>(n) * n * n * kPi * kPi * kPi);
}
}  // namespace

SpatialProfile SpatialProfile::bubble_1d() {
    return SpatialProfile(1, Form::bubble1d, [](Point p) { return p.x * (1.0 - p.x); }, "bubble");
}

SpatialProfile SpatialProfile::bubble_2d() {
    return SpatialProfile(
        2, Form::bubble2d, [](Point p) { return p.x * p.y * (1.0 - p.x) * (1.0 - p.y); }, "bubble2d");
}

SpatialProfile SpatialProfile::zero(int dim) {
    return SpatialProfile(dim, Form::zero, [](Point) { return 0.0; }, "zero");
}

SpatialProfile SpatialProfile::eigenfunction(int dim, ModeIndex index) {
    if (dim == 1) {
        const int p = index.p;
        SpatialProfile out(1, Form::eigen,
                           [p](Point pt) { return std::sqrt(2.0) * std::sin(p * kPi * pt.x); },
                           "phi_" + std::to_string(p));
        out.eigen_index_ = {p, 0};
        return out;
    }
    const int p = index.p, q = index.q;
    SpatialProfile out(2, Form::eigen,
                       [p, q](Point pt) { return 2.0 * std::sin(p * kPi * pt.x) * std::sin(q * kPi * pt.y); },
                       "phi_" + std::to_string(p) + "_" + std::to_string(q));
    out.eigen_index_ = {p, q};
    return out;
}

SpatialProfile SpatialProfile::custom(int dim, std::function<double(Point)> eval, std::string name) {
    return SpatialProfile(dim, Form::other, std::move(eval), std::move(name));
}

SpatialProfile SpatialProfile::tabulated_1d(std::vector<double> values) {
    if (values.size() < 2) throw std::invalid_argument("tabulated_1d: need at least two samples");
    const int cells = static_cast<int>(values.size()) - 1;
    auto eval = [values = std::move(values), cells](Point p) {
        const double s = std::clamp(p.x, 0.0, 1.0) * cells;
        const int i = std::min(static_cast<int>(s), cells - 1);
        const double w = s - i;
        return (1.0 - w) * values[i] + w * values[i + 1];
    };
    return SpatialProfile(1, Form::other, std::move(eval), "tabulated");
}

std::optional<double> SpatialProfile::known_coefficient(const ModeIndex& index) const {
    switch (form_) {
        case Form::bubble1d:
            return bubble_sine_coefficient(index.p);
        case Form::bubble2d:
            // separable product: <g, 2 sin sin> factors into the two 1D integrals
            return bubble_sine_coefficient(index.p) * bubble_sine_coefficient(index.q);
        case Form::zero:
            return 0.0;
        case Form::eigen:
            return index == eigen_index_ ? 1.0 : 0.0;
        default:
            return std::nullopt;
    }
}

TemporalProfile TemporalProfile::sine() {
    return TemporalProfile([](double t) { return std::sin(2.0 * kPi * t); }, "sine");
}

TemporalProfile TemporalProfile::two_mode_cosine() {
    return TemporalProfile(
        [](double t) { return 0.6 - 0.3 * std::cos(2.0 * kPi * t) - 0.3 * std::cos(4.0 * kPi * t); }, "cosine2");
}

TemporalProfile TemporalProfile::two_step() {
    return TemporalProfile(
        [](double t) {
            if (t > 0.2 && t <= 0.6) return 1.5;
            if (t > 0.6 && t <= 0.8) return 1.0;
            return 0.0;
        },
        "steps");
}

TemporalProfile TemporalProfile::constant(double value) {
    return TemporalProfile([value](double) { return value; }, "const:" + std::to_string(value));
}

TemporalProfile TemporalProfile::custom(std::function<double(double)> eval, std::string name) {
    return TemporalProfile(std::move(eval), std::move(name));
}

TemporalProfile TemporalProfile::tabulated(std::vector<double> values, double ht) {
    if (values.size() < 2 || !(ht > 0.0)) throw std::invalid_argument("tabulated: need samples and ht > 0");
    const int last = static_cast<int>(values.size()) - 1;
    auto eval = [values = std::move(values), ht, last](double t) {
        const double s = t / ht;
        if (s <= 0.0) return values.front();
        if (s >= last) return values.back();
        const int k = static_cast<int>(s);
        const double w = s - k;
        return (1.0 - w) * values[k] + w * values[k + 1];
    };
    return TemporalProfile(std::move(eval), "tabulated");
}

TemporalProfile TemporalProfile::named(const std::string& name) {
    if (name == "sine") return sine();
    if (name == "cosine2") return two_mode_cosine();
    if (name == "steps") return two_step();
    if (name.rfind("const:", 0) == 0) return constant(std::stod(name.substr(6)));
    throw std::invalid_argument("unknown temporal profile '" + name + "'");
}

SpatialProfile named_spatial_profile(const std::string& name, int dim) {
    if (name == "bubble") {
        if (dim != 1) throw std::invalid_argument("profile 'bubble' is one-dimensional");
        return SpatialProfile::bubble_1d();
    }
    if (name == "bubble2d") {
        if (dim != 2) throw std::invalid_argument("profile 'bubble2d' is two-dimensional");
        return SpatialProfile::bubble_2d();
    }
    if (name == "zero") return SpatialProfile::zero(dim);
    throw std::invalid_argument("unknown spatial profile '" + name + "'");
}

}  // namespace randsrc
