#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace randsrc {

/// Point in the unit interval (y unused) or the unit square.
struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Evolution type: heat (first order in time) or wave (second order).
enum class Equation { heat, wave };

inline const char* to_string(Equation eq) { return eq == Equation::heat ? "heat" : "wave"; }

/// Spatial domain: the unit interval [0,1] or the unit square [0,1]^2.
struct SpatialDomain {
    int dim = 1;

    static SpatialDomain interval() { return SpatialDomain{1}; }
    static SpatialDomain square() { return SpatialDomain{2}; }
};

/// Index of a Dirichlet-Laplacian eigenmode: n (1D) or the tensor pair (p,q) (2D).
/// q is 0 for one-dimensional modes.
struct ModeIndex {
    int p = 1;
    int q = 0;

    bool operator==(const ModeIndex&) const = default;
};

/// Which face of the boundary a point lies on.
enum class Side { x0, x1, y0, y1 };

inline const char* to_string(Side s) {
    switch (s) {
        case Side::x0: return "x0";
        case Side::x1: return "x1";
        case Side::y0: return "y0";
        default: return "y1";
    }
}

/// A boundary observation point. In 1D only the side (left/right endpoint)
/// matters; in 2D `offset` is the coordinate running along the side, strictly
/// inside (0,1) so corners are excluded. `requested_offset` keeps the
/// coordinate asked for before grid snapping, for output metadata.
struct BoundaryPoint {
    int dim = 1;
    Side side = Side::x0;
    double offset = 0.0;
    double requested_offset = 0.0;

    static BoundaryPoint left() { return BoundaryPoint{1, Side::x0, 0.0, 0.0}; }
    static BoundaryPoint right() { return BoundaryPoint{1, Side::x1, 0.0, 0.0}; }

    static BoundaryPoint on_side(Side s, double offset) {
        if (!(offset > 0.0 && offset < 1.0))
            throw std::invalid_argument("BoundaryPoint: offset must lie strictly inside (0,1)");
        return BoundaryPoint{2, s, offset, offset};
    }

    /// Construct from square-domain coordinates; one of x,y must be exactly 0 or 1.
    static BoundaryPoint at(double x, double y);

    Point location() const {
        if (dim == 1) return Point{side == Side::x0 ? 0.0 : 1.0, 0.0};
        switch (side) {
            case Side::x0: return Point{0.0, offset};
            case Side::x1: return Point{1.0, offset};
            case Side::y0: return Point{offset, 0.0};
            default: return Point{offset, 1.0};
        }
    }

    bool same_point(const BoundaryPoint& other, double tol = 1e-12) const {
        return dim == other.dim && side == other.side && std::abs(offset - other.offset) <= tol;
    }

    std::string describe() const;
};

/// Uniform space-time discretization. Spatial steps are derived from the
/// partition counts so that nx*hx == 1 holds exactly.
struct GridSpec {
    int dim = 1;
    int nx = 64;
    int ny = 0;   // 2D only
    int nt = 128;
    double final_time = 1.0;

    double hx() const { return 1.0 / nx; }
    double hy() const { return 1.0 / ny; }
    double ht() const { return final_time / nt; }

    static GridSpec line(int nx, int nt, double final_time = 1.0) {
        if (nx < 2 || nt < 1 || !(final_time > 0.0))
            throw std::invalid_argument("GridSpec: need nx >= 2, nt >= 1, T > 0");
        return GridSpec{1, nx, 0, nt, final_time};
    }

    static GridSpec square(int nx, int ny, int nt, double final_time = 1.0) {
        if (nx < 2 || ny < 2 || nt < 1 || !(final_time > 0.0))
            throw std::invalid_argument("GridSpec: need nx,ny >= 2, nt >= 1, T > 0");
        return GridSpec{2, nx, ny, nt, final_time};
    }
};

}  // namespace randsrc
