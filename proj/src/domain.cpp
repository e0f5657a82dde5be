#include "randsrc/domain.hpp"

#include <sstream>

namespace randsrc {

BoundaryPoint BoundaryPoint::at(double x, double y) {
    if (x == 0.0 || x == 1.0) {
        if (!(y > 0.0 && y < 1.0))
            throw std::invalid_argument("BoundaryPoint: corner or off-boundary coordinates");
        return BoundaryPoint{2, x == 0.0 ? Side::x0 : Side::x1, y, y};
    }
    if (y == 0.0 || y == 1.0) {
        if (!(x > 0.0 && x < 1.0))
            throw std::invalid_argument("BoundaryPoint: corner or off-boundary coordinates");
        return BoundaryPoint{2, y == 0.0 ? Side::y0 : Side::y1, x, x};
    }
    throw std::invalid_argument("BoundaryPoint: (x,y) is not on the boundary of the unit square");
}

std::string BoundaryPoint::describe() const {
    std::ostringstream out;
    if (dim == 1) {
        out << "x=" << (side == Side::x0 ? 0 : 1);
        return out.str();
    }
    const Point p = location();
    out << "(" << p.x << "," << p.y << ")";
    if (offset != requested_offset) out << " [requested offset " << requested_offset << "]";
    return out.str();
}

}  // namespace randsrc
