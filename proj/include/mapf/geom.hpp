#ifndef MAPF_GEOM_HPP
#define MAPF_GEOM_HPP

#include <cmath>

namespace mapf {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline bool operator==(const Point2& a, const Point2& b) {
    return a.x == b.x && a.y == b.y;
}

inline double distance(const Point2& a, const Point2& b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

}  // namespace mapf

#endif
