#pragma once

#include <cmath>

namespace manet {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(Point a, Point b) noexcept {
    return std::hypot(a.x - b.x, a.y - b.y);
}

inline Point lerp(Point a, Point b, double t) noexcept {
    return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
}

inline Point polar(Point center, double radius, double angle) noexcept {
    return {center.x + radius * std::cos(angle), center.y + radius * std::sin(angle)};
}

}  // namespace manet
