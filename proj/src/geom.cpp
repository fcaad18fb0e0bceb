#include "invoronoi/geom.hpp"

#include <cstdio>

namespace invoronoi {

namespace {

std::string format_sine(double sine)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", sine);
    return buf;
}

} // namespace

NoIntersectionError::NoIntersectionError(double sine)
    : std::runtime_error("lines are parallel (|sin| = " + format_sine(sine) + ")"), sine_(sine)
{}

UnitVec2 UnitVec2::normalize(double x, double y)
{
    const double len = std::hypot(x, y);
    if (!std::isfinite(len) || len == 0.0)
        throw std::invalid_argument("cannot normalize a zero or non-finite vector");
    return UnitVec2{x / len, y / len};
}

UnitVec2 UnitVec2::checked(double x, double y)
{
    if (!std::isfinite(x) || !std::isfinite(y) || std::abs(x * x + y * y - 1.0) > 1e-12)
        throw std::invalid_argument("direction is not unit length");
    return UnitVec2{x, y};
}

UnitVec2 UnitVec2::rotated(double radians) const
{
    const double c = std::cos(radians);
    const double s = std::sin(radians);
    return normalize(c * x_ - s * y_, s * x_ + c * y_);
}

bool RidgeLine::same_line(const RidgeLine& other, double tol) const noexcept
{
    return std::abs(cross(dir, other.dir)) <= tol && distance_to(other.anchor) <= tol;
}

Reflector2 reflector_from_dir(UnitVec2 dir)
{
    const double x = dir.x();
    const double y = dir.y();
    if (std::abs(x * x + y * y - 1.0) > 1e-12)
        throw std::invalid_argument("reflector direction is not unit length");
    return {2.0 * x * x - 1.0, 2.0 * x * y, 2.0 * x * y, 2.0 * y * y - 1.0};
}

Point2 reflect_point(Point2 p, const RidgeLine& line) noexcept
{
    // p minus twice its signed offset along the normal. Extended precision keeps
    // the result within an ulp or so even when the anchor is far from p.
    using L = long double;
    const L tx = line.dir.x(), ty = line.dir.y();
    const L wx = L(p.x) - L(line.anchor.x), wy = L(p.y) - L(line.anchor.y);
    const L s = 2.0L * (tx * wy - ty * wx) / (tx * tx + ty * ty);
    return {static_cast<double>(L(p.x) + s * ty), static_cast<double>(L(p.y) - s * tx)};
}

RidgeLine line_from_two_points(Point2 a, Point2 b, double scale)
{
    const Point2 d = b - a;
    const double len = norm(d);
    if (!(len > kDegenerateRelative * scale))
        throw DegenerateRidgeError("ridge endpoints " + to_string(a) + " and " + to_string(b) + " coincide");
    return {a, UnitVec2::normalize(d)};
}

Point2 intersect_lines(const RidgeLine& l1, const RidgeLine& l2)
{
    const double s = cross(l1.dir, l2.dir);
    if (std::abs(s) <= kParallelThreshold)
        throw NoIntersectionError(s);
    // anchor1 + t dir1 lies on l2.
    const double t = cross(l2.anchor - l1.anchor, l2.dir.vec()) / s;
    return l1.anchor + t * l1.dir.vec();
}

std::string to_string(Point2 p)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, "(%.17g, %.17g)", p.x, p.y);
    return buf;
}

} // namespace invoronoi
