#pragma once

// Planar primitives: points, unit directions, lines and 2x2 reflectors.

#include <cmath>
#include <stdexcept>
#include <string>

namespace invoronoi {

/// Cross-product magnitude below which two unit directions count as parallel.
inline constexpr double kParallelThreshold = 1e-10;
/// A ridge shorter than this fraction of the diagram diameter is degenerate.
inline constexpr double kDegenerateRelative = 1e-12;

class DegenerateRidgeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoIntersectionError : public std::runtime_error {
public:
    explicit NoIntersectionError(double sine);
    double sine() const noexcept { return sine_; }

private:
    double sine_;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    bool is_finite() const noexcept { return std::isfinite(x) && std::isfinite(y); }

    friend constexpr Point2 operator+(Point2 a, Point2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point2 operator-(Point2 a, Point2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point2 operator*(double s, Point2 a) noexcept { return {s * a.x, s * a.y}; }
    friend constexpr Point2 operator*(Point2 a, double s) noexcept { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Point2 a, Point2 b) noexcept = default;
};

constexpr double dot(Point2 a, Point2 b) noexcept { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) noexcept { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) noexcept { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) noexcept { return norm(a - b); }
constexpr Point2 midpoint(Point2 a, Point2 b) noexcept { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

/// Direction of unit length. Construct through normalize() or checked().
class UnitVec2 {
public:
    /// Scales (x, y) to unit length; throws std::invalid_argument on a zero or non-finite vector.
    static UnitVec2 normalize(double x, double y);
    static UnitVec2 normalize(Point2 v) { return normalize(v.x, v.y); }
    /// Accepts (x, y) only if it is already unit length within 1e-12.
    static UnitVec2 checked(double x, double y);

    double x() const noexcept { return x_; }
    double y() const noexcept { return y_; }
    Point2 vec() const noexcept { return {x_, y_}; }
    UnitVec2 operator-() const noexcept { return UnitVec2{-x_, -y_}; }
    /// Counter-clockwise rotation by `radians`.
    UnitVec2 rotated(double radians) const;

    friend bool operator==(UnitVec2 a, UnitVec2 b) noexcept = default;

private:
    UnitVec2(double x, double y) noexcept : x_(x), y_(y) {}
    double x_;
    double y_;
};

inline double cross(UnitVec2 a, UnitVec2 b) noexcept { return a.x() * b.y() - a.y() * b.x(); }
inline bool parallel(UnitVec2 a, UnitVec2 b) noexcept { return std::abs(cross(a, b)) < kParallelThreshold; }

/// Infinite line through `anchor` with direction `dir`.
struct RidgeLine {
    Point2 anchor;
    UnitVec2 dir;

    double distance_to(Point2 p) const noexcept { return std::abs(cross(dir.vec(), p - anchor)); }
    /// Orthogonal projection of p onto the line.
    Point2 project(Point2 p) const noexcept { return anchor + dot(p - anchor, dir.vec()) * dir.vec(); }
    /// True when both describe the same point set (parallel and sharing a point), within `tol`.
    bool same_line(const RidgeLine& other, double tol = 1e-12) const noexcept;
};

/// Symmetric orthogonal 2x2 matrix with determinant -1.
struct Reflector2 {
    double m00, m01, m10, m11;

    Point2 apply(Point2 p) const noexcept { return {m00 * p.x + m01 * p.y, m10 * p.x + m11 * p.y}; }
    double det() const noexcept { return m00 * m11 - m01 * m10; }
};

/// R = 2 u u^T - I. Throws std::invalid_argument if `dir` is not unit length.
Reflector2 reflector_from_dir(UnitVec2 dir);

Point2 reflect_point(Point2 p, const RidgeLine& line) noexcept;

/// Line through a and b. `scale` is the diagram diameter used for the degeneracy cutoff.
RidgeLine line_from_two_points(Point2 a, Point2 b, double scale = 1.0);

/// Throws NoIntersectionError when |sin(angle)| <= kParallelThreshold.
Point2 intersect_lines(const RidgeLine& l1, const RidgeLine& l2);

std::string to_string(Point2 p);

} // namespace invoronoi
