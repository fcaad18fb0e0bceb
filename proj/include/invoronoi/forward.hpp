#pragma once

// Ground-truth generation: random sites and their exact Voronoi tessellation.

#include "invoronoi/tessellation.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace invoronoi {

class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SiteSample {
    std::vector<Point2> points;
    double window = 0.0; ///< side length L of the square [0, L]^2
    std::uint64_t seed = 0;
};

struct BuiltDiagram {
    Tessellation tessellation;
    GroundTruth truth;
};

/// n i.i.d. uniform points on [0, sqrt(n)]^2 (a unit-rate Poisson process conditioned on n points).
/// Throws std::invalid_argument for n < 2.
SiteSample sample_sites(std::size_t n, std::uint64_t seed);

/// Voronoi tessellation of the sites, dualized from their Delaunay triangulation.
/// Cell i belongs to sites.points[i]. Throws ConstructionError on duplicate sites or
/// cocircular configurations that collapse a ridge.
BuiltDiagram build_voronoi(const SiteSample& sites);
BuiltDiagram build_voronoi(const std::vector<Point2>& sites);

/// Moves points involved in duplicate or >=4-cocircular configurations by at most `epsilon`
/// each; other points (and generic inputs) are returned untouched.
SiteSample jitter_degenerate(const SiteSample& sites, double epsilon);

/// sample -> jitter (eps = 1e-9 * L) -> build.
BuiltDiagram make_tessellation(std::size_t n, std::uint64_t seed);

/// Delaunay triangles as CCW vertex triples (exposed for tests).
std::vector<std::array<std::size_t, 3>> delaunay_triangles(const std::vector<Point2>& sites);

namespace predicates {

/// Sign of the orientation determinant of (a, b, c): >0 for a left turn. Exact.
int orient(Point2 a, Point2 b, Point2 c);
/// Sign of the incircle determinant: >0 when d lies inside the circle through CCW a, b, c. Exact.
int incircle(Point2 a, Point2 b, Point2 c, Point2 d);

} // namespace predicates

} // namespace invoronoi
