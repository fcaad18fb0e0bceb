#pragma once

// Reference reconstructions: per-cell patch solves and the C' angle-rotation method.

#include "invoronoi/tessellation.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

namespace invoronoi {

class UnderdeterminedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BruteForceEntry {
    CellId cell;
    Point2 generator;
    double residual;   ///< residual norm of the cell's own solve; NaN when filled by reflection
    bool solved;       ///< false for cells filled by reflection from a solved neighbor
    bool consistent;   ///< own solve passed the Voronoi-consistency check (true when not solved)
};

/// Every eligible cell is solved as its own anchor and keeps only its own generator.
/// Remaining cells get one reflection from the nearest solved neighbor.
/// Throws NoAnchorError when nothing could be solved.
std::vector<BruteForceEntry> brute_force_all(const Tessellation& t);

/// One generator-passing ray built at a cell corner.
struct CPrimeRay {
    VertexId corner;
    Point2 origin;
    UnitVec2 dir;
    double alpha; ///< signed rotation applied to the extended outer ridge, radians
};

struct CPrimeEstimate {
    CellId cell = 0;
    std::vector<CPrimeRay> rays;
    std::size_t ray_pairs_used = 0;
    std::vector<Point2> raw_intersections;
    std::vector<double> deltas;  ///< intersection displacement under slope perturbation, per pair
    std::vector<double> weights; ///< non-negative, sum to 1
    Point2 estimate;
};

inline constexpr double kDefaultPerturbation = 1e-7;

/// Vertex -> incident ridges, shared across many C' evaluations.
std::vector<std::vector<RidgeId>> vertex_ridges(const Tessellation& t);

/// C' estimate for a bounded cell. Throws UnderdeterminedError when fewer than two
/// non-parallel generator rays exist, std::invalid_argument for an unbounded cell.
CPrimeEstimate c_prime_cell(const Tessellation& t, CellId c, double perturb_eps = kDefaultPerturbation);
CPrimeEstimate c_prime_cell(const Tessellation& t, const std::vector<std::vector<RidgeId>>& incidence, CellId c,
                            double perturb_eps);

/// C' for every bounded cell; the rest are filled by reflection from estimated neighbors.
std::vector<Point2> c_prime_all(const Tessellation& t, double perturb_eps = kDefaultPerturbation);

} // namespace invoronoi
