#pragma once

// Breadth-first reflection of known generators into the rest of the diagram.

#include "invoronoi/solver.hpp"
#include "invoronoi/tessellation.hpp"

#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

namespace invoronoi {

class UnreachableCellsError : public std::runtime_error {
public:
    explicit UnreachableCellsError(std::vector<CellId> cells);
    const std::vector<CellId>& cells() const noexcept { return cells_; }

private:
    std::vector<CellId> cells_;
};

struct FirstAvailable {};
struct RandomFrontier {
    std::uint64_t seed = 0;
};
struct LongestRidge {};
/// Which resolved neighbor supplies a cell's generator under MergePolicy::first_wins.
using FrontierPolicy = std::variant<FirstAvailable, RandomFrontier, LongestRidge>;

enum class MergePolicy {
    first_wins,
    ridge_length_weighted_mean,
};

struct PropagationStep {
    CellId cell;
    CellId source;
    RidgeId ridge;
};

struct PropagationTrace {
    std::vector<PropagationStep> order; ///< one entry per non-patch cell, in resolution order
    std::size_t depth = 0;              ///< BFS layers expanded beyond the patch
    std::vector<std::size_t> layer_of;  ///< per cell; 0 for patch cells
    std::size_t max_candidates = 0;
    double mean_candidates = 0.0;
    /// Largest pairwise distance between candidate reflections for one cell.
    double max_candidate_spread = 0.0;
    std::size_t reflections = 0;
};

struct Reconstruction {
    std::vector<Point2> generators; ///< indexed by CellId
    PropagationTrace trace;
};

/// Mirror image of g_source across the line carrying `ridge`.
Point2 reflect_into(Point2 g_source, RidgeId ridge, const Tessellation& t);

/// Seeds with the patch and reflects outward layer by layer until every cell has
/// exactly one generator. Throws UnreachableCellsError if the adjacency graph is
/// disconnected from the patch.
Reconstruction reconstruct_all(const Tessellation& t, const PatchSolution& patch, const FrontierPolicy& frontier,
                               MergePolicy merge);

/// Same, starting from an arbitrary set of known generators.
Reconstruction reconstruct_from(const Tessellation& t, const std::vector<std::pair<CellId, Point2>>& known,
                                const FrontierPolicy& frontier, MergePolicy merge);

} // namespace invoronoi
