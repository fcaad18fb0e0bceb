#pragma once

// Anchor-cell scoring and selection.

#include "invoronoi/tessellation.hpp"

#include <cstdint>
#include <stdexcept>
#include <variant>

namespace invoronoi {

class NoAnchorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AnchorScore {
    CellId cell = 0;
    bool eligible = false;
    std::size_t degree = 0;
    double min_edge_ratio = 0.0;           ///< shortest ridge / longest ridge
    double max_pairwise_parallelism = 1.0; ///< max over ridge pairs of 1 - |sin|
    double centrality = 1.0;               ///< centroid distance to the window center, in [0, 1]
    double composite = 0.0;
    std::size_t ring_pairs = 0;
};

/// A cell is on the outer hull when it is unbounded or owns a ray ridge.
bool on_outer_hull(const Tessellation& t, CellId c);

/// Hard criteria: bounded, off the hull, two non-parallel ridges, >= 2 ring pairs.
AnchorScore score_cell(const Tessellation& t, CellId c);

/// Composite weighting of the soft criteria; exposed for monotonicity tests.
double composite_score(double min_edge_ratio, double centrality, std::size_t degree, double angle_spread);

struct BestScore {};
struct RandomEligible {
    std::uint64_t seed = 0;
};
using AnchorPolicy = std::variant<BestScore, RandomEligible>;

/// Throws NoAnchorError when no cell is eligible.
CellId select_anchor(const Tessellation& t, const AnchorPolicy& policy);

} // namespace invoronoi
