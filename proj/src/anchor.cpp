#include "invoronoi/anchor.hpp"

#include <algorithm>
#include <random>

namespace invoronoi {

bool on_outer_hull(const Tessellation& t, CellId c)
{
    const Cell& cell = t.cells.at(c);
    if (!cell.bounded)
        return true;
    return std::any_of(cell.ridges.begin(), cell.ridges.end(),
                       [&](RidgeId r) { return !t.ridges.at(r).is_finite(); });
}

double composite_score(double min_edge_ratio, double centrality, std::size_t degree, double angle_spread)
{
    const double degree_band = (degree >= 4 && degree <= 7) ? 1.0 : 0.5;
    return 0.4 * min_edge_ratio + 0.3 * (1.0 - centrality) + 0.2 * degree_band + 0.1 * angle_spread;
}

namespace {

AnchorScore score_with_box(const Tessellation& t, CellId c, const std::array<Point2, 2>& box, double scale)
{
    AnchorScore s;
    s.cell = c;
    const Cell& cell = t.cells.at(c);
    s.degree = cell.ridges.size();
    if (on_outer_hull(t, c) || s.degree < 3)
        return s;

    std::vector<UnitVec2> dirs;
    double shortest = std::numeric_limits<double>::infinity();
    double longest = 0.0;
    Point2 centroid{0, 0};
    for (RidgeId r : cell.ridges) {
        const double len = t.ridge_length(r);
        shortest = std::min(shortest, len);
        longest = std::max(longest, len);
        centroid = centroid + t.ridge_point(r);
        try {
            dirs.push_back(t.ridge_line(r, scale).dir);
        } catch (const DegenerateRidgeError&) {
            return s;
        }
    }
    centroid = (1.0 / static_cast<double>(cell.ridges.size())) * centroid;
    s.min_edge_ratio = longest > 0.0 ? shortest / longest : 0.0;

    double min_sin = 1.0;
    bool non_parallel = false;
    for (std::size_t i = 0; i < dirs.size(); ++i)
        for (std::size_t j = i + 1; j < dirs.size(); ++j) {
            const double sn = std::abs(cross(dirs[i], dirs[j]));
            min_sin = std::min(min_sin, sn);
            non_parallel = non_parallel || sn > kParallelThreshold;
        }
    s.max_pairwise_parallelism = 1.0 - min_sin;

    const Point2 center = midpoint(box[0], box[1]);
    const double half_diag = 0.5 * distance(box[0], box[1]);
    s.centrality = half_diag > 0.0 ? std::min(1.0, distance(centroid, center) / half_diag) : 0.0;

    s.ring_pairs = ring_pairs(t, c).size();
    s.eligible = non_parallel && s.ring_pairs >= 2;
    s.composite = composite_score(s.min_edge_ratio, s.centrality, s.degree, min_sin);
    return s;
}

} // namespace

AnchorScore score_cell(const Tessellation& t, CellId c)
{
    return score_with_box(t, c, t.bounding_box(), t.diameter());
}

CellId select_anchor(const Tessellation& t, const AnchorPolicy& policy)
{
    const auto box = t.bounding_box();
    const double scale = t.diameter();
    std::vector<AnchorScore> eligible;
    for (CellId c = 0; c < t.cell_count(); ++c) {
        if (!t.cells[c].bounded)
            continue;
        AnchorScore s = score_with_box(t, c, box, scale);
        if (s.eligible)
            eligible.push_back(s);
    }
    if (eligible.empty())
        throw NoAnchorError("no eligible anchor cell among " + std::to_string(t.cell_count()) + " cells");

    if (const auto* r = std::get_if<RandomEligible>(&policy)) {
        std::mt19937_64 rng(r->seed);
        // Unbiased index draw without relying on library distribution details.
        const std::uint64_t m = eligible.size();
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % m;
        std::uint64_t x;
        do
            x = rng();
        while (x >= limit);
        return eligible[x % m].cell;
    }
    const auto best = std::max_element(eligible.begin(), eligible.end(), [](const AnchorScore& a, const AnchorScore& b) {
        if (a.composite != b.composite)
            return a.composite < b.composite;
        return a.cell > b.cell; // ties go to the lowest id
    });
    return best->cell;
}

} // namespace invoronoi
