#include "invoronoi/propagate.hpp"

#include <algorithm>
#include <limits>
#include <random>

namespace invoronoi {

namespace {

constexpr std::size_t kUnresolved = std::numeric_limits<std::size_t>::max();

std::string list_cells(const std::vector<CellId>& cells)
{
    std::string s;
    for (std::size_t i = 0; i < cells.size() && i < 20; ++i)
        s += (i ? ", " : "") + std::to_string(cells[i]);
    if (cells.size() > 20)
        s += ", ...";
    return s;
}

} // namespace

UnreachableCellsError::UnreachableCellsError(std::vector<CellId> cells)
    : std::runtime_error(std::to_string(cells.size()) + " cells unreachable from the patch: " + list_cells(cells)),
      cells_(std::move(cells))
{}

Point2 reflect_into(Point2 g_source, RidgeId ridge, const Tessellation& t)
{
    return reflect_point(g_source, t.ridge_line(ridge, t.diameter()));
}

Reconstruction reconstruct_all(const Tessellation& t, const PatchSolution& patch, const FrontierPolicy& frontier,
                               MergePolicy merge)
{
    return reconstruct_from(t, patch.generators, frontier, merge);
}

Reconstruction reconstruct_from(const Tessellation& t, const std::vector<std::pair<CellId, Point2>>& known,
                                const FrontierPolicy& frontier, MergePolicy merge)
{
    const std::size_t n = t.cell_count();
    const double scale = t.diameter();
    const auto box = t.bounding_box();

    Reconstruction out;
    out.generators.assign(n, Point2{0, 0});
    PropagationTrace& trace = out.trace;
    trace.layer_of.assign(n, kUnresolved);

    std::vector<CellId> layer;
    for (const auto& [cell, g] : known) {
        if (trace.layer_of.at(cell) != kUnresolved)
            continue;
        out.generators[cell] = g;
        trace.layer_of[cell] = 0;
        layer.push_back(cell);
    }

    std::mt19937_64 rng(std::holds_alternative<RandomFrontier>(frontier) ? std::get<RandomFrontier>(frontier).seed : 0);
    std::size_t candidate_total = 0;

    struct Candidate {
        CellId source;
        RidgeId ridge;
    };
    std::vector<CellId> next;
    std::vector<Candidate> cands;
    std::vector<Point2> images;
    std::vector<char> queued(n, 0);
    std::vector<std::size_t> layer_pos(n, 0);

    for (std::size_t depth = 1; !layer.empty(); ++depth) {
        // Discover the next layer in a fixed order: current layer order, then CCW ridge order.
        next.clear();
        for (std::size_t i = 0; i < layer.size(); ++i)
            layer_pos[layer[i]] = i;
        for (CellId c : layer)
            for (RidgeId r : t.cells[c].ridges) {
                const CellId d = t.ridges[r].other(c);
                if (trace.layer_of[d] == kUnresolved && !queued[d]) {
                    queued[d] = 1;
                    next.push_back(d);
                }
            }
        if (next.empty())
            break;
        trace.depth = depth;

        for (CellId d : next) {
            cands.clear();
            for (RidgeId r : t.cells[d].ridges) {
                const CellId s = t.ridges[r].other(d);
                if (trace.layer_of[s] == depth - 1)
                    cands.push_back({s, r});
            }
            // First discoverer leads for first_available: it is the earliest source in layer order.
            std::stable_sort(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
                return layer_pos[a.source] < layer_pos[b.source];
            });
            candidate_total += cands.size();
            trace.max_candidates = std::max(trace.max_candidates, cands.size());

            images.clear();
            if (merge == MergePolicy::ridge_length_weighted_mean || cands.size() > 1) {
                for (const Candidate& cd : cands)
                    images.push_back(reflect_point(out.generators[cd.source], t.ridge_line(cd.ridge, scale)));
                trace.reflections += cands.size();
                for (std::size_t i = 0; i < images.size(); ++i)
                    for (std::size_t j = i + 1; j < images.size(); ++j)
                        trace.max_candidate_spread = std::max(trace.max_candidate_spread, distance(images[i], images[j]));
            }

            std::size_t pick = 0;
            if (std::holds_alternative<RandomFrontier>(frontier) && cands.size() > 1) {
                pick = static_cast<std::size_t>(rng() % cands.size());
            } else if (std::holds_alternative<LongestRidge>(frontier)) {
                double best = -1.0;
                for (std::size_t i = 0; i < cands.size(); ++i) {
                    const double len = t.clipped_ridge_length(cands[i].ridge, box);
                    if (len > best) {
                        best = len;
                        pick = i;
                    }
                }
            }

            Point2 g;
            if (merge == MergePolicy::ridge_length_weighted_mean) {
                double wsum = 0.0;
                Point2 acc{0, 0};
                for (std::size_t i = 0; i < cands.size(); ++i) {
                    const double w = t.clipped_ridge_length(cands[i].ridge, box);
                    wsum += w;
                    acc = acc + w * images[i];
                }
                if (wsum > 0.0) {
                    g = (1.0 / wsum) * acc;
                } else {
                    acc = Point2{0, 0};
                    for (const Point2& im : images)
                        acc = acc + im;
                    g = (1.0 / static_cast<double>(images.size())) * acc;
                }
            } else if (!images.empty()) {
                g = images[pick];
            } else {
                g = reflect_point(out.generators[cands[pick].source], t.ridge_line(cands[pick].ridge, scale));
                ++trace.reflections;
            }
            out.generators[d] = g;
            trace.order.push_back({d, cands[pick].source, cands[pick].ridge});
        }
        for (CellId d : next)
            trace.layer_of[d] = depth;
        layer.swap(next);
    }

    std::vector<CellId> missing;
    for (CellId c = 0; c < n; ++c)
        if (trace.layer_of[c] == kUnresolved)
            missing.push_back(c);
    if (!missing.empty())
        throw UnreachableCellsError(std::move(missing));
    trace.mean_candidates = trace.order.empty() ? 0.0 : static_cast<double>(candidate_total) / trace.order.size();
    return out;
}

} // namespace invoronoi
