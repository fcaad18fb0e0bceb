#include "invoronoi/baselines.hpp"

#include "invoronoi/anchor.hpp"
#include "invoronoi/propagate.hpp"
#include "invoronoi/solver.hpp"

#include <algorithm>
#include <cmath>

namespace invoronoi {

std::vector<BruteForceEntry> brute_force_all(const Tessellation& t)
{
    const std::size_t n = t.cell_count();
    std::vector<std::pair<CellId, Point2>> solved;
    std::vector<double> residual(n, std::numeric_limits<double>::quiet_NaN());
    std::vector<char> consistent(n, 1);
    for (CellId c = 0; c < n; ++c) {
        if (!score_cell(t, c).eligible)
            continue;
        try {
            const PatchSolution sol = solve_patch(assemble_patch(t, c));
            solved.emplace_back(c, sol.generators.front().second);
            residual[c] = sol.residual_norm;
            consistent[c] = sol.consistent();
        } catch (const SingularSystemError&) {
            // left for the reflection fill
        }
    }
    if (solved.empty())
        throw NoAnchorError("brute force: no cell could be solved as an anchor");

    const Reconstruction filled = reconstruct_from(t, solved, FirstAvailable{}, MergePolicy::first_wins);
    std::vector<BruteForceEntry> out;
    out.reserve(n);
    for (CellId c = 0; c < n; ++c)
        out.push_back({c, filled.generators[c], residual[c], !std::isnan(residual[c]), consistent[c] != 0});
    return out;
}

std::vector<std::vector<RidgeId>> vertex_ridges(const Tessellation& t)
{
    std::vector<std::vector<RidgeId>> inc(t.vertices.size());
    for (RidgeId r = 0; r < t.ridges.size(); ++r) {
        const Ridge& ridge = t.ridges[r];
        if (const auto* f = std::get_if<FiniteRidge>(&ridge.geometry)) {
            inc[f->v0].push_back(r);
            inc[f->v1].push_back(r);
        } else {
            inc[std::get<RayRidge>(ridge.geometry).v0].push_back(r);
        }
    }
    return inc;
}

namespace {

VertexId far_end(const Ridge& r, VertexId v)
{
    const auto& f = std::get<FiniteRidge>(r.geometry);
    return f.v0 == v ? f.v1 : f.v0;
}

VertexId shared_vertex(const Ridge& a, const Ridge& b)
{
    const auto& fa = std::get<FiniteRidge>(a.geometry);
    const auto& fb = std::get<FiniteRidge>(b.geometry);
    if (fa.v0 == fb.v0 || fa.v0 == fb.v1)
        return fa.v0;
    return fa.v1;
}

Point2 intersect_rays(const CPrimeRay& a, const CPrimeRay& b)
{
    return intersect_lines({a.origin, a.dir}, {b.origin, b.dir});
}

} // namespace

CPrimeEstimate c_prime_cell(const Tessellation& t, CellId c, double perturb_eps)
{
    return c_prime_cell(t, vertex_ridges(t), c, perturb_eps);
}

CPrimeEstimate c_prime_cell(const Tessellation& t, const std::vector<std::vector<RidgeId>>& incidence, CellId c,
                            double perturb_eps)
{
    const Cell& cell = t.cells.at(c);
    if (!cell.bounded)
        throw std::invalid_argument("C' needs a bounded cell");
    CPrimeEstimate est;
    est.cell = c;

    const std::size_t m = cell.ridges.size();
    for (std::size_t i = 0; i < m; ++i) {
        const RidgeId side_b = cell.ridges[i];
        const RidgeId side_c = cell.ridges[(i + 1) % m];
        const VertexId a = shared_vertex(t.ridges[side_b], t.ridges[side_c]);
        const auto& at_a = incidence.at(a);
        if (at_a.size() != 3)
            continue;
        RidgeId outer = at_a[0];
        for (RidgeId r : at_a)
            if (r != side_b && r != side_c)
                outer = r;

        const Point2 A = t.vertices[a];
        // Extension of the outer ridge through A into the cell.
        UnitVec2 z = UnitVec2::normalize(1.0, 0.0);
        try {
            if (const auto* f = std::get_if<FiniteRidge>(&t.ridges[outer].geometry))
                z = UnitVec2::normalize(A - t.vertices[f->v0 == a ? f->v1 : f->v0]);
            else
                z = -std::get<RayRidge>(t.ridges[outer].geometry).dir;
            const UnitVec2 toward_b = UnitVec2::normalize(t.vertices[far_end(t.ridges[side_b], a)] - A);
            const UnitVec2 toward_c = UnitVec2::normalize(t.vertices[far_end(t.ridges[side_c], a)] - A);
            // Rotating AZ by alpha = angle(AZ, AC) - angle(AB, AZ) mirrors it across the
            // bisector of the corner; the result passes through the generator.
            const UnitVec2 w = UnitVec2::normalize(toward_b.vec() + toward_c.vec());
            const Point2 zr = 2.0 * dot(w.vec(), z.vec()) * w.vec() - z.vec();
            const UnitVec2 dir = UnitVec2::normalize(zr);
            const double alpha = std::atan2(cross(z, dir), dot(z.vec(), dir.vec()));
            est.rays.push_back({a, A, dir, alpha});
        } catch (const std::invalid_argument&) {
            // zero-length direction: corner unusable
        }
    }

    for (std::size_t i = 0; i < est.rays.size(); ++i) {
        for (std::size_t j = i + 1; j < est.rays.size(); ++j) {
            const CPrimeRay& ri = est.rays[i];
            const CPrimeRay& rj = est.rays[j];
            if (std::abs(cross(ri.dir, rj.dir)) <= kParallelThreshold)
                continue;
            const Point2 x = intersect_rays(ri, rj);
            double delta = 0.0;
            if (perturb_eps > 0.0) {
                for (const double sgn : {1.0, -1.0}) {
                    CPrimeRay pi = ri;
                    pi.dir = ri.dir.rotated(sgn * perturb_eps);
                    CPrimeRay pj = rj;
                    pj.dir = rj.dir.rotated(sgn * perturb_eps);
                    try {
                        delta = std::max(delta, distance(intersect_rays(pi, rj), x));
                        delta = std::max(delta, distance(intersect_rays(ri, pj), x));
                    } catch (const NoIntersectionError&) {
                        delta = std::numeric_limits<double>::infinity();
                    }
                }
            }
            est.raw_intersections.push_back(x);
            est.deltas.push_back(delta);
        }
    }
    est.ray_pairs_used = est.raw_intersections.size();
    if (est.ray_pairs_used == 0)
        throw UnderdeterminedError("cell " + std::to_string(c) + " has fewer than two non-parallel generator rays");

    // Inverse-displacement weights; insensitive pairs (delta = 0) are capped at 10x the mean.
    std::vector<double> raw(est.deltas.size(), 0.0);
    double sum_pos = 0.0;
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < raw.size(); ++i)
        if (est.deltas[i] > 0.0) {
            raw[i] = std::isfinite(est.deltas[i]) ? 1.0 / est.deltas[i] : 0.0;
            sum_pos += raw[i];
            ++n_pos;
        }
    if (n_pos == 0 || sum_pos == 0.0) {
        std::fill(raw.begin(), raw.end(), 1.0);
    } else {
        const double cap = 10.0 * sum_pos / static_cast<double>(n_pos);
        for (std::size_t i = 0; i < raw.size(); ++i)
            if (est.deltas[i] == 0.0)
                raw[i] = cap;
    }
    double total = 0.0;
    for (double r : raw)
        total += r;
    Point2 acc{0, 0};
    for (std::size_t i = 0; i < raw.size(); ++i) {
        est.weights.push_back(raw[i] / total);
        acc = acc + est.weights.back() * est.raw_intersections[i];
    }
    est.estimate = acc;
    return est;
}

std::vector<Point2> c_prime_all(const Tessellation& t, double perturb_eps)
{
    const auto incidence = vertex_ridges(t);
    std::vector<std::pair<CellId, Point2>> known;
    for (CellId c = 0; c < t.cell_count(); ++c) {
        if (!t.cells[c].bounded)
            continue;
        try {
            known.emplace_back(c, c_prime_cell(t, incidence, c, perturb_eps).estimate);
        } catch (const UnderdeterminedError&) {
        }
    }
    if (known.empty())
        throw UnderdeterminedError("C': no bounded cell could be estimated");
    return reconstruct_from(t, known, FirstAvailable{}, MergePolicy::first_wins).generators;
}

} // namespace invoronoi
