#include "invoronoi/tessellation.hpp"

#include <algorithm>
#include <limits>

namespace invoronoi {

namespace {

// Parametric clip of p + s*d, s in [s0, s1], against an axis-aligned box (Liang-Barsky).
double clipped_length(Point2 p, Point2 d, double s0, double s1, const std::array<Point2, 2>& box)
{
    const double lo[2] = {box[0].x, box[0].y};
    const double hi[2] = {box[1].x, box[1].y};
    const double pp[2] = {p.x, p.y};
    const double dd[2] = {d.x, d.y};
    for (int axis = 0; axis < 2; ++axis) {
        if (dd[axis] == 0.0) {
            if (pp[axis] < lo[axis] || pp[axis] > hi[axis])
                return 0.0;
            continue;
        }
        double a = (lo[axis] - pp[axis]) / dd[axis];
        double b = (hi[axis] - pp[axis]) / dd[axis];
        if (a > b)
            std::swap(a, b);
        s0 = std::max(s0, a);
        s1 = std::min(s1, b);
        if (s0 >= s1)
            return 0.0;
    }
    return (s1 - s0) * norm(d);
}

std::vector<VertexId> ridge_vertices(const Ridge& r)
{
    if (const auto* f = std::get_if<FiniteRidge>(&r.geometry))
        return {f->v0, f->v1};
    return {std::get<RayRidge>(r.geometry).v0};
}

} // namespace

RidgeLine Tessellation::ridge_line(RidgeId r, double scale) const
{
    const Ridge& ridge = ridges.at(r);
    if (const auto* f = std::get_if<FiniteRidge>(&ridge.geometry))
        return line_from_two_points(vertices.at(f->v0), vertices.at(f->v1), scale);
    const auto& ray = std::get<RayRidge>(ridge.geometry);
    return {vertices.at(ray.v0), ray.dir};
}

Point2 Tessellation::ridge_point(RidgeId r) const
{
    const Ridge& ridge = ridges.at(r);
    if (const auto* f = std::get_if<FiniteRidge>(&ridge.geometry))
        return midpoint(vertices.at(f->v0), vertices.at(f->v1));
    return vertices.at(std::get<RayRidge>(ridge.geometry).v0);
}

double Tessellation::ridge_length(RidgeId r) const
{
    const Ridge& ridge = ridges.at(r);
    if (const auto* f = std::get_if<FiniteRidge>(&ridge.geometry))
        return distance(vertices.at(f->v0), vertices.at(f->v1));
    return std::numeric_limits<double>::infinity();
}

double Tessellation::clipped_ridge_length(RidgeId r, const std::array<Point2, 2>& box) const
{
    const Ridge& ridge = ridges.at(r);
    if (const auto* f = std::get_if<FiniteRidge>(&ridge.geometry)) {
        const Point2 a = vertices.at(f->v0);
        return clipped_length(a, vertices.at(f->v1) - a, 0.0, 1.0, box);
    }
    const auto& ray = std::get<RayRidge>(ridge.geometry);
    return clipped_length(vertices.at(ray.v0), ray.dir.vec(), 0.0, std::numeric_limits<double>::infinity(), box);
}

std::array<Point2, 2> Tessellation::bounding_box() const
{
    if (vertices.empty())
        return {Point2{0, 0}, Point2{0, 0}};
    std::vector<char> outer(vertices.size(), 0);
    for (const Cell& c : cells) {
        if (c.bounded)
            continue;
        for (RidgeId r : c.ridges) {
            if (r >= ridges.size())
                continue;
            const Ridge& ridge = ridges[r];
            if (const auto* f = std::get_if<FiniteRidge>(&ridge.geometry)) {
                if (f->v0 < outer.size())
                    outer[f->v0] = 1;
                if (f->v1 < outer.size())
                    outer[f->v1] = 1;
            } else if (const VertexId v = std::get<RayRidge>(ridge.geometry).v0; v < outer.size()) {
                outer[v] = 1;
            }
        }
    }
    const bool any_inner = std::find(outer.begin(), outer.end(), 0) != outer.end();
    Point2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Point2 hi = -1.0 * lo;
    for (VertexId i = 0; i < vertices.size(); ++i) {
        if (any_inner && outer[i])
            continue;
        lo = {std::min(lo.x, vertices[i].x), std::min(lo.y, vertices[i].y)};
        hi = {std::max(hi.x, vertices[i].x), std::max(hi.y, vertices[i].y)};
    }
    return {lo, hi};
}

double Tessellation::diameter() const
{
    const auto box = bounding_box();
    const double d = distance(box[0], box[1]);
    return d > 0.0 ? d : 1.0;
}

std::optional<RidgeId> Tessellation::shared_ridge(CellId a, CellId b) const
{
    for (RidgeId r : cells.at(a).ridges)
        if (ridges.at(r).touches(b) && ridges[r].other(a) == b)
            return r;
    return std::nullopt;
}

std::vector<std::size_t> vertex_valences(const Tessellation& t)
{
    std::vector<std::size_t> valence(t.vertices.size(), 0);
    for (const Ridge& r : t.ridges)
        for (VertexId v : ridge_vertices(r))
            if (v < valence.size())
                ++valence[v];
    return valence;
}

std::vector<std::string> validate(const Tessellation& t)
{
    std::vector<std::string> out;
    const std::size_t nv = t.vertices.size();
    const std::size_t nr = t.ridges.size();
    const std::size_t nc = t.cells.size();
    const double scale = t.diameter();

    for (VertexId v = 0; v < nv; ++v)
        if (!t.vertices[v].is_finite())
            out.push_back("non-finite vertex " + std::to_string(v));

    std::vector<bool> ridge_ok(nr, true);
    for (RidgeId k = 0; k < nr; ++k) {
        const Ridge& r = t.ridges[k];
        const std::string id = std::to_string(k);
        if (r.cells[0] >= nc || r.cells[1] >= nc) {
            out.push_back("ridge " + id + " references a missing cell");
            ridge_ok[k] = false;
            continue;
        }
        if (r.cells[0] == r.cells[1])
            out.push_back("ridge " + id + " joins cell " + std::to_string(r.cells[0]) + " to itself");
        bool in_range = true;
        for (VertexId v : ridge_vertices(r))
            in_range = in_range && v < nv;
        if (!in_range) {
            out.push_back("ridge " + id + " references a missing vertex");
            ridge_ok[k] = false;
            continue;
        }
        if (const auto* f = std::get_if<FiniteRidge>(&r.geometry)) {
            if (f->v0 == f->v1 || !(distance(t.vertices[f->v0], t.vertices[f->v1]) > kDegenerateRelative * scale)) {
                out.push_back("degenerate ridge " + id);
                ridge_ok[k] = false;
            }
        }
    }

    std::vector<std::size_t> listed(nr, 0);
    for (CellId c = 0; c < nc; ++c) {
        for (RidgeId k : t.cells[c].ridges) {
            if (k >= nr) {
                out.push_back("cell " + std::to_string(c) + " lists missing ridge " + std::to_string(k));
                continue;
            }
            ++listed[k];
            if (!t.ridges[k].touches(c))
                out.push_back("cell " + std::to_string(c) + " lists ridge " + std::to_string(k) +
                              " which does not border it");
        }
    }
    for (RidgeId k = 0; k < nr; ++k) {
        const Ridge& r = t.ridges[k];
        if (listed[k] == 0) {
            out.push_back("orphan ridge " + std::to_string(k));
            continue;
        }
        if (r.cells[0] >= nc || r.cells[1] >= nc)
            continue;
        const auto& l0 = t.cells[r.cells[0]].ridges;
        const auto& l1 = t.cells[r.cells[1]].ridges;
        if (std::count(l0.begin(), l0.end(), k) != 1 || std::count(l1.begin(), l1.end(), k) != 1)
            out.push_back("asymmetric adjacency at ridge " + std::to_string(k));
    }

    const auto valence = vertex_valences(t);
    for (VertexId v = 0; v < nv; ++v) {
        if (valence[v] == 0)
            out.push_back("orphan vertex " + std::to_string(v));
        else if (valence[v] != 3)
            out.push_back("non-generic vertex " + std::to_string(v) + " (valence " + std::to_string(valence[v]) + ")");
    }

    for (CellId c = 0; c < nc; ++c) {
        const Cell& cell = t.cells[c];
        const std::string id = std::to_string(c);
        const auto& rs = cell.ridges;
        if (std::any_of(rs.begin(), rs.end(), [&](RidgeId k) { return k >= nr || !ridge_ok[k]; }))
            continue;
        const auto n_rays = std::count_if(rs.begin(), rs.end(), [&](RidgeId k) { return !t.ridges[k].is_finite(); });
        if (cell.bounded) {
            if (n_rays > 0) {
                out.push_back("bounded cell " + id + " has a ray ridge");
                continue;
            }
            if (rs.size() < 3) {
                out.push_back("bounded cell " + id + " is not a closed polygon");
                continue;
            }
        } else if (n_rays != 2 || t.ridges[rs.front()].is_finite() || t.ridges[rs.back()].is_finite()) {
            out.push_back("unbounded cell " + id + " must start and end with its two ray ridges");
            continue;
        }

        // Walk the boundary: consecutive ridges must share exactly one vertex.
        const std::size_t m = rs.size();
        const std::size_t links = cell.bounded ? m : m - 1;
        std::vector<VertexId> corner;
        bool closed = true;
        for (std::size_t i = 0; i < links; ++i) {
            const auto a = ridge_vertices(t.ridges[rs[i]]);
            const auto b = ridge_vertices(t.ridges[rs[(i + 1) % m]]);
            std::vector<VertexId> common;
            for (VertexId va : a)
                if (std::find(b.begin(), b.end(), va) != b.end())
                    common.push_back(va);
            if (common.size() != 1) {
                closed = false;
                break;
            }
            corner.push_back(common.front());
        }
        if (!closed) {
            out.push_back(std::string(cell.bounded ? "bounded" : "unbounded") + " cell " + id +
                          (cell.bounded ? " is not a closed polygon" : " has a broken ridge chain"));
            continue;
        }
        if (!cell.bounded)
            continue;
        // corner[i] joins ridge i to ridge i+1; the polygon runs corner[m-1], corner[0], corner[1], ...
        for (std::size_t i = 0; i < m; ++i) {
            const Point2 p0 = t.vertices[corner[(i + m - 1) % m]];
            const Point2 p1 = t.vertices[corner[i]];
            const Point2 p2 = t.vertices[corner[(i + 1) % m]];
            const Point2 e1 = p1 - p0;
            const Point2 e2 = p2 - p1;
            if (!(cross(e1, e2) > -1e-12 * norm(e1) * norm(e2))) {
                out.push_back("bounded cell " + id + " is not a counter-clockwise convex polygon");
                break;
            }
        }
    }
    return out;
}

std::vector<Neighbor> neighbors(const Tessellation& t, CellId c)
{
    std::vector<Neighbor> out;
    const Cell& cell = t.cells.at(c);
    out.reserve(cell.ridges.size());
    for (RidgeId r : cell.ridges)
        out.push_back({t.ridges.at(r).other(c), r});
    return out;
}

std::vector<RingPair> ring_pairs(const Tessellation& t, CellId anchor)
{
    if (!t.cells.at(anchor).bounded)
        throw std::invalid_argument("ring pairs need a bounded anchor cell");
    const auto nb = neighbors(t, anchor);
    const std::size_t k = nb.size();
    const double scale = t.diameter();
    std::vector<RingPair> out;
    for (std::size_t i = 0; i < k; ++i) {
        const CellId x = nb[i].cell;
        const CellId y = nb[(i + 1) % k].cell;
        if (x == y)
            continue;
        const auto r = t.shared_ridge(x, y);
        if (!r)
            continue;
        try {
            out.push_back({x, y, *r, t.ridge_line(*r, scale)});
        } catch (const DegenerateRidgeError&) {
            // a collapsed ring ridge carries no direction
        }
    }
    return out;
}

} // namespace invoronoi
