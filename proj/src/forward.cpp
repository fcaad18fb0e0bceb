#include "invoronoi/forward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_map>

namespace invoronoi {

namespace {

using predicates::incircle;
using predicates::orient;

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

double unit_uniform(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// d2 index of (x, y) on a 2^order Hilbert curve.
std::uint64_t hilbert_index(std::uint32_t x, std::uint32_t y, int order)
{
    std::uint64_t d = 0;
    for (std::uint32_t s = 1u << (order - 1); s > 0; s >>= 1) {
        const std::uint32_t rx = (x & s) ? 1 : 0;
        const std::uint32_t ry = (y & s) ? 1 : 0;
        d += static_cast<std::uint64_t>(s) * s * ((3 * rx) ^ ry);
        if (ry == 0) {
            if (rx == 1) {
                x = s - 1 - x;
                y = s - 1 - y;
            }
            std::swap(x, y);
        }
    }
    return d;
}

std::vector<std::size_t> hilbert_order(const std::vector<Point2>& pts)
{
    constexpr int kOrder = 16;
    Point2 lo = pts.front(), hi = pts.front();
    for (const Point2& p : pts) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    const double span = std::max({hi.x - lo.x, hi.y - lo.y, 1e-300});
    const double cells = static_cast<double>((1u << kOrder) - 1);
    std::vector<std::uint64_t> key(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto gx = static_cast<std::uint32_t>((pts[i].x - lo.x) / span * cells);
        const auto gy = static_cast<std::uint32_t>((pts[i].y - lo.y) / span * cells);
        key[i] = hilbert_index(gx, gy, kOrder);
    }
    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
    return order;
}

Point2 circumcenter(Point2 a, Point2 b, Point2 c)
{
    const Point2 d = b - a;
    const Point2 e = c - a;
    const double dd = dot(d, d);
    const double ee = dot(e, e);
    const double denom = 2.0 * cross(d, e);
    return {a.x + (e.y * dd - d.y * ee) / denom, a.y + (d.x * ee - e.x * dd) / denom};
}

/// Triangulation with an implicit vertex at infinity. Finite triangles are CCW;
/// ghost triangles hold kInf and close the hull. n[i] is the triangle across
/// the edge opposite v[i].
class Delaunay {
public:
    struct Tri {
        std::array<std::size_t, 3> v;
        std::array<std::size_t, 3> n;
        bool alive;
        bool ghost() const { return v[0] == kInf || v[1] == kInf || v[2] == kInf; }
    };

    explicit Delaunay(const std::vector<Point2>& pts) : pts_(pts), vertex_tri_(pts.size(), kNone) {}

    /// Returns false when every point is collinear (no triangle exists).
    bool run()
    {
        const auto order = hilbert_order(pts_);
        std::size_t i0 = order[0], i1 = kNone, i2 = kNone;
        for (std::size_t k = 1; k < order.size() && i2 == kNone; ++k) {
            const std::size_t i = order[k];
            if (i1 == kNone)
                i1 = i;
            else if (orient(pts_[i0], pts_[i1], pts_[i]) != 0)
                i2 = i;
        }
        if (i2 == kNone)
            return false;
        if (orient(pts_[i0], pts_[i1], pts_[i2]) < 0)
            std::swap(i1, i2);
        seed_triangle(i0, i1, i2);
        for (std::size_t i : order)
            if (i != i0 && i != i1 && i != i2)
                insert(i);
        return true;
    }

    const std::vector<Tri>& tris() const { return tris_; }
    std::size_t vertex_tri(std::size_t v) const { return vertex_tri_[v]; }

    static int index_of(const Tri& t, std::size_t v)
    {
        for (int i = 0; i < 3; ++i)
            if (t.v[i] == v)
                return i;
        return -1;
    }

private:
    std::size_t new_tri(std::size_t a, std::size_t b, std::size_t c)
    {
        std::size_t id;
        if (!free_.empty()) {
            id = free_.back();
            free_.pop_back();
        } else {
            id = tris_.size();
            tris_.emplace_back();
        }
        tris_[id] = Tri{{a, b, c}, {kNone, kNone, kNone}, true};
        for (std::size_t v : {a, b, c})
            if (v != kInf)
                vertex_tri_[v] = id;
        return id;
    }

    void seed_triangle(std::size_t a, std::size_t b, std::size_t c)
    {
        const std::size_t t = new_tri(a, b, c);
        // Ghosts across each edge, oriented so their finite edge runs opposite.
        const std::size_t g0 = new_tri(c, b, kInf); // across edge (b, c)
        const std::size_t g1 = new_tri(a, c, kInf); // across edge (c, a)
        const std::size_t g2 = new_tri(b, a, kInf); // across edge (a, b)
        tris_[t].n = {g0, g1, g2};
        // Ghost (x, y, inf): n[2] is the finite side, n[0] shares (y, inf), n[1] shares (inf, x).
        tris_[g0].n = {g2, g1, t};
        tris_[g1].n = {g0, g2, t};
        tris_[g2].n = {g1, g0, t};
        vertex_tri_[a] = vertex_tri_[b] = vertex_tri_[c] = t;
        last_ = t;
    }

    bool conflict(const Tri& t, Point2 p) const
    {
        const int gi = index_of(t, kInf);
        if (gi < 0)
            return incircle(pts_[t.v[0]], pts_[t.v[1]], pts_[t.v[2]], p) > 0;
        const Point2 a = pts_[t.v[(gi + 1) % 3]];
        const Point2 b = pts_[t.v[(gi + 2) % 3]];
        const int o = orient(a, b, p);
        if (o != 0)
            return o > 0;
        // On the hull line: in conflict only strictly inside the hull edge.
        return dot(p - a, b - a) > 0.0 && dot(p - b, a - b) > 0.0;
    }

    std::size_t locate(Point2 p) const
    {
        std::size_t t = last_;
        if (tris_[t].ghost())
            t = tris_[t].n[index_of(tris_[t], kInf)];
        for (std::size_t steps = 0; steps <= 4 * tris_.size() + 16; ++steps) {
            const Tri& tri = tris_[t];
            if (tri.ghost())
                return t;
            bool moved = false;
            for (int i = 0; i < 3; ++i) {
                if (orient(pts_[tri.v[(i + 1) % 3]], pts_[tri.v[(i + 2) % 3]], p) < 0) {
                    t = tri.n[i];
                    moved = true;
                    break;
                }
            }
            if (!moved)
                return t;
        }
        throw ConstructionError("point location did not terminate");
    }

    void insert(std::size_t pi)
    {
        const Point2 p = pts_[pi];
        const std::size_t seed = locate(p);
        if (!conflict(tris_[seed], p))
            throw ConstructionError("site " + std::to_string(pi) + " " + to_string(p) + " is not in conflict with its triangle");

        cavity_.clear();
        stack_.assign(1, seed);
        mark_.resize(tris_.size(), 0);
        ++stamp_;
        mark_[seed] = stamp_;
        while (!stack_.empty()) {
            const std::size_t t = stack_.back();
            stack_.pop_back();
            cavity_.push_back(t);
            for (std::size_t nb : tris_[t].n) {
                if (mark_[nb] == stamp_ || mark_[nb] == -stamp_)
                    continue;
                if (conflict(tris_[nb], p)) {
                    mark_[nb] = stamp_;
                    stack_.push_back(nb);
                } else {
                    mark_[nb] = -stamp_;
                }
            }
        }

        fan_.clear();
        for (std::size_t t : cavity_) {
            for (int i = 0; i < 3; ++i) {
                const std::size_t nb = tris_[t].n[i];
                if (mark_[nb] == stamp_)
                    continue;
                const std::size_t a = tris_[t].v[(i + 1) % 3];
                const std::size_t b = tris_[t].v[(i + 2) % 3];
                fan_.push_back({a, b, nb});
            }
        }
        for (std::size_t t : cavity_) {
            tris_[t].alive = false;
            free_.push_back(t);
        }

        std::vector<std::size_t> made(fan_.size());
        for (std::size_t k = 0; k < fan_.size(); ++k) {
            const std::size_t id = new_tri(fan_[k].from, fan_[k].to, pi);
            made[k] = id;
            const std::size_t outside = fan_[k].tri;
            tris_[id].n[2] = outside;
            // Repoint the outside neighbor across edge (from, to).
            Tri& o = tris_[outside];
            for (int j = 0; j < 3; ++j) {
                const std::size_t oa = o.v[(j + 1) % 3];
                const std::size_t ob = o.v[(j + 2) % 3];
                if (oa == fan_[k].to && ob == fan_[k].from) {
                    o.n[j] = id;
                    break;
                }
            }
        }
        if (mark_.size() < tris_.size())
            mark_.resize(tris_.size(), 0);
        // New triangle (a, b, p): across (b, p) is the one starting at b, across (p, a) the one ending at a.
        for (std::size_t k = 0; k < fan_.size(); ++k) {
            for (std::size_t m = 0; m < fan_.size(); ++m) {
                if (fan_[m].from == fan_[k].to)
                    tris_[made[k]].n[0] = made[m];
                if (fan_[m].to == fan_[k].from)
                    tris_[made[k]].n[1] = made[m];
            }
        }
        last_ = made.front();
        for (std::size_t id : made)
            if (!tris_[id].ghost())
                last_ = id;
    }

    const std::vector<Point2>& pts_;
    std::vector<Tri> tris_;
    std::vector<std::size_t> free_;
    std::vector<std::size_t> vertex_tri_;
    std::size_t last_ = 0;

    std::vector<std::size_t> cavity_, stack_;
    std::vector<long> mark_;
    long stamp_ = 0;
    struct FanEdge {
        std::size_t from, to, tri;
    };
    std::vector<FanEdge> fan_;
};

void check_distinct(const std::vector<Point2>& pts)
{
    if (pts.size() < 2)
        throw ConstructionError("a Voronoi diagram needs at least 2 sites");
    Point2 lo = pts.front(), hi = pts.front();
    for (const Point2& p : pts) {
        if (!p.is_finite())
            throw ConstructionError("non-finite site " + to_string(p));
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    const double tol = kDegenerateRelative * std::max(distance(lo, hi), 1e-300);
    std::vector<std::size_t> idx(pts.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return pts[a].x < pts[b].x; });
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = i + 1; j < idx.size() && pts[idx[j]].x - pts[idx[i]].x <= tol; ++j)
            if (distance(pts[idx[i]], pts[idx[j]]) <= tol)
                throw ConstructionError("duplicate sites " + std::to_string(idx[i]) + " and " + std::to_string(idx[j]));
}

/// Every site on one line: parallel bisectors, each carried by two opposite rays
/// from a synthetic vertex at the midpoint of the consecutive pair.
BuiltDiagram build_collinear(const std::vector<Point2>& pts)
{
    std::size_t far = 1;
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (distance(pts[i], pts[0]) > distance(pts[far], pts[0]))
            far = i;
    const UnitVec2 u = UnitVec2::normalize(pts[far] - pts[0]);
    const UnitVec2 up = UnitVec2::normalize(-u.y(), u.x());
    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return dot(pts[a], u.vec()) < dot(pts[b], u.vec()); });

    BuiltDiagram out;
    Tessellation& t = out.tessellation;
    t.cells.resize(pts.size());
    out.truth.generators = pts;
    std::vector<std::array<RidgeId, 2>> line_ridges; // [down, up] per consecutive pair
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        const CellId a = order[i], b = order[i + 1];
        const VertexId v = t.vertices.size();
        t.vertices.push_back(midpoint(pts[a], pts[b]));
        const RidgeId down = t.ridges.size();
        t.ridges.push_back({{a, b}, RayRidge{v, -up}});
        t.ridges.push_back({{a, b}, RayRidge{v, up}});
        line_ridges.push_back({down, down + 1});
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto& rs = t.cells[order[i]].ridges;
        // Counter-clockwise: up the line ahead of the site, then down the line behind it.
        if (i + 1 < order.size()) {
            rs.push_back(line_ridges[i][0]);
            rs.push_back(line_ridges[i][1]);
        }
        if (i > 0) {
            rs.push_back(line_ridges[i - 1][1]);
            rs.push_back(line_ridges[i - 1][0]);
        }
    }
    return out;
}

} // namespace

SiteSample sample_sites(std::size_t n, std::uint64_t seed)
{
    if (n < 2)
        throw std::invalid_argument("sample_sites needs n >= 2");
    SiteSample s;
    s.window = std::sqrt(static_cast<double>(n));
    s.seed = seed;
    s.points.reserve(n);
    std::mt19937_64 rng(seed);
    auto draw = [&] {
        double u;
        do
            u = unit_uniform(rng);
        while (u == 0.0);
        return u * s.window;
    };
    for (std::size_t i = 0; i < n; ++i) {
        const double x = draw();
        const double y = draw();
        s.points.push_back({x, y});
    }
    return s;
}

std::vector<std::array<std::size_t, 3>> delaunay_triangles(const std::vector<Point2>& sites)
{
    check_distinct(sites);
    Delaunay dt(sites);
    std::vector<std::array<std::size_t, 3>> out;
    if (!dt.run())
        return out;
    for (const auto& t : dt.tris())
        if (t.alive && !t.ghost())
            out.push_back(t.v);
    return out;
}

BuiltDiagram build_voronoi(const SiteSample& sites)
{
    return build_voronoi(sites.points);
}

BuiltDiagram build_voronoi(const std::vector<Point2>& pts)
{
    check_distinct(pts);
    Delaunay dt(pts);
    if (!dt.run())
        return build_collinear(pts);
    const auto& tris = dt.tris();

    BuiltDiagram out;
    Tessellation& t = out.tessellation;
    out.truth.generators = pts;

    std::vector<VertexId> tri_vertex(tris.size(), kNone);
    for (std::size_t i = 0; i < tris.size(); ++i) {
        if (!tris[i].alive || tris[i].ghost())
            continue;
        tri_vertex[i] = t.vertices.size();
        const auto& v = tris[i].v;
        t.vertices.push_back(circumcenter(pts[v[0]], pts[v[1]], pts[v[2]]));
    }
    // Collapse cutoff relative to the site spread; far hull circumcenters must not inflate it.
    Point2 lo = pts.front(), hi = pts.front();
    for (const Point2& p : pts) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    const double scale = distance(lo, hi);

    std::unordered_map<std::uint64_t, RidgeId> ridge_of;
    ridge_of.reserve(3 * pts.size());
    auto edge_key = [](std::size_t a, std::size_t b) {
        return (static_cast<std::uint64_t>(std::min(a, b)) << 32) | static_cast<std::uint64_t>(std::max(a, b));
    };

    t.cells.resize(pts.size());
    for (std::size_t s = 0; s < pts.size(); ++s) {
        // Walk the triangle fan around s counter-clockwise; each step crosses edge (s, w).
        struct Step {
            std::size_t before, after, w;
        };
        std::vector<Step> steps;
        const std::size_t start = dt.vertex_tri(s);
        std::size_t cur = start;
        do {
            const auto& tri = tris[cur];
            const int i = Delaunay::index_of(tri, s);
            const std::size_t next = tri.n[(i + 1) % 3];
            steps.push_back({cur, next, tri.v[(i + 2) % 3]});
            cur = next;
        } while (cur != start && steps.size() <= tris.size());

        // Hull sites: start right after the (s, infinity) edge so the rays come first and last.
        const auto gap = std::find_if(steps.begin(), steps.end(), [](const Step& st) { return st.w == kInf; });
        Cell& cell = t.cells[s];
        cell.bounded = gap == steps.end();
        if (!cell.bounded)
            std::rotate(steps.begin(), gap + 1, steps.end());

        for (const Step& st : steps) {
            if (st.w == kInf)
                continue;
            const auto key = edge_key(s, st.w);
            const auto found = ridge_of.find(key);
            if (found != ridge_of.end()) {
                cell.ridges.push_back(found->second);
                continue;
            }
            const bool ghost_before = tris[st.before].ghost();
            const bool ghost_after = tris[st.after].ghost();
            Ridge ridge{{s, st.w}, FiniteRidge{0, 0}};
            if (!ghost_before && !ghost_after) {
                const VertexId a = tri_vertex[st.before];
                const VertexId b = tri_vertex[st.after];
                if (!(distance(t.vertices[a], t.vertices[b]) > kDegenerateRelative * scale))
                    throw ConstructionError("cocircular sites collapse the ridge between sites " + std::to_string(s) +
                                            " and " + std::to_string(st.w));
                ridge.geometry = FiniteRidge{a, b};
            } else {
                const std::size_t finite = ghost_before ? st.after : st.before;
                // Hull edge (x, y) taken CCW in the finite triangle; the ray leaves to its right.
                const auto& ft = tris[finite];
                const int is = Delaunay::index_of(ft, s);
                const int iw = Delaunay::index_of(ft, st.w);
                const bool s_first = (is + 1) % 3 == iw;
                const Point2 x = pts[s_first ? s : st.w];
                const Point2 y = pts[s_first ? st.w : s];
                ridge.geometry = RayRidge{tri_vertex[finite], UnitVec2::normalize(y.y - x.y, x.x - y.x)};
            }
            const RidgeId id = t.ridges.size();
            t.ridges.push_back(ridge);
            ridge_of.emplace(key, id);
            cell.ridges.push_back(id);
        }
    }
    return out;
}

SiteSample jitter_degenerate(const SiteSample& sites, double epsilon)
{
    if (epsilon < 0.0)
        throw std::invalid_argument("jitter epsilon must be non-negative");
    SiteSample out = sites;
    if (epsilon == 0.0 || sites.points.size() < 2)
        return out;
    auto& pts = out.points;
    const std::vector<Point2> original = sites.points;

    Point2 lo = pts.front(), hi = pts.front();
    for (const Point2& p : pts) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    const double extent = std::max(distance(lo, hi), 1e-300);
    // Generous detection radius: anything this close is about to fail the build.
    const double near = 1e-10 * extent;

    std::mt19937_64 rng(sites.seed ^ 0x9e3779b97f4a7c15ull);
    auto nudge = [&](std::size_t i) {
        const double angle = 2.0 * M_PI * unit_uniform(rng);
        const double r = epsilon * (0.5 + 0.5 * unit_uniform(rng));
        Point2 q{original[i].x + r * std::cos(angle), original[i].y + r * std::sin(angle)};
        if (out.window > 0.0) {
            q.x = std::clamp(q.x, 0.0, out.window);
            q.y = std::clamp(q.y, 0.0, out.window);
        }
        pts[i] = q;
    };

    for (int round = 0; round < 16; ++round) {
        std::vector<char> flagged(pts.size(), 0);
        bool any = false;

        std::vector<std::size_t> idx(pts.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return pts[a].x < pts[b].x; });
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t j = i + 1; j < idx.size() && pts[idx[j]].x - pts[idx[i]].x <= near; ++j)
                if (distance(pts[idx[i]], pts[idx[j]]) <= near) {
                    flagged[idx[j]] = 1;
                    any = true;
                }

        if (!any) {
            Delaunay dt(pts);
            if (dt.run()) {
                const auto& tris = dt.tris();
                for (std::size_t ti = 0; ti < tris.size(); ++ti) {
                    const auto& tri = tris[ti];
                    if (!tri.alive || tri.ghost())
                        continue;
                    const Point2 c = circumcenter(pts[tri.v[0]], pts[tri.v[1]], pts[tri.v[2]]);
                    for (int e = 0; e < 3; ++e) {
                        const std::size_t nb = tri.n[e];
                        if (nb < ti || tris[nb].ghost())
                            continue;
                        const auto& other = tris[nb];
                        const Point2 d = circumcenter(pts[other.v[0]], pts[other.v[1]], pts[other.v[2]]);
                        if (distance(c, d) <= near) {
                            for (std::size_t v : tri.v)
                                flagged[v] = 1;
                            for (std::size_t v : other.v)
                                flagged[v] = 1;
                            any = true;
                        }
                    }
                }
            }
        }
        if (!any)
            break;
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (flagged[i])
                nudge(i);
    }
    return out;
}

BuiltDiagram make_tessellation(std::size_t n, std::uint64_t seed)
{
    const SiteSample sites = sample_sites(n, seed);
    return build_voronoi(jitter_degenerate(sites, 1e-9 * sites.window));
}

} // namespace invoronoi
