#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace invoronoi::oracle {

Diamond diamond()
{
    Diamond d;
    Tessellation& t = d.t;
    t.vertices = {{1, 0}, {2, 1}, {1, 2}, {0, 1}};
    auto ray = [](double x, double y) { return UnitVec2::checked(x, y); };
    t.ridges = {
        {{0, 1}, FiniteRidge{3, 0}},      // x + y = 1
        {{0, 2}, FiniteRidge{0, 1}},      // x - y = 1
        {{0, 4}, FiniteRidge{1, 2}},      // x + y = 3
        {{0, 3}, FiniteRidge{2, 3}},      // y - x = 1
        {{1, 2}, RayRidge{0, ray(0, -1)}}, // x = 1, downward
        {{2, 4}, RayRidge{1, ray(1, 0)}},  // y = 1, rightward
        {{4, 3}, RayRidge{2, ray(0, 1)}},  // x = 1, upward
        {{3, 1}, RayRidge{3, ray(-1, 0)}}, // y = 1, leftward
    };
    t.cells = {
        {{1, 2, 3, 0}, true},
        {{4, 0, 7}, false},
        {{5, 1, 4}, false},
        {{7, 3, 6}, false},
        {{6, 2, 5}, false},
    };
    d.truth.generators = {{1, 1}, {0, 0}, {2, 0}, {0, 2}, {2, 2}};
    return d;
}

std::vector<Point2> halfplane_cell(const std::vector<Point2>& sites, std::size_t site, double box)
{
    const Point2 s = sites[site];
    std::vector<Point2> poly{{s.x - box, s.y - box}, {s.x + box, s.y - box}, {s.x + box, s.y + box}, {s.x - box, s.y + box}};
    for (std::size_t j = 0; j < sites.size() && !poly.empty(); ++j) {
        if (j == site)
            continue;
        // Keep points with f(x) = (x - m) . (t - s) <= 0.
        const Point2 o = sites[j];
        const Point2 m{0.5 * (s.x + o.x), 0.5 * (s.y + o.y)};
        const Point2 dir{o.x - s.x, o.y - s.y};
        auto f = [&](Point2 p) { return (p.x - m.x) * dir.x + (p.y - m.y) * dir.y; };
        std::vector<Point2> next;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Point2 a = poly[i];
            const Point2 b = poly[(i + 1) % poly.size()];
            const double fa = f(a), fb = f(b);
            if (fa <= 0)
                next.push_back(a);
            if ((fa < 0 && fb > 0) || (fa > 0 && fb < 0)) {
                const double u = fa / (fa - fb);
                next.push_back({a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)});
            }
        }
        poly.swap(next);
    }
    return poly;
}

Eigen::VectorXd normal_equations_solve(const Eigen::MatrixXd& M, const Eigen::VectorXd& b)
{
    const Eigen::Index n = M.cols();
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index r = 0; r < M.rows(); ++r)
                a[i][j] += M(r, i) * M(r, j);
        for (Eigen::Index r = 0; r < M.rows(); ++r)
            a[i][n] += M(r, i) * b(r);
    }
    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index piv = col;
        for (Eigen::Index r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col]))
                piv = r;
        if (a[piv][col] == 0.0)
            throw std::runtime_error("singular normal equations");
        std::swap(a[col], a[piv]);
        for (Eigen::Index r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (Eigen::Index c = col; c <= n; ++c)
                a[r][c] -= f * a[col][c];
        }
    }
    Eigen::VectorXd z(n);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        double s = a[i][n];
        for (Eigen::Index j = i + 1; j < n; ++j)
            s -= a[i][j] * z(j);
        z(i) = s / a[i][i];
    }
    return z;
}

Point2 mirror(Point2 p, Point2 on_line, Point2 direction)
{
    // g' = 2 p0 + 2 (v . (g - p0) / v . v) v - g, in extended precision so the
    // oracle's own rounding stays well below the tolerances it is checked against
    using L = long double;
    const L vx = direction.x, vy = direction.y;
    const L vv = vx * vx + vy * vy;
    const L proj = (vx * (L(p.x) - L(on_line.x)) + vy * (L(p.y) - L(on_line.y))) / vv;
    return {static_cast<double>(2 * L(on_line.x) + 2 * proj * vx - L(p.x)),
            static_cast<double>(2 * L(on_line.y) + 2 * proj * vy - L(p.y))};
}

} // namespace invoronoi::oracle
