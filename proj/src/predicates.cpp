#include "invoronoi/forward.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <limits>

namespace invoronoi::predicates {

namespace {

using Exact = boost::multiprecision::cpp_rational;

// Forward error bounds for the plain double evaluation (Shewchuk, "Adaptive
// Precision Floating-Point Arithmetic", stage A bounds).
constexpr double kEps = std::numeric_limits<double>::epsilon() / 2.0;
constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIncircleBound = (10.0 + 96.0 * kEps) * kEps;

template <typename T>
int sign_of(const T& v)
{
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

int orient_exact(Point2 a, Point2 b, Point2 c)
{
    const Exact ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
    return sign_of(Exact((bx - ax) * (cy - ay) - (by - ay) * (cx - ax)));
}

int incircle_exact(Point2 a, Point2 b, Point2 c, Point2 d)
{
    const Exact adx = Exact(a.x) - Exact(d.x), ady = Exact(a.y) - Exact(d.y);
    const Exact bdx = Exact(b.x) - Exact(d.x), bdy = Exact(b.y) - Exact(d.y);
    const Exact cdx = Exact(c.x) - Exact(d.x), cdy = Exact(c.y) - Exact(d.y);
    const Exact alift = adx * adx + ady * ady;
    const Exact blift = bdx * bdx + bdy * bdy;
    const Exact clift = cdx * cdx + cdy * cdy;
    const Exact det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) + clift * (adx * bdy - bdx * ady);
    return sign_of(det);
}

} // namespace

int orient(Point2 a, Point2 b, Point2 c)
{
    const double left = (b.x - a.x) * (c.y - a.y);
    const double right = (b.y - a.y) * (c.x - a.x);
    const double det = left - right;
    const double bound = kOrientBound * (std::abs(left) + std::abs(right));
    if (det > bound || -det > bound)
        return sign_of(det);
    return orient_exact(a, b, c);
}

int incircle(Point2 a, Point2 b, Point2 c, Point2 d)
{
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;

    const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    const double cdxady = cdx * ady, adxcdy = adx * cdy;
    const double adxbdy = adx * bdy, bdxady = bdx * ady;
    const double alift = adx * adx + ady * ady;
    const double blift = bdx * bdx + bdy * bdy;
    const double clift = cdx * cdx + cdy * cdy;

    const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
    const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                             (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                             (std::abs(adxbdy) + std::abs(bdxady)) * clift;
    const double bound = kIncircleBound * permanent;
    if (det > bound || -det > bound)
        return sign_of(det);
    return incircle_exact(a, b, c, d);
}

} // namespace invoronoi::predicates
