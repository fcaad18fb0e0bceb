#include "invoronoi/solver.hpp"

#include "invoronoi/anchor.hpp"

namespace invoronoi {

PatchSystem assemble_system(const Tessellation& t, std::vector<CellId> column_map,
                            std::vector<MirrorEquation> equations, std::size_t ring_equations)
{
    PatchSystem sys;
    sys.k = column_map.empty() ? 0 : column_map.size() - 1;
    sys.column_map = std::move(column_map);
    sys.equations = std::move(equations);
    sys.ring_equations = ring_equations;

    const double scale = t.diameter();
    const auto rows = static_cast<Eigen::Index>(2 * sys.equations.size());
    const auto cols = static_cast<Eigen::Index>(2 * sys.column_map.size());
    sys.M = Eigen::MatrixXd::Zero(rows, cols);
    sys.b = Eigen::VectorXd::Zero(rows);

    for (std::size_t e = 0; e < sys.equations.size(); ++e) {
        const MirrorEquation& eq = sys.equations[e];
        const RidgeLine line = t.ridge_line(eq.ridge, scale);
        const Reflector2 R = reflector_from_dir(line.dir);
        const Point2 c = t.ridge_point(eq.ridge);
        const auto r = static_cast<Eigen::Index>(2 * e);
        const auto tc = static_cast<Eigen::Index>(2 * eq.target_block);
        const auto sc = static_cast<Eigen::Index>(2 * eq.source_block);
        sys.M(r, tc) = 1.0;
        sys.M(r + 1, tc + 1) = 1.0;
        sys.M(r, sc) = -R.m00;
        sys.M(r, sc + 1) = -R.m01;
        sys.M(r + 1, sc) = -R.m10;
        sys.M(r + 1, sc + 1) = -R.m11;
        // (I - R) c
        sys.b(r) = (1.0 - R.m00) * c.x - R.m01 * c.y;
        sys.b(r + 1) = -R.m10 * c.x + (1.0 - R.m11) * c.y;
    }
    return sys;
}

PatchSystem assemble_patch(const Tessellation& t, CellId anchor)
{
    const AnchorScore score = score_cell(t, anchor);
    if (!score.eligible)
        throw PreconditionError("cell " + std::to_string(anchor) + " is not an eligible anchor");

    const auto nb = neighbors(t, anchor);
    std::vector<CellId> column_map{anchor};
    std::vector<MirrorEquation> equations;
    for (std::size_t j = 0; j < nb.size(); ++j) {
        column_map.push_back(nb[j].cell);
        equations.push_back({j + 1, 0, nb[j].ridge});
    }
    auto block_of = [&](CellId c) {
        for (std::size_t j = 1; j < column_map.size(); ++j)
            if (column_map[j] == c)
                return j;
        throw PreconditionError("ring cell " + std::to_string(c) + " is not an anchor neighbor");
    };
    const auto ring = ring_pairs(t, anchor);
    for (const RingPair& rp : ring)
        equations.push_back({block_of(rp.first), block_of(rp.second), rp.ridge});
    return assemble_system(t, std::move(column_map), std::move(equations), ring.size());
}

PatchSolution solve_patch(const PatchSystem& sys)
{
    if (sys.M.rows() < sys.M.cols() || sys.M.cols() == 0)
        throw SingularSystemError("patch system has fewer equations than unknowns", Point2{0, 0}, 0.0);

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.M, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double sigma_max = sv(0);
    const double sigma_min = sv(sv.size() - 1);
    if (!(sigma_min > kRankTolerance * sigma_max)) {
        const Eigen::VectorXd null = svd.matrixV().col(sv.size() - 1);
        Point2 dir{null(0), null(1)};
        const double len = norm(dir);
        if (len > 0.0)
            dir = (1.0 / len) * dir;
        throw SingularSystemError("patch system is rank deficient (sigma_min = " + format_real(sigma_min) +
                                      "); the anchor generator can translate along " + to_string(dir),
                                  dir, sigma_min);
    }

    const Eigen::VectorXd z = sys.M.householderQr().solve(sys.b);
    PatchSolution out;
    out.residual_norm = (sys.M * z - sys.b).norm();
    out.b_norm = sys.b.norm();
    out.condition_estimate = sigma_max / sigma_min;
    out.smallest_singular_value = sigma_min;
    for (std::size_t j = 0; j < sys.column_map.size(); ++j) {
        const auto i = static_cast<Eigen::Index>(2 * j);
        out.generators.emplace_back(sys.column_map[j], Point2{z(i), z(i + 1)});
    }
    return out;
}

Eigen::VectorXd stack_generators(const PatchSystem& sys, const std::vector<Point2>& generators_by_cell)
{
    Eigen::VectorXd z(static_cast<Eigen::Index>(2 * sys.column_map.size()));
    for (std::size_t j = 0; j < sys.column_map.size(); ++j) {
        const Point2 g = generators_by_cell.at(sys.column_map[j]);
        z(static_cast<Eigen::Index>(2 * j)) = g.x;
        z(static_cast<Eigen::Index>(2 * j + 1)) = g.y;
    }
    return z;
}

} // namespace invoronoi
