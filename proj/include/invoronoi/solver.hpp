#pragma once

// Anchor patch system: mirror equalities around one cell, solved jointly.

#include "invoronoi/tessellation.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <utility>
#include <vector>

namespace invoronoi {

class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// M has (numerically) dependent columns; `null_direction` is the anchor-block
/// component of the offending right singular vector.
class SingularSystemError : public std::runtime_error {
public:
    SingularSystemError(const std::string& what, Point2 null_direction, double smallest_singular_value)
        : std::runtime_error(what), null_direction_(null_direction), sigma_min_(smallest_singular_value)
    {}
    Point2 null_direction() const noexcept { return null_direction_; }
    double smallest_singular_value() const noexcept { return sigma_min_; }

private:
    Point2 null_direction_;
    double sigma_min_;
};

/// Rank cutoff relative to the largest singular value of M.
inline constexpr double kRankTolerance = 1e-8;
/// Residual above this fraction of ||b|| means the input is not a Voronoi diagram.
inline constexpr double kConsistencyTolerance = 1e-6;

/// One mirror equality g_target - R g_source = (I - R) c, as two scalar rows.
struct MirrorEquation {
    std::size_t target_block;
    std::size_t source_block;
    RidgeId ridge;
};

struct PatchSystem {
    std::size_t k = 0;                ///< neighbor count
    Eigen::MatrixXd M;                ///< rows x 2(k+1)
    Eigen::VectorXd b;
    std::vector<CellId> column_map;   ///< block -> cell; block 0 is the anchor
    std::vector<MirrorEquation> equations; ///< anchor equations first, then ring equations
    std::size_t ring_equations = 0;
};

struct PatchSolution {
    std::vector<std::pair<CellId, Point2>> generators; ///< anchor first, then neighbors in CCW order
    double residual_norm = 0.0;
    double condition_estimate = 0.0;
    double smallest_singular_value = 0.0;
    double b_norm = 0.0;

    /// False when the residual exceeds kConsistencyTolerance * ||b||.
    bool consistent() const noexcept { return residual_norm <= kConsistencyTolerance * b_norm; }
};

/// Mirror equalities for every anchor ridge and every available ring ridge. The
/// reflector and offset come from the observed ridge: its unit direction and the
/// midpoint of its vertices (the ray origin for a ray ridge).
/// Throws PreconditionError for an ineligible anchor.
PatchSystem assemble_patch(const Tessellation& t, CellId anchor);

/// Builds a system from explicit equations; used for synthetic and hand-built cases.
PatchSystem assemble_system(const Tessellation& t, std::vector<CellId> column_map,
                            std::vector<MirrorEquation> equations, std::size_t ring_equations);

/// Least-squares solve by Householder QR. Throws SingularSystemError when the
/// smallest singular value falls below kRankTolerance * ||M||_2.
PatchSolution solve_patch(const PatchSystem& sys);

/// Stacks generators into z = [g0; g1; ...] for residual checks.
Eigen::VectorXd stack_generators(const PatchSystem& sys, const std::vector<Point2>& generators_by_cell);

} // namespace invoronoi
