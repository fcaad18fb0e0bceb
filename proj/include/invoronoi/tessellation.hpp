#pragma once

// Voronoi diagram data model consumed by the reconstructor.

#include "invoronoi/geom.hpp"

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace invoronoi {

using CellId = std::size_t;
using RidgeId = std::size_t;
using VertexId = std::size_t;

struct FiniteRidge {
    VertexId v0;
    VertexId v1;
};

/// Unbounded ridge starting at v0 and running off along `dir`.
struct RayRidge {
    VertexId v0;
    UnitVec2 dir;
};

struct Ridge {
    std::array<CellId, 2> cells;
    std::variant<FiniteRidge, RayRidge> geometry;

    bool is_finite() const noexcept { return std::holds_alternative<FiniteRidge>(geometry); }
    bool touches(CellId c) const noexcept { return cells[0] == c || cells[1] == c; }
    CellId other(CellId c) const noexcept { return cells[0] == c ? cells[1] : cells[0]; }
};

struct Cell {
    std::vector<RidgeId> ridges; ///< counter-clockwise around the cell
    bool bounded = false;
};

struct Tessellation {
    std::vector<Point2> vertices;
    std::vector<Ridge> ridges;
    std::vector<Cell> cells;

    std::size_t cell_count() const noexcept { return cells.size(); }

    /// Carrier line of a ridge. `scale` is the diagram diameter; throws
    /// DegenerateRidgeError when a finite ridge is shorter than kDegenerateRelative * scale.
    RidgeLine ridge_line(RidgeId r, double scale) const;
    /// Vertex midpoint for finite ridges, the ray origin otherwise.
    Point2 ridge_point(RidgeId r) const;
    /// Length of a finite ridge; +inf for a ray.
    double ridge_length(RidgeId r) const;
    /// Length of the part of a ridge inside the axis-aligned box [lo, hi].
    double clipped_ridge_length(RidgeId r, const std::array<Point2, 2>& box) const;

    /// Diagonal of bounding_box() (1.0 when it is empty or a single point).
    double diameter() const;
    /// Lower/upper corners of the box around the interior vertices, i.e. those not on
    /// any unbounded cell. Circumcenters of nearly flat hull triangles can sit orders of
    /// magnitude outside the sites and would otherwise dominate every relative cutoff.
    /// Falls back to all vertices when no interior vertex exists.
    std::array<Point2, 2> bounding_box() const;

    /// The ridge separating a and b, if any.
    std::optional<RidgeId> shared_ridge(CellId a, CellId b) const;
};

struct GroundTruth {
    std::vector<Point2> generators; ///< indexed by CellId
};

struct Neighbor {
    CellId cell;
    RidgeId ridge;
};

/// Ring-pair entry: consecutive anchor neighbors joined by `ridge`.
struct RingPair {
    CellId first;
    CellId second;
    RidgeId ridge;
    RidgeLine line;
};

/// Structural invariant check. Empty result means the tessellation is well formed.
std::vector<std::string> validate(const Tessellation& t);

/// Neighbors of c in the cell's counter-clockwise ridge order.
std::vector<Neighbor> neighbors(const Tessellation& t, CellId c);

/// Consecutive neighbor pairs around `anchor` (cyclic) that share a ridge.
std::vector<RingPair> ring_pairs(const Tessellation& t, CellId anchor);

/// Number of ridges incident to each vertex.
std::vector<std::size_t> vertex_valences(const Tessellation& t);

// ---- serialization ----------------------------------------------------------

inline constexpr int kFormatVersion = 1;

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedVersionError : public std::runtime_error {
public:
    explicit UnsupportedVersionError(long version);
    long version() const noexcept { return version_; }

private:
    long version_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TessellationFile {
    Tessellation tessellation;
    std::optional<GroundTruth> truth;
};

std::string to_json(const Tessellation& t, const GroundTruth* truth = nullptr);
TessellationFile from_json(const std::string& text);

TessellationFile load(const std::filesystem::path& path);
void save(const Tessellation& t, const GroundTruth* truth, const std::filesystem::path& path);

/// "%.17g" formatting used by every file writer.
std::string format_real(double v);

} // namespace invoronoi
