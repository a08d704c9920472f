#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "acns/errors.hpp"

namespace acns {

enum class CellClass : std::uint8_t {
    Fluid = 0,
    Solid = 1,
    ObstacleBoundary = 2,
    FarfieldBoundary = 3,
};

/// Compact convex obstacle embedded in the computational box.
struct Obstacle {
    enum class Kind { None, Disk, Rect };

    Kind kind = Kind::None;
    std::array<double, 3> center{0, 0, 0};
    double radius = 0;                      // Disk only
    std::array<double, 3> half_extent{0, 0, 0};  // Rect only

    bool contains(const std::array<double, 3>& x, int dim) const;
    /// Signed distance to the obstacle surface (negative inside). Used for
    /// the local comparison window; exact for disks, conservative for rects.
    double surface_distance(const std::array<double, 3>& x, int dim) const;
};

/// One face of the staircase obstacle boundary: the grid face separating a
/// wet cell from a solid cell, with the outward (fluid-to-solid) normal.
struct ObstacleFace {
    int axis;
    std::size_t face;   // linear index into the face lattice of `axis`
    int sign;           // +1: normal points towards +axis, -1: towards -axis
};

struct GeometrySpec {
    int dim = 2;
    std::array<int, 3> cells{64, 64, 1};
    std::array<double, 3> extent{1.0, 1.0, 1.0};
    Obstacle obstacle;
    bool periodic = false;
};

/// Truncated exterior domain: a box minus a staircase-masked obstacle.
///
/// Cells are classified once at construction and the object is immutable
/// afterwards; it is shared read-only by fields, solvers and concurrent runs.
/// "Wet" means any non-solid cell; the boundary tags refine the wet set.
class DomainGeometry {
public:
    int dim = 2;
    std::array<int, 3> cells{1, 1, 1};        // trailing axes are 1
    std::array<double, 3> extent{1, 1, 1};
    std::array<double, 3> spacing{1, 1, 1};
    bool periodic = false;
    Obstacle obstacle;

    std::vector<CellClass> cell_class;
    std::array<std::vector<std::uint8_t>, 3> face_active;  // per axis
    std::vector<ObstacleFace> obstacle_faces;
    std::uint64_t hash = 0;

    // -- cell lattice ---------------------------------------------------
    std::size_t ncells() const {
        return std::size_t(cells[0]) * cells[1] * cells[2];
    }
    std::size_t cell_index(int i, int j, int k = 0) const {
        return std::size_t(i) + std::size_t(cells[0]) * (std::size_t(j) + std::size_t(cells[1]) * k);
    }
    bool wet(std::size_t c) const { return cell_class[c] != CellClass::Solid; }
    std::size_t wet_count() const { return n_wet_; }
    double cell_volume() const {
        double v = 1;
        for (int a = 0; a < dim; ++a) v *= spacing[a];
        return v;
    }
    std::array<double, 3> cell_center(int i, int j, int k = 0) const {
        return {(i + 0.5) * spacing[0], (j + 0.5) * spacing[1],
                dim == 3 ? (k + 0.5) * spacing[2] : 0.0};
    }

    // -- face lattices ----------------------------------------------------
    // Axis-a faces form a lattice with one extra point along a when the box
    // is bounded; periodic lattices wrap instead.
    std::array<int, 3> face_counts(int axis) const {
        std::array<int, 3> n = cells;
        if (!periodic) n[axis] += 1;
        return n;
    }
    std::size_t nfaces(int axis) const {
        auto n = face_counts(axis);
        return std::size_t(n[0]) * n[1] * n[2];
    }
    std::size_t face_index(int axis, int i, int j, int k = 0) const {
        auto n = face_counts(axis);
        return std::size_t(i) + std::size_t(n[0]) * (std::size_t(j) + std::size_t(n[1]) * k);
    }
    bool face_is_active(int axis, std::size_t f) const {
        return face_active[axis][f] != 0;
    }

    friend std::shared_ptr<const DomainGeometry> build_domain(const GeometrySpec&);

private:
    std::size_t n_wet_ = 0;
};

/// Classify the grid for a spec and verify all geometry invariants.
///
/// Throws ObstacleTouchesBox when the margin between the obstacle and the
/// box faces drops below 4*max(spacing), EmptyFluidRegion when nothing is
/// wet, and DisconnectedFluidRegion when a wet cell cannot reach the
/// far-field ring through wet cells.
std::shared_ptr<const DomainGeometry> build_domain(const GeometrySpec& spec);

}  // namespace acns
