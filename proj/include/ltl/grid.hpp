#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ltl/errors.hpp"

namespace ltl {

using Coord = std::vector<long>;  // one grid coordinate per axis

enum class BoundaryMode {
    GrowableZero,  // reads outside the stored box are 0; box may expand
    Periodic       // coordinates wrap modulo the extent; box is fixed
};

/// Discretization context: an ε-grid in D dimensions.  Cell z occupies the
/// half-open cube ε·z + [−ε/2, ε/2)^D, so cell centers sit on the lattice ε·Z^D.
struct Domain {
    int dim = 0;
    double epsilon = 1.0;
    std::vector<long> extent;           // cells per axis, all >= 1
    std::vector<BoundaryMode> boundary; // per-axis mode

    static Domain growable(int dim, double epsilon, std::vector<long> extent);
    static Domain periodic(int dim, double epsilon, std::vector<long> extent);

    void validate() const;  // throws InvalidArgumentError
    bool all_periodic() const;
    /// ε^D (the measure of one cell).
    double cell_measure() const;
};

namespace detail {
/// Row-major (last axis fastest) indexing over a box `extent` at offset `origin`.
struct Box {
    std::vector<long> origin;
    std::vector<long> extent;

    std::size_t cell_count() const;
    /// Flat index of grid coordinate z; nullopt when z is outside the box.
    std::optional<std::size_t> flat(const Coord& z) const;
    /// Inverse of flat().
    Coord coord(std::size_t idx) const;
    bool contains(const Coord& z) const;
};
}  // namespace detail

/// Finite-support {0,1} configuration.  On growable axes the support is kept
/// strictly inside the stored box; on periodic axes the box is one period.
struct BinaryConfig {
    Domain domain;
    std::vector<long> origin;         // grid coordinate of array index 0
    std::vector<std::uint8_t> cells;  // row-major, last axis fastest

    detail::Box box() const { return {origin, domain.extent}; }
    std::size_t size() const { return cells.size(); }

    /// Value at grid coordinate z (periodic axes wrap; growable reads give 0).
    std::uint8_t at(const Coord& z) const;
    void set(const Coord& z, std::uint8_t v);  // z must be inside the box

    std::uint64_t live_count() const;
    bool empty() const { return live_count() == 0; }
    /// Physical mass ε^D · (live count).
    double mass() const;
    /// Tight support bounding box, or nullopt when empty.
    std::optional<detail::Box> support_box() const;
};

/// Real-valued grid field (convolution outputs, coarsenings).
struct ScalarField {
    Domain domain;
    std::vector<long> origin;
    std::vector<double> values;

    detail::Box box() const { return {origin, domain.extent}; }
    std::size_t size() const { return values.size(); }
    double at(const Coord& z) const;  // same boundary conventions as BinaryConfig
};

/// A duplicate-free list of grid coordinates.
struct PointSet {
    Domain domain;
    std::vector<Coord> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

/// Analytic region of R^D used to seed configurations.  Balls, annuli and
/// ribbons use closed membership; rectangles are half-open [lo, hi) per axis,
/// matching the half-open grid cells.
struct AnalyticShape {
    enum class Kind { Empty, Ball, Rect, Ribbon, Annulus, Union };
    enum class Norm { L1, L2, Linf };

    Kind kind = Kind::Empty;
    Norm norm = Norm::L2;          // Ball
    double radius = 0.0;           // Ball
    std::vector<double> center;    // Ball / Annulus / Ribbon line offset
    std::vector<double> lo, hi;    // Rect
    int axis = 0;                  // Ribbon: the unbounded axis
    double width = 0.0;            // Ribbon full width (band |x⊥ − c| ≤ w/2)
    double inner = 0.0, outer = 0.0;  // Annulus radii r < R
    std::vector<AnalyticShape> parts; // Union

    static AnalyticShape empty();
    static AnalyticShape ball(Norm n, double r, std::vector<double> center = {});
    static AnalyticShape rect(std::vector<double> lo, std::vector<double> hi);
    static AnalyticShape ribbon(int axis, double width, std::vector<double> center = {});
    static AnalyticShape annulus(double r, double R, std::vector<double> center = {});
    static AnalyticShape union_of(std::vector<AnalyticShape> parts);

    bool contains(const std::vector<double>& x) const;
    /// True when the region is bounded in every direction.
    bool bounded() const;
    /// Axes along which the region is unbounded (ribbon axis).
    std::vector<int> unbounded_axes(int dim) const;
};

// ---- operations ----------------------------------------------------------

/// ε^D · Σ|a_z − b_z|.  Extents may differ; missing cells read as 0.
double l1_distance(const BinaryConfig& a, const BinaryConfig& b);
double l1_distance(const ScalarField& a, const ScalarField& b);

/// output(z) = input(z+v).  Periodic axes wrap; growable boxes translate.
BinaryConfig shift(const BinaryConfig& a, const Coord& v);

/// Block average by factor m per axis: each output cell is the mean of its
/// m^D block; output spacing m·ε.  Growable extents are zero-padded up to a
/// multiple of m first; periodic extents must divide exactly.
ScalarField coarsen(const BinaryConfig& a, long m);
ScalarField coarsen(const ScalarField& f, long m);

/// Cell value = shape membership of the cell center.  The box is centered on
/// the grid origin: axis d covers [−extent/2, ...] via origin = −⌊extent/2⌋.
BinaryConfig rasterize(const AnalyticShape& shape, const Domain& domain);
/// Same with an explicit box origin (refinement ladders pick aligned boxes).
BinaryConfig rasterize(const AnalyticShape& shape, const Domain& domain,
                       const std::vector<long>& origin);

/// Live cells with a dead axis-neighbor plus dead cells with a live
/// axis-neighbor (the discrete two-sided cell boundary).
PointSet boundary_cells(const BinaryConfig& a);

/// Re-embed `a` in a box that bounds its support with `margin` zero cells on
/// growable axes (canonical 1-cell box when empty).  Periodic axes unchanged.
BinaryConfig normalize_box(const BinaryConfig& a, long margin = 1);

/// Binary configs as {0,1}-valued fields.
ScalarField to_field(const BinaryConfig& a);

void require_compatible(const Domain& a, const Domain& b);  // dim + epsilon

}  // namespace ltl
