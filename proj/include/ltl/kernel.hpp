#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ltl/grid.hpp"

namespace ltl {

/// Continuous kernel description: an indicator of a unit-speed ball under a
/// chosen norm, scaled to integrate to one, or a user radial profile.
struct KernelSpec {
    enum class Shape { BoxLinf, BallL2, DiamondL1, RadialTable };

    Shape shape = Shape::BallL2;
    double radius = 1.0;  ///< support radius in physical units

    /// For RadialTable: profile samples at uniformly spaced radii
    /// 0..radius (inclusive); linearly interpolated, zero outside.
    std::vector<double> table;

    static KernelSpec box_linf(double radius = 1.0);
    static KernelSpec ball_l2(double radius = 1.0);
    static KernelSpec diamond_l1(double radius = 1.0);
    static KernelSpec radial_table(double radius, std::vector<double> table);

    /// Continuous kernel value at a point (normalized to unit integral in
    /// the given dimension).
    double value(const std::vector<double>& x, int dim) const;

    /// sup-norm of the normalized kernel.
    double sup_norm(int dim) const;
};

/// Discrete kernel: per-cell integrals of a KernelSpec over the grid cells,
/// renormalized to sum to exactly one.
struct DiscreteKernel {
    int dim = 0;
    double epsilon = 0.0;
    std::vector<long> radius;     ///< per-axis support radius in cells
    std::vector<double> weights;  ///< row-major over the (2r+1)^D window, last axis fastest

    detail::Box box() const {
        detail::Box b;
        b.origin.resize(radius.size());
        b.extent.resize(radius.size());
        for (std::size_t d = 0; d < radius.size(); ++d) {
            b.origin[d] = -radius[d];
            b.extent[d] = 2 * radius[d] + 1;
        }
        return b;
    }

    double at(const Coord& dz) const {
        auto idx = box().flat(dz);
        return idx ? weights[*idx] : 0.0;
    }

    double sum() const;
    double max_weight() const;

    /// True when every weight inside the box equals the same positive value
    /// and the box is a full cube (the uniform count-based fast path).
    bool is_uniform_box() const;
};

/// Integrates `spec` over each grid cell of spacing `epsilon` and
/// renormalizes so the weights sum to exactly one.
///
/// Cells meeting the support boundary use exact geometric overlap areas for
/// the three indicator shapes in dimensions 1 and 2; elsewhere (and for
/// radial tables) a supersample x supersample midpoint rule per axis is
/// used.  The pre-renormalization sum is returned through `raw_sum` when
/// non-null.
DiscreteKernel discretize_kernel(const KernelSpec& spec, int dim, double epsilon,
                                 int supersample = 32, double* raw_sum = nullptr);

/// The count-based neighborhood of classic radius-n totalistic rules: a
/// (2n+1)^D cube of equal weights 1/(2n+1)^D.  Grid spacing is 1/n for
/// n >= 1 (so the physical support is about the unit cube) and 1 for n = 0
/// (identity kernel).
DiscreteKernel uniform_kernel(int dim, long n);

/// Convolves the weight table with a truncated discrete Gaussian of
/// standard deviation sigma_cells grid cells (truncated at 4 sigma), then
/// renormalizes.  sigma_cells = 0 returns the input unchanged.
DiscreteKernel mollify(const DiscreteKernel& k, double sigma_cells);

/// sum_z |a_z - b_z| over the union of supports (weights are unitless
/// masses, so no cell-measure factor).  Kernels must share dim and epsilon.
double kernel_l1_distance(const DiscreteKernel& a, const DiscreteKernel& b);

/// CSV dump: header "dz1,...,dzD,weight", one row per window cell in
/// box-iteration order, weights printed with round-trip precision.
void write_kernel_csv(std::ostream& os, const DiscreteKernel& k);

}  // namespace ltl
