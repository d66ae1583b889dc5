#pragma once

#include "ltl/automaton.hpp"
#include "ltl/grid.hpp"

namespace ltl {

/// Averaged Hausdorff distance between nonempty point sets:
///   1/2 sup_x inf_y d(x,y) + 1/2 sup_y inf_x d(x,y)
/// with d the Euclidean distance between cell centers in physical units
/// (grid offset x epsilon).  Still a metric; differs from the textbook max
/// form (exposed as hausdorff_max).  Empty set -> UndefinedDistanceError.
double hausdorff(const PointSet& x, const PointSet& y);

/// Textbook max-form Hausdorff distance, for comparison.
double hausdorff_max(const PointSet& x, const PointSet& y);

/// l1_distance(a, b) + hausdorff of the two support boundaries.
/// Configs with empty support -> UndefinedDistanceError.
double d_star(const BinaryConfig& a, const BinaryConfig& b);

/// exp(-R), where R is the largest radius such that a and b agree on every
/// cell whose center lies within R of the origin (R = 0 when the origin
/// cell differs).  Identical configs: R caps at the stored box's inradius,
/// measured in whole cells from the origin cell to the nearest box edge.
double compact_open_distance(const BinaryConfig& a, const BinaryConfig& b);

/// Gradient / separation diagnostics of a still life:
///   m_inf = max over boundary cells of S and B of 1 / |grad alpha|,
///           +infinity when a gradient vanishes (|grad| < 1e-9) or a
///           boundary cell's alpha sits within 1e-9 of a threshold (a
///           plateau exactly at threshold, as for count-based rules);
///   gamma = min(hausdorff(dB, dA), hausdorff(dA, dS)), where an empty
///           boundary set contributes +infinity to the min.
/// grad alpha uses central differences with physical step fd_step x
/// epsilon (one-sided at the box edge).  PreconditionError if a is not a
/// fixed point.
struct StabilityReport {
    double m_inf = 0.0;
    double gamma = 0.0;
};

StabilityReport stability_report(const BinaryConfig& a, const AutomatonSpec& spec,
                                 long fd_step = 1);

}  // namespace ltl
