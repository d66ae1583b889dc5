#pragma once

#include <string>
#include <vector>

#include "ltl/automaton.hpp"
#include "ltl/grid.hpp"
#include "ltl/kernel.hpp"

namespace ltl {

/// Fixed-point check with the equivalent threshold-set certificate.
struct StillLifeCheck {
    bool fixed = false;         ///< step(a) == a exactly
    double gap = 0.0;           ///< l1_distance(step(a), a)
    bool inclusion_ok = false;  ///< B subset support(a) subset S
};

StillLifeCheck is_still_life(const BinaryConfig& a, const AutomatonSpec& spec);

/// Classification of a trajectory by its first recurrence up to
/// translation.  Each state's support box is translated to the origin and
/// hashed; the first recurrence at lag p with box-corner drift d yields
/// period p and displacement -d per period (so a pattern whose body moves
/// by +v per period reports displacement p*v in cells).
struct LifeFormReport {
    enum class Kind { Still, Oscillator, Bug, TransientToEmpty, Unresolved };

    Kind kind = Kind::Unresolved;
    int period = 0;        ///< recurrence lag (Still: 1)
    Coord displacement;    ///< total cells per period (Bug: nonzero)
    int steps_used = 0;
};

std::string kind_name(LifeFormReport::Kind k);

LifeFormReport detect_lifeform(const BinaryConfig& a, const AutomatonSpec& spec,
                               int max_steps, int max_period);

/// An analytically constructed candidate still life plus the closed-form
/// validity verdict of its construction (evaluated from the thresholds
/// alone, independent of any simulation).
struct Construction {
    BinaryConfig config;
    bool predicted_valid = false;
};

/// Norm ball of radius r rasterized at spacing epsilon, intended for the
/// unit ball kernel of the same norm.  predicted_valid requires a strict
/// quad and holds iff s0 <= 1/2^D, r^D in [s0, b0) and r < 1/2 (the
/// mass ratio of the ball inside its own kernel support is r^D).
Construction construct_ball(AnalyticShape::Norm norm, double r, const ThresholdQuad& quad,
                            double epsilon, int dim = 2);

/// Closed-form neighborhood values of an infinite flat ribbon of width w
/// under the unit l2-disk kernel: ss at the ribbon boundary, s1_center on
/// the centerline.  Both strictly increase in w; ss < s1_center on (0,1).
struct RibbonThresholds {
    double w = 0.0;
    double ss = 0.0;
    double s1_center = 0.0;
};

RibbonThresholds ribbon_thresholds(double w);

/// Axis-aligned flat ribbon of width w (periodic along `axis` with the
/// given physical length).  predicted_valid = (s0 <= ss(w) <= b0) and
/// (s1_center(w) <= s1), requiring a strict quad.
Construction construct_ribbon(double w, int axis, const ThresholdQuad& quad,
                              double epsilon, double length, int dim = 2);

/// Halfspace mass h(r) = integral of the kernel over {x1 <= r}.  Closed
/// form for the unit l2 disk; radial quadrature for radial tables;
/// UnsupportedError for kernels that are not rotationally symmetric.
double curtain_profile(const KernelSpec& kernel, double r);

/// Neighborhood values of the annulus r <= |x| <= R under a rotationally
/// symmetric kernel, scanned along a radial ray by quadrature:
///   ss      = value at radius R (outer boundary),
///   s1_max  = max over radii in [r, R],
///   b_lower = max over radii in [0, r),
///   b_upper = min over radii in [0, r).
/// The still-life predicate is (s0 <= ss < b0) and (s1_max <= s1) and
/// (b_lower < b0 or b_upper > b1).
struct AnnulusThresholds {
    double ss = 0.0;
    double b_lower = 0.0;
    double b_upper = 0.0;
    double s1_max = 0.0;
};

AnnulusThresholds annulus_thresholds(const KernelSpec& kernel, double r, double R,
                                     int samples = 2048);

/// Enumerates every binary config on the given box (surroundings zero) and
/// returns the exact fixed points of step, in ascending bitmask order (bit
/// i = flat cell i).  More than 20 cells raises ResourceLimitError.
std::vector<BinaryConfig> exhaustive_still_search(const Domain& grid,
                                                  const AutomatonSpec& spec);

}  // namespace ltl
