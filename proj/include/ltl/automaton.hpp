#pragma once

#include <cstdint>
#include <vector>

#include "ltl/convolve.hpp"
#include "ltl/grid.hpp"
#include "ltl/kernel.hpp"

namespace ltl {

/// Rule thresholds (s0, b0, b1, s1): a live cell stays alive iff its
/// neighborhood average alpha lies in the survival interval [s0, s1]; a
/// dead cell becomes alive iff alpha lies in the birth interval [b0, b1].
/// The birth interval nests inside the survival interval.  Intervals are
/// closed and membership is tested with exact float comparison.
struct ThresholdQuad {
    enum class Mode {
        Strict,  ///< 0 < s0 <= b0 < b1 <= s1 <= 1
        Closed,  ///< 0 <= s0 <= b0 <= b1 <= s1 <= 1
    };

    double s0 = 0.0, b0 = 0.0, b1 = 0.0, s1 = 0.0;
    Mode mode = Mode::Closed;

    bool survives(double alpha) const { return s0 <= alpha && alpha <= s1; }
    bool births(double alpha) const { return b0 <= alpha && alpha <= b1; }
};

/// Validates the mode's inequality chain; ThresholdOrderError names the
/// first failing inequality.
ThresholdQuad validate_quad(double s0, double b0, double b1, double s1,
                            ThresholdQuad::Mode mode);

/// Closed quad (1/3, 1/3, 1/3, 4/9): with the radius-1 uniform count
/// kernel this reproduces Conway's rule.
ThresholdQuad conway_quad();

/// Closed quad (706/2601, 706/2601, 958/2601, 1216/2601), paired with
/// uniform radius-n kernels for large-radius bug hunting.
ThresholdQuad evans_fig1_quad();

/// A complete rule: thresholds + discrete kernel + execution knobs.
struct AutomatonSpec {
    ThresholdQuad quad;
    DiscreteKernel kernel;
    Backend backend = Backend::Auto;
    int threads = 1;
    /// Cap on the cell count of any expanded box (growable domains can
    /// grow each step); exceeding it raises ResourceLimitError.
    std::uint64_t max_cells = 1ull << 26;
    /// Empty margin kept around the support after each step.
    long box_margin = 1;
};

/// Conway preset: uniform n=1 kernel + conway_quad.
AutomatonSpec conway_preset();
/// Large-radius preset: uniform radius-n kernel + evans_fig1_quad.
AutomatonSpec evans_fig1_preset(long n);

/// Neighborhood averages alpha = k * a over the box expanded by the kernel
/// radius (growable axes) or the domain box (periodic axes).
ScalarField neighborhood_alpha(const BinaryConfig& a, const AutomatonSpec& spec);

/// One synchronous update; the result box is trimmed to support plus
/// box_margin on growable axes.
BinaryConfig step(const BinaryConfig& a, const AutomatonSpec& spec);

/// Pointwise f*s(alpha) + (1-f)*b(alpha) for real-valued states in [0,1];
/// agrees with step on binary fields.  Values outside [0,1] raise
/// InvalidArgumentError.
ScalarField real_step(const ScalarField& f, const AutomatonSpec& spec);

/// Trajectory [a, step(a), ..., step^T(a)] (length T+1).
std::vector<BinaryConfig> run(const BinaryConfig& a, const AutomatonSpec& spec, int steps);

/// Indicator cells of the survival and birth windows of alpha over the
/// expanded box: S = {z : alpha(z) in [s0,s1]}, B = {z : alpha(z) in
/// [b0,b1]}.  In strict mode B is a subset of S by interval nesting.
struct ThresholdSets {
    PointSet survival;
    PointSet birth;
};

ThresholdSets threshold_sets(const BinaryConfig& a, const AutomatonSpec& spec);

/// Transversality probe: mass of cells whose alpha falls strictly within
/// delta of a survival / birth threshold, and within eta of any threshold.
struct MarginReport {
    double delta = 0.0;
    double eta = 0.0;
    double ms = 0.0;       ///< eps^D x #{alpha in (s0-d,s0+d) u (s1-d,s1+d)}
    double mb = 0.0;       ///< same for b0, b1
    double m_exact = 0.0;  ///< eps^D x #{min_theta |alpha-theta| <= eta}
};

MarginReport margin_report(const BinaryConfig& a, const AutomatonSpec& spec,
                           double delta, double eta = 1e-9);

}  // namespace ltl
