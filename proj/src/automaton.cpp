#include "ltl/automaton.hpp"

#include <cmath>
#include <limits>

namespace ltl {

ThresholdQuad validate_quad(double s0, double b0, double b1, double s1,
                            ThresholdQuad::Mode mode) {
    auto bad = [](const char* what) {
        throw ThresholdOrderError(std::string("threshold order: ") + what + " fails");
    };
    for (double v : {s0, b0, b1, s1})
        if (!std::isfinite(v)) bad("finite thresholds");
    if (mode == ThresholdQuad::Mode::Strict) {
        if (!(0.0 < s0)) bad("0 < s0");
        if (!(s0 <= b0)) bad("s0 <= b0");
        if (!(b0 < b1)) bad("b0 < b1");
        if (!(b1 <= s1)) bad("b1 <= s1");
        if (!(s1 <= 1.0)) bad("s1 <= 1");
    } else {
        if (!(0.0 <= s0)) bad("0 <= s0");
        if (!(s0 <= b0)) bad("s0 <= b0");
        if (!(b0 <= b1)) bad("b0 <= b1");
        if (!(b1 <= s1)) bad("b1 <= s1");
        if (!(s1 <= 1.0)) bad("s1 <= 1");
    }
    return ThresholdQuad{s0, b0, b1, s1, mode};
}

ThresholdQuad conway_quad() {
    return validate_quad(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 4.0 / 9.0,
                         ThresholdQuad::Mode::Closed);
}

ThresholdQuad evans_fig1_quad() {
    return validate_quad(706.0 / 2601.0, 706.0 / 2601.0, 958.0 / 2601.0, 1216.0 / 2601.0,
                         ThresholdQuad::Mode::Closed);
}

AutomatonSpec conway_preset() {
    AutomatonSpec spec;
    spec.quad = conway_quad();
    spec.kernel = uniform_kernel(2, 1);
    return spec;
}

AutomatonSpec evans_fig1_preset(long n) {
    if (n < 1) throw InvalidArgumentError("preset radius must be >= 1");
    AutomatonSpec spec;
    spec.quad = evans_fig1_quad();
    spec.kernel = uniform_kernel(2, n);
    return spec;
}

namespace {

void revalidate(const AutomatonSpec& spec) {
    validate_quad(spec.quad.s0, spec.quad.b0, spec.quad.b1, spec.quad.s1, spec.quad.mode);
}

void check_growth(const Domain& dom, const DiscreteKernel& k, std::uint64_t max_cells) {
    std::uint64_t cells = 1;
    for (int d = 0; d < dom.dim; ++d) {
        auto sd = static_cast<std::size_t>(d);
        std::uint64_t e = static_cast<std::uint64_t>(dom.extent[sd]);
        if (dom.boundary[sd] == BoundaryMode::GrowableZero)
            e += 2 * static_cast<std::uint64_t>(k.radius[sd]);
        if (e != 0 && cells > max_cells / e)
            throw ResourceLimitError("expanded box exceeds the cell cap");
        cells *= e;
    }
    if (cells > max_cells) throw ResourceLimitError("expanded box exceeds the cell cap");
}

}  // namespace

ScalarField neighborhood_alpha(const BinaryConfig& a, const AutomatonSpec& spec) {
    check_growth(a.domain, spec.kernel, spec.max_cells);
    return convolve(a, spec.kernel, spec.backend, spec.threads);
}

BinaryConfig step(const BinaryConfig& a, const AutomatonSpec& spec) {
    revalidate(spec);
    ScalarField alpha = neighborhood_alpha(a, spec);
    BinaryConfig next;
    next.domain = alpha.domain;
    next.origin = alpha.origin;
    next.cells.resize(alpha.values.size());
    const auto b = alpha.box();
    for (std::size_t i = 0; i < alpha.values.size(); ++i) {
        const double v = alpha.values[i];
        const bool live = a.at(b.coord(i)) != 0;
        next.cells[i] = (live ? spec.quad.survives(v) : spec.quad.births(v)) ? 1 : 0;
    }
    return normalize_box(next, spec.box_margin);
}

ScalarField real_step(const ScalarField& f, const AutomatonSpec& spec) {
    revalidate(spec);
    for (double v : f.values)
        if (!(0.0 <= v && v <= 1.0))
            throw InvalidArgumentError("real_step input values must lie in [0,1]");
    check_growth(f.domain, spec.kernel, spec.max_cells);
    ScalarField alpha = convolve(f, spec.kernel, spec.backend, spec.threads);
    ScalarField out = alpha;
    const auto b = alpha.box();
    for (std::size_t i = 0; i < alpha.values.size(); ++i) {
        const double v = alpha.values[i];
        const double fv = f.at(b.coord(i));
        const double s = spec.quad.survives(v) ? 1.0 : 0.0;
        const double bb = spec.quad.births(v) ? 1.0 : 0.0;
        out.values[i] = fv * s + (1.0 - fv) * bb;
    }
    return out;
}

std::vector<BinaryConfig> run(const BinaryConfig& a, const AutomatonSpec& spec, int steps) {
    if (steps < 0) throw InvalidArgumentError("steps must be >= 0");
    std::vector<BinaryConfig> traj;
    traj.reserve(static_cast<std::size_t>(steps) + 1);
    traj.push_back(a);
    for (int t = 0; t < steps; ++t) traj.push_back(step(traj.back(), spec));
    return traj;
}

ThresholdSets threshold_sets(const BinaryConfig& a, const AutomatonSpec& spec) {
    revalidate(spec);
    ScalarField alpha = neighborhood_alpha(a, spec);
    ThresholdSets ts{{alpha.domain, {}}, {alpha.domain, {}}};
    const auto b = alpha.box();
    for (std::size_t i = 0; i < alpha.values.size(); ++i) {
        const double v = alpha.values[i];
        if (spec.quad.survives(v)) ts.survival.points.push_back(b.coord(i));
        if (spec.quad.births(v)) ts.birth.points.push_back(b.coord(i));
    }
    return ts;
}

MarginReport margin_report(const BinaryConfig& a, const AutomatonSpec& spec, double delta,
                           double eta) {
    revalidate(spec);
    if (!(delta >= eta && eta >= 0.0))
        throw InvalidArgumentError("margin probe needs delta >= eta >= 0");
    MarginReport rep;
    rep.delta = delta;
    rep.eta = eta;
    auto sb = a.support_box();
    if (!sb) return rep;  // alpha vanishes: nothing within kernel range
    ScalarField alpha = neighborhood_alpha(a, spec);
    // Restrict to cells within kernel range of the support: alpha = 0
    // beyond, which would otherwise count as spurious hits for quads with a
    // zero threshold.
    detail::Box roi = *sb;
    for (int d = 0; d < a.domain.dim; ++d) {
        auto sd = static_cast<std::size_t>(d);
        if (a.domain.boundary[sd] == BoundaryMode::Periodic) {
            roi.origin[sd] = alpha.origin[sd];
            roi.extent[sd] = alpha.domain.extent[sd];
        } else {
            roi.origin[sd] -= spec.kernel.radius[sd];
            roi.extent[sd] += 2 * spec.kernel.radius[sd];
        }
    }
    const ThresholdQuad& q = spec.quad;
    std::uint64_t ns = 0, nb = 0, nx = 0;
    const std::size_t n = roi.cell_count();
    for (std::size_t i = 0; i < n; ++i) {
        const double v = alpha.at(roi.coord(i));
        const bool near_s = (std::abs(v - q.s0) < delta) || (std::abs(v - q.s1) < delta);
        const bool near_b = (std::abs(v - q.b0) < delta) || (std::abs(v - q.b1) < delta);
        if (near_s) ++ns;
        if (near_b) ++nb;
        const double dmin = std::min(std::min(std::abs(v - q.s0), std::abs(v - q.s1)),
                                     std::min(std::abs(v - q.b0), std::abs(v - q.b1)));
        if (dmin <= eta) ++nx;
    }
    const double measure = a.domain.cell_measure();
    rep.ms = measure * static_cast<double>(ns);
    rep.mb = measure * static_cast<double>(nb);
    rep.m_exact = measure * static_cast<double>(nx);
    return rep;
}

}  // namespace ltl
