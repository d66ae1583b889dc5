#include "ltl/lifeform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace ltl {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Support-cropped state with the box corner translated off: two states
// compare equal iff they coincide up to translation (growable axes).
struct CanonState {
    bool empty = true;
    std::vector<long> extent;
    std::vector<std::uint8_t> bits;
    Coord corner;
    std::size_t hash = 0;
};

CanonState canonicalize(const BinaryConfig& a) {
    CanonState c;
    const int D = a.domain.dim;
    c.corner.assign(static_cast<std::size_t>(D), 0);
    auto sb = a.support_box();
    if (!sb) return c;
    c.empty = false;
    detail::Box crop;
    crop.origin.resize(static_cast<std::size_t>(D));
    crop.extent.resize(static_cast<std::size_t>(D));
    for (int d = 0; d < D; ++d) {
        auto sd = static_cast<std::size_t>(d);
        if (a.domain.boundary[sd] == BoundaryMode::Periodic) {
            // No translation quotient across the seam: keep stored coords.
            crop.origin[sd] = a.origin[sd];
            crop.extent[sd] = a.domain.extent[sd];
            c.corner[sd] = 0;
        } else {
            crop.origin[sd] = sb->origin[sd];
            crop.extent[sd] = sb->extent[sd];
            c.corner[sd] = sb->origin[sd];
        }
    }
    c.extent = crop.extent;
    const std::size_t n = crop.cell_count();
    c.bits.resize(n);
    for (std::size_t i = 0; i < n; ++i) c.bits[i] = a.at(crop.coord(i));
    std::size_t h = 1469598103934665603ull;  // FNV-1a
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    for (long e : c.extent) mix(static_cast<std::uint64_t>(e));
    for (std::uint8_t b : c.bits) mix(b);
    c.hash = h;
    return c;
}

bool same_pattern(const CanonState& x, const CanonState& y) {
    return x.empty == y.empty && x.extent == y.extent && x.bits == y.bits;
}

}  // namespace

std::string kind_name(LifeFormReport::Kind k) {
    switch (k) {
        case LifeFormReport::Kind::Still: return "still";
        case LifeFormReport::Kind::Oscillator: return "oscillator";
        case LifeFormReport::Kind::Bug: return "bug";
        case LifeFormReport::Kind::TransientToEmpty: return "transient-to-empty";
        case LifeFormReport::Kind::Unresolved: return "unresolved";
    }
    return "?";
}

StillLifeCheck is_still_life(const BinaryConfig& a, const AutomatonSpec& spec) {
    StillLifeCheck out;
    BinaryConfig next = step(a, spec);
    out.gap = l1_distance(next, a);
    out.fixed = out.gap == 0.0;

    ThresholdSets ts = threshold_sets(a, spec);
    // Box-iteration order is coordinate-lexicographic, so the point lists
    // are sorted and support binary search.
    bool ok = true;
    const auto b = a.box();
    for (std::size_t i = 0; i < a.cells.size() && ok; ++i) {
        if (!a.cells[i]) continue;
        if (!std::binary_search(ts.survival.points.begin(), ts.survival.points.end(),
                                b.coord(i)))
            ok = false;  // a live cell outside the survival window
    }
    for (const Coord& p : ts.birth.points) {
        if (!ok) break;
        if (!a.at(p)) ok = false;  // a dead cell inside the birth window
    }
    out.inclusion_ok = ok;
    return out;
}

LifeFormReport detect_lifeform(const BinaryConfig& a, const AutomatonSpec& spec,
                               int max_steps, int max_period) {
    if (max_period < 1 || max_steps < max_period)
        throw InvalidArgumentError("need max_steps >= max_period >= 1");
    LifeFormReport rep;
    rep.displacement.assign(static_cast<std::size_t>(a.domain.dim), 0);

    std::vector<CanonState> states;
    states.reserve(static_cast<std::size_t>(max_steps) + 1);
    states.push_back(canonicalize(a));
    BinaryConfig cur = a;
    for (int t = 1; t <= max_steps; ++t) {
        cur = step(cur, spec);
        CanonState c = canonicalize(cur);
        if (c.empty && !states[0].empty) {
            rep.kind = LifeFormReport::Kind::TransientToEmpty;
            rep.steps_used = t;
            return rep;
        }
        const int max_lag = std::min(t, max_period);
        for (int lag = 1; lag <= max_lag; ++lag) {
            const CanonState& ref = states[static_cast<std::size_t>(t - lag)];
            if (ref.hash != c.hash || !same_pattern(ref, c)) continue;
            Coord drift(c.corner.size());
            bool moved = false;
            for (std::size_t d = 0; d < c.corner.size(); ++d) {
                drift[d] = c.corner[d] - ref.corner[d];
                if (drift[d] != 0) moved = true;
            }
            rep.period = lag;
            for (std::size_t d = 0; d < drift.size(); ++d) rep.displacement[d] = -drift[d];
            rep.steps_used = t;
            if (!moved)
                rep.kind = lag == 1 ? LifeFormReport::Kind::Still
                                    : LifeFormReport::Kind::Oscillator;
            else
                rep.kind = LifeFormReport::Kind::Bug;
            return rep;
        }
        states.push_back(std::move(c));
    }
    rep.kind = LifeFormReport::Kind::Unresolved;
    rep.steps_used = max_steps;
    return rep;
}

// ---- analytic constructions ----------------------------------------------

namespace {

void require_strict(const ThresholdQuad& q) {
    validate_quad(q.s0, q.b0, q.b1, q.s1, ThresholdQuad::Mode::Strict);
}

}  // namespace

Construction construct_ball(AnalyticShape::Norm norm, double r, const ThresholdQuad& quad,
                            double epsilon, int dim) {
    if (!(r > 0.0)) throw InvalidArgumentError("ball radius must be positive");
    if (!(epsilon > 0.0)) throw InvalidArgumentError("epsilon must be positive");
    if (dim < 1) throw InvalidArgumentError("dim must be >= 1");
    require_strict(quad);

    const double rD = std::pow(r, dim);
    const double half_pow = std::pow(0.5, dim);
    Construction out;
    out.predicted_valid =
        quad.s0 <= half_pow && rD >= quad.s0 && rD < quad.b0 && r < 0.5;

    long h = static_cast<long>(std::ceil(r / epsilon)) + 1;
    Domain dom = Domain::growable(dim, epsilon,
                                  std::vector<long>(static_cast<std::size_t>(dim), 2 * h + 1));
    out.config = rasterize(AnalyticShape::ball(norm, r), dom);
    return out;
}

RibbonThresholds ribbon_thresholds(double w) {
    if (!(w > 0.0 && w <= 1.0))
        throw InvalidArgumentError("ribbon width must lie in (0, 1]");
    RibbonThresholds rt;
    rt.w = w;
    rt.ss = 0.5 + (w * std::sqrt(1.0 - w * w) - std::acos(w)) / kPi;
    rt.s1_center =
        1.0 + (0.5 * w * std::sqrt(4.0 - w * w) - 2.0 * std::acos(0.5 * w)) / kPi;
    return rt;
}

Construction construct_ribbon(double w, int axis, const ThresholdQuad& quad, double epsilon,
                              double length, int dim) {
    if (dim < 2) throw InvalidArgumentError("ribbon needs dim >= 2");
    if (axis < 0 || axis >= dim) throw InvalidArgumentError("ribbon axis out of range");
    if (!(epsilon > 0.0)) throw InvalidArgumentError("epsilon must be positive");
    if (!(length > 0.0)) throw InvalidArgumentError("ribbon length must be positive");
    require_strict(quad);
    RibbonThresholds rt = ribbon_thresholds(w);

    Construction out;
    out.predicted_valid = quad.s0 <= rt.ss && rt.ss <= quad.b0 && rt.s1_center <= quad.s1;

    Domain dom;
    dom.dim = dim;
    dom.epsilon = epsilon;
    dom.extent.resize(static_cast<std::size_t>(dim));
    dom.boundary.resize(static_cast<std::size_t>(dim));
    long h = static_cast<long>(std::ceil(0.5 * w / epsilon)) + 1;
    for (int d = 0; d < dim; ++d) {
        auto sd = static_cast<std::size_t>(d);
        if (d == axis) {
            dom.extent[sd] = std::max(1L, std::lround(length / epsilon));
            dom.boundary[sd] = BoundaryMode::Periodic;
        } else {
            dom.extent[sd] = 2 * h + 1;
            dom.boundary[sd] = BoundaryMode::GrowableZero;
        }
    }
    dom.validate();
    out.config = rasterize(AnalyticShape::ribbon(axis, w), dom);
    return out;
}

namespace {

// Composite Simpson over [a, b].
template <typename F>
double simpson(F f, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + h * i) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

double clamp1(double v) { return std::clamp(v, -1.0, 1.0); }

// Radial mass density of a rotationally symmetric kernel in 2-D: the
// kernel's value at radius s (so total mass = ∫ f(s)·s·2π ds = 1).
struct RadialDensity {
    const KernelSpec& spec;
    double operator()(double s) const {
        std::vector<double> x = {s, 0.0};
        return spec.value(x, 2);
    }
    double support() const { return spec.radius; }
};

void require_rotational(const KernelSpec& spec) {
    if (spec.shape != KernelSpec::Shape::BallL2 &&
        spec.shape != KernelSpec::Shape::RadialTable)
        throw UnsupportedError("kernel is not rotationally symmetric");
}

}  // namespace

double curtain_profile(const KernelSpec& kernel, double r) {
    require_rotational(kernel);
    if (kernel.shape == KernelSpec::Shape::BallL2) {
        const double t = r / kernel.radius;
        if (t <= -1.0) return 0.0;
        if (t >= 1.0) return 1.0;
        return 0.5 + (t * std::sqrt(1.0 - t * t) + std::asin(t)) / kPi;
    }
    RadialDensity f{kernel};
    const double R = f.support();
    if (r <= -R) return 0.0;
    if (r >= R) return 1.0;
    // Halfspace x1 <= r: angular measure of {rho cos(phi) <= r} is
    // 2*pi - 2*acos(clamp(r/rho)).
    auto integrand = [&](double rho) {
        if (rho <= 0.0) return 0.0;
        double ang = 2.0 * kPi - 2.0 * std::acos(clamp1(r / rho));
        return f(rho) * rho * ang;
    };
    return simpson(integrand, 0.0, R, 4096);
}

AnnulusThresholds annulus_thresholds(const KernelSpec& kernel, double r, double R,
                                     int samples) {
    require_rotational(kernel);
    if (!(0.0 < r && r < R)) throw InvalidArgumentError("annulus needs 0 < r < R");
    if (samples < 8) throw InvalidArgumentError("annulus sampling needs samples >= 8");

    RadialDensity f{kernel};
    const double K = f.support();

    // kappa * annulus indicator, evaluated at distance rho0 from the center:
    // integrate the kernel's radial shells, each contributing the angular
    // measure of the shell arc that lands inside the annulus.
    auto field_at = [&](double rho0) {
        auto integrand = [&](double s) {
            if (s <= 0.0) return 0.0;
            double ang;
            if (rho0 * s < 1e-12) {
                ang = (r <= s && s <= R) ? 2.0 * kPi : 0.0;
            } else {
                double lo = (r * r - rho0 * rho0 - s * s) / (2.0 * rho0 * s);
                double hi = (R * R - rho0 * rho0 - s * s) / (2.0 * rho0 * s);
                ang = 2.0 * std::max(0.0, std::acos(clamp1(lo)) - std::acos(clamp1(hi)));
            }
            return f(s) * s * ang;
        };
        return simpson(integrand, 0.0, K, samples);
    };

    AnnulusThresholds out;
    out.ss = field_at(R);
    out.s1_max = 0.0;
    for (int i = 0; i <= samples; ++i) {
        double rho0 = r + (R - r) * static_cast<double>(i) / static_cast<double>(samples);
        out.s1_max = std::max(out.s1_max, field_at(rho0));
    }
    out.b_lower = 0.0;
    out.b_upper = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        double rho0 = r * static_cast<double>(i) / static_cast<double>(samples);
        double v = field_at(rho0);
        out.b_lower = std::max(out.b_lower, v);
        out.b_upper = std::min(out.b_upper, v);
    }
    return out;
}

std::vector<BinaryConfig> exhaustive_still_search(const Domain& grid,
                                                  const AutomatonSpec& spec) {
    grid.validate();
    if (grid.dim != spec.kernel.dim)
        throw DimensionMismatchError("grid/kernel dimension mismatch");
    std::uint64_t cells = 1;
    for (long e : grid.extent) cells *= static_cast<std::uint64_t>(e);
    if (cells > 20) throw ResourceLimitError("exhaustive search caps at 20 cells");

    Domain dom = Domain::growable(grid.dim, grid.epsilon, grid.extent);
    BinaryConfig base{dom, std::vector<long>(static_cast<std::size_t>(grid.dim), 0), {}};
    base.cells.assign(static_cast<std::size_t>(cells), 0);

    std::vector<BinaryConfig> fixed;
    const std::uint64_t total = 1ull << cells;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        BinaryConfig c = base;
        for (std::uint64_t i = 0; i < cells; ++i)
            c.cells[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? 1 : 0;
        if (l1_distance(step(c, spec), c) == 0.0) fixed.push_back(std::move(c));
    }
    return fixed;
}

}  // namespace ltl
