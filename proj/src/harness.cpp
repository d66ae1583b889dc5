#include "ltl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "json.hpp"

#include "ltl/pattern_io.hpp"

namespace ltl {

namespace {

long floor_div_l(long a, long b) {
    long q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

int infer_dim(const AnalyticShape& s) {
    switch (s.kind) {
        case AnalyticShape::Kind::Ball:
        case AnalyticShape::Kind::Annulus:
            if (!s.center.empty()) return static_cast<int>(s.center.size());
            return 2;
        case AnalyticShape::Kind::Rect:
            return static_cast<int>(s.lo.size());
        case AnalyticShape::Kind::Ribbon:
            if (!s.center.empty()) return static_cast<int>(s.center.size());
            return std::max(2, s.axis + 1);
        case AnalyticShape::Kind::Union: {
            int d = 2;
            for (const auto& p : s.parts) d = std::max(d, infer_dim(p));
            return d;
        }
        case AnalyticShape::Kind::Empty:
            return 2;
    }
    return 2;
}

double center_at(const AnalyticShape& s, int d) {
    return s.center.empty() ? 0.0 : s.center[static_cast<std::size_t>(d)];
}

// Physical bounding interval per axis; unbounded axes get +-infinity.
void shape_bounds(const AnalyticShape& s, int dim, std::vector<double>& lo,
                  std::vector<double>& hi) {
    const double inf = std::numeric_limits<double>::infinity();
    lo.assign(static_cast<std::size_t>(dim), 0.0);
    hi.assign(static_cast<std::size_t>(dim), 0.0);
    switch (s.kind) {
        case AnalyticShape::Kind::Empty:
            break;
        case AnalyticShape::Kind::Ball:
            for (int d = 0; d < dim; ++d) {
                lo[d] = center_at(s, d) - s.radius;
                hi[d] = center_at(s, d) + s.radius;
            }
            break;
        case AnalyticShape::Kind::Annulus:
            for (int d = 0; d < dim; ++d) {
                lo[d] = center_at(s, d) - s.outer;
                hi[d] = center_at(s, d) + s.outer;
            }
            break;
        case AnalyticShape::Kind::Rect:
            for (int d = 0; d < dim; ++d) {
                lo[d] = s.lo[static_cast<std::size_t>(d)];
                hi[d] = s.hi[static_cast<std::size_t>(d)];
            }
            break;
        case AnalyticShape::Kind::Ribbon:
            for (int d = 0; d < dim; ++d) {
                if (d == s.axis) {
                    lo[d] = -inf;
                    hi[d] = inf;
                } else {
                    lo[d] = center_at(s, d) - 0.5 * s.width;
                    hi[d] = center_at(s, d) + 0.5 * s.width;
                }
            }
            break;
        case AnalyticShape::Kind::Union: {
            const double big = std::numeric_limits<double>::max();
            lo.assign(static_cast<std::size_t>(dim), big);
            hi.assign(static_cast<std::size_t>(dim), -big);
            std::vector<double> plo, phi;
            for (const auto& p : s.parts) {
                shape_bounds(p, dim, plo, phi);
                for (int d = 0; d < dim; ++d) {
                    lo[d] = std::min(lo[d], plo[d]);
                    hi[d] = std::max(hi[d], phi[d]);
                }
            }
            if (s.parts.empty()) {
                lo.assign(static_cast<std::size_t>(dim), 0.0);
                hi.assign(static_cast<std::size_t>(dim), 0.0);
            }
            break;
        }
    }
}

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string shape_descriptor(const AnalyticShape& s) {
    switch (s.kind) {
        case AnalyticShape::Kind::Empty:
            return "empty";
        case AnalyticShape::Kind::Ball: {
            const char* n = s.norm == AnalyticShape::Norm::L1
                                ? "l1"
                                : s.norm == AnalyticShape::Norm::L2 ? "l2" : "linf";
            return std::string("ball-") + n + "(r=" + fmt_g(s.radius) + ")";
        }
        case AnalyticShape::Kind::Rect: {
            std::string out = "rect(";
            for (std::size_t d = 0; d < s.lo.size(); ++d) {
                if (d) out += "x";
                out += "[" + fmt_g(s.lo[d]) + "," + fmt_g(s.hi[d]) + ")";
            }
            return out + ")";
        }
        case AnalyticShape::Kind::Ribbon:
            return "ribbon(axis=" + std::to_string(s.axis) + ",w=" + fmt_g(s.width) + ")";
        case AnalyticShape::Kind::Annulus:
            return "annulus(" + fmt_g(s.inner) + "," + fmt_g(s.outer) + ")";
        case AnalyticShape::Kind::Union: {
            std::string out = "union(";
            for (std::size_t i = 0; i < s.parts.size(); ++i) {
                if (i) out += ",";
                out += shape_descriptor(s.parts[i]);
            }
            return out + ")";
        }
    }
    return "?";
}

std::string kernel_descriptor(const KernelSpec& k) {
    switch (k.shape) {
        case KernelSpec::Shape::BoxLinf:
            return "box-linf(R=" + fmt_g(k.radius) + ")";
        case KernelSpec::Shape::BallL2:
            return "ball-l2(R=" + fmt_g(k.radius) + ")";
        case KernelSpec::Shape::DiamondL1:
            return "diamond-l1(R=" + fmt_g(k.radius) + ")";
        case KernelSpec::Shape::RadialTable:
            return "radial-table(R=" + fmt_g(k.radius) +
                   ",k=" + std::to_string(k.table.size()) + ")";
    }
    return "?";
}

constexpr double kRibbonPeriod = 2.0;  ///< physical period used for unbounded axes

}  // namespace

LadderResult refinement_ladder(const AnalyticShape& shape, const ThresholdQuad& quad,
                               const KernelSpec& kernel, const std::vector<double>& eps_list,
                               int steps, const HarnessOptions& opts) {
    if (eps_list.empty()) throw ConfigurationError("eps_list: must be nonempty");
    for (double e : eps_list)
        if (!(e > 0.0)) throw ConfigurationError("eps_list: entries must be positive");
    for (std::size_t i = 0; i + 1 < eps_list.size(); ++i)
        if (!(eps_list[i + 1] < eps_list[i]))
            throw ConfigurationError("eps_list: must be strictly decreasing");
    if (steps < 0) throw ConfigurationError("steps: must be >= 0");

    const double eps0 = eps_list[0];
    std::vector<long> mult;
    for (double e : eps_list) {
        const double q = eps0 / e;
        const long m = std::lround(q);
        if (m < 1 || std::abs(q - static_cast<double>(m)) > 1e-9 * static_cast<double>(m))
            throw ConfigurationError("eps_list: coarsest epsilon must be an integer "
                                     "multiple of every level");
        mult.push_back(m);
    }

    const int D = infer_dim(shape);
    std::vector<double> plo, phi;
    shape_bounds(shape, D, plo, phi);
    const auto unbounded = shape.unbounded_axes(D);
    auto is_unbounded = [&](int d) {
        return std::find(unbounded.begin(), unbounded.end(), d) != unbounded.end();
    };

    // Coarse-grid box generous enough for the seed plus possible support
    // growth (at most the kernel radius per step); the per-level boxes are
    // its aligned refinements, so every level rasterizes the same region.
    const double pad =
        static_cast<double>(steps) * (kernel.radius + eps0) + 2.0 * eps0;
    std::vector<long> lo_c(static_cast<std::size_t>(D), 0);
    std::vector<long> hi_c(static_cast<std::size_t>(D), 0);
    long n0_period = 0;
    for (int d = 0; d < D; ++d) {
        if (is_unbounded(d)) {
            n0_period = std::max(1L, std::lround(kRibbonPeriod / eps0));
            continue;
        }
        lo_c[d] = static_cast<long>(std::floor((plo[d] - pad) / eps0)) - 1;
        hi_c[d] = static_cast<long>(std::ceil((phi[d] + pad) / eps0)) + 1;
    }

    LadderResult out;
    out.shape_id = shape_descriptor(shape);
    out.kernel_id = kernel_descriptor(kernel);
    out.quad = quad;

    std::vector<ScalarField> coarse;
    for (std::size_t li = 0; li < eps_list.size(); ++li) {
        const double eps = eps_list[li];
        const long m = mult[li];
        const long half = m / 2;

        Domain dom;
        dom.dim = D;
        dom.epsilon = eps;
        dom.extent.resize(static_cast<std::size_t>(D));
        dom.boundary.resize(static_cast<std::size_t>(D));
        std::vector<long> origin(static_cast<std::size_t>(D), 0);
        for (int d = 0; d < D; ++d) {
            auto sd = static_cast<std::size_t>(d);
            if (is_unbounded(d)) {
                dom.extent[sd] = n0_period * m;
                dom.boundary[sd] = BoundaryMode::Periodic;
                origin[sd] = -dom.extent[sd] / 2;
            } else {
                dom.extent[sd] = m * (hi_c[d] - lo_c[d] + 1);
                dom.boundary[sd] = BoundaryMode::GrowableZero;
                origin[sd] = m * lo_c[d] - half;
            }
        }
        dom.validate();
        BinaryConfig cur = rasterize(shape, dom, origin);

        AutomatonSpec lspec;
        lspec.quad = quad;
        lspec.kernel = discretize_kernel(kernel, D, eps);
        lspec.backend = opts.backend;
        lspec.threads = opts.threads;
        for (int t = 0; t < steps; ++t) cur = step(cur, lspec);

        LadderLevel level;
        level.epsilon = eps;
        level.steps = steps;
        level.self_gap = l1_distance(step(cur, lspec), cur);

        // Re-embed in a box aligned to the coarse lattice before averaging.
        if (m > 1) {
            const auto cb = cur.box();
            detail::Box ab = cb;
            for (int d = 0; d < D; ++d) {
                auto sd = static_cast<std::size_t>(d);
                if (is_unbounded(d)) continue;  // periodic extent already divides
                const long la = floor_div_l(cb.origin[sd] + half, m);
                const long ha = floor_div_l(cb.origin[sd] + cb.extent[sd] - 1 + half, m);
                ab.origin[sd] = m * la - half;
                ab.extent[sd] = m * (ha - la + 1);
            }
            BinaryConfig emb{cur.domain, ab.origin, {}};
            emb.domain.extent = ab.extent;
            emb.cells.resize(ab.cell_count());
            for (std::size_t i = 0; i < emb.cells.size(); ++i)
                emb.cells[i] = cur.at(ab.coord(i));
            cur = std::move(emb);
        }
        ScalarField avg = coarsen(cur, m);
        avg.domain.epsilon = eps0;  // exact, avoiding the eps*m float product
        coarse.push_back(std::move(avg));
        out.levels.push_back(level);
    }

    const ScalarField& finest = coarse.back();
    for (std::size_t li = 0; li < coarse.size(); ++li)
        out.levels[li].gap_to_finest = l1_distance(coarse[li], finest);
    return out;
}

PerturbationResult perturbation_study(PerturbationKind kind, const BinaryConfig& a,
                                      const AutomatonSpec& spec, const KernelSpec& kernel,
                                      const std::vector<double>& sizes) {
    if (sizes.empty()) throw InvalidArgumentError("perturbation sizes must be nonempty");
    for (double s : sizes)
        if (!(s > 0.0)) throw InvalidArgumentError("perturbation sizes must be positive");
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i)
        if (!(sizes[i + 1] < sizes[i]))
            throw InvalidArgumentError("perturbation sizes must be strictly decreasing");

    const BinaryConfig base = step(a, spec);
    PerturbationResult out;
    for (double delta : sizes) {
        AutomatonSpec pspec = spec;
        if (kind == PerturbationKind::Threshold) {
            const auto& q = spec.quad;
            pspec.quad = validate_quad(q.s0 + delta, q.b0 + delta, q.b1 + delta,
                                       q.s1 + delta, q.mode);
        } else {
            KernelSpec ks = kernel;
            ks.radius *= 1.0 + delta;
            pspec.kernel = discretize_kernel(ks, a.domain.dim, a.domain.epsilon);
        }
        PerturbationRow row;
        row.size = delta;
        row.gap = l1_distance(step(a, pspec), base);
        out.rows.push_back(row);
    }
    const double delta_last = sizes.back();
    out.final_margin = margin_report(a, spec, delta_last, std::min(1e-9, delta_last));
    return out;
}

EvolutionTrack lifeform_evolution_track(const AnalyticShape& shape, const ThresholdQuad& quad,
                                        const KernelSpec& kernel,
                                        const std::vector<double>& eps_list, int max_steps,
                                        const HarnessOptions& opts) {
    if (eps_list.empty()) throw ConfigurationError("eps_list: must be nonempty");
    for (double e : eps_list)
        if (!(e > 0.0)) throw ConfigurationError("eps_list: entries must be positive");
    if (max_steps < 1) throw ConfigurationError("max_steps: must be >= 1");

    const int D = infer_dim(shape);
    std::vector<double> plo, phi;
    shape_bounds(shape, D, plo, phi);
    const auto unbounded = shape.unbounded_axes(D);
    auto is_unbounded = [&](int d) {
        return std::find(unbounded.begin(), unbounded.end(), d) != unbounded.end();
    };

    EvolutionTrack out;
    for (double eps : eps_list) {
        Domain dom;
        dom.dim = D;
        dom.epsilon = eps;
        dom.extent.resize(static_cast<std::size_t>(D));
        dom.boundary.resize(static_cast<std::size_t>(D));
        std::vector<long> origin(static_cast<std::size_t>(D), 0);
        for (int d = 0; d < D; ++d) {
            auto sd = static_cast<std::size_t>(d);
            if (is_unbounded(d)) {
                dom.extent[sd] = std::max(1L, std::lround(kRibbonPeriod / eps));
                dom.boundary[sd] = BoundaryMode::Periodic;
                origin[sd] = -dom.extent[sd] / 2;
            } else {
                long lo = static_cast<long>(std::floor((plo[d] - 2.0 * eps) / eps)) - 1;
                long hi = static_cast<long>(std::ceil((phi[d] + 2.0 * eps) / eps)) + 1;
                dom.extent[sd] = hi - lo + 1;
                dom.boundary[sd] = BoundaryMode::GrowableZero;
                origin[sd] = lo;
            }
        }
        dom.validate();
        BinaryConfig seed = rasterize(shape, dom, origin);

        AutomatonSpec lspec;
        lspec.quad = quad;
        lspec.kernel = discretize_kernel(kernel, D, eps);
        lspec.backend = opts.backend;
        lspec.threads = opts.threads;

        EvolutionLevel level;
        level.epsilon = eps;
        level.report = detect_lifeform(seed, lspec, max_steps, max_steps);
        level.displacement_physical.resize(level.report.displacement.size());
        for (std::size_t d = 0; d < level.report.displacement.size(); ++d)
            level.displacement_physical[d] =
                eps * static_cast<double>(level.report.displacement[d]);
        out.levels.push_back(std::move(level));
    }

    out.kind = out.levels.front().report.kind;
    out.consistent = out.kind != LifeFormReport::Kind::Unresolved;
    for (const auto& lv : out.levels)
        if (lv.report.kind != out.kind) out.consistent = false;
    return out;
}

// ---- experiment configs --------------------------------------------------

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
    throw ConfigurationError("config field `" + field + "`: " + why);
}

const json* find(const json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double need_number(const json& j, const std::string& field) {
    if (!j.is_number()) bad_field(field, "expected a number");
    return j.get<double>();
}

long need_integer(const json& j, const std::string& field) {
    if (!j.is_number_integer()) bad_field(field, "expected an integer");
    return j.get<long>();
}

std::string need_string(const json& j, const std::string& field) {
    if (!j.is_string()) bad_field(field, "expected a string");
    return j.get<std::string>();
}

std::vector<double> need_number_array(const json& j, const std::string& field) {
    if (!j.is_array()) bad_field(field, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) bad_field(field, "expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

AnalyticShape::Norm parse_norm(const std::string& s, const std::string& field) {
    if (s == "l1") return AnalyticShape::Norm::L1;
    if (s == "l2") return AnalyticShape::Norm::L2;
    if (s == "linf") return AnalyticShape::Norm::Linf;
    bad_field(field, "unknown norm `" + s + "` (expected l1 | l2 | linf)");
}

AnalyticShape parse_shape(const json& j, const std::string& field) {
    if (!j.is_object()) bad_field(field, "expected an object");
    const json* kind = find(j, "kind");
    if (!kind) bad_field(field + ".kind", "missing");
    const std::string k = need_string(*kind, field + ".kind");

    auto center_of = [&](void) -> std::vector<double> {
        if (const json* c = find(j, "center"))
            return need_number_array(*c, field + ".center");
        return {};
    };

    if (k == "empty") return AnalyticShape::empty();
    if (k == "ball") {
        AnalyticShape::Norm n = AnalyticShape::Norm::L2;
        if (const json* jn = find(j, "norm"))
            n = parse_norm(need_string(*jn, field + ".norm"), field + ".norm");
        const json* r = find(j, "radius");
        if (!r) bad_field(field + ".radius", "missing");
        return AnalyticShape::ball(n, need_number(*r, field + ".radius"), center_of());
    }
    if (k == "rect") {
        const json* lo = find(j, "lo");
        const json* hi = find(j, "hi");
        if (!lo) bad_field(field + ".lo", "missing");
        if (!hi) bad_field(field + ".hi", "missing");
        auto l = need_number_array(*lo, field + ".lo");
        auto h = need_number_array(*hi, field + ".hi");
        if (l.size() != h.size()) bad_field(field, "lo and hi lengths differ");
        return AnalyticShape::rect(std::move(l), std::move(h));
    }
    if (k == "ribbon") {
        int axis = 0;
        if (const json* a = find(j, "axis"))
            axis = static_cast<int>(need_integer(*a, field + ".axis"));
        const json* w = find(j, "width");
        if (!w) bad_field(field + ".width", "missing");
        return AnalyticShape::ribbon(axis, need_number(*w, field + ".width"), center_of());
    }
    if (k == "annulus") {
        const json* inner = find(j, "inner");
        const json* outer = find(j, "outer");
        if (!inner) bad_field(field + ".inner", "missing");
        if (!outer) bad_field(field + ".outer", "missing");
        return AnalyticShape::annulus(need_number(*inner, field + ".inner"),
                                      need_number(*outer, field + ".outer"), center_of());
    }
    if (k == "union") {
        const json* parts = find(j, "parts");
        if (!parts || !parts->is_array()) bad_field(field + ".parts", "expected an array");
        std::vector<AnalyticShape> ps;
        std::size_t i = 0;
        for (const auto& p : *parts)
            ps.push_back(parse_shape(p, field + ".parts[" + std::to_string(i++) + "]"));
        return AnalyticShape::union_of(std::move(ps));
    }
    bad_field(field + ".kind", "unknown shape kind `" + k + "`");
}

KernelSpec parse_kernel_spec(const json& j, const std::string& field, bool& is_uniform,
                             long& uniform_n) {
    if (!j.is_object()) bad_field(field, "expected an object");
    const json* shape = find(j, "shape");
    if (!shape) bad_field(field + ".shape", "missing");
    const std::string s = need_string(*shape, field + ".shape");
    double radius = 1.0;
    if (const json* r = find(j, "radius")) radius = need_number(*r, field + ".radius");

    is_uniform = false;
    if (s == "uniform") {
        is_uniform = true;
        uniform_n = 1;
        if (const json* n = find(j, "n")) uniform_n = need_integer(*n, field + ".n");
        if (uniform_n < 0) bad_field(field + ".n", "must be >= 0");
        return KernelSpec::box_linf(1.0);  // placeholder; unused when uniform
    }
    if (s == "box-linf") return KernelSpec::box_linf(radius);
    if (s == "ball-l2") return KernelSpec::ball_l2(radius);
    if (s == "diamond-l1") return KernelSpec::diamond_l1(radius);
    if (s == "radial-table") {
        const json* t = find(j, "table");
        if (!t) bad_field(field + ".table", "missing");
        return KernelSpec::radial_table(radius, need_number_array(*t, field + ".table"));
    }
    bad_field(field + ".shape", "unknown kernel shape `" + s + "`");
}

}  // namespace

DiscreteKernel Experiment::make_kernel() const {
    if (kernel_is_uniform) return uniform_kernel(dim, uniform_n);
    return discretize_kernel(kernel, dim, epsilon);
}

AutomatonSpec Experiment::make_spec() const {
    AutomatonSpec spec;
    spec.quad = quad;
    spec.kernel = make_kernel();
    spec.backend = backend;
    spec.threads = threads;
    return spec;
}

BinaryConfig Experiment::make_seed() const {
    int sources = 0;
    sources += shape.has_value();
    sources += pattern_path.has_value();
    sources += random_extent.has_value();
    if (sources != 1)
        throw ConfigurationError("config needs exactly one seed source "
                                 "(shape | pattern | random)");

    if (pattern_path) {
        BinaryConfig c = read_pattern_file(*pattern_path);
        if (c.domain.dim != dim)
            throw ConfigurationError("config field `pattern`: dimension " +
                                     std::to_string(c.domain.dim) +
                                     " does not match `dim`");
        if (c.domain.epsilon != epsilon)
            throw ConfigurationError(
                "config field `pattern`: pattern epsilon differs from `epsilon`");
        return c;
    }

    if (random_extent) {
        if (static_cast<int>(random_extent->size()) != dim)
            bad_field("random.extent", "length must equal `dim`");
        for (long e : *random_extent)
            if (e < 1) bad_field("random.extent", "entries must be >= 1");
        if (!(random_density >= 0.0 && random_density <= 1.0))
            bad_field("random.density", "must lie in [0, 1]");
        Domain dom = Domain::growable(dim, epsilon, *random_extent);
        std::vector<long> origin(static_cast<std::size_t>(dim));
        for (int d = 0; d < dim; ++d)
            origin[static_cast<std::size_t>(d)] =
                -(*random_extent)[static_cast<std::size_t>(d)] / 2;
        BinaryConfig c{dom, origin, {}};
        c.cells.resize(c.box().cell_count());
        std::mt19937_64 rng(seed);
        for (auto& cell : c.cells) {
            // Top 53 bits as a uniform double in [0, 1); fixed across
            // platforms, unlike std::bernoulli_distribution.
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            cell = u < random_density ? 1 : 0;
        }
        return c;
    }

    const AnalyticShape& sh = *shape;
    const auto unbounded = sh.unbounded_axes(dim);
    auto is_unbounded = [&](int d) {
        return std::find(unbounded.begin(), unbounded.end(), d) != unbounded.end();
    };
    std::vector<double> plo, phi;
    shape_bounds(sh, dim, plo, phi);
    Domain dom;
    dom.dim = dim;
    dom.epsilon = epsilon;
    dom.extent.resize(static_cast<std::size_t>(dim));
    dom.boundary.resize(static_cast<std::size_t>(dim));
    std::vector<long> origin(static_cast<std::size_t>(dim), 0);
    for (int d = 0; d < dim; ++d) {
        auto sd = static_cast<std::size_t>(d);
        if (is_unbounded(d)) {
            dom.extent[sd] = std::max(1L, std::lround(ribbon_length / epsilon));
            dom.boundary[sd] = BoundaryMode::Periodic;
            origin[sd] = -dom.extent[sd] / 2;
        } else {
            long lo = static_cast<long>(std::floor((plo[d] - 2.0 * epsilon) / epsilon)) - 1;
            long hi = static_cast<long>(std::ceil((phi[d] + 2.0 * epsilon) / epsilon)) + 1;
            dom.extent[sd] = hi - lo + 1;
            dom.boundary[sd] = BoundaryMode::GrowableZero;
            origin[sd] = lo;
        }
    }
    dom.validate();
    return rasterize(sh, dom, origin);
}

Experiment parse_experiment_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text, nullptr, true, true);  // allow comments
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigurationError("config: top level must be an object");

    const json* schema = find(j, "schema");
    if (!schema) bad_field("schema", "missing");
    if (need_integer(*schema, "schema") != 1) bad_field("schema", "must be 1");

    Experiment ex;

    ex.mode = "run";
    if (const json* m = find(j, "mode")) ex.mode = need_string(*m, "mode");
    static const char* kModes[] = {"run", "construct", "detect", "ladder", "perturb",
                                   "verify"};
    if (std::find_if(std::begin(kModes), std::end(kModes),
                     [&](const char* s) { return ex.mode == s; }) == std::end(kModes))
        bad_field("mode", "unknown mode `" + ex.mode + "`");

    if (const json* d = find(j, "dim")) {
        ex.dim = static_cast<int>(need_integer(*d, "dim"));
        if (ex.dim < 1) bad_field("dim", "must be >= 1");
    }

    bool quad_set = false;
    bool kernel_set = false;
    bool epsilon_set = false;

    if (const json* p = find(j, "preset")) {
        const std::string name = need_string(*p, "preset");
        if (name == "conway") {
            ex.quad = conway_quad();
            ex.kernel_is_uniform = true;
            ex.uniform_n = 1;
            ex.epsilon = 1.0;
        } else if (name == "evans-fig1") {
            ex.quad = evans_fig1_quad();
            ex.kernel_is_uniform = true;
            ex.uniform_n = 25;
            ex.epsilon = 1.0 / 25.0;
        } else {
            bad_field("preset", "unknown preset `" + name + "`");
        }
        quad_set = kernel_set = epsilon_set = true;
    }

    if (const json* q = find(j, "quad")) {
        if (!q->is_object()) bad_field("quad", "expected an object");
        const json* s0 = find(*q, "s0");
        const json* b0 = find(*q, "b0");
        const json* b1 = find(*q, "b1");
        const json* s1 = find(*q, "s1");
        if (!s0 || !b0 || !b1 || !s1)
            bad_field("quad", "needs s0, b0, b1, s1");
        auto mode = ThresholdQuad::Mode::Closed;
        if (const json* m = find(*q, "mode")) {
            const std::string ms = need_string(*m, "quad.mode");
            if (ms == "strict")
                mode = ThresholdQuad::Mode::Strict;
            else if (ms == "closed")
                mode = ThresholdQuad::Mode::Closed;
            else
                bad_field("quad.mode", "expected strict | closed");
        }
        ex.quad = validate_quad(need_number(*s0, "quad.s0"), need_number(*b0, "quad.b0"),
                                need_number(*b1, "quad.b1"), need_number(*s1, "quad.s1"),
                                mode);
        quad_set = true;
    }
    if (!quad_set) bad_field("quad", "missing (or use a preset)");

    if (const json* k = find(j, "kernel")) {
        ex.kernel = parse_kernel_spec(*k, "kernel", ex.kernel_is_uniform, ex.uniform_n);
        kernel_set = true;
    }
    if (!kernel_set) bad_field("kernel", "missing (or use a preset)");

    if (ex.kernel_is_uniform) {
        const double implied =
            ex.uniform_n >= 1 ? 1.0 / static_cast<double>(ex.uniform_n) : 1.0;
        if (const json* e = find(j, "epsilon")) {
            const double given = need_number(*e, "epsilon");
            if (std::abs(given - implied) > 1e-12)
                bad_field("epsilon", "conflicts with the uniform kernel's spacing 1/n");
        }
        ex.epsilon = implied;
        epsilon_set = true;
    } else if (const json* e = find(j, "epsilon")) {
        ex.epsilon = need_number(*e, "epsilon");
        if (!(ex.epsilon > 0.0)) bad_field("epsilon", "must be positive");
        epsilon_set = true;
    }
    if (!epsilon_set) bad_field("epsilon", "missing");

    if (const json* s = find(j, "shape")) ex.shape = parse_shape(*s, "shape");
    if (const json* rl = find(j, "ribbon_length")) {
        ex.ribbon_length = need_number(*rl, "ribbon_length");
        if (!(ex.ribbon_length > 0.0)) bad_field("ribbon_length", "must be positive");
    }
    if (const json* p = find(j, "pattern")) ex.pattern_path = need_string(*p, "pattern");
    if (const json* r = find(j, "random")) {
        if (!r->is_object()) bad_field("random", "expected an object");
        const json* ext = find(*r, "extent");
        if (!ext || !ext->is_array()) bad_field("random.extent", "expected an array");
        std::vector<long> e;
        for (const auto& v : *ext) e.push_back(need_integer(v, "random.extent"));
        ex.random_extent = std::move(e);
        if (const json* den = find(*r, "density"))
            ex.random_density = need_number(*den, "random.density");
    }

    if (const json* s = find(j, "steps")) {
        ex.steps = static_cast<int>(need_integer(*s, "steps"));
        if (ex.steps < 0) bad_field("steps", "must be >= 0");
    }
    if (const json* s = find(j, "max_steps"))
        ex.max_steps = static_cast<int>(need_integer(*s, "max_steps"));
    if (const json* s = find(j, "max_period"))
        ex.max_period = static_cast<int>(need_integer(*s, "max_period"));

    if (const json* el = find(j, "eps_list")) ex.eps_list = need_number_array(*el, "eps_list");

    if (const json* p = find(j, "perturb")) {
        if (!p->is_object()) bad_field("perturb", "expected an object");
        if (const json* k = find(*p, "kind")) {
            const std::string ks = need_string(*k, "perturb.kind");
            if (ks == "threshold")
                ex.perturb_kind = PerturbationKind::Threshold;
            else if (ks == "kernel")
                ex.perturb_kind = PerturbationKind::Kernel;
            else
                bad_field("perturb.kind", "expected threshold | kernel");
        }
        if (const json* s = find(*p, "sizes"))
            ex.perturb_sizes = need_number_array(*s, "perturb.sizes");
    }

    if (const json* b = find(j, "backend")) {
        const std::string bs = need_string(*b, "backend");
        try {
            ex.backend = parse_backend(bs);
        } catch (const std::invalid_argument&) {
            bad_field("backend", "unknown backend `" + bs + "`");
        }
    }
    if (const json* t = find(j, "threads"))
        ex.threads = static_cast<int>(need_integer(*t, "threads"));
    if (const json* s = find(j, "seed")) {
        const long v = need_integer(*s, "seed");
        if (v < 0) bad_field("seed", "must be >= 0");
        ex.seed = static_cast<std::uint64_t>(v);
    }
    if (const json* f = find(j, "frames")) {
        if (!f->is_boolean()) bad_field("frames", "expected a boolean");
        ex.frames = f->get<bool>();
    }
    if (const json* rs = find(j, "render_scale")) {
        ex.render_scale = static_cast<int>(need_integer(*rs, "render_scale"));
        if (ex.render_scale < 1) bad_field("render_scale", "must be >= 1");
    }

    // Mode-specific presence checks (detailed validation happens at use).
    if (ex.mode == "construct" || ex.mode == "ladder") {
        if (!ex.shape) bad_field("shape", "required by mode `" + ex.mode + "`");
        if (ex.mode == "construct" &&
            ex.shape->kind != AnalyticShape::Kind::Ball &&
            ex.shape->kind != AnalyticShape::Kind::Ribbon)
            bad_field("shape", "construct mode needs a ball or ribbon shape");
        if (ex.mode == "ladder" && ex.eps_list.empty())
            bad_field("eps_list", "required by mode `ladder`");
    }
    if (ex.mode == "perturb") {
        if (ex.perturb_sizes.empty())
            bad_field("perturb.sizes", "required by mode `perturb`");
        if (ex.perturb_kind == PerturbationKind::Kernel && ex.kernel_is_uniform)
            bad_field("perturb.kind",
                      "kernel perturbation needs a continuous kernel spec");
    }

    return ex;
}

Experiment load_experiment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_experiment_text(ss.str());
}

}  // namespace ltl
