#include "ltl/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace ltl {

namespace {

long floor_div(long a, long b) {
    long q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

long wrap_index(long p, long n) {
    long r = p % n;
    return r < 0 ? r + n : r;
}

}  // namespace

// ---- Domain --------------------------------------------------------------

Domain Domain::growable(int dim, double epsilon, std::vector<long> extent) {
    Domain d{dim, epsilon, std::move(extent),
             std::vector<BoundaryMode>(static_cast<std::size_t>(dim), BoundaryMode::GrowableZero)};
    d.validate();
    return d;
}

Domain Domain::periodic(int dim, double epsilon, std::vector<long> extent) {
    Domain d{dim, epsilon, std::move(extent),
             std::vector<BoundaryMode>(static_cast<std::size_t>(dim), BoundaryMode::Periodic)};
    d.validate();
    return d;
}

void Domain::validate() const {
    if (dim < 1) throw InvalidArgumentError("domain dim must be >= 1");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw InvalidArgumentError("domain epsilon must be positive");
    if (extent.size() != static_cast<std::size_t>(dim) ||
        boundary.size() != static_cast<std::size_t>(dim))
        throw InvalidArgumentError("domain extent/boundary size must equal dim");
    for (long e : extent)
        if (e < 1) throw InvalidArgumentError("domain extents must be >= 1");
}

bool Domain::all_periodic() const {
    return std::all_of(boundary.begin(), boundary.end(),
                       [](BoundaryMode m) { return m == BoundaryMode::Periodic; });
}

double Domain::cell_measure() const {
    double m = 1.0;
    for (int d = 0; d < dim; ++d) m *= epsilon;
    return m;
}

void require_compatible(const Domain& a, const Domain& b) {
    if (a.dim != b.dim) throw DimensionMismatchError("dimension mismatch");
    if (a.epsilon != b.epsilon) throw DimensionMismatchError("epsilon mismatch");
}

// ---- Box -----------------------------------------------------------------

namespace detail {

std::size_t Box::cell_count() const {
    std::size_t n = 1;
    for (long e : extent) n *= static_cast<std::size_t>(e);
    return n;
}

std::optional<std::size_t> Box::flat(const Coord& z) const {
    std::size_t idx = 0;
    for (std::size_t d = 0; d < extent.size(); ++d) {
        long p = z[d] - origin[d];
        if (p < 0 || p >= extent[d]) return std::nullopt;
        idx = idx * static_cast<std::size_t>(extent[d]) + static_cast<std::size_t>(p);
    }
    return idx;
}

Coord Box::coord(std::size_t idx) const {
    Coord z(extent.size());
    for (std::size_t d = extent.size(); d-- > 0;) {
        z[d] = origin[d] + static_cast<long>(idx % static_cast<std::size_t>(extent[d]));
        idx /= static_cast<std::size_t>(extent[d]);
    }
    return z;
}

bool Box::contains(const Coord& z) const { return flat(z).has_value(); }

}  // namespace detail

// ---- BinaryConfig / ScalarField ------------------------------------------

namespace {

// Resolve z against the box under the domain's boundary modes.  Returns the
// flat index, or nullopt for an out-of-box read on a growable axis.
std::optional<std::size_t> resolve(const Domain& dom, const detail::Box& box, const Coord& z) {
    std::size_t idx = 0;
    for (int d = 0; d < dom.dim; ++d) {
        long p = z[static_cast<std::size_t>(d)] - box.origin[static_cast<std::size_t>(d)];
        long n = box.extent[static_cast<std::size_t>(d)];
        if (dom.boundary[static_cast<std::size_t>(d)] == BoundaryMode::Periodic) {
            p = wrap_index(p, n);
        } else if (p < 0 || p >= n) {
            return std::nullopt;
        }
        idx = idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(p);
    }
    return idx;
}

}  // namespace

std::uint8_t BinaryConfig::at(const Coord& z) const {
    auto idx = resolve(domain, box(), z);
    return idx ? cells[*idx] : 0;
}

void BinaryConfig::set(const Coord& z, std::uint8_t v) {
    auto idx = resolve(domain, box(), z);
    if (!idx) throw InvalidArgumentError("set() outside the stored box");
    cells[*idx] = v ? 1 : 0;
}

std::uint64_t BinaryConfig::live_count() const {
    std::uint64_t n = 0;
    for (auto c : cells) n += c;
    return n;
}

double BinaryConfig::mass() const {
    return domain.cell_measure() * static_cast<double>(live_count());
}

std::optional<detail::Box> BinaryConfig::support_box() const {
    const int D = domain.dim;
    Coord lo(static_cast<std::size_t>(D), std::numeric_limits<long>::max());
    Coord hi(static_cast<std::size_t>(D), std::numeric_limits<long>::min());
    bool any = false;
    const auto b = box();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!cells[i]) continue;
        any = true;
        Coord z = b.coord(i);
        for (int d = 0; d < D; ++d) {
            lo[static_cast<std::size_t>(d)] = std::min(lo[static_cast<std::size_t>(d)], z[static_cast<std::size_t>(d)]);
            hi[static_cast<std::size_t>(d)] = std::max(hi[static_cast<std::size_t>(d)], z[static_cast<std::size_t>(d)]);
        }
    }
    if (!any) return std::nullopt;
    detail::Box sb;
    sb.origin = lo;
    sb.extent.resize(static_cast<std::size_t>(D));
    for (int d = 0; d < D; ++d)
        sb.extent[static_cast<std::size_t>(d)] =
            hi[static_cast<std::size_t>(d)] - lo[static_cast<std::size_t>(d)] + 1;
    return sb;
}

double ScalarField::at(const Coord& z) const {
    auto idx = resolve(domain, box(), z);
    return idx ? values[*idx] : 0.0;
}

ScalarField to_field(const BinaryConfig& a) {
    ScalarField f{a.domain, a.origin, {}};
    f.values.resize(a.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) f.values[i] = a.cells[i] ? 1.0 : 0.0;
    return f;
}

// ---- AnalyticShape -------------------------------------------------------

AnalyticShape AnalyticShape::empty() { return {}; }

AnalyticShape AnalyticShape::ball(Norm n, double r, std::vector<double> center) {
    if (!(r > 0.0)) throw InvalidArgumentError("ball radius must be positive");
    AnalyticShape s;
    s.kind = Kind::Ball;
    s.norm = n;
    s.radius = r;
    s.center = std::move(center);
    return s;
}

AnalyticShape AnalyticShape::rect(std::vector<double> lo, std::vector<double> hi) {
    if (lo.size() != hi.size() || lo.empty())
        throw InvalidArgumentError("rect needs matching lo/hi");
    AnalyticShape s;
    s.kind = Kind::Rect;
    s.lo = std::move(lo);
    s.hi = std::move(hi);
    return s;
}

AnalyticShape AnalyticShape::ribbon(int axis, double width, std::vector<double> center) {
    if (!(width > 0.0)) throw InvalidArgumentError("ribbon width must be positive");
    AnalyticShape s;
    s.kind = Kind::Ribbon;
    s.axis = axis;
    s.width = width;
    s.center = std::move(center);
    return s;
}

AnalyticShape AnalyticShape::annulus(double r, double R, std::vector<double> center) {
    if (!(0.0 < r && r < R)) throw InvalidArgumentError("annulus needs 0 < r < R");
    AnalyticShape s;
    s.kind = Kind::Annulus;
    s.inner = r;
    s.outer = R;
    s.center = std::move(center);
    return s;
}

AnalyticShape AnalyticShape::union_of(std::vector<AnalyticShape> parts) {
    AnalyticShape s;
    s.kind = Kind::Union;
    s.parts = std::move(parts);
    return s;
}

namespace {

double centered(const std::vector<double>& x, const std::vector<double>& c, std::size_t d) {
    return x[d] - (d < c.size() ? c[d] : 0.0);
}

}  // namespace

bool AnalyticShape::contains(const std::vector<double>& x) const {
    switch (kind) {
        case Kind::Empty:
            return false;
        case Kind::Ball: {
            double acc = 0.0;
            for (std::size_t d = 0; d < x.size(); ++d) {
                double t = std::abs(centered(x, center, d));
                if (norm == Norm::L1) acc += t;
                else if (norm == Norm::L2) acc += t * t;
                else acc = std::max(acc, t);
            }
            if (norm == Norm::L2) return acc <= radius * radius;
            return acc <= radius;
        }
        case Kind::Rect: {
            for (std::size_t d = 0; d < x.size(); ++d)
                if (!(lo[d] <= x[d] && x[d] < hi[d])) return false;
            return true;
        }
        case Kind::Ribbon: {
            double acc = 0.0;
            for (std::size_t d = 0; d < x.size(); ++d) {
                if (static_cast<int>(d) == axis) continue;
                double t = centered(x, center, d);
                acc += t * t;
            }
            return std::sqrt(acc) <= width / 2.0;
        }
        case Kind::Annulus: {
            double acc = 0.0;
            for (std::size_t d = 0; d < x.size(); ++d) {
                double t = centered(x, center, d);
                acc += t * t;
            }
            double rr = std::sqrt(acc);
            return inner <= rr && rr <= outer;
        }
        case Kind::Union: {
            for (const auto& p : parts)
                if (p.contains(x)) return true;
            return false;
        }
    }
    return false;
}

bool AnalyticShape::bounded() const {
    if (kind == Kind::Ribbon) return false;
    if (kind == Kind::Union)
        return std::all_of(parts.begin(), parts.end(),
                           [](const AnalyticShape& p) { return p.bounded(); });
    return true;
}

std::vector<int> AnalyticShape::unbounded_axes(int dim) const {
    std::vector<int> axes;
    if (kind == Kind::Ribbon) {
        axes.push_back(axis);
    } else if (kind == Kind::Union) {
        for (const auto& p : parts)
            for (int a : p.unbounded_axes(dim))
                if (std::find(axes.begin(), axes.end(), a) == axes.end()) axes.push_back(a);
    }
    return axes;
}

// ---- l1_distance ---------------------------------------------------------

namespace {

template <typename A, typename GetA, typename GetB>
double l1_over_union(const A& a, const A& b, GetA geta, GetB getb) {
    require_compatible(a.domain, b.domain);
    const int D = a.domain.dim;
    // Union box along growable axes; periodic axes must agree exactly.
    detail::Box ub;
    ub.origin.resize(static_cast<std::size_t>(D));
    ub.extent.resize(static_cast<std::size_t>(D));
    for (int d = 0; d < D; ++d) {
        auto sd = static_cast<std::size_t>(d);
        if (a.domain.boundary[sd] != b.domain.boundary[sd])
            throw DimensionMismatchError("boundary mode mismatch");
        if (a.domain.boundary[sd] == BoundaryMode::Periodic) {
            if (a.domain.extent[sd] != b.domain.extent[sd])
                throw DimensionMismatchError("periodic extent mismatch");
            ub.origin[sd] = a.origin[sd];
            ub.extent[sd] = a.domain.extent[sd];
        } else {
            long lo = std::min(a.origin[sd], b.origin[sd]);
            long hi = std::max(a.origin[sd] + a.domain.extent[sd],
                               b.origin[sd] + b.domain.extent[sd]);
            ub.origin[sd] = lo;
            ub.extent[sd] = hi - lo;
        }
    }
    std::uint64_t diff_count = 0;
    double diff_sum = 0.0;
    const std::size_t n = ub.cell_count();
    bool integral = true;
    for (std::size_t i = 0; i < n; ++i) {
        Coord z = ub.coord(i);
        double da = geta(z), db = getb(z);
        double dd = std::abs(da - db);
        if (dd == 0.0) continue;
        if (dd == 1.0) ++diff_count;
        else { integral = false; diff_sum += dd; }
    }
    double total = integral ? static_cast<double>(diff_count)
                            : diff_sum + static_cast<double>(diff_count);
    return a.domain.cell_measure() * total;
}

}  // namespace

double l1_distance(const BinaryConfig& a, const BinaryConfig& b) {
    return l1_over_union(a, b,
                         [&](const Coord& z) { return static_cast<double>(a.at(z)); },
                         [&](const Coord& z) { return static_cast<double>(b.at(z)); });
}

double l1_distance(const ScalarField& a, const ScalarField& b) {
    return l1_over_union(a, b, [&](const Coord& z) { return a.at(z); },
                         [&](const Coord& z) { return b.at(z); });
}

// ---- shift ---------------------------------------------------------------

BinaryConfig shift(const BinaryConfig& a, const Coord& v) {
    if (v.size() != static_cast<std::size_t>(a.domain.dim))
        throw DimensionMismatchError("shift vector dimension mismatch");
    BinaryConfig out = a;
    bool any_periodic = false;
    for (int d = 0; d < a.domain.dim; ++d)
        if (a.domain.boundary[static_cast<std::size_t>(d)] == BoundaryMode::Periodic)
            any_periodic = true;
    if (!any_periodic) {
        // Pure translation of the box: out(z) = a(z+v)  ⇔  origin -= v.
        for (int d = 0; d < a.domain.dim; ++d)
            out.origin[static_cast<std::size_t>(d)] -= v[static_cast<std::size_t>(d)];
        return out;
    }
    const auto b = out.box();
    const std::size_t n = b.cell_count();
    for (std::size_t i = 0; i < n; ++i) {
        Coord z = b.coord(i);
        for (int d = 0; d < a.domain.dim; ++d)
            z[static_cast<std::size_t>(d)] += v[static_cast<std::size_t>(d)];
        out.cells[i] = a.at(z);
    }
    return out;
}

// ---- coarsen -------------------------------------------------------------

namespace {

template <typename Get>
ScalarField coarsen_impl(const Domain& dom, const std::vector<long>& origin,
                         long m, Get get) {
    if (m < 1) throw InvalidArgumentError("coarsen factor must be >= 1");
    const int D = dom.dim;
    std::vector<long> ext = dom.extent;
    for (int d = 0; d < D; ++d) {
        auto sd = static_cast<std::size_t>(d);
        if (ext[sd] % m != 0) {
            if (dom.boundary[sd] == BoundaryMode::Periodic)
                throw InvalidArgumentError("periodic extent not divisible by coarsen factor");
            ext[sd] += m - (ext[sd] % m);  // zero-pad at the high end
        }
    }
    ScalarField out;
    out.domain = dom;
    out.domain.epsilon = dom.epsilon * static_cast<double>(m);
    out.domain.extent.resize(static_cast<std::size_t>(D));
    out.origin.resize(static_cast<std::size_t>(D));
    for (int d = 0; d < D; ++d) {
        auto sd = static_cast<std::size_t>(d);
        out.domain.extent[sd] = ext[sd] / m;
        // Output coordinate of block 0: blocks inherit the physical position
        // of their cell group; origin chosen so aligned boxes (fine origin
        // = m·Z0 − ⌊m/2⌋) coarsen back to coarse coordinate Z0.
        out.origin[sd] = floor_div(origin[sd] + m / 2, m);
    }
    const auto ob = out.box();
    const std::size_t n = ob.cell_count();
    out.values.resize(n);
    double block_cells = 1.0;
    for (int d = 0; d < D; ++d) block_cells *= static_cast<double>(m);
    Coord zf(static_cast<std::size_t>(D));
    for (std::size_t i = 0; i < n; ++i) {
        Coord zb = ob.coord(i);
        // Sum the m^D block, last axis fastest.
        std::vector<long> off(static_cast<std::size_t>(D), 0);
        double sum = 0.0;
        while (true) {
            for (int d = 0; d < D; ++d) {
                auto sd = static_cast<std::size_t>(d);
                zf[sd] = origin[sd] + (zb[sd] - out.origin[sd]) * m + off[sd];
            }
            sum += get(zf);
            int d = D - 1;
            for (; d >= 0; --d) {
                auto sd = static_cast<std::size_t>(d);
                if (++off[sd] < m) break;
                off[sd] = 0;
            }
            if (d < 0) break;
        }
        out.values[i] = sum / block_cells;
    }
    return out;
}

}  // namespace

ScalarField coarsen(const BinaryConfig& a, long m) {
    return coarsen_impl(a.domain, a.origin, m,
                        [&](const Coord& z) { return static_cast<double>(a.at(z)); });
}

ScalarField coarsen(const ScalarField& f, long m) {
    return coarsen_impl(f.domain, f.origin, m, [&](const Coord& z) { return f.at(z); });
}

// ---- rasterize -----------------------------------------------------------

BinaryConfig rasterize(const AnalyticShape& shape, const Domain& domain) {
    std::vector<long> origin(static_cast<std::size_t>(domain.dim));
    for (int d = 0; d < domain.dim; ++d)
        origin[static_cast<std::size_t>(d)] = -(domain.extent[static_cast<std::size_t>(d)] / 2);
    return rasterize(shape, domain, origin);
}

BinaryConfig rasterize(const AnalyticShape& shape, const Domain& domain,
                       const std::vector<long>& origin) {
    domain.validate();
    for (int a : shape.unbounded_axes(domain.dim)) {
        if (a < 0 || a >= domain.dim)
            throw InvalidArgumentError("shape axis outside domain dimension");
        if (domain.boundary[static_cast<std::size_t>(a)] != BoundaryMode::Periodic)
            throw UnsupportedError("unbounded shape axis requires a periodic domain axis");
    }
    BinaryConfig out{domain, origin, {}};
    const auto b = out.box();
    const std::size_t n = b.cell_count();
    out.cells.resize(n);
    std::vector<double> x(static_cast<std::size_t>(domain.dim));
    for (std::size_t i = 0; i < n; ++i) {
        Coord z = b.coord(i);
        for (int d = 0; d < domain.dim; ++d)
            x[static_cast<std::size_t>(d)] =
                domain.epsilon * static_cast<double>(z[static_cast<std::size_t>(d)]);
        out.cells[i] = shape.contains(x) ? 1 : 0;
    }
    return out;
}

// ---- boundary_cells ------------------------------------------------------

PointSet boundary_cells(const BinaryConfig& a) {
    PointSet ps{a.domain, {}};
    // Expand by one cell on growable axes so dead cells just outside the
    // stored box that touch edge-live cells are seen too.
    detail::Box b = a.box();
    for (int d = 0; d < a.domain.dim; ++d) {
        auto sd = static_cast<std::size_t>(d);
        if (a.domain.boundary[sd] == BoundaryMode::GrowableZero) {
            b.origin[sd] -= 1;
            b.extent[sd] += 2;
        }
    }
    const std::size_t n = b.cell_count();
    for (std::size_t i = 0; i < n; ++i) {
        Coord z = b.coord(i);
        const std::uint8_t v = a.at(z);
        bool edge = false;
        for (int d = 0; d < a.domain.dim && !edge; ++d) {
            auto sd = static_cast<std::size_t>(d);
            for (long s : {-1L, +1L}) {
                Coord zn = z;
                zn[sd] += s;
                if (a.at(zn) != v) { edge = true; break; }
            }
        }
        if (edge) ps.points.push_back(std::move(z));
    }
    return ps;
}

// ---- normalize_box -------------------------------------------------------

BinaryConfig normalize_box(const BinaryConfig& a, long margin) {
    const int D = a.domain.dim;
    auto sb = a.support_box();
    BinaryConfig out;
    out.domain = a.domain;
    out.origin.resize(static_cast<std::size_t>(D));
    for (int d = 0; d < D; ++d) {
        auto sd = static_cast<std::size_t>(d);
        if (a.domain.boundary[sd] == BoundaryMode::Periodic) {
            out.origin[sd] = a.origin[sd];
            out.domain.extent[sd] = a.domain.extent[sd];
        } else if (!sb) {
            out.origin[sd] = 0;
            out.domain.extent[sd] = 1;
        } else {
            out.origin[sd] = sb->origin[sd] - margin;
            out.domain.extent[sd] = sb->extent[sd] + 2 * margin;
        }
    }
    const auto ob = out.box();
    const std::size_t n = ob.cell_count();
    out.cells.assign(n, 0);
    if (sb) {
        for (std::size_t i = 0; i < n; ++i) {
            Coord z = ob.coord(i);
            out.cells[i] = a.at(z);
        }
    }
    return out;
}

}  // namespace ltl
