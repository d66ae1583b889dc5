#include "ltl/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <cstdio>
#include <numeric>
#include <ostream>

namespace ltl {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

double interval_overlap(double lo1, double hi1, double lo2, double hi2) {
    return std::max(0.0, std::min(hi1, hi2) - std::max(lo1, lo2));
}

// ∫_a^b sqrt(R^2 - x^2) dx for a, b in [-R, R] (a <= b).
double circle_slice(double R, double a, double b) {
    auto prim = [R](double x) {
        double c = std::clamp(x / R, -1.0, 1.0);
        double g = R * R - x * x;
        if (g < 0.0) g = 0.0;
        return 0.5 * (x * std::sqrt(g) + R * R * std::asin(c));
    };
    if (b <= a) return 0.0;
    return prim(b) - prim(a);
}

// Area of {(x,y): x0<=x<=x1, -g(x) <= y <= min(yc, g(x))} with g = sqrt(R^2-x^2):
// the part of the disk inside the vertical strip and below the line y = yc.
double disk_strip_below(double R, double x0, double x1, double yc) {
    double u = std::max(x0, -R), v = std::min(x1, R);
    if (u >= v) return 0.0;
    if (yc >= R) return 2.0 * circle_slice(R, u, v);
    if (yc <= -R) return 0.0;
    double xc = std::sqrt(std::max(0.0, R * R - yc * yc));
    if (yc >= 0.0) {
        double area = 0.0;
        // |x| >= xc: the full chord 2g fits below the line.
        area += 2.0 * circle_slice(R, u, std::min(v, -xc));
        area += 2.0 * circle_slice(R, std::max(u, xc), v);
        // |x| < xc: top clipped at yc.
        double a = std::max(u, -xc), b = std::min(v, xc);
        if (a < b) area += yc * (b - a) + circle_slice(R, a, b);
        return area;
    }
    // yc < 0: only |x| <= xc has -g <= yc.
    double a = std::max(u, -xc), b = std::min(v, xc);
    if (a >= b) return 0.0;
    return yc * (b - a) + circle_slice(R, a, b);
}

double circle_rect_area(double R, double x0, double x1, double y0, double y1) {
    return disk_strip_below(R, x0, x1, y1) - disk_strip_below(R, x0, x1, y0);
}

// Area of the rectangle clipped to the diamond |x|+|y| <= R
// (Sutherland-Hodgman against the four half-planes, then shoelace).
double diamond_rect_area(double R, double x0, double x1, double y0, double y1) {
    using Pt = std::array<double, 2>;
    std::vector<Pt> poly = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
    // Half-planes sx*x + sy*y <= R.
    const double signs[4][2] = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};
    std::vector<Pt> next;
    for (auto& s : signs) {
        next.clear();
        const std::size_t n = poly.size();
        for (std::size_t i = 0; i < n && n >= 2; ++i) {
            const Pt& p = poly[i];
            const Pt& q = poly[(i + 1) % n];
            double fp = s[0] * p[0] + s[1] * p[1] - R;
            double fq = s[0] * q[0] + s[1] * q[1] - R;
            if (fp <= 0.0) next.push_back(p);
            if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
                double t = fp / (fp - fq);
                next.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
            }
        }
        poly = next;
        if (poly.size() < 3) return 0.0;
    }
    double area2 = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Pt& p = poly[i];
        const Pt& q = poly[(i + 1) % poly.size()];
        area2 += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * std::abs(area2);
}

double ball_volume(KernelSpec::Shape shape, double R, int dim) {
    switch (shape) {
        case KernelSpec::Shape::BoxLinf:
            return std::pow(2.0 * R, dim);
        case KernelSpec::Shape::DiamondL1: {
            double f = 1.0;
            for (int d = 2; d <= dim; ++d) f *= d;
            return std::pow(2.0 * R, dim) / f;
        }
        case KernelSpec::Shape::BallL2:
            return std::pow(kPi, 0.5 * dim) * std::pow(R, dim) /
                   std::tgamma(0.5 * dim + 1.0);
        case KernelSpec::Shape::RadialTable:
            break;
    }
    throw InvalidArgumentError("ball_volume: not an indicator shape");
}

// Piecewise-linear radial profile value at rho (zero past the support).
double table_value(const std::vector<double>& tb, double R, double rho) {
    if (rho < 0.0 || rho > R) return 0.0;
    if (tb.size() == 1) return tb[0];
    double t = rho / R * static_cast<double>(tb.size() - 1);
    auto i = static_cast<std::size_t>(t);
    if (i >= tb.size() - 1) return tb.back();
    double f = t - static_cast<double>(i);
    return tb[i] + f * (tb[i + 1] - tb[i]);
}

// ∫ prof(rho) * rho^{dim-1} drho over [0, R], exact per linear segment
// (Simpson, exact through cubics).
double table_radial_moment(const std::vector<double>& tb, double R, int dim) {
    const std::size_t segs = tb.size() > 1 ? tb.size() - 1 : 1;
    double total = 0.0;
    for (std::size_t s = 0; s < segs; ++s) {
        double a = R * static_cast<double>(s) / static_cast<double>(segs);
        double b = R * static_cast<double>(s + 1) / static_cast<double>(segs);
        auto f = [&](double rho) {
            return table_value(tb, R, rho) * std::pow(rho, dim - 1);
        };
        total += (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
    }
    return total;
}

double unit_sphere_area(int dim) {  // surface measure of S^{dim-1}
    return 2.0 * std::pow(kPi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

double table_normalization(const std::vector<double>& tb, double R, int dim) {
    return unit_sphere_area(dim) * table_radial_moment(tb, R, dim);
}

}  // namespace

// ---- KernelSpec ----------------------------------------------------------

KernelSpec KernelSpec::box_linf(double radius) {
    if (!(radius > 0.0)) throw InvalidArgumentError("kernel radius must be positive");
    KernelSpec s;
    s.shape = Shape::BoxLinf;
    s.radius = radius;
    return s;
}

KernelSpec KernelSpec::ball_l2(double radius) {
    if (!(radius > 0.0)) throw InvalidArgumentError("kernel radius must be positive");
    KernelSpec s;
    s.shape = Shape::BallL2;
    s.radius = radius;
    return s;
}

KernelSpec KernelSpec::diamond_l1(double radius) {
    if (!(radius > 0.0)) throw InvalidArgumentError("kernel radius must be positive");
    KernelSpec s;
    s.shape = Shape::DiamondL1;
    s.radius = radius;
    return s;
}

KernelSpec KernelSpec::radial_table(double radius, std::vector<double> table) {
    if (!(radius > 0.0)) throw InvalidArgumentError("kernel radius must be positive");
    if (table.empty()) throw InvalidArgumentError("radial table needs at least one knot");
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (table[i] < 0.0) throw InvalidArgumentError("radial table must be nonnegative");
        if (i > 0 && table[i] > table[i - 1])
            throw InvalidArgumentError("radial table must be nonincreasing");
    }
    if (std::accumulate(table.begin(), table.end(), 0.0) == 0.0)
        throw InvalidArgumentError("zero-mass kernel");
    KernelSpec s;
    s.shape = Shape::RadialTable;
    s.radius = radius;
    s.table = std::move(table);
    return s;
}

double KernelSpec::value(const std::vector<double>& x, int dim) const {
    double r1 = 0.0, r2sq = 0.0, rinf = 0.0;
    for (int d = 0; d < dim; ++d) {
        double t = std::abs(x[static_cast<std::size_t>(d)]);
        r1 += t;
        r2sq += t * t;
        rinf = std::max(rinf, t);
    }
    switch (shape) {
        case Shape::BoxLinf:
            return rinf <= radius ? 1.0 / ball_volume(shape, radius, dim) : 0.0;
        case Shape::DiamondL1:
            return r1 <= radius ? 1.0 / ball_volume(shape, radius, dim) : 0.0;
        case Shape::BallL2:
            return r2sq <= radius * radius ? 1.0 / ball_volume(shape, radius, dim) : 0.0;
        case Shape::RadialTable: {
            double z = table_normalization(table, radius, dim);
            if (z <= 0.0) throw InvalidArgumentError("zero-mass kernel");
            return table_value(table, radius, std::sqrt(r2sq)) / z;
        }
    }
    return 0.0;
}

double KernelSpec::sup_norm(int dim) const {
    if (shape == Shape::RadialTable) {
        double z = table_normalization(table, radius, dim);
        if (z <= 0.0) throw InvalidArgumentError("zero-mass kernel");
        return table[0] / z;  // nonincreasing profile peaks at 0
    }
    return 1.0 / ball_volume(shape, radius, dim);
}

// ---- DiscreteKernel ------------------------------------------------------

double DiscreteKernel::sum() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

double DiscreteKernel::max_weight() const {
    double m = 0.0;
    for (double w : weights) m = std::max(m, w);
    return m;
}

bool DiscreteKernel::is_uniform_box() const {
    if (weights.empty()) return false;
    double w0 = weights[0];
    if (!(w0 > 0.0)) return false;
    return std::all_of(weights.begin(), weights.end(), [&](double w) { return w == w0; });
}

// ---- discretize_kernel ---------------------------------------------------

namespace {

// Integral of the normalized kernel over the cell at |z| (componentwise
// absolute coordinates — every supported spec is symmetric under axis
// reflections, and evaluating only the nonnegative orthant makes the
// discrete weights bit-exactly symmetric).
double cell_mass(const KernelSpec& spec, int dim, double eps, const Coord& zabs,
                 int supersample) {
    const double R = spec.radius;
    // Exact geometric overlap where we have closed forms.
    if (spec.shape == KernelSpec::Shape::BoxLinf) {
        double v = 1.0;
        for (int d = 0; d < dim; ++d) {
            double c = eps * static_cast<double>(zabs[static_cast<std::size_t>(d)]);
            v *= interval_overlap(c - 0.5 * eps, c + 0.5 * eps, -R, R);
            if (v == 0.0) return 0.0;
        }
        return v / ball_volume(spec.shape, R, dim);
    }
    if (dim == 1 &&
        (spec.shape == KernelSpec::Shape::BallL2 || spec.shape == KernelSpec::Shape::DiamondL1)) {
        double c = eps * static_cast<double>(zabs[0]);
        return interval_overlap(c - 0.5 * eps, c + 0.5 * eps, -R, R) / (2.0 * R);
    }
    if (dim == 2 && spec.shape == KernelSpec::Shape::BallL2) {
        double cx = eps * static_cast<double>(zabs[0]);
        double cy = eps * static_cast<double>(zabs[1]);
        double a = circle_rect_area(R, cx - 0.5 * eps, cx + 0.5 * eps, cy - 0.5 * eps,
                                    cy + 0.5 * eps);
        return a / (kPi * R * R);
    }
    if (dim == 2 && spec.shape == KernelSpec::Shape::DiamondL1) {
        double cx = eps * static_cast<double>(zabs[0]);
        double cy = eps * static_cast<double>(zabs[1]);
        double a = diamond_rect_area(R, cx - 0.5 * eps, cx + 0.5 * eps, cy - 0.5 * eps,
                                     cy + 0.5 * eps);
        return a / (2.0 * R * R);
    }
    // Generic midpoint rule: supersample^dim samples per cell.
    const int s = supersample;
    std::vector<double> x(static_cast<std::size_t>(dim));
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    double acc = 0.0;
    while (true) {
        for (int d = 0; d < dim; ++d) {
            auto sd = static_cast<std::size_t>(d);
            x[sd] = eps * (static_cast<double>(zabs[sd]) - 0.5 +
                           (static_cast<double>(idx[sd]) + 0.5) / static_cast<double>(s));
        }
        acc += spec.value(x, dim);
        int d = dim - 1;
        for (; d >= 0; --d) {
            auto sd = static_cast<std::size_t>(d);
            if (++idx[sd] < s) break;
            idx[sd] = 0;
        }
        if (d < 0) break;
    }
    double cellvol = std::pow(eps / static_cast<double>(s), dim);
    return acc * cellvol;
}

}  // namespace

DiscreteKernel discretize_kernel(const KernelSpec& spec, int dim, double epsilon,
                                 int supersample, double* raw_sum) {
    if (dim < 1) throw InvalidArgumentError("kernel dim must be >= 1");
    if (!(epsilon > 0.0)) throw InvalidArgumentError("epsilon must be positive");
    if (supersample < 1) throw InvalidArgumentError("supersample must be >= 1");
    if (!(spec.radius > 0.0)) throw InvalidArgumentError("kernel radius must be positive");

    long r = static_cast<long>(std::floor(spec.radius / epsilon + 0.5 + 1e-12));
    DiscreteKernel k;
    k.dim = dim;
    k.epsilon = epsilon;
    k.radius.assign(static_cast<std::size_t>(dim), r);
    const auto box = k.box();
    const std::size_t n = box.cell_count();
    k.weights.resize(n);
    Coord zabs(static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < n; ++i) {
        Coord z = box.coord(i);
        for (int d = 0; d < dim; ++d)
            zabs[static_cast<std::size_t>(d)] = std::abs(z[static_cast<std::size_t>(d)]);
        k.weights[i] = cell_mass(spec, dim, epsilon, zabs, supersample);
    }

    // Trim all-zero outer shells (cells that only graze the support).
    while (r > 0) {
        bool all_zero = true;
        const auto b = k.box();
        for (std::size_t i = 0; i < k.weights.size() && all_zero; ++i) {
            if (k.weights[i] == 0.0) continue;
            Coord z = b.coord(i);
            for (int d = 0; d < dim; ++d)
                if (std::abs(z[static_cast<std::size_t>(d)]) == r) { all_zero = false; break; }
        }
        if (!all_zero) break;
        DiscreteKernel t;
        t.dim = dim;
        t.epsilon = epsilon;
        t.radius.assign(static_cast<std::size_t>(dim), r - 1);
        const auto tb = t.box();
        t.weights.resize(tb.cell_count());
        for (std::size_t i = 0; i < t.weights.size(); ++i) t.weights[i] = k.at(tb.coord(i));
        k = std::move(t);
        --r;
    }

    double raw = k.sum();
    if (!(raw > 0.0)) throw InvalidArgumentError("zero-mass kernel");
    if (raw_sum) *raw_sum = raw;

    for (double& w : k.weights) w /= raw;
    // Push the float residual into the largest weight so the sequential sum
    // is exactly 1.
    auto imax = static_cast<std::size_t>(
        std::max_element(k.weights.begin(), k.weights.end()) - k.weights.begin());
    for (int iter = 0; iter < 16; ++iter) {
        double s = k.sum();
        if (s == 1.0) break;
        k.weights[imax] += 1.0 - s;
    }
    // The jump above can straddle 1.0 forever when later roundings quantize
    // the correction, so finish by rewriting the final weight as 1 - prefix:
    // with prefix in [1/2, 2] the subtraction is exact (Sterbenz) and the
    // closing addition prefix + (1 - prefix) rounds to exactly 1.
    if (k.sum() != 1.0 && k.weights.size() > 1) {
        const std::size_t last = k.weights.size() - 1;
        double prefix = std::accumulate(k.weights.begin(), k.weights.begin() + last, 0.0);
        if (1.0 - prefix < 0.0 && imax != last) {
            // Shave a large weight so the closing weight stays nonnegative.
            k.weights[imax] -= 2.0 * (prefix - 1.0) + 1e-15;
            prefix = std::accumulate(k.weights.begin(), k.weights.begin() + last, 0.0);
        }
        if (1.0 - prefix >= 0.0) k.weights[last] = 1.0 - prefix;
    }
    return k;
}

DiscreteKernel uniform_kernel(int dim, long n) {
    if (dim < 1) throw InvalidArgumentError("kernel dim must be >= 1");
    if (n < 0) throw InvalidArgumentError("uniform kernel radius must be >= 0");
    DiscreteKernel k;
    k.dim = dim;
    k.epsilon = n >= 1 ? 1.0 / static_cast<double>(n) : 1.0;
    k.radius.assign(static_cast<std::size_t>(dim), n);
    std::size_t count = 1;
    for (int d = 0; d < dim; ++d) count *= static_cast<std::size_t>(2 * n + 1);
    k.weights.assign(count, 1.0 / static_cast<double>(count));
    return k;
}

DiscreteKernel mollify(const DiscreteKernel& k, double sigma_cells) {
    if (sigma_cells < 0.0) throw InvalidArgumentError("sigma must be >= 0");
    if (sigma_cells == 0.0) return k;
    const long t = static_cast<long>(std::ceil(4.0 * sigma_cells));
    std::vector<double> g(static_cast<std::size_t>(2 * t + 1));
    double gs = 0.0;
    for (long j = -t; j <= t; ++j) {
        double v = std::exp(-0.5 * static_cast<double>(j * j) / (sigma_cells * sigma_cells));
        g[static_cast<std::size_t>(j + t)] = v;
        gs += v;
    }
    for (double& v : g) v /= gs;

    DiscreteKernel out = k;
    for (int axis = 0; axis < k.dim; ++axis) {
        DiscreteKernel next;
        next.dim = k.dim;
        next.epsilon = k.epsilon;
        next.radius = out.radius;
        next.radius[static_cast<std::size_t>(axis)] += t;
        const auto nb = next.box();
        next.weights.assign(nb.cell_count(), 0.0);
        for (std::size_t i = 0; i < next.weights.size(); ++i) {
            Coord z = nb.coord(i);
            double acc = 0.0;
            for (long j = -t; j <= t; ++j) {
                Coord zs = z;
                zs[static_cast<std::size_t>(axis)] -= j;
                acc += g[static_cast<std::size_t>(j + t)] * out.at(zs);
            }
            next.weights[i] = acc;
        }
        out = std::move(next);
    }
    double s0 = out.sum();
    for (double& w : out.weights) w /= s0;
    auto imax = static_cast<std::size_t>(
        std::max_element(out.weights.begin(), out.weights.end()) - out.weights.begin());
    for (int iter = 0; iter < 16; ++iter) {
        double s = out.sum();
        if (s == 1.0) break;
        out.weights[imax] += 1.0 - s;
    }
    return out;
}

double kernel_l1_distance(const DiscreteKernel& a, const DiscreteKernel& b) {
    if (a.dim != b.dim) throw DimensionMismatchError("kernel dim mismatch");
    if (a.epsilon != b.epsilon) throw DimensionMismatchError("kernel epsilon mismatch");
    detail::Box ub;
    ub.origin.resize(static_cast<std::size_t>(a.dim));
    ub.extent.resize(static_cast<std::size_t>(a.dim));
    for (int d = 0; d < a.dim; ++d) {
        auto sd = static_cast<std::size_t>(d);
        long r = std::max(a.radius[sd], b.radius[sd]);
        ub.origin[sd] = -r;
        ub.extent[sd] = 2 * r + 1;
    }
    double total = 0.0;
    const std::size_t n = ub.cell_count();
    for (std::size_t i = 0; i < n; ++i) {
        Coord z = ub.coord(i);
        total += std::abs(a.at(z) - b.at(z));
    }
    return total;
}

void write_kernel_csv(std::ostream& os, const DiscreteKernel& k) {
    for (int d = 1; d <= k.dim; ++d) os << "dz" << d << ",";
    os << "weight\n";
    const auto b = k.box();
    char buf[64];
    for (std::size_t i = 0; i < k.weights.size(); ++i) {
        Coord z = b.coord(i);
        for (long c : z) os << c << ",";
        std::snprintf(buf, sizeof buf, "%.17g", k.weights[i]);
        os << buf << "\n";
    }
}

}  // namespace ltl
