#include "ltl/metrics.hpp"

#include "ltl/lifeform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ltl {

namespace {

double euclid(const Coord& x, const Coord& y) {
    double s = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        double t = static_cast<double>(x[d] - y[d]);
        s += t * t;
    }
    return std::sqrt(s);
}

// sup over X of inf over Y of the physical center distance.
double directed_sup_inf(const std::vector<Coord>& X, const std::vector<Coord>& Y,
                        double epsilon) {
    double worst = 0.0;
    for (const Coord& x : X) {
        double best = std::numeric_limits<double>::infinity();
        for (const Coord& y : Y) best = std::min(best, euclid(x, y));
        worst = std::max(worst, best);
    }
    return epsilon * worst;
}

double averaged_hausdorff(const std::vector<Coord>& X, const std::vector<Coord>& Y,
                          double epsilon) {
    return 0.5 * directed_sup_inf(X, Y, epsilon) + 0.5 * directed_sup_inf(Y, X, epsilon);
}

void check_sets(const PointSet& x, const PointSet& y) {
    require_compatible(x.domain, y.domain);
    if (x.points.empty() || y.points.empty())
        throw UndefinedDistanceError("set distance undefined for an empty set");
}

}  // namespace

double hausdorff(const PointSet& x, const PointSet& y) {
    check_sets(x, y);
    return averaged_hausdorff(x.points, y.points, x.domain.epsilon);
}

double hausdorff_max(const PointSet& x, const PointSet& y) {
    check_sets(x, y);
    return std::max(directed_sup_inf(x.points, y.points, x.domain.epsilon),
                    directed_sup_inf(y.points, x.points, x.domain.epsilon));
}

double d_star(const BinaryConfig& a, const BinaryConfig& b) {
    require_compatible(a.domain, b.domain);
    if (a.empty() || b.empty())
        throw UndefinedDistanceError("d_star undefined for an empty support");
    return l1_distance(a, b) + hausdorff(boundary_cells(a), boundary_cells(b));
}

double compact_open_distance(const BinaryConfig& a, const BinaryConfig& b) {
    require_compatible(a.domain, b.domain);
    const int D = a.domain.dim;
    const double eps = a.domain.epsilon;

    // Union box on growable axes; periodic extents must already agree.
    detail::Box ub;
    ub.origin.resize(static_cast<std::size_t>(D));
    ub.extent.resize(static_cast<std::size_t>(D));
    for (int d = 0; d < D; ++d) {
        auto sd = static_cast<std::size_t>(d);
        if (a.domain.boundary[sd] == BoundaryMode::Periodic &&
            a.domain.extent[sd] != b.domain.extent[sd])
            throw DimensionMismatchError("periodic extents differ");
        long lo = std::min(a.origin[sd], b.origin[sd]);
        long hi = std::max(a.origin[sd] + a.domain.extent[sd],
                           b.origin[sd] + b.domain.extent[sd]);
        ub.origin[sd] = lo;
        ub.extent[sd] = hi - lo;
    }

    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = ub.cell_count();
    for (std::size_t i = 0; i < n; ++i) {
        Coord z = ub.coord(i);
        if (a.at(z) == b.at(z)) continue;
        double r = 0.0;
        for (long c : z) r += static_cast<double>(c) * static_cast<double>(c);
        best = std::min(best, eps * std::sqrt(r));
    }

    double radius;
    if (best < std::numeric_limits<double>::infinity()) {
        radius = best;
    } else {
        // Identical on the union box: agreement is only certified out to the
        // box edge.  Count whole cells from cell 0 to the nearest edge.
        long cells = std::numeric_limits<long>::max();
        for (int d = 0; d < D; ++d) {
            auto sd = static_cast<std::size_t>(d);
            long left = -ub.origin[sd];
            long right = ub.origin[sd] + ub.extent[sd] - 1;
            cells = std::min(cells, std::max(0L, std::min(left, right)));
        }
        radius = eps * static_cast<double>(cells);
    }
    return std::exp(-radius);
}

StabilityReport stability_report(const BinaryConfig& a, const AutomatonSpec& spec,
                                 long fd_step) {
    if (fd_step < 1) throw InvalidArgumentError("fd_step must be >= 1");
    StillLifeCheck chk = is_still_life(a, spec);
    if (!chk.fixed) throw PreconditionError("stability report requires a fixed point");

    ScalarField alpha = neighborhood_alpha(a, spec);
    const auto& q = spec.quad;
    const auto abox = alpha.box();
    const int D = a.domain.dim;

    // Indicator configs for the survival and birth windows over the alpha
    // box, so the shared boundary extraction applies to S and B as well.
    BinaryConfig S{alpha.domain, alpha.origin,
                   std::vector<std::uint8_t>(alpha.values.size(), 0)};
    BinaryConfig B = S;
    for (std::size_t i = 0; i < alpha.values.size(); ++i) {
        const double v = alpha.values[i];
        S.cells[i] = q.survives(v) ? 1 : 0;
        B.cells[i] = q.births(v) ? 1 : 0;
    }
    PointSet edgeS = boundary_cells(S);
    PointSet edgeB = boundary_cells(B);
    PointSet edgeA = boundary_cells(a);

    StabilityReport out;
    out.m_inf = 0.0;
    const double eps = a.domain.epsilon;
    const double plateau_eta = 1e-9;
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<Coord> probe = edgeS.points;
    probe.insert(probe.end(), edgeB.points.begin(), edgeB.points.end());
    for (const Coord& z : probe) {
        // |grad alpha| by finite differences of the neighborhood field.
        double g2 = 0.0;
        for (int d = 0; d < D; ++d) {
            auto sd = static_cast<std::size_t>(d);
            Coord zp = z, zm = z;
            zp[sd] += fd_step;
            zm[sd] -= fd_step;
            const bool wrap = a.domain.boundary[sd] == BoundaryMode::Periodic;
            const bool has_p = wrap || abox.contains(zp);
            const bool has_m = wrap || abox.contains(zm);
            double num, den;
            if (has_p && has_m) {
                num = alpha.at(zp) - alpha.at(zm);
                den = 2.0 * static_cast<double>(fd_step) * eps;
            } else if (has_p) {
                num = alpha.at(zp) - alpha.at(z);
                den = static_cast<double>(fd_step) * eps;
            } else if (has_m) {
                num = alpha.at(z) - alpha.at(zm);
                den = static_cast<double>(fd_step) * eps;
            } else {
                num = 0.0;
                den = 1.0;
            }
            const double gd = num / den;
            g2 += gd * gd;
        }
        const double gnorm = std::sqrt(g2);
        const double v = alpha.at(z);
        const bool on_threshold =
            std::min(std::min(std::abs(v - q.s0), std::abs(v - q.s1)),
                     std::min(std::abs(v - q.b0), std::abs(v - q.b1))) <= plateau_eta;
        if (gnorm < 1e-9 || on_threshold)
            out.m_inf = inf;
        else if (out.m_inf != inf)
            out.m_inf = std::max(out.m_inf, 1.0 / gnorm);
    }

    auto gap = [&](const PointSet& X, const PointSet& Y) {
        if (X.points.empty() || Y.points.empty()) return inf;
        return averaged_hausdorff(X.points, Y.points, eps);
    };
    out.gamma = std::min(gap(edgeB, edgeA), gap(edgeA, edgeS));
    return out;
}

}  // namespace ltl
