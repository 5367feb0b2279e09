#pragma once

// The point-at-infinity topology on closed point sets: stereographic
// compactification, capped Hausdorff distance on the sphere, the induced
// metric with a truncation error bound, and local convergence diagnostics.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "delone/common.hpp"
#include "delone/geometry.hpp"

namespace delone::topology {

using geometry::Point;
using geometry::SetRef;

using SpherePoint = std::vector<double>;  // d+1 coordinates, unit norm

inline SpherePoint north_pole(int d) {
    SpherePoint p(static_cast<std::size_t>(d) + 1, 0.0);
    p.back() = 1.0;
    return p;
}

// j(x) = (2x, |x|^2 - 1) / (1 + |x|^2), with infinity at the north pole.
// The last coordinate is computed as 1 - 2/(1+|x|^2), which stays finite for
// arbitrarily large inputs.
inline SpherePoint stereographic(const Point& x) {
    double n2 = 0.0;
    for (double c : x) n2 += c * c;
    SpherePoint p(x.size() + 1);
    for (std::size_t i = 0; i < x.size(); ++i) p[i] = 2.0 * x[i] / (1.0 + n2);
    p.back() = 1.0 - 2.0 / (1.0 + n2);
    return p;
}

inline double chordal(const SpherePoint& a, const SpherePoint& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double t = a[i] - b[i];
        s += t * t;
    }
    return std::sqrt(s);
}

// Exact chordal distance between images of finite points:
// |j(x)-j(y)| = 2|x-y| / sqrt((1+|x|^2)(1+|y|^2)).
inline double chordal_of(const Point& x, const Point& y) {
    return chordal(stereographic(x), stereographic(y));
}

inline double pole_distance(const Point& x) {
    double n2 = 0.0;
    for (double c : x) n2 += c * c;
    return 2.0 / std::sqrt(1.0 + n2);
}

struct CompactifiedSet {
    std::vector<SpherePoint> sphere_points;  // includes the pole
    std::vector<double> source_order;        // d==1 only: originating x, sorted
    double truncation_radius;
    double truncation_error;  // <= 2/truncation_radius
    int d;
};

inline CompactifiedSet compactify(const std::vector<Point>& pts, double T, int d) {
    CompactifiedSet cs;
    cs.truncation_radius = T;
    cs.truncation_error = 2.0 / std::sqrt(1.0 + T * T);
    cs.d = d;
    std::vector<Point> kept;
    for (const Point& p : pts)
        if (geometry::euclid_norm(p) <= T) kept.push_back(p);
    geometry::canonical_sort(kept);
    cs.sphere_points.reserve(kept.size() + 1);
    for (const Point& p : kept) {
        cs.sphere_points.push_back(stereographic(p));
        if (d == 1) cs.source_order.push_back(p[0]);
    }
    cs.sphere_points.push_back(north_pole(d));
    return cs;
}

namespace detail {

inline double sup_dist_all_pairs(const std::vector<SpherePoint>& A,
                                 const std::vector<SpherePoint>& B) {
    double sup = 0.0;
    for (const SpherePoint& a : A) {
        double best = std::numeric_limits<double>::infinity();
        for (const SpherePoint& b : B) {
            double s = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                double t = a[i] - b[i];
                s += t * t;
            }
            best = std::min(best, s);
            if (best == 0.0) break;
        }
        sup = std::max(sup, best);
    }
    return std::sqrt(sup);
}

// d == 1: the image of the line is a circle through the pole, and sorting by
// x sorts by angle. The chordal nearest neighbor of a point is one of its two
// angular neighbors, which are the x-order neighbors or (wrapping past the
// pole) the extreme points, or the pole itself.
inline double sup_dist_line(const CompactifiedSet& A, const CompactifiedSet& B) {
    const SpherePoint pole = north_pole(1);
    const std::size_t nb = B.source_order.size();
    double sup = 0.0;
    for (std::size_t i = 0; i < A.sphere_points.size(); ++i) {
        const SpherePoint& a = A.sphere_points[i];
        double best;
        if (i == A.source_order.size()) {  // a is A's pole, contained in B too
            best = 0.0;
        } else {
            best = chordal(a, pole);
            double x = A.source_order[i];
            auto it = std::lower_bound(B.source_order.begin(), B.source_order.end(), x);
            std::size_t j = static_cast<std::size_t>(it - B.source_order.begin());
            auto try_idx = [&](std::size_t k) {
                if (k < nb) best = std::min(best, chordal(a, B.sphere_points[k]));
            };
            try_idx(j);
            if (j > 0) try_idx(j - 1);
            try_idx(0);
            if (nb > 0) try_idx(nb - 1);
        }
        sup = std::max(sup, best);
    }
    return sup;
}

}  // namespace detail

// e_H with the values capped at 1; zero iff the lists agree as sets.
inline double hausdorff_capped(const std::vector<SpherePoint>& A,
                               const std::vector<SpherePoint>& B) {
    if (A.empty() || B.empty()) throw invalid_input("hausdorff_capped: empty input");
    double v = std::max(detail::sup_dist_all_pairs(A, B), detail::sup_dist_all_pairs(B, A));
    return std::min(v, 1.0);
}

inline double hausdorff_capped(const CompactifiedSet& A, const CompactifiedSet& B) {
    if (A.d == 1 && B.d == 1) {
        double v = std::max(detail::sup_dist_line(A, B), detail::sup_dist_line(B, A));
        return std::min(v, 1.0);
    }
    return hausdorff_capped(A.sphere_points, B.sphere_points);
}

struct DistanceResult {
    double value;
    double error_bound;       // absolute truncation error
    double truncation_radius;
};

// Capped Hausdorff distance between the compactified images. Points beyond
// T = 4/tol project within tol/2 of the pole, which both images contain, so
// truncating there perturbs the value by at most tol/2 per side.
inline DistanceResult natural_distance(SetRef F, SetRef G, double tol) {
    if (!(tol > 0.0)) throw invalid_input("natural_distance: tol must be positive");
    if (geometry::dim(F) != geometry::dim(G))
        throw invalid_input("natural_distance: dimension mismatch");
    const int d = geometry::dim(F);
    const double T = 4.0 / tol;
    if (geometry::known_radius(F) < T)
        throw insufficient_window("first set does not determine U_T(0)", T);
    if (geometry::known_radius(G) < T)
        throw insufficient_window("second set does not determine U_T(0)", T);
    CompactifiedSet cf = compactify(geometry::restrict_box(F, T), T, d);
    CompactifiedSet cg = compactify(geometry::restrict_box(G, T), T, d);
    return DistanceResult{hausdorff_capped(cf, cg), tol, T};
}

namespace detail {

inline std::vector<Point> ball_restrict(const std::vector<Point>& pts, double L) {
    std::vector<Point> out;
    for (const Point& p : pts)
        if (geometry::euclid_norm(p) < L) out.push_back(p);
    return out;
}

inline double nearest_dist(const Point& x, const std::vector<Point>& targets) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& t : targets) best = std::min(best, geometry::sq_dist(x, t));
    return std::sqrt(best);
}

}  // namespace detail

// Uncapped Euclidean Hausdorff distance between the restrictions to the open
// ball U_L(0). Restricted points are matched against everything the other
// representation provides (not just its own restriction); matching against a
// hard-truncated list manufactures boundary artifacts of size up to 2L.
// Returns nullopt when either restriction is empty.
inline std::optional<double> local_hausdorff(SetRef F, SetRef G, double L) {
    if (!(L > 0.0)) throw invalid_input("local_hausdorff: L must be positive");
    if (geometry::known_radius(F) < L)
        throw insufficient_window("first set does not determine U_L(0)", L);
    if (geometry::known_radius(G) < L)
        throw insufficient_window("second set does not determine U_L(0)", L);
    const double reach = 3.0 * L + std::sqrt(static_cast<double>(geometry::dim(F)));
    std::vector<Point> fa = geometry::available_points(F, reach);
    std::vector<Point> ga = geometry::available_points(G, reach);
    std::vector<Point> fr = detail::ball_restrict(fa, L);
    std::vector<Point> gr = detail::ball_restrict(ga, L);
    if (fr.empty() || gr.empty()) return std::nullopt;
    double sup = 0.0;
    for (const Point& x : fr) sup = std::max(sup, detail::nearest_dist(x, ga));
    for (const Point& y : gr) sup = std::max(sup, detail::nearest_dist(y, fa));
    return sup;
}

// ---------------------------------------------------------------------------
// Convergence diagnostics

struct ConvergenceLevel {
    double l;    // requested scale
    double L;    // actual radius used (L > l)
    double eps;
};

struct PointTrace {
    Point x;                            // a point of the limit set in U_L(0)
    std::vector<double> nearest_dist;   // per sequence element
    bool converged;                     // final distance <= eps
};

struct SpuriousPoint {
    Point x;                // point of the final element far from the limit
    double dist_to_limit;
};

struct LevelReport {
    ConvergenceLevel level;
    std::vector<std::optional<double>> local_h;  // per n
    std::optional<std::size_t> n0;               // 1-based; all later values <= eps
    std::vector<PointTrace> traces;
    std::vector<SpuriousPoint> final_spurious;
};

struct ConvergenceReport {
    std::vector<double> delta;
    std::vector<double> delta_bound;
    std::vector<LevelReport> levels;
};

inline ConvergenceReport convergence_report(const std::vector<SetRef>& seq, SetRef limit,
                                            const std::vector<ConvergenceLevel>& levels,
                                            double delta_tol) {
    ConvergenceReport rep;
    for (SetRef s : seq) {
        if (geometry::dim(s) != geometry::dim(limit))
            throw invalid_input("convergence_report: dimension mismatch");
        DistanceResult dr = natural_distance(s, limit, delta_tol);
        rep.delta.push_back(dr.value);
        rep.delta_bound.push_back(dr.error_bound);
    }
    for (const ConvergenceLevel& lv : levels) {
        LevelReport lr;
        lr.level = lv;
        for (SetRef s : seq) lr.local_h.push_back(local_hausdorff(s, limit, lv.L));
        for (std::size_t i = seq.size(); i-- > 0;) {
            if (lr.local_h[i] && *lr.local_h[i] <= lv.eps)
                lr.n0 = i + 1;
            else
                break;
        }
        const double reach = 3.0 * lv.L + std::sqrt(static_cast<double>(geometry::dim(limit)));
        std::vector<Point> lim_pts = geometry::available_points(limit, reach);
        for (const Point& x : detail::ball_restrict(lim_pts, lv.L)) {
            PointTrace tr;
            tr.x = x;
            for (SetRef s : seq)
                tr.nearest_dist.push_back(
                    detail::nearest_dist(x, geometry::available_points(s, reach)));
            tr.converged = !tr.nearest_dist.empty() && tr.nearest_dist.back() <= lv.eps;
            lr.traces.push_back(std::move(tr));
        }
        if (!seq.empty()) {
            std::vector<Point> last = geometry::available_points(seq.back(), reach);
            for (const Point& y : detail::ball_restrict(last, lv.L)) {
                double dl = detail::nearest_dist(y, lim_pts);
                if (dl > lv.eps) lr.final_spurious.push_back(SpuriousPoint{y, dl});
            }
        }
        rep.levels.push_back(std::move(lr));
    }
    return rep;
}

}  // namespace delone::topology
