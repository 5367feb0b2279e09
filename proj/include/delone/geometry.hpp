#pragma once

// Point-set geometry: (r,R) validation with certified grid checks, greedy
// maximal fills on tori and annuli, and the periodic-extension / gluing
// constructions that modify a set only outside a prescribed box.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "delone/common.hpp"

namespace delone::geometry {

using Point = std::vector<double>;

inline bool all_finite(const Point& p) {
    for (double c : p)
        if (!std::isfinite(c)) return false;
    return true;
}

inline double sq_dist(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double t = a[i] - b[i];
        s += t * t;
    }
    return s;
}

inline double dist(const Point& a, const Point& b) { return std::sqrt(sq_dist(a, b)); }

inline double sup_norm(const Point& p) {
    double m = 0.0;
    for (double c : p) m = std::max(m, std::abs(c));
    return m;
}

inline double euclid_norm(const Point& p) {
    double s = 0.0;
    for (double c : p) s += c * c;
    return std::sqrt(s);
}

inline bool lex_less(const Point& a, const Point& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline void canonical_sort(std::vector<Point>& pts) { std::sort(pts.begin(), pts.end(), lex_less); }

// Coordinate-exact set equality after canonical sorting.
inline bool set_equal(std::vector<Point> a, std::vector<Point> b) {
    if (a.size() != b.size()) return false;
    canonical_sort(a);
    canonical_sort(b);
    return a == b;
}

struct DeloneParams {
    double r;  // packing radius: open r-balls around points are disjoint
    double R;  // covering radius: closed R-balls cover space
    int d;

    void validate() const {
        if (!(r > 0.0) || !(R > 0.0) || r > R || d < 1)
            throw invalid_input("DeloneParams: need 0 < r <= R and d >= 1");
    }
};

// Q(S) = [-S, S]^d
struct Box {
    double S;

    bool contains(const Point& p) const { return sup_norm(p) <= S; }
};

struct TorusMetric {
    double period;
    int d;

    // exact per-axis reduction; std::remainder is exact in IEEE arithmetic
    double sq_dist(const Point& a, const Point& b) const {
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            double t = std::remainder(a[i] - b[i], period);
            s += t * t;
        }
        return s;
    }

    double dist(const Point& a, const Point& b) const { return std::sqrt(sq_dist(a, b)); }
};

struct WindowedPointSet {
    std::vector<Point> points;
    Box window;
    DeloneParams params;
};

// Period lattice a*Z^d plus a finite motif. Motif coordinates are kept
// verbatim (no mod-a reduction): reducing through floating point would
// destroy the coordinate-exact agreement the constructions guarantee.
struct CrystallographicSet {
    double period;
    std::vector<Point> motif;
    DeloneParams params;

    // All points of motif + period*Z^d inside Q(S). The k = 0 copy is the
    // motif coordinate itself, bit-exact.
    std::vector<Point> unfold(double S) const {
        std::vector<Point> out;
        const int d = params.d;
        std::vector<long> klo(d), khi(d), k(d);
        for (const Point& m : motif) {
            double copies = 1.0;
            for (int i = 0; i < d; ++i) {
                klo[i] = static_cast<long>(std::ceil((-S - m[i]) / period));
                khi[i] = static_cast<long>(std::floor((S - m[i]) / period));
                if (khi[i] < klo[i]) { copies = 0.0; break; }
                copies *= static_cast<double>(khi[i] - klo[i] + 1);
            }
            if (copies == 0.0) continue;
            if (copies > 5e7) throw resource_error("unfold: too many lattice copies requested");
            k = klo;
            while (true) {
                Point p(d);
                bool in = true;
                for (int i = 0; i < d; ++i) {
                    p[i] = (k[i] == 0) ? m[i] : m[i] + static_cast<double>(k[i]) * period;
                    if (std::abs(p[i]) > S) { in = false; break; }
                }
                if (in) out.push_back(std::move(p));
                int axis = d - 1;
                while (axis >= 0 && ++k[axis] > khi[axis]) {
                    k[axis] = klo[axis];
                    --axis;
                }
                if (axis < 0) break;
            }
        }
        canonical_sort(out);
        return out;
    }
};

// ---------------------------------------------------------------------------
// Verification

inline std::optional<std::pair<std::size_t, std::size_t>> packing_violation(
    const std::vector<Point>& points, double r) {
    if (!(r > 0.0)) throw invalid_input("packing: r must be positive");
    for (const Point& p : points)
        if (!all_finite(p)) throw invalid_input("packing: non-finite coordinate");
    const double min_sq = (2.0 * r) * (2.0 * r);
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (sq_dist(points[i], points[j]) < min_sq) return std::make_pair(i, j);
    return std::nullopt;
}

// Open r-balls pairwise disjoint, i.e. all pairwise distances >= 2r.
inline bool verify_packing(const std::vector<Point>& points, double r) {
    return !packing_violation(points, r).has_value();
}

struct CoveringCertificate {
    bool covered;           // every grid node within R of a point
    double certified_bound; // covering radius over the region is <= this
    double worst_node_dist; // largest node-to-set distance seen
    double pitch_used;      // effective grid pitch (<= requested)
};

namespace detail {

inline std::vector<double> axis_nodes(double lo, double hi, double pitch, bool include_hi) {
    long n = std::max(1L, static_cast<long>(std::ceil((hi - lo) / pitch)));
    double step = (hi - lo) / static_cast<double>(n);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    long last = include_hi ? n : n - 1;
    for (long i = 0; i <= last; ++i)
        out.push_back(i == 0 ? lo : (i == n ? hi : lo + static_cast<double>(i) * step));
    return out;
}

inline void check_grid_size(const std::vector<std::vector<double>>& axes) {
    double total = 1.0;
    for (const auto& a : axes) total *= static_cast<double>(a.size());
    if (total > 1e8) throw resource_error("grid scan too large; increase pitch");
}

// Lexicographic scan of the product grid (first axis slowest).
template <class F>
void for_each_node(const std::vector<std::vector<double>>& axes, F&& f) {
    const int d = static_cast<int>(axes.size());
    std::vector<std::size_t> idx(d, 0);
    Point p(d);
    while (true) {
        for (int i = 0; i < d; ++i) p[i] = axes[i][idx[i]];
        f(p);
        int axis = d - 1;
        while (axis >= 0 && ++idx[axis] == axes[axis].size()) idx[axis--] = 0;
        if (axis < 0) break;
    }
}

}  // namespace detail

// Grid check: every node of a pitch-grid over Q(region.S) lies within R of
// some point. A true result certifies covering radius <= worst + pitch*sqrt(d)/2
// over the whole region (any region point is within pitch*sqrt(d)/2 of a node).
inline CoveringCertificate verify_covering(const std::vector<Point>& points, double R,
                                           const Box& region, double pitch, int d) {
    if (!(pitch > 0.0)) throw invalid_input("covering: pitch must be positive");
    std::vector<std::vector<double>> axes(d, detail::axis_nodes(-region.S, region.S, pitch, true));
    detail::check_grid_size(axes);
    double eff = axes[0].size() > 1 ? axes[0][1] - axes[0][0] : 0.0;
    double worst = points.empty() ? std::numeric_limits<double>::infinity() : 0.0;
    if (!points.empty()) {
        detail::for_each_node(axes, [&](const Point& node) {
            double best = std::numeric_limits<double>::infinity();
            for (const Point& q : points) best = std::min(best, sq_dist(node, q));
            worst = std::max(worst, best);
        });
        worst = std::sqrt(worst);
    }
    double slack = 0.5 * eff * std::sqrt(static_cast<double>(d));
    return CoveringCertificate{worst <= R, worst + slack, worst, eff};
}

// Pairwise torus separation >= 2r of the motif.
inline bool verify_packing(const CrystallographicSet& g) {
    TorusMetric tm{g.period, g.params.d};
    const double min_sq = (2.0 * g.params.r) * (2.0 * g.params.r);
    for (const Point& p : g.motif)
        if (!all_finite(p)) throw invalid_input("packing: non-finite coordinate");
    for (std::size_t i = 0; i < g.motif.size(); ++i)
        for (std::size_t j = i + 1; j < g.motif.size(); ++j)
            if (tm.sq_dist(g.motif[i], g.motif[j]) < min_sq) return false;
    return true;
}

// One-period covering check of a crystallographic set in the torus metric.
inline CoveringCertificate verify_covering(const CrystallographicSet& g, double pitch) {
    if (!(pitch > 0.0)) throw invalid_input("covering: pitch must be positive");
    const int d = g.params.d;
    TorusMetric tm{g.period, d};
    std::vector<std::vector<double>> axes(
        d, detail::axis_nodes(-0.5 * g.period, 0.5 * g.period, pitch, false));
    detail::check_grid_size(axes);
    double eff = g.period / static_cast<double>(axes[0].size());
    double worst = g.motif.empty() ? std::numeric_limits<double>::infinity() : 0.0;
    if (!g.motif.empty()) {
        detail::for_each_node(axes, [&](const Point& node) {
            double best = std::numeric_limits<double>::infinity();
            for (const Point& q : g.motif) best = std::min(best, tm.sq_dist(node, q));
            worst = std::max(worst, best);
        });
        worst = std::sqrt(worst);
    }
    double slack = 0.5 * eff * std::sqrt(static_cast<double>(d));
    return CoveringCertificate{worst <= g.params.R, worst + slack, worst, eff};
}

// ---------------------------------------------------------------------------
// Greedy maximal fills

struct TorusDomain {
    double period;
    int d;
    // Candidates inside Q(exclude_half_width) are never proposed; used by the
    // extension to leave the prescribed box untouched.
    std::optional<double> exclude_half_width;
};

// Q(outer) \ Q(inner), Euclidean metric.
struct AnnulusDomain {
    double outer;
    double inner;
    int d;
};

struct FillResult {
    std::vector<Point> points;   // seed followed by accepted candidates
    std::size_t added_from;      // index of first added point
    double covering_bound;       // certified covering radius of the scanned domain
    double pitch_used;
};

inline FillResult maximal_separated_fill(const std::vector<Point>& seed, const TorusDomain& dom,
                                         double min_sep, double pitch) {
    if (!(pitch > 0.0) || pitch > min_sep / 4.0)
        throw refine_pitch_error("fill: pitch must be <= min_sep/4", min_sep / 4.0);
    TorusMetric tm{dom.period, dom.d};
    const double min_sq = min_sep * min_sep;
    for (std::size_t i = 0; i < seed.size(); ++i)
        for (std::size_t j = i + 1; j < seed.size(); ++j)
            if (tm.sq_dist(seed[i], seed[j]) < min_sq)
                throw precondition_error("fill: seed violates separation");
    std::vector<std::vector<double>> axes(
        dom.d, detail::axis_nodes(-0.5 * dom.period, 0.5 * dom.period, pitch, false));
    detail::check_grid_size(axes);
    double eff = dom.period / static_cast<double>(axes[0].size());
    FillResult res;
    res.points = seed;
    res.added_from = seed.size();
    detail::for_each_node(axes, [&](const Point& c) {
        if (dom.exclude_half_width && sup_norm(c) <= *dom.exclude_half_width) return;
        for (const Point& q : res.points)
            if (tm.sq_dist(c, q) < min_sq) return;
        res.points.push_back(c);
    });
    res.covering_bound = min_sep + eff * std::sqrt(static_cast<double>(dom.d));
    res.pitch_used = eff;
    return res;
}

inline FillResult maximal_separated_fill(const std::vector<Point>& seed, const AnnulusDomain& dom,
                                         double min_sep, double pitch) {
    if (!(pitch > 0.0) || pitch > min_sep / 4.0)
        throw refine_pitch_error("fill: pitch must be <= min_sep/4", min_sep / 4.0);
    const double min_sq = min_sep * min_sep;
    for (std::size_t i = 0; i < seed.size(); ++i)
        for (std::size_t j = i + 1; j < seed.size(); ++j)
            if (sq_dist(seed[i], seed[j]) < min_sq)
                throw precondition_error("fill: seed violates separation");
    std::vector<std::vector<double>> axes(dom.d,
                                          detail::axis_nodes(-dom.outer, dom.outer, pitch, true));
    detail::check_grid_size(axes);
    double eff = axes[0].size() > 1 ? axes[0][1] - axes[0][0] : 0.0;
    FillResult res;
    res.points = seed;
    res.added_from = seed.size();
    detail::for_each_node(axes, [&](const Point& c) {
        if (sup_norm(c) <= dom.inner) return;  // stay out of the protected box
        for (const Point& q : res.points)
            if (sq_dist(c, q) < min_sq) return;
        res.points.push_back(c);
    });
    res.covering_bound = min_sep + eff * std::sqrt(static_cast<double>(dom.d));
    res.pitch_used = eff;
    return res;
}

// ---------------------------------------------------------------------------
// Constructions

namespace detail {

inline void check_construction(const WindowedPointSet& w, double S, double pitch,
                               bool need_R_certificate) {
    w.params.validate();
    const double r = w.params.r, R = w.params.R;
    const int d = w.params.d;
    if (2.0 * r > R) throw precondition_error("construction requires 2r <= R");
    if (w.window.S < S + R)
        throw insufficient_window("window must contain Q(S+R)", S + R);
    double req = r / 2.0;
    if (need_R_certificate) req = std::min(req, (R - 2.0 * r) / std::sqrt(static_cast<double>(d)));
    if (!(pitch > 0.0) || pitch > req)
        throw refine_pitch_error("pitch too coarse for the covering certificate", req);
}

inline std::vector<Point> points_in_box(const std::vector<Point>& pts, double S) {
    std::vector<Point> out;
    for (const Point& p : pts)
        if (sup_norm(p) <= S) out.push_back(p);
    return out;
}

}  // namespace detail

// Extend a windowed set to a fully periodic one agreeing with it on Q(S):
// wrap Q(S+R+r) onto a torus of period 2(S+R+r), keep the window points as
// motif seed and fill the rest of the torus to grid-maximality.
inline CrystallographicSet crystallographic_extension(const WindowedPointSet& w, double S,
                                                      double pitch) {
    detail::check_construction(w, S, pitch, true);
    const double r = w.params.r, R = w.params.R;
    const double a = 2.0 * (S + R + r);
    std::vector<Point> seed = detail::points_in_box(w.points, S + R);
    TorusDomain dom{a, w.params.d, S};
    FillResult fill = maximal_separated_fill(seed, dom, 2.0 * r, pitch);
    CrystallographicSet out{a, std::move(fill.points), w.params};
    canonical_sort(out.motif);
    return out;
}

struct GlueResult {
    WindowedPointSet set;
    CrystallographicSet tail;    // behavior at infinity
    double agree_radius;         // set == omega on Q(agree_radius)
    double tail_radius;          // set == tail outside Q(tail_radius)
    std::vector<Point> additions;
    double fill_covering_bound;  // annulus covering certified at this level
};

// Interpolate between omega (inside Q(S)) and the periodic set gamma
// (outside Q(S+2R+r)), adding points only in the annulus between them.
// Gamma points within 2r of a kept omega point are dropped; they all lie
// inside Q(S+R+2r) subset Q(S+2R+r), so neither published agreement region
// is touched.
inline GlueResult glue(const WindowedPointSet& w, const CrystallographicSet& g, double S,
                       double pitch) {
    detail::check_construction(w, S, pitch, false);
    if (g.params.d != w.params.d) throw invalid_input("glue: dimension mismatch");
    if (g.params.r != w.params.r || g.params.R != w.params.R)
        throw invalid_input("glue: parameter mismatch");
    const double r = w.params.r, R = w.params.R;
    const int d = w.params.d;
    const double outer = S + 2.0 * R + r;
    const double s_out = std::max(w.window.S, outer + R);

    std::vector<Point> base = detail::points_in_box(w.points, S + R);
    std::vector<Point> far;
    const double min_sq = (2.0 * r) * (2.0 * r);
    for (Point& p : g.unfold(s_out)) {
        if (sup_norm(p) <= S + R + r) continue;
        bool conflict = false;
        for (const Point& q : base)
            if (sq_dist(p, q) < min_sq) { conflict = true; break; }
        if (!conflict) far.push_back(std::move(p));
    }

    std::vector<Point> seed = base;
    seed.insert(seed.end(), far.begin(), far.end());
    FillResult fill = maximal_separated_fill(seed, AnnulusDomain{outer, S, d}, 2.0 * r, pitch);

    GlueResult res;
    res.additions.assign(fill.points.begin() + static_cast<long>(fill.added_from),
                         fill.points.end());
    res.set.points = std::move(fill.points);
    canonical_sort(res.set.points);
    res.set.window = Box{s_out};
    res.set.params = w.params;
    res.tail = g;
    res.agree_radius = S;
    res.tail_radius = outer;
    res.fill_covering_bound = fill.covering_bound;
    return res;
}

// A declared period representation is self-consistent iff no two motif
// entries are congruent modulo the lattice (each orbit listed once).
inline bool per_lattice_check(const CrystallographicSet& g) {
    if (!(g.period > 0.0)) return false;
    TorusMetric tm{g.period, g.params.d};
    for (const Point& m : g.motif)
        if (!all_finite(m) || static_cast<int>(m.size()) != g.params.d) return false;
    for (std::size_t i = 0; i < g.motif.size(); ++i)
        for (std::size_t j = i + 1; j < g.motif.size(); ++j)
            if (tm.sq_dist(g.motif[i], g.motif[j]) == 0.0) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Uniform access to the two representations

using SetRef = std::variant<const WindowedPointSet*, const CrystallographicSet*>;

inline int dim(SetRef s) {
    return std::visit([](auto* p) { return p->params.d; }, s);
}

inline const DeloneParams& params_of(SetRef s) {
    return std::visit([](auto* p) -> const DeloneParams& { return p->params; }, s);
}

// Radius out to which the representation determines the set.
inline double known_radius(SetRef s) {
    if (auto* w = std::get_if<const WindowedPointSet*>(&s)) return (*w)->window.S;
    return std::numeric_limits<double>::infinity();
}

// All points inside Q(S) (throws if the representation stops earlier).
inline std::vector<Point> restrict_box(SetRef s, double S) {
    if (auto* w = std::get_if<const WindowedPointSet*>(&s)) {
        if ((*w)->window.S < S)
            throw insufficient_window("windowed set does not determine Q(S)", S);
        return detail::points_in_box((*w)->points, S);
    }
    return std::get<const CrystallographicSet*>(s)->unfold(S);
}

// All represented points, clipped to Q(S) only where unfolding requires it.
inline std::vector<Point> available_points(SetRef s, double S) {
    if (auto* w = std::get_if<const WindowedPointSet*>(&s)) return (*w)->points;
    return std::get<const CrystallographicSet*>(s)->unfold(S);
}

}  // namespace delone::geometry
