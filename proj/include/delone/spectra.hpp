#pragma once

// One-dimensional discretized Hamiltonians -Laplacian + sum of translated
// single-site potentials: 3-point assembly, Sturm-sequence eigenvalue
// counting and bisection, periodic band structure through 2x2 transfer
// matrices, interval algebra for band comparisons, spectral measures of
// (operator, vector) pairs, and shifted-resolvent distances.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "delone/common.hpp"
#include "delone/geometry.hpp"
#include "delone/measures.hpp"

namespace delone::spectra {

using geometry::SetRef;

// Continuous piecewise-linear single-site profile on [-w, w], zero at the
// endpoints, bounded.
struct Potential {
    double half_width;
    std::vector<std::pair<double, double>> profile;  // (x, value), includes (-w,0),(w,0)

    double operator()(double x) const {
        if (x <= profile.front().first || x >= profile.back().first) return 0.0;
        auto it = std::upper_bound(
            profile.begin(), profile.end(), x,
            [](double v, const std::pair<double, double>& bp) { return v < bp.first; });
        auto lo = *(it - 1);
        auto hi = *it;
        double t = (x - lo.first) / (hi.first - lo.first);
        return lo.second + t * (hi.second - lo.second);
    }

    double bound() const {
        double b = 0.0;
        for (const auto& [x, v] : profile) b = std::max(b, std::abs(v));
        return b;
    }

    static Potential trapezoid_well(double depth, double half_width, double shoulder) {
        if (!(half_width > 0.0) || !(shoulder > 0.0) || 2.0 * shoulder >= 2.0 * half_width)
            throw invalid_input("trapezoid_well: need 0 < shoulder < half_width");
        return Potential{half_width,
                         {{-half_width, 0.0},
                          {-half_width + shoulder, depth},
                          {half_width - shoulder, depth},
                          {half_width, 0.0}}};
    }

    static Potential zero(double half_width = 0.5) {
        return Potential{half_width, {{-half_width, 0.0}, {half_width, 0.0}}};
    }

    // square-ish well of depth -1 on [-0.3, 0.3] with 0.05 ramps
    static Potential default_well() { return trapezoid_well(-1.0, 0.3, 0.05); }
};

struct Grid1D {
    double x0;
    double x1;
    double h;
    int n;  // node count, endpoints included

    static Grid1D make(double x0, double x1, double h) {
        if (!(h > 0.0) || !(x1 > x0)) throw invalid_input("Grid1D: need x1 > x0 and h > 0");
        int n = static_cast<int>(std::lround((x1 - x0) / h)) + 1;
        if (n < 2) throw invalid_input("Grid1D: need at least 2 nodes");
        return Grid1D{x0, x1, h, n};
    }

    double node(int i) const { return x0 + static_cast<double>(i) * h; }
};

enum class Boundary { dirichlet, periodic_cell };

// Symmetric tridiagonal operator; for Hamiltonians diag = 2/h^2 + V and
// offdiag = -1/h^2. Dirichlet means zero beyond both ends; periodic_cell
// content goes through the transfer-matrix path only.
struct TridiagonalOperator {
    std::vector<double> diag;
    std::vector<double> offdiag;  // size n-1
    double h;
    Boundary boundary;

    int n() const { return static_cast<int>(diag.size()); }
};

// V_i = sum over points within half_width of node i of v(node - point).
inline std::vector<double> sample_potential(SetRef omega, const Potential& v, const Grid1D& g) {
    if (geometry::dim(omega) != 1) throw invalid_input("sample_potential: d == 1 only");
    const double w = v.half_width;
    const double required = std::max(std::abs(g.x0 - w), std::abs(g.x1 + w));
    if (geometry::known_radius(omega) < required)
        throw insufficient_window("set does not determine [x0-w, x1+w]", required);
    std::vector<geometry::Point> pts = geometry::restrict_box(omega, required);
    std::vector<double> xs;
    xs.reserve(pts.size());
    for (const auto& p : pts) xs.push_back(p[0]);
    std::sort(xs.begin(), xs.end());
    std::vector<double> V(static_cast<std::size_t>(g.n), 0.0);
    for (int i = 0; i < g.n; ++i) {
        double x = g.node(i);
        auto lo = std::lower_bound(xs.begin(), xs.end(), x - w);
        auto hi = std::upper_bound(xs.begin(), xs.end(), x + w);
        double s = 0.0;
        for (auto it = lo; it != hi; ++it) s += v(x - *it);
        V[static_cast<std::size_t>(i)] = s;
    }
    return V;
}

inline TridiagonalOperator assemble(const std::vector<double>& V, double h, Boundary b) {
    if (V.size() < 2) throw invalid_input("assemble: need N >= 2");
    if (!(h > 0.0)) throw invalid_input("assemble: h > 0");
    TridiagonalOperator T;
    T.h = h;
    T.boundary = b;
    const double inv_h2 = 1.0 / (h * h);
    T.diag.reserve(V.size());
    for (double v : V) T.diag.push_back(2.0 * inv_h2 + v);
    T.offdiag.assign(V.size() - 1, -inv_h2);
    return T;
}

inline std::pair<double, double> gershgorin(const TridiagonalOperator& T) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    const int n = T.n();
    for (int i = 0; i < n; ++i) {
        double radius = (i > 0 ? std::abs(T.offdiag[static_cast<std::size_t>(i - 1)]) : 0.0) +
                        (i + 1 < n ? std::abs(T.offdiag[static_cast<std::size_t>(i)]) : 0.0);
        lo = std::min(lo, T.diag[static_cast<std::size_t>(i)] - radius);
        hi = std::max(hi, T.diag[static_cast<std::size_t>(i)] + radius);
    }
    return {lo, hi};
}

namespace detail {

inline double pivmin(const TridiagonalOperator& T) {
    double e2 = 1.0;
    for (double e : T.offdiag) e2 = std::max(e2, e * e);
    return std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon() * e2;
}

}  // namespace detail

// Number of eigenvalues strictly below E (Sturm sequence / LDL^T inertia).
// Near-zero pivots are replaced by +pivmin, so an eigenvalue exactly at E is
// not counted.
inline int eig_count(const TridiagonalOperator& T, double E) {
    if (T.boundary != Boundary::dirichlet) throw invalid_input("eig_count: Dirichlet only");
    const double pm = detail::pivmin(T);
    int count = 0;
    double q = 1.0;
    const int n = T.n();
    for (int i = 0; i < n; ++i) {
        double off2 = i > 0 ? T.offdiag[static_cast<std::size_t>(i - 1)] *
                                  T.offdiag[static_cast<std::size_t>(i - 1)]
                            : 0.0;
        q = (T.diag[static_cast<std::size_t>(i)] - E) - (i > 0 ? off2 / q : 0.0);
        if (std::abs(q) < pm) q = pm;
        if (q < 0.0) ++count;
    }
    return count;
}

struct Eigenvalue {
    double value;
    int multiplicity;
};

// All eigenvalues in [a, b], located by bisection on eig_count to absolute
// tolerance tol. Output is ascending; the total multiplicity equals
// eig_count(b) - eig_count(a).
inline std::vector<Eigenvalue> eigs_in(const TridiagonalOperator& T, double a, double b,
                                       double tol) {
    if (!(tol > 0.0)) throw invalid_input("eigs_in: tol > 0");
    std::vector<Eigenvalue> out;
    if (b <= a) return out;
    struct Segment {
        double lo, hi;
        int clo, chi;
    };
    int ca = eig_count(T, a), cb = eig_count(T, b);
    if (cb == ca) return out;
    std::vector<Segment> stack{{a, b, ca, cb}};
    while (!stack.empty()) {
        Segment s = stack.back();
        stack.pop_back();
        double mid = 0.5 * (s.lo + s.hi);
        // stop at the tolerance or when the interval cannot be split further
        if (s.hi - s.lo <= tol || !(s.lo < mid) || !(mid < s.hi)) {
            out.push_back({mid, s.chi - s.clo});
            continue;
        }
        int cm = eig_count(T, mid);
        // push the upper half first so the lower half is processed first
        if (s.chi > cm) stack.push_back({mid, s.hi, cm, s.chi});
        if (cm > s.clo) stack.push_back({s.lo, mid, s.clo, cm});
    }
    std::sort(out.begin(), out.end(),
              [](const Eigenvalue& x, const Eigenvalue& y) { return x.value < y.value; });
    return out;
}

inline std::vector<double> expand(const std::vector<Eigenvalue>& evs) {
    std::vector<double> out;
    for (const Eigenvalue& e : evs)
        for (int k = 0; k < e.multiplicity; ++k) out.push_back(e.value);
    return out;
}

// ---------------------------------------------------------------------------
// Transfer matrices and band structure

// Extended-precision entries: long cells make the monodromy entries large,
// and |det - 1| of a unimodular product is floored at eps * |M|^2 in the
// storage precision.
struct Mat2 {
    long double a, b, c, d;  // row-major

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }

    double trace() const { return static_cast<double>(a + d); }
    double det() const { return static_cast<double>(a * d - b * c); }
};

// Monodromy of u_{i+1} = (2 + h^2 (V_i - E)) u_i - u_{i-1} over one cell;
// each step matrix has determinant 1.
inline Mat2 transfer_matrix(double E, const std::vector<double>& cell_V, double h) {
    Mat2 M{1.0L, 0.0L, 0.0L, 1.0L};
    const double h2 = h * h;
    for (double v : cell_V) {
        Mat2 step{2.0L + static_cast<long double>(h2) * (v - E), -1.0L, 1.0L, 0.0L};
        M = step * M;
    }
    return M;
}

struct Interval {
    double lo;
    double hi;
    bool open_lo = false;
    bool open_hi = false;
};

// Ordered disjoint closed intervals; gaps narrower than merge_tol collapse.
class IntervalSet {
public:
    IntervalSet() = default;
    explicit IntervalSet(double merge_tol) : merge_tol_(merge_tol) {}

    static IntervalSet from(std::vector<Interval> iv, double merge_tol) {
        IntervalSet s(merge_tol);
        std::sort(iv.begin(), iv.end(),
                  [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
        for (const Interval& i : iv) s.add(i);
        return s;
    }

    void add(const Interval& i) {
        if (i.hi < i.lo) throw invalid_input("IntervalSet: hi < lo");
        if (!iv_.empty() && i.lo <= iv_.back().hi + merge_tol_) {
            if (i.hi > iv_.back().hi) {
                iv_.back().hi = i.hi;
                iv_.back().open_hi = i.open_hi;
            }
            return;
        }
        iv_.push_back(i);
    }

    const std::vector<Interval>& intervals() const { return iv_; }
    double merge_tol() const { return merge_tol_; }
    bool empty() const { return iv_.empty(); }

    bool contains(double x) const {
        for (const Interval& i : iv_)
            if (i.lo <= x && x <= i.hi) return true;
        return false;
    }

    double distance(double x) const {
        double best = std::numeric_limits<double>::infinity();
        for (const Interval& i : iv_) {
            if (i.lo <= x && x <= i.hi) return 0.0;
            best = std::min(best, std::min(std::abs(x - i.lo), std::abs(x - i.hi)));
        }
        return best;
    }

    double measure() const {
        double s = 0.0;
        for (const Interval& i : iv_) s += i.hi - i.lo;
        return s;
    }

private:
    std::vector<Interval> iv_;
    double merge_tol_ = 0.0;
};

struct BandResult {
    IntervalSet bands;
    double h_used;      // adjusted to divide the period exactly
    int cell_steps;
    bool h_adjusted;
    std::vector<double> cell_V;
};

// Band structure of a periodic operator: { E : |tr M(E)| <= 2 }, with edges
// refined by bisection on |tr| - 2.
inline BandResult bands(const geometry::CrystallographicSet& gamma, const Potential& v,
                        double h_req, double e_lo, double e_hi, double tol,
                        int scan_points = 4097) {
    if (gamma.params.d != 1) throw invalid_input("bands: d == 1 only");
    if (!(e_hi > e_lo) || !(tol > 0.0) || scan_points < 2)
        throw invalid_input("bands: bad window, tolerance or scan count");
    const double a = gamma.period;
    const int m = std::max(1, static_cast<int>(std::lround(a / h_req)));
    const double h = a / static_cast<double>(m);

    Grid1D cell{-0.5 * a, -0.5 * a + (m - 1) * h, h, m};
    SetRef ref = &gamma;
    std::vector<double> cell_V = sample_potential(ref, v, cell);

    auto disc = [&](double E) { return transfer_matrix(E, cell_V, h).trace(); };
    auto in_band = [&](double E) { return std::abs(disc(E)) <= 2.0; };

    const double step = (e_hi - e_lo) / static_cast<double>(scan_points - 1);
    auto refine = [&](double in_E, double out_E) {
        // sign change of |D|-2 between an in-band and an out-of-band energy
        for (int it = 0; it < 128 && std::abs(out_E - in_E) > tol; ++it) {
            double mid = 0.5 * (in_E + out_E);
            (in_band(mid) ? in_E : out_E) = mid;
        }
        return 0.5 * (in_E + out_E);
    };

    std::vector<Interval> found;
    bool inside = false;
    double start = 0.0;
    bool prev = false;
    double prev_E = e_lo;
    for (int k = 0; k < scan_points; ++k) {
        double E = e_lo + static_cast<double>(k) * step;
        if (k == scan_points - 1) E = e_hi;
        bool now = in_band(E);
        if (k == 0) {
            inside = now;
            start = E;
        } else if (now && !prev) {
            inside = true;
            start = refine(E, prev_E);
        } else if (!now && prev) {
            found.push_back({start, refine(prev_E, E)});
            inside = false;
        }
        prev = now;
        prev_E = E;
    }
    if (inside) found.push_back({start, e_hi});

    BandResult res;
    res.bands = IntervalSet::from(std::move(found), tol);
    res.h_used = h;
    res.cell_steps = m;
    res.h_adjusted = std::abs(h - h_req) > 0.0;
    res.cell_V = std::move(cell_V);
    return res;
}

// (interior(B1) \ B2) union (interior(B2) \ B1), all endpoints open.
inline IntervalSet symmetric_interior_difference(const IntervalSet& B1, const IntervalSet& B2) {
    auto one_side = [](const IntervalSet& P, const IntervalSet& Q, std::vector<Interval>& out) {
        for (const Interval& p : P.intervals()) {
            if (p.hi <= p.lo) continue;  // no interior
            double cur = p.lo;
            for (const Interval& q : Q.intervals()) {
                if (q.hi <= cur) continue;
                if (q.lo >= p.hi) break;
                if (q.lo > cur) out.push_back({cur, q.lo, true, true});
                cur = std::max(cur, q.hi);
                if (cur >= p.hi) break;
            }
            if (cur < p.hi) out.push_back({cur, p.hi, true, true});
        }
    };
    std::vector<Interval> pieces;
    one_side(B1, B2, pieces);
    one_side(B2, B1, pieces);
    std::sort(pieces.begin(), pieces.end(),
              [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    IntervalSet out(0.0);
    for (const Interval& p : pieces)
        if (p.hi > p.lo) out.add(p);
    return out;
}

// ---------------------------------------------------------------------------
// Linear solves

using StateVector = std::vector<std::complex<double>>;

inline double norm(const StateVector& v) {
    double s = 0.0;
    for (const auto& c : v) s += std::norm(c);
    return std::sqrt(s);
}

namespace detail {

// (T + i I) u = rhs by complex Thomas elimination. The imaginary shift keeps
// every pivot at modulus >= 1, so no pivoting is needed.
inline StateVector shifted_solve(const TridiagonalOperator& T, const StateVector& rhs) {
    const int n = T.n();
    std::vector<std::complex<double>> piv(static_cast<std::size_t>(n));
    StateVector y(static_cast<std::size_t>(n));
    const std::complex<double> ii(0.0, 1.0);
    piv[0] = T.diag[0] + ii;
    y[0] = rhs[0];
    for (int k = 1; k < n; ++k) {
        std::complex<double> l = T.offdiag[static_cast<std::size_t>(k - 1)] /
                                 piv[static_cast<std::size_t>(k - 1)];
        piv[static_cast<std::size_t>(k)] =
            (T.diag[static_cast<std::size_t>(k)] + ii) -
            l * T.offdiag[static_cast<std::size_t>(k - 1)];
        y[static_cast<std::size_t>(k)] =
            rhs[static_cast<std::size_t>(k)] - l * y[static_cast<std::size_t>(k - 1)];
    }
    StateVector u(static_cast<std::size_t>(n));
    u[static_cast<std::size_t>(n - 1)] =
        y[static_cast<std::size_t>(n - 1)] / piv[static_cast<std::size_t>(n - 1)];
    for (int k = n - 2; k >= 0; --k)
        u[static_cast<std::size_t>(k)] =
            (y[static_cast<std::size_t>(k)] -
             T.offdiag[static_cast<std::size_t>(k)] * u[static_cast<std::size_t>(k + 1)]) /
            piv[static_cast<std::size_t>(k)];
    return u;
}

inline StateVector apply_shifted(const TridiagonalOperator& T, const StateVector& u) {
    const int n = T.n();
    StateVector out(static_cast<std::size_t>(n));
    const std::complex<double> ii(0.0, 1.0);
    for (int k = 0; k < n; ++k) {
        std::complex<double> s = (T.diag[static_cast<std::size_t>(k)] + ii) *
                                 u[static_cast<std::size_t>(k)];
        if (k > 0)
            s += T.offdiag[static_cast<std::size_t>(k - 1)] * u[static_cast<std::size_t>(k - 1)];
        if (k + 1 < n)
            s += T.offdiag[static_cast<std::size_t>(k)] * u[static_cast<std::size_t>(k + 1)];
        out[static_cast<std::size_t>(k)] = s;
    }
    return out;
}

}  // namespace detail

// u = (T + i)^{-1} xi with one step of iterative refinement; residual is
// driven below 1e-12 * |xi|.
inline StateVector resolvent_vec(const TridiagonalOperator& T, const StateVector& xi) {
    if (T.boundary != Boundary::dirichlet) throw invalid_input("resolvent_vec: Dirichlet only");
    if (static_cast<int>(xi.size()) != T.n()) throw invalid_input("resolvent_vec: size mismatch");
    StateVector u = detail::shifted_solve(T, xi);
    const double nxi = norm(xi);
    for (int pass = 0; pass < 2; ++pass) {
        StateVector r = detail::apply_shifted(T, u);
        for (std::size_t k = 0; k < r.size(); ++k) r[k] = xi[k] - r[k];
        if (norm(r) <= 0.5e-12 * nxi) break;
        StateVector du = detail::shifted_solve(T, r);
        for (std::size_t k = 0; k < u.size(); ++k) u[k] += du[k];
    }
    return u;
}

// || (T1+i)^{-1} xi - (T2+i)^{-1} xi ||
inline double resolvent_distance(const TridiagonalOperator& T1, const TridiagonalOperator& T2,
                                 const StateVector& xi) {
    if (T1.n() != T2.n() || T1.h != T2.h)
        throw invalid_input("resolvent_distance: operators live on different grids");
    StateVector u1 = resolvent_vec(T1, xi);
    StateVector u2 = resolvent_vec(T2, xi);
    double s = 0.0;
    for (std::size_t k = 0; k < u1.size(); ++k) s += std::norm(u1[k] - u2[k]);
    return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Spectral measure

namespace detail {

// (T - shift) y = rhs by Gaussian elimination with partial pivoting; fill-in
// is one extra superdiagonal. Shifts sit essentially on eigenvalues, so
// unpivoted elimination is not usable here.
inline std::vector<double> shifted_solve_real(const TridiagonalOperator& T, double shift,
                                              std::vector<double> x) {
    const int n = T.n();
    std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n), 0.0),
        c(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        a[static_cast<std::size_t>(i)] = T.diag[static_cast<std::size_t>(i)] - shift;
    for (int i = 0; i + 1 < n; ++i)
        b[static_cast<std::size_t>(i)] = T.offdiag[static_cast<std::size_t>(i)];
    const double tiny = pivmin(T);
    for (int k = 0; k + 1 < n; ++k) {
        double sub = T.offdiag[static_cast<std::size_t>(k)];  // entry (k+1, k)
        if (std::abs(sub) > std::abs(a[static_cast<std::size_t>(k)])) {
            // swap rows k and k+1: row k+1 is (sub, a_{k+1}, b_{k+1})
            std::swap(a[static_cast<std::size_t>(k)], sub);
            double old_bk = b[static_cast<std::size_t>(k)];
            b[static_cast<std::size_t>(k)] = a[static_cast<std::size_t>(k + 1)];
            a[static_cast<std::size_t>(k + 1)] = old_bk;
            if (k + 2 < n) {
                c[static_cast<std::size_t>(k)] = b[static_cast<std::size_t>(k + 1)];
                b[static_cast<std::size_t>(k + 1)] = 0.0;
            }
            std::swap(x[static_cast<std::size_t>(k)], x[static_cast<std::size_t>(k + 1)]);
        }
        double piv = a[static_cast<std::size_t>(k)];
        if (std::abs(piv) < tiny) piv = (piv < 0.0 ? -tiny : tiny);
        a[static_cast<std::size_t>(k)] = piv;
        double m = sub / piv;
        a[static_cast<std::size_t>(k + 1)] -= m * b[static_cast<std::size_t>(k)];
        if (k + 2 < n) b[static_cast<std::size_t>(k + 1)] -= m * c[static_cast<std::size_t>(k)];
        x[static_cast<std::size_t>(k + 1)] -= m * x[static_cast<std::size_t>(k)];
    }
    if (std::abs(a[static_cast<std::size_t>(n - 1)]) < tiny)
        a[static_cast<std::size_t>(n - 1)] =
            (a[static_cast<std::size_t>(n - 1)] < 0.0 ? -tiny : tiny);
    std::vector<double> y(static_cast<std::size_t>(n));
    for (int k = n - 1; k >= 0; --k) {
        double s = x[static_cast<std::size_t>(k)];
        if (k + 1 < n) s -= b[static_cast<std::size_t>(k)] * y[static_cast<std::size_t>(k + 1)];
        if (k + 2 < n) s -= c[static_cast<std::size_t>(k)] * y[static_cast<std::size_t>(k + 2)];
        y[static_cast<std::size_t>(k)] = s / a[static_cast<std::size_t>(k)];
    }
    return y;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double nrm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace detail

// Eigen-decomposition by Sturm bisection plus inverse iteration, returning
// the spectral measure of (T, xi): atoms at eigenvalues with weights
// |<psi_k, xi>|^2. Near-degenerate eigenvectors are re-orthogonalized so the
// weights satisfy Parseval at the 1e-10 level; clusters closer than
// merge_scale * spectral width collapse to a single atom.
inline measures::Measure spectral_measure(const TridiagonalOperator& T, const StateVector& xi,
                                          double merge_scale = 1e-9, int cap = 2048) {
    if (T.boundary != Boundary::dirichlet) throw invalid_input("spectral_measure: Dirichlet only");
    if (T.n() > cap) throw resource_error("spectral_measure: operator exceeds size cap");
    if (static_cast<int>(xi.size()) != T.n())
        throw invalid_input("spectral_measure: vector size mismatch");
    const int n = T.n();
    auto [glo, ghi] = gershgorin(T);
    const double width =
        std::max({ghi - glo, std::abs(glo), std::abs(ghi), 1.0});
    const double eig_tol = width * 1e-13;
    std::vector<double> lam = expand(eigs_in(T, glo - 1e-3 * width - 1.0, ghi + 1e-3 * width + 1.0,
                                             eig_tol));
    if (static_cast<int>(lam.size()) != n)
        throw error("spectral_measure: eigenvalue count mismatch");

    // inverse iteration, orthogonalizing against neighbors closer than ortho_window
    const double ortho_window = std::max(1e-4 * width, 1e3 * eig_tol);
    std::vector<std::vector<double>> vecs;
    vecs.reserve(static_cast<std::size_t>(n));
    SplitMix64 rng(0x5eed5eedULL);
    for (int k = 0; k < n; ++k) {
        const double shift = lam[static_cast<std::size_t>(k)];
        std::vector<double> v(static_cast<std::size_t>(n));
        for (double& c : v) c = rng.uniform() - 0.5;
        std::size_t group_begin = vecs.size();
        while (group_begin > 0 &&
               lam[static_cast<std::size_t>(k)] - lam[group_begin - 1] < ortho_window)
            --group_begin;
        for (int pass = 0; pass < 3; ++pass) {
            v = detail::shifted_solve_real(T, shift, v);
            for (std::size_t j = group_begin; j < vecs.size(); ++j) {
                double p = detail::dot(v, vecs[j]);
                for (std::size_t i = 0; i < v.size(); ++i) v[i] -= p * vecs[j][i];
            }
            double nv = detail::nrm2(v);
            if (nv == 0.0) {
                for (double& c : v) c = rng.uniform() - 0.5;
                continue;
            }
            for (double& c : v) c /= nv;
        }
        vecs.push_back(std::move(v));
    }

    // weights, then cluster merging
    std::vector<measures::Atom> atoms;
    const double merge_tol = merge_scale * width;
    for (int k = 0; k < n; ++k) {
        std::complex<double> proj(0.0, 0.0);
        for (std::size_t i = 0; i < xi.size(); ++i)
            proj += vecs[static_cast<std::size_t>(k)][i] * std::conj(xi[i]);
        double w = std::norm(proj);
        if (!atoms.empty() && lam[static_cast<std::size_t>(k)] - atoms.back().pos <= merge_tol) {
            // mass-weighted merge keeps positions strictly increasing
            double tot = atoms.back().mass + w;
            if (tot > 0.0)
                atoms.back().pos =
                    (atoms.back().pos * atoms.back().mass + lam[static_cast<std::size_t>(k)] * w) /
                    tot;
            atoms.back().mass = tot;
        } else {
            atoms.push_back({lam[static_cast<std::size_t>(k)], w});
        }
    }
    std::vector<measures::Atom> kept;
    for (const auto& a : atoms)
        if (a.mass > 0.0) kept.push_back(a);
    return measures::Measure::make(std::move(kept), {});
}

}  // namespace delone::spectra
