#pragma once

// Finitely represented positive measures on the line: finite atom lists plus
// piecewise-constant densities. Covers exactly the atomic + absolutely
// continuous measures; singular continuous behavior is only mimicked at
// finite depth (see cantor_measure and the sc_proxy flag).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "delone/common.hpp"

namespace delone::measures {

struct Atom {
    double pos;
    double mass;  // > 0
    bool operator==(const Atom&) const = default;
};

// height on [lo, hi)
struct DensityPiece {
    double lo;
    double hi;
    double height;  // >= 0
    bool operator==(const DensityPiece&) const = default;
};

class Measure {
public:
    Measure() = default;

    // Sorts, merges duplicate atom positions, drops zero-mass atoms and
    // zero-height or empty density pieces. Overlapping pieces are rejected.
    static Measure make(std::vector<Atom> atoms, std::vector<DensityPiece> density) {
        Measure m;
        std::sort(atoms.begin(), atoms.end(),
                  [](const Atom& a, const Atom& b) { return a.pos < b.pos; });
        for (const Atom& a : atoms) {
            if (!std::isfinite(a.pos) || !std::isfinite(a.mass) || a.mass < 0.0)
                throw invalid_input("Measure: bad atom");
            if (a.mass == 0.0) continue;
            if (!m.atoms_.empty() && m.atoms_.back().pos == a.pos)
                m.atoms_.back().mass += a.mass;
            else
                m.atoms_.push_back(a);
        }
        std::sort(density.begin(), density.end(),
                  [](const DensityPiece& a, const DensityPiece& b) { return a.lo < b.lo; });
        for (const DensityPiece& p : density) {
            if (!std::isfinite(p.lo) || !std::isfinite(p.hi) || !std::isfinite(p.height) ||
                p.height < 0.0 || p.hi < p.lo)
                throw invalid_input("Measure: bad density piece");
            if (p.height == 0.0 || p.hi == p.lo) continue;
            if (!m.density_.empty() && p.lo < m.density_.back().hi)
                throw invalid_input("Measure: overlapping density pieces");
            m.density_.push_back(p);
        }
        return m;
    }

    static Measure dirac(double pos, double mass = 1.0) { return make({{pos, mass}}, {}); }

    static Measure uniform(double lo, double hi, double height = 1.0) {
        return make({}, {{lo, hi, height}});
    }

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<DensityPiece>& density() const { return density_; }

    double atomic_mass() const {
        double s = 0.0;
        for (const Atom& a : atoms_) s += a.mass;
        return s;
    }

    double density_mass() const {
        double s = 0.0;
        for (const DensityPiece& p : density_) s += p.height * (p.hi - p.lo);
        return s;
    }

    double total_mass() const { return atomic_mass() + density_mass(); }

    double largest_atom() const {
        double m = 0.0;
        for (const Atom& a : atoms_) m = std::max(m, a.mass);
        return m;
    }

    friend Measure operator+(const Measure& a, const Measure& b) {
        std::vector<Atom> atoms = a.atoms_;
        atoms.insert(atoms.end(), b.atoms_.begin(), b.atoms_.end());
        // piecewise-constant sum over the union of breakpoints
        std::vector<double> cuts;
        for (const auto& p : a.density_) { cuts.push_back(p.lo); cuts.push_back(p.hi); }
        for (const auto& p : b.density_) { cuts.push_back(p.lo); cuts.push_back(p.hi); }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        std::vector<DensityPiece> pieces;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            double mid = 0.5 * (cuts[i] + cuts[i + 1]);
            double h = a.height_at(mid) + b.height_at(mid);
            if (h > 0.0) pieces.push_back({cuts[i], cuts[i + 1], h});
        }
        return make(std::move(atoms), std::move(pieces));
    }

    double height_at(double x) const {
        for (const DensityPiece& p : density_)
            if (p.lo <= x && x < p.hi) return p.height;
        return 0.0;
    }

private:
    std::vector<Atom> atoms_;            // positions strictly increasing
    std::vector<DensityPiece> density_;  // disjoint, sorted
};

// Continuous piecewise-linear function with compact support (first and last
// values are zero); zero outside the breakpoint range.
struct TestFunction {
    std::vector<std::pair<double, double>> breakpoints;  // (x, value), x strictly increasing

    void validate() const {
        if (breakpoints.size() < 2) throw invalid_input("TestFunction: need >= 2 breakpoints");
        for (std::size_t i = 0; i < breakpoints.size(); ++i) {
            if (!std::isfinite(breakpoints[i].first) || !std::isfinite(breakpoints[i].second))
                throw invalid_input("TestFunction: non-finite breakpoint");
            if (i > 0 && breakpoints[i].first <= breakpoints[i - 1].first)
                throw invalid_input("TestFunction: breakpoints must increase");
        }
        if (breakpoints.front().second != 0.0 || breakpoints.back().second != 0.0)
            throw invalid_input("TestFunction: support must be compact (zero endpoints)");
    }

    double operator()(double x) const {
        if (breakpoints.empty() || x <= breakpoints.front().first ||
            x >= breakpoints.back().first)
            return x == breakpoints.front().first ? breakpoints.front().second
                 : x == breakpoints.back().first  ? breakpoints.back().second
                                                  : 0.0;
        auto it = std::upper_bound(
            breakpoints.begin(), breakpoints.end(), x,
            [](double v, const std::pair<double, double>& bp) { return v < bp.first; });
        auto lo = *(it - 1);
        auto hi = *it;
        double t = (x - lo.first) / (hi.first - lo.first);
        return lo.second + t * (hi.second - lo.second);
    }

    // Exact integral over [a, b] (trapezoid rule is exact for linear pieces).
    double integral_over(double a, double b) const {
        if (b <= a) return 0.0;
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
            double lo = std::max(a, breakpoints[i].first);
            double hi = std::min(b, breakpoints[i + 1].first);
            if (hi <= lo) continue;
            s += 0.5 * ((*this)(lo) + (*this)(hi)) * (hi - lo);
        }
        return s;
    }

    static TestFunction tent(double center, double halfwidth, double peak) {
        return TestFunction{{{center - halfwidth, 0.0}, {center, peak}, {center + halfwidth, 0.0}}};
    }
};

// symmetric window [-K, K], the finite stand-in for an exhausting compact
struct CompactWindow {
    double K;
};

// <mu, phi>: atoms evaluate the function, density pieces integrate it exactly.
inline double pairing(const Measure& mu, const TestFunction& phi) {
    double s = 0.0;
    for (const Atom& a : mu.atoms()) s += a.mass * phi(a.pos);
    for (const DensityPiece& p : mu.density()) s += p.height * phi.integral_over(p.lo, p.hi);
    return s;
}

inline bool is_diffusive(const Measure& mu) { return mu.atoms().empty(); }

inline bool singular_wrt_lebesgue(const Measure& mu) { return mu.density().empty(); }

// Does mu dominate (1/n) * delta_x for some x in [-K, K]? Exactly: an atom of
// mass >= 1/n located in the window.
inline bool dominates_atom(const Measure& mu, int n, CompactWindow K) {
    if (n < 1) throw invalid_input("dominates_atom: n >= 1");
    const double threshold = 1.0 / static_cast<double>(n);
    for (const Atom& a : mu.atoms())
        if (std::abs(a.pos) <= K.K && a.mass >= threshold) return true;
    return false;
}

namespace detail {

// density of mu clipped to [-K, K]
inline std::vector<DensityPiece> clip_density(const Measure& mu, CompactWindow K) {
    std::vector<DensityPiece> out;
    for (const DensityPiece& p : mu.density()) {
        double lo = std::max(p.lo, -K.K);
        double hi = std::min(p.hi, K.K);
        if (hi > lo) out.push_back({lo, hi, p.height});
    }
    return out;
}

inline double mass_below(const std::vector<DensityPiece>& f, double c) {
    double s = 0.0;
    for (const DensityPiece& p : f) s += std::min(p.height, c) * (p.hi - p.lo);
    return s;
}

inline double sq_norm_below(const std::vector<DensityPiece>& f, double c) {
    double s = 0.0;
    for (const DensityPiece& p : f) {
        double h = std::min(p.height, c);
        s += h * h * (p.hi - p.lo);
    }
    return s;
}

// Level c with integral of min(f, c) equal to target, by bisection to
// relative tolerance 1e-12. Requires total mass of f >= target.
inline double waterfill_level(const std::vector<DensityPiece>& f, double target) {
    double hi = 0.0;
    for (const DensityPiece& p : f) hi = std::max(hi, p.height);
    double lo = 0.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * std::max(1.0, hi); ++it) {
        double mid = 0.5 * (lo + hi);
        if (mass_below(f, mid) >= target)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace detail

// Does mu dominate some f*lambda with 0 <= f, support in [-K, K],
// integral >= 1/n and L2 norm <= 1? The minimal-norm candidate with a given
// integral is the truncation min(f, c); membership reduces to checking it.
inline bool dominates_density(const Measure& mu, int n, CompactWindow K) {
    if (n < 1) throw invalid_input("dominates_density: n >= 1");
    const double target = 1.0 / static_cast<double>(n);
    std::vector<DensityPiece> f = detail::clip_density(mu, K);
    if (detail::mass_below(f, std::numeric_limits<double>::infinity()) < target) return false;
    double c = detail::waterfill_level(f, target);
    // boundary ||g|| = 1 counts as membership (closed ball); the slack absorbs
    // the bisection tolerance on c
    return detail::sq_norm_below(f, c) <= 1.0 + 1e-10;
}

struct Classification {
    std::optional<int> first_atom_n;     // smallest n with an atomic hit
    std::optional<int> first_density_n;  // smallest n with a density hit
    bool diffusive;
    bool singular;
    bool sc_proxy;  // no hit of either kind but positive mass
    int n_max;
    double K;
};

inline Classification classify(const Measure& mu, int n_max, CompactWindow K) {
    if (n_max < 1) throw invalid_input("classify: n_max >= 1");
    Classification c;
    c.n_max = n_max;
    c.K = K.K;
    for (int n = 1; n <= n_max && !c.first_atom_n; ++n)
        if (dominates_atom(mu, n, K)) c.first_atom_n = n;
    for (int n = 1; n <= n_max && !c.first_density_n; ++n)
        if (dominates_density(mu, n, K)) c.first_density_n = n;
    c.diffusive = is_diffusive(mu);
    c.singular = singular_wrt_lebesgue(mu);
    c.sc_proxy = !c.first_atom_n && !c.first_density_n && mu.total_mass() > 0.0;
    return c;
}

// 2^depth atoms of mass 2^-depth at the left endpoints of the depth-level
// middle-thirds construction; total mass 1.
inline Measure cantor_measure(int depth) {
    if (depth < 1) throw invalid_input("cantor_measure: depth >= 1");
    if (depth > 24) throw resource_error("cantor_measure: depth capped at 24");
    std::vector<double> starts{0.0};
    for (int k = 0; k < depth; ++k) {
        std::vector<double> next;
        next.reserve(2 * starts.size());
        for (double s : starts) {
            next.push_back(s / 3.0);
            next.push_back(s / 3.0 + 2.0 / 3.0);
        }
        starts = std::move(next);
    }
    std::sort(starts.begin(), starts.end());
    const double mass = std::ldexp(1.0, -depth);
    std::vector<Atom> atoms;
    atoms.reserve(starts.size());
    for (double s : starts) atoms.push_back({s, mass});
    return Measure::make(std::move(atoms), {});
}

// Finite proxy for F inside supp(mu): every x in F carries mass in U_eps(x).
inline bool support_covers(const Measure& mu, const std::vector<double>& F, double eps) {
    if (!(eps > 0.0)) throw invalid_input("support_covers: eps must be positive");
    for (double x : F) {
        bool hit = false;
        for (const Atom& a : mu.atoms())
            if (std::abs(a.pos - x) < eps) { hit = true; break; }
        if (!hit)
            for (const DensityPiece& p : mu.density())
                if (std::min(p.hi, x + eps) > std::max(p.lo, x - eps)) { hit = true; break; }
        if (!hit) return false;
    }
    return true;
}

}  // namespace delone::measures
