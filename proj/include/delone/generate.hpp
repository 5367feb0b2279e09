#pragma once

// Deterministic random Delone-set builders: jittered lattices whose spacing
// and jitter keep the (r,R) conditions satisfiable by construction.

#include <cmath>
#include <vector>

#include "delone/common.hpp"
#include "delone/geometry.hpp"

namespace delone::generate {

using geometry::Box;
using geometry::CrystallographicSet;
using geometry::DeloneParams;
using geometry::Point;
using geometry::WindowedPointSet;

// Jittered cubic lattice restricted to Q(S). Requires spacing - 2*jitter >= 2r
// (packing) and (spacing/2 + jitter)*sqrt(d) <= R (covering).
inline WindowedPointSet jittered_window(SplitMix64& rng, int d, double S, double spacing,
                                        double jitter, double r, double R) {
    if (spacing - 2.0 * jitter < 2.0 * r)
        throw invalid_input("jittered_window: spacing too small for packing");
    if ((0.5 * spacing + jitter) * std::sqrt(static_cast<double>(d)) > R)
        throw invalid_input("jittered_window: spacing too large for covering");
    long kmax = static_cast<long>(std::floor((S - jitter) / spacing));
    std::vector<Point> pts;
    std::vector<long> k(static_cast<std::size_t>(d), -kmax);
    while (true) {
        Point p(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i)
            p[static_cast<std::size_t>(i)] =
                static_cast<double>(k[static_cast<std::size_t>(i)]) * spacing +
                rng.uniform(-jitter, jitter);
        pts.push_back(std::move(p));
        int axis = d - 1;
        while (axis >= 0 && ++k[static_cast<std::size_t>(axis)] > kmax)
            k[static_cast<std::size_t>(axis--)] = -kmax;
        if (axis < 0) break;
    }
    geometry::canonical_sort(pts);
    return WindowedPointSet{std::move(pts), Box{S}, DeloneParams{r, R, d}};
}

// Jittered lattice on a torus of period cells*spacing; motif points live in
// the centered fundamental domain.
inline CrystallographicSet jittered_periodic(SplitMix64& rng, int d, int cells, double spacing,
                                             double jitter, double r, double R) {
    if (spacing - 2.0 * jitter < 2.0 * r)
        throw invalid_input("jittered_periodic: spacing too small for packing");
    if ((0.5 * spacing + jitter) * std::sqrt(static_cast<double>(d)) > R)
        throw invalid_input("jittered_periodic: spacing too large for covering");
    const double period = static_cast<double>(cells) * spacing;
    std::vector<Point> motif;
    std::vector<int> k(static_cast<std::size_t>(d), 0);
    while (true) {
        Point p(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i)
            p[static_cast<std::size_t>(i)] =
                -0.5 * period + (static_cast<double>(k[static_cast<std::size_t>(i)]) + 0.5) *
                                     spacing +
                rng.uniform(-jitter, jitter);
        motif.push_back(std::move(p));
        int axis = d - 1;
        while (axis >= 0 && ++k[static_cast<std::size_t>(axis)] >= cells)
            k[static_cast<std::size_t>(axis--)] = 0;
        if (axis < 0) break;
    }
    geometry::canonical_sort(motif);
    return CrystallographicSet{period, std::move(motif), DeloneParams{r, R, d}};
}

// The integer-like lattice a*Z^d as a crystallographic set.
inline CrystallographicSet cubic_lattice(int d, double a, double r, double R) {
    return CrystallographicSet{a, {Point(static_cast<std::size_t>(d), 0.0)},
                               DeloneParams{r, R, d}};
}

// Integers restricted to a window, as a windowed set.
inline WindowedPointSet integer_window(double S, double r, double R) {
    std::vector<Point> pts;
    for (long k = static_cast<long>(-std::floor(S)); k <= static_cast<long>(std::floor(S)); ++k)
        pts.push_back({static_cast<double>(k)});
    return WindowedPointSet{std::move(pts), Box{S}, DeloneParams{r, R, 1}};
}

}  // namespace delone::generate
