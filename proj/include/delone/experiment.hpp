#pragma once

// Approximation schedules: replace a set outside Q(S) by a periodic
// extension (path 1) or glue it to a prescribed periodic tail (path 2), and
// track how the substitute converges to the original — in the compactified
// metric, in shifted-resolvent distance, and through windowed spectra.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "delone/common.hpp"
#include "delone/geometry.hpp"
#include "delone/spectra.hpp"
#include "delone/topology.hpp"

namespace delone::experiment {

using geometry::CrystallographicSet;
using geometry::SetRef;
using geometry::WindowedPointSet;

enum class Path { periodic_extension, periodic_tail };

struct Settings {
    std::vector<double> schedule{5.0, 10.0, 20.0, 40.0};  // S values, strictly increasing
    spectra::Potential v = spectra::Potential::default_well();
    double grid_x0 = -50.0;
    double grid_x1 = 50.0;
    double grid_h = 0.05;
    double energy_lo = 0.0;
    double energy_hi = 2.0;
    double delta_tol = 1e-3;
    double eig_tol = 1e-6;
    double pitch = 0.05;
    double xi_center = 0.0;
    double xi_halfwidth = 1.0;
    double band_h = 0.02;
    int band_scan = 1025;
    double band_tol = 1e-6;
    bool with_bands = true;

    void validate() const {
        if (schedule.empty()) throw invalid_input("experiment: empty schedule");
        for (std::size_t i = 1; i < schedule.size(); ++i)
            if (schedule[i] <= schedule[i - 1])
                throw invalid_input("experiment: schedule must be strictly increasing");
        if (!(delta_tol > 0.0) || !(eig_tol > 0.0) || !(pitch > 0.0) || !(band_tol > 0.0))
            throw invalid_input("experiment: tolerances must be positive");
    }
};

struct Row {
    double S;
    double delta;
    double delta_bound;
    double srs;             // shifted-resolvent distance on the fixed vector
    double eig_hausdorff;   // between windowed Dirichlet spectra
    std::optional<spectra::IntervalSet> band_set;  // periodic path only
};

struct Result {
    Path path;
    std::vector<Row> rows;
    std::vector<double> reference_eigs;
};

namespace detail {

inline double hausdorff_1d(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() && b.empty()) return 0.0;
    if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
    auto sup = [](const std::vector<double>& from, const std::vector<double>& to) {
        double s = 0.0;
        for (double x : from) {
            auto it = std::lower_bound(to.begin(), to.end(), x);
            double best = std::numeric_limits<double>::infinity();
            if (it != to.end()) best = std::min(best, std::abs(*it - x));
            if (it != to.begin()) best = std::min(best, std::abs(*(it - 1) - x));
            s = std::max(s, best);
        }
        return s;
    };
    return std::max(sup(a, b), sup(b, a));
}

inline spectra::StateVector hat_vector(const spectra::Grid1D& g, double center, double halfwidth) {
    spectra::StateVector xi(static_cast<std::size_t>(g.n));
    for (int i = 0; i < g.n; ++i) {
        double t = 1.0 - std::abs(g.node(i) - center) / halfwidth;
        xi[static_cast<std::size_t>(i)] = std::max(0.0, t);
    }
    double nv = spectra::norm(xi);
    if (nv == 0.0) throw invalid_input("experiment: xi vanishes on the grid");
    for (auto& c : xi) c /= nv;
    return xi;
}

}  // namespace detail

// Run one path of the schedule against a reference set. The tail argument is
// required for the periodic_tail path and ignored otherwise.
inline Result approximation_experiment(const WindowedPointSet& omega,
                                       const std::optional<CrystallographicSet>& tail, Path path,
                                       const Settings& s) {
    s.validate();
    if (path == Path::periodic_tail && !tail)
        throw invalid_input("experiment: periodic_tail path needs a tail set");
    if (omega.params.d != 1) throw invalid_input("experiment: d == 1 only");

    spectra::Grid1D grid = spectra::Grid1D::make(s.grid_x0, s.grid_x1, s.grid_h);
    SetRef omega_ref = &omega;
    spectra::TridiagonalOperator T_ref = spectra::assemble(
        spectra::sample_potential(omega_ref, s.v, grid), grid.h, spectra::Boundary::dirichlet);
    spectra::StateVector xi = detail::hat_vector(grid, s.xi_center, s.xi_halfwidth);
    std::vector<double> ref_eigs =
        spectra::expand(spectra::eigs_in(T_ref, s.energy_lo, s.energy_hi, s.eig_tol));

    Result res;
    res.path = path;
    res.reference_eigs = ref_eigs;
    for (double S : s.schedule) {
        Row row;
        row.S = S;
        std::optional<CrystallographicSet> periodic;
        std::optional<WindowedPointSet> glued;
        SetRef approx_ref = omega_ref;
        if (path == Path::periodic_extension) {
            periodic = geometry::crystallographic_extension(omega, S, s.pitch);
            approx_ref = &*periodic;
        } else {
            glued = geometry::glue(omega, *tail, S, s.pitch).set;
            approx_ref = &*glued;
        }
        topology::DistanceResult dr = topology::natural_distance(approx_ref, omega_ref, s.delta_tol);
        row.delta = dr.value;
        row.delta_bound = dr.error_bound;
        spectra::TridiagonalOperator T_n = spectra::assemble(
            spectra::sample_potential(approx_ref, s.v, grid), grid.h, spectra::Boundary::dirichlet);
        row.srs = spectra::resolvent_distance(T_n, T_ref, xi);
        row.eig_hausdorff = detail::hausdorff_1d(
            spectra::expand(spectra::eigs_in(T_n, s.energy_lo, s.energy_hi, s.eig_tol)), ref_eigs);
        if (path == Path::periodic_extension && s.with_bands)
            row.band_set = spectra::bands(*periodic, s.v, s.band_h, s.energy_lo, s.energy_hi,
                                          s.band_tol, s.band_scan)
                               .bands;
        res.rows.push_back(std::move(row));
    }
    return res;
}

}  // namespace delone::experiment
