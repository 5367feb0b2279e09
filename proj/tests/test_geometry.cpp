#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "delone/generate.hpp"
#include "delone/geometry.hpp"

using namespace delone;
using namespace delone::geometry;

namespace {

std::vector<Point> integers(double lo, double hi) {
    std::vector<Point> pts;
    for (long k = static_cast<long>(std::ceil(lo)); k <= static_cast<long>(std::floor(hi)); ++k)
        pts.push_back({static_cast<double>(k)});
    return pts;
}

}  // namespace

TEST_CASE("packing: integers at r = 0.5 touch but do not overlap") {
    CHECK(verify_packing(integers(-5, 5), 0.5));
    CHECK_FALSE(verify_packing({{0.0}, {0.6}}, 0.4));
    auto viol = packing_violation({{0.0}, {3.0}, {3.5}}, 0.4);
    REQUIRE(viol);
    CHECK(viol->first == 1);
    CHECK(viol->second == 2);
}

TEST_CASE("packing: random thinning output is separated by construction") {
    SplitMix64 rng(123);
    std::vector<Point> pts;
    const double min_sep = 0.3;
    while (pts.size() < 200) {
        Point c{rng.uniform(-20.0, 20.0), rng.uniform(-20.0, 20.0)};
        bool ok = true;
        for (const Point& p : pts)
            if (dist(p, c) < min_sep) { ok = false; break; }
        if (ok) pts.push_back(c);
    }
    CHECK(verify_packing(pts, min_sep / 2.0));
    // brute-force oracle: smallest pairwise distance
    double dmin = 1e300;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) dmin = std::min(dmin, dist(pts[i], pts[j]));
    CHECK(dmin >= min_sep);
}

TEST_CASE("packing is monotone in r") {
    SplitMix64 rng(5);
    auto w = generate::jittered_window(rng, 1, 30.0, 1.0, 0.05, 0.4, 0.9);
    REQUIRE(verify_packing(w.points, 0.4));
    for (double r : {0.35, 0.2, 0.1, 0.01}) CHECK(verify_packing(w.points, r));
}

TEST_CASE("packing rejects non-finite coordinates") {
    CHECK_THROWS_AS(verify_packing({{0.0}, {std::nan("")}}, 0.3), invalid_input);
}

TEST_CASE("covering: integers cover [-4,4] at R = 0.5") {
    auto cert = verify_covering(integers(-5, 5), 0.5, Box{4.0}, 1e-3, 1);
    CHECK(cert.covered);
    CHECK(cert.certified_bound <= 0.5 + 1e-3);
    auto bad = verify_covering({{0.0}}, 0.5, Box{1.0}, 1e-3, 1);
    CHECK_FALSE(bad.covered);
    CHECK(bad.worst_node_dist == Catch::Approx(1.0).margin(1e-3));
}

TEST_CASE("covering: empty point list fails without throwing") {
    auto cert = verify_covering({}, 1.0, Box{1.0}, 0.25, 2);
    CHECK_FALSE(cert.covered);
}

TEST_CASE("torus metric agrees with Euclidean at short range") {
    TorusMetric tm{4.0, 2};
    SplitMix64 rng(9);
    for (int it = 0; it < 200; ++it) {
        Point p{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        Point q{p[0] + rng.uniform(-0.9, 0.9), p[1] + rng.uniform(-0.9, 0.9)};
        double de = dist(p, q);
        if (de < 2.0) CHECK(tm.dist(p, q) == Catch::Approx(de).margin(1e-12));
    }
    CHECK(tm.dist({0.0, 0.0}, {3.9, 0.0}) == Catch::Approx(0.1).margin(1e-12));
}

TEST_CASE("fill: saturated torus seed stays unchanged") {
    // dyadic spacing keeps the separation predicate exact
    std::vector<Point> seed{{0.0}, {0.8125}, {1.625}, {2.4375}, {3.25}};
    auto res =
        maximal_separated_fill(seed, TorusDomain{4.0625, 1, std::nullopt}, 0.8125, 0.05);
    CHECK(res.points.size() == seed.size());
}

TEST_CASE("fill: empty seed fills the torus to near-maximal density") {
    auto res = maximal_separated_fill({}, TorusDomain{4.0, 1, std::nullopt}, 0.8, 0.05);
    CHECK(res.points.size() >= 4);
    CHECK(res.covering_bound <= 0.85 + 1e-12);
    TorusMetric tm{4.0, 1};
    for (std::size_t i = 0; i < res.points.size(); ++i)
        for (std::size_t j = i + 1; j < res.points.size(); ++j)
            CHECK(tm.dist(res.points[i], res.points[j]) >= 0.8);
    // certified covering: scan the torus
    double worst = 0.0;
    for (int k = 0; k < 4000; ++k) {
        Point x{-2.0 + 4.0 * k / 4000.0};
        double best = 1e300;
        for (const Point& p : res.points) best = std::min(best, tm.dist(x, p));
        worst = std::max(worst, best);
    }
    CHECK(worst <= res.covering_bound);
}

TEST_CASE("fill: singleton seed on a small torus gains a far point") {
    auto res = maximal_separated_fill({{0.0}}, TorusDomain{2.0, 1, std::nullopt}, 0.8, 0.05);
    REQUIRE(res.points.size() >= 2);
    TorusMetric tm{2.0, 1};
    bool far = false;
    for (std::size_t i = 1; i < res.points.size(); ++i)
        if (tm.dist(res.points[i], {0.0}) >= 0.8) far = true;
    CHECK(far);
}

TEST_CASE("fill is idempotent") {
    auto res = maximal_separated_fill({}, TorusDomain{5.0, 1, std::nullopt}, 0.8, 0.1);
    auto again = maximal_separated_fill(res.points, TorusDomain{5.0, 1, std::nullopt}, 0.8, 0.1);
    CHECK(again.points.size() == res.points.size());

    auto ann = maximal_separated_fill({}, AnnulusDomain{3.0, 1.0, 2}, 0.7, 0.1);
    auto ann2 = maximal_separated_fill(ann.points, AnnulusDomain{3.0, 1.0, 2}, 0.7, 0.1);
    CHECK(ann2.points.size() == ann.points.size());
}

TEST_CASE("fill rejects bad seeds and coarse pitches") {
    CHECK_THROWS_AS(
        maximal_separated_fill({{0.0}, {0.1}}, TorusDomain{4.0, 1, std::nullopt}, 0.8, 0.05),
        precondition_error);
    CHECK_THROWS_AS(maximal_separated_fill({}, TorusDomain{4.0, 1, std::nullopt}, 0.8, 0.5),
                    refine_pitch_error);
}

TEST_CASE("extension: integer window, S = 3") {
    WindowedPointSet w{integers(-4.2, 4.2), Box{4.2}, {0.4, 0.9, 1}};
    auto rho = crystallographic_extension(w, 3.0, 0.05);
    CHECK(rho.period == Catch::Approx(8.6));  // 2 (S + R + r)

    // exact agreement on Q(3)
    std::vector<Point> inner;
    for (const Point& p : rho.unfold(3.0)) inner.push_back(p);
    CHECK(set_equal(inner, integers(-3, 3)));

    CHECK(verify_packing(rho.motif, 0.4));
    TorusMetric tm{rho.period, 1};
    for (std::size_t i = 0; i < rho.motif.size(); ++i)
        for (std::size_t j = i + 1; j < rho.motif.size(); ++j)
            CHECK(tm.dist(rho.motif[i], rho.motif[j]) >= 0.8);
    auto cert = verify_covering(rho, 0.05);
    CHECK(cert.covered);
    CHECK(per_lattice_check(rho));
}

TEST_CASE("extension: exactness, packing and covering over random windows") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
        int d = 1 + (trial % 2);
        double S = 2.0 + rng.uniform(0.0, 1.0);
        auto w = (d == 1) ? generate::jittered_window(rng, 1, S + 1.2, 1.0, 0.05, 0.4, 0.9)
                          : generate::jittered_window(rng, 2, S + 1.2, 1.0, 0.05, 0.4, 0.9);
        auto rho = crystallographic_extension(w, S, 0.05);
        CHECK(rho.period == Catch::Approx(2.0 * (S + 0.9 + 0.4)));
        std::vector<Point> expect;
        for (const Point& p : w.points)
            if (sup_norm(p) <= S) expect.push_back(p);
        CHECK(set_equal(rho.unfold(S), expect));
        CHECK(verify_packing(rho.unfold(rho.period), w.params.r));
        auto cert = verify_covering(rho, w.params.r / 8.0);
        CHECK(cert.covered);
        CHECK(per_lattice_check(rho));
    }
}

TEST_CASE("extension: degenerate empty input still produces a valid packing") {
    // empty input is not relatively dense, so Q(S) stays empty; the fill
    // still produces a separated, self-consistent periodic set outside it
    WindowedPointSet w{{}, Box{4.0}, {0.4, 0.9, 1}};
    auto rho = crystallographic_extension(w, 2.0, 0.05);
    CHECK(!rho.motif.empty());
    CHECK(verify_packing(rho));
    CHECK(per_lattice_check(rho));
    for (const Point& p : rho.unfold(2.0)) CHECK(sup_norm(p) > 2.0);
}

TEST_CASE("extension error paths") {
    WindowedPointSet w{integers(-4, 4), Box{4.0}, {0.4, 0.9, 1}};
    CHECK_THROWS_AS(crystallographic_extension(w, 3.5, 0.05), insufficient_window);
    CHECK_THROWS_AS(crystallographic_extension(w, 2.0, 0.15), refine_pitch_error);
    WindowedPointSet tight{integers(-4, 4), Box{4.0}, {0.4, 0.8, 1}};
    // R = 2r leaves no certificate margin at any pitch
    CHECK_THROWS_AS(crystallographic_extension(tight, 2.0, 0.01), refine_pitch_error);
    try {
        crystallographic_extension(w, 3.5, 0.05);
        FAIL("expected throw");
    } catch (const insufficient_window& e) {
        CHECK(e.required_radius == Catch::Approx(4.4));
    }
}

TEST_CASE("glue: integers against integers leaves the lattice untouched") {
    WindowedPointSet w{integers(-9, 9), Box{9.0}, {0.4, 0.8, 1}};
    CrystallographicSet g{1.0, {{0.0}}, {0.4, 0.8, 1}};
    auto res = glue(w, g, 3.3, 0.1);
    CHECK(res.additions.empty());
    // output is exactly the integers across its window
    for (const Point& p : res.set.points) CHECK(p[0] == Catch::Approx(std::round(p[0])));
    CHECK(verify_packing(res.set.points, 0.4));
}

TEST_CASE("glue: agreement regions and annulus confinement over random pairs") {
    SplitMix64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        double S = 2.0 + rng.uniform(0.0, 1.0);
        double r = 0.3, R = 1.0;
        auto w = generate::jittered_window(rng, 1, S + 8.0, 1.1, 0.05, r, R);
        auto g = generate::jittered_periodic(rng, 1, 5, 1.1, 0.05, r, R);
        auto res = glue(w, g, S, 0.05);
        const double outer = S + 2.0 * R + r;

        std::vector<Point> expect_inner, got_inner;
        for (const Point& p : w.points)
            if (sup_norm(p) <= S) expect_inner.push_back(p);
        for (const Point& p : res.set.points)
            if (sup_norm(p) <= S) got_inner.push_back(p);
        CHECK(set_equal(got_inner, expect_inner));

        std::vector<Point> expect_outer, got_outer;
        for (const Point& p : g.unfold(res.set.window.S))
            if (sup_norm(p) > outer) expect_outer.push_back(p);
        for (const Point& p : res.set.points)
            if (sup_norm(p) > outer) got_outer.push_back(p);
        CHECK(set_equal(got_outer, expect_outer));

        for (const Point& p : res.additions) {
            CHECK(sup_norm(p) > S);
            CHECK(sup_norm(p) <= outer);
        }

        CHECK(verify_packing(res.set.points, r));
        auto cert =
            verify_covering(res.set.points, R, Box{res.set.window.S - R}, r / 8.0, 1);
        CHECK(cert.covered);
    }
}

TEST_CASE("glue in two dimensions keeps both agreement regions") {
    SplitMix64 rng(404);
    const double r = 0.25, R = 1.0, S = 2.0;
    auto w = generate::jittered_window(rng, 2, S + 4.0, 1.0, 0.05, r, R);
    auto g = generate::jittered_periodic(rng, 2, 4, 1.0, 0.05, r, R);
    auto res = glue(w, g, S, 0.06);
    const double outer = S + 2.0 * R + r;
    std::vector<Point> expect, got;
    for (const Point& p : w.points)
        if (sup_norm(p) <= S) expect.push_back(p);
    for (const Point& p : res.set.points)
        if (sup_norm(p) <= S) got.push_back(p);
    CHECK(set_equal(got, expect));
    expect.clear();
    got.clear();
    for (const Point& p : g.unfold(res.set.window.S))
        if (sup_norm(p) > outer) expect.push_back(p);
    for (const Point& p : res.set.points)
        if (sup_norm(p) > outer) got.push_back(p);
    CHECK(set_equal(got, expect));
    CHECK(verify_packing(res.set.points, r));
}

TEST_CASE("per_lattice_check accepts consistent representations and flags corrupted ones") {
    CrystallographicSet ok{1.0, {{0.0}, {0.5}}, {0.1, 0.6, 1}};
    CHECK(per_lattice_check(ok));
    // a stray periodic copy of an existing motif entry
    CrystallographicSet bad{1.0, {{0.0}, {0.5}, {1.5}}, {0.1, 0.6, 1}};
    CHECK_FALSE(per_lattice_check(bad));
}

TEST_CASE("unfold keeps motif coordinates bit-exact") {
    CrystallographicSet g{3.0, {{-1.25}, {0.7}}, {0.3, 1.5, 1}};
    auto pts = g.unfold(1.4);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0][0] == -1.25);
    CHECK(pts[1][0] == 0.7);
}
