#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "delone/generate.hpp"
#include "delone/topology.hpp"
#include "oracles.hpp"

using namespace delone;
using namespace delone::geometry;
using namespace delone::topology;

TEST_CASE("stereographic projection: pole, origin, unit sphere") {
    SpherePoint pole = north_pole(2);
    CHECK(pole == SpherePoint{0.0, 0.0, 1.0});

    SpherePoint origin = stereographic({0.0, 0.0});
    CHECK(origin[0] == 0.0);
    CHECK(origin[2] == -1.0);

    // |x| = 1 maps to the equator, sqrt(2) from the pole
    SpherePoint eq = stereographic({1.0, 0.0});
    CHECK(chordal(eq, pole) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(pole_distance({1.0, 0.0}) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("stereographic images are unit vectors and match the closed form") {
    SplitMix64 rng(31);
    for (int it = 0; it < 300; ++it) {
        Point x{rng.uniform(-8.0, 8.0), rng.uniform(-8.0, 8.0)};
        Point y{rng.uniform(-8.0, 8.0), rng.uniform(-8.0, 8.0)};
        SpherePoint jx = stereographic(x);
        double n = 0.0;
        for (double c : jx) n += c * c;
        CHECK(std::sqrt(n) == Catch::Approx(1.0).margin(1e-12));
        CHECK(chordal_of(x, y) == Catch::Approx(oracles::chordal_closed_form(x, y)).margin(1e-12));
    }
}

TEST_CASE("chordal bound: |j(x)-j(y)| <= 2|x-y|, reverse bound scales with the ball") {
    SplitMix64 rng(32);
    for (double L : {1.0, 5.0, 20.0}) {
        double cl = 0.0;
        for (int it = 0; it < 500; ++it) {
            Point x{rng.uniform(-L, L)};
            Point y{rng.uniform(-L, L)};
            double c = chordal_of(x, y);
            double e = 2.0 * std::abs(x[0] - y[0]);
            CHECK(c <= e + 1e-12);
            if (c > 0.0) cl = std::max(cl, e / c);
        }
        // closed form gives C_L = 1 + L^2
        CHECK(cl <= 1.0 + L * L + 1e-9);
    }
}

TEST_CASE("capped Hausdorff distance on sphere points") {
    SpherePoint p = stereographic({0.3});
    SpherePoint q = stereographic({0.45});
    CHECK(hausdorff_capped({p}, {p}) == 0.0);
    // antipodal singletons exceed the cap
    CHECK(hausdorff_capped({{0.0, 1.0}}, {{0.0, -1.0}}) == 1.0);
    double pq = chordal(p, q);
    CHECK(hausdorff_capped({p}, {p, q}) == Catch::Approx(pq));
    CHECK_THROWS_AS(hausdorff_capped(std::vector<SpherePoint>{}, {p}), invalid_input);
}

TEST_CASE("natural distance: identity, shifted lattice, truncation stability") {
    auto Z = generate::integer_window(4200.0, 0.4, 0.9);
    auto Zs = Z;
    for (auto& p : Zs.points) p[0] += 0.5;

    auto self = natural_distance(&Z, &Z, 1e-2);
    CHECK(self.value == 0.0);

    // frozen from the closed form: the sup is attained at the origin pair
    // (0, 0.5), giving 2 * 0.5 / sqrt(1 * 1.25) = 2/sqrt(5)
    const double expected = 2.0 / std::sqrt(5.0);
    auto d2 = natural_distance(&Z, &Zs, 1e-2);
    auto d3 = natural_distance(&Z, &Zs, 1e-3);
    CHECK(d2.value == Catch::Approx(expected).margin(1e-2));
    CHECK(d3.value == Catch::Approx(expected).margin(1e-3));
    CHECK(std::abs(d2.value - d3.value) <= 1e-2 + 1e-3);
    CHECK(d2.error_bound == 1e-2);
}

TEST_CASE("natural distance: fast path matches the all-pairs evaluation") {
    SplitMix64 rng(88);
    auto A = generate::jittered_window(rng, 1, 450.0, 1.0, 0.05, 0.4, 0.9);
    auto B = generate::jittered_window(rng, 1, 450.0, 1.0, 0.05, 0.4, 0.9);
    double tol = 1e-2;  // T = 400
    auto fast = natural_distance(&A, &B, tol);
    CompactifiedSet ca = compactify(restrict_box(SetRef{&A}, 400.0), 400.0, 1);
    CompactifiedSet cb = compactify(restrict_box(SetRef{&B}, 400.0), 400.0, 1);
    double slow = hausdorff_capped(ca.sphere_points, cb.sphere_points);
    CHECK(fast.value == slow);
}

TEST_CASE("natural distance: agreement on Q(n) bounds the distance by the tail") {
    SplitMix64 rng(41);
    auto w = generate::jittered_window(rng, 1, 4150.0, 1.0, 0.05, 0.4, 0.9);
    for (double S : {5.0, 10.0, 20.0}) {
        auto rho = crystallographic_extension(w, S, 0.05);
        auto d = natural_distance(SetRef{&rho}, SetRef{&w}, 1e-3);
        CHECK(d.value <= 2.0 / std::sqrt(1.0 + S * S) + 1e-3);
    }
}

TEST_CASE("natural distance in two dimensions, coarse tolerance") {
    SplitMix64 rng(55);
    auto A = generate::jittered_window(rng, 2, 10.0, 1.0, 0.05, 0.4, 0.9);
    auto B = generate::jittered_window(rng, 2, 10.0, 1.0, 0.05, 0.4, 0.9);
    const double tol = 0.5;  // truncation radius 8
    auto self = natural_distance(&A, &A, tol);
    CHECK(self.value == 0.0);
    auto ab = natural_distance(&A, &B, tol);
    auto ba = natural_distance(&B, &A, tol);
    CHECK(ab.value == ba.value);
    CHECK(ab.value <= 1.0);
    CompactifiedSet ca = compactify(restrict_box(SetRef{&A}, 8.0), 8.0, 2);
    CHECK(ca.truncation_error <= 2.0 / ca.truncation_radius);
}

TEST_CASE("natural distance requires a wide enough window") {
    auto Z = generate::integer_window(10.0, 0.4, 0.9);
    CHECK_THROWS_AS(natural_distance(&Z, &Z, 1e-3), insufficient_window);
}

TEST_CASE("metric axioms on random crystallographic triples") {
    SplitMix64 rng(2718);
    const double tol = 1e-2;
    for (int it = 0; it < 30; ++it) {
        auto A = generate::jittered_periodic(rng, 1, 4, 1.0, 0.05, 0.4, 0.9);
        auto B = generate::jittered_periodic(rng, 1, 5, 1.0, 0.05, 0.4, 0.9);
        auto C = generate::jittered_periodic(rng, 1, 3, 1.0, 0.05, 0.4, 0.9);
        double ab = natural_distance(&A, &B, tol).value;
        double ba = natural_distance(&B, &A, tol).value;
        double bc = natural_distance(&B, &C, tol).value;
        double ac = natural_distance(&A, &C, tol).value;
        CHECK(ab == ba);
        CHECK(ab <= 1.0);
        CHECK(ac <= ab + bc + 2.0 * tol);
    }
}

TEST_CASE("local Hausdorff distance between lattices") {
    auto Z = generate::integer_window(50.0, 0.4, 0.9);
    auto Zs = Z;
    for (auto& p : Zs.points) p[0] += 0.1;
    auto d = local_hausdorff(&Z, &Zs, 5.0);
    REQUIRE(d);
    CHECK(*d == Catch::Approx(0.1).margin(1e-12));

    auto same = local_hausdorff(&Z, &Z, 7.0);
    REQUIRE(same);
    CHECK(*same == 0.0);
}

TEST_CASE("local Hausdorff signals empty restrictions distinctly") {
    WindowedPointSet far{{{9.0}}, Box{10.0}, {0.4, 0.9, 1}};
    auto Z = generate::integer_window(10.0, 0.4, 0.9);
    CHECK_FALSE(local_hausdorff(&far, &Z, 0.5).has_value());
}

TEST_CASE("glue output is locally indistinguishable from its source") {
    SplitMix64 rng(99);
    auto w = generate::jittered_window(rng, 1, 20.0, 1.0, 0.05, 0.4, 0.9);
    CrystallographicSet g{1.0, {{0.25}}, {0.4, 0.9, 1}};
    auto res = geometry::glue(w, g, 4.0, 0.05);
    for (double L : {1.0, 2.5, 4.0}) {
        auto d = local_hausdorff(SetRef{&res.set}, SetRef{&w}, L);
        REQUIRE(d);
        CHECK(*d == 0.0);
    }
}

TEST_CASE("convergence report on an extension schedule") {
    SplitMix64 rng(1234);
    auto w = generate::jittered_window(rng, 1, 4150.0, 1.0, 0.05, 0.4, 0.9);
    std::vector<CrystallographicSet> exts;
    for (double S : {5.0, 10.0, 20.0, 40.0})
        exts.push_back(crystallographic_extension(w, S, 0.05));
    std::vector<SetRef> seq;
    for (const auto& e : exts) seq.push_back(&e);
    std::vector<ConvergenceLevel> levels{{3.0, 5.0, 1e-9}, {4.0, 5.0, 0.5}};
    auto rep = convergence_report(seq, &w, levels, 1e-3);

    REQUIRE(rep.delta.size() == 4);
    const double S_values[] = {5.0, 10.0, 20.0, 40.0};
    for (int i = 0; i < 4; ++i)
        CHECK(rep.delta[i] <= 2.0 / std::sqrt(1.0 + S_values[i] * S_values[i]) + 1e-3);
    for (const auto& lv : rep.levels) {
        REQUIRE(lv.n0.has_value());
        CHECK(*lv.n0 == 1);  // exact agreement from the first element on
        for (const auto& lh : lv.local_h) {
            REQUIRE(lh);
            CHECK(*lh == 0.0);
        }
        for (const auto& tr : lv.traces) CHECK(tr.converged);
        CHECK(lv.final_spurious.empty());
    }
}

TEST_CASE("convergence report: constant sequence attains every level at n0 = 1") {
    auto Z = generate::integer_window(60.0, 0.4, 0.9);
    std::vector<SetRef> seq{&Z, &Z, &Z};
    auto rep = convergence_report(seq, &Z, {{2.0, 4.0, 1e-12}}, 0.5);
    REQUIRE(rep.levels.size() == 1);
    CHECK(rep.levels[0].n0.has_value());
    CHECK(*rep.levels[0].n0 == 1);
}
