// Build a random windowed set, extend it periodically, and watch the
// compactified distance shrink with the agreement radius.

#include <cstdio>

#include "delone/generate.hpp"
#include "delone/topology.hpp"

int main() {
    using namespace delone;
    SplitMix64 rng(7);
    auto omega = generate::jittered_window(rng, 1, 4150.0, 1.0, 0.05, 0.4, 0.9);
    std::printf("omega: %zu points on [-%g, %g]\n", omega.points.size(), omega.window.S,
                omega.window.S);
    for (double S : {5.0, 10.0, 20.0, 40.0}) {
        auto rho = geometry::crystallographic_extension(omega, S, 0.05);
        auto d = topology::natural_distance(&rho, &omega, 1e-3);
        std::printf("S = %4.0f  period = %6.2f  motif = %4zu  delta = %.6f  (tail bound %.6f)\n",
                    S, rho.period, rho.motif.size(), d.value, 2.0 / std::sqrt(1.0 + S * S));
    }
    return 0;
}
