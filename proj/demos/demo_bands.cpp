// Band structures of the full and halved integer lattices under the default
// well, and the region where exactly one of the two spectra is present.

#include <cstdio>

#include "delone/spectra.hpp"

int main() {
    using namespace delone;
    geometry::CrystallographicSet full{1.0, {{0.0}}, {0.4, 1.0, 1}};
    geometry::CrystallographicSet odd{2.0, {{1.0}}, {0.4, 1.0, 1}};
    auto v = spectra::Potential::default_well();
    auto b_full = spectra::bands(full, v, 1e-3, 0.0, 30.0, 1e-6, 4097);
    auto b_odd = spectra::bands(odd, v, 1e-3, 0.0, 30.0, 1e-6, 4097);
    std::printf("full lattice bands:\n");
    for (const auto& iv : b_full.bands.intervals())
        std::printf("  [%9.5f, %9.5f]\n", iv.lo, iv.hi);
    std::printf("odd lattice bands:\n");
    for (const auto& iv : b_odd.bands.intervals())
        std::printf("  [%9.5f, %9.5f]\n", iv.lo, iv.hi);
    auto u = spectra::symmetric_interior_difference(b_odd.bands, b_full.bands);
    std::printf("exclusive region U:\n");
    for (const auto& iv : u.intervals()) std::printf("  (%9.5f, %9.5f)\n", iv.lo, iv.hi);
    return 0;
}
