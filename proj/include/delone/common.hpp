#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace delone {

// Error taxonomy. The CLI maps these onto exit codes, so constructions
// signal *which* contract broke, not just that one did.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class invalid_input : public error {
public:
    using error::error;
};

class precondition_error : public error {
public:
    using error::error;
};

// A representation does not determine the set far enough out.
class insufficient_window : public precondition_error {
public:
    insufficient_window(const std::string& what, double required)
        : precondition_error(what + " (required radius " + std::to_string(required) + ")"),
          required_radius(required) {}
    double required_radius;
};

// The candidate grid is too coarse for the requested certificate.
class refine_pitch_error : public precondition_error {
public:
    refine_pitch_error(const std::string& what, double required)
        : precondition_error(what + " (required pitch " + std::to_string(required) + ")"),
          required_pitch(required) {}
    double required_pitch;
};

class resource_error : public error {
public:
    using error::error;
};

class parse_error : public error {
public:
    using error::error;
};

// Deterministic, portable RNG. std::mt19937 would do, but the standard
// distributions are implementation-defined; byte-identical reruns need a
// fixed mapping to doubles.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::uint64_t state_;
};

// Shortest decimal representation that round-trips exactly.
inline std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline constexpr const char* version() { return "0.1.0"; }

}  // namespace delone
