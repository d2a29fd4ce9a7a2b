#pragma once

#include <cmath>
#include <random>

#include "hopw/types.hpp"

namespace hopw::test {

/// Seeded generators for the property tests. Every test draws from its own
/// fixed seed so failures reproduce.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }

    Vec3 in_ball(double radius)
    {
        for (;;) {
            Vec3 v{uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)};
            if (dot(v, v) <= 1.0) return radius * v;
        }
    }

    Vec3 unit()
    {
        for (;;) {
            Vec3 v = in_ball(1.0);
            const double n = norm(v);
            if (n > 0.1) return (1.0 / n) * v;
        }
    }

    cplx complex_in(double radius)
    {
        const double r = radius * std::sqrt(uniform(0, 1));
        const double a = uniform(-pi, pi);
        return std::polar(r, a);
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

} // namespace hopw::test
