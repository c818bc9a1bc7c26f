#pragma once

#include <cstdint>
#include <random>

#include "basket/model.hpp"

namespace test {

// Seeded generators for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }

    // Valid parameters spread over the admissible ranges.
    basket::MarketParams params() {
        basket::MarketParams p;
        p.sigma1 = uniform(0.05, 0.8);
        p.sigma2 = uniform(0.05, 0.8);
        p.r = uniform(0.0, 0.1);
        p.rho12 = uniform(-0.95, 0.95);
        p.omega1 = uniform(0.05, 0.95);
        p.omega2 = 1.0 - p.omega1;
        p.K = uniform(1.0, 200.0);
        p.T = uniform(0.1, 3.0);
        p.gamma = uniform(0.05, 1.0);
        return p;
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace test
