#pragma once

#include <cmath>

#include "crl/rng.hpp"

namespace crl {

/// Ornstein-Uhlenbeck process in normalized action units, stepped once per
/// environment step (dt = 1 by default).
struct OuNoise {
    double value = 0.0;
    double theta = 0.15;  // mean reversion rate
    double sigma = 0.2;   // volatility
    double mean = 0.0;
    double dt = 1.0;

    void reset() { value = mean; }
};

inline double ou_sample(OuNoise& n, Rng& rng) {
    n.value += n.theta * (n.mean - n.value) * n.dt + n.sigma * std::sqrt(n.dt) * normal01(rng);
    return n.value;
}

}  // namespace crl
