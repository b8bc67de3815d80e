#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace transel::test {

inline std::vector<double> normal_sample(std::size_t n, std::uint64_t seed, double mean = 0.0, double sd = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(mean, sd);
    std::vector<double> out(n);
    for (double& v : out) v = dist(rng);
    return out;
}

inline std::vector<double> gamma_sample(std::size_t n, std::uint64_t seed, double shape, double rate) {
    std::mt19937_64 rng(seed);
    std::gamma_distribution<double> dist(shape, 1.0 / rate);
    std::vector<double> out(n);
    for (double& v : out) v = dist(rng);
    return out;
}

}  // namespace transel::test
