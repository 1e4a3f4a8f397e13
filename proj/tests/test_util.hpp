#pragma once

#include <random>

#include "nlss/types.hpp"

namespace testutil {

inline nlss::CPair random_pair(std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> N;
    return {nlss::cplx(N(rng), N(rng)) * scale, nlss::cplx(N(rng), N(rng)) * scale};
}

inline double pair_dist(const nlss::CPair& a, const nlss::CPair& b) {
    return std::sqrt(std::norm(a[0] - b[0]) + std::norm(a[1] - b[1]));
}

}  // namespace testutil
