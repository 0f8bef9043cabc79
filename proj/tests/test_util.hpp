// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "renyi/renyi.hpp"

namespace rt {

// Dirichlet(1,...,1)-style random joint via normalized exponentials.
inline renyi::JointDistribution random_joint(std::mt19937_64& rng, std::size_t x_size,
                                             std::size_t y_size) {
    std::vector<std::vector<double>> m(x_size, std::vector<double>(y_size));
    double total = 0.0;
    for (auto& row : m)
        for (auto& v : row) {
            v = -std::log(1.0 - renyi::uniform53(rng));
            total += v;
        }
    for (auto& row : m)
        for (auto& v : row) v /= total;
    return renyi::validate_joint(m);
}

// Random pmf sorted in decreasing order.
inline std::vector<double> random_sorted_pmf(std::mt19937_64& rng, std::size_t k) {
    std::vector<double> p(k);
    double total = 0.0;
    for (auto& v : p) {
        v = -std::log(1.0 - renyi::uniform53(rng));
        total += v;
    }
    for (auto& v : p) v /= total;
    std::sort(p.begin(), p.end(), std::greater<>());
    return p;
}

inline renyi::SortedConditional as_slice(std::vector<double> probs_desc) {
    renyi::SortedConditional s;
    s.order.resize(probs_desc.size());
    for (std::size_t i = 0; i < probs_desc.size(); ++i) s.order[i] = i;
    s.probs_desc = std::move(probs_desc);
    return s;
}

// Uniform binary source with trivial side information.
inline renyi::JointDistribution uniform_binary() {
    return renyi::validate_joint({{0.5}, {0.5}});
}

// 4x2 joint with uniform P_Y and conditional slices
// (0.4,0.3,0.2,0.1) and (0.7,0.1,0.1,0.1).
inline renyi::JointDistribution two_slice_example() {
    return renyi::validate_joint({{0.20, 0.35}, {0.15, 0.05}, {0.10, 0.05}, {0.05, 0.05}});
}

// Uniform-independent and diagonal-deterministic binary components.
inline renyi::MixtureSource uniform_plus_deterministic() {
    renyi::JointDistribution uni = renyi::validate_joint({{0.25, 0.25}, {0.25, 0.25}});
    renyi::JointDistribution det = renyi::validate_joint({{0.5, 0.0}, {0.0, 0.5}});
    return renyi::make_mixture({uni, det}, {0.5, 0.5});
}

inline double binomial_sigma(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

} // namespace rt
