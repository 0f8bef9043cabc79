// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "renyi/errors.hpp"
#include "renyi/random.hpp"

namespace renyi {

/// Default cap on dense block builds: (|X|*|Y|)^n cells.
inline constexpr std::size_t kDefaultCellBudget = std::size_t{1} << 22;

/// Finite joint pmf over X x Y, stored dense row-major by x.
/// Entries are validated nonnegative and renormalized to total mass 1.
class JointDistribution {
  public:
    JointDistribution(std::size_t x_size, std::size_t y_size, std::vector<double> probs)
        : x_size_(x_size), y_size_(y_size), p_(std::move(probs)) {
        recompute_marginals();
    }

    std::size_t x_size() const { return x_size_; }
    std::size_t y_size() const { return y_size_; }

    double prob(std::size_t x, std::size_t y) const { return p_[x * y_size_ + y]; }
    double y_marginal(std::size_t y) const { return py_[y]; }
    const std::vector<double>& y_marginals() const { return py_; }
    const std::vector<double>& data() const { return p_; }

  private:
    void recompute_marginals() {
        py_.assign(y_size_, 0.0);
        for (std::size_t x = 0; x < x_size_; ++x)
            for (std::size_t y = 0; y < y_size_; ++y)
                py_[y] += p_[x * y_size_ + y];
    }

    std::size_t x_size_;
    std::size_t y_size_;
    std::vector<double> p_;
    std::vector<double> py_;
};

/// Validates a raw nonnegative matrix as a joint pmf.
///
/// The total mass must lie within 1e-9 of 1; the matrix is then renormalized
/// exactly.  Larger deviations are rejected rather than silently scaled.
inline JointDistribution validate_joint(const std::vector<std::vector<double>>& raw) {
    if (raw.empty() || raw[0].empty())
        throw ValidationError("joint matrix must be nonempty");
    const std::size_t x_size = raw.size();
    const std::size_t y_size = raw[0].size();
    std::vector<double> flat;
    flat.reserve(x_size * y_size);
    double total = 0.0;
    for (std::size_t x = 0; x < x_size; ++x) {
        if (raw[x].size() != y_size)
            throw ValidationError("joint matrix rows must have equal length");
        for (std::size_t y = 0; y < y_size; ++y) {
            const double v = raw[x][y];
            if (!std::isfinite(v))
                throw ValidationError("joint matrix entries must be finite");
            if (v < 0.0)
                throw NegativeEntryError("negative probability entry");
            flat.push_back(v);
            total += v;
        }
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw MassDeviationError("total probability mass deviates from 1 by more than 1e-9");
    for (double& v : flat) v /= total;
    return JointDistribution(x_size, y_size, std::move(flat));
}

/// Conditional pmf of X given one y, sorted by decreasing probability.
/// order[i] is the original symbol at rank i; ties keep ascending symbol order.
struct SortedConditional {
    std::size_t y = 0;
    std::vector<std::size_t> order;
    std::vector<double> probs_desc;
};

inline SortedConditional sorted_conditional(const JointDistribution& joint, std::size_t y) {
    if (y >= joint.y_size())
        throw AlphabetMismatchError("side-information symbol out of range");
    const double py = joint.y_marginal(y);
    if (py <= 0.0)
        throw ZeroMarginalError("conditional requested for a zero-probability y");
    SortedConditional out;
    out.y = y;
    out.order.resize(joint.x_size());
    std::iota(out.order.begin(), out.order.end(), std::size_t{0});
    std::stable_sort(out.order.begin(), out.order.end(),
                     [&](std::size_t a, std::size_t b) { return joint.prob(a, y) > joint.prob(b, y); });
    out.probs_desc.resize(joint.x_size());
    for (std::size_t i = 0; i < joint.x_size(); ++i)
        out.probs_desc[i] = joint.prob(out.order[i], y) / py;
    return out;
}

/// Shannon conditional entropy H(X|Y) in nats; 0 log(1/0) taken as 0.
inline double conditional_entropy(const JointDistribution& joint) {
    double h = 0.0;
    for (std::size_t y = 0; y < joint.y_size(); ++y) {
        const double py = joint.y_marginal(y);
        if (py <= 0.0) continue;
        for (std::size_t x = 0; x < joint.x_size(); ++x) {
            const double pxy = joint.prob(x, y);
            if (pxy <= 0.0) continue;
            h += pxy * std::log(py / pxy);
        }
    }
    return h;
}

/// Convex mixture of i.i.d. components over a common alphabet.
/// Components must be ordered by strictly decreasing conditional entropy;
/// cumulative[i] = sum of the first i weights, with cumulative[m] = 1.
struct MixtureSource {
    std::vector<JointDistribution> components;
    std::vector<double> weights;
    std::vector<double> cumulative;
    std::vector<double> component_cond_entropies;

    /// 0-based index i with cumulative[i] <= epsilon < cumulative[i+1].
    std::size_t component_for(double epsilon) const {
        std::size_t i = 0;
        while (i + 1 < weights.size() && epsilon >= cumulative[i + 1]) ++i;
        return i;
    }
};

inline MixtureSource make_mixture(std::vector<JointDistribution> components,
                                  std::vector<double> weights) {
    if (components.empty() || components.size() != weights.size())
        throw ValidationError("mixture needs one weight per component");
    const std::size_t xs = components[0].x_size();
    const std::size_t ys = components[0].y_size();
    double total = 0.0;
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (components[i].x_size() != xs || components[i].y_size() != ys)
            throw AlphabetMismatchError("mixture components must share one alphabet");
        if (weights[i] <= 0.0)
            throw ValidationError("mixture weights must be positive");
        total += weights[i];
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw MassDeviationError("mixture weights must sum to 1");

    MixtureSource mix;
    mix.components = std::move(components);
    mix.weights = std::move(weights);
    mix.cumulative.resize(mix.weights.size() + 1);
    mix.cumulative[0] = 0.0;
    for (std::size_t i = 0; i < mix.weights.size(); ++i)
        mix.cumulative[i + 1] = mix.cumulative[i] + mix.weights[i];
    mix.cumulative.back() = 1.0;
    mix.component_cond_entropies.reserve(mix.components.size());
    for (const auto& c : mix.components)
        mix.component_cond_entropies.push_back(conditional_entropy(c));
    for (std::size_t i = 0; i + 1 < mix.component_cond_entropies.size(); ++i)
        if (!(mix.component_cond_entropies[i] > mix.component_cond_entropies[i + 1]))
            throw ValidationError("mixture components must have strictly decreasing conditional entropy");
    return mix;
}

namespace detail {

inline void check_block_budget(std::size_t x_size, std::size_t y_size, std::size_t n,
                               std::size_t cell_budget) {
    long double cells = 1.0L;
    for (std::size_t t = 0; t < n; ++t) {
        cells *= static_cast<long double>(x_size) * static_cast<long double>(y_size);
        if (cells > static_cast<long double>(cell_budget))
            throw BlockTooLargeError("dense block exceeds the configured cell budget");
    }
}

// n-fold product of a single-letter joint; block symbols are positional
// base-|alphabet| integers with the first coordinate most significant.
inline std::vector<double> product_power(const JointDistribution& j, std::size_t n) {
    std::vector<double> cur = {1.0};
    std::size_t cx = 1, cy = 1;
    for (std::size_t t = 0; t < n; ++t) {
        std::vector<double> next(cx * j.x_size() * cy * j.y_size());
        const std::size_t ny = cy * j.y_size();
        for (std::size_t px = 0; px < cx; ++px)
            for (std::size_t x = 0; x < j.x_size(); ++x)
                for (std::size_t py = 0; py < cy; ++py)
                    for (std::size_t y = 0; y < j.y_size(); ++y)
                        next[(px * j.x_size() + x) * ny + (py * j.y_size() + y)] =
                            cur[px * cy + py] * j.prob(x, y);
        cur = std::move(next);
        cx *= j.x_size();
        cy *= j.y_size();
    }
    return cur;
}

} // namespace detail

/// Dense n-fold block extension of a mixture: sum_i alpha_i P_i^{(n)}.
inline JointDistribution mixture_block(const MixtureSource& mix, std::size_t n,
                                       std::size_t cell_budget = kDefaultCellBudget) {
    if (n == 0)
        throw ValidationError("block length must be at least 1");
    const std::size_t xs = mix.components[0].x_size();
    const std::size_t ys = mix.components[0].y_size();
    detail::check_block_budget(xs, ys, n, cell_budget);
    std::size_t bx = 1, by = 1;
    for (std::size_t t = 0; t < n; ++t) { bx *= xs; by *= ys; }
    std::vector<double> acc(bx * by, 0.0);
    for (std::size_t i = 0; i < mix.components.size(); ++i) {
        std::vector<double> pw = detail::product_power(mix.components[i], n);
        const double w = mix.weights[i];
        for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += w * pw[c];
    }
    return JointDistribution(bx, by, std::move(acc));
}

/// n-fold product of a single joint (i.i.d. block).
inline JointDistribution iid_block(const JointDistribution& joint, std::size_t n,
                                   std::size_t cell_budget = kDefaultCellBudget) {
    if (n == 0)
        throw ValidationError("block length must be at least 1");
    detail::check_block_budget(joint.x_size(), joint.y_size(), n, cell_budget);
    std::size_t bx = 1, by = 1;
    for (std::size_t t = 0; t < n; ++t) { bx *= joint.x_size(); by *= joint.y_size(); }
    return JointDistribution(bx, by, detail::product_power(joint, n));
}

/// Seeded i.i.d. sampling from a joint pmf; reproducible for a fixed seed.
inline std::vector<std::pair<std::size_t, std::size_t>>
sample(const JointDistribution& joint, std::uint64_t seed, std::size_t count) {
    std::vector<double> cdf(joint.data().size());
    std::partial_sum(joint.data().begin(), joint.data().end(), cdf.begin());
    cdf.back() = 1.0;
    std::mt19937_64 rng(seed);
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(count);
    for (std::size_t t = 0; t < count; ++t) {
        const double u = uniform53(rng);
        const std::size_t cell =
            static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        out.emplace_back(cell / joint.y_size(), cell % joint.y_size());
    }
    return out;
}

} // namespace renyi
