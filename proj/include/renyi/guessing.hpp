// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "renyi/distribution.hpp"
#include "renyi/errors.hpp"
#include "renyi/random.hpp"
#include "renyi/smooth_entropy.hpp"

namespace renyi {

/// Sequential guessing strategy with a give-up option.
/// rank_of[y][x] is the 0-based step at which x is guessed under side
/// information y; giveup[y][i] is the probability of stopping at step i
/// before comparing.
struct GuessingStrategy {
    std::vector<std::vector<std::size_t>> rank_of;
    std::vector<std::vector<double>> giveup;
};

struct GuessEvaluation {
    double error_prob = 0.0;
    double cost = 0.0;
    std::optional<double> penalty;
    std::optional<double> combined_cost;
};

namespace detail {

inline void check_strategy_shape(const GuessingStrategy& s, const JointDistribution& joint) {
    if (s.rank_of.size() != joint.y_size() || s.giveup.size() != joint.y_size())
        throw AlphabetMismatchError("strategy and joint side-information alphabets differ");
    for (std::size_t y = 0; y < joint.y_size(); ++y)
        if (s.rank_of[y].size() != joint.x_size() || s.giveup[y].size() != joint.x_size())
            throw AlphabetMismatchError("strategy and joint source alphabets differ");
}

} // namespace detail

/// lambda[y][i]: probability that the guesser is still active entering the
/// comparison at step i, i.e. prod_{j<=i} (1 - giveup[y][j]).
inline std::vector<std::vector<double>> survival_weights(const GuessingStrategy& strategy) {
    std::vector<std::vector<double>> lambda(strategy.giveup.size());
    for (std::size_t y = 0; y < strategy.giveup.size(); ++y) {
        lambda[y].resize(strategy.giveup[y].size());
        double acc = 1.0;
        for (std::size_t i = 0; i < strategy.giveup[y].size(); ++i) {
            acc *= 1.0 - strategy.giveup[y][i];
            lambda[y][i] = acc;
        }
    }
    return lambda;
}

/// Probability that guessing stops before the value is found.
inline double error_probability(const GuessingStrategy& strategy, const JointDistribution& joint) {
    detail::check_strategy_shape(strategy, joint);
    const auto lambda = survival_weights(strategy);
    double kept = 0.0;
    for (std::size_t y = 0; y < joint.y_size(); ++y)
        for (std::size_t x = 0; x < joint.x_size(); ++x)
            kept += lambda[y][strategy.rank_of[y][x]] * joint.prob(x, y);
    return 1.0 - kept;
}

/// Expected cost moment: E[(step of the correct guess)^rho] over runs that
/// finish, counting the first step as 1.
inline double expected_cost(const GuessingStrategy& strategy, const JointDistribution& joint,
                            double rho) {
    if (!(rho > 0.0))
        throw ValidationError("moment order rho must be positive");
    detail::check_strategy_shape(strategy, joint);
    const auto lambda = survival_weights(strategy);
    double cost = 0.0;
    for (std::size_t y = 0; y < joint.y_size(); ++y)
        for (std::size_t x = 0; x < joint.x_size(); ++x) {
            const std::size_t rank = strategy.rank_of[y][x];
            cost += lambda[y][rank] * joint.prob(x, y) *
                    std::pow(static_cast<double>(rank + 1), rho);
        }
    return cost;
}

inline GuessEvaluation evaluate_strategy(const GuessingStrategy& strategy,
                                         const JointDistribution& joint, double rho,
                                         std::optional<double> penalty = std::nullopt) {
    GuessEvaluation eval;
    eval.error_prob = error_probability(strategy, joint);
    eval.cost = expected_cost(strategy, joint, rho);
    if (penalty) {
        eval.penalty = penalty;
        eval.combined_cost = eval.cost + eval.error_prob * *penalty;
    }
    return eval;
}

namespace detail {

/// Single-dice strategy minimizing the cost moment at error budget epsilon:
/// guesses run in descending conditional probability, and the give-up mass
/// is drained from the most expensive guess ranks first.  Draining rank i
/// saves (i+1)^rho per unit of weighted mass regardless of y, so the greedy
/// level sweep solves the allocation exactly; the rank order (and hence the
/// strategy) does not depend on rho.
inline GuessingStrategy cost_greedy_strategy(const JointDistribution& joint, double epsilon) {
    const std::size_t k = joint.x_size();
    std::vector<SortedConditional> sorted(joint.y_size());
    GuessingStrategy s;
    s.rank_of.assign(joint.y_size(), {});
    s.giveup.assign(joint.y_size(), {});
    std::vector<std::vector<double>> removed(joint.y_size());
    for (std::size_t y = 0; y < joint.y_size(); ++y) {
        s.rank_of[y].resize(k);
        s.giveup[y].assign(k, 0.0);
        removed[y].assign(k, 0.0);
        if (joint.y_marginal(y) <= 0.0) {
            std::iota(s.rank_of[y].begin(), s.rank_of[y].end(), std::size_t{0});
            continue;
        }
        sorted[y] = sorted_conditional(joint, y);
        for (std::size_t i = 0; i < k; ++i) s.rank_of[y][sorted[y].order[i]] = i;
    }

    double budget = epsilon; // in weighted mass units
    for (std::size_t i = k; i-- > 0 && budget > 0.0;) {
        double level_total = 0.0;
        for (std::size_t y = 0; y < joint.y_size(); ++y)
            if (joint.y_marginal(y) > 0.0) level_total += joint.y_marginal(y) * sorted[y].probs_desc[i];
        if (level_total <= budget) {
            for (std::size_t y = 0; y < joint.y_size(); ++y)
                if (joint.y_marginal(y) > 0.0) removed[y][i] = sorted[y].probs_desc[i];
            budget -= level_total;
        } else {
            for (std::size_t y = 0; y < joint.y_size() && budget > 0.0; ++y) {
                const double w = joint.y_marginal(y);
                if (w <= 0.0) continue;
                const double take = std::min(w * sorted[y].probs_desc[i], budget);
                removed[y][i] = take / w;
                budget -= take;
            }
            budget = 0.0;
        }
    }

    for (std::size_t y = 0; y < joint.y_size(); ++y) {
        if (joint.y_marginal(y) <= 0.0) continue;
        // removal is contiguous from the tail: full give-up past the dice rank
        std::size_t dice = k;
        for (std::size_t i = k; i-- > 0;) {
            const double p = sorted[y].probs_desc[i];
            if (removed[y][i] >= p - 1e-15) {
                s.giveup[y][i] = 1.0;
            } else {
                dice = i;
                break;
            }
        }
        if (dice < k && removed[y][dice] > 0.0 && sorted[y].probs_desc[dice] > 0.0)
            s.giveup[y][dice] =
                std::clamp(removed[y][dice] / sorted[y].probs_desc[dice], 0.0, 1.0);
    }
    return s;
}

} // namespace detail

/// Cost-optimal strategy under error budget epsilon: descending-probability
/// guess order with the give-up budget drained from the largest ranks.
inline GuessingStrategy optimal_strategy(const JointDistribution& joint, double rho,
                                         double epsilon) {
    if (!(rho > 0.0))
        throw ValidationError("moment order rho must be positive");
    if (!(epsilon >= 0.0) || !(epsilon < 1.0))
        throw ValidationError("error budget must lie in [0,1)");
    return detail::cost_greedy_strategy(joint, epsilon);
}

/// Lower bound (1 + log K)^{-rho} * exp(rho * H) on the cost of any strategy
/// meeting the error budget.
inline double converse_bound(const JointDistribution& joint, double rho, double epsilon) {
    if (!(rho > 0.0))
        throw ValidationError("moment order rho must be positive");
    const EntropyQuery query(1.0 / (1.0 + rho), epsilon);
    const EntropyResult res = optimize_allocation(joint, query);
    // exp(rho * value) equals the minimized objective at order 1/(1+rho).
    const double k = static_cast<double>(joint.x_size());
    return std::pow(1.0 + std::log(k), -rho) * res.objective;
}

struct PenaltyResult {
    double epsilon_star = 0.0;
    GuessEvaluation eval;
};

/// Minimizes cost(epsilon) + epsilon * penalty over the error budget, by
/// grid search with two local refinement rounds; ties resolve toward the
/// smaller budget.
inline PenaltyResult optimize_with_penalty(const JointDistribution& joint, double rho,
                                           double penalty, double grid_step = 1e-3) {
    if (!(rho > 0.0))
        throw ValidationError("moment order rho must be positive");
    if (!(penalty >= 0.0))
        throw ValidationError("penalty must be nonnegative");
    if (!(grid_step > 0.0) || !(grid_step < 1.0))
        throw ValidationError("grid step must lie in (0,1)");

    const double cap = 1.0 - 1e-9;
    double best_j = std::numeric_limits<double>::infinity();
    double best_eps = 0.0;
    auto consider = [&](double eps) {
        eps = std::clamp(eps, 0.0, cap);
        const GuessingStrategy s = optimal_strategy(joint, rho, eps);
        const double j = expected_cost(s, joint, rho) + eps * penalty;
        if (j < best_j - 1e-12 || (j <= best_j + 1e-12 && eps < best_eps)) {
            best_j = std::min(j, best_j);
            best_eps = eps;
        }
    };

    for (double e = 0.0; e < 1.0; e += grid_step) consider(e);
    double span = grid_step;
    for (int round = 0; round < 2; ++round) {
        const double center = best_eps;
        const double fine = span / 10.0;
        for (double e = std::max(0.0, center - span); e <= std::min(cap, center + span); e += fine)
            consider(e);
        span = fine;
    }

    PenaltyResult out;
    out.epsilon_star = best_eps;
    out.eval = evaluate_strategy(optimal_strategy(joint, rho, best_eps), joint, rho, penalty);
    return out;
}

/// Plays the sequential game; empirical estimates converge to the analytic
/// error probability and cost.  Deterministic for a fixed seed.
inline GuessEvaluation simulate_guessing(const GuessingStrategy& strategy,
                                         const JointDistribution& joint, double rho,
                                         std::uint64_t seed, std::size_t trials) {
    if (!(rho > 0.0))
        throw ValidationError("moment order rho must be positive");
    if (trials == 0)
        throw ValidationError("trial count must be at least 1");
    detail::check_strategy_shape(strategy, joint);

    std::vector<double> cdf(joint.data().size());
    std::partial_sum(joint.data().begin(), joint.data().end(), cdf.begin());
    cdf.back() = 1.0;
    std::mt19937_64 rng(seed);
    std::size_t errors = 0;
    double cost_sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const double u = uniform53(rng);
        const std::size_t cell =
            static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        const std::size_t x = cell / joint.y_size();
        const std::size_t y = cell % joint.y_size();
        const std::size_t target_rank = strategy.rank_of[y][x];
        bool solved = false;
        for (std::size_t i = 0; i <= target_rank; ++i) {
            const double pi = strategy.giveup[y][i];
            if (pi >= 1.0 || (pi > 0.0 && uniform53(rng) < pi)) break;
            if (i == target_rank) {
                solved = true;
                cost_sum += std::pow(static_cast<double>(i + 1), rho);
            }
        }
        if (!solved) ++errors;
    }
    GuessEvaluation eval;
    eval.error_prob = static_cast<double>(errors) / static_cast<double>(trials);
    eval.cost = cost_sum / static_cast<double>(trials);
    return eval;
}

struct GuessingExponentPoint {
    std::size_t n = 0;
    double exponent = 0.0;
    double error_prob = 0.0;
    double cost = 0.0;
    double bound_lo = 0.0;
    double bound_hi = 0.0;
};

struct GuessingExponentCurve {
    std::vector<GuessingExponentPoint> points;
    std::size_t regime = 0;     // 0-based mixture component index
    double target = 0.0;        // rho * H(X_i|Y_i)
};

/// Normalized log-cost of the synthesized block strategies, with the
/// single-letter target selected by the budget's regime.
inline GuessingExponentCurve guessing_exponent_curve(const MixtureSource& mix, double rho,
                                                     double epsilon,
                                                     const std::vector<std::size_t>& n_list,
                                                     std::size_t cell_budget = kDefaultCellBudget) {
    if (!(rho > 0.0))
        throw ValidationError("moment order rho must be positive");
    GuessingExponentCurve curve;
    curve.regime = mix.component_for(epsilon);
    curve.target = rho * mix.component_cond_entropies[curve.regime];
    const EntropyQuery query(1.0 / (1.0 + rho), epsilon);
    for (std::size_t n : n_list) {
        const JointDistribution block = mixture_block(mix, n, cell_budget);
        const EntropyResult res = optimize_allocation(block, query);
        const GuessingStrategy s = detail::cost_greedy_strategy(block, epsilon);
        GuessingExponentPoint pt;
        pt.n = n;
        pt.cost = expected_cost(s, block, rho);
        pt.error_prob = error_probability(s, block);
        pt.exponent = std::log(pt.cost) / static_cast<double>(n);
        pt.bound_hi = res.objective;
        pt.bound_lo =
            std::pow(1.0 + std::log(static_cast<double>(block.x_size())), -rho) * res.objective;
        curve.points.push_back(pt);
    }
    return curve;
}

} // namespace renyi
