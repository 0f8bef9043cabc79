// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "renyi/distribution.hpp"
#include "renyi/errors.hpp"
#include "renyi/guessing.hpp"
#include "renyi/smooth_entropy.hpp"

namespace renyi {

/// 0-based mixture component whose cumulative-weight window contains the
/// budget: cumulative[i] <= epsilon < cumulative[i+1].
inline std::size_t regime_index(const MixtureSource& mix, double epsilon) {
    if (!(epsilon >= 0.0) || !(epsilon < 1.0))
        throw ValidationError("smoothing epsilon must lie in [0,1)");
    return mix.component_for(epsilon);
}

struct ConvergenceRow {
    std::size_t n = 0;
    double rate = 0.0;             // (1/n) H at the queried budget, nats/symbol
    double target = 0.0;           // single-letter conditional entropy of the regime
    double gap = 0.0;              // rate - target
    double lower_bound = 0.0;      // log(1 - eps) / (n (1 - alpha))
    double sensitivity_rate = 0.0; // rate at a slightly larger budget
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    std::size_t regime = 0;   // 0-based component index
    double target = 0.0;
    bool at_boundary = false; // budget sits on an interior cumulative weight
    bool monotone_tail_ok = false;
    std::size_t tail_window = 0;
};

/// Finite-n rates of the block entropy against the single-letter target,
/// with a tail-window monotonicity check on |gap| and a sensitivity column
/// at epsilon + delta to expose regime-boundary discontinuities.
inline ConvergenceReport convergence_report(const MixtureSource& mix, const EntropyQuery& query,
                                            std::size_t n_max,
                                            std::size_t cell_budget = kDefaultCellBudget,
                                            std::size_t tail_window = 5,
                                            double sensitivity_delta = 1e-3) {
    if (n_max == 0)
        throw ValidationError("n_max must be at least 1");
    ConvergenceReport report;
    report.regime = mix.component_for(query.epsilon);
    report.target = mix.component_cond_entropies[report.regime];
    report.tail_window = tail_window;
    for (std::size_t i = 1; i < mix.weights.size(); ++i)
        if (std::abs(query.epsilon - mix.cumulative[i]) <= 1e-12) report.at_boundary = true;

    const double sens_eps = std::min(query.epsilon + sensitivity_delta,
                                     0.5 * (1.0 + query.epsilon));
    const EntropyQuery sens_query(query.alpha, sens_eps);
    for (std::size_t n = 1; n <= n_max; ++n) {
        ConvergenceRow row;
        row.n = n;
        row.rate = finite_n_rate(mix, query, n, cell_budget);
        row.target = report.target;
        row.gap = row.rate - row.target;
        row.lower_bound = std::log1p(-query.epsilon) /
                          (static_cast<double>(n) * (1.0 - query.alpha));
        row.sensitivity_rate = finite_n_rate(mix, sens_query, n, cell_budget);
        report.rows.push_back(row);
    }

    report.monotone_tail_ok = true;
    const std::size_t first = n_max > tail_window ? n_max - tail_window : 0;
    for (std::size_t i = first; i + 1 < report.rows.size(); ++i)
        if (std::abs(report.rows[i + 1].gap) > std::abs(report.rows[i].gap) + 1e-12)
            report.monotone_tail_ok = false;
    return report;
}

struct ContrastRow {
    std::size_t n = 0;
    double eps_exponent = 0.0;       // rho * (1/n) H^eps of the block
    double realized_exponent = 0.0;  // (1/n) log cost of the synthesized strategy
    double zero_error_exponent = 0.0;
    double shannon_target = 0.0;     // rho * H(X|Y)
};

struct ContrastTable {
    std::vector<ContrastRow> rows;
    double zero_error_exponent = 0.0; // rho * (no-smoothing order-1/(1+rho) entropy)
    double shannon_target = 0.0;
};

/// Contrasts the budgeted guessing exponent of one i.i.d. source with the
/// no-smoothing exponent (constant in n) and the Shannon-entropy limit.
inline ContrastTable vanishing_vs_zero_error_contrast(const JointDistribution& component,
                                                      double rho, double epsilon,
                                                      std::size_t n_max,
                                                      std::size_t cell_budget = kDefaultCellBudget) {
    if (!(rho > 0.0))
        throw ValidationError("moment order rho must be positive");
    const double alpha = 1.0 / (1.0 + rho);
    const EntropyQuery query(alpha, epsilon);
    ContrastTable table;
    table.zero_error_exponent = rho * arimoto_conditional_renyi(component, alpha);
    table.shannon_target = rho * conditional_entropy(component);
    for (std::size_t n = 1; n <= n_max; ++n) {
        const JointDistribution block = iid_block(component, n, cell_budget);
        const EntropyResult res = smooth_conditional_entropy(block, query);
        ContrastRow row;
        row.n = n;
        row.eps_exponent = rho * res.value / static_cast<double>(n);
        const GuessingStrategy s = detail::cost_greedy_strategy(block, epsilon);
        row.realized_exponent =
            std::log(expected_cost(s, block, rho)) / static_cast<double>(n);
        row.zero_error_exponent = table.zero_error_exponent;
        row.shannon_target = table.shannon_target;
        table.rows.push_back(row);
    }
    return table;
}

} // namespace renyi
