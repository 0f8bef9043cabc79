// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "renyi/distribution.hpp"
#include "renyi/errors.hpp"

namespace renyi {

/// Order and smoothing budget of an entropy evaluation.
struct EntropyQuery {
    double alpha;
    double epsilon;

    EntropyQuery(double a, double e) : alpha(a), epsilon(e) {
        if (!(a > 0.0) || !(a < 1.0))
            throw ValidationError("order alpha must lie in (0,1)");
        if (!(e >= 0.0) || !(e < 1.0))
            throw ValidationError("smoothing epsilon must lie in [0,1)");
    }
};

/// Kept values of an optimally truncated conditional slice, in descending
/// rank order.  q holds `kept` entries; all ranks beyond are dropped.
struct TruncatedSlice {
    std::size_t kept = 0;
    std::vector<double> q;
};

namespace detail {

inline std::size_t support_size(const std::vector<double>& probs_desc) {
    std::size_t s = probs_desc.size();
    while (s > 0 && probs_desc[s - 1] <= 0.0) --s;
    return s;
}

/// Snap tolerance for locating a truncation segment.  The inner sum gains
/// residual^alpha when the kept mass crosses a cumulative boundary, so a
/// one-ulp overshoot of the boundary would inflate the score by ~ulp^alpha.
/// Targets within this tolerance of a boundary evaluate at the boundary,
/// i.e. at a feasible allocation at most 1e-13 away.
inline constexpr double kBoundarySnap = 1e-13;

} // namespace detail

/// Smallest number of top-ranked symbols whose mass reaches 1 - eps_y.
/// Returns the support size at eps_y = 0 and 0 at eps_y = 1.
inline std::size_t truncation_point(const SortedConditional& slice, double eps_y) {
    if (!(eps_y >= 0.0) || !(eps_y <= 1.0))
        throw ValidationError("per-slice budget must lie in [0,1]");
    const std::size_t support = detail::support_size(slice.probs_desc);
    if (eps_y <= 1e-15) return support;
    const double target = 1.0 - eps_y;
    if (target <= 0.0) return 0;
    double cum = 0.0;
    for (std::size_t i = 0; i < support; ++i) {
        cum += slice.probs_desc[i];
        if (cum >= target - detail::kBoundarySnap) return i + 1;
    }
    return support;
}

/// Keeps the largest conditional probabilities unchanged and assigns the
/// remaining mass 1 - eps_y - (kept prefix) to one residual rank.
inline TruncatedSlice truncated_q(const SortedConditional& slice, double eps_y) {
    TruncatedSlice out;
    out.kept = truncation_point(slice, eps_y);
    if (out.kept == 0) return out;
    const std::size_t support = detail::support_size(slice.probs_desc);
    if (eps_y <= 1e-15) {
        out.q.assign(slice.probs_desc.begin(), slice.probs_desc.begin() + support);
        return out;
    }
    out.q.resize(out.kept);
    double prefix = 0.0;
    for (std::size_t i = 0; i + 1 < out.kept; ++i) {
        out.q[i] = slice.probs_desc[i];
        prefix += slice.probs_desc[i];
    }
    double residual = (1.0 - eps_y) - prefix;
    residual = std::clamp(residual, 0.0, slice.probs_desc[out.kept - 1]);
    out.q[out.kept - 1] = residual;
    return out;
}

/// Per-slice truncation score [sum_i q_i^alpha]^{1/alpha}; 0 for an empty slice.
inline double inner_score(const TruncatedSlice& q, double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw ValidationError("order alpha must lie in (0,1)");
    if (q.kept == 0) return 0.0;
    double g = 0.0;
    for (double v : q.q) g += std::pow(v, alpha);
    return std::pow(g, 1.0 / alpha);
}

namespace detail {

/// Precomputed tables for repeated truncation-score evaluation on one slice.
///
/// The score f(eps) is continuous, nonincreasing, and concave between the
/// budget breakpoints eps = 1 - C_j (C_j = mass of the j largest symbols).
/// Between breakpoints the inner sum is S_{j-1} + r^alpha with r the
/// residual mass, so the minimum of any budget allocation is attained with
/// at most one slice away from a breakpoint.
class SliceScore {
  public:
    SliceScore(const SortedConditional& slice, double alpha) : alpha_(alpha) {
        const std::size_t support = support_size(slice.probs_desc);
        p_.assign(slice.probs_desc.begin(), slice.probs_desc.begin() + support);
        cum_.resize(support);
        cum_pow_.resize(support);
        double c = 0.0, s = 0.0;
        for (std::size_t i = 0; i < support; ++i) {
            c += p_[i];
            s += std::pow(p_[i], alpha);
            cum_[i] = c;
            cum_pow_[i] = s;
        }
        // Breakpoints ascending in eps: keeping support..0 full symbols.
        verts_.reserve(support + 1);
        kept_at_vertex_.reserve(support + 1);
        verts_.push_back(0.0);
        kept_at_vertex_.push_back(support);
        for (std::size_t j = support; j-- > 1;) {
            const double v = 1.0 - cum_[j - 1];
            if (v > verts_.back()) {
                verts_.push_back(v);
                kept_at_vertex_.push_back(j);
            }
        }
        if (1.0 > verts_.back()) {
            verts_.push_back(1.0);
            kept_at_vertex_.push_back(0);
        }
        vert_score_.resize(verts_.size());
        for (std::size_t k = 0; k < verts_.size(); ++k) {
            const std::size_t kept = kept_at_vertex_[k];
            vert_score_[k] = kept == 0 ? 0.0 : std::pow(cum_pow_[kept - 1], 1.0 / alpha_);
        }
    }

    std::size_t support() const { return p_.size(); }
    const std::vector<double>& vertices() const { return verts_; }
    double vertex_score(std::size_t k) const { return vert_score_[k]; }

    double inner_sum(double eps) const {
        if (eps >= 1.0) return 0.0;
        if (eps <= 1e-15) return cum_pow_.back();
        const double target = 1.0 - eps;
        std::size_t idx = static_cast<std::size_t>(
            std::lower_bound(cum_.begin(), cum_.end(), target - kBoundarySnap) - cum_.begin());
        if (idx >= p_.size()) idx = p_.size() - 1;
        const double prev_mass = idx > 0 ? cum_[idx - 1] : 0.0;
        const double base = idx > 0 ? cum_pow_[idx - 1] : 0.0;
        const double r = std::clamp(target - prev_mass, 0.0, p_[idx]);
        return base + std::pow(r, alpha_);
    }

    double score(double eps) const {
        const double g = inner_sum(eps);
        return g <= 0.0 ? 0.0 : std::pow(g, 1.0 / alpha_);
    }

    /// Smallest budget eps whose inner sum does not exceed t.
    double budget_for_inner_sum(double t) const {
        if (t >= cum_pow_.back()) return 0.0;
        if (t <= 0.0) return 1.0;
        // Number of fully kept symbols k with PS[k] <= t < PS[k+1].
        std::size_t k = static_cast<std::size_t>(
            std::upper_bound(cum_pow_.begin(), cum_pow_.end(), t) - cum_pow_.begin());
        const double base = k > 0 ? cum_pow_[k - 1] : 0.0;
        const double mass = k > 0 ? cum_[k - 1] : 0.0;
        const double r = std::pow(std::max(t - base, 0.0), 1.0 / alpha_);
        return std::clamp(1.0 - mass - r, 0.0, 1.0);
    }

    TruncatedSlice truncated(double eps) const {
        TruncatedSlice out;
        if (eps >= 1.0) return out;
        if (eps <= 1e-15) {
            out.kept = p_.size();
            out.q = p_;
            return out;
        }
        const double target = 1.0 - eps;
        std::size_t idx = static_cast<std::size_t>(
            std::lower_bound(cum_.begin(), cum_.end(), target - kBoundarySnap) - cum_.begin());
        if (idx >= p_.size()) idx = p_.size() - 1;
        out.kept = idx + 1;
        out.q.assign(p_.begin(), p_.begin() + idx);
        const double prev_mass = idx > 0 ? cum_[idx - 1] : 0.0;
        out.q.push_back(std::clamp(target - prev_mass, 0.0, p_[idx]));
        return out;
    }

  private:
    double alpha_;
    std::vector<double> p_;
    std::vector<double> cum_;
    std::vector<double> cum_pow_;
    std::vector<double> verts_;
    std::vector<std::size_t> kept_at_vertex_;
    std::vector<double> vert_score_;
};

struct ActiveSlice {
    std::size_t y;
    double weight;
    SliceScore score;
};

inline std::vector<ActiveSlice> build_active_slices(const JointDistribution& joint,
                                                    double alpha) {
    std::vector<ActiveSlice> out;
    out.reserve(joint.y_size());
    for (std::size_t y = 0; y < joint.y_size(); ++y) {
        const double w = joint.y_marginal(y);
        if (w <= 0.0) continue;
        out.push_back(ActiveSlice{y, w, SliceScore(sorted_conditional(joint, y), alpha)});
    }
    return out;
}

} // namespace detail

/// Minimizer of the averaged truncation score together with the allocation
/// and per-slice truncations that realize it.  Vectors are indexed by the
/// original y symbol; zero-probability columns carry empty slices.
struct EntropyResult {
    double value = 0.0;      // nats
    double objective = 0.0;  // minimized sum_y P_Y(y) * score_y
    std::vector<double> eps_y;
    std::vector<std::size_t> truncation_index;
    std::vector<TruncatedSlice> slices;
};

namespace detail {

inline EntropyResult assemble_result(const JointDistribution& joint,
                                     const std::vector<ActiveSlice>& slices,
                                     const EntropyQuery& query,
                                     const std::vector<double>& alloc) {
    EntropyResult res;
    res.eps_y.assign(joint.y_size(), 0.0);
    res.truncation_index.assign(joint.y_size(), 0);
    res.slices.resize(joint.y_size());
    double objective = 0.0;
    for (std::size_t i = 0; i < slices.size(); ++i) {
        const double e = alloc[i];
        TruncatedSlice ts = slices[i].score.truncated(e);
        objective += slices[i].weight * slices[i].score.score(e);
        res.eps_y[slices[i].y] = e;
        res.truncation_index[slices[i].y] = ts.kept;
        res.slices[slices[i].y] = std::move(ts);
    }
    res.objective = objective;
    res.value = query.alpha / (1.0 - query.alpha) * std::log(objective);
    return res;
}

/// Exact minimization over allocations with every slice but one at a budget
/// breakpoint.  Piecewise concavity of the per-slice scores puts the global
/// minimum on such a point, so enumerating them is exact.
inline bool solve_exact(const std::vector<ActiveSlice>& slices, double epsilon,
                        std::vector<double>& alloc, double product_budget) {
    const std::size_t m = slices.size();
    double log_cost = 0.0;
    std::size_t max_verts = 0;
    for (const auto& s : slices) {
        log_cost += std::log(static_cast<double>(s.score.vertices().size()));
        max_verts = std::max(max_verts, s.score.vertices().size());
    }
    // Total candidates ~ m * prod |V_i| / max |V_i|.
    const double cost = static_cast<double>(m) * std::exp(log_cost) / static_cast<double>(max_verts);
    if (cost > product_budget) return false;

    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return slices[a].weight > slices[b].weight; });

    double best = std::numeric_limits<double>::infinity();
    std::vector<double> cur(m, 0.0);
    alloc.assign(m, 0.0);

    for (std::size_t free = 0; free < m; ++free) {
        std::vector<std::size_t> others;
        for (std::size_t i : order)
            if (i != free) others.push_back(i);

        auto dfs = [&](auto&& self, std::size_t depth, double used, double partial) -> void {
            if (used > epsilon + 1e-12 || partial >= best) return;
            if (depth == others.size()) {
                const double rem = epsilon - used;
                double ef = rem / slices[free].weight;
                if (ef < -1e-9 || ef > 1.0 + 1e-9) return;
                ef = std::clamp(ef, 0.0, 1.0);
                const double total = partial + slices[free].weight * slices[free].score.score(ef);
                if (total < best) {
                    best = total;
                    cur[free] = ef;
                    alloc = cur;
                }
                return;
            }
            const std::size_t i = others[depth];
            const auto& verts = slices[i].score.vertices();
            for (std::size_t k = 0; k < verts.size(); ++k) {
                cur[i] = verts[k];
                self(self, depth + 1, used + slices[i].weight * verts[k],
                     partial + slices[i].weight * slices[i].score.vertex_score(k));
            }
        };
        dfs(dfs, 0, 0.0, 0.0);
    }
    return std::isfinite(best);
}

/// Lagrangian pass for large |Y|: walks the per-slice marginal-cost curves
/// (lower convex hulls of the breakpoint scores) steepest-first, then
/// polishes by re-homing the fractional remainder.
inline void solve_greedy(const std::vector<ActiveSlice>& slices, double epsilon,
                         std::vector<double>& alloc) {
    const std::size_t m = slices.size();

    struct Edge {
        double slope;
        std::uint32_t slice;
        double from_v;
        double to_v;
    };
    std::vector<Edge> edges;
    std::vector<std::vector<std::size_t>> hulls(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& v = slices[i].score.vertices();
        auto& hull = hulls[i];
        for (std::size_t k = 0; k < v.size(); ++k) {
            const double x = v[k];
            const double fy = slices[i].score.vertex_score(k);
            while (hull.size() >= 2) {
                const double ax = v[hull[hull.size() - 2]];
                const double ay = slices[i].score.vertex_score(hull[hull.size() - 2]);
                const double bx = v[hull.back()];
                const double by = slices[i].score.vertex_score(hull.back());
                if ((bx - ax) * (fy - ay) - (by - ay) * (x - ax) <= 0.0)
                    hull.pop_back();
                else
                    break;
            }
            hull.push_back(k);
        }
        for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
            const double x0 = v[hull[e]], x1 = v[hull[e + 1]];
            const double y0 = slices[i].score.vertex_score(hull[e]);
            const double y1 = slices[i].score.vertex_score(hull[e + 1]);
            edges.push_back(Edge{(y1 - y0) / (x1 - x0), static_cast<std::uint32_t>(i), x0, x1});
        }
    }
    std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        if (a.slope != b.slope) return a.slope < b.slope;
        if (a.slice != b.slice) return a.slice < b.slice;
        return a.from_v < b.from_v;
    });

    alloc.assign(m, 0.0);
    double budget = epsilon;
    std::size_t frac_slice = m;
    double frac_from = 0.0;
    for (const Edge& e : edges) {
        const double cost = slices[e.slice].weight * (e.to_v - e.from_v);
        if (cost <= budget) {
            alloc[e.slice] = e.to_v;
            budget -= cost;
            if (budget <= 0.0) break;
        } else {
            frac_slice = e.slice;
            frac_from = e.from_v;
            alloc[e.slice] = e.from_v + budget / slices[e.slice].weight;
            budget = 0.0;
            break;
        }
    }

    auto total_of = [&](const std::vector<double>& a) {
        double t = 0.0;
        for (std::size_t i = 0; i < m; ++i) t += slices[i].weight * slices[i].score.score(a[i]);
        return t;
    };

    if (frac_slice == m) return;

    // One re-homing pass over the fractional remainder.
    double best = total_of(alloc);
    std::vector<double> best_alloc = alloc;
    const double moved = (alloc[frac_slice] - frac_from) * slices[frac_slice].weight;
    if (moved > 0.0) {
        std::vector<double> trial = alloc;
        trial[frac_slice] = frac_from;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == frac_slice) continue;
            const double e = trial[i] + moved / slices[i].weight;
            if (e > 1.0 + 1e-12) continue;
            const double saved = trial[i];
            trial[i] = std::min(e, 1.0);
            const double t = total_of(trial);
            if (t < best) {
                best = t;
                best_alloc = trial;
            }
            trial[i] = saved;
        }
    }
    alloc = std::move(best_alloc);
}

inline constexpr double kExactCandidateBudget = 2.5e5;

inline std::vector<double> solve_allocation(const std::vector<ActiveSlice>& slices,
                                            const EntropyQuery& query) {
    std::vector<double> alloc(slices.size(), 0.0);
    if (query.epsilon <= 0.0) return alloc;
    if (!solve_exact(slices, query.epsilon, alloc, kExactCandidateBudget))
        solve_greedy(slices, query.epsilon, alloc);
    return alloc;
}

} // namespace detail

/// Minimizes sum_y P_Y(y) * [sum_i Q*_i^alpha]^{1/alpha} over error budgets
/// (eps_y) with sum_y eps_y P_Y(y) = epsilon, eps_y in [0,1].
inline EntropyResult optimize_allocation(const JointDistribution& joint,
                                         const EntropyQuery& query) {
    auto slices = detail::build_active_slices(joint, query.alpha);
    const std::vector<double> alloc = detail::solve_allocation(slices, query);
    return detail::assemble_result(joint, slices, query, alloc);
}

/// Conditional smooth Renyi entropy of order alpha with budget epsilon, in nats.
inline EntropyResult smooth_conditional_entropy(const JointDistribution& joint,
                                                const EntropyQuery& query) {
    return optimize_allocation(joint, query);
}

/// Unconditional smooth Renyi entropy of a pmf (sorted internally), in nats.
inline double smooth_unconditional_entropy(std::vector<double> pmf, const EntropyQuery& query) {
    if (pmf.empty())
        throw ValidationError("pmf must be nonempty");
    double total = 0.0;
    for (double v : pmf) {
        if (!std::isfinite(v)) throw ValidationError("pmf entries must be finite");
        if (v < 0.0) throw NegativeEntryError("negative probability entry");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw MassDeviationError("pmf mass deviates from 1 by more than 1e-9");
    for (double& v : pmf) v /= total;
    std::stable_sort(pmf.begin(), pmf.end(), std::greater<>());

    SortedConditional slice;
    slice.probs_desc = std::move(pmf);
    slice.order.resize(slice.probs_desc.size());
    const TruncatedSlice q = truncated_q(slice, query.epsilon);
    double g = 0.0;
    for (double v : q.q) g += std::pow(v, query.alpha);
    return std::log(g) / (1.0 - query.alpha);
}

/// Conditional Renyi entropy (the epsilon = 0 case), in nats.
inline double arimoto_conditional_renyi(const JointDistribution& joint, double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw ValidationError("order alpha must lie in (0,1)");
    double sum = 0.0;
    for (std::size_t y = 0; y < joint.y_size(); ++y) {
        double inner = 0.0;
        for (std::size_t x = 0; x < joint.x_size(); ++x) {
            const double p = joint.prob(x, y);
            if (p > 0.0) inner += std::pow(p, alpha);
        }
        if (inner > 0.0) sum += std::pow(inner, 1.0 / alpha);
    }
    return alpha / (1.0 - alpha) * std::log(sum);
}

/// Worst-case-over-y smooth Renyi entropy: minimize the maximum per-slice
/// inner sum over budgets, by bisection on the attained level.
inline double renner_wolf_entropy(const JointDistribution& joint, const EntropyQuery& query) {
    if (joint.x_size() * joint.y_size() > (std::size_t{1} << 22))
        throw InstanceTooLargeError("instance exceeds the min-max search budget");
    auto slices = detail::build_active_slices(joint, query.alpha);
    if (slices.size() == 1)
        return std::log(slices[0].score.inner_sum(query.epsilon)) / (1.0 - query.alpha);
    double t_hi = 0.0;
    for (const auto& s : slices) t_hi = std::max(t_hi, s.score.inner_sum(0.0));
    double level = t_hi;
    if (query.epsilon > 0.0) {
        double lo = 0.0, hi = t_hi;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            double need = 0.0;
            for (const auto& s : slices) need += s.weight * s.score.budget_for_inner_sum(mid);
            if (need <= query.epsilon)
                hi = mid;
            else
                lo = mid;
        }
        level = hi;
    }
    return std::log(level) / (1.0 - query.alpha);
}

/// Exhaustive grid reference for optimize_allocation on up to three active
/// slices: dense per-slice budget grids joined with an exact pass over all
/// breakpoint assignments, the remaining coordinate solved from the budget.
inline EntropyResult oracle_allocation(const JointDistribution& joint, const EntropyQuery& query,
                                       double step) {
    if (!(step >= 1e-5))
        throw InstanceTooLargeError("oracle grid step below the 1e-5 budget");
    auto slices = detail::build_active_slices(joint, query.alpha);
    const std::size_t m = slices.size();
    if (m > 3)
        throw InstanceTooLargeError("oracle limited to three active side-information symbols");

    const double eps = query.epsilon;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_alloc(m, 0.0);
    std::vector<double> trial(m, 0.0);

    auto consider = [&](const std::vector<double>& a) {
        double t = 0.0;
        for (std::size_t i = 0; i < m; ++i) t += slices[i].weight * slices[i].score.score(a[i]);
        if (t < best) {
            best = t;
            best_alloc = a;
        }
    };

    auto grid_for = [&](std::size_t i) {
        std::vector<double> g;
        const double cap = std::min(1.0, eps / slices[i].weight + 1e-12);
        for (double v = 0.0; v <= cap; v += step) g.push_back(v);
        for (double v : slices[i].score.vertices())
            if (v <= cap) g.push_back(v);
        std::sort(g.begin(), g.end());
        g.erase(std::unique(g.begin(), g.end()), g.end());
        return g;
    };

    if (m == 1) {
        trial[0] = eps;
        consider(trial);
    } else if (m == 2) {
        for (double e0 : grid_for(0)) {
            const double rem = eps - slices[0].weight * e0;
            const double e1 = rem / slices[1].weight;
            if (e1 < -1e-12 || e1 > 1.0 + 1e-12) continue;
            trial[0] = e0;
            trial[1] = std::clamp(e1, 0.0, 1.0);
            consider(trial);
        }
        for (double e1 : slices[1].score.vertices()) {
            const double rem = eps - slices[1].weight * e1;
            const double e0 = rem / slices[0].weight;
            if (e0 < -1e-12 || e0 > 1.0 + 1e-12) continue;
            trial[0] = std::clamp(e0, 0.0, 1.0);
            trial[1] = e1;
            consider(trial);
        }
    } else {
        const auto g0 = grid_for(0);
        const auto g1 = grid_for(1);
        std::vector<double> f1tab(g1.size());
        for (std::size_t j = 0; j < g1.size(); ++j)
            f1tab[j] = slices[1].weight * slices[1].score.score(g1[j]);
        const double w1 = slices[1].weight, w2 = slices[2].weight;
        for (double e0 : g0) {
            const double rem0 = eps - slices[0].weight * e0;
            if (rem0 < -1e-12) break;
            const double f0 = slices[0].weight * slices[0].score.score(e0);
            // Smallest e1 keeping the solved coordinate within [0,1].
            const double e1_min = (rem0 - w2) / w1;
            std::size_t j = e1_min <= 0.0
                                ? 0
                                : static_cast<std::size_t>(
                                      std::lower_bound(g1.begin(), g1.end(), e1_min - 1e-12) -
                                      g1.begin());
            for (; j < g1.size(); ++j) {
                const double rem = rem0 - w1 * g1[j];
                if (rem < -1e-12) break;
                const double e2 = std::clamp(rem / w2, 0.0, 1.0);
                const double t = f0 + f1tab[j] + w2 * slices[2].score.score(e2);
                if (t < best) {
                    best = t;
                    best_alloc[0] = e0;
                    best_alloc[1] = g1[j];
                    best_alloc[2] = e2;
                }
            }
        }
        // Breakpoint refinement: all vertex pairs with each slice as the free one.
        for (std::size_t free = 0; free < 3; ++free) {
            const std::size_t a = free == 0 ? 1 : 0;
            const std::size_t b = free == 2 ? 1 : 2;
            for (double ea : slices[a].score.vertices()) {
                for (double eb : slices[b].score.vertices()) {
                    const double rem = eps - slices[a].weight * ea - slices[b].weight * eb;
                    const double ef = rem / slices[free].weight;
                    if (ef < -1e-12 || ef > 1.0 + 1e-12) continue;
                    trial[a] = ea;
                    trial[b] = eb;
                    trial[free] = std::clamp(ef, 0.0, 1.0);
                    consider(trial);
                }
            }
        }
    }
    return detail::assemble_result(joint, slices, query, best_alloc);
}

/// Per-symbol rate (1/n) of the smooth entropy of the n-fold block.
inline double finite_n_rate(const MixtureSource& mix, const EntropyQuery& query, std::size_t n,
                            std::size_t cell_budget = kDefaultCellBudget) {
    const JointDistribution block = mixture_block(mix, n, cell_budget);
    return smooth_conditional_entropy(block, query).value / static_cast<double>(n);
}

} // namespace renyi
