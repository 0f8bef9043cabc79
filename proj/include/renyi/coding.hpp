// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "renyi/distribution.hpp"
#include "renyi/errors.hpp"
#include "renyi/random.hpp"
#include "renyi/smooth_entropy.hpp"

namespace renyi {

struct CodeEntry {
    std::size_t symbol = 0;      // source symbol x
    double gamma = 0.0;          // acceptance probability
    std::size_t length_bits = 0; // payload codeword length
    std::string codeword;        // canonical payload bits, '0'/'1'
};

/// Per-y prefix code with a stochastic escape: symbol x is sent as
/// "0" + codeword with probability gamma_xy and as the 1-bit escape "1"
/// otherwise.  Payload codewords are canonical (sorted by length, then
/// symbol), so emitted bitstreams are stable across runs.
struct CodeSpec {
    std::size_t x_size = 0;
    std::size_t y_size = 0;
    std::vector<std::vector<CodeEntry>> table; // per y, canonical order
    std::vector<std::vector<std::int64_t>> entry_of; // per y: x -> table index or -1
    std::vector<std::unordered_map<std::string, std::size_t>> decode_map;

    static constexpr char kEscapeBit = '1';
    static constexpr char kPayloadBit = '0';
};

namespace detail {

/// Exact Kraft feasibility over lengths: tracks remaining codeword slots per
/// level in saturating integer arithmetic.
inline bool kraft_feasible(std::vector<std::size_t> lengths) {
    if (lengths.empty()) return true;
    std::sort(lengths.begin(), lengths.end());
    constexpr std::uint64_t kCap = std::uint64_t{1} << 62;
    std::uint64_t slots = 1;
    std::size_t level = 0, i = 0;
    while (i < lengths.size()) {
        while (level < lengths[i]) {
            slots = std::min(kCap, slots * 2);
            ++level;
        }
        std::uint64_t n = 0;
        while (i < lengths.size() && lengths[i] == level) { ++n; ++i; }
        if (n > slots) return false;
        slots -= n;
    }
    return true;
}

inline std::string increment_bits(std::string bits) {
    for (std::size_t i = bits.size(); i-- > 0;) {
        if (bits[i] == '0') {
            bits[i] = '1';
            return bits;
        }
        bits[i] = '0';
    }
    throw Error("canonical codeword counter overflow");
}

/// Canonical codeword assignment for entries sorted by (length, symbol).
inline void assign_canonical(std::vector<CodeEntry>& entries) {
    std::string code;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i == 0) {
            code.assign(entries[0].length_bits, '0');
        } else {
            code = increment_bits(std::move(code));
            code.append(entries[i].length_bits - entries[i - 1].length_bits, '0');
        }
        entries[i].codeword = code;
    }
}

inline void index_code(CodeSpec& spec) {
    spec.entry_of.assign(spec.y_size, std::vector<std::int64_t>(spec.x_size, -1));
    spec.decode_map.assign(spec.y_size, {});
    for (std::size_t y = 0; y < spec.y_size; ++y)
        for (std::size_t i = 0; i < spec.table[y].size(); ++i) {
            spec.entry_of[y][spec.table[y][i].symbol] = static_cast<std::int64_t>(i);
            spec.decode_map[y][spec.table[y][i].codeword] = spec.table[y][i].symbol;
        }
}

} // namespace detail

/// Builds the escape code realizing the error budget: acceptance
/// probabilities from the optimal truncation and Shannon-style lengths for
/// the tilted kept distribution at order 1/(1+rho).
inline CodeSpec build_code(const JointDistribution& joint, double rho, double epsilon) {
    if (!(rho > 0.0))
        throw ValidationError("moment order rho must be positive");
    const double alpha = 1.0 / (1.0 + rho);
    const EntropyQuery query(alpha, epsilon);
    const EntropyResult res = optimize_allocation(joint, query);

    CodeSpec spec;
    spec.x_size = joint.x_size();
    spec.y_size = joint.y_size();
    spec.table.resize(joint.y_size());

    for (std::size_t y = 0; y < joint.y_size(); ++y) {
        if (joint.y_marginal(y) <= 0.0) continue;
        const SortedConditional sorted = sorted_conditional(joint, y);
        const TruncatedSlice& ts = res.slices[y];

        std::vector<double> powq(ts.kept, 0.0);
        double tilt_norm = 0.0;
        for (std::size_t i = 0; i < ts.kept; ++i) {
            if (ts.q[i] > 0.0) powq[i] = std::pow(ts.q[i], alpha);
            tilt_norm += powq[i];
        }

        auto& entries = spec.table[y];
        for (std::size_t i = 0; i < ts.kept; ++i) {
            if (powq[i] <= 0.0) continue;
            const double tilted = powq[i] / tilt_norm;
            std::size_t len = 0;
            const double raw = -std::log2(tilted);
            if (raw > 0.0) {
                len = static_cast<std::size_t>(std::ceil(raw));
                while (len > 0 && std::ldexp(1.0, -static_cast<int>(len - 1)) <= tilted) --len;
                while (std::ldexp(1.0, -static_cast<int>(len)) > tilted) ++len;
            }
            CodeEntry e;
            e.symbol = sorted.order[i];
            e.gamma = std::clamp(ts.q[i] / sorted.probs_desc[i], 0.0, 1.0);
            e.length_bits = len;
            entries.push_back(e);
        }
        std::stable_sort(entries.begin(), entries.end(), [](const CodeEntry& a, const CodeEntry& b) {
            if (a.length_bits != b.length_bits) return a.length_bits < b.length_bits;
            return a.symbol < b.symbol;
        });
        {
            std::vector<std::size_t> lens;
            lens.reserve(entries.size());
            for (const auto& e : entries) lens.push_back(e.length_bits);
            while (!detail::kraft_feasible(lens)) {
                // Rounding backstop: lengthen the longest codeword.
                const std::size_t worst = static_cast<std::size_t>(
                    std::max_element(lens.begin(), lens.end()) - lens.begin());
                ++lens[worst];
                ++entries[worst].length_bits;
            }
        }
        detail::assign_canonical(entries);
    }
    detail::index_code(spec);
    return spec;
}

/// Emits "0" + codeword with probability gamma, else the escape "1".
/// Symbols outside the kept set always escape.
inline std::string encode(const CodeSpec& spec, std::size_t x, std::size_t y,
                          std::uint64_t seed) {
    if (x >= spec.x_size || y >= spec.y_size)
        throw AlphabetMismatchError("symbol outside the code alphabet");
    const std::int64_t idx = spec.entry_of[y][x];
    if (idx < 0) return std::string(1, CodeSpec::kEscapeBit);
    const CodeEntry& e = spec.table[y][static_cast<std::size_t>(idx)];
    if (e.gamma < 1.0) {
        std::mt19937_64 rng(seed);
        if (!(uniform53(rng) < e.gamma)) return std::string(1, CodeSpec::kEscapeBit);
    }
    std::string out(1, CodeSpec::kPayloadBit);
    out += e.codeword;
    return out;
}

/// Exact inverse on payload bitstrings; nullopt on the escape word.
inline std::optional<std::size_t> decode(const CodeSpec& spec, const std::string& bits,
                                         std::size_t y) {
    if (y >= spec.y_size)
        throw AlphabetMismatchError("side-information symbol outside the code alphabet");
    if (bits.size() == 1 && bits[0] == CodeSpec::kEscapeBit) return std::nullopt;
    if (bits.empty() || bits[0] != CodeSpec::kPayloadBit)
        throw MalformedBitstringError("bitstring is neither escape nor payload");
    const auto it = spec.decode_map[y].find(bits.substr(1));
    if (it == spec.decode_map[y].end())
        throw MalformedBitstringError("payload is not a codeword for this side information");
    return it->second;
}

struct CodeEvaluation {
    double error_prob = 0.0;
    double moment = 0.0;
    std::vector<double> per_y_moment;
};

/// Analytic error probability and exponential length moment (lengths in
/// nats, including the escape path).
inline CodeEvaluation evaluate_code(const CodeSpec& spec, const JointDistribution& joint,
                                    double rho) {
    if (!(rho > 0.0))
        throw ValidationError("moment order rho must be positive");
    if (spec.x_size != joint.x_size() || spec.y_size != joint.y_size())
        throw AlphabetMismatchError("code and joint alphabets differ");
    CodeEvaluation out;
    out.per_y_moment.assign(spec.y_size, 0.0);
    const double escape_factor = std::pow(2.0, rho); // exp(rho * 1 bit)
    double kept = 0.0;
    for (std::size_t y = 0; y < spec.y_size; ++y) {
        double my = 0.0;
        for (std::size_t x = 0; x < spec.x_size; ++x) {
            const double p = joint.prob(x, y);
            if (p <= 0.0) continue;
            const std::int64_t idx = spec.entry_of[y][x];
            double gamma = 0.0, len_bits = 0.0;
            if (idx >= 0) {
                const CodeEntry& e = spec.table[y][static_cast<std::size_t>(idx)];
                gamma = e.gamma;
                len_bits = static_cast<double>(e.length_bits);
            }
            kept += gamma * p;
            my += p * (gamma * std::pow(2.0, rho * (1.0 + len_bits)) +
                       (1.0 - gamma) * escape_factor);
        }
        out.per_y_moment[y] = my;
        out.moment += my;
    }
    out.error_prob = 1.0 - kept;
    return out;
}

inline double code_error_probability(const CodeSpec& spec, const JointDistribution& joint) {
    if (spec.x_size != joint.x_size() || spec.y_size != joint.y_size())
        throw AlphabetMismatchError("code and joint alphabets differ");
    double kept = 0.0;
    for (std::size_t y = 0; y < spec.y_size; ++y)
        for (const CodeEntry& e : spec.table[y]) kept += e.gamma * joint.prob(e.symbol, y);
    return 1.0 - kept;
}

inline double code_moment(const CodeSpec& spec, const JointDistribution& joint, double rho) {
    return evaluate_code(spec, joint, rho).moment;
}

/// Real-valued length assignment meeting the moment lower bound with
/// per-slice Kraft equality; lengths in nats.
struct ConverseProfile {
    std::vector<std::vector<std::pair<std::size_t, double>>> lengths; // per y: (symbol, nats)
    double idealized_moment = 0.0;
};

inline ConverseProfile converse_length_profile(const JointDistribution& joint, double rho,
                                               double epsilon) {
    if (!(rho > 0.0))
        throw ValidationError("moment order rho must be positive");
    const double alpha = 1.0 / (1.0 + rho);
    const EntropyQuery query(alpha, epsilon);
    const EntropyResult res = optimize_allocation(joint, query);
    ConverseProfile out;
    out.lengths.resize(joint.y_size());
    for (std::size_t y = 0; y < joint.y_size(); ++y) {
        const double py = joint.y_marginal(y);
        if (py <= 0.0) continue;
        const SortedConditional sorted = sorted_conditional(joint, y);
        const TruncatedSlice& ts = res.slices[y];
        std::vector<double> powq(ts.kept, 0.0);
        double tilt_norm = 0.0;
        for (std::size_t i = 0; i < ts.kept; ++i) {
            if (ts.q[i] > 0.0) powq[i] = std::pow(ts.q[i], alpha);
            tilt_norm += powq[i];
        }
        double contrib = 0.0;
        for (std::size_t i = 0; i < ts.kept; ++i) {
            if (powq[i] <= 0.0) continue;
            const double len = -std::log(powq[i] / tilt_norm);
            out.lengths[y].emplace_back(sorted.order[i], len);
            contrib += ts.q[i] * std::exp(rho * len);
        }
        out.idealized_moment += py * contrib;
    }
    return out;
}

struct CodingExponentPoint {
    std::size_t n = 0;
    double code_exponent = 0.0;
    double guess_exponent = 0.0;
    double moment = 0.0;
    double error_prob = 0.0;
    double bound_lo = 0.0;
    double bound_hi = 0.0;
};

struct CodingExponentCurve {
    std::vector<CodingExponentPoint> points;
    std::size_t regime = 0;
    double target = 0.0; // rho * H(X_i|Y_i), shared by guessing and coding
};

/// Normalized log-moment of block codes, with the guessing exponent of the
/// same blocks reported alongside so the shared limit is visible.
inline CodingExponentCurve coding_exponent_curve(const MixtureSource& mix, double rho,
                                                 double epsilon,
                                                 const std::vector<std::size_t>& n_list,
                                                 std::size_t cell_budget = kDefaultCellBudget) {
    if (!(rho > 0.0))
        throw ValidationError("moment order rho must be positive");
    CodingExponentCurve curve;
    curve.regime = mix.component_for(epsilon);
    curve.target = rho * mix.component_cond_entropies[curve.regime];
    const EntropyQuery query(1.0 / (1.0 + rho), epsilon);
    for (std::size_t n : n_list) {
        const JointDistribution block = mixture_block(mix, n, cell_budget);
        const EntropyResult res = optimize_allocation(block, query);
        const CodeSpec spec = build_code(block, rho, epsilon);
        const CodeEvaluation ev = evaluate_code(spec, block, rho);
        CodingExponentPoint pt;
        pt.n = n;
        pt.moment = ev.moment;
        pt.error_prob = ev.error_prob;
        pt.code_exponent = std::log(ev.moment) / static_cast<double>(n);
        pt.bound_lo = res.objective;
        pt.bound_hi = std::pow(2.0, 2.0 * rho) * res.objective +
                      epsilon * std::pow(2.0, rho);
        const GuessingStrategy s = detail::cost_greedy_strategy(block, epsilon);
        pt.guess_exponent = std::log(expected_cost(s, block, rho)) / static_cast<double>(n);
        curve.points.push_back(pt);
    }
    return curve;
}

} // namespace renyi
