// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: entropy | guess | code | asymptotics | oracle.
// All values are reported in nats unless a display flag says otherwise;
// outputs are byte-identical across runs for a fixed configuration and seed.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "renyi/renyi.hpp"

namespace {

using nlohmann::json;

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw renyi::ValidationError("cannot open output file: " + path);
    out << content;
}

std::string bits_to_hex(const std::string& bits) {
    std::string hex;
    for (std::size_t i = 0; i < bits.size(); i += 4) {
        unsigned v = 0;
        for (std::size_t j = 0; j < 4; ++j) {
            v <<= 1;
            if (i + j < bits.size() && bits[i + j] == '1') v |= 1;
        }
        hex += "0123456789abcdef"[v];
    }
    return hex;
}

std::string hex_to_bits(const std::string& hex, std::size_t bit_len) {
    std::string bits;
    bits.reserve(hex.size() * 4);
    for (char c : hex) {
        unsigned v;
        if (c >= '0' && c <= '9')
            v = static_cast<unsigned>(c - '0');
        else if (c >= 'a' && c <= 'f')
            v = static_cast<unsigned>(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F')
            v = static_cast<unsigned>(c - 'A' + 10);
        else
            throw renyi::ValidationError("invalid hex digit in bitstring record");
        for (int j = 3; j >= 0; --j) bits += (v >> j) & 1 ? '1' : '0';
    }
    if (bit_len > bits.size())
        throw renyi::ValidationError("bit length exceeds hex payload");
    bits.resize(bit_len);
    return bits;
}

struct CommonOpts {
    std::string dist_path;
    std::string mixture_path;
    std::string out_path;
    std::string format = "json";
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 1; // reserved; evaluation is deterministic and single-threaded
};

void add_common(CLI::App* cmd, CommonOpts& c, bool with_mixture = true) {
    cmd->add_option("--dist", c.dist_path, "joint distribution JSON file");
    if (with_mixture) cmd->add_option("--mixture", c.mixture_path, "mixture JSON file");
    cmd->add_option("--out", c.out_path, "output path (default: stdout)");
    cmd->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option_function<std::uint64_t>(
           "--seed",
           [&c](const std::uint64_t& v) {
               c.seed = v;
               c.seed_given = true;
           },
           "random seed for stochastic paths");
    cmd->add_option("--threads", c.threads, "reserved");
}

renyi::JointDistribution require_dist(const CommonOpts& c) {
    if (c.dist_path.empty())
        throw renyi::ValidationError("this invocation requires --dist");
    return renyi::load_joint(c.dist_path);
}

renyi::MixtureSource require_mixture_or_dist(const CommonOpts& c) {
    if (!c.mixture_path.empty()) return renyi::load_mixture(c.mixture_path);
    if (!c.dist_path.empty())
        return renyi::make_mixture({renyi::load_joint(c.dist_path)}, {1.0});
    throw renyi::ValidationError("this invocation requires --mixture or --dist");
}

// ---------------------------------------------------------------------- entropy

int run_entropy(const CommonOpts& c, double alpha, double epsilon, const std::string& variant,
                double step, bool bits) {
    const renyi::JointDistribution joint = require_dist(c);
    json out;
    out["variant"] = variant;
    out["alpha"] = alpha;
    out["epsilon"] = epsilon;

    auto fill_result = [&](const renyi::EntropyResult& r) {
        out["value"] = r.value;
        out["objective"] = r.objective;
        out["allocation"] = r.eps_y;
        out["truncation_index"] = r.truncation_index;
    };

    if (variant == "smooth") {
        fill_result(renyi::smooth_conditional_entropy(joint, renyi::EntropyQuery(alpha, epsilon)));
    } else if (variant == "arimoto") {
        out["value"] = renyi::arimoto_conditional_renyi(joint, alpha);
    } else if (variant == "renner-wolf") {
        out["value"] = renyi::renner_wolf_entropy(joint, renyi::EntropyQuery(alpha, epsilon));
    } else { // oracle
        fill_result(renyi::oracle_allocation(joint, renyi::EntropyQuery(alpha, epsilon), step));
    }
    if (bits) out["value_bits"] = out["value"].get<double>() / std::log(2.0);

    if (c.format == "csv") {
        std::string s = "key,value\n";
        s += "value," + fmt12(out["value"].get<double>()) + "\n";
        if (bits) s += "value_bits," + fmt12(out["value_bits"].get<double>()) + "\n";
        if (out.contains("allocation")) {
            const auto& alloc = out["allocation"];
            const auto& trunc = out["truncation_index"];
            for (std::size_t y = 0; y < alloc.size(); ++y)
                s += "eps_y[" + std::to_string(y) + "]," + fmt12(alloc[y].get<double>()) + "\n" +
                     "truncation[" + std::to_string(y) + "]," +
                     std::to_string(trunc[y].get<std::size_t>()) + "\n";
        }
        write_output(c.out_path, s);
    } else {
        write_output(c.out_path, out.dump(2) + "\n");
    }
    return 0;
}

// ------------------------------------------------------------------------ guess

int run_guess(const CommonOpts& c, double rho, double epsilon, std::optional<double> penalty,
              std::size_t simulate, bool exponent, std::size_t n_max) {
    if (exponent) {
        const renyi::MixtureSource mix = require_mixture_or_dist(c);
        std::vector<std::size_t> ns;
        for (std::size_t n = 1; n <= n_max; ++n) ns.push_back(n);
        const renyi::GuessingExponentCurve curve =
            renyi::guessing_exponent_curve(mix, rho, epsilon, ns);
        if (c.format == "csv") {
            std::string s = "n,exponent,target,p_e,cost,bound_lo,bound_hi\n";
            for (const auto& p : curve.points)
                s += std::to_string(p.n) + "," + fmt12(p.exponent) + "," + fmt12(curve.target) +
                     "," + fmt12(p.error_prob) + "," + fmt12(p.cost) + "," + fmt12(p.bound_lo) +
                     "," + fmt12(p.bound_hi) + "\n";
            write_output(c.out_path, s);
        } else {
            json out;
            out["target"] = curve.target;
            out["regime"] = curve.regime;
            out["points"] = json::array();
            for (const auto& p : curve.points)
                out["points"].push_back({{"n", p.n},
                                         {"exponent", p.exponent},
                                         {"p_e", p.error_prob},
                                         {"cost", p.cost},
                                         {"bound_lo", p.bound_lo},
                                         {"bound_hi", p.bound_hi}});
            write_output(c.out_path, out.dump(2) + "\n");
        }
        return 0;
    }

    const renyi::JointDistribution joint = require_dist(c);
    json out;
    out["rho"] = rho;
    if (penalty) {
        const renyi::PenaltyResult pr = renyi::optimize_with_penalty(joint, rho, *penalty);
        out["epsilon_star"] = pr.epsilon_star;
        out["p_e"] = pr.eval.error_prob;
        out["cost"] = pr.eval.cost;
        out["penalty"] = *penalty;
        out["combined_cost"] = *pr.eval.combined_cost;
    } else {
        const renyi::GuessingStrategy s = renyi::optimal_strategy(joint, rho, epsilon);
        const renyi::GuessEvaluation ev = renyi::evaluate_strategy(s, joint, rho);
        out["epsilon"] = epsilon;
        out["p_e"] = ev.error_prob;
        out["cost"] = ev.cost;
        out["bound_lo"] = renyi::converse_bound(joint, rho, epsilon);
        out["bound_hi"] = std::exp(
            rho * renyi::smooth_conditional_entropy(joint,
                                                    renyi::EntropyQuery(1.0 / (1.0 + rho), epsilon))
                      .value);
        if (simulate > 0) {
            if (!c.seed_given)
                throw renyi::ValidationError("--simulate requires an explicit --seed");
            const renyi::GuessEvaluation emp =
                renyi::simulate_guessing(s, joint, rho, c.seed, simulate);
            out["empirical_p_e"] = emp.error_prob;
            out["empirical_cost"] = emp.cost;
            out["trials"] = simulate;
            out["seed"] = c.seed;
        }
    }
    if (c.format == "csv") {
        std::string s = "key,value\n";
        for (const auto& [k, v] : out.items())
            s += k + "," + (v.is_number_float() ? fmt12(v.get<double>()) : v.dump()) + "\n";
        write_output(c.out_path, s);
    } else {
        write_output(c.out_path, out.dump(2) + "\n");
    }
    return 0;
}

// ------------------------------------------------------------------------- code

int run_code(const CommonOpts& c, double rho, double epsilon, bool emit_codebook,
             const std::string& encode_file, const std::string& decode_file, bool exponent,
             std::size_t n_max) {
    if (exponent) {
        const renyi::MixtureSource mix = require_mixture_or_dist(c);
        std::vector<std::size_t> ns;
        for (std::size_t n = 1; n <= n_max; ++n) ns.push_back(n);
        const renyi::CodingExponentCurve curve =
            renyi::coding_exponent_curve(mix, rho, epsilon, ns);
        if (c.format == "csv") {
            std::string s = "n,exponent,guess_exponent,target,p_e,moment,bound_lo,bound_hi\n";
            for (const auto& p : curve.points)
                s += std::to_string(p.n) + "," + fmt12(p.code_exponent) + "," +
                     fmt12(p.guess_exponent) + "," + fmt12(curve.target) + "," +
                     fmt12(p.error_prob) + "," + fmt12(p.moment) + "," + fmt12(p.bound_lo) + "," +
                     fmt12(p.bound_hi) + "\n";
            write_output(c.out_path, s);
        } else {
            json out;
            out["target"] = curve.target;
            out["regime"] = curve.regime;
            out["points"] = json::array();
            for (const auto& p : curve.points)
                out["points"].push_back({{"n", p.n},
                                         {"exponent", p.code_exponent},
                                         {"guess_exponent", p.guess_exponent},
                                         {"p_e", p.error_prob},
                                         {"moment", p.moment},
                                         {"bound_lo", p.bound_lo},
                                         {"bound_hi", p.bound_hi}});
            write_output(c.out_path, out.dump(2) + "\n");
        }
        return 0;
    }

    const renyi::JointDistribution joint = require_dist(c);
    const renyi::CodeSpec spec = renyi::build_code(joint, rho, epsilon);

    if (emit_codebook) {
        json book;
        book["escape"] = std::string(1, renyi::CodeSpec::kEscapeBit);
        book["payload_prefix"] = std::string(1, renyi::CodeSpec::kPayloadBit);
        book["per_y"] = json::array();
        for (std::size_t y = 0; y < spec.y_size; ++y) {
            json entries = json::array();
            for (const auto& e : spec.table[y])
                entries.push_back({{"symbol", e.symbol},
                                   {"length_bits", e.length_bits},
                                   {"codeword", e.codeword}});
            book["per_y"].push_back({{"y", y}, {"entries", entries}});
        }
        write_output(c.out_path, book.dump(2) + "\n");
        return 0;
    }

    if (!encode_file.empty()) {
        std::ifstream in(encode_file);
        if (!in)
            throw renyi::ValidationError("cannot open input file: " + encode_file);
        std::string line, outbuf;
        std::uint64_t record = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream ls(line);
            std::size_t x, y;
            if (!(ls >> x >> y))
                throw renyi::ValidationError("encode input lines must be 'x y' integers");
            const std::string bits = renyi::encode(spec, x, y, c.seed + record);
            outbuf += std::to_string(y) + " " + std::to_string(bits.size()) + " " +
                      bits_to_hex(bits) + "\n";
            ++record;
        }
        write_output(c.out_path, outbuf);
        return 0;
    }

    if (!decode_file.empty()) {
        std::ifstream in(decode_file);
        if (!in)
            throw renyi::ValidationError("cannot open input file: " + decode_file);
        std::string line, outbuf;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream ls(line);
            std::size_t y, bit_len;
            std::string hex;
            if (!(ls >> y >> bit_len >> hex))
                throw renyi::ValidationError("decode input lines must be 'y bitlen hex'");
            const auto x = renyi::decode(spec, hex_to_bits(hex, bit_len), y);
            outbuf += x ? std::to_string(*x) : std::string("escape");
            outbuf += "\n";
        }
        write_output(c.out_path, outbuf);
        return 0;
    }

    const renyi::CodeEvaluation ev = renyi::evaluate_code(spec, joint, rho);
    json out;
    out["rho"] = rho;
    out["epsilon"] = epsilon;
    out["p_e"] = ev.error_prob;
    out["moment"] = ev.moment;
    const renyi::EntropyResult res = renyi::smooth_conditional_entropy(
        joint, renyi::EntropyQuery(1.0 / (1.0 + rho), epsilon));
    out["bound_lo"] = res.objective;
    out["bound_hi"] =
        std::pow(2.0, 2.0 * rho) * res.objective + epsilon * std::pow(2.0, rho);
    write_output(c.out_path, out.dump(2) + "\n");
    return 0;
}

// ------------------------------------------------------------------ asymptotics

int run_asymptotics(const CommonOpts& c, std::optional<double> alpha, std::optional<double> rho,
                    double epsilon, std::size_t n_max, bool contrast) {
    double a;
    if (alpha)
        a = *alpha;
    else if (rho)
        a = 1.0 / (1.0 + *rho);
    else
        throw renyi::ValidationError("asymptotics requires --alpha or --rho");

    if (contrast) {
        if (!rho)
            throw renyi::ValidationError("--contrast requires --rho");
        const renyi::JointDistribution joint = require_dist(c);
        const renyi::ContrastTable table =
            renyi::vanishing_vs_zero_error_contrast(joint, *rho, epsilon, n_max);
        std::string s = "n,eps_exponent,realized_exponent,zero_error_exponent,shannon_target\n";
        for (const auto& r : table.rows)
            s += std::to_string(r.n) + "," + fmt12(r.eps_exponent) + "," +
                 fmt12(r.realized_exponent) + "," + fmt12(r.zero_error_exponent) + "," +
                 fmt12(r.shannon_target) + "\n";
        write_output(c.out_path, s);
        return 0;
    }

    const renyi::MixtureSource mix = require_mixture_or_dist(c);
    const renyi::ConvergenceReport report =
        renyi::convergence_report(mix, renyi::EntropyQuery(a, epsilon), n_max);
    std::string s = "n,rate,target,gap,lower_bound,sensitivity_rate\n";
    for (const auto& r : report.rows)
        s += std::to_string(r.n) + "," + fmt12(r.rate) + "," + fmt12(r.target) + "," +
             fmt12(r.gap) + "," + fmt12(r.lower_bound) + "," + fmt12(r.sensitivity_rate) + "\n";
    write_output(c.out_path, s);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"smooth Renyi entropy toolkit: guessing with a give-up option and "
                 "error-tolerant prefix coding with common side information"};
    app.require_subcommand(1);

    CommonOpts c_entropy, c_guess, c_code, c_asym, c_oracle;

    double alpha = 0.5, epsilon = 0.0, step = 1e-4;
    std::string variant = "smooth";
    bool bits = false;
    auto* entropy = app.add_subcommand("entropy", "smooth conditional Renyi entropy");
    add_common(entropy, c_entropy, false);
    entropy->add_option("--alpha", alpha, "order in (0,1)")->required();
    entropy->add_option("--epsilon", epsilon, "smoothing budget in [0,1)");
    entropy->add_option("--variant", variant, "evaluation variant")
        ->check(CLI::IsMember({"smooth", "arimoto", "renner-wolf", "oracle"}));
    entropy->add_option("--step", step, "grid step for the oracle variant");
    entropy->add_flag("--bits", bits, "also report the value in bits");

    double g_rho = 1.0, g_eps = 0.0;
    std::optional<double> g_penalty;
    std::size_t g_sim = 0, g_nmax = 6;
    bool g_exp = false;
    auto* guess = app.add_subcommand("guess", "guessing with a give-up option");
    add_common(guess, c_guess);
    guess->add_option("--rho", g_rho, "moment order (positive)")->required();
    guess->add_option("--epsilon", g_eps, "error budget in [0,1)");
    guess->add_option("--penalty", g_penalty, "give-up penalty; optimizes the budget");
    guess->add_option("--simulate", g_sim, "Monte-Carlo trial count");
    guess->add_flag("--exponent", g_exp, "emit the block exponent curve");
    guess->add_option("--n-max", g_nmax, "largest block length for --exponent");

    double d_rho = 1.0, d_eps = 0.0;
    bool d_book = false, d_exp = false;
    std::string d_encode, d_decode;
    std::size_t d_nmax = 6;
    auto* code = app.add_subcommand("code", "variable-length coding with an escape word");
    add_common(code, c_code);
    code->add_option("--rho", d_rho, "moment order (positive)")->required();
    code->add_option("--epsilon", d_eps, "error budget in [0,1)");
    code->add_flag("--emit-codebook", d_book, "emit the canonical codebook JSON");
    code->add_option("--encode-file", d_encode, "encode newline-delimited 'x y' records");
    code->add_option("--decode-file", d_decode, "decode newline-delimited 'y bitlen hex' records");
    code->add_flag("--exponent", d_exp, "emit the block exponent curve");
    code->add_option("--n-max", d_nmax, "largest block length for --exponent");

    std::optional<double> a_alpha, a_rho;
    double a_eps = 0.0;
    std::size_t a_nmax = 8;
    bool a_contrast = false;
    auto* asym = app.add_subcommand("asymptotics", "finite-length convergence reports");
    add_common(asym, c_asym);
    asym->add_option("--alpha", a_alpha, "order in (0,1)");
    asym->add_option("--rho", a_rho, "moment order; implies alpha = 1/(1+rho)");
    asym->add_option("--epsilon", a_eps, "budget in [0,1)");
    asym->add_option("--n-max", a_nmax, "largest block length");
    asym->add_flag("--contrast", a_contrast,
                   "budgeted-vs-zero-budget exponent contrast for one --dist component");

    double o_alpha = 0.5, o_eps = 0.0, o_step = 1e-4;
    auto* oracle = app.add_subcommand("oracle", "exhaustive allocation reference");
    add_common(oracle, c_oracle, false);
    oracle->add_option("--alpha", o_alpha, "order in (0,1)")->required();
    oracle->add_option("--epsilon", o_eps, "budget in [0,1)");
    oracle->add_option("--step", o_step, "grid step (at least 1e-5)");

    try {
        app.parse(argc, argv);
        if (entropy->parsed())
            return run_entropy(c_entropy, alpha, epsilon, variant, step, bits);
        if (guess->parsed())
            return run_guess(c_guess, g_rho, g_eps, g_penalty, g_sim, g_exp, g_nmax);
        if (code->parsed())
            return run_code(c_code, d_rho, d_eps, d_book, d_encode, d_decode, d_exp, d_nmax);
        if (asym->parsed())
            return run_asymptotics(c_asym, a_alpha, a_rho, a_eps, a_nmax, a_contrast);
        if (oracle->parsed())
            return run_entropy(c_oracle, o_alpha, o_eps, "oracle", o_step, false);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << nlohmann::json{{"error", "ValidationError"}, {"message", e.what()}}.dump()
                  << "\n";
        return 1;
    } catch (const renyi::BudgetError& e) {
        std::cerr << nlohmann::json{{"error", "BudgetError"}, {"message", e.what()}}.dump()
                  << "\n";
        return 2;
    } catch (const renyi::Error& e) {
        std::cerr << nlohmann::json{{"error", "ValidationError"}, {"message", e.what()}}.dump()
                  << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", "InternalError"}, {"message", e.what()}}.dump()
                  << "\n";
        return 1;
    }
    return 0;
}
