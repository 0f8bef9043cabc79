// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "renyi/renyi.hpp"
#include "test_util.hpp"

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args) {
    const std::string out_path = "/tmp/renyi_cli_test_out.txt";
    const std::string err_path = "/tmp/renyi_cli_test_err.txt";
    const std::string cmd =
        std::string(RENYI_CLI_PATH) + " " + args + " > " + out_path + " 2> " + err_path;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

const char* kUniformBinary = R"({"x_size":2,"y_size":1,"pxy":[[0.5],[0.5]]})";
const char* kTwoSlice =
    R"({"x_size":4,"y_size":2,"pxy":[[0.20,0.35],[0.15,0.05],[0.10,0.05],[0.05,0.05]]})";

} // namespace

TEST_CASE("entropy subcommand prints the zero-budget value") {
    write_file("/tmp/renyi_cli_dist.json", kTwoSlice);
    RunResult r = run_cli("entropy --alpha 0.5 --epsilon 0 --dist /tmp/renyi_cli_dist.json");
    REQUIRE(r.code == 0);
    nlohmann::json out = nlohmann::json::parse(r.out);
    const double arimoto =
        renyi::arimoto_conditional_renyi(rt::two_slice_example(), 0.5);
    REQUIRE(std::abs(out["value"].get<double>() - arimoto) < 1e-12);
    REQUIRE(out["allocation"].size() == 2);
}

TEST_CASE("entropy variants and bit conversion") {
    write_file("/tmp/renyi_cli_dist.json", kTwoSlice);
    RunResult a = run_cli(
        "entropy --alpha 0.5 --epsilon 0 --variant arimoto --dist /tmp/renyi_cli_dist.json --bits");
    REQUIRE(a.code == 0);
    nlohmann::json out = nlohmann::json::parse(a.out);
    REQUIRE(std::abs(out["value"].get<double>() -
                     out["value_bits"].get<double>() * std::log(2.0)) < 1e-12);
    RunResult rw = run_cli(
        "entropy --alpha 0.5 --epsilon 0.1 --variant renner-wolf --dist /tmp/renyi_cli_dist.json");
    REQUIRE(rw.code == 0);
    RunResult orc = run_cli(
        "entropy --alpha 0.5 --epsilon 0.1 --variant oracle --dist /tmp/renyi_cli_dist.json");
    REQUIRE(orc.code == 0);
}

TEST_CASE("guess subcommand reproduces the worked example") {
    write_file("/tmp/renyi_cli_dist.json", kUniformBinary);
    RunResult r = run_cli("guess --rho 1 --epsilon 0.5 --dist /tmp/renyi_cli_dist.json");
    REQUIRE(r.code == 0);
    nlohmann::json out = nlohmann::json::parse(r.out);
    REQUIRE(std::abs(out["cost"].get<double>() - 0.5) < 1e-10);
    REQUIRE(out["p_e"].get<double>() <= 0.5 + 1e-10);
}

TEST_CASE("malformed input maps to exit code one with a JSON error object") {
    write_file("/tmp/renyi_cli_bad.json", "{not json");
    RunResult r = run_cli("entropy --alpha 0.5 --dist /tmp/renyi_cli_bad.json");
    REQUIRE(r.code == 1);
    nlohmann::json err = nlohmann::json::parse(r.err);
    REQUIRE(err.contains("error"));

    write_file("/tmp/renyi_cli_bad2.json",
               R"({"x_size":2,"y_size":1,"pxy":[[0.5],[0.2]]})");
    RunResult r2 = run_cli("entropy --alpha 0.5 --dist /tmp/renyi_cli_bad2.json");
    REQUIRE(r2.code == 1);
}

TEST_CASE("budget refusals map to exit code two") {
    // four active side-information symbols exceed the oracle's limit
    write_file("/tmp/renyi_cli_wide.json",
               R"({"x_size":2,"y_size":4,"pxy":[[0.125,0.125,0.125,0.125],[0.125,0.125,0.125,0.125]]})");
    RunResult r = run_cli(
        "entropy --alpha 0.5 --epsilon 0.1 --variant oracle --dist /tmp/renyi_cli_wide.json");
    REQUIRE(r.code == 2);
    nlohmann::json err = nlohmann::json::parse(r.err);
    REQUIRE(err["error"] == "BudgetError");
}

TEST_CASE("outputs are byte-identical across reruns") {
    write_file("/tmp/renyi_cli_dist.json", kTwoSlice);
    const std::string cmd =
        "entropy --alpha 0.5 --epsilon 0.1 --dist /tmp/renyi_cli_dist.json --format csv";
    RunResult a = run_cli(cmd);
    RunResult b = run_cli(cmd);
    REQUIRE(a.code == 0);
    REQUIRE(a.out == b.out);
    REQUIRE(!a.out.empty());

    const std::string sim =
        "guess --rho 1 --epsilon 0.2 --dist /tmp/renyi_cli_dist.json --simulate 20000 --seed 7";
    RunResult c = run_cli(sim);
    RunResult d = run_cli(sim);
    REQUIRE(c.code == 0);
    REQUIRE(c.out == d.out);
}

TEST_CASE("codebooks are stable and file round-trips recover the input") {
    write_file("/tmp/renyi_cli_dist.json", kTwoSlice);
    RunResult book1 = run_cli("code --rho 1 --epsilon 0 --dist /tmp/renyi_cli_dist.json "
                              "--emit-codebook");
    RunResult book2 = run_cli("code --rho 1 --epsilon 0 --dist /tmp/renyi_cli_dist.json "
                              "--emit-codebook");
    REQUIRE(book1.code == 0);
    REQUIRE(book1.out == book2.out);
    nlohmann::json book = nlohmann::json::parse(book1.out);
    REQUIRE(book["per_y"].size() == 2);
    REQUIRE(book["per_y"][0]["entries"].size() == 4);

    // encode records, then decode them back (zero budget: no escapes)
    std::string records;
    for (std::size_t x = 0; x < 4; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            records += std::to_string(x) + " " + std::to_string(y) + "\n";
    write_file("/tmp/renyi_cli_records.txt", records);
    RunResult enc = run_cli("code --rho 1 --epsilon 0 --dist /tmp/renyi_cli_dist.json "
                            "--encode-file /tmp/renyi_cli_records.txt --seed 3 "
                            "--out /tmp/renyi_cli_encoded.txt");
    REQUIRE(enc.code == 0);
    RunResult dec = run_cli("code --rho 1 --epsilon 0 --dist /tmp/renyi_cli_dist.json "
                            "--decode-file /tmp/renyi_cli_encoded.txt");
    REQUIRE(dec.code == 0);
    std::istringstream lines(dec.out);
    std::string line;
    std::size_t idx = 0;
    while (std::getline(lines, line)) {
        REQUIRE(line == std::to_string(idx / 2));
        ++idx;
    }
    REQUIRE(idx == 8);
}

TEST_CASE("exponent curves and convergence reports emit CSV tables") {
    write_file("/tmp/renyi_cli_mix.json",
               R"({"weights":[0.5,0.5],"components":[)"
               R"({"x_size":2,"y_size":2,"pxy":[[0.25,0.25],[0.25,0.25]]},)"
               R"({"x_size":2,"y_size":2,"pxy":[[0.5,0.0],[0.0,0.5]]}]})");
    RunResult g = run_cli("guess --rho 1 --epsilon 0.25 --mixture /tmp/renyi_cli_mix.json "
                          "--exponent --n-max 3 --format csv");
    REQUIRE(g.code == 0);
    REQUIRE(g.out.rfind("n,exponent,target,p_e,cost,bound_lo,bound_hi\n", 0) == 0);

    RunResult c = run_cli("code --rho 1 --epsilon 0.25 --mixture /tmp/renyi_cli_mix.json "
                          "--exponent --n-max 3");
    REQUIRE(c.code == 0);

    RunResult a = run_cli("asymptotics --alpha 0.5 --epsilon 0.25 "
                          "--mixture /tmp/renyi_cli_mix.json --n-max 4");
    REQUIRE(a.code == 0);
    REQUIRE(a.out.rfind("n,rate,target,gap,lower_bound,sensitivity_rate\n", 0) == 0);
    std::size_t rows = 0;
    for (char ch : a.out)
        if (ch == '\n') ++rows;
    REQUIRE(rows == 5);

    write_file("/tmp/renyi_cli_bern.json", R"({"x_size":2,"y_size":1,"pxy":[[0.89],[0.11]]})");
    RunResult k = run_cli("asymptotics --rho 1 --epsilon 0.1 --contrast "
                          "--dist /tmp/renyi_cli_bern.json --n-max 3");
    REQUIRE(k.code == 0);
    REQUIRE(k.out.rfind("n,eps_exponent,realized_exponent,zero_error_exponent,shannon_target\n",
                        0) == 0);
}

TEST_CASE("oracle subcommand mirrors the entropy oracle variant") {
    write_file("/tmp/renyi_cli_dist.json", kTwoSlice);
    RunResult a = run_cli("oracle --alpha 0.5 --epsilon 0.1 --dist /tmp/renyi_cli_dist.json");
    RunResult b = run_cli(
        "entropy --alpha 0.5 --epsilon 0.1 --variant oracle --dist /tmp/renyi_cli_dist.json");
    REQUIRE(a.code == 0);
    nlohmann::json ja = nlohmann::json::parse(a.out);
    nlohmann::json jb = nlohmann::json::parse(b.out);
    REQUIRE(ja["value"] == jb["value"]);
}

TEST_CASE("missing required inputs fail with exit code one") {
    RunResult r = run_cli("entropy --alpha 0.5");
    REQUIRE(r.code == 1);
    RunResult r2 = run_cli("guess --rho 1 --exponent");
    REQUIRE(r2.code == 1);
    write_file("/tmp/renyi_cli_dist.json", kUniformBinary);
    RunResult r3 = run_cli("guess --rho 1 --dist /tmp/renyi_cli_dist.json --simulate 100");
    REQUIRE(r3.code == 1);
    RunResult r4 = run_cli("entropy --alpha 1.5 --dist /tmp/renyi_cli_dist.json");
    REQUIRE(r4.code == 1);
}
