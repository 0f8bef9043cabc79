// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "renyi/renyi.hpp"
#include "test_util.hpp"

using namespace renyi;
using Catch::Matchers::WithinAbs;

TEST_CASE("validate_joint accepts a uniform matrix and computes marginals") {
    JointDistribution j = validate_joint({{0.25, 0.25}, {0.25, 0.25}});
    REQUIRE(j.x_size() == 2);
    REQUIRE(j.y_size() == 2);
    REQUIRE_THAT(j.y_marginal(0), WithinAbs(0.5, 1e-15));
    REQUIRE_THAT(j.y_marginal(1), WithinAbs(0.5, 1e-15));
}

TEST_CASE("validate_joint rejects negative entries") {
    REQUIRE_THROWS_AS(validate_joint({{0.5, -0.1}, {0.3, 0.3}}), NegativeEntryError);
}

TEST_CASE("validate_joint rejects large mass deviation") {
    REQUIRE_THROWS_AS(validate_joint({{0.2, 0.2}, {0.2, 0.2}}), MassDeviationError);
}

TEST_CASE("validate_joint renormalizes tiny mass deviation") {
    JointDistribution j = validate_joint({{0.5, 0.25}, {0.25 + 4e-10, 0.0}});
    double total = 0.0;
    for (double v : j.data()) total += v;
    REQUIRE_THAT(total, WithinAbs(1.0, 1e-12));
}

TEST_CASE("sorted_conditional sorts one column by decreasing probability") {
    // P_{X|Y=0} = (0.1, 0.4, 0.3, 0.2)
    JointDistribution j = validate_joint({{0.05, 0.0}, {0.2, 0.1}, {0.15, 0.2}, {0.1, 0.2}});
    SortedConditional s = sorted_conditional(j, 0);
    REQUIRE(s.order == std::vector<std::size_t>{1, 2, 3, 0});
    REQUIRE_THAT(s.probs_desc[0], WithinAbs(0.4, 1e-12));
    REQUIRE_THAT(s.probs_desc[1], WithinAbs(0.3, 1e-12));
    REQUIRE_THAT(s.probs_desc[2], WithinAbs(0.2, 1e-12));
    REQUIRE_THAT(s.probs_desc[3], WithinAbs(0.1, 1e-12));
}

TEST_CASE("sorted_conditional breaks ties by ascending symbol") {
    JointDistribution j = validate_joint({{0.25}, {0.25}, {0.25}, {0.25}});
    SortedConditional s = sorted_conditional(j, 0);
    REQUIRE(s.order == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("sorted_conditional rejects zero-probability side information") {
    JointDistribution j = validate_joint({{0.5, 0.0}, {0.5, 0.0}});
    REQUIRE_THROWS_AS(sorted_conditional(j, 1), ZeroMarginalError);
}

TEST_CASE("conditional entropy of a deterministic coupling is zero") {
    JointDistribution j = validate_joint({{0.5, 0.0}, {0.0, 0.5}});
    REQUIRE_THAT(conditional_entropy(j), WithinAbs(0.0, 1e-15));
}

TEST_CASE("conditional entropy of an independent uniform pair is log 2") {
    JointDistribution j = validate_joint({{0.25, 0.25}, {0.25, 0.25}});
    REQUIRE_THAT(conditional_entropy(j), WithinAbs(std::log(2.0), 1e-14));
}

TEST_CASE("conditional entropy matches the binary-entropy closed form") {
    // P_{X|Y=y} = (0.89, 0.11) for both y
    JointDistribution j = validate_joint({{0.445, 0.445}, {0.055, 0.055}});
    REQUIRE_THAT(conditional_entropy(j), WithinAbs(0.346515336918666, 1e-12));
}

TEST_CASE("single-component block is the product distribution") {
    std::mt19937_64 rng(11);
    JointDistribution c = rt::random_joint(rng, 2, 2);
    MixtureSource mix = make_mixture({c}, {1.0});
    JointDistribution b = mixture_block(mix, 2);
    REQUIRE(b.x_size() == 4);
    REQUIRE(b.y_size() == 4);
    for (std::size_t x1 = 0; x1 < 2; ++x1)
        for (std::size_t x2 = 0; x2 < 2; ++x2)
            for (std::size_t y1 = 0; y1 < 2; ++y1)
                for (std::size_t y2 = 0; y2 < 2; ++y2)
                    REQUIRE_THAT(b.prob(x1 * 2 + x2, y1 * 2 + y2),
                                 WithinAbs(c.prob(x1, y1) * c.prob(x2, y2), 1e-15));
}

TEST_CASE("block of length one is the entrywise mixture") {
    MixtureSource mix = rt::uniform_plus_deterministic();
    JointDistribution b = mixture_block(mix, 1);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            REQUIRE_THAT(b.prob(x, y),
                         WithinAbs(0.5 * mix.components[0].prob(x, y) +
                                       0.5 * mix.components[1].prob(x, y),
                                   1e-15));
}

TEST_CASE("three-fold mixture block matches the per-cell oracle") {
    std::mt19937_64 rng(17);
    JointDistribution c1 = rt::random_joint(rng, 2, 2);
    JointDistribution c2 = rt::random_joint(rng, 2, 2);
    if (conditional_entropy(c1) < conditional_entropy(c2)) std::swap(c1, c2);
    MixtureSource mix = make_mixture({c1, c2}, {0.4, 0.6});
    JointDistribution b = mixture_block(mix, 3);
    for (std::size_t bx = 0; bx < 8; ++bx)
        for (std::size_t by = 0; by < 8; ++by)
            REQUIRE_THAT(b.prob(bx, by), WithinAbs(rt::block_cell_oracle(mix, 3, bx, by), 1e-15));
}

TEST_CASE("oversized blocks are refused") {
    MixtureSource mix = rt::uniform_plus_deterministic();
    REQUIRE_THROWS_AS(mixture_block(mix, 20), BlockTooLargeError);
    REQUIRE_THROWS_AS(mixture_block(mix, 4, 100), BlockTooLargeError);
}

TEST_CASE("mixture validation rejects bad weights and unordered entropies") {
    JointDistribution uni = validate_joint({{0.25, 0.25}, {0.25, 0.25}});
    JointDistribution det = validate_joint({{0.5, 0.0}, {0.0, 0.5}});
    REQUIRE_THROWS_AS(make_mixture({uni, det}, {0.5, 0.4}), MassDeviationError);
    REQUIRE_THROWS_AS(make_mixture({det, uni}, {0.5, 0.5}), ValidationError);
    REQUIRE_THROWS_AS(make_mixture({uni, uni}, {0.5, 0.5}), ValidationError);
}

TEST_CASE("sampling zero draws returns an empty list") {
    REQUIRE(sample(rt::uniform_binary(), 1, 0).empty());
}

TEST_CASE("sampling a point mass repeats the same pair") {
    JointDistribution j = validate_joint({{0.0, 0.0}, {0.0, 1.0}});
    auto draws = sample(j, 99, 5);
    REQUIRE(draws.size() == 5);
    for (auto [x, y] : draws) {
        REQUIRE(x == 1);
        REQUIRE(y == 1);
    }
}

TEST_CASE("sampling frequencies concentrate around the pmf") {
    JointDistribution j = validate_joint({{0.25, 0.25}, {0.25, 0.25}});
    const std::size_t n = 1000000;
    auto draws = sample(j, 2024, n);
    std::size_t counts[2][2] = {};
    for (auto [x, y] : draws) ++counts[x][y];
    const double sigma = rt::binomial_sigma(0.25, static_cast<double>(n));
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y) {
            const double freq = static_cast<double>(counts[x][y]) / static_cast<double>(n);
            REQUIRE(std::abs(freq - 0.25) <= 4.0 * sigma);
        }
}

TEST_CASE("sampling is reproducible for a fixed seed") {
    std::mt19937_64 rng(5);
    JointDistribution j = rt::random_joint(rng, 3, 2);
    REQUIRE(sample(j, 42, 1000) == sample(j, 42, 1000));
}

TEST_CASE("sorted conditionals are bijections with unit mass") {
    std::mt19937_64 rng(31);
    for (int it = 0; it < 30; ++it) {
        JointDistribution j = rt::random_joint(rng, 2 + rng() % 6, 1 + rng() % 4);
        for (std::size_t y = 0; y < j.y_size(); ++y) {
            if (j.y_marginal(y) <= 0.0) continue;
            SortedConditional s = sorted_conditional(j, y);
            std::vector<bool> seen(j.x_size(), false);
            double mass = 0.0;
            for (std::size_t i = 0; i < j.x_size(); ++i) {
                REQUIRE_FALSE(seen[s.order[i]]);
                seen[s.order[i]] = true;
                mass += s.probs_desc[i];
                if (i > 0) REQUIRE(s.probs_desc[i] <= s.probs_desc[i - 1] + 1e-15);
            }
            REQUIRE_THAT(mass, WithinAbs(1.0, 1e-12));
        }
    }
}

TEST_CASE("mixture blocks have unit mass") {
    MixtureSource mix = rt::uniform_plus_deterministic();
    for (std::size_t n = 1; n <= 6; ++n) {
        JointDistribution b = mixture_block(mix, n);
        double total = 0.0;
        for (double v : b.data()) total += v;
        REQUIRE_THAT(total, WithinAbs(1.0, 1e-9));
    }
}

TEST_CASE("conditional entropy is additive over i.i.d. blocks") {
    std::mt19937_64 rng(47);
    JointDistribution c = rt::random_joint(rng, 3, 2);
    MixtureSource mix = make_mixture({c}, {1.0});
    const double h1 = conditional_entropy(c);
    for (std::size_t n = 1; n <= 4; ++n) {
        JointDistribution b = mixture_block(mix, n);
        REQUIRE_THAT(conditional_entropy(b), WithinAbs(static_cast<double>(n) * h1, 1e-9));
    }
}
