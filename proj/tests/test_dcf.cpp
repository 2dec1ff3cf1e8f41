#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "coexlab/sim/dcf.hpp"

using namespace coexlab;
using namespace coexlab::sim;

TEST_CASE("stage 0 draws are uniform over [0, 15]") {
    Rng rng(1);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto v = draw_backoff(0, 16, rng);
        REQUIRE(v < 16);
        sum += static_cast<double>(v);
    }
    CHECK(std::abs(sum / n - 7.5) < 0.05);
}

TEST_CASE("stage 2 widens the window to [0, 63]") {
    Rng rng(2);
    bool seen_high = false;
    for (int i = 0; i < 20000; ++i) {
        const auto v = draw_backoff(2, 16, rng);
        REQUIRE(v < 64);
        if (v >= 48) seen_high = true;
    }
    CHECK(seen_high);
}

TEST_CASE("fixed seed gives an identical sequence") {
    Rng a(99), b(99);
    for (int i = 0; i < 50; ++i) CHECK(draw_backoff(1, 16, a) == draw_backoff(1, 16, b));
}

TEST_CASE("stage beyond m is an invalid-stage error") {
    Rng rng(1);
    CHECK_THROWS_AS(draw_backoff(7, 16, rng, 6), std::invalid_argument);
    CHECK_THROWS_AS(draw_backoff(-1, 16, rng), std::invalid_argument);
}

TEST_CASE("counter legality: draws never reach 2^i * W0") {
    Rng rng(5);
    for (int stage = 0; stage <= 6; ++stage) {
        const std::uint64_t bound = 16ULL << stage;
        for (int i = 0; i < 2000; ++i) REQUIRE(draw_backoff(stage, 16, rng) < bound);
    }
}
