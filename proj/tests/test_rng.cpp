#include <doctest.h>

#include <cmath>

#include "coexlab/rng.hpp"

using coexlab::Rng;

TEST_CASE("same seed reproduces the sequence") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("forked streams differ from parent and each other") {
    Rng root(7);
    Rng f1 = root.fork(1), f2 = root.fork(2);
    CHECK(f1.next_u64() != f2.next_u64());
    Rng f1b = root.fork(1);
    Rng f1c = root.fork(1);
    CHECK(f1b.next_u64() == f1c.next_u64());
}

TEST_CASE("next_below stays in range and covers the range") {
    Rng rng(3);
    bool seen[10] = {};
    for (int i = 0; i < 10000; ++i) {
        const auto v = rng.next_below(10);
        REQUIRE(v < 10);
        seen[v] = true;
    }
    for (bool s : seen) CHECK(s);
}

TEST_CASE("uniform doubles live in [0,1) with mean near one half") {
    Rng rng(11);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double v = rng.next_double();
        REQUIRE(v >= 0.0);
        REQUIRE(v < 1.0);
        sum += v;
    }
    CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("normal draws have the requested moments") {
    Rng rng(13);
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = rng.normal(2.0, 3.0);
        sum += v;
        sq += v * v;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(std::abs(mean - 2.0) < 0.05);
    CHECK(std::abs(var - 9.0) < 0.2);
}

TEST_CASE("exponential inter-arrivals have the requested rate") {
    Rng rng(17);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rng.exponential(50.0);
    CHECK(std::abs(sum / n - 0.02) < 0.001);
}
