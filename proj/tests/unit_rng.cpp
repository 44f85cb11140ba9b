#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pas/rng.hpp"

using namespace pas;

TEST_CASE("identical seeds give identical streams, different seeds do not") {
    RandomStream a(12345), b(12345), c(54321);
    bool all_equal = true, any_equal_c = false;
    for (int i = 0; i < 64; ++i) {
        uint64_t va = a.next_u64(), vb = b.next_u64(), vc = c.next_u64();
        all_equal = all_equal && va == vb;
        any_equal_c = any_equal_c || va == vc;
    }
    CHECK(all_equal);
    CHECK(!any_equal_c);

    RandomStream d1 = RandomStream::derive(9, 1, 2, 3);
    RandomStream d2 = RandomStream::derive(9, 1, 2, 3);
    RandomStream d3 = RandomStream::derive(9, 1, 3, 2);
    CHECK(d1.next_u64() == d2.next_u64());
    CHECK(d1.next_u64() != d3.next_u64());
}

TEST_CASE("binomial sampler: edges, symmetry, and mean") {
    RandomStream rng(7);
    CHECK(rng.binomial(0, 0.4) == 0);
    CHECK(rng.binomial(9, 0.0) == 0);
    CHECK(rng.binomial(9, 1.0) == 9);
    CHECK_THROWS_AS(rng.binomial(-1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(rng.binomial(3, 1.5), std::invalid_argument);

    const int draws = 200000;
    for (double p : {0.12, 0.5, 0.93}) {
        long total = 0;
        for (int d = 0; d < draws; ++d) total += rng.binomial(40, p);
        double mean = static_cast<double>(total) / draws;
        double se = std::sqrt(40 * p * (1 - p) / draws);
        CHECK(std::fabs(mean - 40 * p) < 4 * se);
    }
}

TEST_CASE("poisson sampler splits large rates without bias") {
    RandomStream rng(11);
    CHECK(rng.poisson(0.0) == 0);
    const int draws = 200000;
    for (double lam : {0.3, 38.7853, 650.0}) {
        double sum = 0.0;
        for (int d = 0; d < draws; ++d) sum += rng.poisson(lam);
        double mean = sum / draws;
        double se = std::sqrt(lam / draws);
        CHECK(std::fabs(mean - lam) < 4 * se);
    }
    CHECK_THROWS_AS(rng.poisson(-1.0), std::invalid_argument);
}

TEST_CASE("multinomial splits conserve the total and respect zero weights") {
    RandomStream rng(13);
    std::vector<double> weights = {2.0252, 3.3565, 10.0159, 11.7442, 38.7853};
    for (int t = 0; t < 2000; ++t) {
        int total = static_cast<int>(rng.next_u64() % 80);
        auto counts = rng.multinomial(total, weights);
        int sum = 0;
        for (int v : counts) sum += v;
        CHECK(sum == total);
    }
    std::vector<double> degenerate = {0.0, 1.0, 0.0};
    auto counts = rng.multinomial(17, degenerate);
    CHECK(counts == std::vector<int>{0, 17, 0});

    std::vector<double> zeros = {0.0, 0.0};
    CHECK_THROWS_AS(rng.multinomial(3, zeros), std::invalid_argument);
    CHECK(rng.multinomial(0, zeros) == std::vector<int>{0, 0});
}

TEST_CASE("uniform01 stays inside the half-open unit interval") {
    RandomStream rng(17);
    for (int t = 0; t < 100000; ++t) {
        double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}
