#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "obcs/ensembles.hpp"

using namespace obcs;

TEST_CASE("empty matrices") {
    const auto G = gen_gaussian_matrix({1, 0}, 0, 5);
    CHECK(G.m == 0);
    CHECK(G.n == 5);
    CHECK(G.entries.empty());
    CHECK(gen_rademacher_matrix({1, 0}, 0, 3).entries.empty());
}

TEST_CASE("determinism: same spec, same output") {
    const RngSpec spec{0xDEADBEEF, 7};
    const auto A = gen_gaussian_matrix(spec, 8, 8);
    const auto B = gen_gaussian_matrix(spec, 8, 8);
    CHECK(A.entries == B.entries);
    CHECK(A.seed == spec.seed);

    const auto R1 = gen_rademacher_matrix(spec, 8, 8);
    const auto R2 = gen_rademacher_matrix(spec, 8, 8);
    CHECK(R1.entries == R2.entries);
}

TEST_CASE("different seed or stream changes output") {
    const auto A = gen_gaussian_matrix({1, 0}, 4, 4);
    const auto B = gen_gaussian_matrix({2, 0}, 4, 4);
    const auto C = gen_gaussian_matrix({1, 1}, 4, 4);
    CHECK(A.entries != B.entries);
    CHECK(A.entries != C.entries);
}

TEST_CASE("uniform output lies in (0, 1]") {
    SplitMix64 g({123, 0});
    for (int i = 0; i < 10000; ++i) {
        const double u = g.next_uniform();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
    }
}

TEST_CASE("gaussian sample moments") {
    const auto A = gen_gaussian_matrix({2024, 0}, 1000, 1);
    const double mean =
        std::accumulate(A.entries.begin(), A.entries.end(), 0.0) / A.entries.size();
    double var = 0.0;
    for (double e : A.entries) var += (e - mean) * (e - mean);
    var /= A.entries.size() - 1;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(1000.0));
    CHECK(var > 0.8);
    CHECK(var < 1.2);
}

TEST_CASE("rademacher codomain and balance") {
    const auto A = gen_rademacher_matrix({55, 0}, 1, 10000);
    std::size_t plus = 0;
    for (double e : A.entries) {
        CHECK((e == 1.0 || e == -1.0));
        if (e == 1.0) ++plus;
    }
    const double frac = static_cast<double>(plus) / A.entries.size();
    CHECK(frac > 0.48);
    CHECK(frac < 0.52);
}

TEST_CASE("derive_substream determinism and distinctness") {
    const RngSpec base{99, 3};
    CHECK(derive_substream(base, 5) == derive_substream(base, 5));
    CHECK(derive_substream(base, 0) != derive_substream(base, 1));

    SplitMix64 a(derive_substream(base, 0));
    SplitMix64 b(derive_substream(base, 1));
    bool differ = false;
    for (int i = 0; i < 4 && !differ; ++i) differ = (a.next_u64() != b.next_u64());
    CHECK(differ);
}

TEST_CASE("substreams make aggregates order-independent") {
    const RngSpec base{7, 0};
    const std::uint64_t trials = 200;

    auto run = [&](const std::vector<std::uint64_t>& order) {
        double total = 0.0;
        std::uint64_t hits = 0;
        for (std::uint64_t t : order) {
            SplitMix64 g(derive_substream(base, t));
            const double z = g.next_gaussian();
            total += z;
            if (std::abs(z) < 1.0) ++hits;
        }
        return std::pair{total, hits};
    };

    std::vector<std::uint64_t> forward(trials), backward(trials);
    std::iota(forward.begin(), forward.end(), 0);
    backward = forward;
    std::reverse(backward.begin(), backward.end());

    // hit counts are exactly order-independent; the sum is compared loosely
    // because floating addition is not associative
    const auto [sum_f, hits_f] = run(forward);
    const auto [sum_b, hits_b] = run(backward);
    CHECK(hits_f == hits_b);
    CHECK(sum_f == doctest::Approx(sum_b).epsilon(1e-12));
}

TEST_CASE("gen_matrix dispatch") {
    CHECK(gen_matrix({1, 0}, 2, 3, Ensemble::gaussian).ensemble == Ensemble::gaussian);
    CHECK(gen_matrix({1, 0}, 2, 3, Ensemble::rademacher).ensemble == Ensemble::rademacher);
    CHECK_THROWS_AS(gen_matrix({1, 0}, 2, 3, Ensemble::explicit_matrix), std::invalid_argument);
}

TEST_CASE("gen_vectors matches the entry stream layout") {
    const RngSpec spec{31, 4};
    const auto V = gen_vectors(spec, 3, 5, Ensemble::gaussian);
    const auto A = gen_gaussian_matrix(spec, 3, 5);
    REQUIRE(V.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 5; ++j) CHECK(V[i][j] == A.at(i, j));
}
