#include <doctest.h>

#include "page_entropy/dimensions.hpp"

using namespace page_entropy;

TEST_CASE("small sector dimensions") {
    const auto s1 = catalog("spin_j", 1);
    CHECK(dim_fixed_n(s1, 4, 4) == BigDim(19));
    CHECK(dim_fixed_n(s1, 3, 3) == BigDim(7));
    CHECK(dim_fixed_n(s1, 8, 12) == BigDim(266));
    CHECK(dim_fixed_n(s1, 16, 24) == BigDim(258570));
    CHECK(dim_fixed_n(s1, 3, 7) == BigDim(0));
    CHECK(dim_fixed_n(catalog("bosons"), 3, 2) == BigDim(6));
    const auto t = dim_table(catalog("hardcore_bosons_2species"), 2, 4);
    CHECK(t.at(0) == BigDim(1));
    CHECK(t.at(1) == BigDim(4));
    CHECK(t.at(2) == BigDim(4));
    CHECK(t.at(3) == BigDim(0));
    CHECK(t.at(40) == BigDim(0));
    CHECK(dim_table(catalog("fermions"), 4, 4).to_csv() == "N,d_N\n0,1\n1,4\n2,6\n3,4\n4,1\n");
}

TEST_CASE("closed forms") {
    for (std::size_t V = 1; V <= 12; ++V)
        for (std::size_t N = 0; N <= V; ++N) CHECK(dim_fixed_n(catalog("fermions"), V, N) == binomial(V, N));
    for (std::size_t V = 1; V <= 8; ++V)
        for (std::size_t N = 0; N <= 10; ++N) CHECK(dim_fixed_n(catalog("bosons"), V, N) == binomial(N + V - 1, N));
    for (std::size_t nmax : {1u, 2u, 3u})
        for (std::size_t V = 1; V <= 9; ++V)
            for (std::size_t N = 0; N <= V * nmax + 2; ++N)
                CHECK(dim_fixed_n(catalog("capped_bosons", double(nmax)), V, N) == extended_binomial_closed(V, N, nmax));
    CHECK(distinguishable_dim(3, 4) == BigDim(81));
}

TEST_CASE("convolution identity and palindromes") {
    const auto models = {catalog("spin_j", 1), catalog("bosons"), parse_model("[1,2,1]"),
                         parse_model("product(fermions,bosons)")};
    for (const auto& m : models) {
        for (std::size_t V = 2; V <= 9; ++V)
            for (std::size_t VA = 1; VA < V; ++VA) {
                const auto a = dim_table(m, VA, 14), b = dim_table(m, V - VA, 14), full = dim_table(m, V, 14);
                for (std::size_t N = 0; N <= 14; ++N) {
                    BigDim sum;
                    for (std::size_t k = 0; k <= N; ++k) sum = sum + a.at(k) * b.at(N - k);
                    CHECK(sum == full.at(N));
                }
            }
    }
    const auto s1 = catalog("spin_j", 1);
    for (std::size_t V = 1; V <= 10; ++V) {
        const auto t = dim_table(s1, V, 2 * V);
        for (std::size_t N = 0; N <= 2 * V; ++N) CHECK(t.at(N) == t.at(2 * V - N));
    }
}

TEST_CASE("ladder matches direct tables") {
    const auto m = parse_model("[1,2,1]");
    const auto ladder = dim_ladder(m, 7, 9);
    REQUIRE(ladder.size() == 8);
    for (std::size_t v = 0; v <= 7; ++v) CHECK(ladder[v].entries == dim_table(m, v, 9).entries);
}
