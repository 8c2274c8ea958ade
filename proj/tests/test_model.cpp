#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>

#include "idg/error.hpp"
#include "idg/io.hpp"
#include "idg/model.hpp"
#include "idg/rng.hpp"
#include "test_support.hpp"

using namespace idg;
using namespace idg::testsupport;

namespace {

std::vector<int> mask_to_pool(std::uint32_t mask, int n) {
    std::vector<int> pool;
    for (int i = 0; i < n; ++i)
        if (mask >> i & 1) pool.push_back(i);
    return pool;
}

}  // namespace

TEST_CASE("worked example pools") {
    const auto graph = example3_graph();
    CHECK(outcome(graph, std::vector<int>{0, 1, 4}) == 0);  // inhibited defective only
    CHECK(outcome(graph, std::vector<int>{1, 3}) == 1);
    CHECK(outcome(graph, std::vector<int>{2, 3, 4}) == 0);
}

TEST_CASE("pool without defectives is negative") {
    const auto graph = example3_graph();
    CHECK(outcome(graph, std::vector<int>{}) == 0);
    CHECK(outcome(graph, std::vector<int>{0, 2, 4}) == 0);
}

TEST_CASE("outcome rejects out-of-range items") {
    const auto graph = example3_graph();
    CHECK_THROWS_AS((void)outcome(graph, std::vector<int>{5}), Error);
    CHECK_THROWS_AS((void)outcome(graph, std::vector<int>{-1}), Error);
}

TEST_CASE("complete association reduces to defective-and-no-inhibitor") {
    // exhaustive comparison against the all-inhibitors-block-everything rule
    for (const auto [n, r, d] : std::array<std::array<int, 3>, 3>{{{6, 2, 2}, {8, 3, 2}, {10, 1, 4}}}) {
        const auto graph = complete_graph(n, r, d);
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            const auto pool = mask_to_pool(mask, n);
            bool has_defective = false, has_inhibitor = false;
            for (int item : pool) {
                has_defective |= graph.is_defective(item);
                has_inhibitor |= graph.is_inhibitor(item);
            }
            const int expected = (has_defective && !has_inhibitor) ? 1 : 0;
            CAPTURE(n);
            CAPTURE(mask);
            REQUIRE(outcome(graph, pool) == expected);
        }
    }
}

TEST_CASE("outcome vector of the worked example") {
    const auto graph = example3_graph();
    const auto y = outcome_vector(graph, example3_matrix());
    CHECK(y == example3_outcomes());
}

TEST_CASE("all-zero matrix gives all-negative outcomes") {
    const auto graph = example3_graph();
    const PoolingMatrix empty(4, 5);
    CHECK(outcome_vector(graph, empty) == std::vector<std::uint8_t>{0, 0, 0, 0});
}

TEST_CASE("singleton rows fire exactly on defectives") {
    const auto graph = example3_graph();
    PoolingMatrix identity(5, 5);
    for (int i = 0; i < 5; ++i) identity.set(i, i, true);
    CHECK(outcome_vector(graph, identity) == std::vector<std::uint8_t>{0, 1, 0, 1, 0});
}

TEST_CASE("outcome vector checks dimensions") {
    const auto graph = example3_graph();
    const PoolingMatrix wrong(3, 4);
    CHECK_THROWS_AS((void)outcome_vector(graph, wrong), Error);
}

TEST_CASE("graph construction validates its invariants") {
    CHECK_THROWS_AS(AssociationGraph(5, {1}, {1}, {{1, 1}}), Error);      // overlap
    CHECK_THROWS_AS(AssociationGraph(5, {0}, {1}, {}), Error);           // isolated inhibitor
    CHECK_THROWS_AS(AssociationGraph(5, {0}, {1}, {{0, 2}}), Error);     // edge to non-defective
    CHECK_THROWS_AS(AssociationGraph(5, {0}, {1}, {{4, 1}}), Error);     // edge from non-inhibitor
    CHECK_THROWS_AS(AssociationGraph(2, {0, 1}, {5}, {{0, 5}}), Error);  // out of range
}

TEST_CASE("forced single edge for n=3 r=1 d=1") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto graph = sample_graph(3, 1, 1, SideInfo::nsi(), seed);
        REQUIRE(graph.edges().size() == 1);
        CHECK(graph.edges()[0].first == graph.inhibitors()[0]);
        CHECK(graph.edges()[0].second == graph.defectives()[0]);
    }
}

TEST_CASE("edge patterns are uniform for r=2 d=2") {
    // the (2^d - 1)^r = 9 patterns on a fixed (I, D) should be equally likely
    constexpr int kSamples = 100000;
    std::array<int, 9> counts{};
    for (int i = 0; i < kSamples; ++i) {
        const auto graph = sample_graph(20, 2, 2, SideInfo::nsi(), 10'000 + i);
        std::array<int, 2> masks{};
        for (const auto& [s, u] : graph.edges()) {
            const int si = (s == graph.inhibitors()[0]) ? 0 : 1;
            const int uj = (u == graph.defectives()[0]) ? 0 : 1;
            masks[si] |= 1 << uj;
        }
        REQUIRE(masks[0] >= 1);
        REQUIRE(masks[1] >= 1);
        ++counts[(masks[0] - 1) * 3 + (masks[1] - 1)];
    }
    const double expected = 1.0 / 9.0;
    const double sigma = std::sqrt(expected * (1.0 - expected) / kSamples);
    for (int pattern = 0; pattern < 9; ++pattern) {
        const double freq = static_cast<double>(counts[pattern]) / kSamples;
        CAPTURE(pattern);
        CHECK(std::abs(freq - expected) <= 3.0 * sigma);
    }
}

TEST_CASE("infeasible side information is rejected") {
    CHECK_THROWS_AS((void)sample_graph(10, 3, 2, SideInfo::wsi(1), 1), Error);
    CHECK_THROWS_AS((void)sample_graph(10, 2, 3, SideInfo::wsi(3), 1), Error);  // I_max > r
    CHECK_THROWS_AS((void)sample_graph(4, 3, 2, SideInfo::nsi(), 1), Error);    // r + d > n
    CHECK_THROWS_AS((void)sample_graph(10, 2, 0, SideInfo::nsi(), 1), Error);   // inhibitors need defectives
}

TEST_CASE("degenerate instances are accepted") {
    const auto no_inhibitors = sample_graph(6, 0, 2, SideInfo::nsi(), 3);
    CHECK(no_inhibitors.edges().empty());
    CHECK(no_inhibitors.num_defectives() == 2);
    const auto empty = sample_graph(6, 0, 0, SideInfo::nsi(), 3);
    CHECK(empty.num_inhibitors() == 0);
    CHECK(empty.num_defectives() == 0);
}

TEST_CASE("sampling respects the WSI in-degree cap") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const auto graph = sample_graph(12, 4, 3, SideInfo::wsi(2), seed);
        std::map<int, int> in_degree;
        for (const auto& [s, u] : graph.edges()) ++in_degree[u];
        for (const auto& [u, deg] : in_degree) CHECK(deg <= 2);
        for (int s : graph.inhibitors()) {
            int out = 0;
            for (const auto& [si, u] : graph.edges())
                if (si == s) ++out;
            CHECK(out >= 1);
        }
    }
}

TEST_CASE("sampling is reproducible") {
    const auto a = sample_graph(30, 3, 4, SideInfo::wsi(2), 777);
    const auto b = sample_graph(30, 3, 4, SideInfo::wsi(2), 777);
    const auto c = sample_graph(30, 3, 4, SideInfo::wsi(2), 778);
    CHECK(a == b);
    CHECK_FALSE(a == c);
}

TEST_CASE("outcome monotonicity properties") {
    Rng rng(42);
    for (int iter = 0; iter < 400; ++iter) {
        const int n = 6 + static_cast<int>(rng.uniform_below(8));
        const int r = static_cast<int>(rng.uniform_below(3));
        const int d = (r > 0 ? 1 : 0) + static_cast<int>(rng.uniform_below(3));
        if (r + d > n) continue;
        const auto graph = sample_graph(n, r, d, SideInfo::nsi(), 1000 + iter);
        const std::uint32_t mask = static_cast<std::uint32_t>(rng.uniform_below(1u << n));
        const auto pool = mask_to_pool(mask, n);
        const int base = outcome(graph, pool);

        for (int item = 0; item < n; ++item) {
            if (mask >> item & 1) continue;
            auto bigger = pool;
            bigger.push_back(item);
            const int grown = outcome(graph, bigger);
            if (graph.is_defective(item) && base == 1) CHECK(grown == 1);
            if (graph.is_inhibitor(item) && base == 0) CHECK(grown == 0);
            if (!graph.is_defective(item) && !graph.is_inhibitor(item)) CHECK(grown == base);
        }

        // dropping normal items never changes the outcome
        std::vector<int> stripped;
        for (int item : pool)
            if (graph.is_defective(item) || graph.is_inhibitor(item)) stripped.push_back(item);
        CHECK(outcome(graph, stripped) == base);
    }
}

TEST_CASE("graph JSON round trip is lossless") {
    const auto graph = sample_graph(25, 3, 4, SideInfo::wsi(2), 99);
    const auto j = io::graph_to_json(graph);
    const auto back = io::graph_from_json(j);
    CHECK(back == graph);
    CHECK(io::graph_to_json(back) == j);

    const auto ex3 = example3_graph();
    CHECK(io::graph_from_json(io::graph_to_json(ex3)) == ex3);
}
