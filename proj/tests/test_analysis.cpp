#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "idg/analysis.hpp"
#include "idg/error.hpp"
#include "idg/model.hpp"
#include "idg/rng.hpp"
#include "test_support.hpp"

using namespace idg;
using namespace idg::testsupport;

namespace {

// Monte Carlo estimate of a conditional positive-outcome probability: the
// conditioned item is forced present, every other special item joins with
// probability p.
double mc_conditional(const AssociationGraph& graph, double p, int forced_item, int samples,
                      std::uint64_t seed) {
    Rng rng(seed);
    std::vector<int> specials;
    for (int s : graph.inhibitors()) specials.push_back(s);
    for (int u : graph.defectives()) specials.push_back(u);
    std::vector<std::uint8_t> present(static_cast<std::size_t>(graph.n()), 0);
    int positives = 0;
    for (int i = 0; i < samples; ++i) {
        for (int item : specials) present[item] = (item == forced_item) || rng.bernoulli(p);
        bool positive = false;
        for (int u : graph.defectives()) {
            if (!present[u]) continue;
            bool inhibited = false;
            for (int s : graph.inhibitors_of(u))
                if (present[s]) {
                    inhibited = true;
                    break;
                }
            if (!inhibited) {
                positive = true;
                break;
            }
        }
        positives += positive ? 1 : 0;
    }
    return static_cast<double>(positives) / samples;
}

// Literal union-expansion form of the normal-item statistic: sum over which
// defectives are present, times the probability that at least one of them
// escapes all of its inhibitors.
double q2_expansion(const AssociationGraph& graph, double p) {
    const int r = graph.num_inhibitors();
    const int d = graph.num_defectives();
    std::vector<std::uint32_t> inhibitor_mask(static_cast<std::size_t>(d), 0);
    for (int j = 0; j < d; ++j)
        for (int s : graph.inhibitors_of(graph.defectives()[j]))
            for (int i = 0; i < r; ++i)
                if (graph.inhibitors()[i] == s) inhibitor_mask[j] |= 1u << i;

    double total = 0.0;
    for (std::uint32_t subset = 1; subset < (1u << d); ++subset) {
        const int i = std::popcount(subset);
        double weight = std::pow(p, i) * std::pow(1.0 - p, d - i);
        double union_prob = 0.0;
        for (std::uint32_t inh = 0; inh < (1u << r); ++inh) {
            bool escaped = false;
            for (int j = 0; j < d && !escaped; ++j)
                if ((subset >> j & 1) && (inh & inhibitor_mask[j]) == 0) escaped = true;
            if (!escaped) continue;
            const int ones = std::popcount(inh);
            union_prob += std::pow(p, ones) * std::pow(1.0 - p, r - ones);
        }
        total += weight * union_prob;
    }
    return total;
}

// Same expansion restricted to the defectives not associated with s; the
// inhibitor statistic only collects mass from defectives s cannot silence.
double q3_expansion(const AssociationGraph& graph, double p, int s) {
    const int r = graph.num_inhibitors();
    std::vector<int> others;  // defectives outside D(s)
    for (int u : graph.defectives()) {
        bool associated = false;
        for (int si : graph.inhibitors_of(u))
            if (si == s) associated = true;
        if (!associated) others.push_back(u);
    }
    const int m = static_cast<int>(others.size());
    if (m == 0) return 0.0;

    int s_bit = -1;
    std::vector<std::uint32_t> inhibitor_mask(static_cast<std::size_t>(m), 0);
    for (int i = 0; i < r; ++i)
        if (graph.inhibitors()[i] == s) s_bit = i;
    for (int j = 0; j < m; ++j)
        for (int si : graph.inhibitors_of(others[j]))
            for (int i = 0; i < r; ++i)
                if (graph.inhibitors()[i] == si) inhibitor_mask[j] |= 1u << i;

    double total = 0.0;
    for (std::uint32_t subset = 1; subset < (1u << m); ++subset) {
        const int i = std::popcount(subset);
        const double weight = std::pow(p, i) * std::pow(1.0 - p, m - i);
        double union_prob = 0.0;
        for (std::uint32_t inh = 0; inh < (1u << r); ++inh) {
            if (!(inh >> s_bit & 1)) continue;  // condition on s being present
            bool escaped = false;
            for (int j = 0; j < m && !escaped; ++j)
                if ((subset >> j & 1) && (inh & inhibitor_mask[j]) == 0) escaped = true;
            if (!escaped) continue;
            const int ones = std::popcount(inh) - 1;
            union_prob += std::pow(p, ones) * std::pow(1.0 - p, r - 1 - ones);
        }
        total += weight * union_prob;
    }
    return total;
}

// Brute-force count of association patterns with out-degree >= 1 and
// in-degree <= cap, enumerating all 2^(r*d) bipartite edge sets.
long long brute_pattern_count(int r, int d, int cap) {
    if (r == 0) return 1;
    long long count = 0;
    const std::uint64_t all = 1ULL << (r * d);
    for (std::uint64_t pattern = 0; pattern < all; ++pattern) {
        bool valid = true;
        for (int i = 0; i < r && valid; ++i) {
            const std::uint64_t row = (pattern >> (i * d)) & ((1ULL << d) - 1);
            if (row == 0) valid = false;
        }
        for (int j = 0; j < d && valid; ++j) {
            int in_degree = 0;
            for (int i = 0; i < r; ++i)
                if (pattern >> (i * d + j) & 1) ++in_degree;
            if (in_degree > cap) valid = false;
        }
        if (valid) ++count;
    }
    return count;
}

long long ceil_log2_ll(long long x) {
    long long bound = 0;
    while ((1LL << bound) < x) ++bound;
    return bound;
}

}  // namespace

TEST_CASE("single-pair graph statistics at p = 1/2") {
    const AssociationGraph graph(3, {0}, {1}, {{0, 1}});
    CHECK(conditional_stat(graph, 0.5, 2, StatKind::q2_exact).value == doctest::Approx(0.25));
    CHECK(conditional_stat(graph, 0.5, 0, StatKind::q3_exact).value == doctest::Approx(0.0));
    CHECK(conditional_stat(graph, 0.5, 1, StatKind::q1_exact).value == doctest::Approx(0.5));
    CHECK(conditional_stat(graph, 0.5, 1, StatKind::q1_lb).value == doctest::Approx(0.5));
    CHECK(conditional_stat(graph, 0.5, 2, StatKind::q2_ub).value == doctest::Approx(0.5));
}

TEST_CASE("complete association makes the defective bound tight") {
    for (int r = 1; r <= 3; ++r)
        for (int d = 1; d <= 3; ++d) {
            const auto graph = complete_graph(r + d + 2, r, d);
            for (double p : {0.1, 0.3, 0.5}) {
                const double exact =
                    conditional_stat(graph, p, graph.defectives()[0], StatKind::q1_exact).value;
                CHECK(exact == doctest::Approx(std::pow(1.0 - p, r)).epsilon(1e-12));
            }
        }
}

TEST_CASE("conditional statistics enforce item roles") {
    const auto graph = example3_graph();
    CHECK_THROWS_AS((void)conditional_stat(graph, 0.5, 0, StatKind::q1_exact), Error);
    CHECK_THROWS_AS((void)conditional_stat(graph, 0.5, 1, StatKind::q3_exact), Error);
    CHECK_THROWS_AS((void)conditional_stat(graph, 0.5, 1, StatKind::q2_exact), Error);
    CHECK_THROWS_AS((void)conditional_stat(graph, 0.5, 9, StatKind::q2_exact), Error);
    CHECK_THROWS_AS((void)conditional_stat(graph, 1.5, 4, StatKind::q2_exact), Error);
}

TEST_CASE("exact statistics match the union-expansion form") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto graph = sample_graph(12, 2 + seed % 2, 2 + seed % 3, SideInfo::nsi(), seed);
        for (double p : {0.15, 0.4}) {
            const int normal = [&] {
                for (int item = 0; item < graph.n(); ++item)
                    if (!graph.is_defective(item) && !graph.is_inhibitor(item)) return item;
                return -1;
            }();
            const double exact = conditional_stat(graph, p, normal, StatKind::q2_exact).value;
            CHECK(exact == doctest::Approx(q2_expansion(graph, p)).epsilon(1e-12));
            for (int s : graph.inhibitors()) {
                const double q3 = conditional_stat(graph, p, s, StatKind::q3_exact).value;
                CHECK(q3 == doctest::Approx(q3_expansion(graph, p, s)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("ordering invariants across random graphs") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const int r = 1 + static_cast<int>(seed % 3);
        const int d = 1 + static_cast<int>((seed / 3) % 3);
        const auto graph = sample_graph(r + d + 4, r, d, SideInfo::nsi(), seed);
        const double p = 0.05 + 0.9 * static_cast<double>(seed % 7) / 7.0;

        double q2 = -1.0, q2_ub = -1.0;
        std::vector<double> q2_all;
        for (int item = 0; item < graph.n(); ++item) {
            if (graph.is_defective(item) || graph.is_inhibitor(item)) continue;
            q2 = conditional_stat(graph, p, item, StatKind::q2_exact).value;
            q2_ub = conditional_stat(graph, p, item, StatKind::q2_ub).value;
            q2_all.push_back(q2);
        }
        REQUIRE(q2 >= 0.0);
        for (double v : q2_all) CHECK(v == doctest::Approx(q2_all.front()).epsilon(1e-14));
        CHECK(q2 <= q2_ub + 1e-12);

        for (int s : graph.inhibitors()) {
            const double q3 = conditional_stat(graph, p, s, StatKind::q3_exact).value;
            CHECK(q3 <= q2 + 1e-12);
        }
        for (int u : graph.defectives()) {
            const double q1 = conditional_stat(graph, p, u, StatKind::q1_exact).value;
            const double lb = conditional_stat(graph, p, u, StatKind::q1_lb).value;
            CHECK(q1 >= lb - 1e-12);
        }
    }
}

TEST_CASE("exact statistics agree with Monte Carlo") {
    constexpr int kSamples = 100000;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto graph = sample_graph(10, 2, 2, SideInfo::nsi(), 50 + seed);
        const double p = 0.3;
        const int defective = graph.defectives()[0];
        const int inhibitor = graph.inhibitors()[0];
        const int normal = [&] {
            for (int item = 0; item < graph.n(); ++item)
                if (!graph.is_defective(item) && !graph.is_inhibitor(item)) return item;
            return -1;
        }();
        const struct {
            int item;
            StatKind kind;
        } probes[] = {{defective, StatKind::q1_exact},
                      {normal, StatKind::q2_exact},
                      {inhibitor, StatKind::q3_exact}};
        for (const auto& probe : probes) {
            const double exact = conditional_stat(graph, p, probe.item, probe.kind).value;
            const int forced = probe.kind == StatKind::q2_exact ? -1 : probe.item;
            const double estimate = mc_conditional(graph, p, forced, kSamples, 90 + seed);
            const double sigma = std::sqrt(std::max(exact * (1.0 - exact), 1e-12) / kSamples);
            CAPTURE(seed);
            CHECK(std::abs(estimate - exact) <= 4.0 * sigma + 1e-9);
        }
    }
}

TEST_CASE("counting bound reference points") {
    CHECK(counting_lower_bound(10, 1, 2, SideInfo::nsi()) == 11);  // ceil(log2(45*8*3))
    CHECK(counting_lower_bound(10, 1, 1, SideInfo::nsi()) == 7);   // ceil(log2(10*9*1))
}

TEST_CASE("WSI with I_max = r collapses to NSI") {
    for (int n : {8, 12, 20})
        for (int r = 1; r <= 3; ++r)
            for (int d = 1; d <= 3; ++d)
                CHECK(counting_lower_bound(n, r, d, SideInfo::wsi(r)) ==
                      counting_lower_bound(n, r, d, SideInfo::nsi()));
}

TEST_CASE("WSI pattern counting matches brute force") {
    for (int r = 1; r <= 4; ++r)
        for (int d = 1; d <= 3; ++d)
            for (int cap = (r + d - 1) / d; cap <= r; ++cap) {
                const int n = 16;
                const long long brute = brute_pattern_count(r, d, cap);
                // recover the pattern count from the bound on a fixed prefix
                // via an exact recomputation of the set-choice factor
                const long long bound = counting_lower_bound(n, r, d, SideInfo::wsi(cap));
                long long sets = 1;
                {
                    // C(16,d) * C(16-d,r) fits comfortably in 64 bits here
                    auto binom = [](int nn, int kk) {
                        long long v = 1;
                        for (int i = 1; i <= kk; ++i) v = v * (nn - kk + i) / i;
                        return v;
                    };
                    sets = binom(n, d) * binom(n - d, r);
                }
                CAPTURE(r);
                CAPTURE(d);
                CAPTURE(cap);
                CHECK(bound == ceil_log2_ll(sets * brute));
            }
}

TEST_CASE("counting bound is monotone in n, r and d") {
    const auto side = SideInfo::nsi();
    for (int n = 10; n <= 18; n += 2)
        for (int r = 1; r <= 2; ++r)
            for (int d = 1; d <= 4; ++d) {
                const long long base = counting_lower_bound(n, r, d, side);
                CHECK(counting_lower_bound(n + 2, r, d, side) >= base);
                CHECK(counting_lower_bound(n, r + 1, d, side) >= base);
                CHECK(counting_lower_bound(n, r, d + 1, side) >= base);
            }
}

TEST_CASE("capacity limits raise errors") {
    const auto big = complete_graph(50, 12, 12);
    CHECK_THROWS_AS((void)conditional_stat(big, 0.5, big.defectives()[0], StatKind::q1_exact),
                    Error);
    CHECK_THROWS_AS((void)counting_lower_bound(100, 9, 9, SideInfo::wsi(3)), Error);
}

TEST_CASE("asymptotic reference terms") {
    const auto nsi = asymptotic_reference(1024, 4, 4, SideInfo::nsi());
    CHECK(nsi.terms.entropy_term == doctest::Approx(96.0));
    REQUIRE(nsi.terms.inhibitor_term.has_value());
    CHECK(*nsi.terms.inhibitor_term == doctest::Approx(80.0));
    REQUIRE(nsi.terms.defective_term.has_value());
    CHECK(*nsi.terms.defective_term == doctest::Approx(16.0));
    REQUIRE(nsi.counting_lb.has_value());

    const auto single = asymptotic_reference(1024, 1, 4, SideInfo::nsi());
    CHECK_FALSE(single.terms.inhibitor_term.has_value());

    const auto wsi = asymptotic_reference(1024, 6, 3, SideInfo::wsi(2));
    CHECK(wsi.terms.entropy_term == doctest::Approx((6 + 3) * 10.0 + 2 * 3));
    REQUIRE(wsi.terms.inhibitor_term.has_value());
    CHECK(*wsi.terms.inhibitor_term == doctest::Approx(4.0 / 1.0 * 10.0));
    // I_max equals ceil(r/d) with r divisible by d: the d^2 bound needs slack
    CHECK_FALSE(wsi.terms.defective_term.has_value());
    const auto wsi_slack = asymptotic_reference(1024, 6, 3, SideInfo::wsi(3));
    CHECK(wsi_slack.terms.defective_term.has_value());
}
