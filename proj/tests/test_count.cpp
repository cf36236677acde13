#include <gtest/gtest.h>

#include <numeric>
#include <vector>

#include "matchbound/count.hpp"
#include "matchbound/io.hpp"
#include "matchbound/random.hpp"
#include "test_support.hpp"

using namespace matchbound;

namespace {

MatchingProfile profile_of(std::initializer_list<int> counts) {
    std::vector<BigInt> v;
    for (int c : counts) v.emplace_back(c);
    return MatchingProfile(std::move(v));
}

// Independent oracle for the cycle law: n/(n-l) * C(n-l, l).
BigInt cycle_closed_form(unsigned n, unsigned ell) {
    if (ell == 0) return 1;
    return binomial(n - ell, ell) * n / (n - ell);
}

BipartiteGraph marginal_example() {
    // X = {a, b}, Y = {1, 2, 3}; edges a1, a2, b2, b3.
    BipartiteGraph b(2, 3);
    b.add_edge(0, 0);
    b.add_edge(0, 1);
    b.add_edge(1, 1);
    b.add_edge(1, 2);
    return b;
}

}  // namespace

TEST(MatchingProfile, SmallGraphs) {
    EXPECT_EQ(matching_profile(complete_graph(2)), profile_of({1, 1}));
    EXPECT_EQ(matching_profile(cycle_graph(6)), profile_of({1, 6, 9, 2}));
    EXPECT_EQ(matching_profile(complete_bipartite(3, 3).to_graph()), profile_of({1, 9, 18, 6}));
    EXPECT_EQ(matching_profile(Graph(5)), profile_of({1}));
}

TEST(MatchingProfile, ProfileInvariants) {
    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const Graph g = random_graph(2 + static_cast<int>(uniform_below(rng, 12)), 0.35, rng);
        const MatchingProfile p = matching_profile(g);
        EXPECT_EQ(p.at(0), 1);
        EXPECT_EQ(p.at(1), g.edge_count());
        EXPECT_LE(p.max_matching_size(), static_cast<std::size_t>(g.n() / 2));
        EXPECT_EQ(p.at(p.max_matching_size() + 1), 0);
    }
}

TEST(MatchingProfile, SizeAndMemoCaps) {
    EXPECT_THROW(matching_profile(Graph(65)), InfeasibleError);
    EXPECT_THROW(matching_profile(complete_graph(12), CountOptions{10}), InfeasibleError);
    EXPECT_NO_THROW(matching_profile(Graph(64)));
}

TEST(MatchingProfile, FullWidthMask) {
    // 64 vertices: 32 disjoint edges.
    Graph g(64);
    for (Vertex v = 0; v < 64; v += 2) g.add_edge(v, v + 1);
    const MatchingProfile p = matching_profile(g);
    ASSERT_EQ(p.max_matching_size(), 32u);
    for (unsigned k = 0; k <= 32; ++k) EXPECT_EQ(p.at(k), binomial(32, k));
}

TEST(Bruteforce, SmallGraphs) {
    EXPECT_EQ(matching_profile_bruteforce(cycle_graph(6)), profile_of({1, 6, 9, 2}));
    EXPECT_EQ(matching_profile_bruteforce(cycle_graph(3)), profile_of({1, 3}));
    EXPECT_EQ(matching_profile_bruteforce(Graph(3)), profile_of({1}));
    EXPECT_THROW(matching_profile_bruteforce(complete_graph(8)), InfeasibleError);
}

TEST(MatchingProfile, AgreesWithBruteforceOnRandomGraphs) {
    Rng rng(2024);
    int checked = 0;
    while (checked < 200) {
        const Graph g = random_graph(2 + static_cast<int>(uniform_below(rng, 9)), 0.1 + 0.4 * uniform_unit(rng), rng);
        if (g.edge_count() > kBruteForceEdgeCap) continue;
        ASSERT_EQ(matching_profile(g), matching_profile_bruteforce(g)) << emit_graph6(g);
        ++checked;
    }
}

TEST(MatchingProfile, CycleLaw) {
    for (unsigned n = 3; n <= 20; ++n) {
        const MatchingProfile p = matching_profile(cycle_graph(static_cast<int>(n)));
        ASSERT_EQ(p.max_matching_size(), n / 2);
        for (unsigned ell = 0; ell <= n / 2; ++ell) EXPECT_EQ(p.at(ell), cycle_closed_form(n, ell)) << n << "," << ell;
    }
}

TEST(MatchingProfile, LabelInvariance) {
    Rng rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        const Graph g = random_graph(10, 0.4, rng);
        const MatchingProfile base = matching_profile(g);
        std::vector<Vertex> perm(10);
        std::iota(perm.begin(), perm.end(), 0);
        for (int k = 0; k < 20; ++k) {
            shuffle(perm, rng);
            EXPECT_EQ(matching_profile(relabel(g, perm)), base);
        }
    }
}

TEST(Convolution, Basics) {
    EXPECT_EQ(profile_convolution(profile_of({1, 1}), profile_of({1, 1})), profile_of({1, 2, 1}));
    const MatchingProfile p = profile_of({1, 6, 9, 2});
    EXPECT_EQ(profile_convolution(MatchingProfile(), p), p);
    const MatchingProfile k33 = kdd_profile(3);
    const MatchingProfile two = profile_convolution(k33, k33);
    EXPECT_EQ(two.at(2), 117);
    const std::vector<Graph> parts{complete_bipartite(3, 3).to_graph(), complete_bipartite(3, 3).to_graph()};
    EXPECT_EQ(two, matching_profile(disjoint_union(parts)));
}

TEST(Convolution, DisjointUnionLaw) {
    Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        const Graph a = random_graph(1 + static_cast<int>(uniform_below(rng, 7)), 0.5, rng);
        const Graph b = random_graph(1 + static_cast<int>(uniform_below(rng, 7)), 0.5, rng);
        const std::vector<Graph> parts{a, b};
        EXPECT_EQ(matching_profile(disjoint_union(parts)), profile_convolution(matching_profile(a), matching_profile(b)));
    }
}

TEST(Kdd, ClosedForm) {
    EXPECT_EQ(kdd_profile(2), profile_of({1, 4, 2}));
    EXPECT_EQ(kdd_profile(3), profile_of({1, 9, 18, 6}));
    for (int d = 1; d <= 4; ++d) {
        const MatchingProfile brute = matching_profile_bruteforce(complete_bipartite(d, d).to_graph());
        EXPECT_EQ(kdd_profile(d), brute);
        EXPECT_EQ(brute.at(static_cast<std::size_t>(d)), factorial(static_cast<unsigned>(d)));
    }
    EXPECT_EQ(umc_extremal_profile(12, 3), matching_profile(make_umc_extremal(12, 3)));
}

TEST(Marginals, K22) {
    const MarginalTable t = matching_marginals(complete_bipartite(2, 2), 2);
    EXPECT_EQ(t.total, 2);
    for (const auto& row : t.p)
        for (const Rational& v : row) EXPECT_EQ(v, Rational(1, 2));
    for (const Rational& m : t.mu) EXPECT_EQ(m, 1);
    for (double h : t.h_edge) EXPECT_DOUBLE_EQ(h, 1.0);
}

TEST(Marginals, HandExample) {
    const MarginalTable t = matching_marginals(marginal_example(), 2);
    EXPECT_EQ(t.total, 3);
    EXPECT_EQ(t.p[0][0], Rational(2, 3));
    EXPECT_EQ(t.p[0][1], Rational(1, 3));
    EXPECT_EQ(t.p[0][2], 0);
    EXPECT_EQ(t.p[1][0], 0);
    EXPECT_EQ(t.p[1][1], Rational(1, 3));
    EXPECT_EQ(t.p[1][2], Rational(2, 3));
    for (const Rational& m : t.mu) EXPECT_EQ(m, Rational(2, 3));
    for (const Rational& v : t.nu) EXPECT_EQ(v, Rational(1, 3));
}

TEST(Marginals, CompleteBipartiteUniform) {
    const MarginalTable t = matching_marginals(complete_bipartite(3, 5), 3);
    for (const auto& row : t.p)
        for (const Rational& v : row) EXPECT_EQ(v, Rational(1, 5));
}

TEST(Marginals, ExactSumsOnRandomGraphs) {
    Rng rng(31);
    int checked = 0;
    while (checked < 60) {
        const int ell = 1 + static_cast<int>(uniform_below(rng, 4));
        const int m = ell + static_cast<int>(uniform_below(rng, 3));
        const BipartiteGraph b = random_bipartite(ell, m, 0.6, rng);
        if (matching_profile(b.to_graph()).at(static_cast<std::size_t>(ell)) == 0) {
            EXPECT_THROW(matching_marginals(b, ell), std::invalid_argument);
            continue;
        }
        const MarginalTable t = matching_marginals(b, ell);
        for (Vertex x = 0; x < ell; ++x) {
            Rational row = 0;
            for (Vertex y = 0; y < m; ++y) {
                if (!b.has_edge(x, y)) EXPECT_EQ(t.p[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)], 0);
                row += t.p[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
            }
            EXPECT_EQ(row, 1);
        }
        Rational mu_sum = 0;
        for (const Rational& v : t.mu) mu_sum += v;
        EXPECT_EQ(mu_sum, ell);
        ++checked;
    }
}

TEST(Marginals, Preconditions) {
    EXPECT_THROW(matching_marginals(complete_bipartite(2, 3), 1), std::invalid_argument);
    BipartiteGraph starved(2, 2);
    starved.add_edge(0, 0);
    starved.add_edge(1, 0);
    EXPECT_THROW(matching_marginals(starved, 2), std::invalid_argument);
}

TEST(ProfileJson, DecimalStringsSurvive) {
    const MatchingProfile big = umc_extremal_profile(60, 5);
    const nlohmann::json j = to_json(big);
    EXPECT_TRUE(j[0].is_string());
    EXPECT_EQ(profile_from_json(nlohmann::json::parse(j.dump())), big);
}
