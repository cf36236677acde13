#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <vector>

#include "matchbound/bounds.hpp"
#include "matchbound/random.hpp"

using namespace matchbound;

// Reference values below were evaluated with 30-digit mpmath straight from the
// closed-form expressions.

namespace {

constexpr double kTol = 1e-9;

BipartiteGraph marginal_example() {
    BipartiteGraph b(2, 3);
    b.add_edge(0, 0);
    b.add_edge(0, 1);
    b.add_edge(1, 1);
    b.add_edge(1, 2);
    return b;
}

double log2_count(const Graph& g, int ell) { return log2_big(matching_profile(g).at(static_cast<std::size_t>(ell))); }

}  // namespace

TEST(BinaryEntropy, Values) {
    EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
    EXPECT_EQ(binary_entropy(0.0), 0.0);
    EXPECT_EQ(binary_entropy(1.0), 0.0);
    EXPECT_NEAR(binary_entropy(0.25), 0.811278124459132864, 1e-15);
    EXPECT_THROW(binary_entropy(-0.1), std::invalid_argument);
    EXPECT_THROW(binary_entropy(1.5), std::invalid_argument);
}

TEST(LogRatio, ConventionAndLimit) {
    EXPECT_NEAR(log_ratio(1.0), 1.4426950408889634, 1e-15);
    EXPECT_DOUBLE_EQ(log_ratio(2.0), 1.0);
    EXPECT_NEAR(log_ratio(1.0 + 1e-8), kLog2E, 1e-6);
    for (double eps = 1e-1; eps > 1e-15; eps /= 10) EXPECT_NEAR(log_ratio(1.0 + eps), kLog2E, eps);
    EXPECT_THROW(log_ratio(0.5), std::invalid_argument);
}

TEST(Bregman, Values) {
    const std::vector<int> ones{1, 1, 1};
    EXPECT_EQ(bregman_bound(ones), 0.0);
    const std::vector<int> threes{3, 3, 3};
    EXPECT_NEAR(bregman_bound(threes), std::log2(6.0), 1e-12);
    EXPECT_NEAR(bregman_bound(threes), log2_count(complete_bipartite(3, 3).to_graph(), 3), 1e-12);
    const std::vector<int> twos{2, 2};
    EXPECT_NEAR(bregman_bound(twos), 1.0, 1e-15);
    EXPECT_NEAR(bregman_bound(twos), log2_count(cycle_graph(4), 2), 1e-15);
    const std::vector<int> bad{2, 0};
    EXPECT_THROW(bregman_bound(bad), IsolatedVertexError);
}

TEST(Cgt, Values) {
    EXPECT_NEAR(cgt_bound(6, 3, 3), 4.75488750216346854, 1e-12);
    EXPECT_EQ(cgt_bound(10, 3, 0), 0.0);
    EXPECT_EQ(cgt_bound(4, 1, 2), 0.0);
    EXPECT_THROW(cgt_bound(4, 1, 3), std::invalid_argument);
    EXPECT_THROW(cgt_bound(4, 0, 1), std::invalid_argument);
}

TEST(UmcMainTerm, Values) {
    EXPECT_NEAR(umc_extremal_main_term(4, 2, 1), 2.55730495911103659, 1e-12);
    const double exact = log2_big(kdd_profile(2).at(1));
    EXPECT_EQ(exact, 2.0);
    EXPECT_NEAR((umc_extremal_main_term(4, 2, 1) - exact) / 2.0, 0.278652479555518296, 1e-12);
    EXPECT_EQ(umc_extremal_main_term(12, 3, 0), 0.0);
}

TEST(DRegular, Values) {
    EXPECT_NEAR(thm_dregular_bound(6, 3, 3), 2.80424613057831259, 1e-12);
    EXPECT_GE(thm_dregular_bound(6, 3, 3), std::log2(6.0));
    EXPECT_NEAR(thm_dregular_bound(2, 1, 1), 0.0, 1e-15);
    EXPECT_NEAR(thm_dregular_bound(10, 3, 0), 5 * log_ratio(3), 1e-12);
}

TEST(ElementarySymmetric, Values) {
    const std::vector<int> w{1, 2, 3};
    EXPECT_EQ(elementary_symmetric(w, 2), 11);
    EXPECT_NEAR(elementary_symmetric_log(w, 2), std::log2(11.0), 1e-15);
    EXPECT_EQ(elementary_symmetric_log(w, 0), 0.0);
    const std::vector<int> reg(9, 4);
    for (int ell = 0; ell <= 9; ++ell) {
        BigInt closed = binomial(9, static_cast<unsigned>(ell));
        for (int k = 0; k < ell; ++k) closed *= 4;
        EXPECT_EQ(elementary_symmetric(reg, ell), closed);
    }
    EXPECT_THROW(elementary_symmetric(w, 4), std::invalid_argument);
    EXPECT_THROW(elementary_symmetric(w, -1), std::invalid_argument);
}

TEST(ElementarySymmetric, MatchesSubsetEnumeration) {
    Rng rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + static_cast<int>(uniform_below(rng, 10));
        std::vector<int> deg;
        for (int i = 0; i < n; ++i) deg.push_back(1 + static_cast<int>(uniform_below(rng, 9)));
        for (int ell = 0; ell <= n; ++ell) {
            BigInt brute = 0;
            for (unsigned mask = 0; mask < (1u << n); ++mask) {
                if (std::popcount(mask) != ell) continue;
                BigInt prod = 1;
                for (int i = 0; i < n; ++i)
                    if (mask >> i & 1u) prod *= deg[static_cast<std::size_t>(i)];
                brute += prod;
            }
            EXPECT_EQ(elementary_symmetric(deg, ell), brute);
        }
    }
}

TEST(BipartiteTheorem, Values) {
    const double k33 = thm_bipartite_bound(complete_bipartite(3, 3), 3);
    EXPECT_NEAR(k33, 2.80424613057831259, 1e-12);
    EXPECT_GE(k33, std::log2(6.0));
    EXPECT_NEAR(thm_bipartite_bound(complete_bipartite(1, 1), 1), 0.0, 1e-15);
    const double ex = thm_bipartite_bound(marginal_example(), 2);
    EXPECT_NEAR(ex, 3.69957241894322937, 1e-12);
    EXPECT_GE(ex, std::log2(3.0));
    BipartiteGraph isolated(2, 2);
    isolated.add_edge(0, 0);
    EXPECT_THROW(thm_bipartite_bound(isolated, 1), IsolatedVertexError);
    EXPECT_THROW(thm_bipartite_bound(complete_bipartite(2, 3), 3), std::invalid_argument);
}

TEST(GeneralTheorem, Values) {
    const double c6 = thm_general_bound(cycle_graph(6), 3);
    EXPECT_NEAR(c6, 1.67191487733310978, 1e-12);
    EXPECT_GE(c6, 1.0);
    EXPECT_NEAR(thm_general_bound(cycle_graph(5), 0), 2.5 * log_ratio(2), 1e-12);
    Graph g(3);
    g.add_edge(0, 1);
    EXPECT_THROW(thm_general_bound(g, 1), IsolatedVertexError);
}

TEST(GeneralTheorem, NestedInDRegular) {
    for (std::uint64_t s = 0; s < 40; ++s) {
        const int n = 8 + 2 * static_cast<int>(s % 5);
        const int d = 2 + static_cast<int>(s % 3);
        const Graph g = random_regular(n, d, s);
        for (int ell = 0; 2 * ell <= n; ++ell) {
            const double gen = thm_general_bound(g, ell);
            const double reg = thm_dregular_bound(n, d, ell);
            EXPECT_LE(gen, reg + kTol);
            if (ell > 0 && 2 * ell < n) EXPECT_LT(gen, reg - 1e-6);
        }
    }
}

TEST(Psi, Values) {
    EXPECT_EQ(psi(1, 1), 0.0);
    EXPECT_NEAR(psi(3, 2), 0.5 * std::log2(6.0), 1e-15);
    EXPECT_NEAR(psi(3, 2), 1.29248125036057809, 1e-15);
    for (int d = 1; d <= 10; ++d)
        EXPECT_NEAR(psi(d, d), bregman_bound(std::vector<int>{d}), 1e-15);
    EXPECT_THROW(psi(3, 0.0), std::invalid_argument);
    EXPECT_THROW(psi(3, 3.5), std::invalid_argument);
}

TEST(Psi, LgammaRouteMatchesFallingFactorial) {
    for (int d = 1; d <= 50; ++d)
        for (int t = 1; t <= d; ++t)
            EXPECT_NEAR(detail::psi_lgamma(d, t), detail::psi_falling(d, t), 1e-12) << d << "," << t;
}

TEST(Psi, ContinuousAcrossIntegers) {
    for (int d = 2; d <= 12; ++d)
        for (int t = 1; t < d; ++t) {
            EXPECT_NEAR(psi(d, t + 1e-9), psi(d, t), 1e-7);
            EXPECT_NEAR(psi(d, t - 1e-9), psi(d, t), 1e-7);
        }
}

TEST(GenMinc, Values) {
    const double k24 = genminc_bound(complete_bipartite(2, 4), 2);
    EXPECT_NEAR(k24, std::log2(12.0), 1e-12);
    EXPECT_NEAR(k24, log2_count(complete_bipartite(2, 4).to_graph(), 2), 1e-12);
    const double ex = genminc_bound(marginal_example(), 2);
    EXPECT_NEAR(ex, 1.72141365318254874, 1e-12);
    EXPECT_GE(ex, std::log2(3.0));
    EXPECT_THROW(genminc_bound(complete_bipartite(2, 4), 1), std::invalid_argument);
}

TEST(GenMinc, SquareCaseIsBregman) {
    Rng rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + static_cast<int>(uniform_below(rng, 6));
        const BipartiteGraph b = random_bipartite(n, n, 0.7, rng);
        if (b.min_degree_x() < 1) continue;
        const auto dx = b.degrees_x();
        EXPECT_NEAR(genminc_bound(b, n), bregman_bound(dx), 1e-12);
    }
}

TEST(GenMinc, SharpOnCompleteBipartiteUnions) {
    // Unions of K_{a,b} with a/b fixed.
    const std::vector<std::vector<std::pair<int, int>>> families{
        {{1, 2}}, {{1, 2}, {1, 2}, {1, 2}}, {{2, 4}}, {{2, 4}, {1, 2}}, {{1, 3}, {2, 6}}, {{2, 3}, {4, 6}}, {{3, 3}, {1, 1}}};
    for (const auto& fam : families) {
        std::vector<BipartiteGraph> parts;
        for (auto [a, b] : fam) parts.push_back(complete_bipartite(a, b));
        const BipartiteGraph u = disjoint_union(std::span<const BipartiteGraph>(parts));
        const int ell = u.size_x();
        EXPECT_NEAR(genminc_bound(u, ell), log2_count(u.to_graph(), ell), 1e-9);
    }
}

TEST(PhiWild, Interpretations) {
    EXPECT_NEAR(phi_wild(2.0, 2.0, PhiInterp::gamma), 0.5 * std::log2(12.0), 1e-12);
    EXPECT_NEAR(phi_wild(2.0, 2.0, PhiInterp::literal), 0.5 * (std::log2(24.0) - std::log2(3.0)), 1e-12);
    EXPECT_NEAR(phi_wild(2.0, 2.0, PhiInterp::literal), 1.5, 1e-12);
    for (int r = 0; r <= 4; ++r) {
        const int top = 1 << r;
        EXPECT_NEAR(phi_wild(r, top, PhiInterp::gamma), log2_big(factorial(static_cast<unsigned>(top))) / top, 1e-12);
    }
    EXPECT_THROW(phi_wild(1.0, 3.0, PhiInterp::gamma), std::invalid_argument);
    EXPECT_THROW(phi_wild(-1.0, 0.1, PhiInterp::gamma), std::invalid_argument);
    EXPECT_EQ(parse_phi_interp("literal"), PhiInterp::literal);
    EXPECT_THROW(parse_phi_interp("gama"), std::invalid_argument);
}

TEST(WildBound, TightOnCompleteBipartite) {
    for (int ell = 1; ell <= 3; ++ell)
        for (int m = ell; m <= 5; ++m) {
            const WildBound w = wild_bound(complete_bipartite(ell, m), ell, PhiInterp::gamma);
            EXPECT_NEAR(w.entropy_bits, log2_big(falling_factorial(static_cast<unsigned>(m), static_cast<unsigned>(ell))), 1e-12);
            EXPECT_NEAR(w.value_bits, w.entropy_bits, 1e-9);
        }
}

TEST(WildBound, UniformMarginalsMatchGenMinc) {
    // C_6 as a bipartite graph: every f(x) is uniform on two neighbors.
    BipartiteGraph b(3, 3);
    for (int i = 0; i < 3; ++i) {
        b.add_edge(i, i);
        b.add_edge(i, (i + 1) % 3);
    }
    EXPECT_NEAR(wild_bound(b, 3, PhiInterp::gamma).value_bits, genminc_bound(b, 3), 1e-9);
}

TEST(WildBound, HandExample) {
    const WildBound w = wild_bound(marginal_example(), 2, PhiInterp::gamma);
    EXPECT_NEAR(w.entropy_bits, std::log2(3.0), 1e-12);
    EXPECT_NEAR(w.value_bits, 1.60857826316650979, 1e-9);
    EXPECT_GE(w.value_bits, w.entropy_bits);
}

TEST(BoundReport, CycleSix) {
    const BoundReport r = bound_report(cycle_graph(6), 3, "C6");
    ASSERT_TRUE(r.exact_log2());
    EXPECT_NEAR(*r.exact_log2(), 1.0, 1e-15);
    for (const char* name : {"cgt", "thm_dregular", "thm_general"}) {
        const BoundEntry* e = r.find(name);
        ASSERT_NE(e, nullptr) << name;
        ASSERT_TRUE(e->applicable()) << name;
        EXPECT_GE(*r.slack(*e), 0.0) << name;
    }
    EXPECT_EQ(r.find("bregman"), nullptr);
}

TEST(BoundReport, K33Bipartite) {
    const BoundReport r = bound_report(complete_bipartite(3, 3), 3, "K33");
    for (const char* name : {"bregman", "thm_bipartite", "genminc", "wild_gamma", "thm_general", "thm_dregular", "cgt"}) {
        const BoundEntry* e = r.find(name);
        ASSERT_NE(e, nullptr) << name;
        EXPECT_TRUE(e->applicable()) << name << ": " << e->note;
        EXPECT_GE(*r.slack(*e), -kTol) << name;
    }
    EXPECT_NEAR(*r.slack(*r.find("bregman")), 0.0, 1e-12);
    EXPECT_TRUE(r.find("genminc")->conjectural);
}

TEST(BoundReport, EllZeroAndNotApplicable) {
    const BoundReport r = bound_report(cycle_graph(5), 0);
    EXPECT_EQ(*r.exact_log2(), 0.0);
    for (const auto& e : r.entries)
        if (e.applicable()) EXPECT_GE(*e.value_bits, 0.0);

    Graph path(3);
    path.add_edge(0, 1);
    path.add_edge(1, 2);
    const BoundReport p = bound_report(path, 1);
    EXPECT_FALSE(p.find("cgt")->applicable());
    EXPECT_TRUE(p.find("thm_general")->applicable());

    Graph iso(3);
    iso.add_edge(0, 1);
    const BoundReport q = bound_report(iso, 1);
    EXPECT_FALSE(q.find("thm_general")->applicable());
    EXPECT_EQ(*q.exact_count, 1);
}

TEST(BoundReport, CsvAndJson) {
    const BoundReport r = bound_report(complete_bipartite(3, 3), 3, "k33");
    const std::string csv = to_csv_rows(r);
    EXPECT_NE(csv.find("k33,3,bregman,2.584962501,2.584962501,"), std::string::npos) << csv;
    const nlohmann::json j = to_json(r);
    EXPECT_EQ(j["exactCount"], "6");
    EXPECT_EQ(j["entries"].size(), r.entries.size());
}

TEST(BoundReport, UpperBoundPropertyOnRandomGraphs) {
    Rng rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        const Graph g = random_graph(4 + static_cast<int>(uniform_below(rng, 9)), 0.5, rng);
        for (int ell = 0; 2 * ell <= g.n(); ++ell) {
            const BoundReport r = bound_report(g, ell);
            for (const auto& e : r.entries) {
                const auto s = r.slack(e);
                if (s && !e.conjectural) EXPECT_GE(*s, -kTol) << e.name;
            }
        }
    }
}
