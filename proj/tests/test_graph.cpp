#include <gtest/gtest.h>

#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "matchbound/count.hpp"
#include "matchbound/io.hpp"
#include "matchbound/random.hpp"
#include "test_support.hpp"

using namespace matchbound;

namespace {

ParseErrc edge_list_error(const std::string& text) {
    try {
        parse_edge_list(text);
    } catch (const ParseError& e) {
        return e.code();
    }
    ADD_FAILURE() << "no parse error for: " << text;
    return ParseErrc::malformed;
}

bool is_simple_regular(const Graph& g, int d) {
    std::set<std::pair<int, int>> seen;
    std::vector<int> deg(static_cast<std::size_t>(g.n()), 0);
    for (const Edge& e : g.edges()) {
        if (e.u == e.v) return false;
        if (!seen.insert({e.u, e.v}).second) return false;
        ++deg[static_cast<std::size_t>(e.u)];
        ++deg[static_cast<std::size_t>(e.v)];
    }
    for (int x : deg)
        if (x != d) return false;
    return true;
}

}  // namespace

TEST(EdgeList, ParsesTriangle) {
    const Graph g = parse_edge_list("3 3\n0 1\n1 2\n0 2");
    EXPECT_EQ(g, cycle_graph(3));
}

TEST(EdgeList, DistinctErrors) {
    EXPECT_EQ(edge_list_error("2 1\n0 0"), ParseErrc::loop);
    EXPECT_EQ(edge_list_error("4 2\n0 1\n0 1"), ParseErrc::duplicate_edge);
    EXPECT_EQ(edge_list_error("4 2\n0 1\n1 0"), ParseErrc::duplicate_edge);
    EXPECT_EQ(edge_list_error("3 1\n0 3"), ParseErrc::out_of_range);
    EXPECT_EQ(edge_list_error("3 1\n0 -1"), ParseErrc::out_of_range);
    EXPECT_EQ(edge_list_error("3 2\n0 1"), ParseErrc::malformed);
    EXPECT_EQ(edge_list_error("3 1\n0 x"), ParseErrc::malformed);
    EXPECT_EQ(edge_list_error("3 1\n0 1 2"), ParseErrc::malformed);
    EXPECT_EQ(edge_list_error("3 1\n0 1\n1 2"), ParseErrc::malformed);
    EXPECT_EQ(edge_list_error(""), ParseErrc::malformed);
}

TEST(EdgeList, RoundTrip) {
    const Graph g = cycle_graph(7);
    EXPECT_EQ(parse_edge_list(emit_edge_list(g)), g);
}

TEST(Bipartite, ParsesAndEmits) {
    const BipartiteGraph b = parse_bipartite("B 2 3 4\n0 0\n0 1\n1 1\n1 2\n");
    EXPECT_EQ(b.size_x(), 2);
    EXPECT_EQ(b.size_y(), 3);
    EXPECT_EQ(b.edge_count(), 4u);
    EXPECT_EQ(parse_bipartite(emit_bipartite(b)), b);
    EXPECT_THROW(parse_bipartite("B 2 2 1\n0 2\n"), ParseError);
    EXPECT_THROW(parse_bipartite("2 2 1\n0 1\n"), ParseError);
}

TEST(Graph6, SmallCases) {
    const Graph k2 = parse_graph6("A_");
    EXPECT_EQ(k2.n(), 2);
    EXPECT_TRUE(k2.has_edge(0, 1));
    const Graph empty2 = parse_graph6("A?");
    EXPECT_EQ(empty2.n(), 2);
    EXPECT_EQ(empty2.edge_count(), 0u);
    EXPECT_EQ(emit_graph6(k2), "A_");
    EXPECT_EQ(emit_graph6(empty2), "A?");
}

TEST(Graph6, Errors) {
    try {
        parse_graph6("A ");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.code(), ParseErrc::invalid_character);
    }
    try {
        parse_graph6("C~~");  // n=4 needs one data byte
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.code(), ParseErrc::length_mismatch);
    }
    EXPECT_THROW(parse_graph6("B"), ParseError);
}

// Frozen strings from networkx (see data/gen_graph6_reference.py).
TEST(Graph6, MatchesReferenceEncoder) {
    std::istringstream in(test_support::read_data_file("graph6_reference.txt"));
    std::string g6;
    int n = 0;
    std::string edges;
    int lines = 0;
    while (in >> g6 >> n >> edges) {
        ++lines;
        Graph expected(n);
        if (edges != "-") {
            std::istringstream es(edges);
            std::string item;
            while (std::getline(es, item, ',')) {
                const auto dash = item.find('-');
                expected.add_edge(std::stoi(item.substr(0, dash)), std::stoi(item.substr(dash + 1)));
            }
        }
        EXPECT_EQ(parse_graph6(g6), expected) << g6;
        EXPECT_EQ(emit_graph6(expected), g6);
    }
    EXPECT_EQ(lines, 100);
}

TEST(Graph6, RoundTripLargeHeader) {
    Rng rng(5);
    const Graph g = random_graph(100, 0.1, rng);
    const std::string s = emit_graph6(g);
    EXPECT_EQ(s[0], '~');
    EXPECT_EQ(parse_graph6(s), g);
}

TEST(Graph6, RoundTripProperty) {
    Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(uniform_below(rng, 62));
        const Graph g = random_graph(n, uniform_unit(rng), rng);
        EXPECT_EQ(parse_graph6(emit_graph6(g)), g);
    }
}

TEST(Builders, StandardGraphs) {
    const Graph k33 = complete_bipartite(3, 3).to_graph();
    EXPECT_EQ(k33.edge_count(), 9u);
    const Graph c6 = cycle_graph(6);
    EXPECT_EQ(c6.edge_count(), 6u);
    EXPECT_EQ(c6.regular_degree(), 2);
    const std::vector<Graph> parts{complete_graph(2), complete_graph(2)};
    const Graph u = disjoint_union(parts);
    EXPECT_EQ(u.n(), 4);
    EXPECT_EQ(u.edge_count(), 2u);
    EXPECT_TRUE(u.has_edge(2, 3));
    EXPECT_THROW(cycle_graph(2), std::invalid_argument);
    EXPECT_THROW(complete_bipartite(0, 2), std::invalid_argument);
}

TEST(Builders, UmcExtremal) {
    const Graph pm = make_umc_extremal(4, 1);
    EXPECT_EQ(pm.n(), 4);
    EXPECT_EQ(pm.edge_count(), 2u);
    EXPECT_EQ(pm.regular_degree(), 1);
    const Graph two = make_umc_extremal(12, 3);
    EXPECT_EQ(two.edge_count(), 18u);
    EXPECT_EQ(two.regular_degree(), 3);
    EXPECT_FALSE(two.has_edge(0, 6));
    EXPECT_THROW(make_umc_extremal(10, 3), std::invalid_argument);
}

TEST(DoubleCover, SingleEdge) {
    const BipartiteGraph k = bipartite_double_cover(complete_graph(2));
    EXPECT_EQ(k.size_x(), 2);
    EXPECT_EQ(k.size_y(), 2);
    EXPECT_EQ(k.edge_count(), 2u);
    EXPECT_TRUE(k.has_edge(0, 1));
    EXPECT_TRUE(k.has_edge(1, 0));
}

TEST(DoubleCover, TriangleIsHexagon) {
    const BipartiteGraph k = bipartite_double_cover(cycle_graph(3));
    EXPECT_EQ(matching_profile(k.to_graph()), matching_profile(cycle_graph(6)));
    EXPECT_EQ(k.to_graph().regular_degree(), 2);
}

TEST(DoubleCover, SquareIsTwoSquares) {
    const BipartiteGraph k = bipartite_double_cover(cycle_graph(4));
    const MatchingProfile c4 = matching_profile_bruteforce(cycle_graph(4));
    EXPECT_EQ(matching_profile(k.to_graph()), profile_convolution(c4, c4));
}

TEST(DoubleCover, DegreesAndParts) {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const Graph g = random_graph(2 + static_cast<int>(uniform_below(rng, 10)), 0.4, rng);
        const BipartiteGraph k = bipartite_double_cover(g);
        ASSERT_EQ(k.size_x(), g.n());
        ASSERT_EQ(k.size_y(), g.n());
        int min_k = k.degree_x(0);
        for (Vertex v = 0; v < g.n(); ++v) {
            EXPECT_EQ(k.degree_x(v), g.degree(v));
            EXPECT_EQ(k.degree_y(v), g.degree(v));
            min_k = std::min({min_k, k.degree_x(v), k.degree_y(v)});
        }
        EXPECT_EQ(min_k, g.min_degree());
    }
}

TEST(RandomRegular, Errors) {
    EXPECT_THROW(random_regular(5, 3, 1), std::invalid_argument);
    EXPECT_THROW(random_regular(4, 4, 1), std::invalid_argument);
    EXPECT_THROW(random_regular(12, 3, 1, 0), InfeasibleError);
}

TEST(RandomRegular, K4IsUnique) {
    for (std::uint64_t s = 0; s < 20; ++s) EXPECT_EQ(random_regular(4, 3, s), complete_graph(4));
}

TEST(RandomRegular, Deterministic) { EXPECT_EQ(random_regular(12, 3, 42), random_regular(12, 3, 42)); }

TEST(RandomRegular, AlwaysSimpleRegular) {
    for (std::uint64_t s = 0; s < 200; ++s) {
        const int n = 6 + 2 * static_cast<int>(s % 8);
        const int d = 1 + static_cast<int>(s % 4);
        EXPECT_TRUE(is_simple_regular(random_regular(n, d, s), d)) << "n=" << n << " d=" << d << " seed=" << s;
    }
}

TEST(Bipartition, SplitsBipartiteGraphs) {
    const auto k = bipartition(complete_bipartite(2, 3).to_graph());
    ASSERT_TRUE(k.has_value());
    EXPECT_EQ(k->size_x(), 2);
    EXPECT_EQ(k->size_y(), 3);
    EXPECT_EQ(k->edge_count(), 6u);
    const auto c6 = bipartition(cycle_graph(6));
    ASSERT_TRUE(c6.has_value());
    EXPECT_EQ(matching_profile(c6->to_graph()), matching_profile(cycle_graph(6)));
    EXPECT_FALSE(bipartition(cycle_graph(5)).has_value());
    EXPECT_FALSE(bipartition(Graph(3)).has_value());
}
