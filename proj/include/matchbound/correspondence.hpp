#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "matchbound/count.hpp"
#include "matchbound/error.hpp"
#include "matchbound/graph.hpp"
#include "matchbound/numeric.hpp"

// Ordered pairs of l-matchings of G and 2l-matchings of the bipartite double
// cover K both map onto 2l-edge multigraphs whose components are paths and
// cycles (2-cycles included). Every fiber has size 2^c(T), where c(T) counts
// the components that are not 2-cycles.

namespace matchbound {

using Matching = std::vector<Edge>;

enum class PatternClass {
    t,            // paths and cycles, no odd cycle
    t_star_only,  // paths and cycles, at least one odd cycle
    invalid,      // some vertex of degree > 2
};

inline const char* to_string(PatternClass c) {
    switch (c) {
        case PatternClass::t: return "T";
        case PatternClass::t_star_only: return "T*\\T";
        case PatternClass::invalid: return "invalid";
    }
    return "?";
}

struct UnionPattern {
    Multigraph base{1};
    int components_not_2cycles = 0;
    PatternClass cls = PatternClass::invalid;
    int paths = 0;
    int odd_paths = 0;  // paths with an odd number of edges
    int two_cycles = 0;
    int long_even_cycles = 0;  // even cycles of length >= 4
    int odd_cycles = 0;
};

/// Component structure of a multigraph.
inline UnionPattern classify_pattern(const Multigraph& m) {
    UnionPattern p;
    p.base = m;
    const auto n = static_cast<std::size_t>(m.n());
    std::vector<int> deg(n, 0);
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
        while (parent[static_cast<std::size_t>(v)] != v) {
            parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
            v = parent[static_cast<std::size_t>(v)];
        }
        return v;
    };
    for (const Edge& e : m.edges()) {
        ++deg[static_cast<std::size_t>(e.u)];
        ++deg[static_cast<std::size_t>(e.v)];
        parent[static_cast<std::size_t>(find(e.u))] = find(e.v);
    }
    for (int d : deg)
        if (d > 2) return p;

    std::vector<int> verts(n, 0);
    std::vector<int> edges(n, 0);
    for (std::size_t v = 0; v < n; ++v)
        if (deg[v] > 0) ++verts[static_cast<std::size_t>(find(static_cast<int>(v)))];
    for (const Edge& e : m.edges()) ++edges[static_cast<std::size_t>(find(e.u))];
    for (std::size_t r = 0; r < n; ++r) {
        if (verts[r] == 0) continue;
        if (edges[r] == verts[r] - 1) {
            ++p.paths;
            if (edges[r] % 2 == 1) ++p.odd_paths;
        } else if (edges[r] == 2) {
            ++p.two_cycles;
        } else if (edges[r] % 2 == 1) {
            ++p.odd_cycles;
        } else {
            ++p.long_even_cycles;
        }
    }
    p.components_not_2cycles = p.paths + p.long_even_cycles + p.odd_cycles;
    p.cls = p.odd_cycles > 0 ? PatternClass::t_star_only : PatternClass::t;
    return p;
}

namespace detail {

inline void require_matching(const Graph& g, const Matching& m, const char* what) {
    std::vector<char> used(static_cast<std::size_t>(g.n()), 0);
    for (const Edge& e : m) {
        if (!g.has_edge(e.u, e.v)) throw std::invalid_argument(std::string(what) + ": edge not in graph");
        auto& a = used[static_cast<std::size_t>(e.u)];
        auto& b = used[static_cast<std::size_t>(e.v)];
        if (a || b) throw std::invalid_argument(std::string(what) + ": edges share a vertex");
        a = b = 1;
    }
}

}  // namespace detail

/// phi(M, M') = M + M' as a multiset.
inline UnionPattern multiset_union_classify(const Graph& g, const Matching& m1, const Matching& m2) {
    if (m1.size() != m2.size()) throw std::invalid_argument("matchings differ in size");
    detail::require_matching(g, m1, "first matching");
    detail::require_matching(g, m2, "second matching");
    Multigraph t(g.n());
    for (const Edge& e : m1) t.add_edge(e.u, e.v);
    for (const Edge& e : m2) t.add_edge(e.u, e.v);
    return classify_pattern(t);
}

/// psi: a matching of the double cover, given as arcs (x,0)(y,1), projected
/// onto G by forgetting the layer.
inline UnionPattern project_cover_matching(const Graph& g, std::span<const BipartiteGraph::Arc> cover_matching) {
    std::vector<char> used_x(static_cast<std::size_t>(g.n()), 0);
    std::vector<char> used_y(static_cast<std::size_t>(g.n()), 0);
    Multigraph t(g.n());
    for (const auto& a : cover_matching) {
        if (!g.has_edge(a.x, a.y)) throw std::invalid_argument("arc is not an edge of the double cover");
        auto& ux = used_x[static_cast<std::size_t>(a.x)];
        auto& uy = used_y[static_cast<std::size_t>(a.y)];
        if (ux || uy) throw std::invalid_argument("arcs share a vertex of the double cover");
        ux = uy = 1;
        t.add_edge(a.x, a.y);
    }
    return classify_pattern(t);
}

/// Ordered pairs (M, M') of equal-size matchings with M + M' = T: each
/// non-2-cycle component has two alternating colorings, and the k odd paths
/// must split evenly, giving 2^(c-k) * C(k, k/2).
inline BigInt balanced_fiber_size(const UnionPattern& p) {
    if (p.cls != PatternClass::t) return 0;
    const int k = p.odd_paths;
    if (k % 2 != 0) return 0;
    BigInt out = binomial(static_cast<unsigned>(k), static_cast<unsigned>(k / 2));
    return out << (p.components_not_2cycles - k);
}

// ---------------------------------------------------------------------------
// Enumeration

/// All matchings of exactly `size` edges; throws InfeasibleError past `cap`.
inline std::vector<Matching> enumerate_matchings(const Graph& g, int size, std::size_t cap) {
    std::vector<Matching> out;
    const auto& edges = g.edges();
    std::vector<char> used(static_cast<std::size_t>(g.n()), 0);
    Matching cur;
    auto dfs = [&](auto&& self, std::size_t i) -> void {
        if (static_cast<int>(cur.size()) == size) {
            if (out.size() >= cap) throw InfeasibleError("more than " + std::to_string(cap) + " matchings");
            out.push_back(cur);
            return;
        }
        if (edges.size() - i < static_cast<std::size_t>(size) - cur.size()) return;
        const Edge& e = edges[i];
        auto& a = used[static_cast<std::size_t>(e.u)];
        auto& b = used[static_cast<std::size_t>(e.v)];
        if (!a && !b) {
            a = b = 1;
            cur.push_back(e);
            self(self, i + 1);
            cur.pop_back();
            a = b = 0;
        }
        self(self, i + 1);
    };
    dfs(dfs, 0);
    return out;
}

/// Every multigraph with `size` edges, multiplicities <= 2, supported on
/// E(G), in which every vertex has degree <= 2; that is, the set T*.
inline std::vector<Multigraph> enumerate_path_cycle_multigraphs(const Graph& g, int size, std::size_t cap) {
    std::vector<Multigraph> out;
    const auto& edges = g.edges();
    std::vector<int> deg(static_cast<std::size_t>(g.n()), 0);
    std::vector<std::pair<Edge, int>> cur;
    int placed = 0;
    auto dfs = [&](auto&& self, std::size_t i) -> void {
        if (placed == size) {
            if (out.size() >= cap) throw InfeasibleError("more than " + std::to_string(cap) + " path/cycle multigraphs");
            Multigraph t(g.n());
            for (const auto& [e, mult] : cur)
                for (int k = 0; k < mult; ++k) t.add_edge(e.u, e.v);
            out.push_back(std::move(t));
            return;
        }
        if (2 * static_cast<long>(edges.size() - i) < size - placed) return;
        const Edge& e = edges[i];
        int& du = deg[static_cast<std::size_t>(e.u)];
        int& dv = deg[static_cast<std::size_t>(e.v)];
        for (int mult = 2; mult >= 1; --mult) {
            if (du + mult > 2 || dv + mult > 2 || placed + mult > size) continue;
            du += mult;
            dv += mult;
            placed += mult;
            cur.emplace_back(e, mult);
            self(self, i + 1);
            cur.pop_back();
            placed -= mult;
            du -= mult;
            dv -= mult;
        }
        self(self, i + 1);
    };
    dfs(dfs, 0);
    return out;
}

// ---------------------------------------------------------------------------
// Fiber audit

struct FiberCaps {
    std::uint64_t max_matchings = 10'000;         // Phi_l(G)
    std::uint64_t max_cover_matchings = 100'000;  // Phi_2l(K)
};

struct AuditCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct AuditReport {
    std::string graph_id;
    int ell = 0;
    BigInt phi_ell;          // Phi_l(G)
    BigInt phi_cover;        // Phi_2l(K)
    BigInt sum_t;            // sum over T of 2^c(T)
    BigInt sum_t_balanced;   // sum over T of balanced_fiber_size
    BigInt sum_t_star;       // sum over T* of 2^c(T)
    std::size_t t_count = 0;
    std::size_t t_star_count = 0;
    int max_odd_paths = 0;  // over T
    std::vector<AuditCheck> checks;
    std::vector<std::string> offending;  // at most 10

    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    const AuditCheck& check(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return c;
        throw std::out_of_range("no audit check named " + name);
    }
};

inline std::string pattern_to_string(const Multigraph& m) {
    std::string s;
    for (const Edge& e : m.edges()) {
        if (!s.empty()) s += ' ';
        s += std::to_string(e.u) + "-" + std::to_string(e.v);
    }
    return s;
}

/// Checks, exactly and by full enumeration:
///   (a) phi fibers have size 2^c(T) and phi is onto T;
///   (b) psi fibers have size 2^c(T) and psi is onto T*;
///   (c) Phi_l(G)^2 = sum_{T} 2^c(T);
///   (d) sum_{T*} 2^c(T) = Phi_2l(K);
///   (e) Phi_l(G)^2 <= Phi_2l(K).
/// (a) and (c) fail as soon as T has two or more odd paths; the balanced
/// variants check the fiber sizes from balanced_fiber_size instead.
inline AuditReport verify_fibers(const Graph& g, int ell, std::string graph_id = "G", FiberCaps caps = {}) {
    if (ell < 0 || 2 * ell > g.n()) throw std::invalid_argument("verify_fibers needs 0 <= 2l <= N");
    if (2 * g.n() > kMaxMemoVertices) throw InfeasibleError("double cover exceeds 64 vertices");

    const BipartiteGraph cover = bipartite_double_cover(g);
    const Graph cover_graph = cover.to_graph();
    AuditReport r;
    r.graph_id = std::move(graph_id);
    r.ell = ell;
    r.phi_ell = matching_profile(g).at(static_cast<std::size_t>(ell));
    r.phi_cover = matching_profile(cover_graph).at(static_cast<std::size_t>(2 * ell));
    if (r.phi_ell > caps.max_matchings)
        throw InfeasibleError("Phi_l(G) = " + r.phi_ell.str() + " exceeds enumeration cap");
    if (r.phi_cover > caps.max_cover_matchings)
        throw InfeasibleError("Phi_2l(K) = " + r.phi_cover.str() + " exceeds enumeration cap");

    struct Stat {
        UnionPattern pattern;
        std::uint64_t phi_fiber = 0;
        std::uint64_t psi_fiber = 0;
        bool enumerated = false;
    };
    std::map<std::vector<Edge>, Stat> stats;
    auto entry = [&](const Multigraph& t) -> Stat& {
        auto [it, fresh] = stats.try_emplace(t.edges());
        if (fresh) it->second.pattern = classify_pattern(t);
        return it->second;
    };

    for (const Multigraph& t : enumerate_path_cycle_multigraphs(g, 2 * ell, 2 * caps.max_cover_matchings))
        entry(t).enumerated = true;

    const std::vector<Matching> matchings = enumerate_matchings(g, ell, caps.max_matchings + 1);
    for (const Matching& m1 : matchings) {
        for (const Matching& m2 : matchings) {
            Multigraph t(g.n());
            for (const Edge& e : m1) t.add_edge(e.u, e.v);
            for (const Edge& e : m2) t.add_edge(e.u, e.v);
            ++entry(t).phi_fiber;
        }
    }

    const std::vector<Matching> cover_matchings = enumerate_matchings(cover_graph, 2 * ell, caps.max_cover_matchings + 1);
    for (const Matching& km : cover_matchings) {
        Multigraph t(g.n());
        for (const Edge& e : km) t.add_edge(e.u, e.v - g.n());  // to_graph puts X first, then Y
        ++entry(t).psi_fiber;
    }

    bool phi_ok = true;
    bool psi_ok = true;
    bool balanced_ok = true;
    auto offend = [&](const Stat& s, const std::string& why) {
        if (r.offending.size() < 10) r.offending.push_back(why + ": " + pattern_to_string(s.pattern.base));
    };
    for (const auto& [key, s] : stats) {
        const std::uint64_t expected = std::uint64_t{1} << s.pattern.components_not_2cycles;
        const bool in_t = s.enumerated && s.pattern.cls == PatternClass::t;
        if (s.enumerated && s.pattern.cls == PatternClass::invalid) {
            phi_ok = psi_ok = false;
            offend(s, "enumerated pattern is not a path/cycle union");
        }
        if (in_t) {
            r.max_odd_paths = std::max(r.max_odd_paths, s.pattern.odd_paths);
            r.sum_t += expected;
            ++r.t_count;
        }
        if (s.enumerated) {
            r.sum_t_star += expected;
            ++r.t_star_count;
        }
        if ((s.phi_fiber > 0 || in_t) && !(in_t && s.phi_fiber == expected)) {
            phi_ok = false;
            offend(s, "phi fiber " + std::to_string(s.phi_fiber) + " vs 2^c = " + std::to_string(expected));
        }
        if (in_t) r.sum_t_balanced += balanced_fiber_size(s.pattern);
        if ((s.phi_fiber > 0 || in_t) && !(in_t && BigInt(s.phi_fiber) == balanced_fiber_size(s.pattern))) {
            balanced_ok = false;
            offend(s, "phi fiber " + std::to_string(s.phi_fiber) + " vs balanced count " +
                          balanced_fiber_size(s.pattern).str());
        }
        if ((s.psi_fiber > 0 || s.enumerated) && !(s.enumerated && s.psi_fiber == expected)) {
            psi_ok = false;
            offend(s, "psi fiber " + std::to_string(s.psi_fiber) + " vs 2^c = " + std::to_string(expected));
        }
    }

    const BigInt sq = r.phi_ell * r.phi_ell;
    r.checks.push_back({"enumeration_counts",
                        BigInt(matchings.size()) == r.phi_ell && BigInt(cover_matchings.size()) == r.phi_cover,
                        std::to_string(matchings.size()) + " l-matchings, " + std::to_string(cover_matchings.size()) +
                            " cover matchings"});
    r.checks.push_back({"phi_fibers", phi_ok, std::to_string(r.t_count) + " patterns in T"});
    r.checks.push_back({"psi_fibers", psi_ok, std::to_string(r.t_star_count) + " patterns in T*"});
    r.checks.push_back({"square_identity", sq == r.sum_t, sq.str() + " vs " + r.sum_t.str()});
    r.checks.push_back({"cover_identity", r.sum_t_star == r.phi_cover, r.sum_t_star.str() + " vs " + r.phi_cover.str()});
    r.checks.push_back({"phi_fibers_balanced", balanced_ok, std::to_string(r.t_count) + " patterns in T"});
    r.checks.push_back({"square_identity_balanced", sq == r.sum_t_balanced, sq.str() + " vs " + r.sum_t_balanced.str()});
    r.checks.push_back({"cover_inequality", sq <= r.phi_cover, sq.str() + " <= " + r.phi_cover.str()});
    return r;
}

inline nlohmann::json to_json(const AuditReport& r) {
    nlohmann::json j;
    j["graphId"] = r.graph_id;
    j["ell"] = r.ell;
    j["pass"] = r.pass();
    j["totals"] = {{"phiEll", r.phi_ell.str()},
                   {"phiEllSquared", BigInt(r.phi_ell * r.phi_ell).str()},
                   {"phiCover", r.phi_cover.str()},
                   {"sumT", r.sum_t.str()},
                   {"sumTBalanced", r.sum_t_balanced.str()},
                   {"sumTStar", r.sum_t_star.str()},
                   {"patternsT", std::to_string(r.t_count)},
                   {"patternsTStar", std::to_string(r.t_star_count)},
                   {"maxOddPaths", r.max_odd_paths}};
    j["checks"] = nlohmann::json::array();
    for (const auto& c : r.checks) j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["offending"] = r.offending;
    return j;
}

}  // namespace matchbound
