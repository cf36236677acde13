#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "matchbound/bounds.hpp"
#include "matchbound/count.hpp"
#include "matchbound/graph.hpp"
#include "matchbound/io.hpp"
#include "matchbound/random.hpp"

// Seeded searches for counterexamples. Sample i is generated from seed + i.

namespace matchbound {

inline constexpr double kViolationTol = 1e-9;
inline constexpr double kSharpThresholdBits = 0.01;
inline constexpr int kReportSchema = 1;

enum class Conjecture { umc, genminc, wild };

inline const char* to_string(Conjecture c) {
    switch (c) {
        case Conjecture::umc: return "umc";
        case Conjecture::genminc: return "genminc";
        case Conjecture::wild: return "wild";
    }
    return "?";
}

inline Conjecture parse_conjecture(const std::string& s) {
    if (s == "umc") return Conjecture::umc;
    if (s == "genminc") return Conjecture::genminc;
    if (s == "wild") return Conjecture::wild;
    throw std::invalid_argument("conjecture must be umc, genminc or wild, got " + s);
}

struct CampaignConfig {
    Conjecture conjecture = Conjecture::umc;
    // umc
    int n = 0;
    int d = 0;
    std::vector<int> ells;  // empty: every l from 1 to N/2
    // genminc / wild
    int ell = 0;  // |X|, or the X-part of the ratio for the sharp family
    int m = 0;    // |Y|, or the Y-part of the ratio
    double p = 0.6;
    std::string family = "random";  // random | sharp
    PhiInterp interp = PhiInterp::gamma;
    // shared
    int samples = 100;
    std::uint64_t seed = 1;
    CountOptions count{};
};

struct Violation {
    std::string graph;  // graph6 for umc, bipartite text otherwise
    int ell = 0;
    double lhs_bits = 0.0;
    double rhs_bits = 0.0;
    std::string lhs_exact;  // umc only
    std::string rhs_exact;
};

struct InstanceResult {
    std::size_t index = 0;
    std::string graph;
    int worst_ell = 0;
    double worst_slack_bits = std::numeric_limits<double>::infinity();
    bool sharp = false;
};

struct CampaignReport {
    CampaignConfig config;
    std::vector<InstanceResult> instances;
    std::vector<Violation> violations;
    std::size_t comparisons = 0;
    double runtime_seconds = 0.0;  // not serialized

    double min_slack_bits() const {
        double s = std::numeric_limits<double>::infinity();
        for (const auto& i : instances) s = std::min(s, i.worst_slack_bits);
        return s;
    }
    std::size_t sharp_candidates() const {
        return static_cast<std::size_t>(std::count_if(instances.begin(), instances.end(), [](const auto& i) { return i.sharp; }));
    }
};

namespace detail {

inline double slack_bits(const BigInt& lhs, const BigInt& rhs) {
    if (lhs == 0) return std::numeric_limits<double>::infinity();
    return log2_big(rhs) - log2_big(lhs);
}

inline void validate(const CampaignConfig& cfg) {
    if (cfg.samples < 0) throw std::invalid_argument("samples must be >= 0");
    if (cfg.conjecture == Conjecture::umc) {
        if (cfg.d < 1 || cfg.n < 2) throw std::invalid_argument("umc campaign needs d >= 1 and N >= 2");
        if (cfg.n % (2 * cfg.d) != 0) throw std::invalid_argument("umc campaign needs 2d | N");
        if (cfg.n > kMaxMemoVertices) throw InfeasibleError("umc campaign needs N <= 64");
        for (int l : cfg.ells)
            if (l < 1 || 2 * l > cfg.n) throw std::invalid_argument("l out of range 1..N/2");
        return;
    }
    if (cfg.ell < 1 || cfg.ell > cfg.m) throw std::invalid_argument("genminc campaign needs 1 <= l <= M");
    if (cfg.family == "random") {
        if (!(cfg.p > 0.0 && cfg.p <= 1.0)) throw std::invalid_argument("edge probability must lie in (0, 1]");
        if (cfg.ell + cfg.m > kMaxMemoVertices) throw InfeasibleError("l + M must be <= 64");
    } else if (cfg.family != "sharp") {
        throw std::invalid_argument("family must be random or sharp, got " + cfg.family);
    }
}

}  // namespace detail

/// UMC: Phi_l(G) <= Phi_l((N/2d) K_{d,d}) for seeded random d-regular G, as exact integers.
inline CampaignReport run_umc_campaign(const CampaignConfig& cfg) {
    if (cfg.conjecture != Conjecture::umc) throw std::invalid_argument("not a umc config");
    detail::validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    CampaignReport r;
    r.config = cfg;
    const MatchingProfile extremal = umc_extremal_profile(cfg.n, cfg.d);
    std::vector<int> ells = cfg.ells;
    if (ells.empty())
        for (int l = 1; 2 * l <= cfg.n; ++l) ells.push_back(l);
    for (int i = 0; i < cfg.samples; ++i) {
        const Graph g = random_regular(cfg.n, cfg.d, cfg.seed + static_cast<std::uint64_t>(i));
        const MatchingProfile prof = matching_profile(g, cfg.count);
        InstanceResult inst;
        inst.index = static_cast<std::size_t>(i);
        inst.graph = emit_graph6(g);
        for (int l : ells) {
            const BigInt& lhs = prof.at(static_cast<std::size_t>(l));
            const BigInt& rhs = extremal.at(static_cast<std::size_t>(l));
            ++r.comparisons;
            const double s = detail::slack_bits(lhs, rhs);
            if (s < inst.worst_slack_bits) {
                inst.worst_slack_bits = s;
                inst.worst_ell = l;
            }
            if (lhs > rhs) r.violations.push_back({inst.graph, l, log2_big(lhs), log2_big(rhs), lhs.str(), rhs.str()});
        }
        inst.sharp = inst.worst_slack_bits < kSharpThresholdBits;
        r.instances.push_back(std::move(inst));
    }
    r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

/// Phi_{|X|}(B) as the product over connected components C of Phi_{|X_C|}(C).
inline BigInt saturating_count(const BipartiteGraph& b, CountOptions opts = {}) {
    const Graph g = b.to_graph();
    std::vector<int> comp(static_cast<std::size_t>(g.n()), -1);
    int parts = 0;
    for (Vertex s = 0; s < g.n(); ++s) {
        if (comp[static_cast<std::size_t>(s)] >= 0) continue;
        std::vector<Vertex> stack{s};
        comp[static_cast<std::size_t>(s)] = parts;
        while (!stack.empty()) {
            const Vertex v = stack.back();
            stack.pop_back();
            for (Vertex w : g.neighbors(v))
                if (comp[static_cast<std::size_t>(w)] < 0) {
                    comp[static_cast<std::size_t>(w)] = parts;
                    stack.push_back(w);
                }
        }
        ++parts;
    }
    BigInt total = 1;
    for (int c = 0; c < parts; ++c) {
        std::vector<bool> keep(static_cast<std::size_t>(g.n()));
        int x_count = 0;
        for (Vertex v = 0; v < g.n(); ++v) {
            keep[static_cast<std::size_t>(v)] = comp[static_cast<std::size_t>(v)] == c;
            if (keep[static_cast<std::size_t>(v)] && v < b.size_x()) ++x_count;
        }
        if (x_count == 0) continue;
        total *= matching_profile(induced_subgraph(g, keep), opts).at(static_cast<std::size_t>(x_count));
        if (total == 0) break;
    }
    return total;
}

inline double exact_log2_saturating(const BipartiteGraph& b, CountOptions opts = {}) {
    return log2_big(saturating_count(b, opts));
}

/// Sample i of the sharp family: 1 + i % 3 disjoint copies of K_{ka, kb},
/// k alternating 1, 2, where a:b is l:M in lowest terms.
inline BipartiteGraph sharp_family_instance(int ell, int m, std::size_t index) {
    const int g = std::gcd(ell, m);
    const int a = ell / g;
    const int b = m / g;
    const int parts = 1 + static_cast<int>(index % 3);
    std::vector<BipartiteGraph> comps;
    for (int j = 0; j < parts; ++j) {
        const int k = 1 + static_cast<int>((index + static_cast<std::size_t>(j)) % 2);
        comps.push_back(complete_bipartite(k * a, k * b));
    }
    return disjoint_union(comps);
}

/// Sample i of the random family: G(l, M, p) redrawn until every X-vertex has
/// an edge and an X-saturating matching exists.
inline BipartiteGraph random_family_instance(const CampaignConfig& cfg, std::size_t index) {
    Rng rng(cfg.seed + index);
    for (;;) {
        BipartiteGraph b = random_bipartite(cfg.ell, cfg.m, cfg.p, rng);
        if (b.min_degree_x() < 1) continue;
        if (saturating_count(b, cfg.count) == 0) continue;
        return b;
    }
}

/// Right-hand side, in bits, of the generalized Minc conjecture or its
/// entropy form.
inline double conjectured_bound(Conjecture c, const BipartiteGraph& b, PhiInterp interp, CountOptions opts = {}) {
    if (c == Conjecture::genminc) return genminc_bound(b, b.size_x());
    if (c == Conjecture::wild) return wild_bound(b, b.size_x(), interp, opts).value_bits;
    throw std::invalid_argument("not a bipartite conjecture");
}

inline CampaignReport run_genminc_campaign(const CampaignConfig& cfg) {
    if (cfg.conjecture == Conjecture::umc) throw std::invalid_argument("not a genminc/wild config");
    detail::validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    CampaignReport r;
    r.config = cfg;
    for (int i = 0; i < cfg.samples; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const BipartiteGraph b =
            cfg.family == "sharp" ? sharp_family_instance(cfg.ell, cfg.m, idx) : random_family_instance(cfg, idx);
        const double lhs = exact_log2_saturating(b, cfg.count);
        const double rhs = conjectured_bound(cfg.conjecture, b, cfg.interp, cfg.count);
        ++r.comparisons;
        InstanceResult inst;
        inst.index = idx;
        inst.graph = emit_bipartite(b);
        inst.worst_ell = b.size_x();
        inst.worst_slack_bits = rhs - lhs;
        inst.sharp = inst.worst_slack_bits < kSharpThresholdBits;
        if (inst.worst_slack_bits < -kViolationTol) r.violations.push_back({inst.graph, inst.worst_ell, lhs, rhs, "", ""});
        r.instances.push_back(std::move(inst));
    }
    r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

inline CampaignReport run_campaign(const CampaignConfig& cfg) {
    return cfg.conjecture == Conjecture::umc ? run_umc_campaign(cfg) : run_genminc_campaign(cfg);
}

/// Recomputes one comparison from the serialized graph alone. Returns
/// (lhsBits, rhsBits, violated).
struct Recheck {
    double lhs_bits = 0.0;
    double rhs_bits = 0.0;
    bool violated = false;
};

inline Recheck recheck(Conjecture c, const std::string& graph, int ell, PhiInterp interp = PhiInterp::gamma) {
    if (c == Conjecture::umc) {
        const Graph g = parse_graph6(graph);
        const auto d = g.regular_degree();
        if (!d || *d < 1) throw std::invalid_argument("recheck: graph is not regular");
        const BigInt lhs = matching_profile(g).at(static_cast<std::size_t>(ell));
        const BigInt rhs = umc_extremal_profile(g.n(), *d).at(static_cast<std::size_t>(ell));
        return {log2_big(lhs), log2_big(rhs), lhs > rhs};
    }
    const BipartiteGraph b = parse_bipartite(graph);
    if (b.size_x() != ell) throw std::invalid_argument("recheck: l must equal |X|");
    const double lhs = exact_log2_saturating(b);
    const double rhs = conjectured_bound(c, b, interp);
    return {lhs, rhs, rhs - lhs < -kViolationTol};
}

inline nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

inline nlohmann::json to_json(const CampaignConfig& c) {
    nlohmann::json j;
    j["conjecture"] = to_string(c.conjecture);
    j["samples"] = c.samples;
    j["seed"] = c.seed;
    if (c.conjecture == Conjecture::umc) {
        j["N"] = c.n;
        j["d"] = c.d;
        j["ells"] = c.ells;
    } else {
        j["ell"] = c.ell;
        j["M"] = c.m;
        j["family"] = c.family;
        if (c.family == "random") j["p"] = c.p;
        if (c.conjecture == Conjecture::wild) j["phiInterp"] = to_string(c.interp);
    }
    return j;
}

/// Report JSON. Runtime is left out so equal configs give identical bytes.
inline nlohmann::json to_json(const CampaignReport& r) {
    nlohmann::json j;
    j["schema"] = kReportSchema;
    j["config"] = to_json(r.config);
    j["instancesTested"] = r.instances.size();
    j["comparisons"] = r.comparisons;
    j["minSlackBits"] = finite_or_null(r.min_slack_bits());
    j["sharpCandidates"] = r.sharp_candidates();
    j["violations"] = nlohmann::json::array();
    for (const auto& v : r.violations) {
        nlohmann::json e{{"graph", v.graph}, {"ell", v.ell}, {"lhsBits", v.lhs_bits}, {"rhsBits", v.rhs_bits}};
        if (!v.lhs_exact.empty()) {
            e["lhsExact"] = v.lhs_exact;
            e["rhsExact"] = v.rhs_exact;
        }
        j["violations"].push_back(std::move(e));
    }
    j["instances"] = nlohmann::json::array();
    for (const auto& i : r.instances)
        j["instances"].push_back({{"index", i.index},
                                  {"graph", i.graph},
                                  {"worstEll", i.worst_ell},
                                  {"worstSlackBits", finite_or_null(i.worst_slack_bits)},
                                  {"sharp", i.sharp}});
    return j;
}

}  // namespace matchbound
