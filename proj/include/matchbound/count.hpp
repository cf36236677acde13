#pragma once

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "matchbound/error.hpp"
#include "matchbound/graph.hpp"
#include "matchbound/numeric.hpp"

namespace matchbound {

/// Exact counts Phi_0, Phi_1, ... of l-matchings. Stored without trailing
/// zeros, so the last index is the maximum matching size; `at()` returns 0
/// past the end.
class MatchingProfile {
public:
    MatchingProfile() : counts_{1} {}

    explicit MatchingProfile(std::vector<BigInt> counts) : counts_(std::move(counts)) {
        while (counts_.size() > 1 && counts_.back() == 0) counts_.pop_back();
        if (counts_.empty()) counts_.push_back(0);
    }

    const std::vector<BigInt>& counts() const { return counts_; }
    std::size_t max_matching_size() const { return counts_.size() - 1; }

    BigInt at(std::size_t ell) const { return ell < counts_.size() ? counts_[ell] : BigInt(0); }

    friend bool operator==(const MatchingProfile&, const MatchingProfile&) = default;

private:
    std::vector<BigInt> counts_;
};

/// c[l] = sum_j a[j] * b[l-j]: the profile of a disjoint union.
inline MatchingProfile profile_convolution(const MatchingProfile& a, const MatchingProfile& b) {
    const auto& ca = a.counts();
    const auto& cb = b.counts();
    std::vector<BigInt> out(ca.size() + cb.size() - 1);
    for (std::size_t i = 0; i < ca.size(); ++i)
        for (std::size_t j = 0; j < cb.size(); ++j) out[i + j] += ca[i] * cb[j];
    return MatchingProfile(std::move(out));
}

inline constexpr std::size_t kDefaultMemoCap = std::size_t{1} << 24;
inline constexpr int kMaxMemoVertices = 64;
inline constexpr std::size_t kBruteForceEdgeCap = 24;

struct CountOptions {
    std::size_t memo_cap = kDefaultMemoCap;
};

/// Reads MATCHBOUND_MEMO_CAP, falling back to the default cap.
inline CountOptions count_options_from_env() {
    CountOptions opts;
    if (const char* env = std::getenv("MATCHBOUND_MEMO_CAP")) {
        try {
            opts.memo_cap = static_cast<std::size_t>(std::stoull(env));
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("MATCHBOUND_MEMO_CAP is not a number: ") + env);
        }
    }
    return opts;
}

/// Vertex-removal recurrence
///   Phi(G) = Phi(G - v) + sum_{u ~ v} z * Phi(G - v - u)
/// memoized on the bitmask of live vertices. Isolated vertices are dropped
/// from the key; the pivot is the lowest-index vertex of maximum residual
/// degree. One counter serves any number of induced-subgraph queries on the
/// same graph and shares its memo across them.
class ProfileCounter {
public:
    explicit ProfileCounter(const Graph& g, CountOptions opts = {}) : cap_(opts.memo_cap) {
        if (g.n() > kMaxMemoVertices)
            throw InfeasibleError("memoized counting supports n <= 64, got n=" + std::to_string(g.n()));
        nbr_.reserve(static_cast<std::size_t>(g.n()));
        for (Vertex v = 0; v < g.n(); ++v) nbr_.push_back(g.neighbor_mask(v));
        full_ = g.n() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << g.n()) - 1;
    }

    std::uint64_t full_mask() const { return full_; }

    MatchingProfile profile() { return MatchingProfile(count(full_)); }

    /// Profile of the subgraph induced on `mask`.
    MatchingProfile profile(std::uint64_t mask) { return MatchingProfile(count(mask & full_)); }

    std::size_t memo_size() const { return memo_.size(); }

private:
    std::vector<BigInt> count(std::uint64_t mask) {
        std::uint64_t live = 0;
        for (std::uint64_t m = mask; m; m &= m - 1) {
            const int v = std::countr_zero(m);
            if (nbr_[static_cast<std::size_t>(v)] & mask) live |= std::uint64_t{1} << v;
        }
        if (live == 0) return {BigInt(1)};
        if (auto it = memo_.find(live); it != memo_.end()) return it->second;

        int pivot = -1;
        int best = -1;
        for (std::uint64_t m = live; m; m &= m - 1) {
            const int v = std::countr_zero(m);
            const int deg = std::popcount(nbr_[static_cast<std::size_t>(v)] & live);
            if (deg > best) {
                best = deg;
                pivot = v;
            }
        }
        const std::uint64_t rest = live & ~(std::uint64_t{1} << pivot);
        std::vector<BigInt> result = count(rest);
        for (std::uint64_t m = nbr_[static_cast<std::size_t>(pivot)] & live; m; m &= m - 1) {
            const int u = std::countr_zero(m);
            const std::vector<BigInt> sub = count(rest & ~(std::uint64_t{1} << u));
            if (result.size() < sub.size() + 1) result.resize(sub.size() + 1);
            for (std::size_t k = 0; k < sub.size(); ++k) result[k + 1] += sub[k];
        }
        if (memo_.size() >= cap_)
            throw InfeasibleError("matching profile memo exceeded " + std::to_string(cap_) + " entries");
        memo_.emplace(live, result);
        return result;
    }

    std::vector<std::uint64_t> nbr_;
    std::uint64_t full_ = 0;
    std::size_t cap_;
    std::unordered_map<std::uint64_t, std::vector<BigInt>> memo_;
};

/// Exact matching profile of G (n <= 64).
inline MatchingProfile matching_profile(const Graph& g, CountOptions opts = {}) {
    ProfileCounter counter(g, opts);
    return counter.profile();
}

/// Depth-first enumeration over the edge list (take the edge if both ends
/// are free, or skip it). No memoization; kept independent of ProfileCounter.
inline MatchingProfile matching_profile_bruteforce(const Graph& g) {
    const auto& edges = g.edges();
    if (edges.size() > kBruteForceEdgeCap)
        throw InfeasibleError("brute-force enumeration supports at most 24 edges, got " + std::to_string(edges.size()));
    std::vector<std::uint64_t> counts(edges.size() + 1, 0);
    std::vector<char> used(static_cast<std::size_t>(g.n()), 0);
    auto dfs = [&](auto&& self, std::size_t i, std::size_t size) -> void {
        if (i == edges.size()) {
            ++counts[size];
            return;
        }
        self(self, i + 1, size);
        const Edge& e = edges[i];
        auto& a = used[static_cast<std::size_t>(e.u)];
        auto& b = used[static_cast<std::size_t>(e.v)];
        if (!a && !b) {
            a = b = 1;
            self(self, i + 1, size + 1);
            a = b = 0;
        }
    };
    dfs(dfs, 0, 0);
    std::vector<BigInt> out;
    out.reserve(counts.size());
    for (auto c : counts) out.emplace_back(c);
    return MatchingProfile(std::move(out));
}

/// Phi_l(K_{d,d}) = C(d,l)^2 l!.
inline MatchingProfile kdd_profile(int d) {
    if (d < 1) throw std::invalid_argument("kdd_profile needs d >= 1");
    std::vector<BigInt> out;
    for (int ell = 0; ell <= d; ++ell) {
        const BigInt c = binomial(static_cast<unsigned>(d), static_cast<unsigned>(ell));
        out.push_back(c * c * factorial(static_cast<unsigned>(ell)));
    }
    return MatchingProfile(std::move(out));
}

/// Profile of (N/2d) K_{d,d} by repeated convolution.
inline MatchingProfile umc_extremal_profile(int n, int d) {
    if (d < 1 || n < 1 || n % (2 * d) != 0) throw std::invalid_argument("2d must divide N");
    const MatchingProfile one = kdd_profile(d);
    MatchingProfile out;
    for (int k = 0; k < n / (2 * d); ++k) out = profile_convolution(out, one);
    return out;
}

// ---------------------------------------------------------------------------
// Marginals of a uniform X-saturating l-matching.

struct MarginalTable {
    int ell = 0;
    BigInt total;                           // Phi_l(B)
    std::vector<std::vector<Rational>> p;   // [x][y] = Pr(f(x) = y)
    std::vector<Rational> mu;               // Pr(y is covered)
    std::vector<Rational> nu;               // 1 - mu
    std::vector<double> h_edge;             // H(f(x)) in bits
};

/// p(x,y) = Phi_{l-1}(B - x - y) / Phi_l(B) for the uniform l-matching of a
/// bipartite graph with |X| = l.
inline MarginalTable matching_marginals(const BipartiteGraph& b, int ell, CountOptions opts = {}) {
    if (b.size_x() != ell) throw std::invalid_argument("matching_marginals needs sizeX == l");
    if (ell > b.size_y()) throw std::invalid_argument("matching_marginals needs l <= sizeY");
    const Graph g = b.to_graph();
    ProfileCounter counter(g, opts);
    const std::uint64_t full = counter.full_mask();

    MarginalTable t;
    t.ell = ell;
    t.total = counter.profile().at(static_cast<std::size_t>(ell));
    if (t.total == 0) throw std::invalid_argument("no X-saturating matching");

    const auto sx = static_cast<std::size_t>(b.size_x());
    const auto sy = static_cast<std::size_t>(b.size_y());
    t.p.assign(sx, std::vector<Rational>(sy, Rational(0)));
    t.mu.assign(sy, Rational(0));
    t.h_edge.assign(sx, 0.0);
    for (Vertex x = 0; x < b.size_x(); ++x) {
        for (Vertex y : b.neighbors_x(x)) {
            const std::uint64_t rest = full & ~(std::uint64_t{1} << b.x_index(x)) & ~(std::uint64_t{1} << b.y_index(y));
            const BigInt sub = counter.profile(rest).at(static_cast<std::size_t>(ell - 1));
            Rational& pxy = t.p[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
            pxy = Rational(sub, t.total);
            t.mu[static_cast<std::size_t>(y)] += pxy;
            if (sub != 0) t.h_edge[static_cast<std::size_t>(x)] -= to_double(pxy) * log2_rational(pxy);
        }
    }
    t.nu.reserve(sy);
    for (const Rational& m : t.mu) t.nu.push_back(1 - m);
    return t;
}

// ---------------------------------------------------------------------------
// JSON: counts as decimal strings.

inline nlohmann::json to_json(const MatchingProfile& p) {
    nlohmann::json arr = nlohmann::json::array();
    for (const BigInt& c : p.counts()) arr.push_back(c.str());
    return arr;
}

inline MatchingProfile profile_from_json(const nlohmann::json& j) {
    std::vector<BigInt> counts;
    for (const auto& item : j) counts.emplace_back(item.get<std::string>());
    if (counts.empty()) throw std::invalid_argument("empty profile");
    return MatchingProfile(std::move(counts));
}

inline nlohmann::json to_json(const MarginalTable& t) {
    nlohmann::json j;
    j["ell"] = t.ell;
    j["total"] = t.total.str();
    auto& p = j["p"] = nlohmann::json::array();
    for (const auto& row : t.p) {
        nlohmann::json r = nlohmann::json::array();
        for (const Rational& v : row) r.push_back(to_string(v));
        p.push_back(std::move(r));
    }
    for (const Rational& v : t.mu) j["mu"].push_back(to_string(v));
    for (const Rational& v : t.nu) j["nu"].push_back(to_string(v));
    j["hEdgeBits"] = t.h_edge;
    return j;
}

}  // namespace matchbound
