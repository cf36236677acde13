#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "matchbound/bounds.hpp"
#include "matchbound/count.hpp"
#include "matchbound/error.hpp"
#include "matchbound/graph.hpp"
#include "matchbound/numeric.hpp"
#include "matchbound/random.hpp"

// Exact audits of the entropy argument on tiny bipartite graphs B on S u Y
// with |S| = l. The sample space is every pair (f, sigma) of an l-matching
// f: S -> Y and an ordering sigma of S, uniformly weighted. Z_x is the set of
// Y-vertices not used by f before x in the order sigma; Y_x is f restricted
// to the vertices before x.

namespace matchbound {

inline constexpr int kProofLabMaxEll = 4;
inline constexpr int kProofLabMaxY = 5;
inline constexpr double kProofLabTol = 1e-9;

/// t/(1-t) log2(1/t), with 0 at t = 0 and log2(e) at t = 1.
inline double entropy_f(double t) {
    if (t == 0.0) return 0.0;
    if (t == 1.0) return kLog2E;
    return t / (1.0 - t) * (-std::log1p(t - 1.0) * kLog2E);
}

namespace detail {

/// H(A | B) from joint counts keyed by (b, a).
template <class K>
double conditional_entropy(const std::map<std::pair<K, int>, std::uint64_t>& joint, std::uint64_t total) {
    std::map<K, std::uint64_t> marginal;
    for (const auto& [key, c] : joint) marginal[key.first] += c;
    double h = 0.0;
    for (const auto& [key, c] : joint)
        h += static_cast<double>(c) / static_cast<double>(total) *
             std::log2(static_cast<double>(marginal.at(key.first)) / static_cast<double>(c));
    return h;
}

}  // namespace detail

/// Every (matching, ordering) outcome of a tiny instance.
class ProofLabSpace {
public:
    ProofLabSpace(const BipartiteGraph& b, int ell) : b_(b), ell_(ell) {
        if (b.size_x() != ell) throw std::invalid_argument("proof lab needs sizeX == l");
        if (ell < 1) throw std::invalid_argument("proof lab needs l >= 1");
        if (ell > kProofLabMaxEll || b.size_y() > kProofLabMaxY)
            throw InfeasibleError("proof lab caps: l <= 4 and M <= 5");
        if (ell > b.size_y()) throw std::invalid_argument("proof lab needs l <= M");
        std::vector<int> f(static_cast<std::size_t>(ell));
        std::vector<char> used(static_cast<std::size_t>(b.size_y()), 0);
        auto dfs = [&](auto&& self, Vertex x) -> void {
            if (x == ell) {
                matchings_.push_back(f);
                return;
            }
            for (Vertex y : b.neighbors_x(x)) {
                if (used[static_cast<std::size_t>(y)]) continue;
                used[static_cast<std::size_t>(y)] = 1;
                f[static_cast<std::size_t>(x)] = y;
                self(self, x + 1);
                used[static_cast<std::size_t>(y)] = 0;
            }
        };
        dfs(dfs, 0);
        if (matchings_.empty()) throw std::invalid_argument("no X-saturating matching");

        std::vector<int> pos(static_cast<std::size_t>(ell));
        std::iota(pos.begin(), pos.end(), 0);
        do orderings_.push_back(pos);
        while (std::next_permutation(pos.begin(), pos.end()));
    }

    const BipartiteGraph& graph() const { return b_; }
    int ell() const { return ell_; }
    int m() const { return b_.size_y(); }
    const std::vector<std::vector<int>>& matchings() const { return matchings_; }
    /// pos[w] = place of w in the order.
    const std::vector<std::vector<int>>& orderings() const { return orderings_; }
    std::uint64_t total() const { return matchings_.size() * orderings_.size(); }

    /// Y-vertices used before x.
    std::uint32_t used_before(const std::vector<int>& f, const std::vector<int>& pos, Vertex x) const {
        std::uint32_t mask = 0;
        for (Vertex w = 0; w < ell_; ++w)
            if (pos[static_cast<std::size_t>(w)] < pos[static_cast<std::size_t>(x)]) mask |= 1u << f[static_cast<std::size_t>(w)];
        return mask;
    }

    std::uint32_t z_mask(const std::vector<int>& f, const std::vector<int>& pos, Vertex x) const {
        return ((1u << m()) - 1) & ~used_before(f, pos, x);
    }

    /// Exact Pr(f(x) = y).
    Rational p(Vertex x, Vertex y) const {
        std::uint64_t c = 0;
        for (const auto& f : matchings_)
            if (f[static_cast<std::size_t>(x)] == y) ++c;
        return Rational(BigInt(c), BigInt(matchings_.size()));
    }

    /// Exact Pr(y in R(f)).
    Rational mu(Vertex y) const {
        std::uint64_t c = 0;
        for (const auto& f : matchings_)
            if (std::find(f.begin(), f.end(), y) != f.end()) ++c;
        return Rational(BigInt(c), BigInt(matchings_.size()));
    }

private:
    BipartiteGraph b_;
    int ell_;
    std::vector<std::vector<int>> matchings_;
    std::vector<std::vector<int>> orderings_;
};

// ---------------------------------------------------------------------------
// |Z_x| distribution and the r_k formula

struct FormulaCheck {
    std::string name;
    bool pass = false;
};

struct DistributionAudit {
    Vertex x = 0;
    std::optional<Vertex> y;                          // set by rk_formula_audit
    int ell = 0;
    int m = 0;
    std::vector<Rational> q;                          // q[k] = Pr(|Z_x| = k), k = 0..M
    std::vector<std::vector<Rational>> q_given_y;     // [y][k] = Pr(|Z_x| = k | f(x) = y); empty row if p(x,y) = 0
    std::vector<std::vector<Rational>> r;             // [y][k] = Pr(|Z_x| = k, y in Z_x)
    std::vector<std::vector<Rational>> r_predicted;   // [y][k] from the closed form; rk_formula_audit only
    std::vector<FormulaCheck> checks;

    bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const FormulaCheck& c) { return c.pass; });
    }
};

/// q_k(y) [(mu_y - p)(k - (M - l) - 1)/(l - 1) + (nu_y + p)] for M - l + 1 <= k <= M,
/// with the bracket read as nu_y + p when l = 1.
inline Rational rk_closed_form(int ell, int m, int k, const Rational& q_k, const Rational& mu_y, const Rational& pxy) {
    if (k <= m - ell) return 0;
    const Rational nu_y = 1 - mu_y;
    Rational bracket = nu_y + pxy;
    if (ell > 1) bracket += (mu_y - pxy) * Rational(k - (m - ell) - 1, ell - 1);
    return q_k * bracket;
}

namespace detail {

inline DistributionAudit distribution_tables(const ProofLabSpace& s, Vertex x) {
    if (x < 0 || x >= s.ell()) throw std::invalid_argument("x out of range");
    const int m = s.m();
    const auto msz = static_cast<std::size_t>(m);
    DistributionAudit a;
    a.x = x;
    a.ell = s.ell();
    a.m = m;
    std::vector<std::uint64_t> qc(msz + 1, 0);
    std::vector<std::vector<std::uint64_t>> qyc(msz, std::vector<std::uint64_t>(msz + 1, 0));
    std::vector<std::uint64_t> yc(msz, 0);
    std::vector<std::vector<std::uint64_t>> rc(msz, std::vector<std::uint64_t>(msz + 1, 0));
    for (const auto& f : s.matchings()) {
        for (const auto& pos : s.orderings()) {
            const std::uint32_t z = s.z_mask(f, pos, x);
            const auto k = static_cast<std::size_t>(std::popcount(z));
            const auto fy = static_cast<std::size_t>(f[static_cast<std::size_t>(x)]);
            ++qc[k];
            ++qyc[fy][k];
            ++yc[fy];
            for (std::size_t y = 0; y < msz; ++y)
                if (z & (1u << y)) ++rc[y][k];
        }
    }
    const BigInt total(s.total());
    for (std::size_t k = 0; k <= msz; ++k) a.q.emplace_back(BigInt(qc[k]), total);
    a.q_given_y.resize(msz);
    a.r.resize(msz);
    for (std::size_t y = 0; y < msz; ++y) {
        for (std::size_t k = 0; k <= msz; ++k) a.r[y].emplace_back(BigInt(rc[y][k]), total);
        if (yc[y] == 0) continue;
        for (std::size_t k = 0; k <= msz; ++k) a.q_given_y[y].emplace_back(BigInt(qyc[y][k]), BigInt(yc[y]));
    }

    bool sums = true;
    bool shape = true;
    bool independent = true;
    bool r_le_q = true;
    Rational qsum = 0;
    for (std::size_t k = 0; k <= msz; ++k) {
        qsum += a.q[k];
        const Rational expected = static_cast<int>(k) <= m - s.ell() ? Rational(0) : Rational(1, s.ell());
        if (a.q[k] != expected) shape = false;
    }
    if (qsum != 1) sums = false;
    for (std::size_t y = 0; y < msz; ++y) {
        if (!a.q_given_y[y].empty() && a.q_given_y[y] != a.q) independent = false;
        for (std::size_t k = 0; k <= msz; ++k)
            if (a.r[y][k] > a.q[k]) r_le_q = false;
    }
    a.checks.push_back({"q_sums_to_one", sums});
    a.checks.push_back({"q_shape", shape});
    a.checks.push_back({"q_independent_of_f", independent});
    a.checks.push_back({"r_le_q", r_le_q});
    return a;
}

}  // namespace detail

/// Exact law of |Z_x|: 0 for k <= M - l and 1/l for M - l + 1 <= k <= M.
inline DistributionAudit zx_distribution_audit(const BipartiteGraph& b, int ell, Vertex x) {
    return detail::distribution_tables(ProofLabSpace(b, ell), x);
}

/// Enumerated r_k(y) against the closed form, as exact rationals.
inline DistributionAudit rk_formula_audit(const BipartiteGraph& b, int ell, Vertex x, Vertex y) {
    const ProofLabSpace s(b, ell);
    if (y < 0 || y >= s.m()) throw std::invalid_argument("y out of range");
    const Rational pxy = s.p(x, y);
    if (pxy == 0) throw std::invalid_argument("rk_formula_audit needs p(x,y) > 0");
    DistributionAudit a = detail::distribution_tables(s, x);
    a.y = y;
    const Rational mu_y = s.mu(y);
    const auto yi = static_cast<std::size_t>(y);
    a.r_predicted.assign(static_cast<std::size_t>(s.m()), {});
    bool ok = true;
    for (int k = 0; k <= s.m(); ++k) {
        const Rational pred = rk_closed_form(ell, s.m(), k, a.q[static_cast<std::size_t>(k)], mu_y, pxy);
        a.r_predicted[yi].push_back(pred);
        if (pred != a.r[yi][static_cast<std::size_t>(k)]) ok = false;
    }
    a.checks.push_back({"r_formula", ok});
    return a;
}

// ---------------------------------------------------------------------------
// Inequality chain

struct StepCheck {
    std::string name;
    bool pass = false;
    double worst_margin = 0.0;  // min over instances of (rhs - lhs), bits
};

struct ChainAudit {
    std::string graph_id;
    int ell = 0;
    std::vector<std::pair<std::string, double>> checkpoints;  // c0..c5
    double chain_rule_gap = 0.0;
    std::vector<StepCheck> steps;
    bool pass = false;
};

/// c0 = log2 Phi_l = H(f)
/// c1 = sum_x H(f(x) | Z_x)
/// c2 = sum_x [H(f(x)) + sum_y p F(x,y)]
/// c3 = sum_x [H(f(x)) + sum_y p (f(nu_y + p) - log2 e)]
/// c4 = sum_x log2 d_x + sum_{x,y} p [f(p) - log2(d_x p)] + M [H(a) + a log2(a/e)]
/// c5 = the bipartite bound with S = X.
inline ChainAudit inequality_chain_audit(const BipartiteGraph& b, int ell, std::string graph_id = "B") {
    const ProofLabSpace s(b, ell);
    if (b.min_degree_x() < 1) throw IsolatedVertexError("inequality_chain_audit: isolated S-vertex");
    const int m = s.m();
    const auto msz = static_cast<std::size_t>(m);
    const std::uint64_t total = s.total();
    const double alpha = static_cast<double>(ell) / m;

    std::vector<std::vector<double>> p(static_cast<std::size_t>(ell), std::vector<double>(msz, 0.0));
    std::vector<std::vector<Rational>> p_exact(static_cast<std::size_t>(ell));
    std::vector<double> mu(msz), nu(msz);
    for (std::size_t y = 0; y < msz; ++y) {
        const Rational mu_y = s.mu(static_cast<Vertex>(y));
        mu[y] = to_double(mu_y);
        nu[y] = to_double(1 - mu_y);
    }
    std::vector<double> h_fx(static_cast<std::size_t>(ell), 0.0);
    for (Vertex x = 0; x < ell; ++x) {
        const auto xi = static_cast<std::size_t>(x);
        for (Vertex y = 0; y < m; ++y) {
            p_exact[xi].push_back(s.p(x, y));
            const double v = to_double(p_exact[xi].back());
            p[xi][static_cast<std::size_t>(y)] = v;
            if (v > 0) h_fx[xi] -= v * std::log2(v);
        }
    }

    const double c0 = std::log2(static_cast<double>(s.matchings().size()));

    // Chain rule and c1 from joint laws.
    double chain = 0.0;
    double c1 = 0.0;
    for (Vertex x = 0; x < ell; ++x) {
        std::map<std::pair<std::uint64_t, int>, std::uint64_t> by_history;
        std::map<std::pair<std::uint32_t, int>, std::uint64_t> by_z;
        for (const auto& f : s.matchings()) {
            for (const auto& pos : s.orderings()) {
                std::uint64_t history = 0;  // 3 bits per S-vertex: 0 if later, else f(w) + 1
                for (Vertex w = 0; w < ell; ++w)
                    if (pos[static_cast<std::size_t>(w)] < pos[static_cast<std::size_t>(x)])
                        history |= static_cast<std::uint64_t>(f[static_cast<std::size_t>(w)] + 1) << (3 * w);
                const int fx = f[static_cast<std::size_t>(x)];
                ++by_history[{history, fx}];
                ++by_z[{s.z_mask(f, pos, x), fx}];
            }
        }
        chain += detail::conditional_entropy(by_history, total);
        c1 += detail::conditional_entropy(by_z, total);
    }

    // c2 via the exact q/r tables, with the per-pair refinement.
    double c2 = 0.0;
    double c3 = 0.0;
    double worst_pair_left = INFINITY;
    double worst_pair_right = INFINITY;
    for (Vertex x = 0; x < ell; ++x) {
        const auto xi = static_cast<std::size_t>(x);
        const DistributionAudit tables = detail::distribution_tables(s, x);
        c2 += h_fx[xi];
        c3 += h_fx[xi];
        for (std::size_t y = 0; y < msz; ++y) {
            const double pxy = p[xi][y];
            if (pxy == 0.0) continue;
            double fxy = 0.0;
            for (std::size_t k = 0; k <= msz; ++k) {
                const Rational& qk = tables.q_given_y[y][k];
                if (qk == 0) continue;
                fxy += to_double(qk) * log2_rational(tables.r[y][k] / qk);
            }
            const double g = entropy_f(nu[y] + pxy);
            c2 += pxy * fxy;
            c3 += pxy * (g - kLog2E);

            auto u = [&](double t) { return std::log2((mu[y] - pxy) * t + (nu[y] + pxy)); };
            double middle = 0.0;
            if (ell == 1) {
                middle = u(0.0);
            } else {
                for (int j = 0; j < ell; ++j) middle += u(static_cast<double>(j) / (ell - 1)) / ell;
            }
            worst_pair_left = std::min(worst_pair_left, middle - fxy);
            worst_pair_right = std::min(worst_pair_right, (g - kLog2E) - middle);
        }
    }

    // c4, the g_x step and the middle step.
    const std::vector<int> dx = b.degrees_x();
    const double tail = m * (binary_entropy(alpha) + detail::alpha_log_alpha_over_e(alpha));
    double c4 = tail;
    double worst_gx = INFINITY;
    for (Vertex x = 0; x < ell; ++x) {
        const auto xi = static_cast<std::size_t>(x);
        const double d = dx[xi];
        c4 += std::log2(d);
        double gx = 0.0;
        for (std::size_t y = 0; y < msz; ++y) {
            const double pxy = p[xi][y];
            if (pxy == 0.0) continue;
            gx += pxy * (entropy_f(pxy) - std::log2(d * pxy));
        }
        c4 += gx;
        worst_gx = std::min(worst_gx, log_ratio(d) - gx);
    }
    double delta = 0.0;
    for (double v : nu)
        if (v > 0.0) delta -= v * std::log2(v);
    const double middle_margin = m * (binary_entropy(alpha) + (alpha > 0 ? alpha * std::log2(alpha) : 0.0)) - delta;

    const double c5 = thm_bipartite_bound(b, ell);

    ChainAudit a;
    a.graph_id = std::move(graph_id);
    a.ell = ell;
    a.checkpoints = {{"c0", c0}, {"c1", c1}, {"c2", c2}, {"c3", c3}, {"c4", c4}, {"c5", c5}};
    a.chain_rule_gap = std::abs(c0 - chain);

    bool monotone = true;
    double worst_step = INFINITY;
    for (std::size_t i = 1; i < a.checkpoints.size(); ++i) {
        const double margin = a.checkpoints[i].second - a.checkpoints[i - 1].second;
        worst_step = std::min(worst_step, margin);
        if (margin < -kProofLabTol) monotone = false;
    }
    auto step = [](std::string name, double margin) { return StepCheck{std::move(name), margin >= -kProofLabTol, margin}; };
    a.steps.push_back(step("monotone_chain", worst_step));
    a.steps.push_back(step("chain_rule", -a.chain_rule_gap));
    if (std::isfinite(worst_pair_left)) {
        a.steps.push_back(step("pair_F_le_average_U", worst_pair_left));
        a.steps.push_back(step("pair_average_U_le_G", worst_pair_right));
    }
    a.steps.push_back(step("gx_step", worst_gx));
    a.steps.push_back(step("middle_step", middle_margin));
    a.pass = monotone && std::all_of(a.steps.begin(), a.steps.end(), [](const StepCheck& c) { return c.pass; });
    return a;
}

// ---------------------------------------------------------------------------
// Catalog

struct CatalogEntry {
    std::string id;
    BipartiteGraph graph{1, 1};
    int ell = 0;
};

/// Every neighborhood pattern with |S| = 2 and 2 <= M <= 4 that has a
/// 2-matching, then `random_count` seeded instances with l in {1, 3, 4}.
inline std::vector<CatalogEntry> tiny_bipartite_catalog(std::uint64_t seed = 1, int random_count = 30) {
    std::vector<CatalogEntry> out;
    for (int m = 2; m <= 4; ++m) {
        const int full = (1 << m) - 1;
        for (int a = 1; a <= full; ++a) {
            for (int c = 1; c <= full; ++c) {
                BipartiteGraph b(2, m);
                for (int y = 0; y < m; ++y) {
                    if (a & (1 << y)) b.add_edge(0, y);
                    if (c & (1 << y)) b.add_edge(1, y);
                }
                if (matching_profile(b.to_graph()).at(2) == 0) continue;
                out.push_back({"s2m" + std::to_string(m) + "-" + std::to_string(a) + "-" + std::to_string(c), b, 2});
            }
        }
    }
    Rng rng(seed);
    constexpr int kEll[] = {1, 3, 4};
    for (int i = 0; i < random_count; ++i) {
        const int ell = kEll[i % 3];
        const int m = ell + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(kProofLabMaxY - ell + 1)));
        for (;;) {
            BipartiteGraph b = random_bipartite(ell, m, 0.6, rng);
            if (b.min_degree_x() < 1 || matching_profile(b.to_graph()).at(static_cast<std::size_t>(ell)) == 0) continue;
            out.push_back({"rand" + std::to_string(i) + "-l" + std::to_string(ell) + "m" + std::to_string(m), std::move(b), ell});
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json rationals_to_json(const std::vector<Rational>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Rational& r : v) arr.push_back(to_string(r));
    return arr;
}

inline nlohmann::json to_json(const DistributionAudit& a) {
    nlohmann::json j;
    j["x"] = a.x;
    j["y"] = a.y ? nlohmann::json(*a.y) : nlohmann::json(nullptr);
    j["ell"] = a.ell;
    j["M"] = a.m;
    j["pass"] = a.pass();
    j["qTable"] = rationals_to_json(a.q);
    nlohmann::json r = nlohmann::json::object();
    for (std::size_t y = 0; y < a.r.size(); ++y) r[std::to_string(y)] = rationals_to_json(a.r[y]);
    j["rTable"] = r;
    if (a.y) j["rPredicted"] = rationals_to_json(a.r_predicted[static_cast<std::size_t>(*a.y)]);
    nlohmann::json checks = nlohmann::json::object();
    for (const auto& c : a.checks) checks[c.name] = c.pass;
    j["checks"] = checks;
    return j;
}

inline nlohmann::json to_json(const ChainAudit& a) {
    nlohmann::json j;
    j["graphId"] = a.graph_id;
    j["ell"] = a.ell;
    j["pass"] = a.pass;
    j["chainRuleGap"] = a.chain_rule_gap;
    j["checkpoints"] = nlohmann::json::array();
    for (const auto& [label, v] : a.checkpoints) j["checkpoints"].push_back({{"label", label}, {"valueBits", v}});
    j["steps"] = nlohmann::json::array();
    for (const auto& s : a.steps) j["steps"].push_back({{"name", s.name}, {"pass", s.pass}, {"worstMarginBits", s.worst_margin}});
    return j;
}

}  // namespace matchbound
