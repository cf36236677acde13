#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "matchbound/count.hpp"
#include "matchbound/error.hpp"
#include "matchbound/graph.hpp"
#include "matchbound/numeric.hpp"

// All quantities are in bits (log base 2). Conventions: 0 log 0 = 0, and
// log(x)/(x-1) is read as log2(e) at x = 1.

namespace matchbound {

inline double binary_entropy(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("binary_entropy needs 0 <= alpha <= 1");
    double h = 0.0;
    if (alpha > 0.0) h -= alpha * std::log2(alpha);
    if (alpha < 1.0) h -= (1.0 - alpha) * std::log2(1.0 - alpha);
    return h;
}

/// log2(x) / (x - 1), continuous at x = 1 where it equals log2(e).
inline double log_ratio(double x) {
    if (!(x >= 1.0)) throw std::invalid_argument("log_ratio needs x >= 1");
    if (x == 1.0) return kLog2E;
    // log1p keeps full precision just above 1.
    return std::log1p(x - 1.0) * kLog2E / (x - 1.0);
}

namespace detail {

/// alpha * log2(alpha / e), zero at alpha = 0.
inline double alpha_log_alpha_over_e(double alpha) { return alpha == 0.0 ? 0.0 : alpha * (std::log2(alpha) - kLog2E); }

inline void check_degree_range(int n, int d, int ell) {
    if (d < 1) throw std::invalid_argument("degree must be >= 1");
    if (n < 1 || ell < 0 || 2 * ell > n) throw std::invalid_argument("need 0 <= 2l <= N");
}

}  // namespace detail

/// log2 of prod_x (d_x!)^(1/d_x).
inline double bregman_bound(std::span<const int> degrees) {
    double total = 0.0;
    for (int d : degrees) {
        if (d < 1) throw IsolatedVertexError("bregman_bound: zero degree");
        total += log2_big(factorial(static_cast<unsigned>(d))) / d;
    }
    return total;
}

/// (N/2) [alpha log d + H(alpha)], alpha = 2l/N.
inline double cgt_bound(int n, int d, int ell) {
    detail::check_degree_range(n, d, ell);
    const double alpha = 2.0 * ell / n;
    return n / 2.0 * (alpha * std::log2(d) + binary_entropy(alpha));
}

/// Leading term of log2 Phi_l((N/2d) K_{d,d}) without the o_d(1) correction.
inline double umc_extremal_main_term(int n, int d, int ell) {
    detail::check_degree_range(n, d, ell);
    const double alpha = 2.0 * ell / n;
    return n / 2.0 * (alpha * std::log2(d) + 2.0 * binary_entropy(alpha) + detail::alpha_log_alpha_over_e(alpha));
}

/// Upper bound on log2 Phi_l(G) for d-regular G on N vertices.
inline double thm_dregular_bound(int n, int d, int ell) {
    detail::check_degree_range(n, d, ell);
    const double alpha = 2.0 * ell / n;
    return n / 2.0 *
           (alpha * std::log2(d) + 2.0 * binary_entropy(alpha) + detail::alpha_log_alpha_over_e(alpha) + log_ratio(d));
}

/// e_l(degrees) exactly, by the one-pass DP e_k <- e_k + d * e_{k-1}.
inline BigInt elementary_symmetric(std::span<const int> degrees, int ell) {
    if (ell < 0 || static_cast<std::size_t>(ell) > degrees.size())
        throw std::invalid_argument("elementary_symmetric needs 0 <= l <= |W|");
    std::vector<BigInt> e(static_cast<std::size_t>(ell) + 1, BigInt(0));
    e[0] = 1;
    for (int d : degrees)
        for (std::size_t k = e.size() - 1; k >= 1; --k) e[k] += e[k - 1] * d;
    return e.back();
}

inline double elementary_symmetric_log(std::span<const int> degrees, int ell) {
    return log2_big(elementary_symmetric(degrees, ell));
}

/// Bipartite bound: log2 d_l(X) + |Y| [H(a) + a log2(a/e) + log_ratio(min d_x)],
/// a = l/|Y|.
inline double thm_bipartite_bound(const BipartiteGraph& b, int ell) {
    if (ell < 0 || ell > std::min(b.size_x(), b.size_y())) throw std::invalid_argument("need 0 <= l <= min(|X|, |Y|)");
    if (b.size_x() == 0 || b.min_degree_x() < 1) throw IsolatedVertexError("thm_bipartite_bound: isolated X-vertex");
    const std::vector<int> dx = b.degrees_x();
    const int m = b.size_y();
    const double alpha = static_cast<double>(ell) / m;
    return elementary_symmetric_log(dx, ell) +
           m * (binary_entropy(alpha) + detail::alpha_log_alpha_over_e(alpha) + log_ratio(b.min_degree_x()));
}

/// General bound: (1/2) log2 d_{2l}(V) + (N/2) [H(a) + a log2(a/e) + log_ratio(min degree)],
/// a = 2l/N.
inline double thm_general_bound(const Graph& g, int ell) {
    if (g.min_degree() < 1) throw IsolatedVertexError("thm_general_bound: isolated vertex");
    const int n = g.n();
    if (ell < 0 || 2 * ell > n) throw std::invalid_argument("need 0 <= 2l <= N");
    const double alpha = 2.0 * ell / n;
    const std::vector<int> deg = g.degrees();
    return 0.5 * elementary_symmetric_log(deg, 2 * ell) +
           n / 2.0 * (binary_entropy(alpha) + detail::alpha_log_alpha_over_e(alpha) + log_ratio(g.min_degree()));
}

namespace detail {

inline void check_psi_domain(int d, double t) {
    if (d < 1) throw std::invalid_argument("psi needs d >= 1");
    if (!(t > 0.0 && t <= d)) throw std::invalid_argument("psi needs 0 < t <= d");
}

/// t^-1 [log2 d! - log2 Gamma(d - t + 1)] through lgamma.
inline double psi_lgamma(int d, double t) {
    check_psi_domain(d, t);
    return (std::lgamma(d + 1.0) - std::lgamma(d - t + 1.0)) * kLog2E / t;
}

/// t^-1 log2 (d)_t for integer t.
inline double psi_falling(int d, int t) {
    check_psi_domain(d, t);
    return log2_big(falling_factorial(static_cast<unsigned>(d), static_cast<unsigned>(t))) / t;
}

}  // namespace detail

/// psi(d,t) = t^-1 [log2 d! - log2 Gamma(d - t + 1)]. Integer t goes through
/// the exact falling factorial.
inline double psi(int d, double t) {
    detail::check_psi_domain(d, t);
    if (t == std::floor(t)) return detail::psi_falling(d, static_cast<int>(t));
    return detail::psi_lgamma(d, t);
}

/// Sum over X of psi(d_x, l d_x / M) for |X| = l <= M = |Y|.
inline double genminc_bound(const BipartiteGraph& b, int ell) {
    if (b.size_x() != ell) throw std::invalid_argument("genminc_bound needs |X| == l");
    if (ell > b.size_y()) throw std::invalid_argument("genminc_bound needs l <= |Y|");
    const int m = b.size_y();
    double total = 0.0;
    for (Vertex x = 0; x < b.size_x(); ++x) {
        const int d = b.degree_x(x);
        if (d < 1) throw IsolatedVertexError("genminc_bound: isolated X-vertex");
        const long long num = static_cast<long long>(ell) * d;
        total += num % m == 0 ? detail::psi_falling(d, static_cast<int>(num / m)) : detail::psi_lgamma(d, static_cast<double>(num) / m);
    }
    return total;
}

/// Which reading of phi(r,t) to use. `gamma` puts Gamma(2^r - t + 1) in the
/// second log so that phi(r,t) = psi(2^r, t); `literal` evaluates
/// t^-1 [log2 Gamma(2^r + 1) - log2(2^r - t + 1)] as printed.
enum class PhiInterp { gamma, literal };

inline const char* to_string(PhiInterp interp) { return interp == PhiInterp::gamma ? "gamma" : "literal"; }

inline PhiInterp parse_phi_interp(const std::string& s) {
    if (s == "gamma") return PhiInterp::gamma;
    if (s == "literal") return PhiInterp::literal;
    throw std::invalid_argument("phi interpretation must be gamma or literal, got " + s);
}

inline double phi_wild(double r, double t, PhiInterp interp) {
    if (!(r >= 0.0)) throw std::invalid_argument("phi_wild needs r >= 0");
    const double top = std::exp2(r);
    if (!(t > 0.0 && t <= top)) throw std::invalid_argument("phi_wild needs 0 < t <= 2^r");
    const double head = std::lgamma(top + 1.0) * kLog2E;
    const double tail = interp == PhiInterp::gamma ? std::lgamma(top - t + 1.0) * kLog2E : std::log2(top - t + 1.0);
    return (head - tail) / t;
}

struct WildBound {
    double value_bits = 0.0;
    double entropy_bits = 0.0;  // H(f) = log2 Phi_l for the uniform distribution
    PhiInterp interp = PhiInterp::gamma;
};

/// Sum over X of phi(H(f(x)), (l/M) 2^H(f(x))) for the uniform l-matching f.
inline WildBound wild_bound(const BipartiteGraph& b, int ell, PhiInterp interp, CountOptions opts = {}) {
    const MarginalTable t = matching_marginals(b, ell, opts);
    const double ratio = static_cast<double>(ell) / b.size_y();
    WildBound out;
    out.interp = interp;
    out.entropy_bits = log2_big(t.total);
    for (double h : t.h_edge) out.value_bits += phi_wild(h, ratio * std::exp2(h), interp);
    return out;
}

// ---------------------------------------------------------------------------
// Consolidated report for one (graph, l).

struct BoundEntry {
    std::string name;
    std::optional<double> value_bits;  // empty when not applicable
    bool conjectural = false;
    std::string note;  // why the entry is not applicable

    bool applicable() const { return value_bits.has_value(); }
};

struct BoundReport {
    std::string graph_id;
    int ell = 0;
    std::optional<BigInt> exact_count;
    std::vector<BoundEntry> entries;

    /// log2 Phi_l; empty if counting was infeasible or Phi_l = 0.
    std::optional<double> exact_log2() const {
        if (!exact_count || *exact_count == 0) return std::nullopt;
        return log2_big(*exact_count);
    }

    std::optional<double> slack(const BoundEntry& e) const {
        const auto exact = exact_log2();
        if (!e.value_bits || !exact) return std::nullopt;
        return *e.value_bits - *exact;
    }

    const BoundEntry* find(const std::string& name) const {
        for (const auto& e : entries)
            if (e.name == name) return &e;
        return nullptr;
    }
};

namespace detail {

template <typename F>
BoundEntry try_entry(std::string name, bool conjectural, F&& eval) {
    BoundEntry e;
    e.name = std::move(name);
    e.conjectural = conjectural;
    try {
        e.value_bits = eval();
    } catch (const std::exception& ex) {
        e.note = ex.what();
    }
    return e;
}

inline void add_graph_entries(BoundReport& r, const Graph& g, int ell) {
    const auto d = g.regular_degree();
    auto regular = [&]() -> int {
        if (!d || *d < 1) throw std::invalid_argument("not d-regular with d >= 1");
        return *d;
    };
    r.entries.push_back(try_entry("cgt", false, [&] { return cgt_bound(g.n(), regular(), ell); }));
    r.entries.push_back(try_entry("thm_dregular", false, [&] { return thm_dregular_bound(g.n(), regular(), ell); }));
    r.entries.push_back(try_entry("thm_general", false, [&] { return thm_general_bound(g, ell); }));
}

inline std::optional<BigInt> exact_count_or_empty(const Graph& g, int ell, CountOptions opts) {
    if (ell < 0) return std::nullopt;
    try {
        return matching_profile(g, opts).at(static_cast<std::size_t>(ell));
    } catch (const InfeasibleError&) {
        return std::nullopt;
    }
}

}  // namespace detail

/// Bounds that apply to a general graph: CGT and the d-regular theorem when G
/// is regular, and the general degree-sequence theorem.
inline BoundReport bound_report(const Graph& g, int ell, std::string graph_id = "G", CountOptions opts = {}) {
    BoundReport r;
    r.graph_id = std::move(graph_id);
    r.ell = ell;
    r.exact_count = detail::exact_count_or_empty(g, ell, opts);
    detail::add_graph_entries(r, g, ell);
    return r;
}

/// Graph-level entries on the flattened graph, plus Bregman, the bipartite
/// theorem, and the two conjectured bounds.
inline BoundReport bound_report(const BipartiteGraph& b, int ell, std::string graph_id = "B",
                                PhiInterp interp = PhiInterp::gamma, CountOptions opts = {}) {
    const Graph g = b.to_graph();
    BoundReport r;
    r.graph_id = std::move(graph_id);
    r.ell = ell;
    r.exact_count = detail::exact_count_or_empty(g, ell, opts);
    detail::add_graph_entries(r, g, ell);
    r.entries.push_back(detail::try_entry("bregman", false, [&] {
        if (b.size_x() != b.size_y() || ell != b.size_x()) throw std::invalid_argument("needs |X| = |Y| = l");
        const auto dx = b.degrees_x();
        return bregman_bound(dx);
    }));
    r.entries.push_back(detail::try_entry("thm_bipartite", false, [&] { return thm_bipartite_bound(b, ell); }));
    r.entries.push_back(detail::try_entry("genminc", true, [&] { return genminc_bound(b, ell); }));
    r.entries.push_back(detail::try_entry(std::string("wild_") + to_string(interp), true, [&] {
        if (ell < 1) throw std::invalid_argument("needs l >= 1");
        return wild_bound(b, ell, interp, opts).value_bits;
    }));
    return r;
}

inline nlohmann::json to_json(const BoundReport& r) {
    nlohmann::json j;
    j["graphId"] = r.graph_id;
    j["ell"] = r.ell;
    j["exactCount"] = r.exact_count ? nlohmann::json(r.exact_count->str()) : nlohmann::json(nullptr);
    const auto exact = r.exact_log2();
    j["exactLog2"] = exact ? nlohmann::json(*exact) : nlohmann::json(nullptr);
    j["entries"] = nlohmann::json::array();
    for (const auto& e : r.entries) {
        nlohmann::json je;
        je["name"] = e.name;
        je["applicable"] = e.applicable();
        je["conjectural"] = e.conjectural;
        je["valueBits"] = e.value_bits ? nlohmann::json(*e.value_bits) : nlohmann::json(nullptr);
        const auto s = r.slack(e);
        je["slackBits"] = s ? nlohmann::json(*s) : nlohmann::json(nullptr);
        if (!e.note.empty()) je["note"] = e.note;
        j["entries"].push_back(std::move(je));
    }
    return j;
}

inline constexpr const char* kBoundCsvHeader = "graphId,ell,boundName,valueBits,exactBits,slackBits,applicable";

namespace detail {
inline std::string fmt_bits(std::optional<double> v) {
    if (!v) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", *v);
    std::string out = buf;
    if (out.find_first_not_of("-0.") == std::string::npos) out = "0.000000000";
    return out;
}
}  // namespace detail

/// One row per entry, no header.
inline std::string to_csv_rows(const BoundReport& r) {
    std::ostringstream out;
    const auto exact = r.exact_log2();
    for (const auto& e : r.entries) {
        out << r.graph_id << ',' << r.ell << ',' << e.name << ',' << detail::fmt_bits(e.value_bits) << ','
            << detail::fmt_bits(exact) << ',' << detail::fmt_bits(r.slack(e)) << ',' << (e.applicable() ? "true" : "false")
            << '\n';
    }
    return out.str();
}

}  // namespace matchbound
