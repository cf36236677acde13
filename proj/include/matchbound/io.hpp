#pragma once

#include <charconv>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "matchbound/error.hpp"
#include "matchbound/graph.hpp"

namespace matchbound {

namespace detail {

inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

inline bool parse_int(std::string_view token, long long& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

inline bool is_blank(std::string_view line) { return split_ws(line).empty(); }

/// Reads `count` integers from a line, or throws a malformed-line error.
inline std::vector<long long> read_ints(std::string_view line, std::size_t count, std::size_t lineno) {
    const auto tokens = split_ws(line);
    std::vector<long long> values(tokens.size());
    bool ok = tokens.size() == count;
    for (std::size_t i = 0; ok && i < tokens.size(); ++i) ok = parse_int(tokens[i], values[i]);
    if (!ok) throw ParseError(ParseErrc::malformed, "line " + std::to_string(lineno) + ": \"" + std::string(line) + "\"");
    return values;
}

/// Shared body for "header, then m pair lines" formats.
template <typename OnPair>
void read_pair_lines(const std::vector<std::string_view>& lines, std::size_t first, long long m, OnPair&& on_pair) {
    std::size_t idx = first;
    for (long long k = 0; k < m; ++k) {
        while (idx < lines.size() && is_blank(lines[idx])) ++idx;
        if (idx >= lines.size())
            throw ParseError(ParseErrc::malformed, "expected " + std::to_string(m) + " edge lines, got " + std::to_string(k));
        const auto v = read_ints(lines[idx], 2, idx + 1);
        on_pair(v[0], v[1], idx + 1);
        ++idx;
    }
    for (; idx < lines.size(); ++idx)
        if (!is_blank(lines[idx])) throw ParseError(ParseErrc::malformed, "trailing content on line " + std::to_string(idx + 1));
}

inline std::size_t first_content_line(const std::vector<std::string_view>& lines) {
    std::size_t idx = 0;
    while (idx < lines.size() && is_blank(lines[idx])) ++idx;
    if (idx == lines.size()) throw ParseError(ParseErrc::malformed, "empty input");
    return idx;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Edge list: "n m", then m lines "u v".

inline Graph parse_edge_list(std::string_view text) {
    const auto lines = detail::split_lines(text);
    const std::size_t head = detail::first_content_line(lines);
    const auto header = detail::read_ints(lines[head], 2, head + 1);
    const long long n = header[0];
    const long long m = header[1];
    if (n < 1 || m < 0) throw ParseError(ParseErrc::malformed, "header needs n >= 1 and m >= 0");
    Graph g(static_cast<int>(n));
    detail::read_pair_lines(lines, head + 1, m, [&](long long u, long long v, std::size_t lineno) {
        const std::string where = "line " + std::to_string(lineno);
        if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError(ParseErrc::out_of_range, where);
        if (u == v) throw ParseError(ParseErrc::loop, where);
        if (g.has_edge(static_cast<Vertex>(u), static_cast<Vertex>(v))) throw ParseError(ParseErrc::duplicate_edge, where);
        g.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v));
    });
    return g;
}

inline std::string emit_edge_list(const Graph& g) {
    std::ostringstream out;
    out << g.n() << ' ' << g.edge_count() << '\n';
    for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// Bipartite: "B sizeX sizeY m", then m lines "x y".

inline BipartiteGraph parse_bipartite(std::string_view text) {
    const auto lines = detail::split_lines(text);
    const std::size_t head = detail::first_content_line(lines);
    auto tokens = detail::split_ws(lines[head]);
    if (tokens.size() != 4 || tokens[0] != "B") throw ParseError(ParseErrc::malformed, "expected header \"B sizeX sizeY m\"");
    long long sx = 0;
    long long sy = 0;
    long long m = 0;
    if (!detail::parse_int(tokens[1], sx) || !detail::parse_int(tokens[2], sy) || !detail::parse_int(tokens[3], m) || sx < 0 ||
        sy < 0 || sx + sy < 1 || m < 0)
        throw ParseError(ParseErrc::malformed, "bad bipartite header");
    BipartiteGraph b(static_cast<int>(sx), static_cast<int>(sy));
    detail::read_pair_lines(lines, head + 1, m, [&](long long x, long long y, std::size_t lineno) {
        const std::string where = "line " + std::to_string(lineno);
        if (x < 0 || y < 0 || x >= sx || y >= sy) throw ParseError(ParseErrc::out_of_range, where);
        if (b.has_edge(static_cast<Vertex>(x), static_cast<Vertex>(y))) throw ParseError(ParseErrc::duplicate_edge, where);
        b.add_edge(static_cast<Vertex>(x), static_cast<Vertex>(y));
    });
    return b;
}

inline std::string emit_bipartite(const BipartiteGraph& b) {
    std::ostringstream out;
    out << "B " << b.size_x() << ' ' << b.size_y() << ' ' << b.edge_count() << '\n';
    for (const auto& a : b.edges()) out << a.x << ' ' << a.y << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// graph6. Upper triangle in column order (x(0,1), x(0,2), x(1,2), x(0,3), ...)
// packed big-endian into 6-bit groups, each offset by 63.

inline constexpr int kGraph6MaxVertices = 258047;

inline Graph parse_graph6(std::string_view text) {
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.remove_suffix(1);
    if (text.starts_with(">>graph6<<")) text.remove_prefix(10);
    for (char c : text)
        if (c < 63 || c > 126) throw ParseError(ParseErrc::invalid_character, std::string("byte ") + std::to_string(static_cast<int>(static_cast<unsigned char>(c))));
    if (text.empty()) throw ParseError(ParseErrc::length_mismatch, "empty graph6 string");

    std::size_t pos = 0;
    long long n = 0;
    if (text[0] != 126) {
        n = text[0] - 63;
        pos = 1;
    } else {
        if (text.size() >= 2 && text[1] == 126) throw ParseError(ParseErrc::length_mismatch, "graphs with n > 258047 are not supported");
        if (text.size() < 4) throw ParseError(ParseErrc::length_mismatch, "truncated size field");
        n = ((text[1] - 63LL) << 12) | ((text[2] - 63LL) << 6) | (text[3] - 63LL);
        pos = 4;
    }
    if (n < 1) throw ParseError(ParseErrc::length_mismatch, "graph6 with zero vertices");

    const std::uint64_t bits = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1) / 2;
    const std::size_t expected = static_cast<std::size_t>((bits + 5) / 6);
    if (text.size() - pos != expected)
        throw ParseError(ParseErrc::length_mismatch,
                         "n=" + std::to_string(n) + " needs " + std::to_string(expected) + " data bytes, got " + std::to_string(text.size() - pos));

    Graph g(static_cast<int>(n));
    std::uint64_t k = 0;
    for (Vertex j = 1; j < n; ++j) {
        for (Vertex i = 0; i < j; ++i, ++k) {
            const int chunk = text[pos + static_cast<std::size_t>(k / 6)] - 63;
            if (chunk & (1 << (5 - static_cast<int>(k % 6)))) g.add_edge(i, j);
        }
    }
    return g;
}

inline std::string emit_graph6(const Graph& g) {
    const long long n = g.n();
    if (n > kGraph6MaxVertices) throw std::invalid_argument("graph6 supports at most 258047 vertices");
    std::string out;
    if (n <= 62) {
        out.push_back(static_cast<char>(n + 63));
    } else {
        out.push_back(static_cast<char>(126));
        out.push_back(static_cast<char>(((n >> 12) & 63) + 63));
        out.push_back(static_cast<char>(((n >> 6) & 63) + 63));
        out.push_back(static_cast<char>((n & 63) + 63));
    }
    int chunk = 0;
    int filled = 0;
    for (Vertex j = 1; j < n; ++j) {
        for (Vertex i = 0; i < j; ++i) {
            chunk = (chunk << 1) | (g.has_edge(i, j) ? 1 : 0);
            if (++filled == 6) {
                out.push_back(static_cast<char>(chunk + 63));
                chunk = 0;
                filled = 0;
            }
        }
    }
    if (filled > 0) out.push_back(static_cast<char>((chunk << (6 - filled)) + 63));
    return out;
}

}  // namespace matchbound
