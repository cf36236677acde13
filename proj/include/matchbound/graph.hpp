#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace matchbound {

using Vertex = int;

/// Unordered vertex pair, stored with u <= v.
struct Edge {
    Vertex u = 0;
    Vertex v = 0;

    Edge() = default;
    Edge(Vertex a, Vertex b) : u(std::min(a, b)), v(std::max(a, b)) {}

    friend auto operator<=>(const Edge&, const Edge&) = default;
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Simple undirected graph on vertices 0..n-1.
class Graph {
public:
    explicit Graph(int n) : adj_(static_cast<std::size_t>(n)) {
        if (n < 1) throw std::invalid_argument("graph needs at least one vertex");
    }

    Graph(int n, std::span<const Edge> edges) : Graph(n) {
        for (const Edge& e : edges) add_edge(e.u, e.v);
    }

    int n() const { return static_cast<int>(adj_.size()); }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Vertex>& neighbors(Vertex v) const { return adj_.at(static_cast<std::size_t>(v)); }
    int degree(Vertex v) const { return static_cast<int>(neighbors(v).size()); }

    bool has_edge(Vertex a, Vertex b) const {
        if (!in_range(a) || !in_range(b)) return false;
        const auto& nb = adj_[static_cast<std::size_t>(a)];
        return std::binary_search(nb.begin(), nb.end(), b);
    }

    /// Throws std::invalid_argument on loops, out-of-range endpoints and duplicates.
    void add_edge(Vertex a, Vertex b) {
        if (!in_range(a) || !in_range(b)) throw std::invalid_argument("edge endpoint out of range");
        if (a == b) throw std::invalid_argument("self-loop");
        if (has_edge(a, b)) throw std::invalid_argument("parallel edge");
        insert_sorted(adj_[static_cast<std::size_t>(a)], b);
        insert_sorted(adj_[static_cast<std::size_t>(b)], a);
        insert_sorted(edges_, Edge(a, b));
    }

    int min_degree() const {
        int d = degree(0);
        for (Vertex v = 1; v < n(); ++v) d = std::min(d, degree(v));
        return d;
    }

    int max_degree() const {
        int d = 0;
        for (Vertex v = 0; v < n(); ++v) d = std::max(d, degree(v));
        return d;
    }

    /// The common degree when every vertex has the same degree.
    std::optional<int> regular_degree() const {
        int d = degree(0);
        for (Vertex v = 1; v < n(); ++v)
            if (degree(v) != d) return std::nullopt;
        return d;
    }

    std::vector<int> degrees() const {
        std::vector<int> out;
        out.reserve(adj_.size());
        for (Vertex v = 0; v < n(); ++v) out.push_back(degree(v));
        return out;
    }

    /// Neighbor bitmask; only meaningful for n <= 64.
    std::uint64_t neighbor_mask(Vertex v) const {
        std::uint64_t m = 0;
        for (Vertex u : neighbors(v)) m |= std::uint64_t{1} << u;
        return m;
    }

    friend bool operator==(const Graph& a, const Graph& b) { return a.adj_.size() == b.adj_.size() && a.edges_ == b.edges_; }

private:
    bool in_range(Vertex v) const { return v >= 0 && v < n(); }

    template <typename T>
    static void insert_sorted(std::vector<T>& vec, const T& value) {
        vec.insert(std::upper_bound(vec.begin(), vec.end(), value), value);
    }

    std::vector<std::vector<Vertex>> adj_;
    std::vector<Edge> edges_;
};

/// Bipartite graph with an explicit split. X and Y are indexed independently
/// from zero; an edge (x, y) joins X-vertex x to Y-vertex y.
class BipartiteGraph {
public:
    struct Arc {
        Vertex x = 0;
        Vertex y = 0;
        friend auto operator<=>(const Arc&, const Arc&) = default;
        friend bool operator==(const Arc&, const Arc&) = default;
    };

    BipartiteGraph(int size_x, int size_y)
        : adj_x_(static_cast<std::size_t>(size_x)), adj_y_(static_cast<std::size_t>(size_y)) {
        if (size_x < 0 || size_y < 0 || size_x + size_y < 1)
            throw std::invalid_argument("bipartite graph needs at least one vertex");
    }

    int size_x() const { return static_cast<int>(adj_x_.size()); }
    int size_y() const { return static_cast<int>(adj_y_.size()); }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Arc>& edges() const { return edges_; }
    const std::vector<Vertex>& neighbors_x(Vertex x) const { return adj_x_.at(static_cast<std::size_t>(x)); }
    const std::vector<Vertex>& neighbors_y(Vertex y) const { return adj_y_.at(static_cast<std::size_t>(y)); }
    int degree_x(Vertex x) const { return static_cast<int>(neighbors_x(x).size()); }
    int degree_y(Vertex y) const { return static_cast<int>(neighbors_y(y).size()); }

    bool has_edge(Vertex x, Vertex y) const {
        if (x < 0 || x >= size_x() || y < 0 || y >= size_y()) return false;
        const auto& nb = adj_x_[static_cast<std::size_t>(x)];
        return std::binary_search(nb.begin(), nb.end(), y);
    }

    void add_edge(Vertex x, Vertex y) {
        if (x < 0 || x >= size_x() || y < 0 || y >= size_y())
            throw std::invalid_argument("bipartite edge endpoint out of range");
        if (has_edge(x, y)) throw std::invalid_argument("parallel edge");
        auto& ax = adj_x_[static_cast<std::size_t>(x)];
        ax.insert(std::upper_bound(ax.begin(), ax.end(), y), y);
        auto& ay = adj_y_[static_cast<std::size_t>(y)];
        ay.insert(std::upper_bound(ay.begin(), ay.end(), x), x);
        const Arc a{x, y};
        edges_.insert(std::upper_bound(edges_.begin(), edges_.end(), a), a);
    }

    std::vector<int> degrees_x() const {
        std::vector<int> out;
        for (Vertex x = 0; x < size_x(); ++x) out.push_back(degree_x(x));
        return out;
    }

    int min_degree_x() const {
        int d = size_x() > 0 ? degree_x(0) : 0;
        for (Vertex x = 1; x < size_x(); ++x) d = std::min(d, degree_x(x));
        return d;
    }

    /// Index of X-vertex x and Y-vertex y in to_graph().
    Vertex x_index(Vertex x) const { return x; }
    Vertex y_index(Vertex y) const { return size_x() + y; }

    /// Flattened graph: X-vertices first (0..sizeX-1), then Y-vertices.
    Graph to_graph() const {
        Graph g(size_x() + size_y());
        for (const Arc& a : edges_) g.add_edge(x_index(a.x), y_index(a.y));
        return g;
    }

    friend bool operator==(const BipartiteGraph& a, const BipartiteGraph& b) {
        return a.size_x() == b.size_x() && a.size_y() == b.size_y() && a.edges_ == b.edges_;
    }

private:
    std::vector<std::vector<Vertex>> adj_x_;
    std::vector<std::vector<Vertex>> adj_y_;
    std::vector<Arc> edges_;
};

/// Undirected multigraph; edges kept as a sorted multiset.
class Multigraph {
public:
    explicit Multigraph(int n) : n_(n) {}

    int n() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t edge_count() const { return edges_.size(); }

    void add_edge(Vertex a, Vertex b) {
        if (a < 0 || b < 0 || a >= n_ || b >= n_) throw std::invalid_argument("multigraph endpoint out of range");
        if (a == b) throw std::invalid_argument("self-loop");
        const Edge e(a, b);
        edges_.insert(std::upper_bound(edges_.begin(), edges_.end(), e), e);
    }

    friend auto operator<=>(const Multigraph&, const Multigraph&) = default;
    friend bool operator==(const Multigraph&, const Multigraph&) = default;

private:
    int n_;
    std::vector<Edge> edges_;
};

// ---------------------------------------------------------------------------
// Standard constructions

inline Graph cycle_graph(int n) {
    if (n < 3) throw std::invalid_argument("cycle needs n >= 3");
    Graph g(n);
    for (Vertex v = 0; v < n; ++v) g.add_edge(v, (v + 1) % n);
    return g;
}

inline Graph complete_graph(int n) {
    Graph g(n);
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
}

inline BipartiteGraph complete_bipartite(int a, int b) {
    if (a < 1 || b < 1) throw std::invalid_argument("complete bipartite needs a, b >= 1");
    BipartiteGraph g(a, b);
    for (Vertex x = 0; x < a; ++x)
        for (Vertex y = 0; y < b; ++y) g.add_edge(x, y);
    return g;
}

/// Vertices of the i-th part are shifted by the total size of parts 0..i-1.
inline Graph disjoint_union(std::span<const Graph> parts) {
    if (parts.empty()) throw std::invalid_argument("disjoint union of nothing");
    int total = 0;
    for (const Graph& g : parts) total += g.n();
    Graph out(total);
    int offset = 0;
    for (const Graph& g : parts) {
        for (const Edge& e : g.edges()) out.add_edge(e.u + offset, e.v + offset);
        offset += g.n();
    }
    return out;
}

/// X-parts and Y-parts are each concatenated in order.
inline BipartiteGraph disjoint_union(std::span<const BipartiteGraph> parts) {
    if (parts.empty()) throw std::invalid_argument("disjoint union of nothing");
    int sx = 0;
    int sy = 0;
    for (const auto& b : parts) {
        sx += b.size_x();
        sy += b.size_y();
    }
    BipartiteGraph out(sx, sy);
    int ox = 0;
    int oy = 0;
    for (const auto& b : parts) {
        for (const auto& a : b.edges()) out.add_edge(a.x + ox, a.y + oy);
        ox += b.size_x();
        oy += b.size_y();
    }
    return out;
}

/// (N / 2d) disjoint copies of K_{d,d}.
inline Graph make_umc_extremal(int n, int d) {
    if (d < 1) throw std::invalid_argument("degree must be >= 1");
    if (n < 1 || n % (2 * d) != 0) throw std::invalid_argument("2d must divide N");
    const Graph kdd = complete_bipartite(d, d).to_graph();
    std::vector<Graph> copies(static_cast<std::size_t>(n / (2 * d)), kdd);
    return disjoint_union(std::span<const Graph>(copies));
}

/// Bipartite double cover: X-vertex v is (v,0), Y-vertex v is (v,1), and each
/// edge uv of G yields (u,0)(v,1) and (v,0)(u,1).
/// A 2-coloring as a BipartiteGraph, X being the smaller class (ties go to
/// the class of vertex 0); each component's lowest vertex gets the color of
/// vertex 0. Vertices keep their relative order within a class. Empty if g
/// has an odd cycle or a class is empty.
inline std::optional<BipartiteGraph> bipartition(const Graph& g) {
    std::vector<int> color(static_cast<std::size_t>(g.n()), -1);
    for (Vertex s = 0; s < g.n(); ++s) {
        if (color[static_cast<std::size_t>(s)] >= 0) continue;
        color[static_cast<std::size_t>(s)] = 0;
        std::vector<Vertex> stack{s};
        while (!stack.empty()) {
            const Vertex v = stack.back();
            stack.pop_back();
            for (Vertex w : g.neighbors(v)) {
                int& cw = color[static_cast<std::size_t>(w)];
                if (cw < 0) {
                    cw = 1 - color[static_cast<std::size_t>(v)];
                    stack.push_back(w);
                } else if (cw == color[static_cast<std::size_t>(v)]) {
                    return std::nullopt;
                }
            }
        }
    }
    const auto zeros = static_cast<int>(std::count(color.begin(), color.end(), 0));
    const int ones = g.n() - zeros;
    if (zeros == 0 || ones == 0) return std::nullopt;
    const int x_color = ones < zeros ? 1 : 0;
    std::vector<int> index(static_cast<std::size_t>(g.n()));
    int nx = 0;
    int ny = 0;
    for (Vertex v = 0; v < g.n(); ++v) index[static_cast<std::size_t>(v)] = color[static_cast<std::size_t>(v)] == x_color ? nx++ : ny++;
    BipartiteGraph b(nx, ny);
    for (const Edge& e : g.edges()) {
        const bool u_in_x = color[static_cast<std::size_t>(e.u)] == x_color;
        const Vertex x = u_in_x ? e.u : e.v;
        const Vertex y = u_in_x ? e.v : e.u;
        b.add_edge(index[static_cast<std::size_t>(x)], index[static_cast<std::size_t>(y)]);
    }
    return b;
}

inline BipartiteGraph bipartite_double_cover(const Graph& g) {
    BipartiteGraph k(g.n(), g.n());
    for (const Edge& e : g.edges()) {
        k.add_edge(e.u, e.v);
        k.add_edge(e.v, e.u);
    }
    return k;
}

/// Subgraph induced on the vertices marked in `keep`, renumbered in increasing
/// order. An empty selection yields a single isolated vertex.
inline Graph induced_subgraph(const Graph& g, const std::vector<bool>& keep) {
    std::vector<Vertex> index(static_cast<std::size_t>(g.n()), -1);
    int count = 0;
    for (Vertex v = 0; v < g.n(); ++v)
        if (keep[static_cast<std::size_t>(v)]) index[static_cast<std::size_t>(v)] = count++;
    Graph out(std::max(count, 1));
    for (const Edge& e : g.edges()) {
        const Vertex a = index[static_cast<std::size_t>(e.u)];
        const Vertex b = index[static_cast<std::size_t>(e.v)];
        if (a >= 0 && b >= 0) out.add_edge(a, b);
    }
    return out;
}

/// Relabels vertex v as perm[v].
inline Graph relabel(const Graph& g, std::span<const Vertex> perm) {
    Graph out(g.n());
    for (const Edge& e : g.edges())
        out.add_edge(perm[static_cast<std::size_t>(e.u)], perm[static_cast<std::size_t>(e.v)]);
    return out;
}

}  // namespace matchbound
