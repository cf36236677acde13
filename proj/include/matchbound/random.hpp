#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "matchbound/error.hpp"
#include "matchbound/graph.hpp"

namespace matchbound {

/// mt19937_64's output sequence is fixed by the standard; the helpers below
/// avoid the implementation-defined std distributions so that a seed means
/// the same graph on every toolchain.
using Rng = std::mt19937_64;

/// Uniform integer in [0, bound).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below(0)");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r = 0;
    do r = rng();
    while (r >= limit);
    return r % bound;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

inline constexpr long kDefaultRegularAttempts = 1'000'000;

/// Configuration model: pair up n*d stubs uniformly and reject the whole
/// pairing on any loop or parallel edge.
inline Graph random_regular(int n, int d, std::uint64_t seed, long max_attempts = kDefaultRegularAttempts) {
    if (n < 1 || d < 0) throw std::invalid_argument("random_regular needs n >= 1, d >= 0");
    if ((static_cast<long long>(n) * d) % 2 != 0) throw std::invalid_argument("n*d must be even");
    if (d >= n) throw std::invalid_argument("random_regular needs d < n");
    Rng rng(seed);
    std::vector<Vertex> stubs;
    stubs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
    for (long attempt = 0; attempt < max_attempts; ++attempt) {
        stubs.clear();
        for (Vertex v = 0; v < n; ++v)
            for (int k = 0; k < d; ++k) stubs.push_back(v);
        shuffle(stubs, rng);
        Graph g(n);
        bool ok = true;
        for (std::size_t i = 0; ok && i < stubs.size(); i += 2) {
            const Vertex a = stubs[i];
            const Vertex b = stubs[i + 1];
            if (a == b || g.has_edge(a, b))
                ok = false;
            else
                g.add_edge(a, b);
        }
        if (ok) return g;
    }
    throw InfeasibleError("random_regular: no simple pairing after " + std::to_string(max_attempts) + " attempts");
}

/// Erdos-Renyi G(n, p).
inline Graph random_graph(int n, double p, Rng& rng) {
    Graph g(n);
    for (Vertex v = 1; v < n; ++v)
        for (Vertex u = 0; u < v; ++u)
            if (uniform_unit(rng) < p) g.add_edge(u, v);
    return g;
}

/// Each of the sizeX*sizeY pairs present independently with probability p.
inline BipartiteGraph random_bipartite(int size_x, int size_y, double p, Rng& rng) {
    BipartiteGraph b(size_x, size_y);
    for (Vertex x = 0; x < size_x; ++x)
        for (Vertex y = 0; y < size_y; ++y)
            if (uniform_unit(rng) < p) b.add_edge(x, y);
    return b;
}

}  // namespace matchbound
