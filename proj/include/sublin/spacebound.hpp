#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sublin/instances.hpp"
#include "sublin/workspace.hpp"

namespace sublin {

/// Read-only digraph view with 1-based vertices. `successor(v, i)` is the
/// i-th out-neighbour (0-based i), or nullopt past the last one.
template <class A>
concept AdjacencyOracle = requires(const A& a, Vertex u, Vertex v, std::size_t i) {
    { a.vertex_count() } -> std::convertible_to<std::size_t>;
    { a.has_edge(u, v) } -> std::convertible_to<bool>;
    { a.successor(v, i) } -> std::same_as<std::optional<Vertex>>;
};

class DigraphAdjacency {
public:
    explicit DigraphAdjacency(const Digraph& g) : n_(g.num_vertices), out_(g.out_lists()) {
        for (auto& l : out_) l.erase(std::unique(l.begin(), l.end()), l.end());
    }
    std::size_t vertex_count() const { return n_; }
    bool has_edge(Vertex u, Vertex v) const { return std::binary_search(out_[u].begin(), out_[u].end(), v); }
    std::optional<Vertex> successor(Vertex v, std::size_t i) const {
        if (i >= out_[v].size()) return std::nullopt;
        return out_[v][i];
    }

private:
    std::size_t n_;
    std::vector<std::vector<Vertex>> out_;
};

/// Implication graph of a 2CNF, computed on demand from the clause list.
/// Vertex 2v-1 is literal v, vertex 2v is its negation.
class ImplicationAdjacency {
public:
    explicit ImplicationAdjacency(const Cnf2Formula& f) : f_(&f) {}

    static Vertex vertex_of(Literal l) { return l.positive ? 2 * l.var - 1 : 2 * l.var; }
    static Literal literal_of(Vertex x) { return {(x + 1) / 2, x % 2 == 1}; }

    std::size_t vertex_count() const { return 2 * f_->num_vars; }

    bool has_edge(Vertex u, Vertex v) const {
        bool found = false;
        scan(u, [&](Vertex w) { return found = (w == v); });
        return found;
    }
    std::optional<Vertex> successor(Vertex v, std::size_t i) const {
        std::optional<Vertex> out;
        std::size_t seen = 0;
        scan(v, [&](Vertex w) {
            if (seen++ == i) out = w;
            return out.has_value();
        });
        return out;
    }

private:
    /// Calls visit(w) for each edge u->w in clause order until it returns true.
    template <class F>
    void scan(Vertex u, F&& visit) const {
        for (const Clause& c : f_->clauses) {
            Literal a = c[0];
            Literal b = c.width() == 2 ? c[1] : c[0];
            if (vertex_of(a.negated()) == u && visit(vertex_of(b))) return;
            if (c.width() == 2 && vertex_of(b.negated()) == u && visit(vertex_of(a))) return;
        }
    }
    const Cnf2Formula* f_;
};

inline ImplicationAdjacency implication_adjacency(const Cnf2Formula& f) { return ImplicationAdjacency(f); }

// ---------------------------------------------------------------------------
// Reachability strategies. Vertex indices cost bits_for(n) bits; successor
// cursors cost bits_for(n + 1).

template <AdjacencyOracle A>
bool reach_bfs(const A& adj, Vertex s, Vertex t, MeteredWorkspace& ws) {
    const std::size_t n = adj.vertex_count();
    const std::uint64_t b = bits_for(n), c = bits_for(n + 1);
    auto store = ws.allocate(n + n * b + 2 * b + b + c);
    ws.step();
    if (s == t) return true;
    std::vector<char> visited(n + 1, 0);
    std::vector<Vertex> queue(n);
    std::size_t head = 0, tail = 0;
    queue[tail++] = s;
    visited[s] = 1;
    while (head < tail) {
        Vertex u = queue[head++];
        for (std::size_t i = 0;; ++i) {
            ws.step();
            auto w = adj.successor(u, i);
            if (!w) break;
            if (*w == t) return true;
            if (!visited[*w]) {
                visited[*w] = 1;
                queue[tail++] = *w;
            }
        }
    }
    return false;
}

/// Path of at most `limit` edges, by depth-first search over simple paths.
/// Only the current path is stored.
template <AdjacencyOracle A>
bool reach_dfs_limited(const A& adj, Vertex s, Vertex t, std::size_t limit, MeteredWorkspace& ws) {
    const std::size_t n = adj.vertex_count();
    const std::size_t depth = n == 0 ? 0 : std::min(limit, n - 1);
    const std::uint64_t b = bits_for(n), c = bits_for(n + 1);
    auto store = ws.allocate((depth + 1) * (b + c) + bits_for(depth + 2));
    ws.step();
    if (s == t) return true;
    struct Entry {
        Vertex v;
        std::size_t next;
    };
    std::vector<Entry> path;
    path.reserve(depth + 1);
    path.push_back({s, 0});
    while (!path.empty()) {
        ws.step();
        Entry& top = path.back();
        if (path.size() - 1 == depth) {
            path.pop_back();
            continue;
        }
        auto w = adj.successor(top.v, top.next++);
        if (!w) {
            path.pop_back();
            continue;
        }
        if (*w == t) return true;
        bool on_path = false;
        for (const Entry& e : path) on_path = on_path || e.v == *w;
        if (!on_path) path.push_back({*w, 0});
    }
    return false;
}

namespace detail {

/// Midpoint recursion on paths of at most d edges; each call holds one frame
/// of three vertex indices (u, v, midpoint). Segments with d <= tau go to the
/// depth-limited search; tau = 0 means pure midpoint recursion.
template <AdjacencyOracle A>
bool midpoint_reach(const A& adj, Vertex u, Vertex v, std::size_t d, std::size_t tau, MeteredWorkspace& ws) {
    if (tau > 0 && d <= tau) return reach_dfs_limited(adj, u, v, d, ws);
    const std::size_t n = adj.vertex_count();
    const std::uint64_t frame_bits = 3 * bits_for(n);
    auto frame = ws.allocate(frame_bits);
    ws.step();
    if (u == v) return true;
    if (d <= 1) return d == 1 && adj.has_edge(u, v);
    if (d == 2 && tau == 0) {
        // Midpoints other than u itself must be successors of u; the d = 1
        // child frame is still charged.
        auto child = ws.allocate(frame_bits);
        if (adj.has_edge(u, v)) return true;
        for (std::size_t i = 0;; ++i) {
            ws.step();
            auto w = adj.successor(u, i);
            if (!w) return false;
            if (*w == v || adj.has_edge(*w, v)) return true;
        }
    }
    const std::size_t first = (d + 1) / 2, second = d / 2;
    for (Vertex w = 1; w <= n; ++w) {
        ws.step();
        if (midpoint_reach(adj, u, w, first, tau, ws) && midpoint_reach(adj, w, v, second, tau, ws)) return true;
    }
    return false;
}

}  // namespace detail

/// Frames on the deepest midpoint chain, per frame-sized unit.
inline constexpr std::uint64_t kSavitchFrameConstant = 1;

/// C * (ceil(log2 n) + 1) frames of 3 * ceil(log2 n) bits: the most
/// reach_savitch may hold at once on an n-vertex graph.
inline std::uint64_t savitch_peak_bound(std::size_t n) {
    const std::uint64_t b = bits_for(n);
    return kSavitchFrameConstant * (b + 1) * 3 * b;
}

template <AdjacencyOracle A>
bool reach_savitch(const A& adj, Vertex s, Vertex t, MeteredWorkspace& ws) {
    return detail::midpoint_reach(adj, s, t, adj.vertex_count(), 0, ws);
}

template <AdjacencyOracle A>
bool reach_hybrid(const A& adj, Vertex s, Vertex t, std::size_t tau, MeteredWorkspace& ws) {
    if (tau < 1) throw std::invalid_argument("hybrid threshold must be at least 1");
    const std::size_t n = adj.vertex_count();
    return detail::midpoint_reach(adj, s, t, std::max<std::size_t>(n, 1), std::min(tau, std::max<std::size_t>(n, 1)),
                                  ws);
}

/// Floor of the square root, the default hybrid threshold.
inline std::size_t isqrt(std::size_t n) {
    std::size_t r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

struct Strategy {
    enum class Kind { bfs, savitch, hybrid };
    Kind kind = Kind::bfs;
    std::size_t tau = 0;  // hybrid only; 0 selects floor(sqrt(n))

    static Strategy parse(std::string_view s) {
        if (s == "bfs") return {Kind::bfs, 0};
        if (s == "savitch") return {Kind::savitch, 0};
        if (s == "hybrid") return {Kind::hybrid, 0};
        if (s.starts_with("hybrid:")) {
            auto rest = s.substr(7);
            std::size_t tau = 0;
            for (char ch : rest) {
                if (ch < '0' || ch > '9') throw std::invalid_argument("bad hybrid threshold '" + std::string(rest) + "'");
                tau = tau * 10 + static_cast<std::size_t>(ch - '0');
            }
            if (rest.empty() || tau == 0) throw std::invalid_argument("hybrid threshold must be a positive integer");
            return {Kind::hybrid, tau};
        }
        throw std::invalid_argument("unknown strategy '" + std::string(s) + "' (bfs, savitch, hybrid[:tau])");
    }
    std::string str() const {
        switch (kind) {
            case Kind::bfs: return "bfs";
            case Kind::savitch: return "savitch";
            case Kind::hybrid: return tau ? "hybrid:" + std::to_string(tau) : "hybrid";
        }
        return "";
    }
};

template <AdjacencyOracle A>
bool reach_with(const Strategy& st, const A& adj, Vertex s, Vertex t, MeteredWorkspace& ws) {
    switch (st.kind) {
        case Strategy::Kind::bfs: return reach_bfs(adj, s, t, ws);
        case Strategy::Kind::savitch: return reach_savitch(adj, s, t, ws);
        case Strategy::Kind::hybrid:
            return reach_hybrid(adj, s, t, st.tau ? st.tau : std::max<std::size_t>(1, isqrt(adj.vertex_count())), ws);
    }
    return false;
}

/// Satisfiability by 2n reachability queries on the implicit implication
/// graph, one variable at a time in the same workspace.
inline bool twosat_space(const Cnf2Formula& f, const Strategy& st, MeteredWorkspace& ws) {
    ImplicationAdjacency adj(f);
    auto loop = ws.allocate(bits_for(f.num_vars + 1));
    for (Var v = 1; v <= f.num_vars; ++v) {
        ws.step();
        Vertex pos = ImplicationAdjacency::vertex_of({v, true});
        Vertex neg = ImplicationAdjacency::vertex_of({v, false});
        if (reach_with(st, adj, pos, neg, ws) && reach_with(st, adj, neg, pos, ws)) return false;
    }
    return true;
}

}  // namespace sublin
