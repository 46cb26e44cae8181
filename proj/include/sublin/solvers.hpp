#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sublin/instances.hpp"

namespace sublin {

class GuardExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

struct SatResult {
    bool satisfiable = false;
    std::optional<std::vector<bool>> assignment;  // index v-1 holds x_v
};

struct OptResult {
    std::uint64_t value = 0;
    std::vector<Vertex> sequence;
};

// ---------------------------------------------------------------------------
// 2SAT via the implication graph

namespace detail {

/// Literal vertex in [0, 2n): 2(v-1) is v, 2(v-1)+1 is not-v.
inline std::size_t lit_index(Literal l) { return 2 * (l.var - 1) + (l.positive ? 0 : 1); }

inline std::vector<std::vector<std::uint32_t>> implication_lists(const Cnf2Formula& f) {
    std::vector<std::vector<std::uint32_t>> adj(2 * f.num_vars);
    for (const Clause& c : f.clauses) {
        Literal a = c[0];
        Literal b = c.width() == 2 ? c[1] : c[0];
        adj[lit_index(a.negated())].push_back(static_cast<std::uint32_t>(lit_index(b)));
        if (c.width() == 2) adj[lit_index(b.negated())].push_back(static_cast<std::uint32_t>(lit_index(a)));
    }
    return adj;
}

/// Iterative Tarjan. Components are numbered in completion order, which is a
/// reverse topological order of the condensation.
inline std::vector<std::uint32_t> tarjan_components(const std::vector<std::vector<std::uint32_t>>& adj,
                                                    const std::vector<std::uint32_t>& visit_order) {
    const std::size_t n = adj.size();
    constexpr std::uint32_t kUnset = UINT32_MAX;
    std::vector<std::uint32_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
    std::vector<std::uint32_t> stack;
    std::vector<char> on_stack(n, 0);
    std::vector<std::pair<std::uint32_t, std::size_t>> call;  // (vertex, next edge)
    std::uint32_t counter = 0, components = 0;

    for (std::uint32_t root : visit_order) {
        if (index[root] != kUnset) continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            auto& [v, next] = call.back();
            if (next < adj[v].size()) {
                std::uint32_t w = adj[v][next++];
                if (index[w] == kUnset) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::uint32_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = components;
                } while (w != v);
                ++components;
            }
            std::uint32_t done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
        }
    }
    return comp;
}

}  // namespace detail

/// Unsatisfiable iff some v and not-v share a strongly connected component.
/// A literal is set true when its component completes before its
/// complement's; negative literals are visited first so unconstrained
/// variables come out 0.
inline SatResult solve_2sat(const Cnf2Formula& f) {
    auto adj = detail::implication_lists(f);
    std::vector<std::uint32_t> order;
    for (std::uint32_t v = 0; v < f.num_vars; ++v) {
        order.push_back(2 * v + 1);
        order.push_back(2 * v);
    }
    auto comp = detail::tarjan_components(adj, order);
    std::vector<bool> x(f.num_vars, false);
    for (std::size_t v = 0; v < f.num_vars; ++v) {
        if (comp[2 * v] == comp[2 * v + 1]) return {false, std::nullopt};
        x[v] = comp[2 * v] < comp[2 * v + 1];
    }
    return {true, std::move(x)};
}

inline constexpr std::size_t kBruteSatGuard = 25;

/// Exhaustive search; returns the lexicographically first model (x_1 most
/// significant).
inline SatResult brute_2sat(const Cnf2Formula& f) {
    if (f.num_vars > kBruteSatGuard)
        throw GuardExceeded("brute_2sat: " + std::to_string(f.num_vars) + " variables exceed the guard of " +
                            std::to_string(kBruteSatGuard));
    const std::size_t n = f.num_vars;
    std::vector<bool> x(n, false);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> (n - 1 - i)) & 1;
        if (f.satisfied_by(x)) return {true, x};
    }
    return {false, std::nullopt};
}

// ---------------------------------------------------------------------------
// Reachability

/// Breadth-first search; s = t counts as reachable.
inline bool reach_decide(const Digraph& g) {
    if (g.source == g.target) return true;
    auto out = g.out_lists();
    std::vector<char> seen(g.num_vertices + 1, 0);
    std::deque<Vertex> queue{g.source};
    seen[g.source] = 1;
    while (!queue.empty()) {
        Vertex u = queue.front();
        queue.pop_front();
        for (Vertex v : out[u]) {
            if (v == g.target) return true;
            if (!seen[v]) {
                seen[v] = 1;
                queue.push_back(v);
            }
        }
    }
    return false;
}

/// Shortest s-t path by breadth-first search, or nullopt.
inline std::optional<std::vector<Vertex>> reach_path(const Digraph& g) {
    if (g.source == g.target) return std::vector<Vertex>{g.source};
    auto out = g.out_lists();
    std::vector<Vertex> parent(g.num_vertices + 1, 0);
    parent[g.source] = g.source;
    std::deque<Vertex> queue{g.source};
    while (!queue.empty()) {
        Vertex u = queue.front();
        queue.pop_front();
        for (Vertex v : out[u]) {
            if (parent[v]) continue;
            parent[v] = u;
            if (v == g.target) {
                std::vector<Vertex> path{v};
                while (path.back() != g.source) path.push_back(parent[path.back()]);
                return std::vector<Vertex>(path.rbegin(), path.rend());
            }
            queue.push_back(v);
        }
    }
    return std::nullopt;
}

/// Reflexive-transitive closure by repeated boolean squaring.
inline std::vector<std::vector<char>> transitive_closure(const Digraph& g) {
    const std::size_t n = g.num_vertices;
    std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) r[i][i] = 1;
    for (auto [u, v] : g.edges) r[u - 1][v - 1] = 1;
    for (std::size_t len = 1; len < n; len *= 2) {
        auto sq = r;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                if (r[i][k])
                    for (std::size_t j = 0; j < n; ++j)
                        if (r[k][j]) sq[i][j] = 1;
        r.swap(sq);
    }
    return r;
}

inline bool reach_closure(const Digraph& g) { return transitive_closure(g)[g.source - 1][g.target - 1] != 0; }

// ---------------------------------------------------------------------------
// LP_{2,k}

struct LpResult {
    bool feasible = false;
    std::optional<std::vector<bool>> x;
};

/// One 2CNF clause per {0,1} assignment of a row's support that violates it.
/// A row violated by every assignment yields the pair (x) and (not x) on its
/// first column (or on column 1 for an empty support).
inline Cnf2Formula lp_rows_to_clauses(const LpSystem& lp) {
    Cnf2Formula f;
    f.num_vars = lp.num_cols;
    auto contradiction = [&](Var v) {
        if (f.num_vars < v) f.num_vars = v;
        f.clauses.push_back(Clause::unit({v, true}));
        f.clauses.push_back(Clause::unit({v, false}));
    };
    bool empty_contradiction = false;
    for (const LpRow& row : lp.rows) {
        const auto& e = row.entries;
        if (e.empty()) {
            if (Rational(0) < row.bound && !empty_contradiction) {
                empty_contradiction = true;
                contradiction(1);
            }
            continue;
        }
        const std::size_t k = e.size();
        std::vector<std::vector<bool>> violators;
        for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
            Rational s;
            std::vector<bool> bits(k);
            for (std::size_t i = 0; i < k; ++i) {
                bits[i] = (mask >> (k - 1 - i)) & 1;
                if (bits[i]) s += e[i].coeff;
            }
            if (s < row.bound) violators.push_back(bits);
        }
        if (violators.size() == (1u << k)) {
            contradiction(e[0].col);
            continue;
        }
        for (const auto& bits : violators) {
            // Forbid the assignment: at least one literal must differ from it.
            if (k == 1) {
                f.clauses.push_back(Clause::unit({e[0].col, !bits[0]}));
            } else {
                f.clauses.push_back(Clause::binary({e[0].col, !bits[0]}, {e[1].col, !bits[1]}));
            }
        }
    }
    return f;
}

inline LpResult solve_lp(const LpSystem& lp) {
    auto f = lp_rows_to_clauses(lp);
    auto r = solve_2sat(f);
    if (!r.satisfiable) return {false, std::nullopt};
    auto x = *r.assignment;
    x.resize(lp.num_cols);
    return {true, std::move(x)};
}

inline constexpr std::size_t kBruteLpGuard = 20;

inline LpResult brute_lp(const LpSystem& lp) {
    if (lp.num_cols > kBruteLpGuard) throw GuardExceeded("brute_lp: too many columns");
    const std::size_t n = lp.num_cols;
    std::vector<bool> x(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> (n - 1 - i)) & 1;
        if (lp.satisfied_by(x)) return {true, x};
    }
    return {false, std::nullopt};
}

// ---------------------------------------------------------------------------
// Search-1NFA

struct NfaSearchResult {
    std::optional<std::vector<Symbol>> word;
    std::size_t accept_step = 0;       // symbols read when F was first entered
    bool accepted_at_step_zero = false;  // initial state is final
};

/// Lexicographically smallest accepted word of length n, under prefix
/// acceptance. Layers good[j][q] mark (step, state) pairs from which F is
/// still reachable within the remaining n - j symbols; the word is then
/// built greedily forward over the reachable state sets.
inline NfaSearchResult search_1nfa(const NfaSpec& a) {
    const std::size_t n = a.length, Q = a.num_states;
    std::vector<std::vector<char>> good(n + 1, std::vector<char>(Q + 1, 0));
    for (Vertex q = 1; q <= Q; ++q) good[n][q] = a.is_final(q);
    for (std::size_t j = n; j-- > 0;)
        for (Vertex q = 1; q <= Q; ++q) {
            if (a.is_final(q)) {
                good[j][q] = 1;
                continue;
            }
            for (Symbol s = 0; s < a.num_symbols && !good[j][q]; ++s)
                for (Vertex r : a.next(q, s))
                    if (good[j + 1][r]) {
                        good[j][q] = 1;
                        break;
                    }
        }
    NfaSearchResult res;
    if (!good[0][a.initial]) return res;
    std::vector<char> cur(Q + 1, 0);
    cur[a.initial] = 1;
    std::vector<Symbol> word;
    for (std::size_t j = 0; j <= n; ++j) {
        bool accepted = false;
        for (Vertex q = 1; q <= Q; ++q)
            if (cur[q] && a.is_final(q)) accepted = true;
        if (accepted) {
            res.accept_step = j;
            res.accepted_at_step_zero = j == 0;
            word.resize(n, 0);
            res.word = std::move(word);
            return res;
        }
        for (Symbol s = 0; s < a.num_symbols; ++s) {
            std::vector<char> nxt(Q + 1, 0);
            bool any = false;
            for (Vertex q = 1; q <= Q; ++q)
                if (cur[q] && good[j][q])
                    for (Vertex r : a.next(q, s))
                        if (good[j + 1][r]) nxt[r] = any = true;
            if (any) {
                word.push_back(s);
                cur.swap(nxt);
                break;
            }
        }
    }
    throw std::logic_error("search_1nfa: inconsistent layers");
}

// ---------------------------------------------------------------------------
// Search-UOCK

class PreconditionViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Lexicographically smallest increasing index sequence (k >= 1) whose
/// concatenation is the target. States are (position in target, smallest
/// usable index); solvable[p][i] is filled from the back.
inline std::optional<std::vector<std::size_t>> search_uock(const UockInstance& u) {
    for (std::size_t i = 0; i < u.pieces.size(); ++i)
        if (count_occurrences(u.target, u.pieces[i]) > 1)
            throw PreconditionViolation("piece " + std::to_string(i + 1) + " is not unique in the target");
    const std::string& w = u.target;
    const std::size_t L = w.size(), n = u.pieces.size();
    auto fits = [&](std::size_t p, std::size_t i) {
        const auto& piece = u.pieces[i - 1];
        return p + piece.size() <= L && w.compare(p, piece.size(), piece) == 0;
    };
    // solvable[p][i]: some sequence of indices >= i covers w[p..] with at least one piece.
    std::vector<std::vector<char>> solvable(L + 1, std::vector<char>(n + 2, 0));
    for (std::size_t p = L + 1; p-- > 0;)
        for (std::size_t i = n; i >= 1; --i) {
            bool ok = solvable[p][i + 1];
            if (!ok && fits(p, i)) {
                std::size_t q = p + u.pieces[i - 1].size();
                ok = q == L || solvable[q][i + 1];
            }
            solvable[p][i] = ok;
        }
    if (n == 0 || !solvable[0][1]) return std::nullopt;
    std::vector<std::size_t> seq;
    std::size_t p = 0, i = 1;
    while (true) {
        for (;; ++i) {
            if (!fits(p, i)) continue;
            std::size_t q = p + u.pieces[i - 1].size();
            if (q == L || solvable[q][i + 1]) {
                seq.push_back(i);
                p = q;
                ++i;
                break;
            }
        }
        if (p == L) return seq;
    }
}

inline constexpr std::size_t kBruteUockGuard = 15;

/// Exhaustive over subsets; the smallest sequence in lexicographic order.
inline std::optional<std::vector<std::size_t>> brute_uock(const UockInstance& u) {
    const std::size_t n = u.pieces.size();
    if (n > kBruteUockGuard) throw GuardExceeded("brute_uock: too many pieces");
    std::optional<std::vector<std::size_t>> best;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<std::size_t> seq;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) seq.push_back(i + 1);
        if (u.concat(seq) == u.target && (!best || seq < *best)) best = seq;
    }
    return best;
}

// ---------------------------------------------------------------------------
// Max-HPP

/// best[j][i]: heaviest continuation of length j steps starting at i.
/// The argmax is rebuilt forward taking the smallest next index on ties.
inline OptResult solve_maxhpp(const HppInstance& h) {
    const std::size_t N = h.dim, d = h.length;
    std::vector<std::vector<std::uint64_t>> best(d, std::vector<std::uint64_t>(N + 1, 0));
    for (std::size_t steps = 1; steps < d; ++steps)
        for (Vertex i = 1; i <= N; ++i) {
            std::uint64_t m = 0;
            for (Vertex k = 1; k <= N; ++k) m = std::max(m, h.at(i, k) + best[steps - 1][k]);
            best[steps][i] = m;
        }
    OptResult r;
    r.value = best[d - 1][h.start];
    r.sequence.push_back(h.start);
    Vertex cur = h.start;
    for (std::size_t steps = d - 1; steps > 0; --steps) {
        for (Vertex k = 1; k <= N; ++k)
            if (h.at(cur, k) + best[steps - 1][k] == best[steps][cur]) {
                cur = k;
                break;
            }
        r.sequence.push_back(cur);
    }
    return r;
}

/// Measured-vs-optimal ratio max(opt/meas, meas/opt), exact.
inline Rational perf_ratio(std::uint64_t measured, std::uint64_t optimal) {
    if (measured == 0 || optimal == 0) throw std::domain_error("perf_ratio: measures must be positive");
    Rational a(static_cast<std::int64_t>(optimal), static_cast<std::int64_t>(measured));
    Rational b(static_cast<std::int64_t>(measured), static_cast<std::int64_t>(optimal));
    return std::max(a, b);
}

}  // namespace sublin
