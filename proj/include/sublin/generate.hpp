#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sublin/instances.hpp"

namespace sublin {

/// Portable seeded randomness: std::mt19937_64 (its output sequence is fixed
/// by the standard) with our own rejection sampling, because the standard
/// distributions differ between library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below(0)");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do x = engine_();
        while (x >= limit);
        return x % n;
    }
    /// Uniform in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }
    bool chance(std::uint32_t num, std::uint32_t den) { return below(den) < num; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

    /// Independent child stream, e.g. one per generated instance.
    Rng fork() { return Rng(engine_()); }

private:
    std::mt19937_64 engine_;
};

class InfeasibleConstraints : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Knobs for gen_random. `n` and `m` mean vars/clauses, vertices/edges,
/// columns/rows, states/transitions, tokens/pieces or matrix dimension,
/// depending on the family. `cap` is the occurrence / degree / column cap
/// (0 = uncapped).
struct GenParams {
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t cap = 0;
    std::size_t symbols = 2;  // NFA alphabet size
    std::size_t length = 0;   // NFA input length or HPP d; 0 picks a default
};

namespace detail {

inline Cnf2Formula gen_cnf(const GenParams& p, Rng& rng) {
    if (p.cap > 0 && p.m > p.n * p.cap)
        throw InfeasibleConstraints("cannot place " + std::to_string(p.m) + " clauses with occurrence cap " +
                                    std::to_string(p.cap) + " over " + std::to_string(p.n) + " variables");
    if (p.m > 0 && p.n == 0) throw InfeasibleConstraints("clauses requested over zero variables");
    Cnf2Formula f;
    f.num_vars = p.n;
    std::vector<std::size_t> budget(p.n + 1, p.cap > 0 ? p.cap : SIZE_MAX);
    std::vector<Var> open;
    for (Var v = 1; v <= p.n; ++v) open.push_back(v);
    auto take = [&]() {
        std::size_t k = rng.below(open.size());
        Var v = open[k];
        if (--budget[v] == 0) {
            open[k] = open.back();
            open.pop_back();
        }
        return Literal{v, rng.chance(1, 2)};
    };
    for (std::size_t c = 0; c < p.m; ++c) {
        // Keep enough budget for the remaining clauses (one slot each).
        std::size_t slots = 0;
        for (Var v : open) slots += std::min<std::size_t>(budget[v], p.m + 1);
        std::size_t remaining = p.m - c - 1;
        Literal a = take();
        if (slots >= remaining + 2 && !open.empty() && rng.chance(5, 6))
            f.clauses.push_back(Clause::binary(a, take()));
        else
            f.clauses.push_back(Clause::unit(a));
    }
    return f;
}

inline Digraph gen_digraph(const GenParams& p, Rng& rng) {
    const std::size_t n = p.n;
    if (n == 0) throw InfeasibleConstraints("digraph needs at least one vertex");
    const std::size_t cap = p.cap > 0 ? p.cap : 2 * n;
    if (p.m > n * (n - 1)) throw InfeasibleConstraints("too many edges for a loop-free digraph");
    if (2 * p.m > n * cap)
        throw InfeasibleConstraints("degree cap " + std::to_string(p.cap) + " admits at most " +
                                    std::to_string(n * cap / 2) + " edges");
    std::vector<std::pair<Vertex, Vertex>> pairs;
    for (Vertex u = 1; u <= n; ++u)
        for (Vertex v = 1; v <= n; ++v)
            if (u != v) pairs.emplace_back(u, v);
    for (int attempt = 0; attempt < 2000; ++attempt) {
        rng.shuffle(pairs);
        std::vector<std::size_t> deg(n + 1, 0);
        Digraph g;
        g.num_vertices = n;
        for (auto [u, v] : pairs) {
            if (g.edges.size() == p.m) break;
            if (deg[u] < cap && deg[v] < cap) {
                ++deg[u];
                ++deg[v];
                g.edges.emplace_back(u, v);
            }
        }
        if (g.edges.size() != p.m) continue;
        g.source = static_cast<Vertex>(1 + rng.below(n));
        g.target = static_cast<Vertex>(1 + rng.below(n));
        if (n > 1)
            while (g.target == g.source) g.target = static_cast<Vertex>(1 + rng.below(n));
        return g;
    }
    throw InfeasibleConstraints("could not realise " + std::to_string(p.m) + " edges under degree cap " +
                                std::to_string(cap));
}

inline LpSystem gen_lp(const GenParams& p, Rng& rng) {
    if (p.cap > 0 && p.m > p.n * p.cap)
        throw InfeasibleConstraints("too many rows for the column cap");
    if (p.m > 0 && p.n == 0) throw InfeasibleConstraints("rows requested over zero columns");
    LpSystem lp;
    lp.num_cols = p.n;
    std::vector<std::size_t> used(p.n + 1, 0);
    auto open_cols = [&]() {
        std::vector<Vertex> c;
        for (Vertex v = 1; v <= p.n; ++v)
            if (p.cap == 0 || used[v] < p.cap) c.push_back(v);
        return c;
    };
    auto coeff = [&]() {
        std::int64_t num = 0;
        while (num == 0) num = rng.between(-3, 3);
        return Rational(num, rng.between(1, 2));
    };
    for (std::size_t r = 0; r < p.m; ++r) {
        auto cols = open_cols();
        LpRow row;
        if (!cols.empty()) {
            rng.shuffle(cols);
            std::size_t width = (cols.size() >= 2 && rng.chance(4, 5)) ? 2 : 1;
            for (std::size_t k = 0; k < width; ++k) {
                ++used[cols[k]];
                row.entries.push_back({cols[k], coeff()});
            }
            if (width == 2 && row.entries[1].col < row.entries[0].col) std::swap(row.entries[0], row.entries[1]);
        }
        row.bound = Rational(rng.between(-6, 6), rng.between(1, 2));
        lp.rows.push_back(std::move(row));
    }
    return lp;
}

inline NfaSpec gen_nfa(const GenParams& p, Rng& rng) {
    if (p.n == 0 || p.symbols == 0) throw InfeasibleConstraints("automaton needs states and symbols");
    NfaSpec a;
    a.num_states = p.n;
    a.num_symbols = p.symbols;
    a.length = p.length ? p.length : p.n;
    a.initial = static_cast<Vertex>(1 + rng.below(p.n));
    a.resize_delta();
    std::size_t cells = p.n * p.symbols * p.n;
    if (p.m > cells) throw InfeasibleConstraints("more transitions than (state, symbol, state) triples");
    std::size_t placed = 0;
    while (placed < p.m) {
        Vertex q = static_cast<Vertex>(1 + rng.below(p.n));
        Symbol s = static_cast<Symbol>(rng.below(p.symbols));
        Vertex r = static_cast<Vertex>(1 + rng.below(p.n));
        std::size_t before = a.next(q, s).size();
        a.add_transition(q, s, r);
        if (a.next(q, s).size() > before) ++placed;
    }
    std::size_t num_final = p.n == 1 ? rng.below(2) : 1 + rng.below(std::max<std::size_t>(1, p.n / 3));
    std::set<Vertex> fin;
    while (fin.size() < num_final) fin.insert(static_cast<Vertex>(1 + rng.below(p.n)));
    a.finals.assign(fin.begin(), fin.end());
    return a;
}

inline std::string fixed_binary(std::uint64_t value, std::size_t width) {
    std::string s(width, '0');
    for (std::size_t i = 0; i < width; ++i)
        if (value >> (width - 1 - i) & 1) s[i] = '1';
    return s;
}

inline std::size_t bit_width_for(std::uint64_t max_value) {
    std::size_t w = 1;
    while ((std::uint64_t{1} << w) <= max_value) ++w;
    return w;
}

/// Target is n distinct fixed-width tokens; pieces are aligned token runs
/// (unique by alignment) or strings that do not occur in the target.
inline UockInstance gen_uock(const GenParams& p, Rng& rng) {
    const std::size_t tokens = std::max<std::size_t>(p.n, 1);
    const std::size_t width = bit_width_for(2 * tokens);
    std::vector<std::uint64_t> ids;
    for (std::uint64_t i = 0; i < 2 * tokens; ++i) ids.push_back(i);
    rng.shuffle(ids);
    std::vector<std::string> tok;
    for (std::size_t i = 0; i < tokens; ++i) tok.push_back(fixed_binary(ids[i], width) + "#");
    UockInstance u;
    for (const auto& t : tok) u.target += t;
    for (std::size_t k = 0; k < p.m; ++k) {
        if (rng.chance(3, 4)) {
            std::size_t a = rng.below(tokens);
            std::size_t b = a + rng.below(std::min<std::size_t>(3, tokens - a));
            std::string piece;
            for (std::size_t i = a; i <= b; ++i) piece += tok[i];
            u.pieces.push_back(std::move(piece));
        } else {
            // Token id never used in the target, so the piece is not a substring.
            u.pieces.push_back(fixed_binary(ids[tokens + rng.below(tokens)], width) + "#");
        }
    }
    return u;
}

inline HppInstance gen_hpp(const GenParams& p, Rng& rng) {
    if (p.n == 0) throw InfeasibleConstraints("matrix dimension must be positive");
    HppInstance h;
    h.dim = p.n;
    h.length = p.length ? std::min(p.length, p.n) : 1 + rng.below(p.n);
    h.start = static_cast<Vertex>(1 + rng.below(p.n));
    for (std::size_t k = 0; k < p.n * p.n; ++k) h.matrix.push_back(static_cast<std::uint32_t>(1 + rng.below(p.n)));
    return h;
}

}  // namespace detail

/// Deterministic for a fixed (family, params, seed); output passes validate
/// with the requested cap.
inline Instance gen_random(Family family, const GenParams& params, std::uint64_t seed) {
    Rng rng(seed);
    switch (family) {
        case Family::cnf: return detail::gen_cnf(params, rng);
        case Family::dstcon: return detail::gen_digraph(params, rng);
        case Family::lp: return detail::gen_lp(params, rng);
        case Family::nfa: return detail::gen_nfa(params, rng);
        case Family::uock: return detail::gen_uock(params, rng);
        case Family::hpp: return detail::gen_hpp(params, rng);
    }
    throw std::logic_error("unreachable");
}

inline ValidateOptions caps_for(Family family, std::size_t cap) {
    ValidateOptions o;
    if (family == Family::cnf) o.occurrence_cap = cap;
    if (family == Family::dstcon) o.degree_cap = cap;
    if (family == Family::lp) o.column_cap = cap;
    return o;
}

}  // namespace sublin
