#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sublin/generate.hpp"
#include "sublin/instances.hpp"
#include "sublin/solvers.hpp"
#include "sublin/spacebound.hpp"

namespace sublin {

enum class ReductionKind { many_one, turing };
enum class AnswerMap { identity, complement };

inline std::string_view kind_name(ReductionKind k) { return k == ReductionKind::many_one ? "many_one" : "turing"; }
inline std::string_view answer_map_name(AnswerMap a) { return a == AnswerMap::identity ? "identity" : "complement"; }

/// Size contract m2(f(x)) <= k * m1(x)^e + k; e = 1 is a short reduction.
struct SizeBound {
    std::uint64_t k = 1;
    std::uint32_t e = 1;

    std::uint64_t limit(std::uint64_t m1) const {
        unsigned __int128 p = 1;
        for (std::uint32_t i = 0; i < e; ++i) p *= m1;
        unsigned __int128 v = p * k + k;
        return v > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(v);
    }
};

struct ReductionDecl {
    std::string name;
    Family source = Family::cnf;
    SizeParamKind source_param = SizeParamKind::m_vbl;
    Family target = Family::cnf;
    SizeParamKind target_param = SizeParamKind::m_vbl;
    ReductionKind kind = ReductionKind::many_one;
    AnswerMap answer_map = AnswerMap::identity;
    SizeBound bound;
};

struct Reduction {
    ReductionDecl decl;
    std::function<Instance(const Instance&)> apply;
};

namespace detail {

inline void require_degree(const Digraph& g, std::size_t cap, std::string_view who) {
    auto d = g.degrees();
    for (Vertex v = 1; v <= g.num_vertices; ++v)
        if (d[v] > cap)
            throw InvariantViolation(std::string(who) + ": degree(" + std::to_string(v) + ")=" + std::to_string(d[v]) +
                                     ">" + std::to_string(cap));
}

template <class T>
const T& as(const Instance& x, std::string_view who) {
    if (auto p = std::get_if<T>(&x)) return *p;
    throw std::invalid_argument(std::string(who) + ": wrong input family " + std::string(family_name(family_of(x))));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// 2CNF side

/// Every variable occurring c >= 2 times becomes c copies joined by the
/// implication cycle v1 -> v2 -> ... -> vc -> v1; the i-th occurrence uses
/// copy i. Input is normalized first.
inline Cnf2Formula split_occurrences(const Cnf2Formula& input) {
    Cnf2Formula f = normalize_cnf(input);
    auto occ = f.occurrences();
    std::vector<Var> first(f.num_vars + 1, 0);
    Var next = 1;
    for (Var v = 1; v <= f.num_vars; ++v) {
        first[v] = next;
        next += static_cast<Var>(std::max<std::size_t>(occ[v], 1));
    }
    Cnf2Formula out;
    out.num_vars = next - 1;
    std::vector<std::size_t> used(f.num_vars + 1, 0);
    auto rewrite = [&](Literal l) {
        Var copy = occ[l.var] >= 2 ? first[l.var] + static_cast<Var>(used[l.var]++) : first[l.var];
        return Literal{copy, l.positive};
    };
    for (const Clause& c : f.clauses) {
        if (c.width() == 1) {
            out.clauses.push_back(Clause::unit(rewrite(c[0])));
        } else {
            Literal a = rewrite(c[0]);
            out.clauses.push_back(Clause::binary(a, rewrite(c[1])));
        }
    }
    for (Var v = 1; v <= f.num_vars; ++v) {
        if (occ[v] < 2) continue;
        Var c = static_cast<Var>(occ[v]);
        for (Var i = 0; i < c; ++i) {
            Var from = first[v] + i, to = first[v] + (i + 1) % c;
            out.clauses.push_back(Clause::binary({from, false}, {to, true}));
        }
    }
    return out;
}

/// Query plan of the Turing reduction: the implication graph (2n vertices,
/// 2v-1 = v, 2v = not v) and the 2n queries v -> not v, not v -> v.
struct ReachQueryPlan {
    Digraph graph;
    std::vector<std::pair<Vertex, Vertex>> queries;

    /// Unsatisfiable iff both queries of some variable answer yes.
    bool satisfiable_given(const std::vector<bool>& answers) const {
        for (std::size_t i = 0; i + 1 < answers.size(); i += 2)
            if (answers[i] && answers[i + 1]) return false;
        return true;
    }
    /// The digraph a single query is asked against.
    Digraph query_graph(std::size_t i) const {
        Digraph g = graph;
        g.source = queries[i].first;
        g.target = queries[i].second;
        return g;
    }
};

inline ReachQueryPlan twosat3_to_reach_queries(const Cnf2Formula& f) {
    ReachQueryPlan plan;
    plan.graph.num_vertices = 2 * f.num_vars;
    ImplicationAdjacency adj(f);
    for (Vertex u = 1; u <= plan.graph.num_vertices; ++u)
        for (std::size_t i = 0;; ++i) {
            auto w = adj.successor(u, i);
            if (!w) break;
            plan.graph.edges.emplace_back(u, *w);
        }
    for (Var v = 1; v <= f.num_vars; ++v) {
        plan.queries.emplace_back(2 * v - 1, 2 * v);
        plan.queries.emplace_back(2 * v, 2 * v - 1);
    }
    return plan;
}

/// Clause (not u or v) per edge with units (s) and (not t): satisfiable iff
/// t is unreachable from s. Split afterwards to bound occurrences by 3.
inline Cnf2Formula reach_to_2sat3(const Digraph& g) {
    detail::require_degree(g, 3, "reach_to_2sat3");
    Cnf2Formula f;
    f.num_vars = g.num_vertices;
    for (auto [u, v] : g.edges) f.clauses.push_back(Clause::binary({u, false}, {v, true}));
    f.clauses.push_back(Clause::unit({g.source, true}));
    f.clauses.push_back(Clause::unit({g.target, false}));
    return split_occurrences(f);
}

/// Positive literal x contributes +x, negative literal contributes -x and
/// lowers the right-hand side by one.
inline LpSystem twosat3_to_lp(const Cnf2Formula& f) {
    LpSystem lp;
    lp.num_cols = f.num_vars;
    for (const Clause& c : f.clauses) {
        std::map<Var, std::int64_t> coeff;
        std::int64_t rhs = 1;
        auto add = [&](Literal l) {
            coeff[l.var] += l.positive ? 1 : -1;
            if (!l.positive) --rhs;
        };
        if (c.width() == 2 && c[0] == c[1]) {
            add(c[0]);
        } else {
            for (Literal l : c.literals()) add(l);
        }
        LpRow row;
        for (auto [v, a] : coeff)
            if (a != 0) row.entries.push_back({v, Rational(a)});
        row.bound = Rational(rhs);
        lp.rows.push_back(std::move(row));
    }
    return lp;
}

inline Cnf2Formula lp_to_2sat3(const LpSystem& lp) { return split_occurrences(lp_rows_to_clauses(lp)); }

// ---------------------------------------------------------------------------
// Digraph side

/// Every vertex of degree d > 3 becomes a chain of d - 2 nodes; its edge
/// slots (incoming first, then outgoing, each in edge order) are spread two
/// on the first node, one per interior node and two on the last. The source
/// maps to the first node of its chain, the target to the last.
inline Digraph degree_reduce(const Digraph& g) {
    const std::size_t n = g.num_vertices;
    auto deg = g.degrees();
    std::vector<Vertex> first(n + 1, 0), nodes(n + 1, 1);
    Vertex next = 1;
    for (Vertex v = 1; v <= n; ++v) {
        first[v] = next;
        if (deg[v] > 3) nodes[v] = static_cast<Vertex>(deg[v] - 2);
        next += nodes[v];
    }
    // Slot k of a split vertex sits on node min(max(k - 1, 0), nodes - 1).
    auto node_for = [&](Vertex v, std::size_t slot) {
        if (nodes[v] == 1) return first[v];
        std::size_t k = slot == 0 ? 0 : std::min<std::size_t>(slot - 1, nodes[v] - 1);
        return static_cast<Vertex>(first[v] + k);
    };
    std::vector<std::size_t> in_deg(n + 1, 0);
    for (auto [u, v] : g.edges) ++in_deg[v];
    std::vector<std::size_t> in_used(n + 1, 0), out_used(n + 1, 0);
    Digraph out;
    out.num_vertices = next - 1;
    for (auto [u, v] : g.edges) {
        Vertex from = node_for(u, in_deg[u] + out_used[u]++);
        Vertex to = node_for(v, in_used[v]++);
        out.edges.emplace_back(from, to);
    }
    for (Vertex v = 1; v <= n; ++v)
        for (Vertex i = 0; i + 1 < nodes[v]; ++i) out.edges.emplace_back(first[v] + i, first[v] + i + 1);
    out.source = first[g.source];
    out.target = first[g.target] + nodes[g.target] - 1;
    return out;
}

/// Vertex <i,j> = (i-1)n + j of the n-layer copy.
inline Vertex layer_vertex(std::size_t n, std::size_t i, Vertex j) { return static_cast<Vertex>((i - 1) * n + j); }

/// n layers of V; each edge (u,v) links <i,u> to <i+1,v>, and the target may
/// stay put from layer to layer, so s' = <1,s> reaches t' = <n,t> exactly
/// when s reaches t. Edges are listed in increasing order.
inline Digraph layered_square(const Digraph& g) {
    const std::size_t n = g.num_vertices;
    Digraph out;
    out.num_vertices = n * n;
    for (std::size_t i = 1; i < n; ++i) {
        for (auto [u, v] : g.edges) out.edges.emplace_back(layer_vertex(n, i, u), layer_vertex(n, i + 1, v));
        out.edges.emplace_back(layer_vertex(n, i, g.target), layer_vertex(n, i + 1, g.target));
    }
    std::sort(out.edges.begin(), out.edges.end());
    out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
    out.source = layer_vertex(n, 1, g.source);
    out.target = layer_vertex(n, n, g.target);
    return out;
}

/// States are vertices; symbol i in 1..3 moves to the i-th out-neighbour in
/// ascending order; symbol 0 has no moves. Input length is |V|.
inline NfaSpec dstcon_to_1nfa(const Digraph& g) {
    detail::require_degree(g, 3, "dstcon_to_1nfa");
    NfaSpec a;
    a.num_states = g.num_vertices;
    a.num_symbols = 4;
    a.length = g.num_vertices;
    a.initial = g.source;
    a.finals = {g.target};
    a.resize_delta();
    auto out = g.out_lists();
    for (Vertex v = 1; v <= g.num_vertices; ++v) {
        out[v].erase(std::unique(out[v].begin(), out[v].end()), out[v].end());
        for (std::size_t i = 0; i < out[v].size(); ++i) a.add_transition(v, static_cast<Symbol>(i + 1), out[v][i]);
    }
    return a;
}

/// Over the layered graph with N vertices: the target lists the fixed-width
/// tokens s'+1 .. t', and each edge (i,j) inside that range contributes the
/// piece holding tokens i+1 .. j. Aligned '#' separators make every piece
/// occur at most once.
inline UockInstance dstcon_to_uock(const Digraph& g) {
    detail::require_degree(g, 3, "dstcon_to_uock");
    Digraph h = layered_square(g);
    const std::size_t N = h.num_vertices;
    const std::size_t width = bits_for(N + 1);
    auto token = [&](std::uint64_t i) { return detail::fixed_binary(i, width) + "#"; };
    auto run = [&](std::uint64_t from, std::uint64_t to) {
        std::string s;
        for (std::uint64_t i = from; i <= to; ++i) s += token(i);
        return s;
    };
    UockInstance u;
    if (h.source == h.target) {
        u.target = token(h.source);
        u.pieces.push_back(u.target);
        return u;
    }
    u.target = run(h.source + 1, h.target);
    for (auto [i, j] : h.edges)
        if (i >= h.source && j <= h.target) u.pieces.push_back(run(i + 1, j));
    return u;
}

/// Over the layered graph with N = n^2 vertices: weight n on its edges and on
/// the target's diagonal entry, weight 1 elsewhere; d = N from s'. The
/// optimum is (N-1)n exactly when s reaches t.
inline HppInstance dstcon_to_maxhpp(const Digraph& g) {
    detail::require_degree(g, 3, "dstcon_to_maxhpp");
    Digraph h = layered_square(g);
    const std::size_t N = h.num_vertices, n = g.num_vertices;
    HppInstance p;
    p.dim = N;
    p.length = N;
    p.start = h.source;
    p.matrix.assign(N * N, 1);
    for (auto [u, v] : h.edges) p.at(u, v) = static_cast<std::uint32_t>(n);
    p.at(h.target, h.target) = static_cast<std::uint32_t>(n);
    return p;
}

/// Decision read of a reduced Max-HPP instance: optimum equals (N-1)*sqrt(N).
inline bool maxhpp_threshold_met(const HppInstance& p) {
    const std::uint64_t n = isqrt(p.dim);
    return solve_maxhpp(p).value == (p.dim - 1) * n;
}

// ---------------------------------------------------------------------------
// Catalog

namespace detail {

template <class In, class F>
std::function<Instance(const Instance&)> wrap(std::string name, F f) {
    return [name = std::move(name), f](const Instance& x) -> Instance { return f(as<In>(x, name)); };
}

}  // namespace detail

/// The many-one catalog, in a fixed order. Column cap 3 fixes the lp_to_2sat3 constant.
inline std::vector<Reduction> reduction_catalog() {
    using P = SizeParamKind;
    using F = Family;
    auto mk = [](std::string name, F sf, P sp, F tf, P tp, AnswerMap am, std::uint64_t k, std::uint32_t e, auto fn) {
        return Reduction{{name, sf, sp, tf, tp, ReductionKind::many_one, am, {k, e}}, fn};
    };
    constexpr std::uint64_t kColumnCap = 3;
    return {
        mk("split3", F::cnf, P::m_cls, F::cnf, P::m_cls, AnswerMap::identity, 4, 1,
           detail::wrap<Cnf2Formula>("split3", split_occurrences)),
        mk("reach-to-2sat3", F::dstcon, P::m_ver, F::cnf, P::m_vbl, AnswerMap::complement, 5, 1,
           detail::wrap<Digraph>("reach-to-2sat3", reach_to_2sat3)),
        mk("2sat3-to-lp", F::cnf, P::m_vbl, F::lp, P::m_col, AnswerMap::identity, 1, 1,
           detail::wrap<Cnf2Formula>("2sat3-to-lp", twosat3_to_lp)),
        mk("lp-to-2sat3", F::lp, P::m_col, F::cnf, P::m_vbl, AnswerMap::identity, 3 * kColumnCap + 1, 1,
           detail::wrap<LpSystem>("lp-to-2sat3", lp_to_2sat3)),
        mk("degree3", F::dstcon, P::m_edg, F::dstcon, P::m_edg, AnswerMap::identity, 3, 1,
           detail::wrap<Digraph>("degree3", degree_reduce)),
        mk("layer", F::dstcon, P::m_ver, F::dstcon, P::m_ver, AnswerMap::identity, 1, 2,
           detail::wrap<Digraph>("layer", layered_square)),
        mk("to-1nfa", F::dstcon, P::m_ver, F::nfa, P::m_nfa, AnswerMap::identity, 4, 2,
           detail::wrap<Digraph>("to-1nfa", dstcon_to_1nfa)),
        mk("to-uock", F::dstcon, P::m_ver, F::uock, P::m_elm, AnswerMap::identity, 3, 2,
           detail::wrap<Digraph>("to-uock", dstcon_to_uock)),
        mk("to-maxhpp", F::dstcon, P::m_ver, F::hpp, P::m_col, AnswerMap::identity, 1, 2,
           detail::wrap<Digraph>("to-maxhpp", dstcon_to_maxhpp)),
    };
}

/// Declaration of the Turing reduction; its function is twosat3_to_reach_queries.
inline ReductionDecl reach_queries_decl() {
    return {"reach-queries", Family::cnf,           SizeParamKind::m_vbl, Family::dstcon, SizeParamKind::m_ver,
            ReductionKind::turing, AnswerMap::identity, {2, 1}};
}

inline const Reduction& find_reduction(const std::vector<Reduction>& catalog, std::string_view name) {
    for (const auto& r : catalog)
        if (r.decl.name == name) return r;
    std::string names;
    for (const auto& r : catalog) names += (names.empty() ? "" : ", ") + r.decl.name;
    throw std::invalid_argument("unknown reduction '" + std::string(name) + "' (known: " + names + ")");
}

// ---------------------------------------------------------------------------
// Composition

class CompositionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Composed bound, valid for every m1 >= 0:
/// e2 = 1: k = k1*k2 + k2 with e = e1; otherwise k = k2*(2*k1)^e2 + k2 with e = e1*e2.
inline SizeBound compose_bounds(const SizeBound& first, const SizeBound& second) {
    if (second.e == 1) return {first.k * second.k + second.k, first.e};
    std::uint64_t p = 1;
    for (std::uint32_t i = 0; i < second.e; ++i) p *= 2 * first.k;
    return {second.k * p + second.k, first.e * second.e};
}

/// x -> second(first(x)).
inline Reduction compose(const Reduction& first, const Reduction& second) {
    const auto &a = first.decl, &b = second.decl;
    if (a.kind != ReductionKind::many_one || b.kind != ReductionKind::many_one)
        throw CompositionError("only many-one reductions compose");
    if (a.target != b.source || a.target_param != b.source_param)
        throw CompositionError("cannot compose " + a.name + " (to " + std::string(family_name(a.target)) + "/" +
                               std::string(param_name(a.target_param)) + ") with " + b.name + " (from " +
                               std::string(family_name(b.source)) + "/" + std::string(param_name(b.source_param)) +
                               ")");
    ReductionDecl d;
    d.name = b.name + "∘" + a.name;
    d.source = a.source;
    d.source_param = a.source_param;
    d.target = b.target;
    d.target_param = b.target_param;
    d.kind = ReductionKind::many_one;
    d.answer_map = a.answer_map == b.answer_map ? AnswerMap::identity : AnswerMap::complement;
    d.bound = compose_bounds(a.bound, b.bound);
    auto f = first.apply, g = second.apply;
    return {d, [f, g](const Instance& x) { return g(f(x)); }};
}

}  // namespace sublin
