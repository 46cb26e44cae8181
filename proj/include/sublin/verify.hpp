#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sublin/generate.hpp"
#include "sublin/reductions.hpp"
#include "sublin/solvers.hpp"
#include "sublin/spacebound.hpp"

namespace sublin {

// ---------------------------------------------------------------------------
// Instance domains

/// Clause universe over n variables: units x1, -x1, x2, ... then every pair
/// of distinct literals in that order.
inline std::vector<Clause> clause_universe(std::size_t n) {
    std::vector<Literal> lits;
    for (Var v = 1; v <= n; ++v) {
        lits.push_back({v, true});
        lits.push_back({v, false});
    }
    std::vector<Clause> out;
    for (Literal l : lits) out.push_back(Clause::unit(l));
    for (std::size_t i = 0; i < lits.size(); ++i)
        for (std::size_t j = i + 1; j < lits.size(); ++j) out.push_back(Clause::binary(lits[i], lits[j]));
    return out;
}

/// Every formula over n <= max_vars variables made of at most max_clauses
/// distinct clauses of the universe.
inline std::vector<Cnf2Formula> all_small_formulas(std::size_t max_vars, std::size_t max_clauses) {
    std::vector<Cnf2Formula> out;
    for (std::size_t n = 0; n <= max_vars; ++n) {
        auto uni = clause_universe(n);
        std::vector<std::size_t> pick;
        std::function<void(std::size_t)> rec = [&](std::size_t from) {
            Cnf2Formula f;
            f.num_vars = n;
            for (auto i : pick) f.clauses.push_back(uni[i]);
            out.push_back(std::move(f));
            if (pick.size() == max_clauses) return;
            for (std::size_t i = from; i < uni.size(); ++i) {
                pick.push_back(i);
                rec(i + 1);
                pick.pop_back();
            }
        };
        rec(0);
    }
    return out;
}

/// Every loop-free digraph on 1..max_n vertices with every (s, t) pair.
inline std::vector<Digraph> all_small_digraphs(std::size_t max_n) {
    std::vector<Digraph> out;
    for (std::size_t n = 1; n <= max_n; ++n) {
        std::vector<std::pair<Vertex, Vertex>> pairs;
        for (Vertex u = 1; u <= n; ++u)
            for (Vertex v = 1; v <= n; ++v)
                if (u != v) pairs.emplace_back(u, v);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
            Digraph g;
            g.num_vertices = n;
            for (std::size_t i = 0; i < pairs.size(); ++i)
                if (mask >> i & 1) g.edges.push_back(pairs[i]);
            for (Vertex s = 1; s <= n; ++s)
                for (Vertex t = 1; t <= n; ++t) {
                    g.source = s;
                    g.target = t;
                    out.push_back(g);
                }
        }
    }
    return out;
}

/// Systems over n <= max_cols columns with at most max_rows rows drawn (as a
/// multiset) from: empty rows with bound 0 or 1, one-column rows with
/// coefficient +-1, two-column rows with coefficients +-1, bounds -1..2.
inline std::vector<LpSystem> all_small_lps(std::size_t max_cols, std::size_t max_rows) {
    std::vector<LpSystem> out;
    for (std::size_t n = 0; n <= max_cols; ++n) {
        std::vector<LpRow> uni;
        for (int b = 0; b <= 1; ++b) uni.push_back({{}, Rational(b)});
        for (Vertex c = 1; c <= n; ++c)
            for (int a : {1, -1})
                for (int b = -1; b <= 2; ++b) uni.push_back({{{c, Rational(a)}}, Rational(b)});
        for (Vertex c1 = 1; c1 <= n; ++c1)
            for (Vertex c2 = c1 + 1; c2 <= n; ++c2)
                for (int a1 : {1, -1})
                    for (int a2 : {1, -1})
                        for (int b = -1; b <= 2; ++b)
                            uni.push_back({{{c1, Rational(a1)}, {c2, Rational(a2)}}, Rational(b)});
        std::vector<std::size_t> pick;
        std::function<void(std::size_t)> rec = [&](std::size_t from) {
            LpSystem lp;
            lp.num_cols = n;
            for (auto i : pick) lp.rows.push_back(uni[i]);
            out.push_back(std::move(lp));
            if (pick.size() == max_rows) return;
            for (std::size_t i = from; i < uni.size(); ++i) {
                pick.push_back(i);
                rec(i);
                pick.pop_back();
            }
        };
        rec(0);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reference deciders, exhaustive where the instance is small enough

inline bool decide_cnf(const Cnf2Formula& f) {
    return f.num_vars <= 20 ? brute_2sat(f).satisfiable : solve_2sat(f).satisfiable;
}
inline bool decide_reach(const Digraph& g) { return g.num_vertices <= 200 ? reach_closure(g) : reach_decide(g); }
inline bool decide_lp(const LpSystem& lp) {
    return lp.num_cols <= kBruteLpGuard ? brute_lp(lp).feasible : solve_lp(lp).feasible;
}
inline bool decide_nfa(const NfaSpec& a) {
    double words = std::pow(static_cast<double>(a.num_symbols), static_cast<double>(a.length));
    if (a.num_symbols == 0 || words > 65536) return search_1nfa(a).word.has_value();
    std::vector<Symbol> w(a.length, 0);
    while (true) {
        if (a.accepts(w)) return true;
        std::size_t i = a.length;
        while (i > 0 && w[i - 1] + 1 == a.num_symbols) w[--i] = 0;
        if (i == 0) return false;
        ++w[i - 1];
    }
}
inline bool decide_uock(const UockInstance& u) {
    return u.pieces.size() <= 12 ? brute_uock(u).has_value() : search_uock(u).has_value();
}

/// Yes/no reading per family; Max-HPP instances are read as the threshold
/// question produced by the reachability reduction.
inline bool reference_decide(const Instance& x) {
    return std::visit(
        [](const auto& v) -> bool {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Cnf2Formula>) return decide_cnf(v);
            else if constexpr (std::is_same_v<T, Digraph>) return decide_reach(v);
            else if constexpr (std::is_same_v<T, LpSystem>) return decide_lp(v);
            else if constexpr (std::is_same_v<T, NfaSpec>) return decide_nfa(v);
            else if constexpr (std::is_same_v<T, UockInstance>) return decide_uock(v);
            else return maxhpp_threshold_met(v);
        },
        x);
}

// ---------------------------------------------------------------------------
// Harness

struct VerifyReport {
    std::string name;
    std::size_t instances_checked = 0;
    std::size_t mismatch_count = 0;
    std::size_t violation_count = 0;
    std::vector<std::string> answer_mismatches;      // first few, for display
    std::vector<std::string> size_bound_violations;  // first few, for display
    std::optional<Rational> max_ratio;               // max of m2 / m1^e over m1 > 0
    std::size_t precondition_violations = 0;         // outputs failing validation
    std::size_t step_zero_acceptances = 0;           // automaton outputs accepting before any symbol

    bool passed() const { return mismatch_count == 0 && violation_count == 0 && precondition_violations == 0; }
};

inline constexpr std::size_t kReportExamples = 10;

using Decider = std::function<bool(const Instance&)>;

inline void note_ratio(VerifyReport& r, std::uint64_t m1, std::uint64_t m2, std::uint32_t e) {
    if (m1 == 0) return;
    std::int64_t den = 1;
    for (std::uint32_t i = 0; i < e; ++i) den *= static_cast<std::int64_t>(m1);
    Rational q(static_cast<std::int64_t>(m2), den);
    if (!r.max_ratio || *r.max_ratio < q) r.max_ratio = q;
}

inline void check_instance(const Reduction& red, const Instance& x, const Decider& src, const Decider& tgt,
                           VerifyReport& r) {
    const auto& d = red.decl;
    Instance y = red.apply(x);
    ++r.instances_checked;
    if (!validate(y).empty()) ++r.precondition_violations;
    if (auto a = std::get_if<NfaSpec>(&y); a && a->is_final(a->initial)) ++r.step_zero_acceptances;
    bool expect = src(x);
    if (d.answer_map == AnswerMap::complement) expect = !expect;
    bool got = tgt(y);
    if (got != expect) {
        if (r.mismatch_count++ < kReportExamples)
            r.answer_mismatches.push_back("expected " + std::string(expect ? "yes" : "no") + " on: " + serialize(x));
    }
    std::uint64_t m1 = size_param(x, d.source_param), m2 = size_param(y, d.target_param);
    if (m2 > d.bound.limit(m1)) {
        if (r.violation_count++ < kReportExamples)
            r.size_bound_violations.push_back(std::string(param_name(d.target_param)) + "=" + std::to_string(m2) +
                                              " > " + std::to_string(d.bound.k) + "*" + std::to_string(m1) +
                                              (d.bound.e > 1 ? "^" + std::to_string(d.bound.e) : "") + "+" +
                                              std::to_string(d.bound.k));
    }
    note_ratio(r, m1, m2, d.bound.e);
}

/// Checks answer preservation (through the declared answer map) and the
/// declared size bound on every instance.
inline VerifyReport verify_reduction(const Reduction& red, const std::vector<Instance>& instances,
                                     const Decider& src = reference_decide, const Decider& tgt = reference_decide) {
    VerifyReport r;
    r.name = red.decl.name;
    for (const auto& x : instances) check_instance(red, x, src, tgt, r);
    return r;
}

/// The Turing reduction: queries are executed with the linear-space search
/// in one reused workspace and combined into a satisfiability answer.
inline VerifyReport verify_reach_queries(const std::vector<Cnf2Formula>& formulas, bool sabotage_k = false) {
    auto decl = reach_queries_decl();
    if (sabotage_k) decl.bound.k = 0;
    VerifyReport r;
    r.name = decl.name;
    for (const auto& f : formulas) {
        ++r.instances_checked;
        auto plan = twosat3_to_reach_queries(f);
        if (plan.queries.size() != 2 * f.num_vars) ++r.precondition_violations;
        if (f.max_occurrence() <= 3 && plan.graph.max_degree() > 3) ++r.precondition_violations;
        DigraphAdjacency adj(plan.graph);
        MeteredWorkspace ws;
        std::vector<bool> answers;
        for (auto [s, t] : plan.queries) answers.push_back(reach_bfs(adj, s, t, ws));
        bool got = plan.satisfiable_given(answers), expect = decide_cnf(f);
        if (got != expect && r.mismatch_count++ < kReportExamples)
            r.answer_mismatches.push_back("expected " + std::string(expect ? "sat" : "unsat") + " on: " + serialize(f));
        // Every query runs on the same graph, so one size check covers them all.
        std::uint64_t m1 = f.num_vars, m2 = plan.graph.num_vertices;
        if (m2 > decl.bound.limit(m1) && r.violation_count++ < kReportExamples)
            r.size_bound_violations.push_back("m_ver=" + std::to_string(m2) + " for m_vbl=" + std::to_string(m1));
        note_ratio(r, m1, m2, 1);
    }
    return r;
}

struct VerifyOptions {
    std::size_t exhaustive_vars = 3;     // formulas: n <= this, <= 4 clauses
    std::size_t exhaustive_clauses = 4;
    std::size_t exhaustive_graph = 4;    // digraphs: n <= this, all edge subsets
    std::size_t exhaustive_cols = 2;     // LP systems: n <= this, <= 2 rows
    std::size_t random = 200;
    std::uint64_t seed = 1;
    bool sabotage_k = false;
};

namespace detail {

inline bool degree_at_most(const Digraph& g, std::size_t cap) { return g.max_degree() <= cap; }

/// Deterministic per-(reduction, index) seed.
inline std::uint64_t instance_seed(std::uint64_t seed, std::string_view name, std::size_t i) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : name) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
    Rng r(seed ^ h);
    for (std::size_t k = 0; k < i % 7; ++k) r.below(2);
    return r.below(UINT64_MAX) ^ (i * 0x9E3779B97F4A7C15ull);
}

struct RandomShape {
    Family family;
    std::size_t n_lo, n_hi;
    std::size_t cap;
    std::function<std::size_t(std::size_t, Rng&)> edges;  // m given n
};

inline std::vector<Instance> random_instances(const RandomShape& sh, std::string_view name, std::size_t count,
                                              std::uint64_t seed) {
    std::vector<Instance> out;
    for (std::size_t i = 0; i < count; ++i) {
        std::uint64_t s = instance_seed(seed, name, i);
        Rng pick(s);
        std::size_t n = static_cast<std::size_t>(pick.between(sh.n_lo, sh.n_hi));
        std::size_t m = sh.edges(n, pick);
        if (sh.family == Family::dstcon) m = std::min(m, n * (n - 1));
        GenParams p{n, m, sh.cap};
        out.push_back(gen_random(sh.family, p, pick.below(UINT64_MAX)));
    }
    return out;
}

}  // namespace detail

/// Exhaustive small domain plus seeded random instances for each catalog
/// entry, filtered by the entry's input promise.
inline std::vector<Instance> verification_domain(const std::string& name, const VerifyOptions& o) {
    std::vector<Instance> out;
    auto formulas = [&](bool cap3) {
        for (auto& f : all_small_formulas(o.exhaustive_vars, o.exhaustive_clauses))
            if (!cap3 || f.max_occurrence() <= 3) out.push_back(std::move(f));
    };
    auto graphs = [&](std::size_t max_n, std::size_t cap) {
        for (auto& g : all_small_digraphs(max_n))
            if (cap == 0 || detail::degree_at_most(g, cap)) out.push_back(std::move(g));
    };
    auto rnd = [&](detail::RandomShape sh) {
        for (auto& x : detail::random_instances(sh, name, o.random, o.seed)) out.push_back(std::move(x));
    };
    auto upto = [](double factor) {
        return [factor](std::size_t n, Rng& r) {
            return static_cast<std::size_t>(r.below(static_cast<std::uint64_t>(factor * n) + 1));
        };
    };
    auto dense = [](std::size_t n, Rng& r) { return static_cast<std::size_t>(r.below(n * (n - 1) + 1)); };

    if (name == "split3") {
        formulas(false);
        rnd({Family::cnf, 1, 10, 0, upto(2.0)});
    } else if (name == "reach-queries" || name == "2sat3-to-lp") {
        formulas(true);
        rnd({Family::cnf, 1, 12, 3, upto(1.5)});
    } else if (name == "lp-to-2sat3") {
        for (auto& lp : all_small_lps(o.exhaustive_cols, 2)) out.push_back(std::move(lp));
        rnd({Family::lp, 1, 12, 3, upto(1.5)});
    } else if (name == "degree3") {
        graphs(o.exhaustive_graph, 0);
        rnd({Family::dstcon, 2, 10, 0, dense});
    } else if (name == "layer") {
        graphs(o.exhaustive_graph, 0);
        rnd({Family::dstcon, 1, 6, 0, dense});
    } else if (name == "reach-to-2sat3" || name == "to-1nfa") {
        graphs(o.exhaustive_graph, 3);
        rnd({Family::dstcon, 1, 12, 3, upto(1.25)});
    } else if (name == "to-uock") {
        graphs(o.exhaustive_graph, 3);
        rnd({Family::dstcon, 1, 6, 3, upto(1.25)});
    } else if (name == "to-maxhpp") {
        graphs(o.exhaustive_graph, 3);
        rnd({Family::dstcon, 1, 5, 3, upto(1.25)});
    } else {
        throw std::invalid_argument("no verification domain for '" + name + "'");
    }
    return out;
}

/// Verifies one catalog entry (or the Turing query plan, "reach-queries").
inline VerifyReport verify_named(const std::string& name, const VerifyOptions& o) {
    auto domain = verification_domain(name, o);
    if (name == "reach-queries") {
        std::vector<Cnf2Formula> fs;
        for (auto& x : domain) fs.push_back(std::get<Cnf2Formula>(x));
        return verify_reach_queries(fs, o.sabotage_k);
    }
    auto catalog = reduction_catalog();
    Reduction red = find_reduction(catalog, name);
    if (o.sabotage_k) red.decl.bound.k = 0;
    return verify_reduction(red, domain);
}

inline std::vector<std::string> verifiable_names() {
    std::vector<std::string> names;
    for (const auto& r : reduction_catalog()) names.push_back(r.decl.name);
    names.push_back("reach-queries");
    return names;
}

inline std::vector<VerifyReport> verify_all(const VerifyOptions& o) {
    std::vector<VerifyReport> out;
    for (const auto& n : verifiable_names()) out.push_back(verify_named(n, o));
    return out;
}

}  // namespace sublin
