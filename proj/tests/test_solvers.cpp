#include <gtest/gtest.h>

#include "sublin/generate.hpp"
#include "sublin/solvers.hpp"
#include "sublin/verify.hpp"

using namespace sublin;

namespace {

Cnf2Formula cnf(std::size_t n, std::vector<std::vector<int>> clauses) {
    Cnf2Formula f;
    f.num_vars = n;
    for (const auto& c : clauses) {
        if (c.size() == 1) f.clauses.push_back(Clause::unit(Literal::from_int(c[0])));
        else f.clauses.push_back(Clause::binary(Literal::from_int(c[0]), Literal::from_int(c[1])));
    }
    return f;
}

// All satisfying assignments, x1 as the most significant bit.
std::vector<std::vector<bool>> all_models(const Cnf2Formula& f) {
    std::vector<std::vector<bool>> out;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << f.num_vars); ++bits) {
        std::vector<bool> x(f.num_vars);
        for (std::size_t v = 0; v < f.num_vars; ++v) x[v] = bits >> (f.num_vars - 1 - v) & 1;
        if (f.satisfied_by(x)) out.push_back(x);
    }
    return out;
}

// Floyd-Warshall reachability, independent of both library procedures.
bool reach_oracle(const Digraph& g) {
    const std::size_t n = g.num_vertices;
    std::vector<std::vector<char>> r(n + 1, std::vector<char>(n + 1, 0));
    for (std::size_t v = 1; v <= n; ++v) r[v][v] = 1;
    for (auto [u, v] : g.edges) r[u][v] = 1;
    for (std::size_t k = 1; k <= n; ++k)
        for (std::size_t i = 1; i <= n; ++i)
            if (r[i][k])
                for (std::size_t j = 1; j <= n; ++j)
                    if (r[k][j]) r[i][j] = 1;
    return r[g.source][g.target] != 0;
}

LpRow row(std::vector<std::pair<std::size_t, std::int64_t>> entries, std::int64_t b) {
    LpRow r;
    for (auto [c, a] : entries) r.entries.push_back({static_cast<Vertex>(c), Rational(a)});
    r.bound = Rational(b);
    return r;
}

// Every word of the given length over the alphabet, in lexicographic order.
std::vector<std::vector<Symbol>> all_words(std::size_t symbols, std::size_t len) {
    std::vector<std::vector<Symbol>> out{{}};
    for (std::size_t i = 0; i < len; ++i) {
        std::vector<std::vector<Symbol>> next;
        for (const auto& w : out)
            for (Symbol a = 0; a < symbols; ++a) {
                next.push_back(w);
                next.back().push_back(a);
            }
        out.swap(next);
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// 2SAT

TEST(Solve2Sat, ThreeClauseExampleHasUniqueModel) {
    auto f = cnf(2, {{1, 2}, {-1, 2}, {1, -2}});
    auto models = all_models(f);
    ASSERT_EQ(models.size(), 1u);
    auto r = solve_2sat(f);
    ASSERT_TRUE(r.satisfiable);
    EXPECT_EQ(*r.assignment, models[0]);
    EXPECT_EQ(*r.assignment, (std::vector<bool>{true, true}));
}

TEST(Solve2Sat, ContradictionAndEmpty) {
    EXPECT_FALSE(solve_2sat(cnf(1, {{1}, {-1}})).satisfiable);
    auto e = solve_2sat(cnf(0, {}));
    EXPECT_TRUE(e.satisfiable);
    EXPECT_TRUE(e.assignment->empty());
}

TEST(Brute2Sat, Examples) {
    auto r = brute_2sat(cnf(2, {{1, 2}}));
    ASSERT_TRUE(r.satisfiable);
    EXPECT_EQ(*r.assignment, (std::vector<bool>{false, true}));
    EXPECT_FALSE(brute_2sat(cnf(2, {{1}, {-1, 2}, {-2}})).satisfiable);
    EXPECT_TRUE(brute_2sat(cnf(0, {})).satisfiable);
    EXPECT_THROW(brute_2sat(cnf(26, {})), GuardExceeded);
}

TEST(Brute2Sat, ReturnsLexicographicallyFirstModel) {
    Rng pick(3);
    for (int i = 0; i < 300; ++i) {
        std::size_t n = static_cast<std::size_t>(pick.between(1, 6));
        auto f = std::get<Cnf2Formula>(
            gen_random(Family::cnf, GenParams{n, static_cast<std::size_t>(pick.below(2 * n + 1)), 0}, pick.below(1000000)));
        auto models = all_models(f);
        auto r = brute_2sat(f);
        ASSERT_EQ(r.satisfiable, !models.empty());
        if (r.satisfiable) {
            EXPECT_EQ(*r.assignment, models.front());
        }
    }
}

TEST(Solve2Sat, AgreesWithBruteForceExhaustively) {
    for (const auto& f : all_small_formulas(3, 4)) {
        auto fast = solve_2sat(f);
        ASSERT_EQ(fast.satisfiable, !all_models(f).empty()) << serialize(f);
        if (fast.satisfiable) {
            EXPECT_TRUE(f.satisfied_by(*fast.assignment));
        }
    }
}

TEST(Solve2Sat, AgreesWithBruteForceOnRandomFormulas) {
    Rng pick(12);
    for (int i = 0; i < 1000; ++i) {
        std::size_t n = static_cast<std::size_t>(pick.between(1, 12));
        auto f = std::get<Cnf2Formula>(
            gen_random(Family::cnf, GenParams{n, static_cast<std::size_t>(pick.below(2 * n + 1)), 0}, pick.below(1u << 30)));
        auto fast = solve_2sat(f);
        ASSERT_EQ(fast.satisfiable, brute_2sat(f).satisfiable) << serialize(f);
        if (fast.satisfiable) {
            EXPECT_TRUE(f.satisfied_by(*fast.assignment));
        }
    }
}

// ---------------------------------------------------------------------------
// Reachability

TEST(Reach, Examples) {
    EXPECT_TRUE(reach_decide(Digraph{3, {{1, 2}, {2, 3}}, 1, 3}));
    EXPECT_FALSE(reach_decide(Digraph{2, {{2, 1}}, 1, 2}));
    EXPECT_TRUE(reach_decide(Digraph{1, {}, 1, 1}));
    EXPECT_TRUE(reach_closure(Digraph{3, {{1, 2}, {2, 3}}, 1, 3}));
    EXPECT_FALSE(reach_closure(Digraph{2, {{2, 1}}, 1, 2}));
}

TEST(Reach, BfsMatchesClosureOnRandomGraphs) {
    Rng pick(40);
    for (int i = 0; i < 500; ++i) {
        std::size_t n = static_cast<std::size_t>(pick.between(1, 40));
        std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(pick.below(2 * n + 1)), n * (n - 1));
        auto g = std::get<Digraph>(gen_random(Family::dstcon, GenParams{n, m, 0}, pick.below(1u << 30)));
        bool expect = reach_oracle(g);
        ASSERT_EQ(reach_decide(g), expect) << serialize(g);
        ASSERT_EQ(reach_closure(g), expect);
        auto path = reach_path(g);
        ASSERT_EQ(path.has_value(), expect);
        if (path) {
            EXPECT_EQ(path->front(), g.source);
            EXPECT_EQ(path->back(), g.target);
            for (std::size_t k = 0; k + 1 < path->size(); ++k)
                EXPECT_NE(std::find(g.edges.begin(), g.edges.end(), std::pair{(*path)[k], (*path)[k + 1]}),
                          g.edges.end());
        }
    }
}

// ---------------------------------------------------------------------------
// LP

TEST(SolveLp, Examples) {
    LpSystem one;
    one.num_cols = 2;
    one.rows = {row({{1, 1}, {2, 1}}, 1)};
    auto r = solve_lp(one);
    ASSERT_TRUE(r.feasible);
    EXPECT_TRUE(one.satisfied_by(*r.x));

    LpSystem contra;
    contra.num_cols = 1;
    contra.rows = {row({{1, 1}}, 1), row({{1, -1}}, 0)};
    EXPECT_FALSE(solve_lp(contra).feasible);

    LpSystem empty;
    empty.num_cols = 3;
    auto e = solve_lp(empty);
    ASSERT_TRUE(e.feasible);
    EXPECT_EQ(*e.x, (std::vector<bool>{false, false, false}));
}

TEST(SolveLp, EmptyRowWithPositiveBoundIsInfeasible) {
    LpSystem lp;
    lp.num_cols = 2;
    lp.rows = {row({}, 1)};
    EXPECT_FALSE(solve_lp(lp).feasible);
    lp.rows = {row({}, 0)};
    EXPECT_TRUE(solve_lp(lp).feasible);
}

TEST(SolveLp, AgreesWithExhaustiveSearch) {
    Rng pick(21);
    for (int i = 0; i < 1000; ++i) {
        std::size_t n = static_cast<std::size_t>(pick.between(1, 8));
        auto lp = std::get<LpSystem>(
            gen_random(Family::lp, GenParams{n, static_cast<std::size_t>(pick.below(n + 2)), 3}, pick.below(1u << 30)));
        bool expect = false;
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n) && !expect; ++bits) {
            std::vector<bool> x(n);
            for (std::size_t v = 0; v < n; ++v) x[v] = bits >> v & 1;
            expect = lp.satisfied_by(x);
        }
        auto r = solve_lp(lp);
        ASSERT_EQ(r.feasible, expect) << serialize(lp);
        ASSERT_EQ(brute_lp(lp).feasible, expect);
        if (r.feasible) {
            EXPECT_TRUE(lp.satisfied_by(*r.x));
        }
    }
}

// ---------------------------------------------------------------------------
// Search-1NFA

TEST(Search1Nfa, AcceptsAfterOneSymbol) {
    NfaSpec a;
    a.num_states = 2;
    a.num_symbols = 1;
    a.length = 2;
    a.initial = 1;
    a.finals = {2};
    a.resize_delta();
    a.add_transition(1, 0, 2);
    std::vector<std::vector<Symbol>> accepted;
    for (const auto& w : all_words(1, 2))
        if (a.accepts(w)) accepted.push_back(w);
    ASSERT_EQ(accepted.size(), 1u);
    auto r = search_1nfa(a);
    ASSERT_TRUE(r.word);
    EXPECT_EQ(*r.word, accepted[0]);
    EXPECT_EQ(r.accept_step, 1u);
    EXPECT_FALSE(r.accepted_at_step_zero);
}

TEST(Search1Nfa, InitialFinalAcceptsAtStepZero) {
    NfaSpec a;
    a.num_states = 1;
    a.num_symbols = 1;
    a.length = 3;
    a.finals = {1};
    a.resize_delta();
    auto r = search_1nfa(a);
    ASSERT_TRUE(r.word);
    EXPECT_EQ(*r.word, (std::vector<Symbol>{0, 0, 0}));
    EXPECT_TRUE(r.accepted_at_step_zero);
    EXPECT_EQ(r.accept_step, 0u);
}

TEST(Search1Nfa, NoFinalStates) {
    NfaSpec a;
    a.num_states = 2;
    a.num_symbols = 2;
    a.length = 2;
    a.resize_delta();
    a.add_transition(1, 0, 2);
    EXPECT_FALSE(search_1nfa(a).word);
}

TEST(Search1Nfa, ReturnsSmallestAcceptedWord) {
    Rng pick(99);
    for (int i = 0; i < 400; ++i) {
        GenParams p;
        p.n = static_cast<std::size_t>(pick.between(1, 4));
        p.symbols = static_cast<std::size_t>(pick.between(1, 3));
        p.length = static_cast<std::size_t>(pick.between(1, 4));
        p.m = static_cast<std::size_t>(pick.below(std::min<std::size_t>(2 * p.n, p.n * p.n * p.symbols) + 1));
        auto a = std::get<NfaSpec>(gen_random(Family::nfa, p, pick.below(1u << 30)));
        std::optional<std::vector<Symbol>> expect;
        for (const auto& w : all_words(a.num_symbols, a.length))
            if (a.accepts(w)) {
                expect = w;
                break;
            }
        auto r = search_1nfa(a);
        ASSERT_EQ(r.word, expect) << serialize(a);
    }
}

// ---------------------------------------------------------------------------
// Search-UOCK

TEST(SearchUock, Examples) {
    EXPECT_EQ(search_uock({"01#", {"01#"}}), (std::vector<std::size_t>{1}));
    EXPECT_EQ(search_uock({"0#1#", {"1#", "0#"}}), std::nullopt);
    EXPECT_EQ(brute_uock({"0#1#", {"1#", "0#"}}), std::nullopt);
    EXPECT_EQ(search_uock({"0#1#", {"0#", "1#"}}), (std::vector<std::size_t>{1, 2}));
}

TEST(SearchUock, RejectsNonUniquePieces) { EXPECT_THROW(search_uock({"0#0#", {"0#"}}), PreconditionViolation); }

TEST(SearchUock, AgreesWithSubsetEnumeration) {
    Rng pick(17);
    int solvable = 0;
    for (int i = 0; i < 600; ++i) {
        GenParams p;
        p.n = static_cast<std::size_t>(pick.between(1, 6));
        p.m = static_cast<std::size_t>(pick.below(8));
        auto u = std::get<UockInstance>(gen_random(Family::uock, p, pick.below(1u << 30)));
        if (!validate(u).empty()) continue;
        // Smallest index sequence in lexicographic order.
        std::optional<std::vector<std::size_t>> expect;
        const std::size_t n = u.pieces.size();
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
            std::vector<std::size_t> idx;
            for (std::size_t k = 0; k < n; ++k)
                if (mask >> k & 1) idx.push_back(k + 1);
            if (u.concat(idx) == u.target && (!expect || idx < *expect)) expect = idx;
        }
        auto r = search_uock(u);
        ASSERT_EQ(r, expect) << serialize(u);
        if (r) {
            ++solvable;
            EXPECT_EQ(u.concat(*r), u.target);
        }
    }
    EXPECT_GT(solvable, 0);
}

// ---------------------------------------------------------------------------
// Max-HPP

TEST(SolveMaxHpp, Examples) {
    HppInstance h{2, {1, 2, 2, 1}, 3, 1};
    auto r = solve_maxhpp(h);
    EXPECT_EQ(r.value, 4u);
    EXPECT_EQ(r.sequence, (std::vector<Vertex>{1, 2, 1}));

    h.length = 1;
    EXPECT_EQ(solve_maxhpp(h).value, 0u);
    EXPECT_EQ(solve_maxhpp(h).sequence, (std::vector<Vertex>{1}));

    auto one = solve_maxhpp(HppInstance{1, {1}, 4, 1});
    EXPECT_EQ(one.value, 3u);
    EXPECT_EQ(one.sequence, (std::vector<Vertex>{1, 1, 1, 1}));
}

TEST(SolveMaxHpp, MatchesEnumerationOnSmallInstances) {
    Rng pick(8);
    for (int i = 0; i < 300; ++i) {
        std::size_t N = static_cast<std::size_t>(pick.between(1, 3));
        HppInstance h;
        h.dim = N;
        for (std::size_t k = 0; k < N * N; ++k) h.matrix.push_back(static_cast<std::uint32_t>(pick.between(1, N)));
        h.length = static_cast<std::size_t>(pick.between(1, std::min<std::size_t>(N, 4)));
        h.start = static_cast<Vertex>(pick.between(1, N));
        // Every sequence with the fixed start, in lexicographic order.
        std::uint64_t best = 0;
        std::vector<Vertex> arg;
        std::size_t total = 1;
        for (std::size_t j = 1; j < h.length; ++j) total *= N;
        for (std::size_t code = 0; code < total; ++code) {
            std::vector<Vertex> seq{h.start};
            std::size_t c = code;
            std::vector<Vertex> tail(h.length - 1);
            for (std::size_t j = h.length - 1; j-- > 0;) {
                tail[j] = static_cast<Vertex>(c % N + 1);
                c /= N;
            }
            seq.insert(seq.end(), tail.begin(), tail.end());
            if (arg.empty() || h.measure(seq) > best) {
                best = h.measure(seq);
                arg = seq;
            }
        }
        auto r = solve_maxhpp(h);
        ASSERT_EQ(r.value, best);
        EXPECT_EQ(r.sequence, arg);
        EXPECT_EQ(h.measure(r.sequence), r.value);
    }
}

TEST(SolveMaxHpp, DominatesRandomSequences) {
    Rng pick(9);
    for (int i = 0; i < 50; ++i) {
        auto h = std::get<HppInstance>(
            gen_random(Family::hpp, GenParams{static_cast<std::size_t>(pick.between(2, 9)), 0, 0}, pick.below(1u << 30)));
        auto r = solve_maxhpp(h);
        EXPECT_EQ(h.measure(r.sequence), r.value);
        for (int k = 0; k < 100; ++k) {
            std::vector<Vertex> seq{h.start};
            while (seq.size() < h.length) seq.push_back(static_cast<Vertex>(pick.between(1, h.dim)));
            EXPECT_GE(r.value, h.measure(seq));
        }
    }
}

// ---------------------------------------------------------------------------

TEST(PerfRatio, Examples) {
    EXPECT_EQ(perf_ratio(10, 10), Rational(1));
    EXPECT_EQ(perf_ratio(5, 10), Rational(2));
    EXPECT_EQ(perf_ratio(10, 5), Rational(2));
    EXPECT_EQ(perf_ratio(2, 3), Rational(3, 2));
    EXPECT_THROW(perf_ratio(0, 3), std::domain_error);
}
