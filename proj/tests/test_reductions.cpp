#include <gtest/gtest.h>

#include <set>

#include "sublin/generate.hpp"
#include "sublin/reductions.hpp"
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

// Independent oracles: truth-table satisfiability, vector enumeration for
// LP feasibility, Warshall closure for reachability.
bool sat_oracle(const Cnf2Formula& f) {
    for (std::uint64_t mask = 0; mask < (1ull << f.num_vars); ++mask) {
        std::vector<bool> a(f.num_vars);
        for (std::size_t i = 0; i < f.num_vars; ++i) a[i] = mask >> i & 1;
        if (f.satisfied_by(a)) return true;
    }
    return false;
}

bool lp_oracle(const LpSystem& lp) {
    for (std::uint64_t mask = 0; mask < (1ull << lp.num_cols); ++mask) {
        std::vector<bool> x(lp.num_cols);
        for (std::size_t i = 0; i < lp.num_cols; ++i) x[i] = mask >> i & 1;
        if (lp.satisfied_by(x)) return true;
    }
    return false;
}

bool reach_oracle(const Digraph& g) {
    const std::size_t n = g.num_vertices;
    std::vector<std::vector<char>> r(n + 1, std::vector<char>(n + 1, 0));
    for (Vertex v = 1; v <= n; ++v) r[v][v] = 1;
    for (auto [u, v] : g.edges) r[u][v] = 1;
    for (Vertex k = 1; k <= n; ++k)
        for (Vertex i = 1; i <= n; ++i)
            if (r[i][k])
                for (Vertex j = 1; j <= n; ++j) r[i][j] = r[i][j] || r[k][j];
    return r[g.source][g.target] != 0;
}

std::vector<Digraph> degree3_digraphs(std::size_t max_n) {
    std::vector<Digraph> out;
    for (auto& g : all_small_digraphs(max_n))
        if (g.max_degree() <= 3) out.push_back(std::move(g));
    return out;
}

std::vector<Digraph> random_degree3(std::uint64_t seed, std::size_t count, std::size_t n_lo, std::size_t n_hi) {
    Rng pick(seed);
    std::vector<Digraph> out;
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t n = static_cast<std::size_t>(pick.between(n_lo, n_hi));
        std::size_t m = static_cast<std::size_t>(pick.below(std::min(n * (n - 1), 3 * n / 2) + 1));
        out.push_back(std::get<Digraph>(gen_random(Family::dstcon, GenParams{n, m, 3}, pick.below(1u << 30))));
    }
    return out;
}

std::vector<Cnf2Formula> random_2sat3(std::uint64_t seed, std::size_t count, std::size_t n_hi) {
    Rng pick(seed);
    std::vector<Cnf2Formula> out;
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t n = static_cast<std::size_t>(pick.between(1, n_hi));
        std::size_t m = static_cast<std::size_t>(pick.below(3 * n / 2 + 1));
        out.push_back(std::get<Cnf2Formula>(gen_random(Family::cnf, GenParams{n, m, 3}, pick.below(1u << 30))));
    }
    return out;
}

std::vector<Cnf2Formula> capped_small_formulas() {
    std::vector<Cnf2Formula> out;
    for (auto& f : all_small_formulas(3, 4))
        if (f.max_occurrence() <= 3) out.push_back(std::move(f));
    return out;
}

Reduction catalog_entry(std::string_view name) {
    auto cat = reduction_catalog();
    return find_reduction(cat, name);
}

}  // namespace

// ---------------------------------------------------------------------------
// split3

TEST(SplitOccurrences, FourClauseContradiction) {
    auto f = cnf(2, {{1, 2}, {1, -2}, {-1, 2}, {-1, -2}});
    auto g = split_occurrences(f);
    EXPECT_EQ(g.num_vars, 8u);
    EXPECT_LE(g.max_occurrence(), 3u);
    EXPECT_FALSE(sat_oracle(f));
    EXPECT_FALSE(sat_oracle(g));
}

TEST(SplitOccurrences, SingleOccurrencesUntouched) {
    auto f = cnf(3, {{1, 2}, {3}});
    auto g = split_occurrences(f);
    EXPECT_EQ(g.num_vars, 3u);
    EXPECT_EQ(g.num_clauses(), 2u);
    EXPECT_EQ(g, normalize_cnf(f));
}

TEST(SplitOccurrences, EquisatisfiableAndCapped) {
    auto check = [](const Cnf2Formula& f) {
        auto g = split_occurrences(f);
        ASSERT_EQ(sat_oracle(g), sat_oracle(f)) << serialize(f);
        ASSERT_LE(g.max_occurrence(), 3u) << serialize(f);
        ASSERT_TRUE(validate(g).empty());
    };
    for (const auto& f : all_small_formulas(3, 4)) check(f);
    Rng pick(10);
    for (int i = 0; i < 500; ++i) {
        std::size_t n = static_cast<std::size_t>(pick.between(1, 10));
        std::size_t m = static_cast<std::size_t>(pick.below(n + 2));
        check(std::get<Cnf2Formula>(gen_random(Family::cnf, GenParams{n, m, 0}, pick.below(1u << 30))));
    }
}

// ---------------------------------------------------------------------------
// reach-queries (Turing)

TEST(ReachQueries, ContradictionAnswersBothQueries) {
    auto plan = twosat3_to_reach_queries(cnf(1, {{1}, {-1}}));
    ASSERT_EQ(plan.queries.size(), 2u);
    std::vector<bool> answers;
    for (std::size_t i = 0; i < plan.queries.size(); ++i) answers.push_back(reach_oracle(plan.query_graph(i)));
    EXPECT_EQ(answers, (std::vector<bool>{true, true}));
    EXPECT_FALSE(plan.satisfiable_given(answers));
}

TEST(ReachQueries, AnswersCombineToSatisfiability) {
    for (const auto& f : random_2sat3(20, 500, 12)) {
        auto plan = twosat3_to_reach_queries(f);
        EXPECT_EQ(plan.graph.num_vertices, 2 * f.num_vars);
        EXPECT_EQ(plan.queries.size(), 2 * f.num_vars);
        EXPECT_LE(plan.graph.max_degree(), 3u) << serialize(f);
        std::vector<bool> answers;
        for (std::size_t i = 0; i < plan.queries.size(); ++i) answers.push_back(reach_oracle(plan.query_graph(i)));
        ASSERT_EQ(plan.satisfiable_given(answers), solve_2sat(f).satisfiable) << serialize(f);
    }
}

// ---------------------------------------------------------------------------
// reach-to-2sat3

TEST(ReachTo2Sat3, SingleEdgeIsUnsatisfiable) {
    Digraph g{2, {{1, 2}}, 1, 2};
    EXPECT_TRUE(reach_oracle(g));
    EXPECT_FALSE(sat_oracle(reach_to_2sat3(g)));
}

TEST(ReachTo2Sat3, NoEdgesIsSatisfiable) {
    Digraph g{3, {}, 1, 3};
    auto f = reach_to_2sat3(g);
    EXPECT_TRUE(sat_oracle(f));
    EXPECT_LE(f.max_occurrence(), 3u);
}

TEST(ReachTo2Sat3, ComplementOnSmallAndRandomGraphs) {
    auto graphs = degree3_digraphs(4);
    auto more = random_degree3(30, 500, 1, 9);
    graphs.insert(graphs.end(), more.begin(), more.end());
    for (const auto& g : graphs) {
        auto f = reach_to_2sat3(g);
        ASSERT_LE(f.max_occurrence(), 3u);
        ASSERT_EQ(solve_2sat(f).satisfiable, !reach_oracle(g)) << serialize(g);
        ASSERT_LE(f.num_vars, 5 * g.num_vertices + 5);
    }
}

TEST(ReachTo2Sat3, RejectsHighDegree) {
    Digraph star{5, {{1, 2}, {1, 3}, {1, 4}, {1, 5}}, 1, 5};
    EXPECT_THROW(reach_to_2sat3(star), InvariantViolation);
}

// ---------------------------------------------------------------------------
// degree3

TEST(DegreeReduce, StarKeepsReachability) {
    Digraph star{5, {{1, 2}, {1, 3}, {1, 4}, {1, 5}}, 1, 5};
    auto h = degree_reduce(star);
    EXPECT_LE(h.max_degree(), 3u);
    EXPECT_TRUE(reach_oracle(star));
    EXPECT_TRUE(reach_oracle(h));
}

TEST(DegreeReduce, LowDegreeGraphsAreUnchanged) {
    for (const auto& g : random_degree3(40, 100, 1, 10)) EXPECT_EQ(degree_reduce(g), g);
}

TEST(DegreeReduce, DenseGraphsPreserveReachability) {
    Rng pick(41);
    for (int i = 0; i < 500; ++i) {
        std::size_t n = static_cast<std::size_t>(pick.between(1, 15));
        std::size_t m = static_cast<std::size_t>(pick.below(n * (n - 1) + 1));
        auto g = std::get<Digraph>(gen_random(Family::dstcon, GenParams{n, m, 0}, pick.below(1u << 30)));
        auto h = degree_reduce(g);
        ASSERT_LE(h.max_degree(), 3u) << serialize(g);
        ASSERT_EQ(reach_oracle(h), reach_oracle(g)) << serialize(g);
        ASSERT_TRUE(validate(h).empty());
        // Each extra edge is a chain link: sum over split vertices of d - 3.
        std::size_t extra = 0;
        for (std::size_t d : g.degrees())
            if (d > 3) extra += d - 3;
        ASSERT_EQ(h.num_edges(), g.num_edges() + extra);
    }
}

// ---------------------------------------------------------------------------
// 2sat3-to-lp and lp-to-2sat3

TEST(TwoSatToLp, RowExamples) {
    auto lp = twosat3_to_lp(cnf(2, {{1, 2}}));
    ASSERT_EQ(lp.rows.size(), 1u);
    EXPECT_EQ(lp.rows[0].entries, (std::vector<LpEntry>{{1, Rational(1)}, {2, Rational(1)}}));
    EXPECT_EQ(lp.rows[0].bound, Rational(1));
    EXPECT_TRUE(lp.satisfied_by({false, true}));
    EXPECT_FALSE(lp.satisfied_by({false, false}));

    auto neg = twosat3_to_lp(cnf(1, {{-1}}));
    EXPECT_EQ(neg.rows[0].entries, (std::vector<LpEntry>{{1, Rational(-1)}}));
    EXPECT_EQ(neg.rows[0].bound, Rational(0));
    EXPECT_TRUE(neg.satisfied_by({false}));
    EXPECT_FALSE(neg.satisfied_by({true}));
}

TEST(TwoSatToLp, SameModelsAndLinearShape) {
    auto formulas = capped_small_formulas();
    auto more = random_2sat3(50, 500, 10);
    formulas.insert(formulas.end(), more.begin(), more.end());
    for (const auto& f : formulas) {
        auto lp = twosat3_to_lp(f);
        ASSERT_EQ(lp.num_rows(), f.num_clauses());
        ASSERT_EQ(lp.num_cols, f.num_vars);
        for (std::size_t c : lp.column_counts()) ASSERT_LE(c, 3u);
        // Models coincide on every {0,1} vector, so witnesses transfer verbatim.
        for (std::uint64_t mask = 0; mask < (1ull << f.num_vars); ++mask) {
            std::vector<bool> a(f.num_vars);
            for (std::size_t i = 0; i < f.num_vars; ++i) a[i] = mask >> i & 1;
            ASSERT_EQ(lp.satisfied_by(a), f.satisfied_by(a)) << serialize(f);
        }
        auto s = solve_2sat(f);
        auto l = solve_lp(lp);
        ASSERT_EQ(l.feasible, s.satisfiable);
        if (s.satisfiable) {
            EXPECT_TRUE(lp.satisfied_by(*s.assignment));
        }
        if (l.feasible) {
            EXPECT_TRUE(f.satisfied_by(*l.x));
        }
    }
}

TEST(LpTo2Sat, SumAtLeastTwoForcesBothColumns) {
    LpSystem lp;
    lp.num_cols = 2;
    lp.rows.push_back({{{1, Rational(1)}, {2, Rational(1)}}, Rational(2)});
    auto clauses = lp_rows_to_clauses(lp);
    std::set<std::pair<int, int>> got;
    for (const auto& c : clauses.clauses) got.insert({c[0].to_int(), c[1].to_int()});
    EXPECT_EQ(got, (std::set<std::pair<int, int>>{{1, 2}, {1, -2}, {-1, 2}}));
    auto f = lp_to_2sat3(lp);
    std::size_t models = 0;
    for (std::uint64_t mask = 0; mask < (1ull << f.num_vars); ++mask) {
        std::vector<bool> a(f.num_vars);
        for (std::size_t i = 0; i < f.num_vars; ++i) a[i] = mask >> i & 1;
        if (f.satisfied_by(a)) {
            ++models;
            for (bool b : a) EXPECT_TRUE(b);
        }
    }
    EXPECT_EQ(models, 1u);
}

TEST(LpTo2Sat, EmptyRowAboveZeroIsUnsatisfiable) {
    LpSystem lp;
    lp.num_cols = 1;
    lp.rows.push_back({{}, Rational(1)});
    EXPECT_FALSE(sat_oracle(lp_to_2sat3(lp)));
}

TEST(LpTo2Sat, FeasibleIffSatisfiable) {
    std::vector<LpSystem> systems = all_small_lps(2, 2);
    Rng pick(60);
    for (int i = 0; i < 500; ++i) {
        std::size_t n = static_cast<std::size_t>(pick.between(1, 12));
        std::size_t m = static_cast<std::size_t>(pick.below(n + 1));
        systems.push_back(std::get<LpSystem>(gen_random(Family::lp, GenParams{n, m, 3}, pick.below(1u << 30))));
    }
    for (const auto& lp : systems) {
        auto f = lp_to_2sat3(lp);
        ASSERT_LE(f.max_occurrence(), 3u);
        ASSERT_EQ(solve_2sat(f).satisfiable, lp_oracle(lp)) << serialize(lp);
        ASSERT_LE(f.num_vars, 10 * lp.num_cols + 10) << serialize(lp);
    }
}

// ---------------------------------------------------------------------------
// layer, to-1nfa, to-uock, to-maxhpp

TEST(LayeredSquare, Examples) {
    Digraph g{2, {{1, 2}}, 1, 2};
    auto h = layered_square(g);
    EXPECT_EQ(h.num_vertices, 4u);
    EXPECT_NE(std::find(h.edges.begin(), h.edges.end(), std::pair<Vertex, Vertex>{1, 4}), h.edges.end());
    EXPECT_EQ(h.source, 1u);
    EXPECT_EQ(h.target, 4u);
    EXPECT_TRUE(reach_oracle(h));
    EXPECT_EQ(layer_vertex(4, 2, 3), 7u);
    EXPECT_FALSE(reach_oracle(layered_square(Digraph{3, {{2, 1}}, 1, 3})));
}

TEST(LayeredSquare, EdgesGoForwardAndReachabilityIsKept) {
    for (const auto& g : all_small_digraphs(4)) {
        auto h = layered_square(g);
        const std::size_t n = g.num_vertices;
        for (auto [u, v] : h.edges) {
            ASSERT_LT(u, v);
            ASSERT_EQ((v - 1) / n, (u - 1) / n + 1);
        }
        ASSERT_EQ(reach_oracle(h), reach_oracle(g)) << serialize(g);
    }
}

TEST(ToNfa, ChainAcceptsLabelsThenPadding) {
    Digraph g{3, {{1, 2}, {2, 3}}, 1, 3};
    auto a = dstcon_to_1nfa(g);
    EXPECT_EQ(size_param(a, SizeParamKind::m_nfa), 4u * 9u);
    auto r = search_1nfa(a);
    ASSERT_TRUE(r.word);
    EXPECT_EQ(*r.word, (std::vector<Symbol>{1, 1, 0}));
    EXPECT_EQ(r.accept_step, 2u);
}

TEST(ToNfa, SolvableIffReachable) {
    auto graphs = degree3_digraphs(3);
    auto more = random_degree3(70, 200, 1, 8);
    graphs.insert(graphs.end(), more.begin(), more.end());
    for (const auto& g : graphs) {
        auto a = dstcon_to_1nfa(g);
        const std::uint64_t n = g.num_vertices;
        ASSERT_EQ(size_param(a, SizeParamKind::m_nfa), 4 * n * n);
        ASSERT_EQ(search_1nfa(a).word.has_value(), reach_oracle(g)) << serialize(g);
    }
}

TEST(ToUock, SingleEdgeExample) {
    Digraph g{2, {{1, 2}}, 1, 2};
    auto u = dstcon_to_uock(g);
    // N = 4 needs three bits per token.
    EXPECT_EQ(u.target, "010#011#100#");
    ASSERT_FALSE(u.pieces.empty());
    EXPECT_EQ(u.pieces.front(), u.target);
    auto sol = search_uock(u);
    ASSERT_TRUE(sol);
    EXPECT_EQ(u.concat(*sol), u.target);
    EXPECT_EQ(*sol, (std::vector<std::size_t>{1}));
}

TEST(ToUock, UniqueSolvableIffReachable) {
    auto graphs = degree3_digraphs(3);
    auto more = random_degree3(80, 200, 1, 6);
    graphs.insert(graphs.end(), more.begin(), more.end());
    for (const auto& g : graphs) {
        auto u = dstcon_to_uock(g);
        for (const auto& w : u.pieces) ASSERT_LE(count_occurrences(u.target, w), 1u) << serialize(g);
        ASSERT_TRUE(validate(u).empty()) << serialize(g);
        ASSERT_EQ(search_uock(u).has_value(), reach_oracle(g)) << serialize(g);
        const std::uint64_t n = g.num_vertices;
        ASSERT_LE(u.pieces.size(), 3 * n * n + 3);
    }
}

TEST(ToMaxHpp, Examples) {
    auto p = dstcon_to_maxhpp(Digraph{2, {{1, 2}}, 1, 2});
    EXPECT_EQ(p.dim, 4u);
    auto opt = solve_maxhpp(p);
    EXPECT_EQ(opt.value, 6u);
    EXPECT_EQ(p.measure({1, 4, 4, 4}), 6u);
    EXPECT_TRUE(maxhpp_threshold_met(p));

    // No edges: best is <1,1> -> <1,2> -> <2,2> -> <2,2> for 1 + 2 + 2.
    auto q = dstcon_to_maxhpp(Digraph{2, {}, 1, 2});
    EXPECT_EQ(solve_maxhpp(q).value, 5u);
    EXPECT_EQ(q.measure({1, 2, 4, 4}), 5u);
    EXPECT_FALSE(maxhpp_threshold_met(q));
}

TEST(ToMaxHpp, OptimumHitsThresholdIffReachable) {
    auto graphs = degree3_digraphs(3);
    auto more = random_degree3(90, 50, 2, 4);
    graphs.insert(graphs.end(), more.begin(), more.end());
    for (const auto& g : graphs) {
        if (g.num_vertices < 2) continue;
        auto p = dstcon_to_maxhpp(g);
        const std::uint64_t n = g.num_vertices, N = n * n;
        ASSERT_EQ(p.dim, N);
        ASSERT_EQ(solve_maxhpp(p).value == (N - 1) * n, reach_oracle(g)) << serialize(g);
    }
}

// ---------------------------------------------------------------------------
// Composition

TEST(Compose, LpRoundTripIsShortAndIdentity) {
    auto r4 = catalog_entry("2sat3-to-lp"), r5 = catalog_entry("lp-to-2sat3");
    auto c = compose(r4, r5);
    EXPECT_EQ(c.decl.source, Family::cnf);
    EXPECT_EQ(c.decl.target, Family::cnf);
    EXPECT_EQ(c.decl.answer_map, AnswerMap::identity);
    EXPECT_EQ(c.decl.bound.e, 1u);
    EXPECT_EQ(c.decl.bound.k, 1u * 10u + 10u);

    std::vector<Instance> xs;
    for (const auto& f : capped_small_formulas()) xs.push_back(f);
    for (const auto& f : random_2sat3(100, 200, 10)) xs.push_back(f);
    auto rep = verify_reduction(c, xs);
    EXPECT_TRUE(rep.passed());
    EXPECT_EQ(rep.mismatch_count, 0u);
    EXPECT_EQ(rep.violation_count, 0u);
    for (const auto& x : xs) EXPECT_LE(std::get<Cnf2Formula>(c.apply(x)).max_occurrence(), 3u);

    auto back = compose(r5, r4);
    EXPECT_EQ(back.decl.bound.k, 10u * 1u + 1u);
}

TEST(Compose, BoundArithmeticAndAnswerParity) {
    EXPECT_EQ(compose_bounds({2, 1}, {3, 1}).k, 9u);
    EXPECT_EQ(compose_bounds({2, 1}, {3, 1}).e, 1u);
    Reduction flip{{"flip", Family::cnf, SizeParamKind::m_vbl, Family::cnf, SizeParamKind::m_vbl,
                    ReductionKind::many_one, AnswerMap::complement, {1, 1}},
                   [](const Instance& x) { return x; }};
    EXPECT_EQ(compose(flip, flip).decl.answer_map, AnswerMap::identity);
}

TEST(Compose, MismatchedFamiliesAndTuringRejected) {
    auto split = catalog_entry("split3"), layer = catalog_entry("layer");
    EXPECT_THROW(compose(split, layer), CompositionError);
    Reduction turing{reach_queries_decl(), [](const Instance& x) { return x; }};
    EXPECT_THROW(compose(turing, layer), CompositionError);
}

// ---------------------------------------------------------------------------
// Harness

TEST(Verify, LpReductionOnSmallFormulasHasRatioAtMostOne) {
    std::vector<Instance> xs;
    for (const auto& f : capped_small_formulas()) xs.push_back(f);
    auto rep = verify_reduction(catalog_entry("2sat3-to-lp"), xs);
    EXPECT_TRUE(rep.passed());
    ASSERT_TRUE(rep.max_ratio);
    EXPECT_LE(*rep.max_ratio, Rational(1));
}

TEST(Verify, ComplementMapOnSmallGraphs) {
    std::vector<Instance> xs;
    for (const auto& g : degree3_digraphs(4)) xs.push_back(g);
    auto rep = verify_reduction(catalog_entry("reach-to-2sat3"), xs);
    EXPECT_EQ(rep.mismatch_count, 0u);
    EXPECT_TRUE(rep.passed());
}

TEST(Verify, MisdeclaredConstantIsCaught) {
    auto r = catalog_entry("2sat3-to-lp");
    r.decl.bound.k = 0;
    std::vector<Instance> xs{cnf(2, {{1, 2}})};
    auto rep = verify_reduction(r, xs);
    EXPECT_FALSE(rep.size_bound_violations.empty());
    EXPECT_FALSE(rep.passed());
    EXPECT_FALSE(verify_reach_queries({cnf(1, {{1}})}, true).passed());
}

TEST(Verify, WrongAnswerMapIsCaught) {
    auto r = catalog_entry("reach-to-2sat3");
    r.decl.answer_map = AnswerMap::identity;
    std::vector<Instance> xs{Digraph{2, {{1, 2}}, 1, 2}};
    EXPECT_EQ(verify_reduction(r, xs).mismatch_count, 1u);
}

TEST(Catalog, NamesAreUniqueAndLookupFails) {
    auto cat = reduction_catalog();
    std::set<std::string> names;
    for (const auto& r : cat) names.insert(r.decl.name);
    EXPECT_EQ(names.size(), cat.size());
    EXPECT_THROW(find_reduction(cat, "nope"), std::invalid_argument);
}
