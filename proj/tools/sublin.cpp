#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sublin/format.hpp"
#include "sublin/generate.hpp"
#include "sublin/machine.hpp"
#include "sublin/reductions.hpp"
#include "sublin/report.hpp"
#include "sublin/snl_json.hpp"
#include "sublin/solvers.hpp"
#include "sublin/spacebound.hpp"
#include "sublin/verify.hpp"

using namespace sublin;

namespace {

enum Exit : int { kPass = 0, kNo = 1, kUsage = 2, kVerifyFail = 3, kBudget = 4 };

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write '" + path + "'");
    out << text;
}

void print(const Json& j) { std::cout << j.dump(2) << '\n'; }

/// --budget wins over SUBLIN_STEP_BUDGET, which wins over the default.
std::uint64_t resolve_budget(std::uint64_t flag) {
    if (flag) return flag;
    if (const char* env = std::getenv("SUBLIN_STEP_BUDGET")) {
        std::uint64_t v = 0;
        std::string s(env);
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size() || v == 0)
            throw std::invalid_argument("SUBLIN_STEP_BUDGET must be a positive integer, got '" + s + "'");
        return v;
    }
    return kDefaultStepBudget;
}

Json bits_json(const std::vector<bool>& xs) {
    Json a = Json::array();
    for (bool b : xs) a.push_back(b ? 1 : 0);
    return a;
}

Json size_params_json(const Instance& x) {
    Json j = Json::object();
    for (auto k : applicable_params(family_of(x))) j[std::string(param_name(k))] = size_param(x, k);
    return j;
}

Json workspace_json(const MeteredWorkspace& ws) {
    return {{"peak_bits", ws.peak_bits()}, {"steps", ws.step_count()}, {"budget", ws.step_budget()}};
}

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
    std::string problem, strategy, file;
    std::uint64_t budget = 0;
};

Family problem_family(const std::string& p) {
    if (p == "2sat") return Family::cnf;
    if (p == "reach") return Family::dstcon;
    if (p == "lp") return Family::lp;
    if (p == "1nfa") return Family::nfa;
    if (p == "uock") return Family::uock;
    return Family::hpp;
}

int cmd_solve(const SolveArgs& a) {
    Instance x = parse_instance(problem_family(a.problem), read_file(a.file)).value;
    Json j;
    j["problem"] = a.problem;
    j["size_params"] = size_params_json(x);
    bool yes = true;
    std::optional<Strategy> st;
    if (!a.strategy.empty()) {
        if (a.problem != "2sat" && a.problem != "reach")
            throw std::invalid_argument("--strategy applies to 2sat and reach only");
        st = Strategy::parse(a.strategy);
    }
    MeteredWorkspace ws(resolve_budget(a.budget));
    auto metered = [&](auto&& run) {
        j["strategy"] = st->str();
        try {
            return run();
        } catch (const StepBudgetExhausted&) {
            j["answer"] = "budget_exhausted";
            j["workspace"] = workspace_json(ws);
            print(j);
            throw;
        }
    };

    if (a.problem == "2sat") {
        const auto& f = std::get<Cnf2Formula>(x);
        auto r = solve_2sat(f);
        if (st) {
            bool m = metered([&] { return twosat_space(f, *st, ws); });
            if (m != r.satisfiable) throw std::logic_error("metered and linear-time 2SAT disagree");
        }
        yes = r.satisfiable;
        j["answer"] = yes ? "sat" : "unsat";
        j["witness"] = r.assignment ? bits_json(*r.assignment) : Json(nullptr);
    } else if (a.problem == "reach") {
        const auto& g = std::get<Digraph>(x);
        auto path = reach_path(g);
        if (st) {
            bool m = metered([&] { return reach_with(*st, DigraphAdjacency(g), g.source, g.target, ws); });
            if (m != path.has_value()) throw std::logic_error("metered and breadth-first reachability disagree");
        }
        yes = path.has_value();
        j["answer"] = yes ? "yes" : "no";
        j["witness"] = path ? Json(*path) : Json(nullptr);
    } else if (a.problem == "lp") {
        auto r = solve_lp(std::get<LpSystem>(x));
        yes = r.feasible;
        j["answer"] = yes ? "feasible" : "infeasible";
        j["witness"] = r.x ? bits_json(*r.x) : Json(nullptr);
    } else if (a.problem == "1nfa") {
        auto r = search_1nfa(std::get<NfaSpec>(x));
        yes = r.word.has_value();
        j["answer"] = yes ? "yes" : "no";
        j["witness"] = r.word ? Json(*r.word) : Json(nullptr);
        if (yes) {
            j["accept_step"] = r.accept_step;
            j["accepted_at_step_zero"] = r.accepted_at_step_zero;
        }
    } else if (a.problem == "uock") {
        auto r = search_uock(std::get<UockInstance>(x));
        yes = r.has_value();
        j["answer"] = yes ? "yes" : "no";
        j["witness"] = r ? Json(*r) : Json(nullptr);
    } else {
        auto r = solve_maxhpp(std::get<HppInstance>(x));
        j["answer"] = "optimum";
        j["value"] = r.value;
        j["witness"] = r.sequence;
    }
    if (st) j["workspace"] = workspace_json(ws);
    print(j);
    return yes ? kPass : kNo;
}

// ---------------------------------------------------------------------------
// reduce

int cmd_reduce(const std::string& name, const std::string& in, const std::string& out) {
    auto catalog = reduction_catalog();
    const Reduction& red = find_reduction(catalog, name);
    Instance x = parse_instance(red.decl.source, read_file(in)).value;
    Instance y = red.apply(x);
    write_file(out, serialize(y));
    auto m1 = size_param(x, red.decl.source_param);
    auto m2 = size_param(y, red.decl.target_param);
    Json j = to_json(red.decl);
    j["m1"] = m1;
    j["m2"] = m2;
    j["limit"] = red.decl.bound.limit(m1);
    j["within_bound"] = m2 <= red.decl.bound.limit(m1);
    j["output"] = out;
    print(j);
    return kPass;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const std::string& name, const VerifyOptions& o, const std::string& format) {
    std::vector<VerifyReport> reports;
    if (name == "all") {
        reports = verify_all(o);
    } else {
        reports.push_back(verify_named(name, o));
    }
    bool ok = true;
    for (const auto& r : reports) ok = ok && r.passed();
    if (format == "table") {
        std::cout << verify_table(reports) << (ok ? "PASS" : "FAIL") << '\n';
    } else {
        auto catalog = reduction_catalog();
        Json j;
        j["options"] = {{"exhaustive_vars", o.exhaustive_vars},   {"exhaustive_clauses", o.exhaustive_clauses},
                        {"exhaustive_graph", o.exhaustive_graph}, {"exhaustive_cols", o.exhaustive_cols},
                        {"random", o.random},                     {"seed", o.seed},
                        {"sabotage_k", o.sabotage_k}};
        j["reports"] = Json::array();
        for (const auto& r : reports) {
            ReductionDecl d = r.name == "reach-queries" ? reach_queries_decl() : find_reduction(catalog, r.name).decl;
            j["reports"].push_back({{"declaration", to_json(d)}, {"result", to_json(r)}});
        }
        if (name == "all") j["catalog_size"] = verifiable_names().size();
        j["passed"] = ok;
        print(j);
    }
    return ok ? kPass : kVerifyFail;
}

// ---------------------------------------------------------------------------
// bench-space

struct BenchArgs {
    std::string problem = "reach";
    std::string sizes, m_values;
    std::vector<std::string> strategies{"bfs", "savitch"};
    double ratio = 2.0;
    std::uint64_t seed = 1;
    std::uint64_t budget = 0;
    std::string format = "csv";
};

/// Comma-separated counts; an item "a..b" expands to a, a+1, ..., b.
std::vector<std::size_t> parse_counts(const std::string& text, const char* what) {
    std::vector<std::size_t> out;
    auto num = [&](std::string_view t) {
        std::size_t v = 0;
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (t.empty() || ec != std::errc() || p != t.data() + t.size())
            throw std::invalid_argument(std::string(what) + ": bad count '" + std::string(t) + "'");
        return v;
    };
    std::string_view rest = text;
    while (!rest.empty()) {
        auto comma = rest.find(',');
        std::string_view item = rest.substr(0, comma);
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        if (item.empty()) continue;
        if (auto dots = item.find(".."); dots != std::string_view::npos) {
            std::size_t lo = num(item.substr(0, dots)), hi = num(item.substr(dots + 2));
            for (std::size_t k = lo; k <= hi; ++k) out.push_back(k);
        } else {
            out.push_back(num(item));
        }
    }
    return out;
}

int cmd_bench(const BenchArgs& a) {
    std::vector<Strategy> strategies;
    for (const auto& s : a.strategies) strategies.push_back(Strategy::parse(s));
    const std::uint64_t budget = resolve_budget(a.budget);
    const Family family = a.problem == "2sat" ? Family::cnf : Family::dstcon;

    struct Case {
        std::size_t n, m;
        Instance x;
    };
    std::vector<Case> cases;
    const auto m_values = parse_counts(a.m_values, "--m");
    for (std::size_t n : parse_counts(a.sizes, "--sizes")) {
        std::vector<std::size_t> ms = m_values;
        if (ms.empty()) ms.push_back(static_cast<std::size_t>(a.ratio * static_cast<double>(n) + 0.5));
        for (std::size_t m : ms) {
            if (family == Family::dstcon) m = std::min(m, n * (n - 1));
            GenParams p;
            p.n = n;
            p.m = m;
            auto seed = detail::instance_seed(a.seed, "bench-" + a.problem, n * 1'000'003 + m);
            cases.push_back({n, m, gen_random(family, p, seed)});
        }
    }

    Json rows = Json::array();
    for (const auto& st : strategies) {
        for (const auto& c : cases) {
            MeteredWorkspace ws(budget);
            std::string answer;
            try {
                bool yes = false;
                if (family == Family::cnf) {
                    yes = twosat_space(std::get<Cnf2Formula>(c.x), st, ws);
                } else {
                    const auto& g = std::get<Digraph>(c.x);
                    yes = reach_with(st, DigraphAdjacency(g), g.source, g.target, ws);
                }
                answer = yes ? "yes" : "no";
            } catch (const StepBudgetExhausted&) {
                answer = "budget_exhausted";
            }
            rows.push_back({{"strategy", st.str()},
                            {"n", c.n},
                            {"m", c.m},
                            {"peak_bits", ws.peak_bits()},
                            {"steps", ws.step_count()},
                            {"answer", answer}});
        }
    }
    if (a.format == "json") {
        print({{"problem", a.problem}, {"seed", a.seed}, {"budget", budget}, {"rows", rows}});
    } else {
        std::cout << "strategy,n,m,peak_bits,steps,answer\n";
        for (const auto& r : rows)
            std::cout << r["strategy"].get<std::string>() << ',' << r["n"] << ',' << r["m"] << ',' << r["peak_bits"]
                      << ',' << r["steps"] << ',' << r["answer"].get<std::string>() << '\n';
    }
    return kPass;
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
    std::string family;
    GenParams params;
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_gen(const GenArgs& a) {
    std::string text = serialize(gen_random(parse_family(a.family), a.params, a.seed));
    if (a.out.empty()) {
        std::cout << text;
    } else {
        write_file(a.out, text);
    }
    return kPass;
}

// ---------------------------------------------------------------------------
// snl

Json read_json(const std::string& path) {
    try {
        return Json::parse(read_file(path));
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

int cmd_snl_eval(const std::string& path) {
    Json doc = read_json(path);
    auto f = snl::formula_from_json(snl::detail::field(doc, "formula"));
    auto m = snl::model_from_json(snl::detail::field(doc, "model"));
    auto t = snl::trelation_from_json(snl::detail::field(doc, "T"));
    bool v = snl::eval_snl(f, m, t);
    print({{"value", v}});
    return v ? kPass : kNo;
}

int cmd_snl_decide(const std::string& path) {
    Json doc = read_json(path);
    auto f = snl::formula_from_json(snl::detail::field(doc, "formula"));
    auto m = snl::model_from_json(snl::detail::field(doc, "model"));
    auto r = snl::decide_snl(f, m);
    print({{"value", r.value},
           {"candidates", r.candidates},
           {"cert_size", snl::cert_size(m)},
           {"witness", r.witness ? snl::to_json(*r.witness) : Json(nullptr)}});
    return r.value ? kPass : kNo;
}

int cmd_snl_machine(const std::string& name, std::string input, const std::string& emit) {
    if (input == "-") input.clear();
    auto machine = snl::toy_machine(name);
    auto inst = snl::build_acceptance_formula(machine, input);
    if (!emit.empty())
        write_file(emit, Json{{"formula", snl::to_json(inst.formula)}, {"model", snl::to_json(inst.model)}}.dump(2) +
                             "\n");
    auto sim = snl::simulate(machine, input);
    auto dec = snl::decide_snl(inst.formula, inst.model);
    std::uint64_t bound = (std::uint64_t{1} << inst.space_constant) * inst.size_param;
    print({{"machine", name},
           {"input", input},
           {"m", inst.size_param},
           {"space_constant", inst.space_constant},
           {"cert_size", snl::cert_size(inst.model)},
           {"cert_bound", bound},
           {"simulate", sim.accepted},
           {"decide", dec.value},
           {"candidates", dec.candidates},
           {"agree", sim.accepted == dec.value}});
    if (sim.accepted != dec.value) return kVerifyFail;
    return dec.value ? kPass : kNo;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sublinear-space reductions and solvers"};
    app.require_subcommand(1);

    SolveArgs solve;
    auto* s = app.add_subcommand("solve", "Solve one instance");
    s->add_option("--problem", solve.problem, "2sat, reach, lp, 1nfa, uock or maxhpp")
        ->required()
        ->check(CLI::IsMember({"2sat", "reach", "lp", "1nfa", "uock", "maxhpp"}));
    s->add_option("--strategy", solve.strategy, "Metered strategy: bfs, savitch, hybrid or hybrid:TAU");
    s->add_option("--budget", solve.budget, "Step budget")->check(CLI::PositiveNumber);
    s->add_option("file", solve.file, "Instance file")->required();

    std::string red_name, red_in, red_out;
    auto* r = app.add_subcommand("reduce", "Apply a catalog reduction");
    std::vector<std::string> names;
    for (const auto& red : reduction_catalog()) names.push_back(red.decl.name);
    r->add_option("name", red_name, "Reduction name")->required()->check(CLI::IsMember(names));
    r->add_option("input", red_in, "Source instance file")->required();
    r->add_option("output", red_out, "Target instance file")->required();

    std::string ver_name, ver_format = "json";
    VerifyOptions vo;
    auto* v = app.add_subcommand("verify", "Check reductions against reference deciders");
    auto ver_names = verifiable_names();
    ver_names.push_back("all");
    v->add_option("name", ver_name, "Reduction name or 'all'")->required()->check(CLI::IsMember(ver_names));
    v->add_option("--exhaustive", vo.exhaustive_vars, "Variables in the exhaustive formula domain");
    v->add_option("--exhaustive-clauses", vo.exhaustive_clauses, "Clauses in the exhaustive formula domain");
    v->add_option("--exhaustive-graph", vo.exhaustive_graph, "Vertices in the exhaustive digraph domain");
    v->add_option("--exhaustive-cols", vo.exhaustive_cols, "Columns in the exhaustive LP domain");
    v->add_option("--random", vo.random, "Random instances per reduction");
    v->add_option("--seed", vo.seed, "Seed");
    v->add_flag("--sabotage-k", vo.sabotage_k, "Negative control: understate the query-count bound");
    v->add_option("--format", ver_format, "json or table")->check(CLI::IsMember({"json", "table"}));

    BenchArgs bench;
    auto* b = app.add_subcommand("bench-space", "Peak work bits per strategy and size");
    b->add_option("--problem", bench.problem, "reach or 2sat")->check(CLI::IsMember({"reach", "2sat"}));
    b->add_option("--sizes", bench.sizes, "Vertex or variable counts, e.g. 8,16,32 or 8..12");
    b->add_option("--strategies", bench.strategies, "Strategies")->delimiter(',');
    b->add_option("--m", bench.m_values, "Explicit edge or clause counts per size");
    b->add_option("--ratio", bench.ratio, "Edges or clauses per vertex or variable when --m is absent")
        ->check(CLI::NonNegativeNumber);
    b->add_option("--seed", bench.seed, "Seed");
    b->add_option("--budget", bench.budget, "Step budget per row")->check(CLI::PositiveNumber);
    b->add_option("--format", bench.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "Generate a random instance");
    g->add_option("--family", gen.family, "cnf, dstcon, lp, nfa, uock or hpp")
        ->required()
        ->check(CLI::IsMember({"cnf", "dstcon", "lp", "nfa", "uock", "hpp"}));
    g->add_option("--n", gen.params.n, "Variables, vertices, columns, states, tokens or dimension")->required();
    g->add_option("--m", gen.params.m, "Clauses, edges, rows, transitions or pieces");
    g->add_option("--cap", gen.params.cap, "Occurrence, degree or column cap (0 = none)");
    g->add_option("--symbols", gen.params.symbols, "NFA alphabet size");
    g->add_option("--length", gen.params.length, "NFA input length or walk length");
    g->add_option("--seed", gen.seed, "Seed");
    g->add_option("-o,--output", gen.out, "Output file (default stdout)");

    auto* snl_cmd = app.add_subcommand("snl", "Second-order formulas over semantic models");
    snl_cmd->require_subcommand(1);
    std::string snl_eval_path, snl_decide_path, machine_name, machine_input, machine_emit;
    auto* se = snl_cmd->add_subcommand("eval", "Evaluate a formula for a given T");
    se->add_option("doc", snl_eval_path, "JSON with formula, model and T")->required();
    auto* sd = snl_cmd->add_subcommand("decide", "Search for a satisfying T");
    sd->add_option("doc", snl_decide_path, "JSON with formula and model")->required();
    auto* sm = snl_cmd->add_subcommand("machine", "Acceptance formula of a toy machine on an input");
    sm->add_option("name", machine_name, "accept-all, first-is-1 or parity")
        ->required()
        ->check(CLI::IsMember({"accept-all", "first-is-1", "parity"}));
    sm->add_option("input", machine_input, "Binary input ('-' for empty)")->required();
    sm->add_option("--emit", machine_emit, "Write the formula and model as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (s->parsed()) return cmd_solve(solve);
        if (r->parsed()) return cmd_reduce(red_name, red_in, red_out);
        if (v->parsed()) return cmd_verify(ver_name, vo, ver_format);
        if (b->parsed()) return cmd_bench(bench);
        if (g->parsed()) return cmd_gen(gen);
        if (se->parsed()) return cmd_snl_eval(snl_eval_path);
        if (sd->parsed()) return cmd_snl_decide(snl_decide_path);
        if (sm->parsed()) return cmd_snl_machine(machine_name, machine_input, machine_emit);
    } catch (const StepBudgetExhausted& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBudget;
    } catch (const GuardExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBudget;
    } catch (const snl::EnumerationGuard& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBudget;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const Json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 70;
    }
    return kUsage;
}
