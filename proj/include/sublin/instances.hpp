#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "sublin/rational.hpp"

namespace sublin {

using Var = std::uint32_t;     // 1-based propositional variable
using Vertex = std::uint32_t;  // 1-based vertex / state / index
using Symbol = std::uint32_t;  // 0-based alphabet symbol

class InvariantViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// 2CNF

struct Literal {
    Var var = 0;
    bool positive = true;

    Literal negated() const { return {var, !positive}; }
    friend auto operator<=>(const Literal&, const Literal&) = default;

    static Literal from_int(std::int64_t v) {
        if (v == 0) throw std::invalid_argument("literal 0");
        return {static_cast<Var>(v < 0 ? -v : v), v > 0};
    }
    std::int64_t to_int() const { return positive ? std::int64_t(var) : -std::int64_t(var); }
};

/// A clause of width one or two.
class Clause {
public:
    Clause() = default;
    static Clause unit(Literal a) { return Clause(a, a, 1); }
    static Clause binary(Literal a, Literal b) { return Clause(a, b, 2); }

    std::size_t width() const { return width_; }
    std::span<const Literal> literals() const { return {lits_.data(), width_}; }
    Literal operator[](std::size_t i) const { return lits_[i]; }

    bool satisfied_by(const std::vector<bool>& assignment) const {
        for (Literal l : literals())
            if (assignment[l.var - 1] == l.positive) return true;
        return false;
    }

    friend bool operator==(const Clause& a, const Clause& b) {
        return a.width_ == b.width_ && std::equal(a.literals().begin(), a.literals().end(), b.literals().begin());
    }

private:
    Clause(Literal a, Literal b, std::size_t w) : lits_{a, b}, width_(w) {}
    std::array<Literal, 2> lits_{};
    std::size_t width_ = 0;
};

struct Cnf2Formula {
    std::size_t num_vars = 0;
    std::vector<Clause> clauses;

    std::size_t num_clauses() const { return clauses.size(); }

    /// Occurrences of v and its negation, counted per literal slot.
    std::vector<std::size_t> occurrences() const {
        std::vector<std::size_t> occ(num_vars + 1, 0);
        for (const Clause& c : clauses)
            for (Literal l : c.literals())
                if (l.var >= 1 && l.var <= num_vars) ++occ[l.var];
        return occ;
    }
    std::size_t max_occurrence() const {
        auto occ = occurrences();
        return occ.empty() ? 0 : *std::max_element(occ.begin(), occ.end());
    }
    bool satisfied_by(const std::vector<bool>& assignment) const {
        return std::all_of(clauses.begin(), clauses.end(),
                           [&](const Clause& c) { return c.satisfied_by(assignment); });
    }
    friend bool operator==(const Cnf2Formula&, const Cnf2Formula&) = default;
};

// ---------------------------------------------------------------------------
// Digraph

struct Digraph {
    std::size_t num_vertices = 0;
    std::vector<std::pair<Vertex, Vertex>> edges;
    Vertex source = 1;
    Vertex target = 1;

    std::size_t num_edges() const { return edges.size(); }

    /// Out-neighbours of every vertex in ascending order; index 0 unused.
    std::vector<std::vector<Vertex>> out_lists() const {
        std::vector<std::vector<Vertex>> out(num_vertices + 1);
        for (auto [u, v] : edges) out[u].push_back(v);
        for (auto& l : out) std::sort(l.begin(), l.end());
        return out;
    }
    std::vector<std::size_t> degrees() const {
        std::vector<std::size_t> deg(num_vertices + 1, 0);
        for (auto [u, v] : edges) {
            ++deg[u];
            ++deg[v];
        }
        return deg;
    }
    std::size_t max_degree() const {
        auto d = degrees();
        return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
    }
    friend bool operator==(const Digraph&, const Digraph&) = default;
};

// ---------------------------------------------------------------------------
// {0,1} linear programs, Ax >= b

struct LpEntry {
    Vertex col = 0;  // 1-based
    Rational coeff;
    friend bool operator==(const LpEntry&, const LpEntry&) = default;
};

struct LpRow {
    std::vector<LpEntry> entries;  // at most two, nonzero, distinct columns
    Rational bound;
    friend bool operator==(const LpRow&, const LpRow&) = default;

    Rational evaluate(const std::vector<bool>& x) const {
        Rational s;
        for (const auto& e : entries)
            if (x[e.col - 1]) s += e.coeff;
        return s;
    }
    bool satisfied_by(const std::vector<bool>& x) const { return evaluate(x) >= bound; }
};

struct LpSystem {
    std::size_t num_rows() const { return rows.size(); }
    std::size_t num_cols = 0;
    std::vector<LpRow> rows;

    std::vector<std::size_t> column_counts() const {
        std::vector<std::size_t> cnt(num_cols + 1, 0);
        for (const auto& r : rows)
            for (const auto& e : r.entries)
                if (e.col >= 1 && e.col <= num_cols) ++cnt[e.col];
        return cnt;
    }
    bool satisfied_by(const std::vector<bool>& x) const {
        return std::all_of(rows.begin(), rows.end(), [&](const LpRow& r) { return r.satisfied_by(x); });
    }
    friend bool operator==(const LpSystem&, const LpSystem&) = default;
};

// ---------------------------------------------------------------------------
// One-way NFA without lambda moves

struct NfaSpec {
    std::size_t num_states = 0;   // states are 1..num_states
    std::size_t num_symbols = 0;  // symbols are 0..num_symbols-1
    std::size_t length = 0;       // the 1^n parameter
    Vertex initial = 1;
    std::vector<Vertex> finals;   // sorted, unique
    /// delta[(q-1) * num_symbols + a] = sorted successor states.
    std::vector<std::vector<Vertex>> delta;

    void resize_delta() { delta.assign(num_states * num_symbols, {}); }
    const std::vector<Vertex>& next(Vertex q, Symbol a) const { return delta[(q - 1) * num_symbols + a]; }
    void add_transition(Vertex q, Symbol a, Vertex r) {
        auto& cell = delta[(q - 1) * num_symbols + a];
        auto it = std::lower_bound(cell.begin(), cell.end(), r);
        if (it == cell.end() || *it != r) cell.insert(it, r);
    }
    bool is_final(Vertex q) const { return std::binary_search(finals.begin(), finals.end(), q); }
    std::size_t num_transitions() const {
        std::size_t n = 0;
        for (const auto& c : delta) n += c.size();
        return n;
    }

    /// Prefix acceptance: true if some run enters F after j <= |word| symbols.
    bool accepts(const std::vector<Symbol>& word) const {
        std::vector<char> cur(num_states + 1, 0);
        cur[initial] = 1;
        for (std::size_t j = 0;; ++j) {
            for (Vertex q = 1; q <= num_states; ++q)
                if (cur[q] && is_final(q)) return true;
            if (j == word.size()) return false;
            std::vector<char> nxt(num_states + 1, 0);
            if (word[j] >= num_symbols) return false;
            for (Vertex q = 1; q <= num_states; ++q)
                if (cur[q])
                    for (Vertex r : next(q, word[j])) nxt[r] = 1;
            cur.swap(nxt);
        }
    }
    friend bool operator==(const NfaSpec&, const NfaSpec&) = default;
};

// ---------------------------------------------------------------------------
// Unique ordered concatenation knapsack

struct UockInstance {
    std::string target;
    std::vector<std::string> pieces;

    std::string concat(const std::vector<std::size_t>& indices) const {
        std::string s;
        for (std::size_t i : indices) s += pieces.at(i - 1);
        return s;
    }
    friend bool operator==(const UockInstance&, const UockInstance&) = default;
};

/// Number of (possibly overlapping) occurrences of needle in hay.
inline std::size_t count_occurrences(std::string_view hay, std::string_view needle) {
    if (needle.size() > hay.size()) return 0;
    std::size_t n = 0;
    for (std::size_t p = 0; p + needle.size() <= hay.size(); ++p)
        if (hay.compare(p, needle.size(), needle) == 0) ++n;
    return n;
}

// ---------------------------------------------------------------------------
// Max hot potato

struct HppInstance {
    std::size_t dim = 0;              // N
    std::vector<std::uint32_t> matrix;  // row-major N x N, entries in [N]
    std::size_t length = 1;           // d
    Vertex start = 1;                 // i_1

    std::uint32_t at(Vertex i, Vertex j) const { return matrix[(i - 1) * dim + (j - 1)]; }
    std::uint32_t& at(Vertex i, Vertex j) { return matrix[(i - 1) * dim + (j - 1)]; }

    std::uint64_t measure(const std::vector<Vertex>& seq) const {
        std::uint64_t w = 0;
        for (std::size_t j = 0; j + 1 < seq.size(); ++j) w += at(seq[j], seq[j + 1]);
        return w;
    }
    friend bool operator==(const HppInstance&, const HppInstance&) = default;
};

// ---------------------------------------------------------------------------
// Families and size parameters

enum class Family { cnf, dstcon, lp, nfa, uock, hpp };

inline std::string_view family_name(Family f) {
    switch (f) {
        case Family::cnf: return "cnf";
        case Family::dstcon: return "dstcon";
        case Family::lp: return "lp";
        case Family::nfa: return "nfa";
        case Family::uock: return "uock";
        case Family::hpp: return "hpp";
    }
    return "?";
}

inline Family parse_family(std::string_view s) {
    for (Family f : {Family::cnf, Family::dstcon, Family::lp, Family::nfa, Family::uock, Family::hpp})
        if (family_name(f) == s) return f;
    throw std::invalid_argument("unknown problem family '" + std::string(s) + "'");
}

enum class SizeParamKind { m_vbl, m_cls, m_ver, m_edg, m_row, m_col, m_nfa, m_elm, bitlength };

inline constexpr std::array<SizeParamKind, 9> kAllSizeParams = {
    SizeParamKind::m_vbl, SizeParamKind::m_cls, SizeParamKind::m_ver, SizeParamKind::m_edg, SizeParamKind::m_row,
    SizeParamKind::m_col, SizeParamKind::m_nfa, SizeParamKind::m_elm, SizeParamKind::bitlength};

inline std::string_view param_name(SizeParamKind k) {
    switch (k) {
        case SizeParamKind::m_vbl: return "m_vbl";
        case SizeParamKind::m_cls: return "m_cls";
        case SizeParamKind::m_ver: return "m_ver";
        case SizeParamKind::m_edg: return "m_edg";
        case SizeParamKind::m_row: return "m_row";
        case SizeParamKind::m_col: return "m_col";
        case SizeParamKind::m_nfa: return "m_nfa";
        case SizeParamKind::m_elm: return "m_elm";
        case SizeParamKind::bitlength: return "bitlength";
    }
    return "?";
}

using Instance = std::variant<Cnf2Formula, Digraph, LpSystem, NfaSpec, UockInstance, HppInstance>;

inline Family family_of(const Instance& inst) { return static_cast<Family>(inst.index()); }

/// An instance bundled with the size parameter it is measured by.
struct ParamInstance {
    Instance value;
    SizeParamKind param = SizeParamKind::bitlength;
};

inline SizeParamKind default_param(Family f) {
    switch (f) {
        case Family::cnf: return SizeParamKind::m_vbl;
        case Family::dstcon: return SizeParamKind::m_ver;
        case Family::lp: return SizeParamKind::m_col;
        case Family::nfa: return SizeParamKind::m_nfa;
        case Family::uock: return SizeParamKind::m_elm;
        case Family::hpp: return SizeParamKind::m_col;
    }
    return SizeParamKind::bitlength;
}

class InapplicableParam : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline std::string serialize(const Instance& inst);  // defined in format.hpp

inline std::vector<SizeParamKind> applicable_params(Family f) {
    switch (f) {
        case Family::cnf: return {SizeParamKind::m_vbl, SizeParamKind::m_cls, SizeParamKind::bitlength};
        case Family::dstcon: return {SizeParamKind::m_ver, SizeParamKind::m_edg, SizeParamKind::bitlength};
        case Family::lp: return {SizeParamKind::m_row, SizeParamKind::m_col, SizeParamKind::bitlength};
        case Family::nfa: return {SizeParamKind::m_nfa, SizeParamKind::bitlength};
        case Family::uock: return {SizeParamKind::m_elm, SizeParamKind::bitlength};
        case Family::hpp: return {SizeParamKind::m_col, SizeParamKind::bitlength};
    }
    return {};
}

/// Value of a size parameter; bitlength is 8 bits per byte of the text encoding.
inline std::uint64_t size_param(const Instance& inst, SizeParamKind kind) {
    auto bad = [&]() -> std::uint64_t {
        throw InapplicableParam(std::string(param_name(kind)) + " is not defined for " +
                                std::string(family_name(family_of(inst))) + " instances");
    };
    if (kind == SizeParamKind::bitlength) return 8 * serialize(inst).size();
    return std::visit(
        [&](const auto& x) -> std::uint64_t {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Cnf2Formula>) {
                if (kind == SizeParamKind::m_vbl) return x.num_vars;
                if (kind == SizeParamKind::m_cls) return x.num_clauses();
            } else if constexpr (std::is_same_v<T, Digraph>) {
                if (kind == SizeParamKind::m_ver) return x.num_vertices;
                if (kind == SizeParamKind::m_edg) return x.num_edges();
            } else if constexpr (std::is_same_v<T, LpSystem>) {
                if (kind == SizeParamKind::m_row) return x.num_rows();
                if (kind == SizeParamKind::m_col) return x.num_cols;
            } else if constexpr (std::is_same_v<T, NfaSpec>) {
                if (kind == SizeParamKind::m_nfa) return std::uint64_t(x.num_states) * x.num_symbols * x.length;
            } else if constexpr (std::is_same_v<T, UockInstance>) {
                if (kind == SizeParamKind::m_elm) return x.pieces.size();
            } else if constexpr (std::is_same_v<T, HppInstance>) {
                if (kind == SizeParamKind::m_col) return x.dim;
            }
            return bad();
        },
        inst);
}

// ---------------------------------------------------------------------------
// Validation

/// Promise caps checked on top of the structural invariants. Zero disables a cap.
struct ValidateOptions {
    std::size_t occurrence_cap = 0;  // 2SAT_k
    std::size_t degree_cap = 0;      // kDSTCON
    std::size_t column_cap = 0;      // LP_{2,k}
};

namespace detail {

inline void check_cnf(const Cnf2Formula& f, const ValidateOptions& opt, std::vector<std::string>& out) {
    for (std::size_t i = 0; i < f.clauses.size(); ++i) {
        const Clause& c = f.clauses[i];
        if (c.width() < 1 || c.width() > 2)
            out.push_back("clause " + std::to_string(i + 1) + " has width " + std::to_string(c.width()));
        for (Literal l : c.literals())
            if (l.var < 1 || l.var > f.num_vars)
                out.push_back("clause " + std::to_string(i + 1) + " uses variable " + std::to_string(l.var) +
                              " outside [1," + std::to_string(f.num_vars) + "]");
    }
    if (opt.occurrence_cap > 0) {
        auto occ = f.occurrences();
        for (Var v = 1; v <= f.num_vars; ++v)
            if (occ[v] > opt.occurrence_cap)
                out.push_back("occ(" + std::to_string(v) + ")=" + std::to_string(occ[v]) + ">" +
                              std::to_string(opt.occurrence_cap));
    }
}

inline void check_graph(const Digraph& g, const ValidateOptions& opt, std::vector<std::string>& out) {
    auto in_range = [&](Vertex v) { return v >= 1 && v <= g.num_vertices; };
    if (!in_range(g.source)) out.push_back("source " + std::to_string(g.source) + " out of range");
    if (!in_range(g.target)) out.push_back("target " + std::to_string(g.target) + " out of range");
    std::set<std::pair<Vertex, Vertex>> seen;
    bool ranges_ok = true;
    for (auto [u, v] : g.edges) {
        if (!in_range(u) || !in_range(v)) {
            out.push_back("edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
            ranges_ok = false;
        } else if (!seen.insert({u, v}).second) {
            out.push_back("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
        }
    }
    if (opt.degree_cap > 0 && ranges_ok) {
        auto deg = g.degrees();
        for (Vertex v = 1; v <= g.num_vertices; ++v)
            if (deg[v] > opt.degree_cap)
                out.push_back("degree(" + std::to_string(v) + ")=" + std::to_string(deg[v]) + ">" +
                              std::to_string(opt.degree_cap));
    }
}

inline void check_lp(const LpSystem& lp, const ValidateOptions& opt, std::vector<std::string>& out) {
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        const auto& r = lp.rows[i];
        std::string row = "row " + std::to_string(i + 1);
        if (r.entries.size() > 2) out.push_back(row + " has " + std::to_string(r.entries.size()) + " nonzeros");
        std::set<Vertex> cols;
        for (const auto& e : r.entries) {
            if (e.col < 1 || e.col > lp.num_cols) out.push_back(row + " column " + std::to_string(e.col) + " out of range");
            if (e.coeff.is_zero()) out.push_back(row + " stores an explicit zero");
            if (!cols.insert(e.col).second) out.push_back(row + " repeats column " + std::to_string(e.col));
        }
    }
    if (opt.column_cap > 0) {
        auto cnt = lp.column_counts();
        for (Vertex c = 1; c <= lp.num_cols; ++c)
            if (cnt[c] > opt.column_cap)
                out.push_back("column(" + std::to_string(c) + ")=" + std::to_string(cnt[c]) + ">" +
                              std::to_string(opt.column_cap));
    }
}

inline void check_nfa(const NfaSpec& a, std::vector<std::string>& out) {
    if (a.num_states == 0) out.push_back("automaton has no states");
    if (a.initial < 1 || a.initial > a.num_states) out.push_back("initial state out of range");
    if (!std::is_sorted(a.finals.begin(), a.finals.end()) ||
        std::adjacent_find(a.finals.begin(), a.finals.end()) != a.finals.end())
        out.push_back("final states not sorted/unique");
    for (Vertex f : a.finals)
        if (f < 1 || f > a.num_states) out.push_back("final state " + std::to_string(f) + " out of range");
    if (a.delta.size() != a.num_states * a.num_symbols) {
        out.push_back("transition table has wrong shape");
        return;
    }
    for (const auto& cell : a.delta)
        for (Vertex r : cell)
            if (r < 1 || r > a.num_states) out.push_back("transition target " + std::to_string(r) + " out of range");
}

inline void check_uock(const UockInstance& u, std::vector<std::string>& out) {
    auto alphabet_ok = [](const std::string& s) {
        return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1' || c == '#'; });
    };
    if (!alphabet_ok(u.target)) out.push_back("target uses symbols outside {0,1,#}");
    for (std::size_t i = 0; i < u.pieces.size(); ++i) {
        const auto& p = u.pieces[i];
        if (!alphabet_ok(p)) out.push_back("piece " + std::to_string(i + 1) + " uses symbols outside {0,1,#}");
        std::size_t n = count_occurrences(u.target, p);
        if (n > 1)
            out.push_back("piece " + std::to_string(i + 1) + " \"" + p + "\" occurs " + std::to_string(n) +
                          " times in target");
    }
}

inline void check_hpp(const HppInstance& h, std::vector<std::string>& out) {
    if (h.dim == 0) out.push_back("matrix dimension is 0");
    if (h.matrix.size() != h.dim * h.dim) {
        out.push_back("matrix has wrong shape");
        return;
    }
    for (std::size_t k = 0; k < h.matrix.size(); ++k)
        if (h.matrix[k] < 1 || h.matrix[k] > h.dim)
            out.push_back("entry (" + std::to_string(k / h.dim + 1) + "," + std::to_string(k % h.dim + 1) +
                          ")=" + std::to_string(h.matrix[k]) + " outside [1," + std::to_string(h.dim) + "]");
    if (h.length < 1 || h.length > h.dim) out.push_back("length d outside [1,N]");
    if (h.start < 1 || h.start > h.dim) out.push_back("start index outside [1,N]");
}

}  // namespace detail

/// Every violated invariant, as human-readable text. Empty means valid.
inline std::vector<std::string> validate(const Instance& inst, const ValidateOptions& opt = {}) {
    std::vector<std::string> out;
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Cnf2Formula>) detail::check_cnf(x, opt, out);
            else if constexpr (std::is_same_v<T, Digraph>) detail::check_graph(x, opt, out);
            else if constexpr (std::is_same_v<T, LpSystem>) detail::check_lp(x, opt, out);
            else if constexpr (std::is_same_v<T, NfaSpec>) detail::check_nfa(x, out);
            else if constexpr (std::is_same_v<T, UockInstance>) detail::check_uock(x, out);
            else detail::check_hpp(x, out);
        },
        inst);
    return out;
}

inline void require_valid(const Instance& inst, const ValidateOptions& opt = {}) {
    auto v = validate(inst, opt);
    if (!v.empty()) throw InvariantViolation(v.front());
}

// ---------------------------------------------------------------------------
// Normalization

/// Canonical literal order inside each clause, duplicate literals and clauses
/// dropped (first occurrence kept), unused variables removed and the rest
/// renumbered densely in increasing order.
inline Cnf2Formula normalize_cnf(const Cnf2Formula& f) {
    std::vector<Clause> canon;
    std::set<std::pair<Literal, Literal>> seen;
    for (const Clause& c : f.clauses) {
        Literal a = c[0];
        Literal b = c.width() == 2 ? c[1] : c[0];
        if (b < a) std::swap(a, b);
        if (!seen.insert({a, b}).second) continue;
        canon.push_back(a == b ? Clause::unit(a) : Clause::binary(a, b));
    }
    std::vector<Var> rename(f.num_vars + 1, 0);
    for (const Clause& c : canon)
        for (Literal l : c.literals()) rename[l.var] = 1;
    Var next = 0;
    for (Var v = 1; v <= f.num_vars; ++v)
        if (rename[v]) rename[v] = ++next;
    Cnf2Formula out;
    out.num_vars = next;
    for (const Clause& c : canon) {
        auto map = [&](Literal l) { return Literal{rename[l.var], l.positive}; };
        out.clauses.push_back(c.width() == 1 ? Clause::unit(map(c[0])) : Clause::binary(map(c[0]), map(c[1])));
    }
    return out;
}

}  // namespace sublin

#include "sublin/format.hpp"
