#pragma once

#include <charconv>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sublin/instances.hpp"

namespace sublin {

/// Malformed instance text. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

namespace detail {

struct TextLine {
    std::size_t number;
    std::vector<std::string_view> tokens;
};

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

inline std::vector<std::string_view> raw_lines(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < text.size()) out.push_back(text.substr(start));
            break;
        }
        out.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return out;
}

/// Non-blank, non-comment lines, tokenized.
inline std::vector<TextLine> content_lines(std::string_view text) {
    std::vector<TextLine> out;
    auto lines = raw_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto toks = split_ws(lines[i]);
        if (toks.empty() || toks[0].front() == '#') continue;
        out.push_back({i + 1, std::move(toks)});
    }
    return out;
}

inline std::int64_t to_int(std::string_view tok, std::size_t line) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw ParseError(line, "expected integer, got '" + std::string(tok) + "'");
    return v;
}

inline std::size_t to_count(std::string_view tok, std::size_t line) {
    auto v = to_int(tok, line);
    if (v < 0) throw ParseError(line, "expected non-negative integer, got '" + std::string(tok) + "'");
    return static_cast<std::size_t>(v);
}

inline Rational to_rational(std::string_view tok, std::size_t line) {
    try {
        return Rational::parse(tok);
    } catch (const std::exception& e) {
        throw ParseError(line, "bad rational '" + std::string(tok) + "': " + e.what());
    }
}

inline const TextLine& header(const std::vector<TextLine>& lines, std::string_view tag, std::size_t arity) {
    if (lines.empty()) throw ParseError(0, "missing 'p " + std::string(tag) + "' header");
    const auto& h = lines.front();
    if (h.tokens.size() != arity + 2 || h.tokens[0] != "p" || h.tokens[1] != tag)
        throw ParseError(h.number, "expected header 'p " + std::string(tag) + "' with " + std::to_string(arity) +
                                       " fields");
    return h;
}

inline void check_invariants(const Instance& inst, std::size_t line) {
    auto v = validate(inst);
    if (!v.empty()) throw InvariantViolation(line ? "line " + std::to_string(line) + ": " + v.front() : v.front());
}

inline Cnf2Formula parse_cnf(std::string_view text) {
    auto lines = content_lines(text);
    const auto& h = header(lines, "cnf", 2);
    Cnf2Formula f;
    f.num_vars = to_count(h.tokens[2], h.number);
    std::size_t m = to_count(h.tokens[3], h.number);
    if (lines.size() - 1 != m)
        throw ParseError(h.number, "header declares " + std::to_string(m) + " clauses, found " +
                                       std::to_string(lines.size() - 1));
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& l = lines[i];
        if (l.tokens.back() != "0") throw ParseError(l.number, "clause must end with 0");
        std::size_t width = l.tokens.size() - 1;
        if (width == 0) throw InvariantViolation("line " + std::to_string(l.number) + ": empty clause");
        if (width > 2)
            throw InvariantViolation("line " + std::to_string(l.number) + ": clause width " + std::to_string(width));
        std::vector<Literal> lits;
        for (std::size_t k = 0; k < width; ++k) {
            auto v = to_int(l.tokens[k], l.number);
            if (v == 0) throw ParseError(l.number, "literal 0 before end of clause");
            lits.push_back(Literal::from_int(v));
        }
        f.clauses.push_back(width == 1 ? Clause::unit(lits[0]) : Clause::binary(lits[0], lits[1]));
        auto bad = validate(Cnf2Formula{f.num_vars, {f.clauses.back()}});
        if (!bad.empty()) throw InvariantViolation("line " + std::to_string(l.number) + ": " + bad.front());
    }
    return f;
}

inline Digraph parse_digraph(std::string_view text) {
    auto lines = content_lines(text);
    const auto& h = header(lines, "dstcon", 4);
    Digraph g;
    g.num_vertices = to_count(h.tokens[2], h.number);
    std::size_t m = to_count(h.tokens[3], h.number);
    g.source = static_cast<Vertex>(to_count(h.tokens[4], h.number));
    g.target = static_cast<Vertex>(to_count(h.tokens[5], h.number));
    if (lines.size() - 1 != m)
        throw ParseError(h.number, "header declares " + std::to_string(m) + " edges, found " +
                                       std::to_string(lines.size() - 1));
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& l = lines[i];
        if (l.tokens.size() != 3 || l.tokens[0] != "e") throw ParseError(l.number, "expected 'e <u> <v>'");
        g.edges.emplace_back(static_cast<Vertex>(to_count(l.tokens[1], l.number)),
                             static_cast<Vertex>(to_count(l.tokens[2], l.number)));
    }
    check_invariants(g, h.number);
    return g;
}

inline LpSystem parse_lp(std::string_view text) {
    auto lines = content_lines(text);
    const auto& h = header(lines, "lp", 2);
    LpSystem lp;
    std::size_t m = to_count(h.tokens[2], h.number);
    lp.num_cols = to_count(h.tokens[3], h.number);
    if (lines.size() - 1 != m)
        throw ParseError(h.number, "header declares " + std::to_string(m) + " rows, found " +
                                       std::to_string(lines.size() - 1));
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& l = lines[i];
        const auto& t = l.tokens;
        if (t.size() < 3 || t[0] != "r" || t[t.size() - 2] != ">=")
            throw ParseError(l.number, "expected 'r <col>:<p>/<q> ... >= <p>/<q>'");
        LpRow row;
        if (t.size() - 3 > 2)
            throw InvariantViolation("line " + std::to_string(l.number) + ": row has " +
                                     std::to_string(t.size() - 3) + " nonzeros");
        for (std::size_t k = 1; k + 2 < t.size(); ++k) {
            auto colon = t[k].find(':');
            if (colon == std::string_view::npos) throw ParseError(l.number, "entry without ':'");
            row.entries.push_back({static_cast<Vertex>(to_count(t[k].substr(0, colon), l.number)),
                                   to_rational(t[k].substr(colon + 1), l.number)});
        }
        row.bound = to_rational(t.back(), l.number);
        lp.rows.push_back(std::move(row));
        LpSystem probe;
        probe.num_cols = lp.num_cols;
        probe.rows.push_back(lp.rows.back());
        auto bad = validate(probe);
        if (!bad.empty()) throw InvariantViolation("line " + std::to_string(l.number) + ": " + bad.front());
    }
    return lp;
}

inline NfaSpec parse_nfa(std::string_view text) {
    auto lines = content_lines(text);
    const auto& h = header(lines, "nfa", 4);
    NfaSpec a;
    a.num_states = to_count(h.tokens[2], h.number);
    a.num_symbols = to_count(h.tokens[3], h.number);
    a.length = to_count(h.tokens[4], h.number);
    a.initial = static_cast<Vertex>(to_count(h.tokens[5], h.number));
    a.resize_delta();
    auto state = [&](std::string_view tok, std::size_t line) {
        auto q = to_count(tok, line);
        if (q < 1 || q > a.num_states) throw InvariantViolation("line " + std::to_string(line) + ": state " +
                                                                std::to_string(q) + " out of range");
        return static_cast<Vertex>(q);
    };
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& l = lines[i];
        if (l.tokens[0] == "f" && l.tokens.size() == 2) {
            a.finals.push_back(state(l.tokens[1], l.number));
        } else if (l.tokens[0] == "t" && l.tokens.size() == 4) {
            Vertex q = state(l.tokens[1], l.number);
            auto sym = to_count(l.tokens[2], l.number);
            if (sym >= a.num_symbols)
                throw InvariantViolation("line " + std::to_string(l.number) + ": symbol " + std::to_string(sym) +
                                         " out of range");
            a.add_transition(q, static_cast<Symbol>(sym), state(l.tokens[3], l.number));
        } else {
            throw ParseError(l.number, "expected 'f <q>' or 't <q> <a> <q'>'");
        }
    }
    std::sort(a.finals.begin(), a.finals.end());
    a.finals.erase(std::unique(a.finals.begin(), a.finals.end()), a.finals.end());
    check_invariants(a, h.number);
    return a;
}

inline UockInstance parse_uock(std::string_view text) {
    auto lines = raw_lines(text);
    auto strip = [](std::string_view s) {
        while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
        return s;
    };
    if (lines.size() < 2) throw ParseError(0, "uock instance needs a target line and a count line");
    UockInstance u;
    u.target = std::string(strip(lines[0]));
    auto count_toks = split_ws(lines[1]);
    if (count_toks.size() != 1) throw ParseError(2, "expected piece count");
    std::size_t n = to_count(count_toks[0], 2);
    if (lines.size() < 2 + n)
        throw ParseError(2, "declares " + std::to_string(n) + " pieces, found " + std::to_string(lines.size() - 2));
    for (std::size_t i = 0; i < n; ++i) u.pieces.emplace_back(strip(lines[2 + i]));
    for (std::size_t i = 2 + n; i < lines.size(); ++i)
        if (!strip(lines[i]).empty()) throw ParseError(i + 1, "trailing content after last piece");
    check_invariants(u, 0);
    return u;
}

inline HppInstance parse_hpp(std::string_view text) {
    auto lines = content_lines(text);
    const auto& h = header(lines, "hpp", 3);
    HppInstance p;
    p.dim = to_count(h.tokens[2], h.number);
    p.length = to_count(h.tokens[3], h.number);
    p.start = static_cast<Vertex>(to_count(h.tokens[4], h.number));
    if (lines.size() - 1 != p.dim)
        throw ParseError(h.number, "expected " + std::to_string(p.dim) + " matrix rows, found " +
                                       std::to_string(lines.size() - 1));
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& l = lines[i];
        if (l.tokens.size() != p.dim) throw ParseError(l.number, "matrix row needs " + std::to_string(p.dim) + " entries");
        for (auto tok : l.tokens) p.matrix.push_back(static_cast<std::uint32_t>(to_count(tok, l.number)));
    }
    check_invariants(p, h.number);
    return p;
}

}  // namespace detail

inline Instance parse_instance_value(Family family, std::string_view text) {
    switch (family) {
        case Family::cnf: return detail::parse_cnf(text);
        case Family::dstcon: return detail::parse_digraph(text);
        case Family::lp: return detail::parse_lp(text);
        case Family::nfa: return detail::parse_nfa(text);
        case Family::uock: return detail::parse_uock(text);
        case Family::hpp: return detail::parse_hpp(text);
    }
    throw std::logic_error("unreachable");
}

/// Parses and validates one instance; the size parameter defaults per family.
inline ParamInstance parse_instance(Family family, std::string_view text) {
    return {parse_instance_value(family, text), default_param(family)};
}

inline ParamInstance parse_instance(std::string_view format_tag, std::string_view text) {
    return parse_instance(parse_family(format_tag), text);
}

inline std::string serialize(const Instance& inst) {
    std::ostringstream os;
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Cnf2Formula>) {
                os << "p cnf " << x.num_vars << ' ' << x.num_clauses() << '\n';
                for (const Clause& c : x.clauses) {
                    for (Literal l : c.literals()) os << l.to_int() << ' ';
                    os << "0\n";
                }
            } else if constexpr (std::is_same_v<T, Digraph>) {
                os << "p dstcon " << x.num_vertices << ' ' << x.num_edges() << ' ' << x.source << ' ' << x.target
                   << '\n';
                for (auto [u, v] : x.edges) os << "e " << u << ' ' << v << '\n';
            } else if constexpr (std::is_same_v<T, LpSystem>) {
                os << "p lp " << x.num_rows() << ' ' << x.num_cols << '\n';
                for (const auto& r : x.rows) {
                    os << 'r';
                    for (const auto& e : r.entries) os << ' ' << e.col << ':' << e.coeff.str();
                    os << " >= " << r.bound.str() << '\n';
                }
            } else if constexpr (std::is_same_v<T, NfaSpec>) {
                os << "p nfa " << x.num_states << ' ' << x.num_symbols << ' ' << x.length << ' ' << x.initial << '\n';
                for (Vertex f : x.finals) os << "f " << f << '\n';
                for (Vertex q = 1; q <= x.num_states; ++q)
                    for (Symbol a = 0; a < x.num_symbols; ++a)
                        for (Vertex r : x.next(q, a)) os << "t " << q << ' ' << a << ' ' << r << '\n';
            } else if constexpr (std::is_same_v<T, UockInstance>) {
                os << x.target << '\n' << x.pieces.size() << '\n';
                for (const auto& p : x.pieces) os << p << '\n';
            } else {
                os << "p hpp " << x.dim << ' ' << x.length << ' ' << x.start << '\n';
                for (std::size_t i = 0; i < x.dim; ++i) {
                    for (std::size_t j = 0; j < x.dim; ++j) os << (j ? " " : "") << x.matrix[i * x.dim + j];
                    os << '\n';
                }
            }
        },
        inst);
    return os.str();
}

}  // namespace sublin
