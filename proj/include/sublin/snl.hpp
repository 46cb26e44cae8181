#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

namespace sublin::snl {

class SnlError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};
class UnboundVariable : public SnlError {
public:
    using SnlError::SnlError;
};
class EnumerationGuard : public SnlError {
public:
    using SnlError::SnlError;
};

inline constexpr std::uint64_t kEnumerationGuard = std::uint64_t{1} << 20;

// ---------------------------------------------------------------------------
// Syntax

/// Index-valued term: a variable, a constant or last(T), plus an offset.
struct IndexTerm {
    enum class Kind { var, constant, last };
    Kind kind = Kind::constant;
    std::string var;
    std::int64_t value = 0;
    std::int64_t offset = 0;

    static IndexTerm variable(std::string name, std::int64_t off = 0) { return {Kind::var, std::move(name), 0, off}; }
    static IndexTerm constant(std::int64_t v) { return {Kind::constant, {}, v, 0}; }
    static IndexTerm last(std::int64_t off = 0) { return {Kind::last, {}, 0, off}; }
};

/// Element-valued term: a variable or a literal string of the model.
struct ElemTerm {
    bool is_var = true;
    std::string text;  // variable name or element string

    static ElemTerm variable(std::string name) { return {true, std::move(name)}; }
    static ElemTerm constant(std::string element) { return {false, std::move(element)}; }
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

enum class Op { truth, t_atom, in_rel, eq_elem, eq_index, le_index, symb, not_, and_, or_, implies, forall, exists };

/// Quantifier domain: an index range [1, bound] (bound 0 means P) or a named
/// element set ("U" is the universe U_x).
struct Domain {
    bool index = true;
    std::int64_t bound = 0;
    std::string set = "U";
};

struct Formula {
    Op op = Op::truth;
    std::vector<IndexTerm> idx;   // index operands
    std::vector<ElemTerm> elems;  // element operands
    std::string name;             // relation name, symbol, or bound variable
    Domain domain;                // quantifiers
    std::vector<FormulaPtr> kids;
};

inline FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }
inline FormulaPtr truth() { return make({}); }
inline FormulaPtr T(IndexTerm i, ElemTerm v) { return make({Op::t_atom, {std::move(i)}, {std::move(v)}, {}, {}, {}}); }
inline FormulaPtr in(std::string rel, std::vector<ElemTerm> args) {
    return make({Op::in_rel, {}, std::move(args), std::move(rel), {}, {}});
}
inline FormulaPtr eq(ElemTerm a, ElemTerm b) { return make({Op::eq_elem, {}, {std::move(a), std::move(b)}, {}, {}, {}}); }
inline FormulaPtr eq(IndexTerm a, IndexTerm b) { return make({Op::eq_index, {std::move(a), std::move(b)}, {}, {}, {}, {}}); }
inline FormulaPtr le(IndexTerm a, IndexTerm b) { return make({Op::le_index, {std::move(a), std::move(b)}, {}, {}, {}, {}}); }
/// symb(v, i) = a: the i-th character (1-based) of v is a.
inline FormulaPtr symb(ElemTerm v, IndexTerm i, char a) {
    return make({Op::symb, {std::move(i)}, {std::move(v)}, std::string(1, a), {}, {}});
}
inline FormulaPtr not_(FormulaPtr a) { return make({Op::not_, {}, {}, {}, {}, {std::move(a)}}); }
inline FormulaPtr and_(std::vector<FormulaPtr> xs) { return make({Op::and_, {}, {}, {}, {}, std::move(xs)}); }
inline FormulaPtr or_(std::vector<FormulaPtr> xs) { return make({Op::or_, {}, {}, {}, {}, std::move(xs)}); }
inline FormulaPtr implies(FormulaPtr a, FormulaPtr b) { return make({Op::implies, {}, {}, {}, {}, {std::move(a), std::move(b)}}); }
inline FormulaPtr forall(std::string var, Domain d, FormulaPtr body) {
    return make({Op::forall, {}, {}, std::move(var), std::move(d), {std::move(body)}});
}
inline FormulaPtr exists(std::string var, Domain d, FormulaPtr body) {
    return make({Op::exists, {}, {}, std::move(var), std::move(d), {std::move(body)}});
}
inline Domain index_range(std::int64_t bound = 0) { return {true, bound, {}}; }
inline Domain elements_of(std::string set = "U") { return {false, 0, std::move(set)}; }

// ---------------------------------------------------------------------------
// Semantic model

using ElemId = std::uint32_t;

struct Relation {
    std::size_t arity = 0;
    std::vector<std::vector<ElemId>> tuples;
};

class SemanticModel {
public:
    std::size_t P = 0;         // T ranges over subsets of [P] x U_x
    bool functional_T = true;  // enumerate functions [P] -> U_x instead of subsets
    std::map<std::string, std::int64_t> constants;  // metadata such as c, e

    ElemId intern(const std::string& s) {
        auto [it, fresh] = ids_.try_emplace(s, static_cast<ElemId>(strings_.size()));
        if (fresh) strings_.push_back(s);
        return it->second;
    }
    std::optional<ElemId> find(const std::string& s) const {
        auto it = ids_.find(s);
        if (it == ids_.end()) return std::nullopt;
        return it->second;
    }
    const std::string& str(ElemId id) const { return strings_.at(id); }
    std::size_t element_count() const { return strings_.size(); }

    void set_universe(const std::vector<std::string>& u) { sets_["U"] = intern_all(u); }
    void set_named(const std::string& name, const std::vector<std::string>& xs) { sets_[name] = intern_all(xs); }
    void add_relation(const std::string& name, std::size_t arity, const std::vector<std::vector<std::string>>& tuples) {
        Relation r;
        r.arity = arity;
        for (const auto& t : tuples) {
            if (t.size() != arity) throw SnlError("relation " + name + ": tuple arity mismatch");
            std::vector<ElemId> ids;
            for (const auto& s : t) ids.push_back(intern(s));
            r.tuples.push_back(std::move(ids));
        }
        relations_[name] = std::move(r);
    }

    const std::vector<ElemId>& universe() const { return set("U"); }
    const std::vector<ElemId>& set(const std::string& name) const {
        auto it = sets_.find(name);
        if (it == sets_.end()) throw SnlError("unknown element set '" + name + "'");
        return it->second;
    }
    const std::map<std::string, std::vector<ElemId>>& sets() const { return sets_; }
    const Relation& relation(const std::string& name) const {
        auto it = relations_.find(name);
        if (it == relations_.end()) throw SnlError("unknown relation '" + name + "'");
        return it->second;
    }
    const std::map<std::string, Relation>& relations() const { return relations_; }

private:
    std::vector<ElemId> intern_all(const std::vector<std::string>& xs) {
        std::vector<ElemId> out;
        for (const auto& s : xs) out.push_back(intern(s));
        return out;
    }
    std::vector<std::string> strings_;
    std::unordered_map<std::string, ElemId> ids_;
    std::map<std::string, std::vector<ElemId>> sets_{{"U", {}}};
    std::map<std::string, Relation> relations_;
};

/// |U_x|.
inline std::size_t cert_size(const SemanticModel& m) { return m.universe().size(); }

/// Explicit second-order object: the pairs (i, u) with i in [P], u in U_x.
using TRelation = std::vector<std::pair<std::size_t, std::string>>;

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

struct CIndex {
    IndexTerm::Kind kind;
    int slot;
    std::int64_t value, offset;
};
struct CElem {
    bool is_var;
    int slot;
    std::int64_t id;  // -1 when the constant is not an element of the model
};
struct CNode {
    Op op;
    std::vector<CIndex> idx;
    std::vector<CElem> elems;
    int slot = -1;                                 // quantified variable
    const std::vector<ElemId>* domain = nullptr;   // element quantifiers
    std::int64_t bound = 0;                        // index quantifiers
    const std::unordered_set<std::uint64_t>* rel = nullptr;
    char symbol = 0;
    std::vector<int> kids;
};

/// Formula compiled against a model: variables resolved to slots, relations
/// hashed, elements mapped to universe positions.
class Program {
public:
    Program(const FormulaPtr& f, const SemanticModel& m) : model_(&m) {
        const auto& u = m.universe();
        upos_.assign(m.element_count(), -1);
        for (std::size_t k = 0; k < u.size(); ++k) upos_[u[k]] = static_cast<std::int64_t>(k);
        radix_ = m.element_count() + 1;
        for (const auto& [name, r] : m.relations()) {
            auto& set = rels_[name];
            for (const auto& t : r.tuples) set.insert(key(t.data(), t.size()));
        }
        std::vector<std::string> scope;
        root_ = compile(*f, scope);
    }

    std::size_t slot_count() const { return slots_; }

    /// t[(i-1)*|U| + pos] for i in [P]; last is the largest index with a pair.
    bool run(const std::vector<char>& t, std::int64_t last) const {
        t_ = &t;
        last_ = last;
        if (env_.size() != slots_) env_.assign(slots_, 0);
        return eval(root_);
    }

private:
    std::uint64_t key(const ElemId* ids, std::size_t n) const {
        std::uint64_t k = n;
        for (std::size_t i = 0; i < n; ++i) k = k * radix_ + ids[i] + 1;
        return k;
    }

    int compile(const Formula& f, std::vector<std::string>& scope) {
        CNode n;
        n.op = f.op;
        auto lookup = [&](const std::string& v) {
            for (std::size_t k = scope.size(); k-- > 0;)
                if (scope[k] == v) return static_cast<int>(k);
            throw UnboundVariable("unbound variable '" + v + "'");
        };
        for (const auto& i : f.idx)
            n.idx.push_back({i.kind, i.kind == IndexTerm::Kind::var ? lookup(i.var) : -1, i.value, i.offset});
        for (const auto& e : f.elems) {
            if (e.is_var) {
                n.elems.push_back({true, lookup(e.text), 0});
            } else {
                auto id = model_->find(e.text);
                n.elems.push_back({false, -1, id ? std::int64_t(*id) : -1});
            }
        }
        if (f.op == Op::in_rel) {
            const auto& r = model_->relation(f.name);
            if (r.arity != f.elems.size()) throw SnlError("relation " + f.name + " used with wrong arity");
            n.rel = &rels_.at(f.name);
        }
        if (f.op == Op::symb) n.symbol = f.name.empty() ? 0 : f.name[0];
        if (f.op == Op::forall || f.op == Op::exists) {
            if (f.domain.index) {
                n.bound = f.domain.bound > 0 ? f.domain.bound : static_cast<std::int64_t>(model_->P);
            } else {
                n.domain = &model_->set(f.domain.set);
            }
            scope.push_back(f.name);
            n.slot = static_cast<int>(scope.size() - 1);
            slots_ = std::max(slots_, scope.size());
            n.kids.push_back(compile(*f.kids.at(0), scope));
            scope.pop_back();
        } else {
            for (const auto& k : f.kids) n.kids.push_back(compile(*k, scope));
        }
        nodes_.push_back(std::move(n));
        return static_cast<int>(nodes_.size() - 1);
    }

    std::int64_t index(const CIndex& i) const {
        switch (i.kind) {
            case IndexTerm::Kind::var: return env_[i.slot] + i.offset;
            case IndexTerm::Kind::constant: return i.value + i.offset;
            case IndexTerm::Kind::last: return last_ + i.offset;
        }
        return 0;
    }
    std::int64_t elem(const CElem& e) const { return e.is_var ? env_[e.slot] : e.id; }

    bool eval(int id) const {
        const CNode& n = nodes_[id];
        switch (n.op) {
            case Op::truth: return true;
            case Op::t_atom: {
                std::int64_t i = index(n.idx[0]), e = elem(n.elems[0]);
                if (i < 1 || i > static_cast<std::int64_t>(model_->P) || e < 0) return false;
                std::int64_t pos = upos_[e];
                if (pos < 0) return false;
                return (*t_)[(i - 1) * upos_count() + pos] != 0;
            }
            case Op::in_rel: {
                ElemId ids[8];
                if (n.elems.size() > 8) throw SnlError("relation arity above 8");
                for (std::size_t k = 0; k < n.elems.size(); ++k) {
                    std::int64_t e = elem(n.elems[k]);
                    if (e < 0) return false;
                    ids[k] = static_cast<ElemId>(e);
                }
                return n.rel->count(key(ids, n.elems.size())) != 0;
            }
            case Op::eq_elem: return elem(n.elems[0]) == elem(n.elems[1]) && elem(n.elems[0]) >= 0;
            case Op::eq_index: return index(n.idx[0]) == index(n.idx[1]);
            case Op::le_index: return index(n.idx[0]) <= index(n.idx[1]);
            case Op::symb: {
                std::int64_t e = elem(n.elems[0]), i = index(n.idx[0]);
                if (e < 0) return false;
                const auto& s = model_->str(static_cast<ElemId>(e));
                return i >= 1 && i <= static_cast<std::int64_t>(s.size()) && s[i - 1] == n.symbol;
            }
            case Op::not_: return !eval(n.kids[0]);
            case Op::and_:
                for (int k : n.kids)
                    if (!eval(k)) return false;
                return true;
            case Op::or_:
                for (int k : n.kids)
                    if (eval(k)) return true;
                return false;
            case Op::implies: return !eval(n.kids[0]) || eval(n.kids[1]);
            case Op::forall:
            case Op::exists: {
                const bool want = n.op == Op::exists;
                if (n.domain) {
                    for (ElemId e : *n.domain) {
                        env_[n.slot] = e;
                        if (eval(n.kids[0]) == want) return want;
                    }
                } else {
                    for (std::int64_t i = 1; i <= n.bound; ++i) {
                        env_[n.slot] = i;
                        if (eval(n.kids[0]) == want) return want;
                    }
                }
                return !want;
            }
        }
        return false;
    }
    std::int64_t upos_count() const { return static_cast<std::int64_t>(model_->universe().size()); }

    const SemanticModel* model_;
    std::vector<std::int64_t> upos_;
    std::uint64_t radix_ = 1;
    std::map<std::string, std::unordered_set<std::uint64_t>> rels_;
    std::vector<CNode> nodes_;
    int root_ = 0;
    std::size_t slots_ = 0;
    mutable std::vector<std::int64_t> env_;
    mutable const std::vector<char>* t_ = nullptr;
    mutable std::int64_t last_ = 0;
};

inline std::int64_t last_index(const std::vector<char>& t, std::size_t P, std::size_t U) {
    for (std::size_t i = P; i >= 1; --i)
        for (std::size_t u = 0; u < U; ++u)
            if (t[(i - 1) * U + u]) return static_cast<std::int64_t>(i);
    return 0;
}

}  // namespace detail

/// Truth of the formula under an explicit T. Pairs must lie in [P] x U_x,
/// and T must be a function on [P] when the model says so.
inline bool eval_snl(const FormulaPtr& f, const SemanticModel& m, const TRelation& t) {
    const std::size_t U = m.universe().size();
    std::vector<std::int64_t> pos(m.element_count(), -1);
    for (std::size_t k = 0; k < U; ++k) pos[m.universe()[k]] = static_cast<std::int64_t>(k);
    std::vector<char> bits(m.P * U, 0);
    for (const auto& [i, s] : t) {
        auto id = m.find(s);
        if (i < 1 || i > m.P || !id || pos[*id] < 0)
            throw SnlError("T pair (" + std::to_string(i) + ", \"" + s + "\") outside [P] x U_x");
        bits[(i - 1) * U + pos[*id]] = 1;
    }
    if (m.functional_T)
        for (std::size_t i = 1; i <= m.P; ++i) {
            std::size_t c = 0;
            for (std::size_t u = 0; u < U; ++u) c += bits[(i - 1) * U + u];
            if (c != 1) throw SnlError("T is not a function on [P]: index " + std::to_string(i) + " has " +
                                       std::to_string(c) + " images");
        }
    detail::Program prog(f, m);
    return prog.run(bits, detail::last_index(bits, m.P, U));
}

struct DecideResult {
    bool value = false;
    std::uint64_t candidates = 0;    // candidate T objects evaluated
    std::optional<TRelation> witness;
};

/// Number of candidate T objects, or nullopt above 2^64.
inline std::optional<std::uint64_t> candidate_count(const SemanticModel& m) {
    const std::uint64_t U = m.universe().size();
    unsigned __int128 c = 1;
    if (m.functional_T) {
        for (std::size_t i = 0; i < m.P; ++i) {
            c *= U;
            if (c > kEnumerationGuard) return std::nullopt;
        }
    } else {
        std::uint64_t bits = m.P * U;
        if (bits > 62) return std::nullopt;
        c = std::uint64_t{1} << bits;
    }
    return static_cast<std::uint64_t>(c);
}

/// Existential search over T: functions [P] -> U_x or subsets of [P] x U_x.
/// Stops at the first satisfying T.
inline DecideResult decide_snl(const FormulaPtr& f, const SemanticModel& m) {
    auto total = candidate_count(m);
    if (!total || *total > kEnumerationGuard)
        throw EnumerationGuard(std::string("enumeration of T exceeds 2^20 candidates (") +
                               (m.functional_T ? "|U|^P" : "2^(P|U|)") + ")");
    detail::Program prog(f, m);
    const std::size_t U = m.universe().size(), P = m.P;
    std::vector<char> bits(P * U, 0);
    DecideResult r;
    auto witness = [&]() {
        TRelation t;
        for (std::size_t i = 1; i <= P; ++i)
            for (std::size_t u = 0; u < U; ++u)
                if (bits[(i - 1) * U + u]) t.emplace_back(i, m.str(m.universe()[u]));
        return t;
    };
    if (m.functional_T) {
        if (U == 0 && P > 0) return r;
        std::vector<std::size_t> digit(P, 0);
        for (std::size_t i = 0; i < P; ++i) bits[i * U] = 1;
        const std::int64_t last = static_cast<std::int64_t>(P);
        while (true) {
            ++r.candidates;
            if (prog.run(bits, last)) {
                r.value = true;
                r.witness = witness();
                return r;
            }
            std::size_t i = 0;
            for (; i < P; ++i) {
                bits[i * U + digit[i]] = 0;
                digit[i] = (digit[i] + 1) % U;
                bits[i * U + digit[i]] = 1;
                if (digit[i] != 0) break;
            }
            if (i == P) return r;
        }
    }
    for (std::uint64_t mask = 0; mask < *total; ++mask) {
        for (std::size_t k = 0; k < P * U; ++k) bits[k] = (mask >> k) & 1;
        ++r.candidates;
        if (prog.run(bits, detail::last_index(bits, P, U))) {
            r.value = true;
            r.witness = witness();
            return r;
        }
    }
    return r;
}

}  // namespace sublin::snl
