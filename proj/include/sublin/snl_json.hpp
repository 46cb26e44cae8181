#pragma once

#include <string>

#include "json.hpp"
#include "sublin/snl.hpp"

namespace sublin::snl {

using Json = nlohmann::ordered_json;

// Formula nodes are objects tagged by "op"; index terms are
// {"var": name, "offset": k}, {"const": k} or {"last": true, "offset": k};
// element terms are {"var": name} or {"elem": string}.

inline Json to_json(const IndexTerm& t) {
    Json j;
    switch (t.kind) {
        case IndexTerm::Kind::var: j["var"] = t.var; break;
        case IndexTerm::Kind::constant: j["const"] = t.value; break;
        case IndexTerm::Kind::last: j["last"] = true; break;
    }
    if (t.offset) j["offset"] = t.offset;
    return j;
}

inline Json to_json(const ElemTerm& t) { return t.is_var ? Json{{"var", t.text}} : Json{{"elem", t.text}}; }

inline std::string_view op_name(Op op) {
    switch (op) {
        case Op::truth: return "true";
        case Op::t_atom: return "T";
        case Op::in_rel: return "in";
        case Op::eq_elem: return "eq";
        case Op::eq_index: return "eq_index";
        case Op::le_index: return "le";
        case Op::symb: return "symb";
        case Op::not_: return "not";
        case Op::and_: return "and";
        case Op::or_: return "or";
        case Op::implies: return "implies";
        case Op::forall: return "forall";
        case Op::exists: return "exists";
    }
    return "?";
}

inline Json to_json(const FormulaPtr& f) {
    Json j;
    j["op"] = op_name(f->op);
    switch (f->op) {
        case Op::truth: break;
        case Op::t_atom:
            j["index"] = to_json(f->idx[0]);
            j["elem"] = to_json(f->elems[0]);
            break;
        case Op::in_rel:
            j["rel"] = f->name;
            j["args"] = Json::array();
            for (const auto& e : f->elems) j["args"].push_back(to_json(e));
            break;
        case Op::eq_elem:
            j["left"] = to_json(f->elems[0]);
            j["right"] = to_json(f->elems[1]);
            break;
        case Op::eq_index:
        case Op::le_index:
            j["left"] = to_json(f->idx[0]);
            j["right"] = to_json(f->idx[1]);
            break;
        case Op::symb:
            j["elem"] = to_json(f->elems[0]);
            j["index"] = to_json(f->idx[0]);
            j["symbol"] = f->name;
            break;
        case Op::not_: j["arg"] = to_json(f->kids[0]); break;
        case Op::and_:
        case Op::or_:
            j["args"] = Json::array();
            for (const auto& k : f->kids) j["args"].push_back(to_json(k));
            break;
        case Op::implies:
            j["left"] = to_json(f->kids[0]);
            j["right"] = to_json(f->kids[1]);
            break;
        case Op::forall:
        case Op::exists:
            j["var"] = f->name;
            if (f->domain.index) {
                j["range"] = f->domain.bound > 0 ? Json(f->domain.bound) : Json("P");
            } else {
                j["set"] = f->domain.set;
            }
            j["body"] = to_json(f->kids[0]);
            break;
    }
    return j;
}

namespace detail {

inline const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw SnlError(std::string("missing field '") + key + "' in " + j.dump());
    return j.at(key);
}

inline IndexTerm index_from_json(const Json& j) {
    IndexTerm t;
    if (j.contains("var")) {
        t = IndexTerm::variable(j.at("var").get<std::string>());
    } else if (j.contains("const")) {
        t = IndexTerm::constant(j.at("const").get<std::int64_t>());
    } else if (j.contains("last")) {
        t = IndexTerm::last();
    } else {
        throw SnlError("bad index term " + j.dump());
    }
    if (j.contains("offset")) t.offset = j.at("offset").get<std::int64_t>();
    return t;
}

inline ElemTerm elem_from_json(const Json& j) {
    if (j.contains("var")) return ElemTerm::variable(j.at("var").get<std::string>());
    if (j.contains("elem")) return ElemTerm::constant(j.at("elem").get<std::string>());
    throw SnlError("bad element term " + j.dump());
}

}  // namespace detail

inline FormulaPtr formula_from_json(const Json& j) {
    using namespace detail;
    const std::string op = field(j, "op").get<std::string>();
    auto kids = [&](const char* key) {
        std::vector<FormulaPtr> out;
        for (const auto& k : field(j, key)) out.push_back(formula_from_json(k));
        return out;
    };
    if (op == "true") return truth();
    if (op == "T") return T(index_from_json(field(j, "index")), elem_from_json(field(j, "elem")));
    if (op == "in") {
        std::vector<ElemTerm> args;
        for (const auto& a : field(j, "args")) args.push_back(elem_from_json(a));
        return in(field(j, "rel").get<std::string>(), std::move(args));
    }
    if (op == "eq") return eq(elem_from_json(field(j, "left")), elem_from_json(field(j, "right")));
    if (op == "eq_index") return eq(index_from_json(field(j, "left")), index_from_json(field(j, "right")));
    if (op == "le") return le(index_from_json(field(j, "left")), index_from_json(field(j, "right")));
    if (op == "symb") {
        auto s = field(j, "symbol").get<std::string>();
        if (s.size() != 1) throw SnlError("symb needs a one-character symbol");
        return symb(elem_from_json(field(j, "elem")), index_from_json(field(j, "index")), s[0]);
    }
    if (op == "not") return not_(formula_from_json(field(j, "arg")));
    if (op == "and") return and_(kids("args"));
    if (op == "or") return or_(kids("args"));
    if (op == "implies") return implies(formula_from_json(field(j, "left")), formula_from_json(field(j, "right")));
    if (op == "forall" || op == "exists") {
        Domain d;
        if (j.contains("set")) {
            d = elements_of(j.at("set").get<std::string>());
        } else {
            const Json& r = field(j, "range");
            d = index_range(r.is_string() ? 0 : r.get<std::int64_t>());
        }
        auto var = field(j, "var").get<std::string>();
        auto body = formula_from_json(field(j, "body"));
        return op == "forall" ? forall(var, d, body) : exists(var, d, body);
    }
    throw SnlError("unknown formula op '" + op + "'");
}

inline Json to_json(const SemanticModel& m) {
    Json j;
    j["P"] = m.P;
    j["functional_T"] = m.functional_T;
    auto names = [&](const std::vector<ElemId>& ids) {
        Json a = Json::array();
        for (auto id : ids) a.push_back(m.str(id));
        return a;
    };
    j["universe"] = names(m.universe());
    Json sets = Json::object();
    for (const auto& [name, ids] : m.sets())
        if (name != "U") sets[name] = names(ids);
    j["sets"] = sets;
    Json rels = Json::object();
    for (const auto& [name, r] : m.relations()) {
        Json tuples = Json::array();
        for (const auto& t : r.tuples) tuples.push_back(names(t));
        rels[name] = {{"arity", r.arity}, {"tuples", tuples}};
    }
    j["relations"] = rels;
    j["constants"] = m.constants;
    return j;
}

inline SemanticModel model_from_json(const Json& j) {
    using detail::field;
    SemanticModel m;
    m.P = field(j, "P").get<std::size_t>();
    if (j.contains("functional_T")) m.functional_T = j.at("functional_T").get<bool>();
    m.set_universe(field(j, "universe").get<std::vector<std::string>>());
    if (j.contains("sets"))
        for (const auto& [name, xs] : j.at("sets").items()) m.set_named(name, xs.get<std::vector<std::string>>());
    if (j.contains("relations"))
        for (const auto& [name, r] : j.at("relations").items())
            m.add_relation(name, field(r, "arity").get<std::size_t>(),
                           field(r, "tuples").get<std::vector<std::vector<std::string>>>());
    if (j.contains("constants"))
        for (const auto& [name, v] : j.at("constants").items()) m.constants[name] = v.get<std::int64_t>();
    return m;
}

inline Json to_json(const TRelation& t) {
    Json a = Json::array();
    for (const auto& [i, s] : t) a.push_back(Json::array({i, s}));
    return a;
}

inline TRelation trelation_from_json(const Json& j) {
    TRelation t;
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != 2) throw SnlError("T pairs are [index, element]");
        t.emplace_back(p.at(0).get<std::size_t>(), p.at(1).get<std::string>());
    }
    return t;
}

}  // namespace sublin::snl
