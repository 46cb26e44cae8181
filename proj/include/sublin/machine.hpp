#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sublin/snl.hpp"
#include "sublin/workspace.hpp"

namespace sublin::snl {

class SpaceBoundExceeded : public SnlError {
public:
    using SnlError::SnlError;
};

/// Input symbol seen on an empty input.
inline constexpr int kBlankInput = 2;

struct Action {
    std::size_t next = 0;
    int input_move = 0;  // -1, 0, +1; clamped to the input
    std::uint8_t write = 0;
    int work_move = 0;   // -1, 0, +1; leaving the work tape is an error
};

/// Deterministic machine over input alphabet {0,1} with a binary work tape
/// of fixed length (0 is blank). The transition also sees whether the input
/// head is on the last cell. Accepting and rejecting states halt.
struct ToyMachine {
    std::string name;
    std::vector<std::string> states;
    std::size_t initial = 0;
    std::size_t accept = 0;
    std::size_t reject = SIZE_MAX;  // SIZE_MAX: no rejecting state
    std::size_t work_cells = 0;
    std::function<Action(std::size_t state, int input, bool at_last, std::uint8_t work)> delta;
    /// Input head position of the unique accepting configuration, given |x|.
    std::function<std::size_t(std::size_t)> accept_head = [](std::size_t) { return std::size_t{0}; };
};

struct Config {
    std::size_t state = 0;
    std::size_t input_head = 0;
    std::size_t work_head = 0;
    std::vector<std::uint8_t> work;
    friend bool operator==(const Config&, const Config&) = default;
};

namespace detail {

inline std::size_t input_cells(const std::string& x) { return std::max<std::size_t>(x.size(), 1); }

inline Config initial_config(const ToyMachine& m) { return {m.initial, 0, 0, std::vector<std::uint8_t>(m.work_cells, 0)}; }

inline Config step(const ToyMachine& m, const std::string& x, const Config& c) {
    int in = x.empty() ? kBlankInput : x[c.input_head] - '0';
    bool at_last = c.input_head + 1 == input_cells(x);
    std::uint8_t w = m.work_cells ? c.work[c.work_head] : 0;
    Action a = m.delta(c.state, in, at_last, w);
    Config d = c;
    d.state = a.next;
    if (m.work_cells) d.work[c.work_head] = a.write;
    std::int64_t ih = static_cast<std::int64_t>(c.input_head) + a.input_move;
    d.input_head = static_cast<std::size_t>(std::clamp<std::int64_t>(ih, 0, input_cells(x) - 1));
    std::int64_t wh = static_cast<std::int64_t>(c.work_head) + a.work_move;
    if (wh < 0 || wh >= static_cast<std::int64_t>(std::max<std::size_t>(m.work_cells, 1)))
        throw SpaceBoundExceeded(m.name + ": work head leaves the " + std::to_string(m.work_cells) + "-cell tape");
    d.work_head = static_cast<std::size_t>(wh);
    if (d.state >= m.states.size()) throw SnlError(m.name + ": transition to unknown state");
    return d;
}

}  // namespace detail

struct SimResult {
    bool accepted = false;
    std::size_t steps = 0;
    Config final_config;
};

/// Direct run until a halting state.
inline SimResult simulate(const ToyMachine& m, const std::string& x, std::size_t max_steps = 1'000'000) {
    Config c = detail::initial_config(m);
    for (std::size_t t = 0; t <= max_steps; ++t) {
        if (c.state == m.accept) return {true, t, c};
        if (c.state == m.reject) return {false, t, c};
        c = detail::step(m, x, c);
    }
    throw SnlError(m.name + ": no halt within " + std::to_string(max_steps) + " steps");
}

/// Fixed-length binary packing of configurations: state, input head, work
/// head, then the work cells.
struct ConfigPacking {
    std::size_t state_bits, head_bits, work_head_bits, work_cells;

    ConfigPacking(const ToyMachine& m, std::size_t input_len)
        : state_bits(bits_for(m.states.size())),
          head_bits(bits_for(std::max<std::size_t>(input_len, 1))),
          work_head_bits(bits_for(m.work_cells)),
          work_cells(m.work_cells) {}

    std::size_t length() const { return state_bits + head_bits + work_head_bits + work_cells; }

    std::string encode(const Config& c) const {
        std::string s;
        auto put = [&](std::size_t v, std::size_t w) {
            for (std::size_t i = w; i-- > 0;) s += (v >> i & 1) ? '1' : '0';
        };
        put(c.state, state_bits);
        put(c.input_head, head_bits);
        put(c.work_head, work_head_bits);
        for (auto b : c.work) s += b ? '1' : '0';
        return s;
    }
    Config decode(const std::string& s) const {
        std::size_t p = 0;
        auto get = [&](std::size_t w) {
            std::size_t v = 0;
            for (std::size_t i = 0; i < w; ++i) v = v * 2 + (s[p++] == '1');
            return v;
        };
        Config c;
        c.state = get(state_bits);
        c.input_head = get(head_bits);
        c.work_head = get(work_head_bits);
        for (std::size_t i = 0; i < work_cells; ++i) c.work.push_back(s[p++] == '1');
        return c;
    }
};

struct AcceptanceInstance {
    FormulaPtr formula;
    SemanticModel model;
    std::size_t size_param = 0;    // m(x) = max(|x|, 1)
    std::size_t space_constant = 0;  // c: configuration cells beyond ceil(log2 m(x))
};

/// The acceptance formula
///   exists v0 [ T(1,v0) and v0 in INIT and exists v1 [ T(last,v1) and v1 in ACC and
///     forall i forall v ( T(i,v) and i+1 <= last -> exists w ((v,w) in Tran and T(i+1,w)) ) ] ]
/// with Func(T) carried by the model's functional mode.
inline FormulaPtr acceptance_formula() {
    using E = ElemTerm;
    using I = IndexTerm;
    auto step = forall(
        "i", index_range(),
        forall("v", elements_of(),
               implies(and_({T(I::variable("i"), E::variable("v")), le(I::variable("i", 1), I::last())}),
                       exists("w", elements_of(),
                              and_({in("Tran", {E::variable("v"), E::variable("w")}),
                                    T(I::variable("i", 1), E::variable("w"))})))));
    // Quantifiers are pushed inward so each conjunct is tested once per binding.
    return exists("v0", elements_of(),
                  and_({T(I::constant(1), E::variable("v0")), in("INIT", {E::variable("v0")}),
                        exists("v1", elements_of(),
                               and_({T(I::last(), E::variable("v1")), in("ACC", {E::variable("v1")}), step}))}));
}

/// Universe of all packed configurations, INIT and ACC singletons, and Tran
/// obtained by running the transition on every decodable configuration
/// (accepting configurations loop). P = max(|x|, 1) + 1.
inline AcceptanceInstance build_acceptance_formula(const ToyMachine& m, const std::string& x) {
    for (char ch : x)
        if (ch != '0' && ch != '1') throw SnlError("input must be a binary string");
    ConfigPacking pack(m, x.size());
    const std::size_t L = pack.length();
    if (L > 20) throw EnumerationGuard("configuration packing of " + std::to_string(L) + " cells is too long");
    AcceptanceInstance out;
    out.size_param = detail::input_cells(x);
    out.space_constant = L - bits_for(out.size_param);
    SemanticModel& model = out.model;
    model.P = detail::input_cells(x) + 1;
    model.functional_T = true;
    model.constants["c"] = static_cast<std::int64_t>(out.space_constant);

    std::vector<std::string> universe;
    for (std::size_t k = 0; k < (std::size_t{1} << L); ++k) {
        std::string s;
        for (std::size_t i = L; i-- > 0;) s += (k >> i & 1) ? '1' : '0';
        universe.push_back(s);
    }
    model.set_universe(universe);

    Config init = detail::initial_config(m);
    Config acc{m.accept, m.accept_head(x.size()), 0, std::vector<std::uint8_t>(m.work_cells, 0)};
    model.add_relation("INIT", 1, {{pack.encode(init)}});
    model.add_relation("ACC", 1, {{pack.encode(acc)}});

    std::vector<std::vector<std::string>> tran;
    for (const auto& s : universe) {
        Config c = pack.decode(s);
        if (c.state >= m.states.size() || c.input_head >= detail::input_cells(x) ||
            c.work_head >= std::max<std::size_t>(m.work_cells, 1))
            continue;
        if (c.state == m.reject) continue;
        if (c.state == m.accept) {
            tran.push_back({s, s});
            continue;
        }
        tran.push_back({s, pack.encode(detail::step(m, x, c))});
    }
    model.add_relation("Tran", 2, tran);
    out.formula = acceptance_formula();
    return out;
}

// ---------------------------------------------------------------------------
// Toy machines

inline ToyMachine accept_all_machine() {
    ToyMachine m;
    m.name = "accept-all";
    m.states = {"acc"};
    m.initial = m.accept = 0;
    m.delta = [](std::size_t s, int, bool, std::uint8_t) { return Action{s, 0, 0, 0}; };
    return m;
}

/// Accepts iff the first input symbol is 1.
inline ToyMachine first_symbol_machine() {
    ToyMachine m;
    m.name = "first-is-1";
    m.states = {"start", "acc", "rej"};
    m.initial = 0;
    m.accept = 1;
    m.reject = 2;
    m.delta = [](std::size_t s, int in, bool, std::uint8_t) {
        if (s != 0) return Action{s, 0, 0, 0};
        return Action{in == 1 ? std::size_t{1} : std::size_t{2}, 0, 0, 0};
    };
    return m;
}

/// Accepts iff the input has an even number of 1s; the running parity is
/// kept in the control state.
inline ToyMachine parity_machine() {
    ToyMachine m;
    m.name = "parity";
    m.states = {"even", "odd", "acc", "rej"};
    m.initial = 0;
    m.accept = 2;
    m.reject = 3;
    m.delta = [](std::size_t s, int in, bool at_last, std::uint8_t) {
        if (s > 1) return Action{s, 0, 0, 0};
        std::size_t p = s ^ (in == 1 ? 1u : 0u);
        if (at_last) return Action{p == 0 ? std::size_t{2} : std::size_t{3}, 0, 0, 0};
        return Action{p, +1, 0, 0};
    };
    m.accept_head = [](std::size_t n) { return std::max<std::size_t>(n, 1) - 1; };
    return m;
}

inline std::vector<ToyMachine> toy_machines() { return {accept_all_machine(), first_symbol_machine(), parity_machine()}; }

inline ToyMachine toy_machine(std::string_view name) {
    for (auto& m : toy_machines())
        if (m.name == name) return m;
    throw SnlError("unknown machine '" + std::string(name) + "' (accept-all, first-is-1, parity)");
}

}  // namespace sublin::snl
