#pragma once

// Line-oriented gate list:
//
//   KIND q[i] q[j] ... [angle] [-> c[k]] [?c[k]=v]
//
// MCX carries its control trigger values in the kind token, e.g. `MCX:10 q[0] q[1] q[2]`
// (control 0 triggers on 1, control 1 on 0). Lines starting with `#` are comments.

#include <charconv>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ecdlp/circuit.hpp"

namespace ecdlp {

namespace detail {

inline std::string format_angle(double a) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", a);
    return buf;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

[[noreturn]] inline void parse_fail(std::size_t line_no, const std::string& why) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": " + why);
}

inline bool parse_index(std::string_view tok, char prefix, long& out) {
    if (tok.size() < 4 || tok[0] != prefix || tok[1] != '[' || tok.back() != ']') return false;
    auto digits = tok.substr(2, tok.size() - 3);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
    return ec == std::errc() && ptr == digits.data() + digits.size() && out >= 0;
}

}  // namespace detail

inline std::string export_gate(const Gate& g) {
    std::string line = gate_name(g.kind);
    if (g.kind == GateKind::MCX) {
        line += ':';
        for (int i = 0; i < g.num_controls(); ++i) line += g.control_active(i) ? '1' : '0';
    }
    for (auto q : g.qubits()) line += " q[" + std::to_string(q) + "]";
    if (g.kind == GateKind::Phase || g.kind == GateKind::CPhase) line += " " + detail::format_angle(g.angle);
    if (g.kind == GateKind::Measure) line += " -> c[" + std::to_string(g.cbit) + "]";
    if (g.conditioned()) line += " ?c[" + std::to_string(g.cond_bit) + "]=" + std::to_string(int(g.cond_value));
    return line;
}

inline std::string export_gatelist(const Circuit& circ, bool with_header = true) {
    std::string out;
    if (with_header) {
        out += "# ecdlp gate list v1: gates=" + std::to_string(circ.size()) +
               " cbits=" + std::to_string(circ.num_cbits()) + "\n";
    }
    for (const auto& g : circ.gates()) {
        out += export_gate(g);
        out += '\n';
    }
    return out;
}

inline Circuit parse_gatelist(std::string_view text) {
    static const std::pair<const char*, GateKind> kinds[] = {
        {"X", GateKind::X},         {"Z", GateKind::Z},         {"H", GateKind::H},
        {"S", GateKind::S},         {"SDG", GateKind::Sdg},     {"T", GateKind::T},
        {"TDG", GateKind::Tdg},     {"CX", GateKind::CX},       {"CZ", GateKind::CZ},
        {"CCX", GateKind::CCX},     {"AND", GateKind::AND},     {"SWAP", GateKind::SWAP},   {"CSWAP", GateKind::CSWAP},
        {"PHASE", GateKind::Phase}, {"CPHASE", GateKind::CPhase}, {"MEASURE", GateKind::Measure},
        {"ALLOC", GateKind::Alloc}, {"DEALLOC", GateKind::Dealloc},
    };
    Circuit circ;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        auto toks = detail::split_ws(line);
        if (toks.empty() || toks[0].front() == '#') {
            if (nl == text.size()) break;
            continue;
        }
        Gate g;
        std::string_view kind_tok = toks[0];
        std::string_view states;
        if (kind_tok.substr(0, 4) == "MCX:") {
            g.kind = GateKind::MCX;
            states = kind_tok.substr(4);
            if (states.empty() || states.size() > 3) detail::parse_fail(line_no, "MCX needs 1..3 control states");
            for (std::size_t i = 0; i < states.size(); ++i) {
                if (states[i] == '1') g.ctrl_state |= static_cast<std::uint8_t>(1u << i);
                else if (states[i] != '0') detail::parse_fail(line_no, "bad MCX control state");
            }
        } else {
            bool found = false;
            for (const auto& [name, k] : kinds) {
                if (kind_tok == name) {
                    g.kind = k;
                    found = true;
                    break;
                }
            }
            if (!found) detail::parse_fail(line_no, "unknown gate kind '" + std::string(kind_tok) + "'");
        }
        std::size_t t = 1;
        std::vector<QubitId> qs;
        long idx = 0;
        while (t < toks.size() && detail::parse_index(toks[t], 'q', idx)) {
            qs.push_back(static_cast<QubitId>(idx));
            ++t;
        }
        std::size_t want = g.kind == GateKind::MCX ? states.size() + 1 : static_cast<std::size_t>(fixed_arity(g.kind));
        if (qs.size() != want) {
            detail::parse_fail(line_no, "arity: " + std::string(gate_name(g.kind)) + " takes " + std::to_string(want) +
                                            " qubits, got " + std::to_string(qs.size()));
        }
        g.arity = static_cast<std::uint8_t>(qs.size());
        std::copy(qs.begin(), qs.end(), g.q.begin());
        if (g.kind == GateKind::Phase || g.kind == GateKind::CPhase) {
            if (t >= toks.size()) detail::parse_fail(line_no, "missing angle");
            std::string s(toks[t]);
            char* end = nullptr;
            g.angle = std::strtod(s.c_str(), &end);
            if (end != s.c_str() + s.size()) detail::parse_fail(line_no, "bad angle '" + s + "'");
            ++t;
        }
        if (g.kind == GateKind::Measure) {
            if (t + 1 >= toks.size() || toks[t] != "->" || !detail::parse_index(toks[t + 1], 'c', idx)) {
                detail::parse_fail(line_no, "MEASURE needs '-> c[k]'");
            }
            g.cbit = static_cast<std::int32_t>(idx);
            t += 2;
        }
        if (t < toks.size() && toks[t].size() > 1 && toks[t][0] == '?') {
            std::string_view cond = toks[t].substr(1);
            auto eq = cond.find('=');
            if (eq == std::string_view::npos || !detail::parse_index(cond.substr(0, eq), 'c', idx) ||
                (cond.substr(eq + 1) != "0" && cond.substr(eq + 1) != "1")) {
                detail::parse_fail(line_no, "bad classical condition");
            }
            g.cond_bit = static_cast<std::int32_t>(idx);
            g.cond_value = cond.substr(eq + 1) == "1" ? 1 : 0;
            ++t;
        }
        if (t != toks.size()) detail::parse_fail(line_no, "unexpected token '" + std::string(toks[t]) + "'");
        try {
            circ.append(g);
        } catch (const Error& e) {
            detail::parse_fail(line_no, e.what());
        }
        if (nl == text.size()) break;
    }
    return circ;
}

}  // namespace ecdlp
