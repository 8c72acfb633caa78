#pragma once

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "common.hpp"

namespace qecstab {

// One instruction per line.  Canonical output round-trips bit-exactly:
//   QUBITS <n> / Q <id> <x> <y> / ROUNDS <n> / ROUND_NS <ns> / PIPELINED 1 /
//   SPAN <a> <b> / LAYER <ns> / <KIND> <q> [<q1>] [r<k>] [@<ns>] /
//   DETECTOR (<x>,<y>,<t>) r<k>... / OBSERVABLE <label> r<k>...
// Durations are printed only when they differ from the kind's default.

inline std::string to_text(const circuit_program& p) {
    std::string out;
    auto line = [&](const std::string& s) {
        out += s;
        out += '\n';
    };
    line("QUBITS " + std::to_string(p.n_qubits));
    for (size_t i = 0; i < p.coords.size(); ++i)
        line("Q " + std::to_string(i) + " " + to_string(p.coords[i]));
    line("ROUNDS " + std::to_string(p.rounds));
    line("ROUND_NS " + std::to_string(p.round_duration_ns));
    if (p.pipelined_rounds) line("PIPELINED 1");
    for (auto [a, b] : p.round_spans)
        line("SPAN " + std::to_string(a) + " " + std::to_string(b));
    for (const layer& l : p.layers) {
        line("LAYER " + std::to_string(l.duration_ns));
        for (const operation& op : l.ops) {
            std::string s = op_name(op.kind);
            s += " " + std::to_string(op.q0);
            if (is_two_qubit(op.kind)) s += " " + std::to_string(op.q1);
            if (op.kind == op_kind::mz || op.kind == op_kind::x_cond)
                s += " r" + std::to_string(op.record);
            if (op.duration_ns != default_duration_ns(op.kind))
                s += " @" + std::to_string(op.duration_ns);
            line(s);
        }
    }
    for (const detector& d : p.detectors) {
        std::string s = "DETECTOR (" + to_string(d.x) + "," + to_string(d.y) + "," +
                        to_string(d.t) + ")";
        for (uint32_t r : d.records) s += " r" + std::to_string(r);
        line(s);
    }
    for (const observable& o : p.observables) {
        std::string s = "OBSERVABLE " + o.label;
        for (uint32_t r : o.records) s += " r" + std::to_string(r);
        line(s);
    }
    return out;
}

namespace detail {

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

inline int64_t parse_int(const std::string& s, const char* what) {
    size_t pos = 0;
    int64_t v;
    try {
        v = std::stoll(s, &pos);
    } catch (...) {
        throw std::runtime_error(std::string("bad ") + what + ": " + s);
    }
    if (pos != s.size()) throw std::runtime_error(std::string("bad ") + what + ": " + s);
    return v;
}

inline uint32_t parse_record_token(const std::string& s) {
    if (s.size() < 2 || s[0] != 'r')
        throw std::runtime_error("expected record token rN, got: " + s);
    return static_cast<uint32_t>(parse_int(s.substr(1), "record index"));
}

}  // namespace detail

inline circuit_program from_text(const std::string& text) {
    circuit_program p;
    std::istringstream in(text);
    std::string raw;
    size_t lineno = 0;
    bool have_layer = false;
    int32_t next_record = 0;
    auto fail = [&](const std::string& msg) -> void {
        throw std::runtime_error("line " + std::to_string(lineno) + ": " + msg);
    };

    while (std::getline(in, raw)) {
        ++lineno;
        size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.resize(hash);
        std::vector<std::string> tok = detail::split_ws(raw);
        if (tok.empty()) continue;
        const std::string& head = tok[0];

        if (head == "QUBITS") {
            if (tok.size() != 2) fail("QUBITS wants one argument");
            p.n_qubits = static_cast<uint32_t>(detail::parse_int(tok[1], "qubit count"));
        } else if (head == "Q") {
            if (tok.size() != 4) fail("Q wants id x y");
            size_t id = static_cast<size_t>(detail::parse_int(tok[1], "qubit id"));
            if (id != p.coords.size()) fail("Q lines must be in id order");
            p.coords.push_back(point{q4_parse(tok[2]), q4_parse(tok[3])});
        } else if (head == "ROUNDS") {
            p.rounds = static_cast<uint32_t>(detail::parse_int(tok.at(1), "rounds"));
        } else if (head == "ROUND_NS") {
            p.round_duration_ns = detail::parse_int(tok.at(1), "round duration");
        } else if (head == "PIPELINED") {
            p.pipelined_rounds = detail::parse_int(tok.at(1), "pipelined flag") != 0;
        } else if (head == "SPAN") {
            if (tok.size() != 3) fail("SPAN wants begin end");
            p.round_spans.emplace_back(
                static_cast<uint32_t>(detail::parse_int(tok[1], "span begin")),
                static_cast<uint32_t>(detail::parse_int(tok[2], "span end")));
        } else if (head == "LAYER") {
            if (tok.size() != 2) fail("LAYER wants duration");
            layer l;
            l.duration_ns = static_cast<int32_t>(detail::parse_int(tok[1], "layer duration"));
            p.layers.push_back(std::move(l));
            have_layer = true;
        } else if (head == "DETECTOR") {
            // DETECTOR (x,y,t) r...
            if (tok.size() < 3) fail("DETECTOR wants coords and records");
            const std::string& c = tok[1];
            if (c.size() < 2 || c.front() != '(' || c.back() != ')') fail("bad detector coords");
            std::string inner = c.substr(1, c.size() - 2);
            size_t c1 = inner.find(','), c2 = inner.rfind(',');
            if (c1 == std::string::npos || c2 == c1) fail("detector coords want x,y,t");
            detector d;
            d.x = q4_parse(inner.substr(0, c1));
            d.y = q4_parse(inner.substr(c1 + 1, c2 - c1 - 1));
            d.t = q4_parse(inner.substr(c2 + 1));
            for (size_t i = 2; i < tok.size(); ++i)
                d.records.push_back(detail::parse_record_token(tok[i]));
            p.detectors.push_back(std::move(d));
        } else if (head == "OBSERVABLE") {
            if (tok.size() < 3) fail("OBSERVABLE wants label and records");
            observable o;
            o.label = tok[1];
            for (size_t i = 2; i < tok.size(); ++i)
                o.records.push_back(detail::parse_record_token(tok[i]));
            p.observables.push_back(std::move(o));
        } else {
            // An operation line.
            op_kind kind;
            if (head == "SQRT_X") kind = op_kind::sqrt_x;
            else if (head == "SQRT_X_DAG") kind = op_kind::sqrt_x_dag;
            else if (head == "S") kind = op_kind::s;
            else if (head == "S_DAG") kind = op_kind::s_dag;
            else if (head == "CZ") kind = op_kind::cz;
            else if (head == "CX") kind = op_kind::cx;
            else if (head == "SWAP") kind = op_kind::swap;
            else if (head == "MZ") kind = op_kind::mz;
            else if (head == "RZ") kind = op_kind::rz;
            else if (head == "X_COND") kind = op_kind::x_cond;
            else {
                fail("unknown instruction " + head);
                continue;
            }
            if (!have_layer) fail("operation before first LAYER");
            operation op;
            op.kind = kind;
            op.duration_ns = default_duration_ns(kind);
            size_t i = 1;
            if (i >= tok.size()) fail("missing operand");
            op.q0 = static_cast<int32_t>(detail::parse_int(tok[i++], "qubit"));
            if (is_two_qubit(kind)) {
                if (i >= tok.size()) fail("missing second operand");
                op.q1 = static_cast<int32_t>(detail::parse_int(tok[i++], "qubit"));
            }
            if (kind == op_kind::mz || kind == op_kind::x_cond) {
                if (i >= tok.size() || tok[i][0] != 'r') fail("missing record token");
                op.record = static_cast<int32_t>(detail::parse_record_token(tok[i++]));
                if (kind == op_kind::mz) {
                    if (op.record != next_record) fail("MZ record out of order");
                    ++next_record;
                }
            }
            if (i < tok.size() && tok[i][0] == '@') {
                op.duration_ns =
                    static_cast<int32_t>(detail::parse_int(tok[i].substr(1), "duration"));
                ++i;
            }
            if (i != tok.size()) fail("trailing tokens on operation line");
            p.layers.back().ops.push_back(op);
        }
    }
    return p;
}

}  // namespace qecstab
