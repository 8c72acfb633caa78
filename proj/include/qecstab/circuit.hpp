#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "common.hpp"

namespace qecstab {

enum class op_kind : uint8_t {
    sqrt_x,
    sqrt_x_dag,
    s,
    s_dag,
    cz,
    cx,
    swap,
    mz,
    rz,
    x_cond,
};

inline constexpr bool is_two_qubit(op_kind k) {
    return k == op_kind::cz || k == op_kind::cx || k == op_kind::swap;
}
inline constexpr bool is_native(op_kind k) {
    return k != op_kind::cx && k != op_kind::swap;
}

// Default durations in ns.  CX/SWAP carry the duration of their lowered form
// so total_duration is invariant under lowering.
inline constexpr int32_t default_duration_ns(op_kind k) {
    switch (k) {
        case op_kind::cz: return 40;
        case op_kind::cx: return 120;
        case op_kind::swap: return 180;
        case op_kind::mz: return 600;
        case op_kind::rz: return 500;
        default: return 20;  // single-qubit rotations and conditional X
    }
}

inline const char* op_name(op_kind k) {
    switch (k) {
        case op_kind::sqrt_x: return "SQRT_X";
        case op_kind::sqrt_x_dag: return "SQRT_X_DAG";
        case op_kind::s: return "S";
        case op_kind::s_dag: return "S_DAG";
        case op_kind::cz: return "CZ";
        case op_kind::cx: return "CX";
        case op_kind::swap: return "SWAP";
        case op_kind::mz: return "MZ";
        case op_kind::rz: return "RZ";
        case op_kind::x_cond: return "X_COND";
    }
    return "?";
}

struct operation {
    op_kind kind;
    int32_t q0 = -1;
    int32_t q1 = -1;      // second operand of two-qubit kinds
    int32_t record = -1;  // mz: record slot produced; x_cond: record conditioned on
    int32_t duration_ns = 0;

    friend bool operator==(const operation& a, const operation& b) {
        return a.kind == b.kind && a.q0 == b.q0 && a.q1 == b.q1 && a.record == b.record &&
               a.duration_ns == b.duration_ns;
    }
};

inline operation op1(op_kind k, int32_t q, int32_t dur = -1) {
    return operation{k, q, -1, -1, dur >= 0 ? dur : default_duration_ns(k)};
}
inline operation op2(op_kind k, int32_t a, int32_t b) {
    return operation{k, a, b, -1, default_duration_ns(k)};
}

struct layer {
    std::vector<operation> ops;
    int32_t duration_ns = 0;  // = max op duration; explicit so empty wait layers are possible

    friend bool operator==(const layer& a, const layer& b) {
        return a.duration_ns == b.duration_ns && a.ops == b.ops;
    }
};

inline layer make_layer(std::vector<operation> ops) {
    layer l;
    l.ops = std::move(ops);
    for (const operation& op : l.ops) l.duration_ns = std::max(l.duration_ns, op.duration_ns);
    return l;
}

struct detector {
    std::vector<uint32_t> records;  // sorted ascending; parity is the detector value
    q4 x, y, t;

    friend bool operator==(const detector& a, const detector& b) {
        return a.records == b.records && a.x == b.x && a.y == b.y && a.t == b.t;
    }
};

struct observable {
    std::string label;  // no whitespace
    std::vector<uint32_t> records;

    friend bool operator==(const observable& a, const observable& b) {
        return a.label == b.label && a.records == b.records;
    }
};

struct circuit_program {
    uint32_t n_qubits = 0;
    std::vector<point> coords;  // size n_qubits, or empty if geometry-free
    std::vector<layer> layers;
    std::vector<detector> detectors;
    std::vector<observable> observables;

    uint32_t rounds = 0;
    int64_t round_duration_ns = 0;
    // One [begin,end) layer range per repeating round.  When pipelined_rounds
    // is set the emitted layers serialise a schedule whose physical period is
    // round_duration_ns, so per-round layer sums may exceed it.
    std::vector<std::pair<uint32_t, uint32_t>> round_spans;
    bool pipelined_rounds = false;

    friend bool operator==(const circuit_program& a, const circuit_program& b) {
        return a.n_qubits == b.n_qubits && a.coords == b.coords && a.layers == b.layers &&
               a.detectors == b.detectors && a.observables == b.observables &&
               a.rounds == b.rounds && a.round_duration_ns == b.round_duration_ns &&
               a.round_spans == b.round_spans && a.pipelined_rounds == b.pipelined_rounds;
    }
};

inline int64_t total_duration_ns(const circuit_program& p) {
    int64_t t = 0;
    for (const layer& l : p.layers) t += l.duration_ns;
    return t;
}

inline uint32_t record_count(const circuit_program& p) {
    uint32_t n = 0;
    for (const layer& l : p.layers)
        for (const operation& op : l.ops)
            if (op.kind == op_kind::mz) ++n;
    return n;
}

inline bool is_lowered(const circuit_program& p) {
    for (const layer& l : p.layers)
        for (const operation& op : l.ops)
            if (!is_native(op.kind)) return false;
    return true;
}

// Structural invariants only; noiseless determinism of detectors/observables
// is checked by validate() (validate.hpp), which needs the tableau engine.
inline std::vector<std::string> validate_structure(const circuit_program& p) {
    std::vector<std::string> bad;
    auto complain = [&](std::string msg) { bad.push_back(std::move(msg)); };

    if (!p.coords.empty() && p.coords.size() != p.n_qubits)
        complain("coords size != qubit count");
    {
        std::set<point> seen;
        for (const point& c : p.coords)
            if (!seen.insert(c).second)
                complain("duplicate qubit coordinate " + to_string(c));
    }

    int32_t next_record = 0;
    for (size_t li = 0; li < p.layers.size(); ++li) {
        const layer& l = p.layers[li];
        std::set<int32_t> busy;
        int32_t max_dur = 0;
        for (const operation& op : l.ops) {
            std::string where = "layer " + std::to_string(li) + " " + op_name(op.kind);
            if (op.q0 < 0 || op.q0 >= static_cast<int32_t>(p.n_qubits))
                complain(where + ": operand out of range");
            if (is_two_qubit(op.kind)) {
                if (op.q1 < 0 || op.q1 >= static_cast<int32_t>(p.n_qubits) || op.q1 == op.q0)
                    complain(where + ": bad second operand");
                if (!busy.insert(op.q1).second)
                    complain(where + ": qubit " + std::to_string(op.q1) + " used twice");
            } else if (op.q1 != -1) {
                complain(where + ": unexpected second operand");
            }
            if (!busy.insert(op.q0).second)
                complain(where + ": qubit " + std::to_string(op.q0) + " used twice");
            if (op.kind == op_kind::mz) {
                if (op.record != next_record)
                    complain(where + ": record slot " + std::to_string(op.record) +
                             " != expected " + std::to_string(next_record));
                ++next_record;
            } else if (op.kind == op_kind::x_cond) {
                if (op.record < 0 || op.record >= next_record)
                    complain(where + ": condition references unproduced record");
            } else if (op.record != -1) {
                complain(where + ": unexpected record field");
            }
            if (op.duration_ns < 0) complain(where + ": negative duration");
            max_dur = std::max(max_dur, op.duration_ns);
        }
        if (!l.ops.empty() && l.duration_ns != max_dur)
            complain("layer " + std::to_string(li) + ": duration " +
                     std::to_string(l.duration_ns) + " != max op duration " +
                     std::to_string(max_dur));
    }

    for (size_t i = 0; i < p.detectors.size(); ++i) {
        const detector& d = p.detectors[i];
        if (d.records.empty()) complain("detector " + std::to_string(i) + ": empty record set");
        if (!std::is_sorted(d.records.begin(), d.records.end()) ||
            std::adjacent_find(d.records.begin(), d.records.end()) != d.records.end())
            complain("detector " + std::to_string(i) + ": records not sorted unique");
        for (uint32_t r : d.records)
            if (r >= static_cast<uint32_t>(next_record))
                complain("detector " + std::to_string(i) + ": record out of range");
    }
    for (size_t i = 0; i < p.observables.size(); ++i) {
        const observable& o = p.observables[i];
        if (o.records.empty())
            complain("observable " + std::to_string(i) + ": empty record set");
        if (!std::is_sorted(o.records.begin(), o.records.end()) ||
            std::adjacent_find(o.records.begin(), o.records.end()) != o.records.end())
            complain("observable " + std::to_string(i) + ": records not sorted unique");
        for (uint32_t r : o.records)
            if (r >= static_cast<uint32_t>(next_record))
                complain("observable " + std::to_string(i) + ": record out of range");
        if (o.label.empty() || o.label.find_first_of(" \t\n") != std::string::npos)
            complain("observable " + std::to_string(i) + ": bad label");
    }

    if (p.round_spans.size() != p.rounds && !p.round_spans.empty())
        complain("round span count != rounds");
    for (auto [a, b] : p.round_spans) {
        if (a > b || b > p.layers.size()) {
            complain("round span out of range");
            continue;
        }
        int64_t sum = 0;
        for (uint32_t i = a; i < b; ++i) sum += p.layers[i].duration_ns;
        if (!p.pipelined_rounds && sum != p.round_duration_ns)
            complain("round span [" + std::to_string(a) + "," + std::to_string(b) +
                     ") sums to " + std::to_string(sum) + " != round duration " +
                     std::to_string(p.round_duration_ns));
        if (p.pipelined_rounds && sum < p.round_duration_ns)
            complain("pipelined round span shorter than declared period");
    }
    return bad;
}

}  // namespace qecstab
