#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "circuit.hpp"

namespace qecstab {

// Single-qubit Pauli component mask: bit 0 = X part, bit 1 = Z part.
enum class pauli : uint8_t { x = 1, z = 2, y = 3 };

struct pauli_term {
    int32_t q = -1;
    pauli p = pauli::x;
    friend bool operator==(const pauli_term&, const pauli_term&) = default;
};

enum class fault_kind : uint8_t { gate, reset, meas_flip, classification, idle };

// One independently firing fault.  Pauli faults act immediately before
// `layer` (layers.size() means after the whole program).  A classification
// fault toggles the record bit instead and touches no qubit.
struct error_mechanism {
    double probability = 0;
    uint32_t layer = 0;
    fault_kind kind = fault_kind::gate;
    std::vector<pauli_term> paulis;
    int32_t record = -1;
    friend bool operator==(const error_mechanism&, const error_mechanism&) = default;
};

// Circuit-level noise of strength p with every rate tied to it: gate
// depolarising, reset and measurement flips, and idle decoherence whose
// T1/T2 scale inversely with p (halving p doubles the coherence times).
struct noise_model {
    double p = 0;
    double p_ref = 0.01;
    double t1_ref_ns = 30000;
    double t2_ref_ns = 30000;
    // The 5p measurement budget splits into a bit flip immediately before
    // readout (this fraction of it, default 4p) and a record-only
    // classification flip (the rest, default p).
    double meas_quantum_frac = 0.8;
    double x_cond_depol = 0;  // conditional X is noiseless unless configured
};

struct pauli_probs {
    double px = 0, py = 0, pz = 0;
};

// Twirled idle channel for t nanoseconds of amplitude damping (T1) and
// dephasing (T2):
//   pX = pY = (1 - e^{-t/T1}) / 4
//   pZ = (1 - e^{-t/T2}) / 2 - (1 - e^{-t/T1}) / 4
// Requires t >= 0, T1 > 0, T2 > 0, T2 <= 2*T1.  The last bound is exactly
// what keeps pZ >= 0 for all t, so a negative pZ past roundoff scale is
// rejected as corrupt input rather than clamped silently.
inline pauli_probs idle_pauli_probs(double t_ns, double t1_ns, double t2_ns) {
    if (!(t_ns >= 0)) throw std::invalid_argument("idle_pauli_probs: negative duration");
    if (!(t1_ns > 0) || !(t2_ns > 0))
        throw std::invalid_argument("idle_pauli_probs: coherence times must be positive");
    if (t2_ns > 2 * t1_ns) throw std::invalid_argument("idle_pauli_probs: T2 > 2*T1");
    double px = -std::expm1(-t_ns / t1_ns) / 4;
    double pz = -std::expm1(-t_ns / t2_ns) / 2 - px;
    if (pz < 0) {
        if (pz < -1e-15) throw std::invalid_argument("idle_pauli_probs: negative pZ");
        pz = 0;
    }
    return {px, px, pz};
}

struct coherence_times {
    double t1_ns = 0, t2_ns = 0;
};

inline coherence_times scaled_coherence(const noise_model& m) {
    if (!(m.p > 0)) throw std::invalid_argument("scaled_coherence: p must be positive");
    double k = m.p_ref / m.p;
    return {k * m.t1_ref_ns, k * m.t2_ref_ns};
}

// Attach the fault list to a lowered program:
//   - p/10 depolarising after every single-qubit rotation (3 terms, p/30 each)
//   - p depolarising after every CZ (15 two-qubit terms, p/15 each)
//   - 2p bit flip after every RZ
//   - per MZ, a bit flip immediately before readout plus a record-only
//     classification flip (5p split per meas_quantum_frac)
//   - idle twirl per (qubit, layer) it sits out, for the layer duration
// Initial resets and final measurements are ordinary RZ/MZ ops and carry the
// same noise.  For pipelined programs the serialised layer sequence
// overstates real idle time, so each qubit's idle inside a round span is
// rescaled to its physical budget (round period minus the time it spends in
// ops), spread over its idle layers proportionally to layer duration.
inline std::vector<error_mechanism> apply_noise(const circuit_program& prog,
                                                const noise_model& m) {
    if (!is_lowered(prog)) throw std::invalid_argument("apply_noise: program must be lowered");
    std::vector<error_mechanism> out;
    if (m.p == 0) return out;
    if (!(m.p > 0) || 5 * m.p > 1)
        throw std::invalid_argument("apply_noise: p out of range");
    if (!(m.meas_quantum_frac >= 0) || m.meas_quantum_frac > 1)
        throw std::invalid_argument("apply_noise: meas_quantum_frac out of range");
    if (!(m.x_cond_depol >= 0) || m.x_cond_depol > 1)
        throw std::invalid_argument("apply_noise: x_cond_depol out of range");

    const size_t nl = prog.layers.size();
    std::vector<std::vector<char>> busy(nl, std::vector<char>(prog.n_qubits, 0));
    for (size_t li = 0; li < nl; ++li)
        for (const operation& op : prog.layers[li].ops) {
            busy[li][op.q0] = 1;
            if (is_two_qubit(op.kind)) busy[li][op.q1] = 1;
        }

    // Idle rescale factor per (round span, qubit); 1 outside spans and for
    // serialised schedules.
    std::vector<std::vector<double>> idle_scale;
    std::vector<int32_t> span_of(nl, -1);
    if (prog.pipelined_rounds) {
        idle_scale.assign(prog.round_spans.size(), std::vector<double>(prog.n_qubits, 1.0));
        for (size_t s = 0; s < prog.round_spans.size(); ++s) {
            auto [a, b] = prog.round_spans[s];
            for (uint32_t li = a; li < b; ++li) span_of[li] = static_cast<int32_t>(s);
            for (uint32_t q = 0; q < prog.n_qubits; ++q) {
                int64_t on = 0, off = 0;
                for (uint32_t li = a; li < b; ++li)
                    (busy[li][q] ? on : off) += prog.layers[li].duration_ns;
                int64_t budget = prog.round_duration_ns - on;
                if (budget < 0)
                    throw std::invalid_argument("apply_noise: qubit " + std::to_string(q) +
                                                " busier than the pipelined round period");
                idle_scale[s][q] = off > 0 ? double(budget) / double(off) : 0.0;
            }
        }
    }

    coherence_times ct = scaled_coherence(m);
    const double p1 = m.p / 30;  // per single-qubit depolarising term
    const double p2 = m.p / 15;  // per two-qubit depolarising term
    const double p_rz = 2 * m.p;
    const double p_mq = 5 * m.p * m.meas_quantum_frac;
    const double p_mc = 5 * m.p * (1 - m.meas_quantum_frac);
    constexpr pauli one_q[3] = {pauli::x, pauli::y, pauli::z};
    constexpr uint8_t code[4] = {0, 1, 3, 2};  // I X Y Z enumeration order

    auto add1 = [&](uint32_t at, fault_kind k, int32_t q, pauli pl, double pr) {
        if (pr > 0) out.push_back({pr, at, k, {{q, pl}}, -1});
    };

    for (uint32_t li = 0; li < nl; ++li) {
        const layer& l = prog.layers[li];
        for (const operation& op : l.ops)
            if (op.kind == op_kind::mz) {
                add1(li, fault_kind::meas_flip, op.q0, pauli::x, p_mq);
                if (p_mc > 0)
                    out.push_back({p_mc, li, fault_kind::classification, {}, op.record});
            }
        for (const operation& op : l.ops) switch (op.kind) {
                case op_kind::sqrt_x:
                case op_kind::sqrt_x_dag:
                case op_kind::s:
                case op_kind::s_dag:
                    for (pauli pl : one_q) add1(li + 1, fault_kind::gate, op.q0, pl, p1);
                    break;
                case op_kind::cz:
                    for (int ia = 0; ia < 4; ++ia)
                        for (int ib = 0; ib < 4; ++ib) {
                            if (ia == 0 && ib == 0) continue;
                            std::vector<pauli_term> ps;
                            if (ia) ps.push_back({op.q0, pauli(code[ia])});
                            if (ib) ps.push_back({op.q1, pauli(code[ib])});
                            out.push_back({p2, li + 1, fault_kind::gate, std::move(ps), -1});
                        }
                    break;
                case op_kind::rz:
                    add1(li + 1, fault_kind::reset, op.q0, pauli::x, p_rz);
                    break;
                case op_kind::x_cond:
                    for (pauli pl : one_q)
                        add1(li + 1, fault_kind::gate, op.q0, pl, m.x_cond_depol / 3);
                    break;
                default:
                    break;  // mz handled above
            }
        if (l.duration_ns > 0)
            for (uint32_t q = 0; q < prog.n_qubits; ++q) {
                if (busy[li][q]) continue;
                double scale = span_of[li] >= 0 ? idle_scale[span_of[li]][q] : 1.0;
                double t = l.duration_ns * scale;
                if (t <= 0) continue;
                pauli_probs ip = idle_pauli_probs(t, ct.t1_ns, ct.t2_ns);
                add1(li + 1, fault_kind::idle, q, pauli::x, ip.px);
                add1(li + 1, fault_kind::idle, q, pauli::y, ip.py);
                add1(li + 1, fault_kind::idle, q, pauli::z, ip.pz);
            }
    }
    return out;
}

}  // namespace qecstab
