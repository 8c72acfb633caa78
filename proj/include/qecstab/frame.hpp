#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "circuit.hpp"
#include "noise.hpp"

namespace qecstab {

// Pauli-frame deviation of a batch of shots against the noiseless reference
// run, one bit per shot, 64 shots per word.  A set bit means "this shot
// deviates here".  Record rows hold classified-outcome flips, which makes
// conditional-X feedback exactly "XOR the referenced record row into the X
// frame": a flipped classification misfires the feedback relative to the
// reference run.
struct frame_batch {
    uint32_t words = 0;
    std::vector<uint64_t> x, z, rec;

    void reset(uint32_t n_qubits, uint32_t n_records, uint32_t w) {
        words = w;
        x.assign(size_t(n_qubits) * w, 0);
        z.assign(size_t(n_qubits) * w, 0);
        rec.assign(size_t(n_records) * w, 0);
    }
};

namespace detail {

inline void xor_rows(uint64_t* dst, const uint64_t* src, uint32_t words) {
    for (uint32_t w = 0; w < words; ++w) dst[w] ^= src[w];
}

}  // namespace detail

// Walk the program once for a whole batch, pulling fault masks from
// fire(mech_index, dst): it fills dst (words wide) with the shots where that
// mechanism acts and returns whether any bit is set.  Pauli faults land
// immediately before their anchor layer; classification flips land at the
// end of theirs, after the MZ wrote the record row they toggle.
// Frame rules per op: sqrt_x swaps Z and Y components (x ^= z), s swaps X
// and Y (z ^= x), cz cross-couples (z_a ^= x_b, z_b ^= x_a), mz emits the X
// frame as the record flip and forgets the Z frame, rz forgets both.
template <class Fire>
inline void run_frames(const circuit_program& p, const std::vector<error_mechanism>& mechs,
                       frame_batch& fb, Fire&& fire) {
    const uint32_t W = fb.words;
    if (fb.x.size() != size_t(p.n_qubits) * W || fb.rec.size() != size_t(record_count(p)) * W)
        throw std::invalid_argument("run_frames: frame batch shape mismatch");

    const size_t nl = p.layers.size();
    std::vector<std::vector<uint32_t>> pauli_at(nl + 1), class_at(nl + 1);
    for (uint32_t i = 0; i < mechs.size(); ++i) {
        if (mechs[i].layer > nl) throw std::invalid_argument("run_frames: fault past program end");
        (mechs[i].record >= 0 ? class_at : pauli_at)[mechs[i].layer].push_back(i);
    }

    std::vector<uint64_t> col(W);
    auto xr = [&](int32_t q) { return fb.x.data() + size_t(q) * W; };
    auto zr = [&](int32_t q) { return fb.z.data() + size_t(q) * W; };
    auto rr = [&](int32_t r) { return fb.rec.data() + size_t(r) * W; };

    for (size_t li = 0; li <= nl; ++li) {
        for (uint32_t i : pauli_at[li]) {
            if (!fire(i, col.data())) continue;
            for (const pauli_term& t : mechs[i].paulis) {
                if (uint8_t(t.p) & 1) detail::xor_rows(xr(t.q), col.data(), W);
                if (uint8_t(t.p) & 2) detail::xor_rows(zr(t.q), col.data(), W);
            }
        }
        if (li == nl) break;
        for (const operation& op : p.layers[li].ops) switch (op.kind) {
                case op_kind::sqrt_x:
                case op_kind::sqrt_x_dag:
                    detail::xor_rows(xr(op.q0), zr(op.q0), W);
                    break;
                case op_kind::s:
                case op_kind::s_dag:
                    detail::xor_rows(zr(op.q0), xr(op.q0), W);
                    break;
                case op_kind::cz:
                    detail::xor_rows(zr(op.q0), xr(op.q1), W);
                    detail::xor_rows(zr(op.q1), xr(op.q0), W);
                    break;
                case op_kind::cx:
                    detail::xor_rows(xr(op.q1), xr(op.q0), W);
                    detail::xor_rows(zr(op.q0), zr(op.q1), W);
                    break;
                case op_kind::swap:
                    std::swap_ranges(xr(op.q0), xr(op.q0) + W, xr(op.q1));
                    std::swap_ranges(zr(op.q0), zr(op.q0) + W, zr(op.q1));
                    break;
                case op_kind::mz:
                    std::copy(xr(op.q0), xr(op.q0) + W, rr(op.record));
                    std::fill(zr(op.q0), zr(op.q0) + W, 0);
                    break;
                case op_kind::rz:
                    std::fill(xr(op.q0), xr(op.q0) + W, 0);
                    std::fill(zr(op.q0), zr(op.q0) + W, 0);
                    break;
                case op_kind::x_cond:
                    detail::xor_rows(xr(op.q0), rr(op.record), W);
                    break;
            }
        for (uint32_t i : class_at[li])
            if (fire(i, col.data())) detail::xor_rows(rr(mechs[i].record), col.data(), W);
    }
}

// Per-shot parity of a record set.
inline void record_parity(const frame_batch& fb, const std::vector<uint32_t>& records,
                          uint64_t* out) {
    std::fill(out, out + fb.words, 0);
    for (uint32_t r : records) detail::xor_rows(out, fb.rec.data() + size_t(r) * fb.words, fb.words);
}

}  // namespace qecstab
