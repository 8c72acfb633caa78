#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "circuit.hpp"
#include "gf2.hpp"

namespace qecstab {

// Stabilizer tableau over n qubits with symbolic phases: each row phase is an
// affine GF(2) expression over the random measurement outcomes drawn so far.
// Expression bit 0 is the constant term; bits 1.. are outcome variables.
// Rows 0..n-1 are destabilizers, n..2n-1 stabilizers, initial state |0...0>.
//
// This is the reference engine: detector/observable determinism, scheme
// equivalences and lowering correctness are all judged against it.  It is
// exact and slow-ish; bulk sampling uses the Pauli-frame engine instead.
class symbolic_tableau {
  public:
    explicit symbolic_tableau(uint32_t n)
        : n_(n), words_((n + 63) / 64), x_(2 * size_t(n) * words_, 0),
          z_(2 * size_t(n) * words_, 0), phase_(2 * n) {
        for (uint32_t i = 0; i < n_; ++i) {
            set_bit(x_, i, i);           // destabilizer i = X_i
            set_bit(z_, n_ + i, i);      // stabilizer i = Z_i
        }
    }

    uint32_t n_qubits() const { return n_; }
    uint32_t random_bits_used() const { return next_bit_ - 1; }
    const std::vector<bitvec>& records() const { return records_; }

    // --- native gates -----------------------------------------------------

    void sqrt_x(int32_t q) {
        // X -> X, Z -> Y, Y -> -Z
        for_rows([&](size_t r) {
            bool x = get_bit(x_, r, q), z = get_bit(z_, r, q);
            if (x && z) phase_[r].flip(0);
            if (z) flip_bit(x_, r, q);
        });
    }
    void sqrt_x_dag(int32_t q) {
        // X -> X, Z -> -Y, Y -> Z
        for_rows([&](size_t r) {
            bool x = get_bit(x_, r, q), z = get_bit(z_, r, q);
            if (!x && z) phase_[r].flip(0);
            if (z) flip_bit(x_, r, q);
        });
    }
    void s(int32_t q) {
        // X -> Y, Y -> -X, Z -> Z
        for_rows([&](size_t r) {
            bool x = get_bit(x_, r, q), z = get_bit(z_, r, q);
            if (x && z) phase_[r].flip(0);
            if (x) flip_bit(z_, r, q);
        });
    }
    void s_dag(int32_t q) {
        // X -> -Y, Y -> X, Z -> Z
        for_rows([&](size_t r) {
            bool x = get_bit(x_, r, q), z = get_bit(z_, r, q);
            if (x && !z) phase_[r].flip(0);
            if (x) flip_bit(z_, r, q);
        });
    }
    void cz(int32_t a, int32_t b) {
        for_rows([&](size_t r) {
            bool xa = get_bit(x_, r, a), za = get_bit(z_, r, a);
            bool xb = get_bit(x_, r, b), zb = get_bit(z_, r, b);
            if (xa && xb && (za ^ zb)) phase_[r].flip(0);
            if (xb) flip_bit(z_, r, a);
            if (xa) flip_bit(z_, r, b);
        });
    }
    void cx(int32_t a, int32_t b) {
        for_rows([&](size_t r) {
            bool xa = get_bit(x_, r, a), za = get_bit(z_, r, a);
            bool xb = get_bit(x_, r, b), zb = get_bit(z_, r, b);
            if (xa && zb && (xb == za)) phase_[r].flip(0);
            if (xa) flip_bit(x_, r, b);
            if (zb) flip_bit(z_, r, a);
        });
    }
    void swap_qubits(int32_t a, int32_t b) {
        for_rows([&](size_t r) {
            bool xa = get_bit(x_, r, a), xb = get_bit(x_, r, b);
            if (xa != xb) {
                flip_bit(x_, r, a);
                flip_bit(x_, r, b);
            }
            bool za = get_bit(z_, r, a), zb = get_bit(z_, r, b);
            if (za != zb) {
                flip_bit(z_, r, a);
                flip_bit(z_, r, b);
            }
        });
    }

    // --- measurement, reset, feedback --------------------------------------

    // Z-basis measurement; returns the outcome expression.  Does not record.
    bitvec measure(int32_t q) {
        size_t p = npos_;
        for (size_t r = n_; r < 2 * size_t(n_); ++r)
            if (get_bit(x_, r, q)) {
                p = r;
                break;
            }
        if (p != npos_) {
            // Random outcome: fresh variable.
            for (size_t r = 0; r < 2 * size_t(n_); ++r)
                if (r != p && r != p - n_ && get_bit(x_, r, q)) rowsum(r, p);
            copy_row(p - n_, p);
            zero_row(p);
            set_bit(z_, p, q);
            bitvec e;
            e.set(next_bit_++);
            phase_[p] = e;
            return e;
        }
        // Deterministic outcome: accumulate the stabilizer combination
        // indicated by destabilizers containing X_q.
        scratch_x_.assign(words_, 0);
        scratch_z_.assign(words_, 0);
        scratch_phase_ = bitvec{};
        for (size_t i = 0; i < n_; ++i)
            if (get_bit(x_, i, q)) rowsum_scratch(n_ + i);
        return scratch_phase_;
    }

    void mz(int32_t q) { records_.push_back(measure(q)); }

    void rz(int32_t q) {
        bitvec e = measure(q);
        conditional_x(q, e);
    }

    void x_cond(int32_t q, int32_t slot) {
        conditional_x(q, records_.at(static_cast<size_t>(slot)));
    }

    // Applies X_q conditioned on expression e (rows anticommuting with X pick
    // up the symbolic sign).
    void conditional_x(int32_t q, const bitvec& e) {
        for_rows([&](size_t r) {
            if (get_bit(z_, r, q)) phase_[r] ^= e;
        });
    }

    void conditional_z(int32_t q, const bitvec& e) {
        for_rows([&](size_t r) {
            if (get_bit(x_, r, q)) phase_[r] ^= e;
        });
    }

    // Fresh variable not tied to any measurement; lets callers inject symbolic
    // classical bits and read their coefficients out of later records.
    bitvec new_symbol() {
        bitvec e;
        e.set(next_bit_++);
        return e;
    }

    // --- program execution --------------------------------------------------

    void apply(const operation& op) {
        switch (op.kind) {
            case op_kind::sqrt_x: sqrt_x(op.q0); break;
            case op_kind::sqrt_x_dag: sqrt_x_dag(op.q0); break;
            case op_kind::s: s(op.q0); break;
            case op_kind::s_dag: s_dag(op.q0); break;
            case op_kind::cz: cz(op.q0, op.q1); break;
            case op_kind::cx: cx(op.q0, op.q1); break;
            case op_kind::swap: swap_qubits(op.q0, op.q1); break;
            case op_kind::mz: mz(op.q0); break;
            case op_kind::rz: rz(op.q0); break;
            case op_kind::x_cond: x_cond(op.q0, op.record); break;
        }
    }

    void run(const circuit_program& p) {
        for (const layer& l : p.layers)
            for (const operation& op : l.ops) apply(op);
    }

    bitvec parity(const std::vector<uint32_t>& recs) const {
        bitvec e;
        for (uint32_t r : recs) e ^= records_.at(r);
        return e;
    }

    // No dependence on random outcomes (constant term may still be set).
    static bool is_constant(const bitvec& e) {
        for (size_t i = 0; i < e.w.size(); ++i) {
            uint64_t m = e.w[i];
            if (i == 0) m &= ~uint64_t(1);
            if (m) return false;
        }
        return true;
    }
    static bool is_zero(const bitvec& e) { return !e.any(); }

    // --- raw access for equivalence checks ----------------------------------

    bool row_x(size_t row, int32_t q) const { return get_bit(x_, row, q); }
    bool row_z(size_t row, int32_t q) const { return get_bit(z_, row, q); }
    const bitvec& row_phase(size_t row) const { return phase_[row]; }

    bool same_state(const symbolic_tableau& o) const {
        return n_ == o.n_ && x_ == o.x_ && z_ == o.z_ && phase_ == o.phase_;
    }

  private:
    static constexpr size_t npos_ = ~size_t(0);

    uint32_t n_;
    size_t words_;
    std::vector<uint64_t> x_, z_;   // row-major, 2n rows
    std::vector<bitvec> phase_;     // per row
    std::vector<bitvec> records_;
    uint32_t next_bit_ = 1;         // bit 0 is the constant term

    std::vector<uint64_t> scratch_x_, scratch_z_;
    bitvec scratch_phase_;

    template <class F>
    void for_rows(F&& f) {
        for (size_t r = 0; r < 2 * size_t(n_); ++r) f(r);
    }

    bool get_bit(const std::vector<uint64_t>& m, size_t row, int32_t q) const {
        return (m[row * words_ + size_t(q) / 64] >> (size_t(q) % 64)) & 1;
    }
    void set_bit(std::vector<uint64_t>& m, size_t row, int32_t q) {
        m[row * words_ + size_t(q) / 64] |= uint64_t(1) << (size_t(q) % 64);
    }
    void flip_bit(std::vector<uint64_t>& m, size_t row, int32_t q) {
        m[row * words_ + size_t(q) / 64] ^= uint64_t(1) << (size_t(q) % 64);
    }

    void copy_row(size_t dst, size_t src) {
        for (size_t w = 0; w < words_; ++w) {
            x_[dst * words_ + w] = x_[src * words_ + w];
            z_[dst * words_ + w] = z_[src * words_ + w];
        }
        phase_[dst] = phase_[src];
    }
    void zero_row(size_t r) {
        for (size_t w = 0; w < words_; ++w) {
            x_[r * words_ + w] = 0;
            z_[r * words_ + w] = 0;
        }
        phase_[r] = bitvec{};
    }

    // Phase residue of multiplying source-row Paulis into target-row Paulis:
    // +1 per site where (P_src, P_tgt) in {(X,Y),(Y,Z),(Z,X)}, -1 for the
    // reverse pairs; total must be even for commuting rows.
    static int64_t g_sum(const uint64_t* x1, const uint64_t* z1, const uint64_t* x2,
                         const uint64_t* z2, size_t words) {
        int64_t total = 0;
        for (size_t w = 0; w < words; ++w) {
            uint64_t a = x1[w], b = z1[w], c = x2[w], d = z2[w];
            uint64_t plus = (a & ~b & c & d) | (a & b & ~c & d) | (~a & b & c & ~d);
            uint64_t minus = (a & ~b & ~c & d) | (a & b & c & ~d) | (~a & b & c & d);
            total += std::popcount(plus);
            total -= std::popcount(minus);
        }
        return total;
    }

    // row h *= row i (Aaronson–Gottesman rowsum with symbolic phases).
    void rowsum(size_t h, size_t i) {
        int64_t g = g_sum(&x_[i * words_], &z_[i * words_], &x_[h * words_], &z_[h * words_],
                          words_);
        int64_t m = ((g % 4) + 4) % 4;
        assert(m % 2 == 0);
        phase_[h] ^= phase_[i];
        if (m == 2) phase_[h].flip(0);
        for (size_t w = 0; w < words_; ++w) {
            x_[h * words_ + w] ^= x_[i * words_ + w];
            z_[h * words_ + w] ^= z_[i * words_ + w];
        }
    }

    void rowsum_scratch(size_t i) {
        int64_t g = g_sum(&x_[i * words_], &z_[i * words_], scratch_x_.data(),
                          scratch_z_.data(), words_);
        int64_t m = ((g % 4) + 4) % 4;
        assert(m % 2 == 0);
        scratch_phase_ ^= phase_[i];
        if (m == 2) scratch_phase_.flip(0);
        for (size_t w = 0; w < words_; ++w) {
            scratch_x_[w] ^= x_[i * words_ + w];
            scratch_z_[w] ^= z_[i * words_ + w];
        }
    }
};

}  // namespace qecstab
