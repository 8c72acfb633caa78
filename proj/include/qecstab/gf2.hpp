#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

namespace qecstab {

// Dense GF(2) row vector on 64-bit words.
struct bitvec {
    std::vector<uint64_t> w;

    bitvec() = default;
    explicit bitvec(size_t nbits) : w((nbits + 63) / 64, 0) {}

    size_t capacity_bits() const { return w.size() * 64; }

    void ensure(size_t nbits) {
        if (nbits > capacity_bits()) w.resize((nbits + 63) / 64, 0);
    }

    bool get(size_t i) const {
        size_t word = i / 64;
        if (word >= w.size()) return false;
        return (w[word] >> (i % 64)) & 1;
    }
    void set(size_t i, bool b = true) {
        ensure(i + 1);
        if (b)
            w[i / 64] |= uint64_t(1) << (i % 64);
        else
            w[i / 64] &= ~(uint64_t(1) << (i % 64));
    }
    void flip(size_t i) {
        ensure(i + 1);
        w[i / 64] ^= uint64_t(1) << (i % 64);
    }

    void operator^=(const bitvec& o) {
        if (o.w.size() > w.size()) w.resize(o.w.size(), 0);
        for (size_t i = 0; i < o.w.size(); ++i) w[i] ^= o.w[i];
    }

    bool any() const {
        for (uint64_t x : w)
            if (x) return true;
        return false;
    }
    size_t popcount() const {
        size_t n = 0;
        for (uint64_t x : w) n += std::popcount(x);
        return n;
    }
    // Lowest set bit index, or npos.
    static constexpr size_t npos = ~size_t(0);
    size_t lowest() const {
        for (size_t i = 0; i < w.size(); ++i)
            if (w[i]) return i * 64 + std::countr_zero(w[i]);
        return npos;
    }
    void clear() {
        for (uint64_t& x : w) x = 0;
    }
    std::vector<uint32_t> indices() const {
        std::vector<uint32_t> out;
        for (size_t i = 0; i < w.size(); ++i)
            for (uint64_t x = w[i]; x; x &= x - 1)
                out.push_back(static_cast<uint32_t>(i * 64 + std::countr_zero(x)));
        return out;
    }

    friend bool operator==(const bitvec& a, const bitvec& b) {
        size_t n = a.w.size() > b.w.size() ? a.w.size() : b.w.size();
        for (size_t i = 0; i < n; ++i) {
            uint64_t x = i < a.w.size() ? a.w[i] : 0;
            uint64_t y = i < b.w.size() ? b.w[i] : 0;
            if (x != y) return false;
        }
        return true;
    }
};

// Row-reduced GF(2) system over fixed column count, for rank/commutation/coset
// checks and for solving small record-completion systems.
struct gf2_matrix {
    size_t cols = 0;
    std::vector<bitvec> rows;

    explicit gf2_matrix(size_t cols_) : cols(cols_) {}

    void add_row(bitvec r) {
        r.ensure(cols);
        rows.push_back(std::move(r));
    }

    // In-place Gauss elimination; returns rank.  Column order = bit order.
    size_t eliminate() {
        size_t r = 0;
        for (size_t c = 0; c < cols && r < rows.size(); ++c) {
            size_t pivot = npos_;
            for (size_t i = r; i < rows.size(); ++i)
                if (rows[i].get(c)) {
                    pivot = i;
                    break;
                }
            if (pivot == npos_) continue;
            std::swap(rows[r], rows[pivot]);
            for (size_t i = 0; i < rows.size(); ++i)
                if (i != r && rows[i].get(c)) rows[i] ^= rows[r];
            ++r;
        }
        return r;
    }

    size_t rank() const {
        gf2_matrix m = *this;
        return m.eliminate();
    }

    // Is v in the rowspace?
    bool in_rowspace(const bitvec& v) const {
        gf2_matrix m = *this;
        m.eliminate();
        bitvec x = v;
        x.ensure(cols);
        for (const bitvec& row : m.rows) {
            size_t p = row.lowest();
            if (p == bitvec::npos || p >= cols) break;
            if (x.get(p)) x ^= row;
        }
        for (size_t c = 0; c < cols; ++c)
            if (x.get(c)) return false;
        return true;
    }

  private:
    static constexpr size_t npos_ = ~size_t(0);
};

// Solve A·x = b over GF(2) where columns of A are given as bitvecs of length
// nrows.  Returns one solution (support indices into the column list) or
// nullopt.  Prefers low column indices as pivots, so earlier candidates win.
inline std::optional<std::vector<uint32_t>> gf2_solve(std::vector<bitvec> columns,
                                                      bitvec b,
                                                      size_t nrows) {
    size_t ncols = columns.size();
    // Build augmented rows: row i = [A_{i,0..ncols-1} | b_i].
    std::vector<bitvec> rows(nrows, bitvec(ncols + 1));
    for (size_t c = 0; c < ncols; ++c)
        for (size_t r = 0; r < nrows; ++r)
            if (columns[c].get(r)) rows[r].set(c);
    for (size_t r = 0; r < nrows; ++r)
        if (b.get(r)) rows[r].set(ncols);

    std::vector<size_t> pivot_col;
    size_t rr = 0;
    for (size_t c = 0; c < ncols && rr < nrows; ++c) {
        size_t p = bitvec::npos;
        for (size_t i = rr; i < nrows; ++i)
            if (rows[i].get(c)) {
                p = i;
                break;
            }
        if (p == bitvec::npos) continue;
        std::swap(rows[rr], rows[p]);
        for (size_t i = 0; i < nrows; ++i)
            if (i != rr && rows[i].get(c)) rows[i] ^= rows[rr];
        pivot_col.push_back(c);
        ++rr;
    }
    for (size_t i = rr; i < nrows; ++i)
        if (rows[i].get(ncols)) return std::nullopt;  // inconsistent
    std::vector<uint32_t> sol;
    for (size_t i = 0; i < rr; ++i)
        if (rows[i].get(ncols)) sol.push_back(static_cast<uint32_t>(pivot_col[i]));
    return sol;
}

}  // namespace qecstab
