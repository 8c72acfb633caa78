#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "common.hpp"

namespace qecstab {

enum class pauli_type : uint8_t { x, z };
enum class circuit_family : uint8_t { standard, spreading, squeezing };
enum class experiment_kind : uint8_t { memory, stability };

inline const char* to_string(pauli_type t) { return t == pauli_type::x ? "X" : "Z"; }
inline const char* to_string(circuit_family f) {
    switch (f) {
        case circuit_family::standard: return "standard";
        case circuit_family::spreading: return "spreading";
        case circuit_family::squeezing: return "squeezing";
    }
    return "?";
}
inline const char* to_string(experiment_kind e) {
    return e == experiment_kind::memory ? "memory" : "stability";
}

// Corner slots of a plaquette cell, also the per-round entangling order:
// X-type cells visit NW,NE,SW,SE (Z-shaped path), Z-type NW,SW,NE,SE
// (N-shaped).  The two paths agree on every shared edge, which keeps joint
// plaquette measurements deterministic.
enum corner_slot : uint8_t { nw = 0, ne = 1, sw = 2, se = 3 };

struct stabiliser {
    pauli_type type;
    int32_t cell_a, cell_b;           // anchor: cell spans [a,a+1]x[b,b+1]
    std::array<int32_t, 4> corner;    // qubit per corner_slot, -1 if absent
    std::vector<int32_t> auxiliaries; // 1 (standard/spreading) or 2 (squeezing)
    int32_t spread_partner = -1;      // spreading: NW corner (data or helper)

    std::vector<int32_t> support() const {
        std::vector<int32_t> s;
        for (int32_t q : corner)
            if (q >= 0) s.push_back(q);
        return s;
    }
    int weight() const { return static_cast<int>(support().size()); }
    // Corner visited in entangling step k (0-based), -1 if absent.
    int32_t visit(int k) const {
        static constexpr corner_slot x_order[4] = {nw, ne, sw, se};
        static constexpr corner_slot z_order[4] = {nw, sw, ne, se};
        return corner[type == pauli_type::x ? x_order[k] : z_order[k]];
    }
};

struct patch {
    experiment_kind experiment;
    circuit_family family;
    pauli_type basis;  // data init/readout basis; stability always z
    uint32_t size = 0; // memory distance d or stability width w

    uint32_t n_qubits = 0;
    std::vector<point> coords;            // qubit id -> position
    std::vector<int32_t> data_qubits;     // grid points, id = j*size + i
    std::vector<int32_t> helper_qubits;   // spreading boundary companions
    std::vector<stabiliser> stabilisers;  // sorted by (cell_a, cell_b)
    std::vector<int32_t> logical_support; // memory: W-hat support; stability: empty

    int32_t data_at(int32_t i, int32_t j) const {
        if (i < 0 || j < 0 || i >= static_cast<int32_t>(size) || j >= static_cast<int32_t>(size))
            return -1;
        return j * static_cast<int32_t>(size) + i;
    }
    // Frame-dance sublattice of a data qubit: qubits on even (i+j) hop basis
    // at the round edges, odd ones mid-round.
    bool even_sublattice(int32_t q) const {
        const point& c = coords[q];
        return ((c.x.floor_units() + c.y.floor_units()) & 1) == 0;
    }
};

namespace detail {

struct cell_info {
    int32_t a, b;
    pauli_type type;
};

inline pauli_type cell_type(int32_t a, int32_t b) {
    return ((a + b) & 1) ? pauli_type::x : pauli_type::z;
}

// Cells of the rotated planar patch.  Interior cells always; boundary
// half-cells only where their type matches the side rule.
inline std::vector<cell_info> kept_cells(experiment_kind kind, uint32_t size) {
    const int32_t s = static_cast<int32_t>(size);
    std::vector<cell_info> cells;
    for (int32_t a = -1; a <= s - 1; ++a) {
        for (int32_t b = -1; b <= s - 1; ++b) {
            bool a_out = a < 0 || a > s - 2;
            bool b_out = b < 0 || b > s - 2;
            if (a_out && b_out) continue;  // corners never kept
            pauli_type t = cell_type(a, b);
            if (a_out || b_out) {
                if (kind == experiment_kind::stability) {
                    if (t != pauli_type::x) continue;  // X over-determined on all sides
                } else {
                    // memory: X on top/bottom, Z on left/right
                    pauli_type want = b_out ? pauli_type::x : pauli_type::z;
                    if (t != want) continue;
                }
            }
            cells.push_back({a, b, t});
        }
    }
    std::sort(cells.begin(), cells.end(), [](const cell_info& u, const cell_info& v) {
        return u.a != v.a ? u.a < v.a : u.b < v.b;
    });
    return cells;
}

inline patch build_patch(experiment_kind kind, uint32_t size, circuit_family family,
                         pauli_type basis) {
    patch p;
    p.experiment = kind;
    p.family = family;
    p.basis = basis;
    p.size = size;
    const int32_t s = static_cast<int32_t>(size);

    for (int32_t j = 0; j < s; ++j)
        for (int32_t i = 0; i < s; ++i) {
            p.data_qubits.push_back(static_cast<int32_t>(p.coords.size()));
            p.coords.push_back(point{q4::of(i), q4::of(j)});
        }

    std::vector<cell_info> cells = kept_cells(kind, size);

    // Corner positions per slot: NW=(a,b+1) NE=(a+1,b+1) SW=(a,b) SE=(a+1,b).
    auto corner_pos = [](const cell_info& c, int slot) -> std::pair<int32_t, int32_t> {
        switch (slot) {
            case nw: return {c.a, c.b + 1};
            case ne: return {c.a + 1, c.b + 1};
            case sw: return {c.a, c.b};
            default: return {c.a + 1, c.b};
        }
    };

    // Spreading: a cell whose NW corner falls outside the grid gets a helper
    // qubit at that position.  The helper never joins the plaquette (support
    // stays data-only); it exists solely to receive that cell's spread.
    std::map<std::pair<int32_t, int32_t>, int32_t> helper_at;
    if (family == circuit_family::spreading) {
        for (const cell_info& c : cells) {
            auto [i, j] = corner_pos(c, nw);
            if (i < 0 || j < 0 || i >= s || j >= s) {
                int32_t id = static_cast<int32_t>(p.coords.size());
                helper_at[{i, j}] = id;
                p.helper_qubits.push_back(id);
                p.coords.push_back(point{q4::of(i), q4::of(j)});
            }
        }
    }

    for (const cell_info& c : cells) {
        stabiliser g;
        g.type = c.type;
        g.cell_a = c.a;
        g.cell_b = c.b;
        for (int slot = 0; slot < 4; ++slot) {
            auto [i, j] = corner_pos(c, slot);
            g.corner[slot] = (i >= 0 && j >= 0 && i < s && j < s) ? j * s + i : -1;
        }
        if (family == circuit_family::spreading) {
            g.spread_partner = g.corner[nw];
            if (g.spread_partner < 0) g.spread_partner = helper_at.at(corner_pos(c, nw));
        }

        q4 ax = q4::quarters(c.a * 4 + 2), ay = q4::quarters(c.b * 4 + 2);
        if (family == circuit_family::squeezing) {
            // Auxiliary pairs: X cells side by side (W,E), Z cells stacked (N,S).
            auto add_aux = [&](q4 x, q4 y) {
                g.auxiliaries.push_back(static_cast<int32_t>(p.coords.size()));
                p.coords.push_back(point{x, y});
            };
            if (c.type == pauli_type::x) {
                add_aux(q4::quarters(c.a * 4 + 1), ay);
                add_aux(q4::quarters(c.a * 4 + 3), ay);
            } else {
                add_aux(ax, q4::quarters(c.b * 4 + 3));
                add_aux(ax, q4::quarters(c.b * 4 + 1));
            }
        } else {
            g.auxiliaries.push_back(static_cast<int32_t>(p.coords.size()));
            p.coords.push_back(point{ax, ay});
        }
        p.stabilisers.push_back(std::move(g));
    }

    p.n_qubits = static_cast<uint32_t>(p.coords.size());

    if (kind == experiment_kind::memory) {
        // Z-hat: bottom row; the conjugate string: left column.
        if (basis == pauli_type::z)
            for (int32_t i = 0; i < s; ++i) p.logical_support.push_back(p.data_at(i, 0));
        else
            for (int32_t j = 0; j < s; ++j) p.logical_support.push_back(p.data_at(0, j));
    }
    return p;
}

}  // namespace detail

inline patch memory_patch(uint32_t d, circuit_family family = circuit_family::standard,
                          pauli_type basis = pauli_type::z) {
    if (d < 3 || d % 2 == 0)
        throw std::invalid_argument("memory distance must be odd and >= 3");
    return detail::build_patch(experiment_kind::memory, d, family, basis);
}

inline patch stability_patch(uint32_t w, circuit_family family = circuit_family::standard) {
    if (w < 4 || w % 2 == 1)
        throw std::invalid_argument("stability width must be even and >= 4");
    return detail::build_patch(experiment_kind::stability, w, family, pauli_type::z);
}

// Qubit pairs used by any two-qubit gate some builder will emit on this patch.
inline std::set<std::pair<int32_t, int32_t>> connectivity(const patch& p) {
    std::set<std::pair<int32_t, int32_t>> edges;
    auto add = [&](int32_t a, int32_t b) {
        if (a > b) std::swap(a, b);
        edges.insert({a, b});
    };
    for (const stabiliser& g : p.stabilisers) {
        if (g.auxiliaries.size() == 1) {
            for (int32_t q : g.support()) add(g.auxiliaries[0], q);
            if (g.spread_partner >= 0) add(g.auxiliaries[0], g.spread_partner);
        } else {
            // Two-auxiliary cell: each aux entangles the two corners on its
            // own side, and the pair itself is swapped mid-round.
            int32_t a1 = g.auxiliaries[0], a2 = g.auxiliaries[1];
            if (g.type == pauli_type::x) {
                if (g.corner[nw] >= 0) add(a1, g.corner[nw]);
                if (g.corner[sw] >= 0) add(a1, g.corner[sw]);
                if (g.corner[ne] >= 0) add(a2, g.corner[ne]);
                if (g.corner[se] >= 0) add(a2, g.corner[se]);
            } else {
                if (g.corner[nw] >= 0) add(a1, g.corner[nw]);
                if (g.corner[ne] >= 0) add(a1, g.corner[ne]);
                if (g.corner[sw] >= 0) add(a2, g.corner[sw]);
                if (g.corner[se] >= 0) add(a2, g.corner[se]);
            }
            add(a1, a2);
        }
    }
    return edges;
}

}  // namespace qecstab
