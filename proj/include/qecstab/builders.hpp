#pragma once

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "circuit.hpp"
#include "layout.hpp"
#include "tableau.hpp"

namespace qecstab {

enum class reset_scheme : uint8_t { ur, cr, nr };

inline const char* to_string(reset_scheme s) {
    switch (s) {
        case reset_scheme::ur: return "ur";
        case reset_scheme::cr: return "cr";
        case reset_scheme::nr: return "nr";
    }
    return "?";
}

// Reset handling plus repetition count for one experiment run.
struct scheme_spec {
    reset_scheme reset = reset_scheme::ur;
    uint32_t rounds = 1;
    int32_t reset_duration_ns = 500;  // unconditional-reset tail length
};

// Where every measurement landed in the record stream.  Rounds are 1-based.
struct measurement_map {
    uint32_t stabs = 0;
    uint32_t helpers = 0;
    uint32_t copies = 1;  // auxiliary readouts per stabiliser per round
    uint32_t rounds = 0;
    std::vector<uint32_t> aux_recs;     // [((j-1)*stabs + g)*copies + k]
    std::vector<uint32_t> helper_recs;  // [(j-1)*helpers + h]
    uint32_t final_base = 0;
    std::map<int32_t, uint32_t> final_rec;  // qubit id -> transversal readout

    uint32_t aux(uint32_t g, uint32_t j, uint32_t k = 0) const {
        return aux_recs.at((size_t(j - 1) * stabs + g) * copies + k);
    }
    uint32_t helper(uint32_t h, uint32_t j) const {
        return helper_recs.at(size_t(j - 1) * helpers + h);
    }
    uint32_t final_of(int32_t q) const { return final_rec.at(q); }
};

struct build_result {
    circuit_program program;
    measurement_map map;
};

namespace detail {

inline void toggle(std::set<uint32_t>& s, uint32_t v) {
    if (!s.erase(v)) s.insert(v);
}

// One extraction round, standard and spreading families:
//   enter(20) cz(40) hop(20) cz(40) cz(40) hop(20) cz(40) exit(20) mz(600)
// 840 ns, plus the scheme tail (reset / conditional flip / spread layer).
// Auxiliaries rotate for the whole round; data qubits rotate exactly while
// their plaquette-type contacts happen (even sublattice around cz1/cz4, odd
// around cz2/cz3), so X cells always touch rotated corners and Z cells bare
// ones.  Helpers take no part in the plaquette dance: each is a one-bit
// deposit register kept on the Y axis, where the bare spread CZ can flip it,
// and turned onto the Z axis only around its readout.  Were a helper instead
// read through its cell's plaquette, every deposit would re-enter the
// accumulated auxiliary state one round later and ring forever.
inline build_result build_rounds(const patch& pa, const scheme_spec& sc) {
    const uint32_t n = sc.rounds;
    const auto& st = pa.stabilisers;
    const uint32_t S = static_cast<uint32_t>(st.size());
    const bool spread = pa.family == circuit_family::spreading;
    const bool nr = sc.reset == reset_scheme::nr;

    std::vector<int32_t> auxes;
    for (const stabiliser& g : st) auxes.push_back(g.auxiliaries[0]);

    std::vector<int32_t> e_data, m_data;
    for (int32_t q : pa.data_qubits)
        (pa.even_sublattice(q) ? e_data : m_data).push_back(q);

    std::set<int32_t> helper_set(pa.helper_qubits.begin(), pa.helper_qubits.end());
    // Z-cell spread residues must flip the deformed X, so their partner CZ is
    // conjugated into a controlled-Y; X-cell and helper partners take bare CZ.
    std::vector<int32_t> y_partners;
    if (spread)
        for (const stabiliser& g : st)
            if (g.type == pauli_type::z && !helper_set.count(g.spread_partner))
                y_partners.push_back(g.spread_partner);

    build_result out;
    circuit_program& p = out.program;
    measurement_map& m = out.map;
    p.n_qubits = pa.n_qubits;
    p.coords = pa.coords;
    p.rounds = n;
    m.stabs = S;
    m.helpers = static_cast<uint32_t>(pa.helper_qubits.size());
    m.rounds = n;

    uint32_t rec = 0;
    auto mz_next = [&](int32_t q) {
        operation op = op1(op_kind::mz, q);
        op.record = static_cast<int32_t>(rec++);
        return op;
    };
    auto push = [&](std::vector<operation> ops) {
        if (!ops.empty()) p.layers.push_back(make_layer(std::move(ops)));
    };

    {
        std::vector<operation> ops;
        for (uint32_t q = 0; q < pa.n_qubits; ++q)
            ops.push_back(op1(op_kind::rz, static_cast<int32_t>(q)));
        push(std::move(ops));
    }
    {
        std::vector<operation> ops;
        if (pa.experiment == experiment_kind::memory && pa.basis == pauli_type::x)
            for (int32_t q : pa.data_qubits) ops.push_back(op1(op_kind::sqrt_x, q));
        for (int32_t q : pa.helper_qubits) ops.push_back(op1(op_kind::sqrt_x, q));
        push(std::move(ops));
    }

    struct spread_event {
        uint32_t cond;
        int32_t partner;
        size_t after_layer;
    };
    std::vector<spread_event> events;

    for (uint32_t j = 1; j <= n; ++j) {
        uint32_t span_begin = static_cast<uint32_t>(p.layers.size());
        {
            std::vector<operation> ops;
            for (int32_t q : auxes) ops.push_back(op1(op_kind::sqrt_x, q));
            for (int32_t q : e_data) ops.push_back(op1(op_kind::sqrt_x, q));
            if (spread && j >= 2)  // close the previous round's controlled-Y frames
                for (int32_t q : y_partners) ops.push_back(op1(op_kind::sqrt_x, q));
            push(std::move(ops));
        }
        for (int step = 0; step < 4; ++step) {
            std::vector<operation> ops;
            for (uint32_t g = 0; g < S; ++g)
                if (int32_t c = st[g].visit(step); c >= 0)
                    ops.push_back(op2(op_kind::cz, auxes[g], c));
            push(std::move(ops));
            if (step == 0 || step == 2) {
                op_kind e_rot = step == 0 ? op_kind::sqrt_x_dag : op_kind::sqrt_x;
                op_kind m_rot = step == 0 ? op_kind::sqrt_x : op_kind::sqrt_x_dag;
                std::vector<operation> hop;
                for (int32_t q : e_data) hop.push_back(op1(e_rot, q));
                for (int32_t q : m_data) hop.push_back(op1(m_rot, q));
                push(std::move(hop));
            }
        }
        {
            std::vector<operation> ops;
            for (int32_t q : auxes) ops.push_back(op1(op_kind::sqrt_x_dag, q));
            for (int32_t q : e_data) ops.push_back(op1(op_kind::sqrt_x_dag, q));
            for (int32_t q : pa.helper_qubits) ops.push_back(op1(op_kind::sqrt_x_dag, q));
            push(std::move(ops));
        }
        {
            std::vector<operation> ops;
            for (uint32_t g = 0; g < S; ++g) {
                m.aux_recs.push_back(rec);
                ops.push_back(mz_next(auxes[g]));
            }
            for (uint32_t h = 0; h < m.helpers; ++h) {
                m.helper_recs.push_back(rec);
                ops.push_back(mz_next(pa.helper_qubits[h]));
            }
            if (spread)  // controlled-Y opening rides the readout window
                for (int32_t q : y_partners) ops.push_back(op1(op_kind::sqrt_x_dag, q));
            push(std::move(ops));
        }
        if (sc.reset == reset_scheme::ur) {
            std::vector<operation> ops;
            for (int32_t q : auxes) ops.push_back(op1(op_kind::rz, q, sc.reset_duration_ns));
            push(std::move(ops));
        } else if (sc.reset == reset_scheme::cr) {
            std::vector<operation> ops;
            for (uint32_t g = 0; g < S; ++g) {
                operation op = op1(op_kind::x_cond, auxes[g]);
                op.record = static_cast<int32_t>(m.aux(g, j));
                ops.push_back(op);
            }
            push(std::move(ops));
        }
        if (spread) {
            {  // reopen the helpers' Y frames for this round's deposits
                std::vector<operation> ops;
                for (int32_t q : pa.helper_qubits) ops.push_back(op1(op_kind::sqrt_x, q));
                push(std::move(ops));
            }
            std::vector<operation> ops;
            for (uint32_t g = 0; g < S; ++g)
                ops.push_back(op2(op_kind::cz, auxes[g], st[g].spread_partner));
            size_t li = p.layers.size();
            push(std::move(ops));
            for (uint32_t g = 0; g < S; ++g)
                events.push_back({m.aux(g, j), st[g].spread_partner, li});
        }
        p.round_spans.push_back({span_begin, static_cast<uint32_t>(p.layers.size())});
    }

    m.final_base = rec;
    {
        std::vector<operation> ops;
        if (pa.experiment == experiment_kind::memory && pa.basis == pauli_type::x) {
            std::set<int32_t> pending(y_partners.begin(), y_partners.end());
            for (int32_t q : pa.data_qubits)  // pending closes cancel the basis turn
                if (!pending.count(q)) ops.push_back(op1(op_kind::sqrt_x_dag, q));
        } else {
            for (int32_t q : y_partners) ops.push_back(op1(op_kind::sqrt_x, q));
        }
        for (int32_t q : pa.helper_qubits) ops.push_back(op1(op_kind::sqrt_x_dag, q));
        push(std::move(ops));
    }
    {
        std::vector<operation> ops;
        for (int32_t q : pa.data_qubits) {
            m.final_rec[q] = rec;
            ops.push_back(mz_next(q));
        }
        for (int32_t q : pa.helper_qubits) {
            m.final_rec[q] = rec;
            ops.push_back(mz_next(q));
        }
        push(std::move(ops));
    }
    for (uint32_t li = p.round_spans[0].first; li < p.round_spans[0].second; ++li)
        p.round_duration_ns += p.layers[li].duration_ns;

    auto type_matches = [&](const stabiliser& g) {
        if (pa.experiment == experiment_kind::stability) return g.type == pauli_type::z;
        return g.type == pa.basis;
    };
    auto add_det = [&](std::vector<uint32_t> recs, const point& c, uint32_t t) {
        std::sort(recs.begin(), recs.end());
        p.detectors.push_back(detector{std::move(recs), c.x, c.y, q4::of(static_cast<int32_t>(t))});
    };

    for (uint32_t g = 0; g < S; ++g) {
        if (!type_matches(st[g])) continue;
        add_det({m.aux(g, 1)}, pa.coords[auxes[g]], 0);
    }
    for (uint32_t h = 0; h < m.helpers; ++h)  // helpers init sharp at zero
        add_det({m.helper(h, 1)}, pa.coords[pa.helper_qubits[h]], 0);
    for (uint32_t j = 1; j + 1 <= n; ++j) {
        for (uint32_t g = 0; g < S; ++g) {
            std::vector<uint32_t> recs;
            if (nr) {  // accumulated records: consecutive syndromes differ two apart
                if (j >= 2) recs.push_back(m.aux(g, j - 1));
                recs.push_back(m.aux(g, j + 1));
            } else {
                recs = {m.aux(g, j), m.aux(g, j + 1)};
            }
            add_det(std::move(recs), pa.coords[auxes[g]], j);
        }
        // Consecutive helper reads differ by the cell record deposited between
        // them; the expansion below completes the comparison.
        for (uint32_t h = 0; h < m.helpers; ++h)
            add_det({m.helper(h, j), m.helper(h, j + 1)},
                    pa.coords[pa.helper_qubits[h]], j);
    }
    for (uint32_t g = 0; g < S; ++g) {
        if (!type_matches(st[g])) continue;
        std::vector<uint32_t> recs;
        if (nr && n >= 2) recs.push_back(m.aux(g, n - 1));
        recs.push_back(m.aux(g, n));
        for (int32_t c : st[g].support()) recs.push_back(m.final_of(c));
        add_det(std::move(recs), pa.coords[auxes[g]], n);
    }
    for (uint32_t h = 0; h < m.helpers; ++h)
        add_det({m.helper(h, n), m.final_of(pa.helper_qubits[h])},
                pa.coords[pa.helper_qubits[h]], n);

    {
        observable o;
        if (pa.experiment == experiment_kind::memory) {
            o.label = pa.basis == pauli_type::z ? "logical_z" : "logical_x";
            for (int32_t q : pa.logical_support) o.records.push_back(m.final_of(q));
        } else {
            o.label = "x_product";
            for (uint32_t g = 0; g < S; ++g)
                if (st[g].type == pauli_type::x) o.records.push_back(m.aux(g, 1));
        }
        std::sort(o.records.begin(), o.records.end());
        p.observables.push_back(std::move(o));
    }

    if (spread) {
        // The spread layer deposits Z^{record} on each partner.  Uncorrected,
        // later records depend on those random bytes; the classical half of
        // the scheme re-indexes every detector/observable by the records whose
        // deposits it would absorb.  Flip sets come from one symbolic run with
        // a fresh marker bit injected per deposit; the chronological expansion
        // below then resolves deposits conditioned on already-deposited
        // records (condition always strictly precedes everything it flips).
        symbolic_tableau tab(p.n_qubits);
        std::vector<uint32_t> symbit(events.size());
        size_t ei = 0;
        for (size_t li = 0; li < p.layers.size(); ++li) {
            for (const operation& op : p.layers[li].ops) tab.apply(op);
            while (ei < events.size() && events[ei].after_layer == li) {
                symbit[ei] = tab.random_bits_used() + 1;
                tab.conditional_z(events[ei].partner, tab.new_symbol());
                ++ei;
            }
        }
        const auto& recs = tab.records();
        std::vector<std::vector<uint32_t>> adj(recs.size());
        for (uint32_t k = 0; k < recs.size(); ++k) {
            std::set<uint32_t> a = {k};
            for (size_t e = 0; e < events.size(); ++e)
                if (recs[k].get(symbit[e])) {
                    assert(events[e].cond < k);
                    for (uint32_t v : adj[events[e].cond]) toggle(a, v);
                }
            adj[k].assign(a.begin(), a.end());
        }
        auto expand = [&](std::vector<uint32_t>& rs) {
            std::set<uint32_t> a;
            for (uint32_t r : rs)
                for (uint32_t v : adj[r]) toggle(a, v);
            rs.assign(a.begin(), a.end());
        };
        for (detector& d : p.detectors) expand(d.records);
        for (observable& o : p.observables) expand(o.records);
    }
    return out;
}

// Round-squeezed extraction: every stabiliser owns two auxiliaries, each
// carrying the plaquette phase on alternate rounds.  One type phase is
//   enter(20) cz(40) cz(40) swap(180) cz(40) cz(40) exit(20) mz(600)
// where each auxiliary contacts the two corners on its own side, the pair is
// swapped, and the contacts repeat — so both carriers pick up the full
// support every round.  Z cells run first on bare data; X cells run second
// with every data qubit rotated for the whole block, which deforms their
// product exactly as the hop frames do in build_rounds.  The emitted layers
// serialise the two phases (1960 ns); in hardware each phase's unitary block
// hides inside the other type's readout window, giving the 1000 ns period
// declared here.
//
// No reset ever: the readout at position k folds in last round's value from
// the opposite position (the carrier was swapped across), so the plaquette
// outcome is recovered as aux(g,j,k) ^ aux(g,j-1,1-k) and detectors compare
// those differences instead of raw readouts.
inline build_result build_squeezing(const patch& pa, const scheme_spec& sc) {
    const uint32_t n = sc.rounds;
    const auto& st = pa.stabilisers;
    const uint32_t S = static_cast<uint32_t>(st.size());

    build_result out;
    circuit_program& p = out.program;
    measurement_map& m = out.map;
    p.n_qubits = pa.n_qubits;
    p.coords = pa.coords;
    p.rounds = n;
    p.round_duration_ns = 1000;
    p.pipelined_rounds = true;
    m.stabs = S;
    m.copies = 2;
    m.rounds = n;
    m.aux_recs.resize(size_t(n) * S * 2);

    uint32_t rec = 0;
    auto mz_next = [&](int32_t q) {
        operation op = op1(op_kind::mz, q);
        op.record = static_cast<int32_t>(rec++);
        return op;
    };
    auto push = [&](std::vector<operation> ops) {
        if (!ops.empty()) p.layers.push_back(make_layer(std::move(ops)));
    };

    {
        std::vector<operation> ops;
        for (uint32_t q = 0; q < pa.n_qubits; ++q)
            ops.push_back(op1(op_kind::rz, static_cast<int32_t>(q)));
        push(std::move(ops));
    }
    if (pa.experiment == experiment_kind::memory && pa.basis == pauli_type::x) {
        std::vector<operation> ops;
        for (int32_t q : pa.data_qubits) ops.push_back(op1(op_kind::sqrt_x, q));
        push(std::move(ops));
    }

    for (uint32_t j = 1; j <= n; ++j) {
        uint32_t span_begin = static_cast<uint32_t>(p.layers.size());
        for (pauli_type ph : {pauli_type::z, pauli_type::x}) {
            auto rotate = [&](op_kind k) {
                std::vector<operation> ops;
                for (const stabiliser& g : st)
                    if (g.type == ph)
                        for (int32_t a : g.auxiliaries) ops.push_back(op1(k, a));
                if (ph == pauli_type::x)
                    for (int32_t q : pa.data_qubits) ops.push_back(op1(k, q));
                push(std::move(ops));
            };
            // X pairs sit W/E so they split their cell by column, Z pairs N/S
            // by row; same-type neighbours share corners in diagonally
            // opposite roles, so the two halves never collide on a data qubit.
            auto contacts = [&](int half) {
                std::vector<operation> ops;
                for (const stabiliser& g : st) {
                    if (g.type != ph) continue;
                    int c1 = half ? (ph == pauli_type::x ? sw : ne) : nw;
                    int c2 = half ? se : (ph == pauli_type::x ? ne : sw);
                    if (g.corner[c1] >= 0)
                        ops.push_back(op2(op_kind::cz, g.auxiliaries[0], g.corner[c1]));
                    if (g.corner[c2] >= 0)
                        ops.push_back(op2(op_kind::cz, g.auxiliaries[1], g.corner[c2]));
                }
                push(std::move(ops));
            };
            rotate(op_kind::sqrt_x);
            contacts(0);
            contacts(1);
            {
                std::vector<operation> ops;
                for (const stabiliser& g : st)
                    if (g.type == ph)
                        ops.push_back(op2(op_kind::swap, g.auxiliaries[0], g.auxiliaries[1]));
                push(std::move(ops));
            }
            contacts(0);
            contacts(1);
            rotate(op_kind::sqrt_x_dag);
            {
                std::vector<operation> ops;
                for (uint32_t g = 0; g < S; ++g) {
                    if (st[g].type != ph) continue;
                    for (uint32_t k = 0; k < 2; ++k) {
                        m.aux_recs[(size_t(j - 1) * S + g) * 2 + k] = rec;
                        ops.push_back(mz_next(st[g].auxiliaries[k]));
                    }
                }
                push(std::move(ops));
            }
        }
        p.round_spans.push_back({span_begin, static_cast<uint32_t>(p.layers.size())});
    }

    m.final_base = rec;
    if (pa.experiment == experiment_kind::memory && pa.basis == pauli_type::x) {
        std::vector<operation> ops;
        for (int32_t q : pa.data_qubits) ops.push_back(op1(op_kind::sqrt_x_dag, q));
        push(std::move(ops));
    }
    {
        std::vector<operation> ops;
        for (int32_t q : pa.data_qubits) {
            m.final_rec[q] = rec;
            ops.push_back(mz_next(q));
        }
        push(std::move(ops));
    }

    auto type_matches = [&](const stabiliser& g) {
        if (pa.experiment == experiment_kind::stability) return g.type == pauli_type::z;
        return g.type == pa.basis;
    };
    auto add_det = [&](std::vector<uint32_t> recs, const point& c, q4 t) {
        std::sort(recs.begin(), recs.end());
        p.detectors.push_back(detector{std::move(recs), c.x, c.y, t});
    };
    auto at0 = [&](uint32_t g) { return pa.coords[st[g].auxiliaries[0]]; };
    auto at1 = [&](uint32_t g) { return pa.coords[st[g].auxiliaries[1]]; };

    for (uint32_t g = 0; g < S; ++g)
        if (type_matches(st[g])) add_det({m.aux(g, 1, 0)}, at0(g), q4::of(0));

    // Pair checks: the round's two carriers read the same plaquette, so their
    // difference repeats; from round 2 on each readout drags last round's
    // opposite-position value along.
    for (uint32_t j = 1; j <= n; ++j) {
        for (uint32_t g = 0; g < S; ++g) {
            std::vector<uint32_t> recs = {m.aux(g, j, 0), m.aux(g, j, 1)};
            if (j >= 2) {
                recs.push_back(m.aux(g, j - 1, 0));
                recs.push_back(m.aux(g, j - 1, 1));
            }
            add_det(std::move(recs), at0(g), q4::of(static_cast<int32_t>(j)));
        }
    }
    // Cross checks tie consecutive rounds through one carrier, alternating
    // sides so every readout joins a bounded number of comparisons.
    for (uint32_t j = 1; j + 1 <= n; ++j) {
        uint32_t k = j % 2 == 0 ? 0 : 1;
        for (uint32_t g = 0; g < S; ++g) {
            std::vector<uint32_t> recs = {m.aux(g, j, 0), m.aux(g, j, 1),
                                          m.aux(g, j + 1, k)};
            if (j >= 2) recs.push_back(m.aux(g, j - 1, 1 - k));
            add_det(std::move(recs), at1(g), q4::halves(static_cast<int32_t>(2 * j + 1)));
        }
    }
    for (uint32_t g = 0; g < S; ++g) {
        if (!type_matches(st[g])) continue;
        std::vector<uint32_t> recs = {m.aux(g, n, 0)};
        if (n >= 2) recs.push_back(m.aux(g, n - 1, 1));
        for (int32_t c : st[g].support()) recs.push_back(m.final_of(c));
        add_det(std::move(recs), at0(g), q4::halves(static_cast<int32_t>(2 * n + 1)));
    }

    {
        observable o;
        if (pa.experiment == experiment_kind::memory) {
            o.label = pa.basis == pauli_type::z ? "logical_z" : "logical_x";
            for (int32_t q : pa.logical_support) o.records.push_back(m.final_of(q));
        } else {
            o.label = "x_product";
            for (uint32_t g = 0; g < S; ++g)
                if (st[g].type == pauli_type::x) o.records.push_back(m.aux(g, 1, 0));
        }
        std::sort(o.records.begin(), o.records.end());
        p.observables.push_back(std::move(o));
    }
    return out;
}

}  // namespace detail

inline build_result build(const patch& pa, const scheme_spec& sc) {
    if (sc.rounds < 1) throw std::invalid_argument("build: rounds must be >= 1");
    if (pa.family != circuit_family::standard && sc.reset != reset_scheme::nr)
        throw std::invalid_argument("build: deformed families leave residues by design; "
                                    "use the no-reset scheme");
    if (pa.family == circuit_family::squeezing) return detail::build_squeezing(pa, sc);
    return detail::build_rounds(pa, sc);
}

// Rewrites CX/SWAP layers into native sub-layer sequences of equal total
// duration; native layers pass through.  A rewritable layer must be
// homogeneous (builders only ever emit them that way).
inline circuit_program lower(const circuit_program& in) {
    circuit_program out;
    out.n_qubits = in.n_qubits;
    out.coords = in.coords;
    out.detectors = in.detectors;
    out.observables = in.observables;
    out.rounds = in.rounds;
    out.round_duration_ns = in.round_duration_ns;
    out.pipelined_rounds = in.pipelined_rounds;

    std::vector<uint32_t> start(in.layers.size() + 1, 0);
    for (size_t li = 0; li < in.layers.size(); ++li) {
        start[li] = static_cast<uint32_t>(out.layers.size());
        const layer& l = in.layers[li];
        bool native = true;
        for (const operation& op : l.ops) native = native && is_native(op.kind);
        if (native) {
            out.layers.push_back(l);
            continue;
        }
        op_kind k0 = l.ops[0].kind;
        for (const operation& op : l.ops)
            if (op.kind != k0)
                throw std::invalid_argument("lower: mixed layer");
        auto emit = [&](auto&& per_op) {
            std::vector<operation> ops;
            for (const operation& op : l.ops) per_op(ops, op);
            out.layers.push_back(make_layer(std::move(ops)));
        };
        if (k0 == op_kind::cx) {
            for (op_kind k : {op_kind::s, op_kind::sqrt_x_dag})
                emit([&](std::vector<operation>& ops, const operation& op) {
                    ops.push_back(op1(k, op.q1));
                });
            emit([&](std::vector<operation>& ops, const operation& op) {
                ops.push_back(op2(op_kind::cz, op.q0, op.q1));
            });
            for (op_kind k : {op_kind::sqrt_x, op_kind::s_dag})
                emit([&](std::vector<operation>& ops, const operation& op) {
                    ops.push_back(op1(k, op.q1));
                });
        } else {  // swap: three CZ + rotate-both blocks
            for (int rep = 0; rep < 3; ++rep) {
                emit([&](std::vector<operation>& ops, const operation& op) {
                    ops.push_back(op2(op_kind::cz, op.q0, op.q1));
                });
                emit([&](std::vector<operation>& ops, const operation& op) {
                    ops.push_back(op1(op_kind::sqrt_x, op.q0));
                    ops.push_back(op1(op_kind::sqrt_x, op.q1));
                });
            }
        }
    }
    start[in.layers.size()] = static_cast<uint32_t>(out.layers.size());
    for (auto [a, b] : in.round_spans) out.round_spans.push_back({start[a], start[b]});
    return out;
}

}  // namespace qecstab
