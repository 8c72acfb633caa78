#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "tableau.hpp"

namespace qecstab {

// Full program validation: structural invariants plus one noiseless symbolic
// execution proving every detector and observable parity is constant.  A
// constant-one parity is fine — sampling is reference-relative (detection
// events are flips against the noiseless value) — but any dependence on a
// random outcome means the parity can fire without noise: miswired records.
inline std::vector<std::string> validate(const circuit_program& p) {
    std::vector<std::string> bad = validate_structure(p);
    if (!bad.empty()) return bad;  // tableau run needs a structurally sound program

    symbolic_tableau tab(p.n_qubits);
    tab.run(p);
    for (size_t i = 0; i < p.detectors.size(); ++i)
        if (!symbolic_tableau::is_constant(tab.parity(p.detectors[i].records)))
            bad.push_back("detector " + std::to_string(i) + " nondeterministic");
    for (size_t i = 0; i < p.observables.size(); ++i)
        if (!symbolic_tableau::is_constant(tab.parity(p.observables[i].records)))
            bad.push_back("observable " + p.observables[i].label + " nondeterministic");
    return bad;
}

// Noiseless parity of every detector and observable; the baseline that
// sampled flips are applied to.
struct reference_sample {
    std::vector<uint8_t> detectors;
    std::vector<uint8_t> observables;
};

inline reference_sample reference_values(const circuit_program& p) {
    symbolic_tableau tab(p.n_qubits);
    tab.run(p);
    reference_sample ref;
    ref.detectors.reserve(p.detectors.size());
    ref.observables.reserve(p.observables.size());
    for (const detector& d : p.detectors) {
        bitvec e = tab.parity(d.records);
        if (!symbolic_tableau::is_constant(e))
            throw std::logic_error("reference_values on nondeterministic detector");
        ref.detectors.push_back(e.get(0));
    }
    for (const observable& o : p.observables) {
        bitvec e = tab.parity(o.records);
        if (!symbolic_tableau::is_constant(e))
            throw std::logic_error("reference_values on nondeterministic observable");
        ref.observables.push_back(e.get(0));
    }
    return ref;
}

// Exact semantic equality of two programs on the same qubit count: identical
// record expressions (same randomness pattern, same dependence) and identical
// final tableau including symbolic signs.  Used to certify lowering.
inline bool tableau_equivalent(const circuit_program& a, const circuit_program& b) {
    if (a.n_qubits != b.n_qubits) return false;
    symbolic_tableau ta(a.n_qubits), tb(b.n_qubits);
    ta.run(a);
    tb.run(b);
    if (ta.records().size() != tb.records().size()) return false;
    for (size_t i = 0; i < ta.records().size(); ++i)
        if (!(ta.records()[i] == tb.records()[i])) return false;
    return ta.same_state(tb);
}

}  // namespace qecstab
