#pragma once

#include <json.hpp>

#include "layout.hpp"

namespace qecstab {

// Inspection dump for the CLI `layout` subcommand.
inline std::string patch_to_json(const patch& p) {
    nlohmann::json j;
    j["experiment"] = to_string(p.experiment);
    j["family"] = to_string(p.family);
    j["basis"] = to_string(p.basis);
    j["size"] = p.size;
    j["qubit_count"] = p.n_qubits;

    auto kind_of = [&](int32_t q) -> const char* {
        for (int32_t h : p.helper_qubits)
            if (h == q) return "helper";
        return q < static_cast<int32_t>(p.data_qubits.size()) ? "data" : "aux";
    };
    nlohmann::json qubits = nlohmann::json::array();
    for (uint32_t q = 0; q < p.n_qubits; ++q)
        qubits.push_back({{"id", q},
                          {"x", p.coords[q].x.to_double()},
                          {"y", p.coords[q].y.to_double()},
                          {"kind", kind_of(static_cast<int32_t>(q))}});
    j["qubits"] = std::move(qubits);

    nlohmann::json stabs = nlohmann::json::array();
    for (const stabiliser& g : p.stabilisers) {
        nlohmann::json s;
        s["type"] = to_string(g.type);
        s["cell"] = {g.cell_a, g.cell_b};
        s["support"] = g.support();
        s["auxiliaries"] = g.auxiliaries;
        if (g.spread_partner >= 0) s["spread_partner"] = g.spread_partner;
        stabs.push_back(std::move(s));
    }
    j["stabilisers"] = std::move(stabs);
    j["logical_support"] = p.logical_support;

    nlohmann::json edges = nlohmann::json::array();
    for (auto [a, b] : connectivity(p)) edges.push_back({a, b});
    j["connectivity"] = std::move(edges);
    return j.dump(2);
}

}  // namespace qecstab
