#include <doctest.h>

#include <algorithm>
#include <map>
#include <qecstab/gf2.hpp>
#include <qecstab/layout.hpp>
#include <qecstab/layout_json.hpp>
#include <set>

using namespace qecstab;

namespace {

size_t count_type(const patch& p, pauli_type t) {
    size_t n = 0;
    for (const stabiliser& g : p.stabilisers) n += g.type == t;
    return n;
}

bool commutes(const stabiliser& a, const stabiliser& b) {
    if (a.type == b.type) return true;
    std::vector<int32_t> sa = a.support(), sb = b.support();
    size_t overlap = 0;
    for (int32_t q : sa) overlap += std::count(sb.begin(), sb.end(), q);
    return overlap % 2 == 0;
}

bitvec support_mask(const stabiliser& g, size_t nbits) {
    bitvec v(nbits);
    for (int32_t q : g.support()) v.set(static_cast<size_t>(q));
    return v;
}

// Exhaustive minimum weight over the logical coset: logical + span of the
// same-type stabiliser group.
size_t min_coset_weight(const patch& p, pauli_type t) {
    bitvec logical(p.n_qubits);
    for (int32_t q : p.logical_support) logical.set(static_cast<size_t>(q));
    std::vector<bitvec> gens;
    for (const stabiliser& g : p.stabilisers)
        if (g.type == t) gens.push_back(support_mask(g, p.n_qubits));
    REQUIRE(gens.size() <= 12);
    size_t best = logical.popcount();
    for (uint64_t m = 1; m < (uint64_t(1) << gens.size()); ++m) {
        bitvec v = logical;
        for (size_t i = 0; i < gens.size(); ++i)
            if ((m >> i) & 1) v ^= gens[i];
        best = std::min(best, v.popcount());
    }
    return best;
}

}  // namespace

TEST_CASE("distance-3 memory patch geometry") {
    patch p = memory_patch(3);
    CHECK(p.data_qubits.size() == 9);
    CHECK(count_type(p, pauli_type::x) == 4);
    CHECK(count_type(p, pauli_type::z) == 4);
    CHECK(p.n_qubits == 17);
    CHECK(p.helper_qubits.empty());

    std::set<std::pair<int32_t, int32_t>> xcells, zcells;
    for (const stabiliser& g : p.stabilisers)
        (g.type == pauli_type::x ? xcells : zcells).insert({g.cell_a, g.cell_b});
    CHECK(xcells == std::set<std::pair<int32_t, int32_t>>{{0, -1}, {0, 1}, {1, 0}, {1, 2}});
    CHECK(zcells == std::set<std::pair<int32_t, int32_t>>{{-1, 1}, {0, 0}, {1, 1}, {2, 0}});

    for (const stabiliser& g : p.stabilisers) {
        int w = g.weight();
        CHECK((w == 2 || w == 4));
        bool boundary = g.cell_a < 0 || g.cell_b < 0 || g.cell_a == 2 || g.cell_b == 2;
        CHECK(w == (boundary ? 2 : 4));
    }
}

TEST_CASE("memory patches scale as (d^2-1)/2 per type and stay commuting") {
    for (uint32_t d : {3u, 5u, 7u}) {
        patch p = memory_patch(d);
        CHECK(p.data_qubits.size() == d * d);
        CHECK(count_type(p, pauli_type::x) == (d * d - 1) / 2);
        CHECK(count_type(p, pauli_type::z) == (d * d - 1) / 2);
        for (size_t i = 0; i < p.stabilisers.size(); ++i)
            for (size_t j = i + 1; j < p.stabilisers.size(); ++j)
                CHECK(commutes(p.stabilisers[i], p.stabilisers[j]));
        // Full stabiliser group is independent on a memory patch.
        gf2_matrix mx(p.n_qubits), mz(p.n_qubits);
        for (const stabiliser& g : p.stabilisers)
            (g.type == pauli_type::x ? mx : mz).add_row(support_mask(g, p.n_qubits));
        CHECK(mx.rank() + mz.rank() == d * d - 1);
    }
}

TEST_CASE("memory logical operators have weight d and live on the right rows") {
    for (uint32_t d : {3u, 5u}) {
        for (pauli_type basis : {pauli_type::z, pauli_type::x}) {
            patch p = memory_patch(d, circuit_family::standard, basis);
            CHECK(p.logical_support.size() == d);
            // The string of type `basis` must commute with the opposite-type
            // plaquettes: even overlap everywhere.
            for (const stabiliser& g : p.stabilisers) {
                if (g.type == basis) continue;
                std::vector<int32_t> s = g.support();
                size_t overlap = 0;
                for (int32_t q : p.logical_support)
                    overlap += std::count(s.begin(), s.end(), q);
                CHECK(overlap % 2 == 0);
            }
            // Minimum over the coset modulo same-type stabilisers equals d.
            CHECK(min_coset_weight(p, basis) == d);
        }
    }
}

TEST_CASE("stability patch: X-type over-determined, rank one short") {
    patch p = stability_patch(4);
    CHECK(p.data_qubits.size() == 16);
    CHECK(p.stabilisers.size() == 17);
    CHECK(count_type(p, pauli_type::x) == 12);
    CHECK(count_type(p, pauli_type::z) == 5);
    CHECK(p.logical_support.empty());

    bitvec sym(p.n_qubits);
    std::map<int32_t, int> x_cover;
    for (const stabiliser& g : p.stabilisers) {
        if (g.type != pauli_type::x) continue;
        sym ^= support_mask(g, p.n_qubits);
        for (int32_t q : g.support()) ++x_cover[q];
    }
    CHECK_FALSE(sym.any());  // X-stabilisers multiply to identity
    for (int32_t q : p.data_qubits) CHECK(x_cover[q] == 2);

    gf2_matrix m(2 * p.n_qubits);
    for (const stabiliser& g : p.stabilisers) {
        bitvec row(2 * p.n_qubits);
        for (int32_t q : g.support())
            row.set(static_cast<size_t>(q) +
                    (g.type == pauli_type::x ? 0 : p.n_qubits));
        m.add_row(std::move(row));
    }
    CHECK(m.rank() == 16);

    for (size_t i = 0; i < p.stabilisers.size(); ++i)
        for (size_t j = i + 1; j < p.stabilisers.size(); ++j)
            CHECK(commutes(p.stabilisers[i], p.stabilisers[j]));
}

TEST_CASE("spreading patches add helpers exactly where the NW corner is missing") {
    patch p = stability_patch(4, circuit_family::spreading);
    CHECK(p.helper_qubits.size() == 4);

    std::set<int32_t> helpers(p.helper_qubits.begin(), p.helper_qubits.end());
    std::set<int32_t> partners;
    for (const stabiliser& g : p.stabilisers) {
        REQUIRE(g.spread_partner >= 0);
        CHECK(partners.insert(g.spread_partner).second);  // one spread per qubit
        std::vector<int32_t> s = g.support();
        if (helpers.count(g.spread_partner)) {
            // The helper stands in for the missing corner but never joins the
            // plaquette itself.
            CHECK(g.corner[nw] == -1);
            CHECK(std::count(s.begin(), s.end(), g.spread_partner) == 0);
        } else {
            CHECK(g.corner[nw] == g.spread_partner);
            CHECK(std::count(s.begin(), s.end(), g.spread_partner) == 1);
        }
    }
    // Helper-backed cells are the top and left boundary X-cells.
    size_t backed = 0;
    for (const stabiliser& g : p.stabilisers)
        if (helpers.count(g.spread_partner)) {
            ++backed;
            CHECK(g.weight() == 2);
            CHECK(g.type == pauli_type::x);
            CHECK((g.cell_a == -1 || g.cell_b == 3));
        }
    CHECK(backed == 4);

    patch m = memory_patch(5, circuit_family::spreading);
    std::set<int32_t> mh(m.helper_qubits.begin(), m.helper_qubits.end());
    for (const stabiliser& g : m.stabilisers) {
        REQUIRE(g.spread_partner >= 0);
        std::vector<int32_t> s = g.support();
        CHECK(std::count(s.begin(), s.end(), g.spread_partner) ==
              (mh.count(g.spread_partner) ? 0 : 1));
    }
    // Memory: helpers back the top X-cells and left Z-cells.
    for (const stabiliser& g : m.stabilisers)
        if (mh.count(g.spread_partner))
            CHECK(((g.type == pauli_type::x && g.cell_b == 4) ||
                   (g.type == pauli_type::z && g.cell_a == -1)));
}

TEST_CASE("squeezing patches duplicate auxiliaries with the paired geometry") {
    patch p = stability_patch(4, circuit_family::squeezing);
    size_t aux_total = 0;
    for (const stabiliser& g : p.stabilisers) {
        REQUIRE(g.auxiliaries.size() == 2);
        aux_total += 2;
        point p1 = p.coords[g.auxiliaries[0]], p2 = p.coords[g.auxiliaries[1]];
        if (g.type == pauli_type::x) {
            CHECK(p1.y == p2.y);  // side-by-side
            CHECK(p2.x - p1.x == q4::halves(1));
        } else {
            CHECK(p1.x == p2.x);  // stacked
            CHECK(p1.y - p2.y == q4::halves(1));
        }
    }
    CHECK(aux_total == 34);
    CHECK(p.n_qubits == 50);
    CHECK(stability_patch(4).n_qubits == 33);

    CHECK(memory_patch(3, circuit_family::squeezing).n_qubits == 9 + 16);
}

TEST_CASE("connectivity: square grid for standard, pair edges for squeezing") {
    patch p = memory_patch(3);
    auto edges = connectivity(p);
    std::map<int32_t, int> degree;
    for (auto [a, b] : edges) {
        ++degree[a];
        ++degree[b];
        // Plaquette edges are diagonal half-unit steps.
        point pa = p.coords[a], pb = p.coords[b];
        CHECK(std::abs((pa.x - pb.x).v) == 2);
        CHECK(std::abs((pa.y - pb.y).v) == 2);
    }
    for (auto [q, deg] : degree) CHECK(deg <= 4);

    patch s = stability_patch(4, circuit_family::squeezing);
    auto sedges = connectivity(s);
    std::map<int32_t, int> sdeg;
    for (auto [a, b] : sedges) {
        ++sdeg[a];
        ++sdeg[b];
    }
    for (const stabiliser& g : s.stabilisers) {
        int32_t a = std::min(g.auxiliaries[0], g.auxiliaries[1]);
        int32_t b = std::max(g.auxiliaries[0], g.auxiliaries[1]);
        CHECK(sedges.count({a, b}) == 1);
        CHECK(sdeg[a] <= 3);  // two corners + the partner
        CHECK(sdeg[b] <= 3);
    }
    for (int32_t q : s.data_qubits) CHECK(sdeg[q] <= 4);
}

TEST_CASE("bad sizes are rejected") {
    CHECK_THROWS_AS(memory_patch(4), std::invalid_argument);
    CHECK_THROWS_AS(memory_patch(1), std::invalid_argument);
    CHECK_THROWS_AS(stability_patch(5), std::invalid_argument);
    CHECK_THROWS_AS(stability_patch(2), std::invalid_argument);
}

TEST_CASE("json dump carries the pieces the CLI needs") {
    patch p = stability_patch(4, circuit_family::spreading);
    std::string j = patch_to_json(p);
    CHECK(j.find("\"experiment\": \"stability\"") != std::string::npos);
    CHECK(j.find("\"family\": \"spreading\"") != std::string::npos);
    CHECK(j.find("\"spread_partner\"") != std::string::npos);
    CHECK(j.find("\"helper\"") != std::string::npos);
}
