#include <doctest.h>

#include <algorithm>
#include <map>
#include <qecstab/builders.hpp>
#include <qecstab/dem.hpp>
#include <qecstab/noise.hpp>
#include <qecstab/sampler.hpp>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

using namespace qecstab;

namespace {

struct setup {
    circuit_program p;
    std::vector<error_mechanism> ms;
};

setup make(experiment_kind kind, uint32_t size, circuit_family fam, reset_scheme rs, uint32_t n) {
    patch pa = kind == experiment_kind::memory ? memory_patch(size, fam)
                                               : stability_patch(size, fam);
    circuit_program low = lower(build(pa, {rs, n}).program);
    noise_model m;
    m.p = 1e-3;
    std::vector<error_mechanism> ms = apply_noise(low, m);
    return {std::move(low), std::move(ms)};
}

// A chain of independent single-qubit readouts: rz, mz, one detector per
// record, coordinates (i, 0, 0), one observable over record 0.
circuit_program chain_program(uint32_t n) {
    circuit_program p;
    p.n_qubits = n;
    std::vector<operation> inits, reads;
    for (uint32_t q = 0; q < n; ++q) {
        inits.push_back(op1(op_kind::rz, int32_t(q)));
        operation mz = op1(op_kind::mz, int32_t(q));
        mz.record = int32_t(q);
        reads.push_back(mz);
        p.detectors.push_back({{q}, q4::of(int32_t(q)), q4::of(0), q4::of(0)});
    }
    p.layers.push_back(make_layer(std::move(inits)));
    p.layers.push_back(make_layer(std::move(reads)));
    p.observables.push_back({"first", {0}});
    return p;
}

error_mechanism flips(double q, std::vector<int32_t> qubits,
                      fault_kind kind = fault_kind::gate) {
    error_mechanism e{q, 1, kind, {}, -1};
    for (int32_t i : qubits) e.paulis.push_back({i, pauli::x});
    return e;
}

std::vector<uint32_t> sym_diff(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    std::vector<uint32_t> out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(out));
    return out;
}

}  // namespace

TEST_CASE("extraction matches forcing every mechanism through the sampler") {
    for (setup s : {make(experiment_kind::memory, 3, circuit_family::standard, reset_scheme::nr, 2),
                    make(experiment_kind::stability, 4, circuit_family::spreading, reset_scheme::nr, 2),
                    make(experiment_kind::stability, 4, circuit_family::squeezing, reset_scheme::nr, 2)}) {
        detector_error_model dem = extract(s.p, s.ms);
        REQUIRE(dem.detectors.size() == s.p.detectors.size());
        REQUIRE(dem.n_observables == 1);

        std::map<std::pair<std::vector<uint32_t>, uint32_t>, dem_mechanism> merged;
        for (uint32_t i = 0; i < s.ms.size(); ++i) {
            std::vector<error_mechanism> forced = s.ms;
            for (error_mechanism& e : forced) e.probability = 0;
            forced[i].probability = 1;
            sample_block b = sample(s.p, forced, 1, 9);
            std::vector<uint32_t> dets;
            uint32_t obs = 0;
            for (uint32_t d = 0; d < b.n_detectors; ++d)
                if (b.det(d, 0)) dets.push_back(d);
            if (b.obs(0, 0)) obs = 1;
            if (dets.empty() && !obs) continue;
            bool tl = s.ms[i].kind == fault_kind::meas_flip ||
                      s.ms[i].kind == fault_kind::classification;
            auto [it, fresh] = merged.try_emplace({dets, obs});
            dem_mechanism& m = it->second;
            if (fresh) {
                m.probability = s.ms[i].probability;
                m.timelike = tl;
            } else {
                m.probability =
                    m.probability + s.ms[i].probability - 2 * m.probability * s.ms[i].probability;
                m.timelike |= tl;
            }
        }

        REQUIRE(dem.mechanisms.size() == merged.size());
        for (const dem_mechanism& m : dem.mechanisms) {
            auto it = merged.find({m.detectors, m.observables});
            REQUIRE(it != merged.end());
            CHECK(m.probability == doctest::Approx(it->second.probability).epsilon(1e-12));
            CHECK(m.timelike == it->second.timelike);
        }
        CHECK(std::is_sorted(dem.mechanisms.begin(), dem.mechanisms.end(),
                             [](const dem_mechanism& a, const dem_mechanism& b) {
                                 return std::tie(a.detectors, a.observables) <
                                        std::tie(b.detectors, b.observables);
                             }));
    }
}

TEST_CASE("identical signatures merge and invisible mechanisms drop") {
    circuit_program p = chain_program(1);
    std::vector<error_mechanism> ms = {
        flips(0.25, {0}),
        flips(0.125, {0}, fault_kind::meas_flip),
        {0.5, 1, fault_kind::gate, {{0, pauli::z}}, -1},  // commutes with the readout
    };
    detector_error_model dem = extract(p, ms);
    REQUIRE(dem.mechanisms.size() == 1);
    const dem_mechanism& m = dem.mechanisms[0];
    CHECK(m.detectors == std::vector<uint32_t>{0});
    CHECK(m.observables == 1);
    CHECK(m.probability == 0.25 + 0.125 - 2 * 0.25 * 0.125);
    CHECK(m.timelike);
    CHECK(m.source == 0);
    CHECK(m.source_layer == 1);

    detector_error_model twice = extract(p, {flips(0.3, {0}), flips(0.3, {0})});
    REQUIRE(twice.mechanisms.size() == 1);
    CHECK(twice.mechanisms[0].probability == doctest::Approx(2 * 0.3 * 0.7).epsilon(1e-15));
    CHECK(!twice.mechanisms[0].timelike);
}

TEST_CASE("hyperedge decomposition is exact and grounded in elementary signatures") {
    for (setup s : {make(experiment_kind::stability, 4, circuit_family::spreading, reset_scheme::nr, 3),
                    make(experiment_kind::memory, 3, circuit_family::spreading, reset_scheme::nr, 2),
                    make(experiment_kind::stability, 4, circuit_family::squeezing, reset_scheme::nr, 2)}) {
        detector_error_model dem = decompose(extract(s.p, s.ms));
        std::set<std::pair<std::vector<uint32_t>, uint32_t>> elementary;
        for (const dem_mechanism& m : dem.mechanisms)
            if (m.detectors.size() <= 2) elementary.insert({m.detectors, m.observables});

        int big = 0, pairs = 0;
        for (const dem_mechanism& m : dem.mechanisms) {
            if (m.detectors.size() <= 2) {
                CHECK(m.decomposition.empty());
                continue;
            }
            ++big;
            REQUIRE(m.decomposition.size() >= 2);
            pairs += m.decomposition.size() == 2;
            std::vector<uint32_t> folded;
            uint32_t obs = 0;
            size_t total = 0;
            for (const dem_component& c : m.decomposition) {
                CHECK(c.detectors.size() <= 2);
                CHECK(elementary.count({c.detectors, c.observables}));
                folded = sym_diff(folded, c.detectors);
                obs ^= c.observables;
                total += c.detectors.size();
            }
            CHECK(total == m.detectors.size());  // parts are disjoint
            CHECK(folded == m.detectors);
            CHECK(obs == m.observables);
        }
        CHECK(big > 0);
        CHECK(pairs > 0);  // the canonical two-part splits dominate
    }
}

TEST_CASE("decomposition prefers the likelier split") {
    circuit_program p = chain_program(4);
    std::vector<error_mechanism> ms = {
        flips(0.3, {0, 1}), flips(0.3, {2, 3}),   // the probable pairing
        flips(0.01, {0, 2}), flips(0.01, {1, 3}),
        flips(0.05, {0, 1, 2, 3}),
    };
    detector_error_model dem = decompose(extract(p, ms));
    const dem_mechanism* whole = nullptr;
    for (const dem_mechanism& m : dem.mechanisms)
        if (m.detectors.size() == 4) whole = &m;
    REQUIRE(whole != nullptr);
    REQUIRE(whole->decomposition.size() == 2);
    CHECK(whole->decomposition[0].detectors == std::vector<uint32_t>{0, 1});
    CHECK(whole->decomposition[1].detectors == std::vector<uint32_t>{2, 3});
}

TEST_CASE("undecomposable hyperedges fail loudly") {
    auto require_throw = [](const circuit_program& p, const std::vector<error_mechanism>& ms,
                            const char* needle) {
        bool threw = false;
        try {
            decompose(extract(p, ms));
        } catch (const std::runtime_error& e) {
            threw = true;
            CHECK(std::string(e.what()).find("undecomposable") != std::string::npos);
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
        CHECK(threw);
    };
    require_throw(chain_program(3), {flips(0.1, {0, 1, 2})}, "no elementary split");
    require_throw(chain_program(9), {flips(0.1, {0, 1, 2, 3, 4, 5, 6, 7, 8})}, "more than eight");
}

TEST_CASE("fault distance counts mechanisms on small instances") {
    struct row {
        circuit_family fam;
        reset_scheme rs;
        uint32_t n;
        uint32_t want;
    };
    // Readout chains set the stability distance: n with reset or helpers
    // backing every round, ceil(n/2) when plain no-reset halves it.
    for (row r : std::vector<row>{{circuit_family::standard, reset_scheme::ur, 2, 2},
                                  {circuit_family::standard, reset_scheme::ur, 3, 3},
                                  {circuit_family::standard, reset_scheme::nr, 2, 1},
                                  {circuit_family::standard, reset_scheme::nr, 3, 2},
                                  {circuit_family::standard, reset_scheme::cr, 2, 1},
                                  {circuit_family::standard, reset_scheme::cr, 3, 2},
                                  {circuit_family::spreading, reset_scheme::nr, 2, 2},
                                  {circuit_family::spreading, reset_scheme::nr, 3, 3},
                                  {circuit_family::squeezing, reset_scheme::nr, 2, 2},
                                  {circuit_family::squeezing, reset_scheme::nr, 3, 3}}) {
        setup s = make(experiment_kind::stability, 4, r.fam, r.rs, r.n);
        distance_result d = distance(extract(s.p, s.ms), 0);
        CAPTURE(to_string(r.fam));
        CAPTURE(to_string(r.rs));
        CAPTURE(r.n);
        CHECK(d.exact);
        CHECK(d.value == r.want);
    }

    // Memory keeps its spacelike distance under every family and scheme.
    struct mrow {
        circuit_family fam;
        reset_scheme rs;
    };
    for (mrow r : std::vector<mrow>{{circuit_family::standard, reset_scheme::ur},
                                    {circuit_family::standard, reset_scheme::cr},
                                    {circuit_family::standard, reset_scheme::nr},
                                    {circuit_family::spreading, reset_scheme::nr},
                                    {circuit_family::squeezing, reset_scheme::nr}}) {
        setup s = make(experiment_kind::memory, 3, r.fam, r.rs, 2);
        distance_result d = distance(extract(s.p, s.ms), 0);
        CAPTURE(to_string(r.fam));
        CAPTURE(to_string(r.rs));
        CHECK(d.exact);
        CHECK(d.value == 3);
    }
}

TEST_CASE("distance restriction, exhaustion and budget") {
    setup s = make(experiment_kind::stability, 4, circuit_family::spreading, reset_scheme::nr, 2);
    detector_error_model dem = extract(s.p, s.ms);
    distance_result timelike = distance(dem, 0, mech_filter::timelike_only);
    CHECK(timelike.exact);
    CHECK(timelike.value == 2);

    distance_result capped = distance(dem, 0, mech_filter::all, 1);
    CHECK(!capped.exact);
    CHECK(capped.value >= 1);

    // A lone gate fault leaves nothing timelike: the flip becomes unreachable.
    detector_error_model lone = extract(chain_program(1), {flips(0.1, {0})});
    distance_result none = distance(lone, 0, mech_filter::timelike_only);
    CHECK(none.exact);
    CHECK(none.value == 0);

    CHECK_THROWS_AS(distance(lone, 1), std::invalid_argument);
}

TEST_CASE("text dump lists detectors then sorted mechanisms with splits") {
    circuit_program p = chain_program(3);
    p.detectors[1].x = q4{6};  // 1.5: exercise fractional coordinates
    p.detectors[1].y = q4{1};  // 0.25
    std::vector<error_mechanism> ms = {
        flips(0.125, {0, 1, 2}),
        flips(0.25, {0}),
        flips(0.0625, {1, 2}),
    };
    detector_error_model dem = decompose(extract(p, ms));
    std::ostringstream os;
    dump(dem, os);
    CHECK(os.str() ==
          "detector (0,0,0) D0\n"
          "detector (1.5,0.25,0) D1\n"
          "detector (2,0,0) D2\n"
          "error(0.25) D0 L0\n"
          "error(0.125) D0 D1 D2 L0 ^ D0 L0 ^ D1 D2\n"
          "error(0.0625) D1 D2\n");
}
