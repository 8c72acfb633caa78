#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "frame.hpp"
#include "noise.hpp"

namespace qecstab {

struct dem_component {
    std::vector<uint32_t> detectors;  // sorted
    uint32_t observables = 0;
    friend bool operator==(const dem_component&, const dem_component&) = default;
};

// One merged error process: fires independently, toggling its detectors and
// observables.  `timelike` marks processes fed by at least one readout fault
// (qubit flip before measurement or record misclassification).
struct dem_mechanism {
    double probability = 0;
    std::vector<uint32_t> detectors;  // sorted
    uint32_t observables = 0;         // bit o set = observable o flips
    bool timelike = false;
    uint32_t source = 0;        // first contributing circuit mechanism
    uint32_t source_layer = 0;  //   and its anchor layer, for diagnostics
    std::vector<dem_component> decomposition;  // filled by decompose()
};

struct detector_error_model {
    std::vector<detector> detectors;  // coordinates, copied from the program
    uint32_t n_observables = 0;
    std::vector<dem_mechanism> mechanisms;  // sorted by (detectors, observables)
};

// Propagate every circuit mechanism through one frame walk (64 per pass) and
// merge identical (detector set, observable set) signatures with
// q = q1(1-q2) + q2(1-q1).  Mechanisms that flip nothing are dropped.
// Requires a program whose detectors/observables are deterministic parities
// (reference_check); the walk itself would not notice a nondeterministic set.
inline detector_error_model extract(const circuit_program& p,
                                    const std::vector<error_mechanism>& mechs) {
    detector_error_model dem;
    dem.detectors = p.detectors;
    dem.n_observables = static_cast<uint32_t>(p.observables.size());
    if (dem.n_observables > 32)
        throw std::invalid_argument("extract: more than 32 observables");

    frame_batch fb;
    std::map<std::pair<std::vector<uint32_t>, uint32_t>, size_t> index;
    uint64_t row = 0;
    for (size_t base = 0; base < mechs.size(); base += 64) {
        const uint32_t n = static_cast<uint32_t>(std::min<size_t>(64, mechs.size() - base));
        fb.reset(p.n_qubits, record_count(p), 1);
        run_frames(p, mechs, fb, [&](uint32_t i, uint64_t* dst) {
            dst[0] = i - base < n ? uint64_t(1) << (i - base) : 0;
            return dst[0] != 0;
        });
        std::vector<std::vector<uint32_t>> dets(n);
        std::vector<uint32_t> obs(n, 0);
        for (uint32_t d = 0; d < p.detectors.size(); ++d) {
            record_parity(fb, p.detectors[d].records, &row);
            for (uint64_t w = row; w; w &= w - 1)
                dets[std::countr_zero(w)].push_back(d);
        }
        for (uint32_t o = 0; o < dem.n_observables; ++o) {
            record_parity(fb, p.observables[o].records, &row);
            for (uint64_t w = row; w; w &= w - 1) obs[std::countr_zero(w)] |= uint32_t(1) << o;
        }
        for (uint32_t b = 0; b < n; ++b) {
            if (dets[b].empty() && obs[b] == 0) continue;
            const error_mechanism& src = mechs[base + b];
            bool tl = src.kind == fault_kind::meas_flip || src.kind == fault_kind::classification;
            auto [it, fresh] = index.try_emplace({dets[b], obs[b]}, dem.mechanisms.size());
            if (fresh) {
                dem.mechanisms.push_back({src.probability, std::move(dets[b]), obs[b], tl,
                                          static_cast<uint32_t>(base + b), src.layer, {}});
            } else {
                dem_mechanism& m = dem.mechanisms[it->second];
                m.probability = m.probability + src.probability -
                                2 * m.probability * src.probability;
                m.timelike |= tl;
            }
        }
    }
    std::sort(dem.mechanisms.begin(), dem.mechanisms.end(),
              [](const dem_mechanism& a, const dem_mechanism& b) {
                  return std::tie(a.detectors, a.observables) <
                         std::tie(b.detectors, b.observables);
              });
    return dem;
}

namespace detail {

inline std::string describe(const detector_error_model& dem, const dem_mechanism& m) {
    std::string s = "mechanism " + std::to_string(m.source) + " (layer " +
                    std::to_string(m.source_layer) + ", detectors";
    for (uint32_t d : m.detectors) {
        const detector& c = dem.detectors[d];
        s += " D" + std::to_string(d) + "@(" + to_string(c.x) + "," + to_string(c.y) + "," +
             to_string(c.t) + ")";
    }
    return s + ")";
}

}  // namespace detail

// Annotate every mechanism of three or more detectors with an exact split
// into parts that already occur as elementary (<=2-detector) signatures.
// Parts partition the detector set; observables split freely.  The fewest
// parts win, then the largest combined probability, then detector-id order.
inline detector_error_model decompose(detector_error_model dem) {
    std::map<std::pair<std::vector<uint32_t>, uint32_t>, double> simple;
    std::map<std::vector<uint32_t>, std::vector<uint32_t>> masks_of;
    for (const dem_mechanism& m : dem.mechanisms)
        if (m.detectors.size() <= 2) {
            simple[{m.detectors, m.observables}] = m.probability;
            masks_of[m.detectors].push_back(m.observables);
        }

    using partition = std::vector<std::vector<uint32_t>>;
    for (dem_mechanism& m : dem.mechanisms) {
        if (m.detectors.size() <= 2) continue;
        if (m.detectors.size() > 8)
            throw std::runtime_error("undecomposable " + detail::describe(dem, m) +
                                     ": more than eight detectors");
        const auto& D = m.detectors;
        // All partitions into parts of one or two detectors, each part led by
        // the smallest detector it covers; fewest parts tried first.
        std::vector<partition> shapes;
        partition cur;
        auto gen = [&](auto&& self, const std::vector<uint32_t>& remaining) -> void {
            if (remaining.empty()) {
                shapes.push_back(cur);
                return;
            }
            std::vector<uint32_t> rest(remaining.begin() + 1, remaining.end());
            cur.push_back({remaining[0]});
            self(self, rest);
            cur.pop_back();
            for (size_t k = 0; k < rest.size(); ++k) {
                cur.push_back({remaining[0], rest[k]});
                std::vector<uint32_t> next = rest;
                next.erase(next.begin() + static_cast<ptrdiff_t>(k));
                self(self, next);
                cur.pop_back();
            }
        };
        gen(gen, D);
        std::stable_sort(shapes.begin(), shapes.end(),
                         [](const partition& a, const partition& b) { return a.size() < b.size(); });

        double best = -1;
        std::vector<dem_component> found;
        size_t best_parts = 0;
        std::vector<uint32_t> chosen;
        for (const partition& parts : shapes) {
            if (best >= 0 && parts.size() > best_parts) break;  // fewest parts settled
            chosen.assign(parts.size(), 0);
            auto rec = [&](auto&& self, size_t idx, uint32_t acc, double sum) -> void {
                if (idx + 1 == parts.size()) {
                    const uint32_t need = m.observables ^ acc;
                    auto it = simple.find({parts[idx], need});
                    if (it == simple.end() || sum + it->second <= best) return;
                    best = sum + it->second;
                    best_parts = parts.size();
                    chosen[idx] = need;
                    found.clear();
                    for (size_t k = 0; k < parts.size(); ++k)
                        found.push_back({parts[k], chosen[k]});
                    return;
                }
                auto mi = masks_of.find(parts[idx]);
                if (mi == masks_of.end()) return;
                for (uint32_t o : mi->second) {
                    chosen[idx] = o;
                    self(self, idx + 1, acc ^ o, sum + simple.find({parts[idx], o})->second);
                }
            };
            rec(rec, 0, 0, 0);
        }
        if (best < 0)
            throw std::runtime_error("undecomposable " + detail::describe(dem, m) +
                                     ": no elementary split");
        m.decomposition = std::move(found);
    }
    return dem;
}

enum class mech_filter : uint8_t { all, timelike_only };

// distance(): value/exact semantics.
//   exact && value > 0   the minimum number of mechanisms producing an
//                        undetected flip of the observable is exactly value
//   exact && value == 0  no mechanism set flips it undetected at all
//   !exact               search hit the state budget; distance >= value
struct distance_result {
    uint32_t value = 0;
    bool exact = false;
};

// Exact minimum-weight undetectable logical flip by breadth-first search over
// residual syndromes.  Moves are whole mechanisms (hyperedges count one).
// Expansion is anchored: from a dirty state only mechanisms covering the
// lowest dirty detector apply — some remaining move of any solution must
// clear it, and moves commute, so the restriction is lossless.
inline distance_result distance(const detector_error_model& dem, uint32_t observable,
                                mech_filter filter = mech_filter::all,
                                uint64_t state_budget = 4'000'000) {
    if (observable >= dem.n_observables)
        throw std::invalid_argument("distance: no such observable");

    struct move {
        std::vector<uint32_t> dets;
        uint32_t flip;
    };
    std::vector<move> moves;
    {
        std::set<std::pair<std::vector<uint32_t>, uint32_t>> seen;
        for (const dem_mechanism& m : dem.mechanisms) {
            if (filter == mech_filter::timelike_only && !m.timelike) continue;
            uint32_t flip = m.observables >> observable & 1;
            if (m.detectors.empty() && !flip) continue;
            if (seen.insert({m.detectors, flip}).second) moves.push_back({m.detectors, flip});
        }
    }
    std::vector<std::vector<uint32_t>> at(dem.detectors.size());
    for (uint32_t i = 0; i < moves.size(); ++i)
        for (uint32_t d : moves[i].dets) at[d].push_back(i);

    // State: sorted dirty detectors plus a trailing flip sentinel.
    constexpr uint32_t sentinel = 0x80000000u;
    auto vec_hash = [](const std::vector<uint32_t>& v) {
        uint64_t h = 0x6b43a9b5;
        for (uint32_t x : v) h = hash_mix(h, x);
        return size_t(h);
    };
    std::unordered_set<std::vector<uint32_t>, decltype(vec_hash)> visited(1 << 16, vec_hash);
    std::vector<std::vector<uint32_t>> frontier{{sentinel}}, next;
    visited.insert(frontier[0]);

    std::vector<uint32_t> merged;
    for (uint32_t depth = 1; !frontier.empty(); ++depth) {
        next.clear();
        for (const std::vector<uint32_t>& state : frontier) {
            const uint32_t flip = state.back() & 1;
            const size_t nd = state.size() - 1;
            const uint32_t n_cand = nd ? uint32_t(at[state[0]].size()) : uint32_t(moves.size());
            for (uint32_t ci = 0; ci < n_cand; ++ci) {
                const move& mv = moves[nd ? at[state[0]][ci] : ci];
                merged.clear();
                std::set_symmetric_difference(state.begin(), state.begin() + nd,
                                              mv.dets.begin(), mv.dets.end(),
                                              std::back_inserter(merged));
                uint32_t f = flip ^ mv.flip;
                if (merged.empty() && f) return {depth, true};
                merged.push_back(sentinel | f);
                if (visited.insert(merged).second) {
                    if (visited.size() > state_budget) return {depth, false};
                    next.push_back(merged);
                }
            }
        }
        frontier.swap(next);
    }
    return {0, true};  // reachable space exhausted: nothing flips it silently
}

// Stable text form, one line per detector then per mechanism:
//   detector (<x>,<y>,<t>) D<i>
//   error(<q>) D<i> D<j> ... L<k> [^ D.. L.. ^ D.. L..]
inline void dump(const detector_error_model& dem, std::ostream& os) {
    for (size_t d = 0; d < dem.detectors.size(); ++d) {
        const detector& c = dem.detectors[d];
        os << "detector (" << to_string(c.x) << "," << to_string(c.y) << "," << to_string(c.t)
           << ") D" << d << "\n";
    }
    char buf[32];
    auto part = [&](const std::vector<uint32_t>& dets, uint32_t obs) {
        for (uint32_t d : dets) os << " D" << d;
        for (uint32_t o = 0; o < dem.n_observables; ++o)
            if (obs >> o & 1) os << " L" << o;
    };
    for (const dem_mechanism& m : dem.mechanisms) {
        std::snprintf(buf, sizeof buf, "%.9g", m.probability);
        os << "error(" << buf << ")";
        part(m.detectors, m.observables);
        for (const dem_component& c : m.decomposition) {
            os << " ^";
            part(c.detectors, c.observables);
        }
        os << "\n";
    }
}

}  // namespace qecstab
