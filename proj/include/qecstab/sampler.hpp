#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "common.hpp"
#include "frame.hpp"
#include "validate.hpp"

namespace qecstab {

// Detector/observable flips for a block of shots, row-major per detector:
// shot s of row d is bit s%64 of detectors[d * words + s/64].
struct sample_block {
    uint64_t seed = 0;
    uint32_t shots = 0;
    uint32_t words = 0;
    uint32_t n_detectors = 0;
    uint32_t n_observables = 0;
    std::vector<uint64_t> detectors, observables;

    bool det(uint32_t d, uint32_t s) const {
        return detectors[size_t(d) * words + s / 64] >> (s % 64) & 1;
    }
    bool obs(uint32_t o, uint32_t s) const {
        return observables[size_t(o) * words + s / 64] >> (s % 64) & 1;
    }
};

inline constexpr uint32_t batch_shots = 16384;  // 256 words; batches are RNG-independent

namespace detail {

// Firing mask for one (seed, mechanism, batch) triple: a counter-based
// splitmix64 stream drives geometric jumps between firing shots, so cost
// scales with expected firings.  The mask never depends on other mechanisms,
// other batches, or the thread that computes it.
inline bool fill_firing(uint64_t seed, uint32_t mech, uint64_t batch, double q, uint32_t shots,
                        uint64_t* dst, uint32_t words) {
    std::fill(dst, dst + words, 0);
    if (q <= 0) return false;
    if (q >= 1) {
        for (uint32_t s = 0; s < shots; ++s) dst[s / 64] |= uint64_t(1) << (s % 64);
        return true;
    }
    uint64_t state = hash_mix(hash_mix(seed, mech), batch);
    const double denom = std::log1p(-q);
    uint64_t k = 0;
    double pos = -1;
    bool any = false;
    for (;;) {
        double u = double((splitmix64(state + k++) >> 11) + 1) * 0x1.0p-53;  // (0,1]
        pos += 1 + std::floor(std::log(u) / denom);
        if (!(pos < shots)) break;
        uint32_t s = uint32_t(pos);
        dst[s / 64] |= uint64_t(1) << (s % 64);
        any = true;
    }
    return any;
}

}  // namespace detail

// One batch of up to batch_shots shots.  dets/obss are filled row-major at
// ceil(shots/64) words per row.
inline void sample_batch(const circuit_program& p, const std::vector<error_mechanism>& mechs,
                         uint64_t seed, uint64_t batch_idx, uint32_t shots, frame_batch& fb,
                         std::vector<uint64_t>& dets, std::vector<uint64_t>& obss) {
    if (shots == 0 || shots > batch_shots) throw std::invalid_argument("sample_batch: bad shots");
    const uint32_t words = (shots + 63) / 64;
    fb.reset(p.n_qubits, record_count(p), words);
    run_frames(p, mechs, fb, [&](uint32_t i, uint64_t* dst) {
        return detail::fill_firing(seed, i, batch_idx, mechs[i].probability, shots, dst, words);
    });
    dets.resize(size_t(p.detectors.size()) * words);
    obss.resize(size_t(p.observables.size()) * words);
    for (size_t d = 0; d < p.detectors.size(); ++d)
        record_parity(fb, p.detectors[d].records, dets.data() + d * words);
    for (size_t o = 0; o < p.observables.size(); ++o)
        record_parity(fb, p.observables[o].records, obss.data() + o * words);
}

// Detection events and observable flips for `shots` shots.  Batches are
// keyed by (seed, batch index) alone, so any scheduling of the batch loop —
// including none, as here — produces identical bits.
inline sample_block sample(const circuit_program& p, const std::vector<error_mechanism>& mechs,
                           uint32_t shots, uint64_t seed) {
    sample_block out;
    out.seed = seed;
    out.shots = shots;
    out.words = (shots + 63) / 64;
    out.n_detectors = uint32_t(p.detectors.size());
    out.n_observables = uint32_t(p.observables.size());
    out.detectors.assign(size_t(out.n_detectors) * out.words, 0);
    out.observables.assign(size_t(out.n_observables) * out.words, 0);

    frame_batch fb;
    std::vector<uint64_t> dets, obss;
    for (uint64_t b = 0, done = 0; done < shots; ++b) {
        uint32_t n = uint32_t(std::min<uint64_t>(batch_shots, shots - done));
        sample_batch(p, mechs, seed, b, n, fb, dets, obss);
        uint32_t bw = (n + 63) / 64;
        for (uint32_t d = 0; d < out.n_detectors; ++d)
            std::copy(dets.begin() + size_t(d) * bw, dets.begin() + size_t(d) * bw + bw,
                      out.detectors.begin() + size_t(d) * out.words + done / 64);
        for (uint32_t o = 0; o < out.n_observables; ++o)
            std::copy(obss.begin() + size_t(o) * bw, obss.begin() + size_t(o) * bw + bw,
                      out.observables.begin() + size_t(o) * out.words + done / 64);
        done += n;
    }
    return out;
}

// Sampled bits are flips against the noiseless reference, which only exists
// when every detector and observable parity is deterministic.
inline bool reference_check(const circuit_program& p) { return validate(p).empty(); }

// One line per shot: detector bits as a 0/1 string, a space, observable bits.
inline void dump_samples(const sample_block& b, std::ostream& os) {
    for (uint32_t s = 0; s < b.shots; ++s) {
        std::string line(b.n_detectors + 1 + b.n_observables, ' ');
        for (uint32_t d = 0; d < b.n_detectors; ++d) line[d] = b.det(d, s) ? '1' : '0';
        for (uint32_t o = 0; o < b.n_observables; ++o)
            line[b.n_detectors + 1 + o] = b.obs(o, s) ? '1' : '0';
        os << line << '\n';
    }
}

}  // namespace qecstab
