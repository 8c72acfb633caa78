#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qecstab {

inline constexpr const char* version_string = "0.1.0";

// Spatial and temporal coordinates are exact quarter-integers: data qubits sit
// at integer points, plaquette auxiliaries at half-integer centres, the
// two-auxiliary layout needs quarters, and cross-round detectors use
// half-integer times.  Stored as a count of quarters so comparison is exact.
struct q4 {
    int32_t v = 0;

    static constexpr q4 of(int32_t units) { return q4{units * 4}; }
    static constexpr q4 quarters(int32_t n) { return q4{n}; }
    static constexpr q4 halves(int32_t n) { return q4{n * 2}; }

    constexpr double to_double() const { return v / 4.0; }
    constexpr bool is_integer() const { return v % 4 == 0; }
    constexpr int32_t floor_units() const { return (v >= 0 ? v : v - 3) / 4; }

    friend constexpr bool operator==(q4 a, q4 b) { return a.v == b.v; }
    friend constexpr bool operator!=(q4 a, q4 b) { return a.v != b.v; }
    friend constexpr bool operator<(q4 a, q4 b) { return a.v < b.v; }
    friend constexpr q4 operator+(q4 a, q4 b) { return q4{a.v + b.v}; }
    friend constexpr q4 operator-(q4 a, q4 b) { return q4{a.v - b.v}; }
};

// Canonical text form: integer part plus one of "", ".25", ".5", ".75".
inline std::string to_string(q4 c) {
    std::string s;
    int32_t v = c.v;
    if (v < 0) {
        s += '-';
        v = -v;
    }
    s += std::to_string(v / 4);
    switch (v % 4) {
        case 1: s += ".25"; break;
        case 2: s += ".5"; break;
        case 3: s += ".75"; break;
        default: break;
    }
    return s;
}

inline q4 q4_parse(const std::string& s) {
    size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
    size_t digits = 0;
    int64_t units = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
        units = units * 10 + (s[i] - '0');
        ++i;
        ++digits;
    }
    int32_t quarter = 0;
    if (i < s.size() && s[i] == '.') {
        std::string frac = s.substr(i + 1);
        if (frac == "25")
            quarter = 1;
        else if (frac == "5" || frac == "50")
            quarter = 2;
        else if (frac == "75")
            quarter = 3;
        else if (frac != "0" && frac != "00")
            throw std::invalid_argument("not a quarter-unit coordinate: " + s);
        i = s.size();
    }
    if (digits == 0 || i != s.size())
        throw std::invalid_argument("bad coordinate: " + s);
    int64_t q = units * 4 + quarter;
    return q4{static_cast<int32_t>(neg ? -q : q)};
}

struct point {
    q4 x, y;
    friend constexpr bool operator==(point a, point b) { return a.x == b.x && a.y == b.y; }
    friend constexpr bool operator!=(point a, point b) { return !(a == b); }
    friend constexpr bool operator<(point a, point b) {
        return a.x.v != b.x.v ? a.x.v < b.x.v : a.y.v < b.y.v;
    }
};

inline std::string to_string(point p) { return to_string(p.x) + " " + to_string(p.y); }

// splitmix64: cheap, well-mixed stream for counter-based seeding.
inline constexpr uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline constexpr uint64_t hash_mix(uint64_t a, uint64_t b) {
    return splitmix64(a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2)));
}

}  // namespace qecstab
