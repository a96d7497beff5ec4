#pragma once
// Exact arithmetic in the dyadic torus subgroups (1/2^r)Z/Z of R/Z, and the
// cyclic groups Z/4Z used by the binomial-coefficient map.

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace nilforge {

// Element of (1/2^r)Z/Z in canonical form: num odd, or num == 0 and lev == 0.
// Canonical form makes operator== exact function equality.
struct Dyadic {
    uint64_t num = 0;
    uint32_t lev = 0;

    static constexpr uint32_t kMaxLevel = 62;

    constexpr Dyadic() = default;

    // num/2^lev mod 1, canonicalized.
    static Dyadic make(uint64_t num, uint32_t lev);

    // 1/2^lev
    static Dyadic unit(uint32_t lev) { return make(1, lev); }

    bool is_zero() const { return num == 0; }

    // numerator at a coarser-or-equal level r >= lev
    uint64_t num_at_level(uint32_t r) const;

    friend bool operator==(const Dyadic&, const Dyadic&) = default;

    Dyadic operator+(const Dyadic& o) const;
    Dyadic operator-() const;
    Dyadic operator-(const Dyadic& o) const { return *this + (-o); }

    // integer scaling m * (num/2^lev)
    Dyadic scale(int64_t m) const;
    // exact pointwise halving: returns x with 2x == *this (numerator kept).
    Dyadic half() const;

    // "3/8", "0/1"
    std::string str() const;
    static std::optional<Dyadic> parse(const std::string& s);

    bool operator<(const Dyadic& o) const {
        // total order on canonical forms (for map keys), not the circle order
        return lev != o.lev ? lev < o.lev : num < o.num;
    }
};

std::complex<double> e_phase(const Dyadic& a);

struct Z4 {
    uint8_t v = 0;  // mod 4
    constexpr Z4() = default;
    constexpr explicit Z4(int x) : v(static_cast<uint8_t>(((x % 4) + 4) % 4)) {}
    friend bool operator==(const Z4&, const Z4&) = default;
    Z4 operator+(Z4 o) const { return Z4((v + o.v) & 3); }
    Z4 operator-(Z4 o) const { return Z4((v + 4 - o.v) & 3); }
    Z4 operator*(Z4 o) const { return Z4((v * o.v) & 3); }
};

// n -> C(n,2) mod 2 on Z/4Z: 0 for n = 0,1 and 1 for n = 2,3.
inline int binom2(Z4 a) { return (a.v == 2 || a.v == 3) ? 1 : 0; }
inline int binom2(int a) { return binom2(Z4(a)); }

}  // namespace nilforge
