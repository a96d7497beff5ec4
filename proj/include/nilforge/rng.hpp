#pragma once
// Deterministic, splittable RNG (splitmix64-seeded xoshiro256**).  All
// randomized paths in the library draw from this so that (seed, threads)
// pins every output bit-for-bit across platforms.

#include <cstdint>

namespace nilforge {

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
  public:
    explicit Rng(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    uint64_t next() {
        uint64_t result = rotl(s_[1] * 5, 7) * 9;
        uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0, n) by rejection; n >= 1
    uint64_t below(uint64_t n) {
        if (n <= 1) return 0;
        uint64_t lim = ~uint64_t(0) - (~uint64_t(0) % n);
        uint64_t v;
        do {
            v = next();
        } while (v >= lim);
        return v % n;
    }

    uint64_t bits(unsigned k) { return k == 0 ? 0 : (next() >> (64 - k)); }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // independent stream derived from this seed and a stream id
    Rng split(uint64_t stream) const {
        uint64_t sm = s_[0] ^ (0xa0761d6478bd642fULL * (stream + 1));
        return Rng(splitmix64(sm) ^ s_[3]);
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

}  // namespace nilforge
