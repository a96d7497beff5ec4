#pragma once
// Dense-table inner loops shared by the norm engines and the full-domain
// evaluators.  Tables hold numerators mod 2^L (L <= 16) indexed by points of
// F_2^n, so x + h is index XOR.  Each kernel has a scalar reference
// implementation and an AVX2 variant selected once at startup; the two are
// equivalence-tested bit-for-bit.

#include <cstddef>
#include <cstdint>

namespace nilforge::kern {

// dst[i] = (src[i ^ h] - src[i]) mod 2^L   (the difference table of a phase)
using DiffFn = void (*)(uint16_t* dst, const uint16_t* src, size_t size, size_t h, uint16_t mask);
// dst[i] = (dst[i] + src[i]) mod 2^L       (subset-sum sweep building block)
using AccumFn = void (*)(uint16_t* dst, const uint16_t* src, size_t size, uint16_t mask);

void diff_table_scalar(uint16_t* dst, const uint16_t* src, size_t size, size_t h, uint16_t mask);
void accum_table_scalar(uint16_t* dst, const uint16_t* src, size_t size, uint16_t mask);

#if defined(NILFORGE_BUILD_AVX2)
void diff_table_avx2(uint16_t* dst, const uint16_t* src, size_t size, size_t h, uint16_t mask);
void accum_table_avx2(uint16_t* dst, const uint16_t* src, size_t size, uint16_t mask);
#endif

extern const DiffFn diff_table;
extern const AccumFn accum_table;

const char* active_backend();

// counts[v] += occurrences of v in src (v < (mask+1)); scalar on all targets
void histogram(const uint16_t* src, size_t size, uint64_t* counts, uint16_t mask);

// In-place subset-sum (zeta) sweep over the n-bit index lattice:
// t[x] = sum over subsets s of x of original t[s], all mod 2^L.
void subset_sum(uint16_t* t, unsigned n, uint16_t mask);

}  // namespace nilforge::kern
