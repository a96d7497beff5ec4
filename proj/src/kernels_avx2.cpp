#include <immintrin.h>

#include "nilforge/kernels.hpp"

namespace nilforge::kern {

// Modular reduction is a bitwise AND, so lane-wise uint16 wraparound plus the
// mask matches scalar arithmetic exactly.

void diff_table_avx2(uint16_t* dst, const uint16_t* src, size_t size, size_t h, uint16_t mask) {
    const __m256i vmask = _mm256_set1_epi16(static_cast<short>(mask));
    size_t i = 0;
    if (h >= 16) {
        // i ^ h is contiguous across a 16-lane block when h has no low bits
        // inside the block; (h & 15) != 0 falls through to scalar.
        if ((h & 15) == 0) {
            for (; i + 16 <= size; i += 16) {
                __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + (i ^ h)));
                __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
                __m256i d = _mm256_and_si256(_mm256_sub_epi16(a, b), vmask);
                _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), d);
            }
        }
    }
    for (; i < size; ++i)
        dst[i] = static_cast<uint16_t>((src[i ^ h] - src[i]) & mask);
}

void accum_table_avx2(uint16_t* dst, const uint16_t* src, size_t size, uint16_t mask) {
    const __m256i vmask = _mm256_set1_epi16(static_cast<short>(mask));
    size_t i = 0;
    for (; i + 16 <= size; i += 16) {
        __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        __m256i d = _mm256_and_si256(_mm256_add_epi16(a, b), vmask);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), d);
    }
    for (; i < size; ++i)
        dst[i] = static_cast<uint16_t>((dst[i] + src[i]) & mask);
}

}  // namespace nilforge::kern
