#include "nilforge/kernels.hpp"

namespace nilforge::kern {

void diff_table_scalar(uint16_t* dst, const uint16_t* src, size_t size, size_t h, uint16_t mask) {
    for (size_t i = 0; i < size; ++i)
        dst[i] = static_cast<uint16_t>((src[i ^ h] - src[i]) & mask);
}

void accum_table_scalar(uint16_t* dst, const uint16_t* src, size_t size, uint16_t mask) {
    for (size_t i = 0; i < size; ++i)
        dst[i] = static_cast<uint16_t>((dst[i] + src[i]) & mask);
}

void histogram(const uint16_t* src, size_t size, uint64_t* counts, uint16_t mask) {
    for (size_t i = 0; i < size; ++i) ++counts[src[i] & mask];
}

void subset_sum(uint16_t* t, unsigned n, uint16_t mask) {
    size_t size = size_t(1) << n;
    for (unsigned b = 0; b < n; ++b) {
        size_t bit = size_t(1) << b;
        // blocks of `bit` entries with the b-th index bit set are contiguous
        for (size_t base = 0; base < size; base += 2 * bit)
            accum_table(t + base + bit, t + base, bit, mask);
    }
}

namespace {

DiffFn pick_diff() {
#if defined(NILFORGE_BUILD_AVX2)
    if (__builtin_cpu_supports("avx2")) return diff_table_avx2;
#endif
    return diff_table_scalar;
}

AccumFn pick_accum() {
#if defined(NILFORGE_BUILD_AVX2)
    if (__builtin_cpu_supports("avx2")) return accum_table_avx2;
#endif
    return accum_table_scalar;
}

}  // namespace

const DiffFn diff_table = pick_diff();
const AccumFn accum_table = pick_accum();

const char* active_backend() {
#if defined(NILFORGE_BUILD_AVX2)
    if (diff_table == diff_table_avx2) return "avx2";
#endif
    return "scalar";
}

}  // namespace nilforge::kern
