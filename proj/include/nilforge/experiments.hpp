#pragma once
// The empirical apparatus: equidistribution of randomly sampled restricted
// cubes against an exactly enumerated reference, and the conditional-
// expectation probe for approximating a quintic phase by functions of
// finitely many translates.

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "nilforge/gowers.hpp"
#include "nilforge/x5.hpp"

namespace nilforge {

// the pinned restriction of an n-cube to the leading M coordinates
struct RestrictionFrame {
    int M = 0;
    int d = 0;
    uint32_t r = 5;
    std::vector<Klein> q0;   // size 2^M
    std::vector<Dyadic> s0;
};

RestrictionFrame make_frame(const X5Cube& c, int M, int d);

// an (M+d)-cube agreeing with the frame on the pinned face, as value tables
struct SigmaElem {
    std::vector<Klein> q;
    std::vector<Dyadic> s;
};

// canonical serialization of a cube's value tables (fits one word for
// M + d <= 2): per vertex, two Klein bits plus the level-r numerator
uint64_t cube_key(const std::vector<Klein>& q, const std::vector<Dyadic>& s, uint32_t r);

struct SigmaSpace {
    RestrictionFrame frame;
    std::vector<SigmaElem> elems;
    std::unordered_map<uint64_t, size_t> index;  // key -> position
};

// exact enumeration through the fiber structure over the quadratic layer;
// requires M + d <= 2 (the enumeration budget)
SigmaSpace enumerate_sigma(const RestrictionFrame& frame);

struct TvReport {
    double tv = 0;          // estimated distance of the sampling measure to uniform
    double selfcal_tv = 0;  // distance of a same-size uniform draw to uniform
    double band = 0;        // 3 sqrt(|Sigma| / samples)
    size_t sigma_size = 0;
    uint64_t samples = 0;
};

// half the l1 distance between the empirical measure of `counts` and the
// uniform measure on the same index set
double tv_to_uniform(const std::vector<uint64_t>& counts, uint64_t total);

// samples random directions, restricts, counts against the enumeration
TvReport estimate_tv(const X5Cube& c, int M, int d, uint64_t samples, uint64_t seed);

struct CondExpReport {
    double error = 0;
    size_t cells = 0;
    size_t points = 0;
    bool overfit = false;  // cells at or beyond points/8 voids the probe
};

// partitions the domain by the exact tuple of generator values and measures
// the mean absolute deviation of the target phase from its cell average
CondExpReport conditional_expectation_error(const PhaseTable& target,
                                            const std::vector<PhaseTable>& generators);

struct ProbeRow {
    double error = 0;
    size_t cells = 0;
    bool overfit = false;
};

struct ProbeReport {
    int n = 0, M = 0;
    uint32_t r = 5;
    uint64_t seed = 0;
    ProbeRow main;                 // quintic part against the translate algebra
    ProbeRow control_self;         // target among the generators: exactly zero
    ProbeRow control_const;        // constant target: exactly zero
    std::vector<double> refinement;  // error after 1, 2, ... generators
    double correlation = 0;        // |E e(S - P)|
    ProbeRow contrast;             // the same probe over the level-one variant
    double contrast_correlation = 0;
    size_t points = 0;
};

ProbeReport measurability_probe(int n, int M, uint32_t r, uint64_t seed);

}  // namespace nilforge
