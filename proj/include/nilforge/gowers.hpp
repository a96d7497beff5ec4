#pragma once
// Uniformity norms and correlations of dyadic phase functions, with two
// independent evaluation strategies kept as a cross-validating oracle pair:
// a flat enumeration engine with exact integer phase counting, and a
// box-recursion engine over difference tables.

#include <cstdint>
#include <optional>
#include <vector>

#include "nilforge/poly.hpp"
#include "nilforge/x5.hpp"

namespace nilforge {

// phase function x -> num[x] / 2^level on F_2^n
struct PhaseTable {
    int n = 0;
    uint32_t level = 1;
    std::vector<uint16_t> num;

    static PhaseTable from(const PolyRep& p);
    static PhaseTable from(const PseudoQuintic& s);
    static PhaseTable from(const FuncTable& f);
    static PhaseTable from(const DenseTable& t);
};

// add a classical polynomial phase (values over the half subgroup)
PhaseTable add_classical_phase(const PhaseTable& f, const F2Poly& q);
PhaseTable translate(const PhaseTable& f, uint32_t a);

// flat enumeration over every (x, h_1..h_{k+1}) tuple with exact phase
// counting; requires (k+2) n <= 30
double gowers_norm_naive(const PhaseTable& f, int k);

// box recursion: the 2^{j}-th power of the order-j norm is the shift average
// of the next lower one; work is about 2^{(k+1)n}
double gowers_norm_recursive(const PhaseTable& f, int k, int threads = 1);

// exact replacement for a floating norm-equals-one claim
bool poly_norm_one_certificate(const PolyRep& p, int k);

struct Correlation {
    double magnitude = 0;
    // exact signed numerator over 2^n when the phase difference is half-valued
    std::optional<std::pair<int64_t, uint64_t>> exact;
};
Correlation correlation(const PhaseTable& f, const PolyRep& p);
Correlation correlation(const PhaseTable& f, const PhaseTable& g);

}  // namespace nilforge
