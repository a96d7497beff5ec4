#pragma once
// The explicit 5-cocycle on the degree-2 Klein four-group structure: the
// 45-partition evaluation formula, the quarter-valued edge witness, and the
// machine-checkable certificates (cocycle axioms, strong 2-homogeneity, and
// the non-coboundary descent).

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nilforge/cocycle.hpp"
#include "nilforge/dyadic.hpp"

namespace nilforge {

using Klein = uint8_t;  // two bits; componentwise addition is XOR

// slot of the unordered pair {i,j}, 0 <= i < j < 6, in the frozen order
int pair_slot(int i, int j);

// one partition of {0..5} into doubleton pair slots: {ab, cd} unordered, ef
struct Partition {
    uint8_t ab, cd, ef;
};

// the 45 partitions in canonical order (frozen at startup)
const std::array<Partition, 45>& partitions();

// Parameterized m-cube of the Klein structure, m <= 6: base point, one
// parameter per axis, one per axis pair (higher parameters vanish).
struct KleinCube {
    int m = 0;
    Klein x = 0;
    std::array<Klein, 6> h{};
    std::array<Klein, 15> hh{};  // indexed by pair_slot

    Klein vertex(uint32_t omega) const;
};

// value of the cocycle on the pair block (sum over the 45 partitions, halved)
Dyadic rho_pairs(const std::array<Klein, 15>& hh);
Dyadic rho_eval(const KleinCube& c);  // requires m == 6

// Moebius elimination of a 64-vertex tuple; nullopt when not a 6-cube
std::optional<KleinCube> cube6_from_tuple(const std::array<Klein, 64>& t);

Dyadic psi_eval(Klein x, Klein y);

// edge derivatives with the edge along the last axis of the cube
Dyadic d5_psi(const KleinCube& c);        // m == 6
Dyadic d4_two_psi(const KleinCube& c);    // m == 5

// ---- certificates -----------------------------------------------------------

struct SymmetryReport {
    bool ok = false;
    uint64_t permutations = 0;
};
// exact symmetry of the partition representation under all 720 permutations
SymmetryReport verify_rho_symmetry();

struct ConcatReport {
    bool ok = false;
    uint64_t checks = 0;
    std::string detail;
};
// concatenation identity: exhaustive sweep of all instances with at most
// three nonzero parameter bits, plus seeded random instances
ConcatReport verify_rho_cocycle(uint64_t samples, uint64_t seed);

struct StrongHomogReport {
    bool pointwise_ok = false;   // 2 psi equals the bilinear edge phase
    bool quartic_ok = false;     // d^4 (2 psi) = 0 on 5-cubes
    bool match_ok = false;       // rho = d^5 psi on 6-cubes
    uint64_t checks = 0;
    std::string detail;
};
// low-weight exhaustive sweeps (complete by the multilinear degree bound)
// plus seeded random full-parameter checks
StrongHomogReport verify_strong_homogeneity(uint64_t samples, uint64_t seed);

struct DescentCertificate {
    // the restricted system: rows over the four Klein points
    std::vector<std::array<int64_t, 4>> rows;
    std::vector<Dyadic> rhs;
    size_t row_a = 0, row_b = 0;       // the two distinguished rows
    std::vector<int64_t> kernel;       // integer combination over {row_a,row_b}
    Dyadic pairing;                    // kernel . rhs, must be 1/2
    bool pairing_ok = false;
    bool annihilates_ok = false;       // kernel kills d^6 F for random F
};
DescentCertificate non_coboundary_certificate(uint64_t trials = 100, uint64_t seed = 1);

// full coboundary equation system over the Klein points: structured sweep of
// all parameterizations with at most three nonzero parameters plus seeded
// random cubes (never marked exhaustive; the certificate route is sound)
EquationSystem assemble_klein_equations(uint64_t samples, uint64_t seed);

// alternating vertex sum of a table over the four Klein points
Dyadic klein_coboundary(const std::array<Dyadic, 4>& f, const KleinCube& c);

// Exact average of the cocycle phase over uniform pair parameters, returned
// as a fraction (count, 2^15): averaging the second components first leaves
// the count of first-component assignments annihilating every linear slot.
std::pair<uint64_t, uint64_t> rho_phase_average();

}  // namespace nilforge
