#pragma once
// The twisted five-step structures on the Klein group times a dyadic cyclic
// group: cube membership (quadratic pair plus pseudo-quintic), the explicit
// lift through the mod-4 carrier, uniform cube sampling, and completion.

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nilforge/cocycle.hpp"
#include "nilforge/klein.hpp"
#include "nilforge/poly.hpp"

namespace nilforge {

struct QuadPair {
    F2Poly q1, q2;  // classical quadratics on F_2^n

    Klein eval(uint32_t x) const {
        return Klein(uint32_t(q1.eval(x)) | (uint32_t(q2.eval(x)) << 1));
    }
};

// S = binom2(R) * Q2 / 2 + P in structural form, for fast pointwise and
// full-domain evaluation
struct PseudoQuintic {
    int n = 0;
    uint32_t r = 5;  // value level of the quintic part
    Z4Poly rlift;    // cubic carrier with rlift = Q1 mod 2
    F2Poly q2;
    PolyRep p;       // degree-5 remainder at level r

    Dyadic eval(uint32_t x) const;
};

struct X5Cube {
    int n = 0;
    uint32_t r = 5;
    QuadPair q;
    PseudoQuintic s;
};

// dense numerator cache of the pseudo-quintic at level max(r, 1)
DenseTable dense_pseudo(const PseudoQuintic& s);

// mod-4 lift of a classical quadratic, coefficientwise, certified cubic
Z4Poly build_R(const F2Poly& q1);

// the distinguished lift with zero quintic remainder
PseudoQuintic lift(const QuadPair& q, uint32_t r);

// uniform sample of an n-cube: independent quadratics plus a uniform
// degree-5 remainder on the lift coset
X5Cube sample_ncube(int n, uint32_t r, uint64_t seed);

// pullback of the Klein cocycle along Q, evaluated on a shift tuple via the
// second-derivative bilinear forms of the pair
Dyadic pullback_rho(const QuadPair& q, const std::array<uint32_t, 6>& hs);
// the same pullback as an order-5 cocycle handle (constant in the base point)
Cocycle pullback_cocycle(const QuadPair& q, int n);

struct CubeCheckReport {
    bool ok = false;
    bool exhaustive = false;
    uint64_t checks = 0;
    std::string detail;
};

// membership test: both quadratics of degree <= 2 and the sixth derivative
// of S matching the pullback on every tuple (exhaustive for n <= 2, sampled
// and labeled otherwise)
CubeCheckReport x5_cube_check(const QuadPair& q, const std::function<Dyadic(uint32_t)>& s_eval,
                              int n, uint64_t samples = 10000, uint64_t seed = 1);
CubeCheckReport x5_cube_check(const X5Cube& c, uint64_t samples = 10000, uint64_t seed = 1);

// ---- corner completion -------------------------------------------------------
struct X5Partial {
    int n = 0;
    uint32_t r = 5;
    std::vector<Klein> qv;   // size 2^n; the top entry is ignored
    std::vector<Dyadic> sv;
};

struct X5Vertex {
    Klein q = 0;
    Dyadic s;
};

// completes the missing top vertex (canonical free parameters); throws
// std::domain_error when a face through the origin is not a cube
X5Vertex x5_corner_complete(const X5Partial& partial);

// ---- serialization ------------------------------------------------------------
// PQ file: header plus three embedded blocks (the mod-4 carrier block is
// flagged in its header; the quadratic and quintic blocks are plain)
void write_pq(std::ostream& os, const X5Cube& c);
std::optional<X5Cube> read_pq(std::istream& is, std::string* err = nullptr);

}  // namespace nilforge
