#pragma once
// Cocycle verification and cohomology decisions on the degree-one structure
// of F_2^n: axiom checks, 2-homogeneity, the coboundary decision problem over
// (1/2^r)Z/Z and over the full torus, and the constructive potential finder.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nilforge/dyadic.hpp"
#include "nilforge/poly.hpp"

namespace nilforge {

// Order-k cocycle on F_2^n in shift coordinates: evaluator receives the k+1
// shifts and the base point.  Evaluation must be total and exact.
struct Cocycle {
    int n = 0;
    int k = 0;
    uint32_t level = 1;  // declared value level (hint for solvers)
    std::function<Dyadic(const std::vector<uint32_t>&, uint32_t)> eval;
};

// the alternating vertex sum of F over the cube spanned by hs at x
Dyadic alternating_sum(const FuncTable& f, const std::vector<uint32_t>& hs, uint32_t x);

Cocycle coboundary_of(const FuncTable& f, int k);
Cocycle slice_cocycle(const Cocycle& rho, uint32_t h1);

struct AxiomReport {
    bool ok = false;
    bool exhaustive = false;
    uint64_t checks = 0;
    std::string detail;  // first violating instance when !ok
};

AxiomReport check_cocycle_axioms(const Cocycle& rho, uint64_t samples, uint64_t seed);

// the 2-homogeneity swap condition; vacuous for k < 2
bool check_2homog(const Cocycle& rho, uint64_t samples, uint64_t seed,
                  bool* exhaustive = nullptr, std::string* detail = nullptr);

// ---- coboundary decision ----------------------------------------------------
struct EquationSystem {
    size_t npoints = 0;
    std::vector<std::vector<int64_t>> rows;  // deduplicated coefficient rows
    std::vector<Dyadic> rhs;
    uint64_t generated = 0;
    bool exhaustive = false;
};

EquationSystem assemble_equations(const Cocycle& rho, uint64_t samples, uint64_t seed);

struct CoboundaryVerdict {
    enum class Decision { Yes, No, Inconclusive };
    Decision decision = Decision::Inconclusive;
    std::optional<FuncTable> witness;       // Yes: d^{k+1}F = rho on the rows
    std::vector<int64_t> kernel_vector;     // No: integer row combination
    Dyadic kernel_pairing;                  // No: v . rhs, nonzero mod 1
    std::string reason;
    uint64_t equations = 0;
    bool exhaustive = false;
};

// value_level nullopt decides over the torus; otherwise over (1/2^r)Z/Z
CoboundaryVerdict decide_coboundary(const Cocycle& rho, std::optional<uint32_t> value_level,
                                    uint64_t samples = 100000, uint64_t seed = 1);
CoboundaryVerdict decide_coboundary(const EquationSystem& sys, int n,
                                    std::optional<uint32_t> value_level);

// independent re-check of a No certificate (no shared code with the solver)
bool verify_no_certificate(const EquationSystem& sys, const std::vector<int64_t>& v);

// ---- constructive potentials ---------------------------------------------------
// Solves d^{k+1} F = rho for 2-homogeneous dyadic-valued cocycles.  Throws
// std::domain_error with a diagnostic when an elimination step reveals the
// input is not 2-homogeneous (or not a cocycle).
FuncTable potential_finder(const Cocycle& rho);

// Edge witness psi on pairs (x, y) of F_2^n.
struct EdgeFunction {
    int n = 0;
    std::function<Dyadic(uint32_t, uint32_t)> eval;
};

// d^k psi evaluated in shift coordinates with the edge along the last shift
Dyadic edge_derivative(const EdgeFunction& psi, int k, const std::vector<uint32_t>& hs,
                       uint32_t x);

// Potential with values in (1/2)Z/Z for a strongly 2-homogeneous cocycle:
// runs the torus-valued finder, certifies 2F has degree <= k-1, subtracts an
// exact root.  Preconditions (rho = d^k psi, and 2 psi of degree k-2 on the
// edge structure) are verified up to `samples` instances.
FuncTable strong_potential_finder(const Cocycle& rho, const EdgeFunction& psi,
                                  uint64_t samples = 20000, uint64_t seed = 1);

// shared postcondition checker: d^{k+1} F = rho (exhaustive when the tuple
// space is at most 2^22, otherwise sampled)
bool verify_potential(const Cocycle& rho, const FuncTable& f, uint64_t samples, uint64_t seed,
                      bool* exhaustive = nullptr);

}  // namespace nilforge
