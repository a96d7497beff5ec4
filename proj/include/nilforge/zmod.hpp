#pragma once
// Exact linear algebra for the coboundary decision problem: solving integer
// systems modulo 2^r by a Howell-style elimination, and integer left-kernel
// computation for torus-valued solvability certificates.

#include <cstdint>
#include <optional>
#include <vector>

namespace nilforge {

// Solve M x = b over Z/2^r (M integer, b numerators mod 2^r).
// Returns a solution vector when one exists.
std::optional<std::vector<uint64_t>> solve_mod2r(const std::vector<std::vector<int64_t>>& M,
                                                 const std::vector<uint64_t>& b, uint32_t r);

// Basis of { v in Z^rows : v^T M = 0 }.
std::vector<std::vector<int64_t>> integer_left_kernel(const std::vector<std::vector<int64_t>>& M);

}  // namespace nilforge
