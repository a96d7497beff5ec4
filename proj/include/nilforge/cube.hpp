#pragma once
// Finite filtered abelian 2-groups as cube-membership structures: Host-Kra
// cube checking by parameter elimination, corner completion with canonical
// free parameters, nilspace-morphism checking on generator directions, and
// skew-product extensions by a cocycle.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nilforge/rng.hpp"

namespace nilforge {

using GroupElem = std::vector<uint64_t>;  // numerator per factor, mod 2^{r_j}

// Product of cyclic 2-groups Z/2^{r_j} with a filtration whose terms are
// products of subgroups 2^{s_{i,j}} Z/2^{r_j}.  filt[i][j] = s_{i,j}; levels
// beyond the stored chain are trivial.
struct FilteredGroup {
    std::vector<uint32_t> factor_levels;      // r_j
    std::vector<std::vector<uint32_t>> filt;  // filt[0] must be all zeros

    static FilteredGroup degree_filtration(std::vector<uint32_t> levels, int d);

    int nfactors() const { return int(factor_levels.size()); }
    size_t order() const;
    int degree() const;  // largest i with G_i nontrivial (0 for the trivial group)

    uint32_t sub_exponent(int i, int j) const;  // s_{i,j}, saturated at r_j
    bool level_trivial(int i) const;
    bool in_level(const GroupElem& g, int i) const;
    bool ergodic() const { return level_trivial(1) ? order() == 1 : !has_proper(1); }

    GroupElem zero() const { return GroupElem(factor_levels.size(), 0); }
    GroupElem add(const GroupElem& a, const GroupElem& b) const;
    GroupElem neg(const GroupElem& a) const;
    GroupElem sub(const GroupElem& a, const GroupElem& b) const;

    size_t elem_index(const GroupElem& g) const;
    GroupElem elem_at(size_t idx) const;
    GroupElem random_in_level(int i, Rng& rng) const;

    bool has_proper(int i) const;  // G_i a proper subgroup of G
};

struct CubeTuple {
    int m = 0;
    std::vector<GroupElem> v;  // size 2^m, indexed by vertex

    CubeTuple() = default;
    explicit CubeTuple(int m_) : m(m_), v(size_t(1) << m_) {}
    size_t size() const { return v.size(); }
};

// Host-Kra parameterization: h[alpha] with h[0] the base point x.
struct HKParam {
    int m = 0;
    std::vector<GroupElem> h;

    HKParam() = default;
    explicit HKParam(int m_) : m(m_), h(size_t(1) << m_) {}
};

CubeTuple cube_from_param(const FilteredGroup& g, const HKParam& p);
// Moebius elimination of the parameters; nullopt when some h_alpha escapes
// its filtration level.
std::optional<HKParam> hk_cube_check(const CubeTuple& t, const FilteredGroup& g);
HKParam random_param(const FilteredGroup& g, int m, Rng& rng);

// Completion of a partial m-cube missing vertex 1^m, all free parameters
// canonical zero.  Throws with a face report when a face through 0^m fails.
GroupElem corner_complete(const CubeTuple& partial, const FilteredGroup& g);
bool corner_unique(const FilteredGroup& g, int m);

// f given as a dense table over the domain group (index order = elem_index).
bool morphism_check(const std::vector<GroupElem>& f, const FilteredGroup& dom,
                    const FilteredGroup& cod);

// 2 G_i <= G_{i+1} for all i >= 1 (requires an ergodic filtration)
bool phom_check(const FilteredGroup& g);

// the k-th Host-Kra group of g as a filtered group on parameter coordinates
FilteredGroup hk_group(const FilteredGroup& g, int k);

// ---- skew products ---------------------------------------------------------
// Extension of the base nilspace by an elementary abelian 2-group fiber
// twisted by a k-cocycle evaluated on (k+1)-cubes of the base.
struct SkewSpace {
    const FilteredGroup* base = nullptr;
    int fiber_bits = 0;
    int k = 0;
    std::function<uint32_t(const CubeTuple&)> rho;
};

struct SkewTuple {
    int m = 0;
    std::vector<GroupElem> base;
    std::vector<uint32_t> fiber;

    explicit SkewTuple(int m_) : m(m_), base(size_t(1) << m_), fiber(size_t(1) << m_) {}
    size_t size() const { return base.size(); }
};

bool skew_cube_check(const SkewTuple& t, const SkewSpace& s);
SkewTuple skew_lift(const CubeTuple& base_cube, const SkewSpace& s);

// CSV rows "omega-bitstring,point-index" in ascending vertex order
void write_cube_csv(std::ostream& os, const CubeTuple& t, const FilteredGroup& g);
std::optional<CubeTuple> read_cube_csv(std::istream& is, const FilteredGroup& g,
                                       std::string* err = nullptr);

}  // namespace nilforge
