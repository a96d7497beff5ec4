#include "nilforge/cocycle.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "nilforge/rng.hpp"
#include "nilforge/zmod.hpp"

namespace nilforge {

namespace {

uint32_t dot_shift(const std::vector<uint32_t>& hs, uint32_t omega) {
    uint32_t x = 0;
    for (size_t i = 0; i < hs.size(); ++i)
        if (omega >> i & 1) x ^= hs[i];
    return x;
}

std::string tuple_str(const std::vector<uint32_t>& hs, uint32_t x) {
    std::ostringstream os;
    os << "x=" << x << " h=(";
    for (size_t i = 0; i < hs.size(); ++i) os << (i ? "," : "") << hs[i];
    os << ")";
    return os.str();
}

}  // namespace

Dyadic alternating_sum(const FuncTable& f, const std::vector<uint32_t>& hs, uint32_t x) {
    int k1 = int(hs.size());
    Dyadic acc;
    for (uint32_t omega = 0; omega < (uint32_t(1) << k1); ++omega) {
        Dyadic term = f.v[x ^ dot_shift(hs, omega)];
        if ((k1 - __builtin_popcount(omega)) & 1) term = -term;
        acc = acc + term;
    }
    return acc;
}

Cocycle coboundary_of(const FuncTable& f, int k) {
    Cocycle rho;
    rho.n = f.n;
    rho.k = k;
    rho.level = f.max_level();
    rho.eval = [f, k](const std::vector<uint32_t>& hs, uint32_t x) {
        if (int(hs.size()) != k + 1) throw std::invalid_argument("coboundary: shift count");
        return alternating_sum(f, hs, x);
    };
    return rho;
}

Cocycle slice_cocycle(const Cocycle& rho, uint32_t h1) {
    Cocycle s;
    s.n = rho.n;
    s.k = rho.k - 1;
    s.level = rho.level;
    auto base = rho.eval;
    s.eval = [base, h1](const std::vector<uint32_t>& hs, uint32_t x) {
        std::vector<uint32_t> full;
        full.reserve(hs.size() + 1);
        full.push_back(h1);
        full.insert(full.end(), hs.begin(), hs.end());
        return base(full, x);
    };
    return s;
}

AxiomReport check_cocycle_axioms(const Cocycle& rho, uint64_t samples, uint64_t seed) {
    AxiomReport rep;
    int k1 = rho.k + 1;
    uint32_t sz = uint32_t(1) << rho.n;
    double bits = double(rho.n) * (k1 + 2);
    rep.exhaustive = bits <= 24.0;

    auto symmetry_at = [&](const std::vector<uint32_t>& hs, uint32_t x) -> bool {
        Dyadic ref = rho.eval(hs, x);
        std::vector<int> p(static_cast<size_t>(k1));
        for (int i = 0; i < k1; ++i) p[size_t(i)] = i;
        do {
            std::vector<uint32_t> ph(static_cast<size_t>(k1));
            for (int i = 0; i < k1; ++i) ph[size_t(i)] = hs[size_t(p[size_t(i)])];
            ++rep.checks;
            if (rho.eval(ph, x) != ref) {
                rep.detail = "symmetry violated at " + tuple_str(hs, x);
                return false;
            }
        } while (std::next_permutation(p.begin(), p.end()));
        return true;
    };
    auto cocycle_at = [&](const std::vector<uint32_t>& hs, uint32_t h1p, uint32_t x) -> bool {
        std::vector<uint32_t> sum = hs, other = hs;
        sum[0] ^= h1p;
        other[0] = h1p;
        ++rep.checks;
        if (rho.eval(sum, x) != rho.eval(hs, x) + rho.eval(other, x ^ hs[0])) {
            rep.detail = "concatenation identity violated at " + tuple_str(hs, x) +
                         " h1'=" + std::to_string(h1p);
            return false;
        }
        return true;
    };

    rep.ok = true;
    if (rep.exhaustive) {
        std::vector<uint32_t> hs(size_t(k1), 0);
        uint64_t total = uint64_t(1) << (rho.n * k1);
        for (uint64_t code = 0; code < total && rep.ok; ++code) {
            uint64_t c = code;
            for (int i = 0; i < k1; ++i) {
                hs[size_t(i)] = uint32_t(c & (sz - 1));
                c >>= rho.n;
            }
            for (uint32_t x = 0; x < sz && rep.ok; ++x) {
                if (!symmetry_at(hs, x)) rep.ok = false;
                for (uint32_t h1p = 0; h1p < sz && rep.ok; ++h1p)
                    if (!cocycle_at(hs, h1p, x)) rep.ok = false;
            }
        }
    } else {
        Rng rng(seed);
        for (uint64_t t = 0; t < samples && rep.ok; ++t) {
            std::vector<uint32_t> hs(static_cast<size_t>(k1));
            for (auto& h : hs) h = uint32_t(rng.below(sz));
            uint32_t x = uint32_t(rng.below(sz));
            if (!symmetry_at(hs, x)) rep.ok = false;
            if (rep.ok && !cocycle_at(hs, uint32_t(rng.below(sz)), x)) rep.ok = false;
        }
    }
    return rep;
}

bool check_2homog(const Cocycle& rho, uint64_t samples, uint64_t seed, bool* exhaustive,
                  std::string* detail) {
    if (rho.k < 2) {
        if (exhaustive) *exhaustive = true;
        return true;
    }
    uint32_t sz = uint32_t(1) << rho.n;
    bool exh = double(rho.n) * (rho.k + 1) <= 24.0;
    if (exhaustive) *exhaustive = exh;
    auto at = [&](const std::vector<uint32_t>& hk, uint32_t x) -> bool {
        std::vector<uint32_t> a, b;
        a.assign({hk[0], hk[0], hk[1]});
        b.assign({hk[1], hk[1], hk[0]});
        for (size_t i = 2; i < hk.size(); ++i) {
            a.push_back(hk[i]);
            b.push_back(hk[i]);
        }
        if (rho.eval(a, x) != rho.eval(b, x)) {
            if (detail) *detail = "2-homogeneity violated at " + tuple_str(hk, x);
            return false;
        }
        return true;
    };
    if (exh) {
        std::vector<uint32_t> hk(static_cast<size_t>(rho.k));
        uint64_t total = uint64_t(1) << (rho.n * rho.k);
        for (uint64_t code = 0; code < total; ++code) {
            uint64_t c = code;
            for (int i = 0; i < rho.k; ++i) {
                hk[size_t(i)] = uint32_t(c & (sz - 1));
                c >>= rho.n;
            }
            for (uint32_t x = 0; x < sz; ++x)
                if (!at(hk, x)) return false;
        }
        return true;
    }
    Rng rng(seed);
    for (uint64_t t = 0; t < samples; ++t) {
        std::vector<uint32_t> hk(static_cast<size_t>(rho.k));
        for (auto& h : hk) h = uint32_t(rng.below(sz));
        if (!at(hk, uint32_t(rng.below(sz)))) return false;
    }
    return true;
}

// ---- equation assembly and decision ----------------------------------------

EquationSystem assemble_equations(const Cocycle& rho, uint64_t samples, uint64_t seed) {
    EquationSystem sys;
    uint32_t sz = uint32_t(1) << rho.n;
    sys.npoints = sz;
    int k1 = rho.k + 1;
    double bits = double(rho.n) * (k1 + 1);
    sys.exhaustive = bits <= 22.0;

    std::map<std::pair<std::vector<int64_t>, std::pair<uint64_t, uint32_t>>, bool> seen;
    auto add_row = [&](const std::vector<uint32_t>& hs, uint32_t x) {
        std::vector<int64_t> row(sz, 0);
        for (uint32_t omega = 0; omega < (uint32_t(1) << k1); ++omega) {
            int sign = ((k1 - __builtin_popcount(omega)) & 1) ? -1 : 1;
            row[x ^ dot_shift(hs, omega)] += sign;
        }
        Dyadic r = rho.eval(hs, x);
        ++sys.generated;
        auto key = std::make_pair(std::move(row), std::make_pair(r.num, r.lev));
        if (seen.emplace(key, true).second) {
            sys.rows.push_back(key.first);
            sys.rhs.push_back(r);
        }
    };

    if (sys.exhaustive) {
        std::vector<uint32_t> hs(size_t(k1), 0);
        uint64_t total = uint64_t(1) << (rho.n * k1);
        for (uint64_t code = 0; code < total; ++code) {
            uint64_t c = code;
            for (int i = 0; i < k1; ++i) {
                hs[size_t(i)] = uint32_t(c & (sz - 1));
                c >>= rho.n;
            }
            for (uint32_t x = 0; x < sz; ++x) add_row(hs, x);
        }
    } else {
        Rng rng(seed);
        for (uint64_t t = 0; t < samples; ++t) {
            std::vector<uint32_t> hs(static_cast<size_t>(k1));
            for (auto& h : hs) h = uint32_t(rng.below(sz));
            add_row(hs, uint32_t(rng.below(sz)));
        }
    }
    return sys;
}

bool verify_no_certificate(const EquationSystem& sys, const std::vector<int64_t>& v) {
    if (v.size() != sys.rows.size()) return false;
    for (size_t j = 0; j < sys.npoints; ++j) {
        int64_t acc = 0;
        for (size_t i = 0; i < v.size(); ++i) acc += v[i] * sys.rows[i][j];
        if (acc != 0) return false;
    }
    Dyadic pair;
    for (size_t i = 0; i < v.size(); ++i) pair = pair + sys.rhs[i].scale(v[i]);
    return !pair.is_zero();
}

CoboundaryVerdict decide_coboundary(const EquationSystem& sys, int n,
                                    std::optional<uint32_t> value_level) {
    CoboundaryVerdict verdict;
    verdict.equations = sys.generated;
    verdict.exhaustive = sys.exhaustive;

    uint32_t max_rhs_level = 0;
    for (const auto& r : sys.rhs) max_rhs_level = std::max(max_rhs_level, r.lev);

    if (value_level && max_rhs_level > *value_level) {
        verdict.decision = CoboundaryVerdict::Decision::No;
        verdict.reason = "right-hand side escapes the requested value group";
        return verdict;
    }

    // integer relations among rows must annihilate the right-hand side mod 1
    auto kernel = integer_left_kernel(sys.rows);
    for (const auto& v : kernel) {
        Dyadic pair;
        for (size_t i = 0; i < v.size(); ++i) pair = pair + sys.rhs[i].scale(v[i]);
        if (!pair.is_zero()) {
            verdict.decision = CoboundaryVerdict::Decision::No;
            verdict.kernel_vector = v;
            verdict.kernel_pairing = pair;
            verdict.reason = "integer row relation pairs to a nonzero torus value";
            return verdict;
        }
    }

    uint32_t start = value_level ? *value_level
                                 : std::min<uint32_t>(62, max_rhs_level + uint32_t(6));
    for (uint32_t r = std::max(start, 1u); r <= 62;
         r = (r == 62 ? 63 : std::min<uint32_t>(62, r + 8))) {
        std::vector<uint64_t> b(sys.rhs.size());
        for (size_t i = 0; i < b.size(); ++i) b[i] = sys.rhs[i].num_at_level(r);
        auto x = solve_mod2r(sys.rows, b, r);
        if (x) {
            FuncTable f(n);
            for (uint32_t p = 0; p < f.size(); ++p) f.v[p] = Dyadic::make((*x)[p], r);
            verdict.witness = std::move(f);
            verdict.decision = sys.exhaustive ? CoboundaryVerdict::Decision::Yes
                                              : CoboundaryVerdict::Decision::Inconclusive;
            verdict.reason = sys.exhaustive ? "witness found on the exhaustive equation set"
                                            : "inconclusive (sampled): witness on sampled rows";
            return verdict;
        }
        if (value_level) {
            verdict.decision = CoboundaryVerdict::Decision::No;
            verdict.reason = "elimination over Z/2^r refutes solvability at the value level";
            return verdict;
        }
    }
    verdict.decision = CoboundaryVerdict::Decision::Inconclusive;
    verdict.reason = "no obstruction found but no dyadic witness within the level cap";
    return verdict;
}

CoboundaryVerdict decide_coboundary(const Cocycle& rho, std::optional<uint32_t> value_level,
                                    uint64_t samples, uint64_t seed) {
    auto sys = assemble_equations(rho, samples, seed);
    return decide_coboundary(sys, rho.n, value_level);
}

// ---- the constructive potential finder --------------------------------------

namespace {

// phi with d/de phi = g, for g obeying g(x+e) = -g(x); e the j-th basis vector
FuncTable integrate_alternating(const FuncTable& g, int j) {
    FuncTable phi(g.n);
    uint32_t bit = uint32_t(1) << j;
    for (uint32_t x = 0; x < phi.size(); ++x)
        phi.v[x] = (x & bit) ? g.v[x ^ bit] : Dyadic{};
    return phi;
}

FuncTable find_phi(std::vector<FuncTable> F, int k, int n) {
    if (n == 0) return FuncTable(0);
    int j = n - 1;
    uint32_t e = uint32_t(1) << j;

    // the shift-symmetrized slice (1 + T^e) F_e must drop two degrees
    FuncTable sym = F[e] + translate(F[e], e);
    int dcap = std::max(k - 2, 0);
    std::string why;
    auto symp = from_table(sym, dcap, &why);
    if (!symp)
        throw std::domain_error("potential_finder: symmetrized slice is not of degree " +
                                std::to_string(dcap) + " (" + why +
                                "); input is not a 2-homogeneous cocycle");
    PolyRep fe_poly = invert_one_plus_shift(*symp, e);
    if (measured_degree(fe_poly) > k - 1)
        throw std::domain_error("potential_finder: inverted slice exceeds degree k-1");
    FuncTable fe = to_table(fe_poly);

    FuncTable g = F[e] - fe;
    FuncTable phi1 = integrate_alternating(g, j);

    // re-normalize the family so the e-slice vanishes, then descend
    for (uint32_t h = 0; h < F.size(); ++h) F[h] = F[h] - fe - derivative(phi1, h);
    std::vector<FuncTable> sub(size_t(1) << (n - 1));
    for (uint32_t h = 0; h < sub.size(); ++h) sub[h] = restrict_coord(F[h], j, 0);
    FuncTable phi2 = find_phi(std::move(sub), k, n - 1);
    return phi1 + extend_invariant(phi2, j);
}

}  // namespace

FuncTable potential_finder(const Cocycle& rho) {
    if (rho.k == 0) {
        FuncTable f(rho.n);
        for (uint32_t x = 0; x < f.size(); ++x) f.v[x] = rho.eval({x}, 0);
        return f;
    }
    uint32_t sz = uint32_t(1) << rho.n;
    std::vector<FuncTable> F(sz);
    for (uint32_t h = 0; h < sz; ++h) F[h] = potential_finder(slice_cocycle(rho, h));
    return find_phi(std::move(F), rho.k, rho.n);
}

bool verify_potential(const Cocycle& rho, const FuncTable& f, uint64_t samples, uint64_t seed,
                      bool* exhaustive) {
    uint32_t sz = uint32_t(1) << rho.n;
    int k1 = rho.k + 1;
    bool exh = double(rho.n) * (k1 + 1) <= 22.0;
    if (exhaustive) *exhaustive = exh;
    if (exh) {
        std::vector<uint32_t> hs(size_t(k1), 0);
        uint64_t total = uint64_t(1) << (rho.n * k1);
        for (uint64_t code = 0; code < total; ++code) {
            uint64_t c = code;
            for (int i = 0; i < k1; ++i) {
                hs[size_t(i)] = uint32_t(c & (sz - 1));
                c >>= rho.n;
            }
            for (uint32_t x = 0; x < sz; ++x)
                if (alternating_sum(f, hs, x) != rho.eval(hs, x)) return false;
        }
        return true;
    }
    Rng rng(seed);
    for (uint64_t t = 0; t < samples; ++t) {
        std::vector<uint32_t> hs(static_cast<size_t>(k1));
        for (auto& h : hs) h = uint32_t(rng.below(sz));
        uint32_t x = uint32_t(rng.below(sz));
        if (alternating_sum(f, hs, x) != rho.eval(hs, x)) return false;
    }
    return true;
}

Dyadic edge_derivative(const EdgeFunction& psi, int k, const std::vector<uint32_t>& hs,
                       uint32_t x) {
    if (int(hs.size()) != k + 1) throw std::invalid_argument("edge_derivative: shift count");
    uint32_t edge = hs.back();
    Dyadic acc;
    for (uint32_t omega = 0; omega < (uint32_t(1) << k); ++omega) {
        uint32_t base = x ^ dot_shift(hs, omega);  // uses the first k shifts
        Dyadic term = psi.eval(base, base ^ edge);
        if ((k - __builtin_popcount(omega)) & 1) term = -term;
        acc = acc + term;
    }
    return acc;
}

FuncTable strong_potential_finder(const Cocycle& rho, const EdgeFunction& psi, uint64_t samples,
                                  uint64_t seed) {
    if (rho.k < 3) throw std::invalid_argument("strong_potential_finder: requires k >= 3");
    uint32_t sz = uint32_t(1) << rho.n;
    Rng rng(seed);

    // precondition: rho = d^k psi
    {
        uint64_t total_bits = uint64_t(rho.n) * uint64_t(rho.k + 2);
        bool exh = total_bits <= 20;
        uint64_t limit = exh ? (uint64_t(1) << total_bits) : samples;
        for (uint64_t t = 0; t < limit; ++t) {
            std::vector<uint32_t> hs(static_cast<size_t>(rho.k + 1));
            uint32_t x;
            if (exh) {
                uint64_t c = t;
                for (auto& h : hs) {
                    h = uint32_t(c & (sz - 1));
                    c >>= rho.n;
                }
                x = uint32_t(c & (sz - 1));
            } else {
                for (auto& h : hs) h = uint32_t(rng.below(sz));
                x = uint32_t(rng.below(sz));
            }
            if (edge_derivative(psi, rho.k, hs, x) != rho.eval(hs, x))
                throw std::domain_error("strong_potential_finder: rho != d^k psi at " +
                                        tuple_str(hs, x));
        }
    }
    // precondition: 2 psi has degree k-2 along the edge structure
    {
        uint64_t total_bits = uint64_t(rho.n) * uint64_t(rho.k + 1);
        bool exh = total_bits <= 20;
        uint64_t limit = exh ? (uint64_t(1) << total_bits) : samples;
        EdgeFunction twopsi{psi.n, [&psi](uint32_t a, uint32_t b) {
                                Dyadic v = psi.eval(a, b);
                                return v + v;
                            }};
        for (uint64_t t = 0; t < limit; ++t) {
            std::vector<uint32_t> hs(static_cast<size_t>(rho.k));
            uint32_t x;
            if (exh) {
                uint64_t c = t;
                for (auto& h : hs) {
                    h = uint32_t(c & (sz - 1));
                    c >>= rho.n;
                }
                x = uint32_t(c & (sz - 1));
            } else {
                for (auto& h : hs) h = uint32_t(rng.below(sz));
                x = uint32_t(rng.below(sz));
            }
            if (!edge_derivative(twopsi, rho.k - 1, hs, x).is_zero())
                throw std::domain_error(
                    "strong_potential_finder: 2 psi is not of degree k-2 at " +
                    tuple_str(hs, x));
        }
    }

    FuncTable f = potential_finder(rho);
    FuncTable twof = f + f;
    std::string why;
    auto poly2f = from_table(twof, rho.k - 1, &why);
    if (!poly2f)
        throw std::domain_error("strong_potential_finder: doubled potential not of degree k-1 (" +
                                why + ")");
    PolyRep root = exact_root(*poly2f);  // degree k, doubles back to 2F
    FuncTable out = f - to_table(root);
    for (const auto& v : out.v)
        if (v.lev > 1) throw std::logic_error("strong_potential_finder: output escaped (1/2)Z/Z");
    return out;
}

}  // namespace nilforge
