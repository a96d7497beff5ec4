#include "nilforge/x5.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "nilforge/cube.hpp"
#include "nilforge/rng.hpp"

namespace nilforge {

namespace {

int popcount32(uint32_t m) { return __builtin_popcount(m); }

std::vector<int> mask_indices(uint32_t mask) {
    std::vector<int> idx;
    for (int i = 0; i < 32; ++i)
        if (mask >> i & 1) idx.push_back(i + 1);
    return idx;
}

bool lex_mask_less(uint32_t a, uint32_t b) { return mask_indices(a) < mask_indices(b); }

}  // namespace

Dyadic PseudoQuintic::eval(uint32_t x) const {
    int b = binom2(rlift.eval(x)) & q2.eval(x);
    return Dyadic::make(uint64_t(b), 1) + nilforge::eval(p, x);
}

DenseTable dense_pseudo(const PseudoQuintic& s) {
    DenseTable pt = dense_table(s.p);  // level max(6, alpha level)
    auto rv = dense_values_z4(s.rlift);
    auto q2t = dense_table(s.q2);
    uint32_t level = std::max(s.r, 1u);
    DenseTable out;
    out.n = s.n;
    out.level = level;
    out.num.resize(pt.num.size());
    uint32_t down = pt.level - level;
    uint16_t mask = uint16_t((uint32_t(1) << level) - 1);
    for (size_t x = 0; x < out.num.size(); ++x) {
        uint16_t pn = pt.num[x];
        if (pn & ((uint16_t(1) << down) - 1))
            throw std::logic_error("dense_pseudo: quintic part escapes the value level");
        uint16_t half = uint16_t((binom2(int(rv[x])) & int(q2t.num[x])) << (level - 1));
        out.num[x] = uint16_t((uint16_t(pn >> down) + half) & mask);
    }
    return out;
}

Z4Poly build_R(const F2Poly& q1) {
    if (q1.degree() > 2) throw std::invalid_argument("build_R: input is not quadratic");
    Z4Poly r;
    r.n = q1.n;
    for (uint32_t s : q1.monos) r.coeffs[s] = 1;
    // coefficientwise lift of a quadratic is cubic; certify rather than trust
    if (measured_degree(r) > 3) throw std::logic_error("build_R: lift escaped degree 3");
    if (r.n <= 8 && !degree_test_z4(r, 3))
        throw std::logic_error("build_R: direct degree test failed");
    for (uint32_t x = 0; x < (uint32_t(1) << std::min(r.n, 12)); ++x)
        if (int(r.eval(x).v & 1) != q1.eval(x))
            throw std::logic_error("build_R: lift does not reduce to the quadratic");
    return r;
}

PseudoQuintic lift(const QuadPair& q, uint32_t r) {
    if (r < 1 || r > 5) throw std::invalid_argument("lift: level out of range");
    PseudoQuintic s;
    s.n = q.q1.n;
    s.r = r;
    s.rlift = build_R(q.q1);
    s.q2 = q.q2;
    s.p.n = s.n;
    s.p.d = 5;
    s.p.level = r;
    return s;
}

X5Cube sample_ncube(int n, uint32_t r, uint64_t seed) {
    Rng rng(seed);
    X5Cube c;
    c.n = n;
    c.r = r;
    c.q.q1 = random_classical(n, 2, rng);
    c.q.q2 = random_classical(n, 2, rng);
    c.s = lift(c.q, r);
    c.s.p = random_poly(n, 5, r, rng);
    return c;
}

Dyadic pullback_rho(const QuadPair& q, const std::array<uint32_t, 6>& hs) {
    // second derivatives of a quadratic are constants: four evaluations each
    auto bilin = [&](const F2Poly& f, uint32_t a, uint32_t b) {
        return f.eval(0) ^ f.eval(a) ^ f.eval(b) ^ f.eval(a ^ b);
    };
    std::array<int, 15> b1{}, b2{};
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) {
            b1[size_t(pair_slot(i, j))] = bilin(q.q1, hs[size_t(i)], hs[size_t(j)]);
            b2[size_t(pair_slot(i, j))] = bilin(q.q2, hs[size_t(i)], hs[size_t(j)]);
        }
    int parity = 0;
    for (const auto& p : partitions()) parity ^= b1[p.ab] & b1[p.cd] & b2[p.ef];
    return Dyadic::make(uint64_t(parity), 1);
}

Cocycle pullback_cocycle(const QuadPair& q, int n) {
    // cache the bilinear forms as row masks: B(u, v) is the parity of
    // u_i (rows[i] . v) over the set bits of u
    auto rows_of = [n](const F2Poly& f) {
        std::vector<uint32_t> rows(size_t(n), 0);
        for (uint32_t s : f.monos) {
            if (popcount32(s) != 2) continue;
            int i = __builtin_ctz(s);
            int j = __builtin_ctz(s >> (i + 1)) + i + 1;
            rows[size_t(i)] |= uint32_t(1) << j;
            rows[size_t(j)] |= uint32_t(1) << i;
        }
        return rows;
    };
    auto r1 = rows_of(q.q1), r2 = rows_of(q.q2);
    auto bilin = [](const std::vector<uint32_t>& rows, uint32_t u, uint32_t v) {
        int acc = 0;
        while (u) {
            int i = __builtin_ctz(u);
            u &= u - 1;
            acc ^= popcount32(rows[size_t(i)] & v) & 1;
        }
        return acc;
    };
    Cocycle rho;
    rho.n = n;
    rho.k = 5;
    rho.level = 1;
    rho.eval = [r1, r2, bilin](const std::vector<uint32_t>& hs, uint32_t) {
        if (hs.size() != 6) throw std::invalid_argument("pullback: shift count");
        std::array<int, 15> b1{}, b2{};
        for (int i = 0; i < 6; ++i)
            for (int j = i + 1; j < 6; ++j) {
                b1[size_t(pair_slot(i, j))] = bilin(r1, hs[size_t(i)], hs[size_t(j)]);
                b2[size_t(pair_slot(i, j))] = bilin(r2, hs[size_t(i)], hs[size_t(j)]);
            }
        int parity = 0;
        for (const auto& p : partitions()) parity ^= b1[p.ab] & b1[p.cd] & b2[p.ef];
        return Dyadic::make(uint64_t(parity), 1);
    };
    return rho;
}

CubeCheckReport x5_cube_check(const QuadPair& q, const std::function<Dyadic(uint32_t)>& s_eval,
                              int n, uint64_t samples, uint64_t seed) {
    CubeCheckReport rep;
    if (q.q1.degree() > 2 || q.q2.degree() > 2) {
        rep.detail = "quadratic pair exceeds degree 2";
        return rep;
    }
    uint32_t sz = uint32_t(1) << n;
    auto check_tuple = [&](uint32_t x, const std::array<uint32_t, 6>& hs) {
        Dyadic lhs;
        for (uint32_t omega = 0; omega < 64; ++omega) {
            uint32_t pt = x;
            for (int i = 0; i < 6; ++i)
                if (omega >> i & 1) pt ^= hs[size_t(i)];
            Dyadic term = s_eval(pt);
            if (popcount32(omega) & 1) term = -term;
            lhs = lhs + term;
        }
        ++rep.checks;
        if (lhs != pullback_rho(q, hs)) {
            std::ostringstream os;
            os << "sixth derivative mismatch at x=" << x << " h=(";
            for (int i = 0; i < 6; ++i) os << (i ? "," : "") << hs[size_t(i)];
            os << ")";
            rep.detail = os.str();
            return false;
        }
        return true;
    };

    rep.exhaustive = n <= 2;
    if (rep.exhaustive) {
        std::array<uint32_t, 6> hs{};
        uint64_t total = uint64_t(1) << (6 * n);
        for (uint64_t code = 0; code < total; ++code) {
            uint64_t c = code;
            for (int i = 0; i < 6; ++i) {
                hs[size_t(i)] = uint32_t(c & (sz - 1));
                c >>= n;
            }
            for (uint32_t x = 0; x < sz; ++x)
                if (!check_tuple(x, hs)) return rep;
        }
    } else {
        Rng rng(seed);
        for (uint64_t t = 0; t < samples; ++t) {
            std::array<uint32_t, 6> hs{};
            for (auto& h : hs) h = uint32_t(rng.below(sz));
            if (!check_tuple(uint32_t(rng.below(sz)), hs)) return rep;
        }
    }
    rep.ok = true;
    return rep;
}

CubeCheckReport x5_cube_check(const X5Cube& c, uint64_t samples, uint64_t seed) {
    if (c.n <= 14) {
        auto dt = dense_pseudo(c.s);
        return x5_cube_check(c.q, [&dt](uint32_t x) { return dt.at(x); }, c.n, samples, seed);
    }
    return x5_cube_check(c.q, [&c](uint32_t x) { return c.s.eval(x); }, c.n, samples, seed);
}

X5Vertex x5_corner_complete(const X5Partial& partial) {
    int n = partial.n;
    uint32_t top = (uint32_t(1) << n) - 1;

    // complete the Klein component in the degree-2 structure
    auto x2 = FilteredGroup::degree_filtration({1, 1}, 2);
    CubeTuple qt(n);
    for (uint32_t w = 0; w < qt.size(); ++w)
        qt.v[w] = GroupElem{partial.qv[w] & 1u, (partial.qv[w] >> 1) & 1u};
    GroupElem qtop = corner_complete(qt, x2);
    Klein qtop_k = Klein(qtop[0] | (qtop[1] << 1));
    qt.v[top] = qtop;

    // read the completed tuple as a quadratic pair and take its lift
    FuncTable comp1(n), comp2(n);
    for (uint32_t w = 0; w < qt.size(); ++w) {
        comp1.v[w] = Dyadic::make(qt.v[w][0], 1);
        comp2.v[w] = Dyadic::make(qt.v[w][1], 1);
    }
    auto p1 = from_table(comp1, 2), p2 = from_table(comp2, 2);
    if (!p1 || !p2) throw std::domain_error("x5_corner_complete: completed pair not quadratic");
    auto c1 = classical_from_polyrep(*p1), c2 = classical_from_polyrep(*p2);
    if (!c1 || !c2) throw std::domain_error("x5_corner_complete: completed pair not classical");
    QuadPair q{*c1, *c2};
    PseudoQuintic s0 = lift(q, partial.r);

    // the residual extends as a degree-5 polynomial over the cyclic fiber
    auto d5 = FilteredGroup::degree_filtration({partial.r}, 5);
    CubeTuple res(n);
    for (uint32_t w = 0; w < res.size(); ++w) {
        Dyadic d = partial.sv[w] - s0.eval(w);
        if (d.lev > partial.r)
            throw std::domain_error("x5_corner_complete: residual escapes the value level");
        res.v[w] = GroupElem{d.num_at_level(partial.r)};
    }
    GroupElem ttop = corner_complete(res, d5);
    X5Vertex out;
    out.q = qtop_k;
    out.s = s0.eval(top) + Dyadic::make(ttop[0], partial.r);
    return out;
}

// ---- serialization -------------------------------------------------------------

namespace {

void write_z4_block(std::ostream& os, const Z4Poly& r) {
    os << "POLY n=" << r.n << " d=3 mod4\n";
    uint8_t c0 = 0;
    if (auto it = r.coeffs.find(0); it != r.coeffs.end()) c0 = it->second;
    os << "CONST " << int(c0) << "\n";
    std::vector<uint32_t> keys;
    for (const auto& [s, a] : r.coeffs)
        if (s != 0 && (a & 3)) keys.push_back(s);
    std::sort(keys.begin(), keys.end(), lex_mask_less);
    for (uint32_t s : keys) {
        os << "TERM ";
        auto idx = mask_indices(s);
        for (size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i];
        os << " " << int(r.coeffs.at(s) & 3) << "\n";
    }
}

bool read_z4_block(std::istream& is, Z4Poly& r, std::string* err) {
    std::string line;
    if (!std::getline(is, line)) {
        if (err) *err = "missing mod-4 block header";
        return false;
    }
    std::istringstream hs(line);
    std::string tag, t1, t2, t3;
    hs >> tag >> t1 >> t2 >> t3;
    if (tag != "POLY" || t1.rfind("n=", 0) != 0 || t2 != "d=3" || t3 != "mod4") {
        if (err) *err = "bad mod-4 block header: " + line;
        return false;
    }
    r.n = std::stoi(t1.substr(2));
    if (!std::getline(is, line) || line.rfind("CONST ", 0) != 0) {
        if (err) *err = "missing mod-4 CONST";
        return false;
    }
    int c0 = std::stoi(line.substr(6));
    if (c0 < 0 || c0 > 3) {
        if (err) *err = "mod-4 CONST out of range";
        return false;
    }
    if (c0) r.coeffs[0] = uint8_t(c0);
    while (is.peek() == 'T' && std::getline(is, line)) {
        std::istringstream ts(line);
        std::string tag2, idxs;
        int c = 0;
        ts >> tag2 >> idxs >> c;
        if (ts.fail() || tag2 != "TERM" || c < 1 || c > 3) {
            if (err) *err = "bad mod-4 TERM: " + line;
            return false;
        }
        uint32_t mask = 0;
        int last = 0;
        std::istringstream iss(idxs);
        std::string part;
        while (std::getline(iss, part, ',')) {
            int i = std::stoi(part);
            if (i <= last || i > r.n) {
                if (err) *err = "mod-4 TERM indices out of order: " + line;
                return false;
            }
            last = i;
            mask |= uint32_t(1) << (i - 1);
        }
        r.coeffs[mask] = uint8_t(c);
    }
    return true;
}

}  // namespace

void write_pq(std::ostream& os, const X5Cube& c) {
    os << "PQ n=" << c.n << " r=" << c.r << "\n";
    write_z4_block(os, c.s.rlift);
    write_poly(os, classical_to_polyrep(c.q.q2, 2));
    write_poly(os, c.s.p);
}

std::optional<X5Cube> read_pq(std::istream& is, std::string* err) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("PQ n=", 0) != 0) {
        if (err) *err = "missing PQ header";
        return std::nullopt;
    }
    X5Cube c;
    {
        std::istringstream hs(line);
        std::string tag, t1, t2;
        hs >> tag >> t1 >> t2;
        if (t1.rfind("n=", 0) != 0 || t2.rfind("r=", 0) != 0) {
            if (err) *err = "bad PQ header: " + line;
            return std::nullopt;
        }
        c.n = std::stoi(t1.substr(2));
        c.r = uint32_t(std::stoi(t2.substr(2)));
        if (c.n < 0 || c.n > 30 || c.r < 1 || c.r > 5) {
            if (err) *err = "PQ header out of range";
            return std::nullopt;
        }
    }
    if (!read_z4_block(is, c.s.rlift, err)) return std::nullopt;
    auto q2p = read_poly(is, err);
    if (!q2p) return std::nullopt;
    auto q2 = classical_from_polyrep(*q2p);
    if (!q2) {
        if (err) *err = "quadratic block is not classical";
        return std::nullopt;
    }
    auto p = read_poly(is, err);
    if (!p) return std::nullopt;
    c.s.n = c.n;
    c.s.r = c.r;
    c.s.q2 = *q2;
    c.s.p = *p;
    // the first quadratic is the mod-2 reduction of the carrier
    c.q.q1.n = c.n;
    for (const auto& [s, a] : c.s.rlift.coeffs)
        if (a & 1) c.q.q1.monos.push_back(s);
    std::sort(c.q.q1.monos.begin(), c.q.q1.monos.end());
    c.q.q2 = *q2;
    if (c.q.q1.degree() > 2 || measured_degree(c.s.rlift) > 3) {
        if (err) *err = "carrier block is not a cubic lift of a quadratic";
        return std::nullopt;
    }
    return c;
}

}  // namespace nilforge
