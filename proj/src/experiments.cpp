#include "nilforge/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "nilforge/rng.hpp"

namespace nilforge {

namespace {

int popcount32(uint32_t m) { return __builtin_popcount(m); }

std::vector<std::complex<double>> unit_circle(uint32_t level) {
    size_t size = size_t(1) << level;
    std::vector<std::complex<double>> e(size);
    for (size_t v = 0; v < size; ++v) {
        double theta = 2.0 * M_PI * double(v) / double(size);
        e[v] = {std::cos(theta), std::sin(theta)};
    }
    return e;
}

}  // namespace

RestrictionFrame make_frame(const X5Cube& c, int M, int d) {
    RestrictionFrame f;
    f.M = M;
    f.d = d;
    f.r = c.r;
    f.q0.resize(size_t(1) << M);
    f.s0.resize(size_t(1) << M);
    for (uint32_t a = 0; a < f.q0.size(); ++a) {
        f.q0[a] = c.q.eval(a);  // the face embeds on the leading coordinates
        f.s0[a] = c.s.eval(a);
    }
    return f;
}

uint64_t cube_key(const std::vector<Klein>& q, const std::vector<Dyadic>& s, uint32_t r) {
    uint64_t key = 0;
    for (size_t i = 0; i < q.size(); ++i) {
        key = (key << 2) | q[i];
        key = (key << r) | s[i].num_at_level(r);
    }
    return key;
}

SigmaSpace enumerate_sigma(const RestrictionFrame& frame) {
    int m = frame.M + frame.d;
    if (m > 2)
        throw std::invalid_argument("enumerate_sigma: enumeration budget is M + d <= 2");
    uint32_t verts = uint32_t(1) << m;
    uint32_t face = uint32_t(1) << frame.M;
    SigmaSpace sigma;
    sigma.frame = frame;

    // monomials available to the quadratic layer and the quintic fiber: any
    // monomial not supported inside the pinned face
    std::vector<uint32_t> qmono, pmono;
    for (uint32_t s = 0; s < verts; ++s) {
        bool in_face = (s & (face - 1)) == s;
        if (in_face) continue;
        if (popcount32(s) <= 2) qmono.push_back(s);
        if (popcount32(s) <= 5) pmono.push_back(s);
    }

    // base extension of the quadratic layer through the projection
    std::vector<Klein> qbase(verts);
    for (uint32_t y = 0; y < verts; ++y) qbase[y] = frame.q0[y & (face - 1)];

    // fiber coefficient budget per monomial of the quintic layer
    std::vector<uint32_t> pbits;
    uint64_t fiber = 1;
    for (uint32_t s : pmono) {
        uint32_t denom = uint32_t(6 - popcount32(s));
        uint32_t e = std::min(denom, frame.r);
        pbits.push_back(e);
        fiber <<= e;
    }
    if (fiber > (uint64_t(1) << 26))
        throw std::invalid_argument("enumerate_sigma: fiber too large to enumerate");

    uint64_t qcombos = uint64_t(1) << (2 * qmono.size());
    for (uint64_t qc = 0; qc < qcombos; ++qc) {
        // decode the quadratic extension
        std::vector<Klein> qv = qbase;
        uint64_t code = qc;
        F2Poly e1{m, {}}, e2{m, {}};
        for (uint32_t s : qmono) {
            if (code & 1) e1.monos.push_back(s);
            if (code & 2) e2.monos.push_back(s);
            code >>= 2;
        }
        for (uint32_t y = 0; y < verts; ++y)
            qv[y] = Klein(qv[y] ^ uint32_t(e1.eval(y)) ^ (uint32_t(e2.eval(y)) << 1));

        // recover the pair as polynomials and take the distinguished lift
        FuncTable c1(m), c2(m);
        for (uint32_t y = 0; y < verts; ++y) {
            c1.v[y] = Dyadic::make(qv[y] & 1, 1);
            c2.v[y] = Dyadic::make(qv[y] >> 1 & 1, 1);
        }
        auto p1 = from_table(c1, 2), p2 = from_table(c2, 2);
        if (!p1 || !p2) throw std::logic_error("enumerate_sigma: extension not quadratic");
        auto q1 = classical_from_polyrep(*p1), q2 = classical_from_polyrep(*p2);
        PseudoQuintic s0 = lift(QuadPair{*q1, *q2}, frame.r);

        // correct the lift on the pinned face by a projected quintic
        FuncTable delta(frame.M);
        for (uint32_t a = 0; a < face; ++a) delta.v[a] = frame.s0[a] - s0.eval(a);
        auto dpoly = from_table(delta, 5);
        if (!dpoly) throw std::logic_error("enumerate_sigma: face residual is not quintic");
        std::vector<Dyadic> sv(verts);
        for (uint32_t y = 0; y < verts; ++y)
            sv[y] = s0.eval(y) + eval(*dpoly, y & (face - 1));

        // walk the fiber coset
        for (uint64_t pc = 0; pc < fiber; ++pc) {
            PolyRep rem;
            rem.n = m;
            rem.d = 5;
            rem.level = frame.r;
            uint64_t pcode = pc;
            for (size_t i = 0; i < pmono.size(); ++i) {
                uint32_t denom = uint32_t(6 - popcount32(pmono[i]));
                uint64_t c = (pcode & ((uint64_t(1) << pbits[i]) - 1)) << (denom - pbits[i]);
                pcode >>= pbits[i];
                if (c) rem.coeffs[pmono[i]] = c;
            }
            SigmaElem elem;
            elem.q = qv;
            elem.s.resize(verts);
            for (uint32_t y = 0; y < verts; ++y) elem.s[y] = sv[y] + eval(rem, y);
            uint64_t key = cube_key(elem.q, elem.s, frame.r);
            if (sigma.index.emplace(key, sigma.elems.size()).second)
                sigma.elems.push_back(std::move(elem));
        }
    }
    return sigma;
}

double tv_to_uniform(const std::vector<uint64_t>& counts, uint64_t total) {
    double uniform = 1.0 / double(counts.size());
    double acc = 0;
    for (uint64_t c : counts) acc += std::abs(double(c) / double(total) - uniform);
    return acc / 2.0;
}

TvReport estimate_tv(const X5Cube& c, int M, int d, uint64_t samples, uint64_t seed) {
    auto frame = make_frame(c, M, d);
    auto sigma = enumerate_sigma(frame);
    TvReport rep;
    rep.sigma_size = sigma.elems.size();
    rep.samples = samples;
    rep.band = 3.0 * std::sqrt(double(rep.sigma_size) / double(samples));

    auto sden = dense_pseudo(c.s);
    uint32_t verts = uint32_t(1) << (M + d);
    uint32_t face = uint32_t(1) << M;
    uint32_t sz = uint32_t(1) << c.n;

    std::vector<uint64_t> counts(sigma.elems.size(), 0);
    Rng rng(seed);
    std::vector<Klein> qv(verts);
    std::vector<Dyadic> sv(verts);
    for (uint64_t t = 0; t < samples; ++t) {
        std::vector<uint32_t> dirs(static_cast<size_t>(d));
        for (auto& v : dirs) v = uint32_t(rng.below(sz));
        for (uint32_t y = 0; y < verts; ++y) {
            uint32_t x = y & (face - 1);  // pinned coordinates embed directly
            for (int i = 0; i < d; ++i)
                if (y >> (M + i) & 1) x ^= dirs[size_t(i)];
            qv[y] = c.q.eval(x);
            sv[y] = sden.at(x);
        }
        auto it = sigma.index.find(cube_key(qv, sv, c.r));
        if (it == sigma.index.end())
            throw std::logic_error("estimate_tv: restricted sample escaped the enumeration");
        ++counts[it->second];
    }
    rep.tv = tv_to_uniform(counts, samples);

    // self-calibration: uniform draws from the enumerated set
    std::vector<uint64_t> ucounts(sigma.elems.size(), 0);
    for (uint64_t t = 0; t < samples; ++t) ++ucounts[rng.below(rep.sigma_size)];
    rep.selfcal_tv = tv_to_uniform(ucounts, samples);
    return rep;
}

CondExpReport conditional_expectation_error(const PhaseTable& target,
                                            const std::vector<PhaseTable>& generators) {
    CondExpReport rep;
    size_t size = target.num.size();
    rep.points = size;
    for (const auto& g : generators)
        if (g.n != target.n)
            throw std::invalid_argument("conditional_expectation_error: dimension mismatch");

    // exact cell keys: the tuple of generator numerators at each point
    std::map<std::vector<uint16_t>, std::vector<uint32_t>> cells;
    std::vector<uint16_t> key(generators.size());
    for (size_t x = 0; x < size; ++x) {
        for (size_t g = 0; g < generators.size(); ++g) key[g] = generators[g].num[x];
        auto& slot = cells[key];
        if (slot.empty()) slot.assign(size_t(1) << target.level, 0);
        ++slot[target.num[x]];
    }
    rep.cells = cells.size();
    rep.overfit = rep.cells * 8 >= rep.points;

    auto circle = unit_circle(target.level);
    double total = 0;
    for (const auto& [k, hist] : cells) {
        uint64_t count = 0;
        size_t nonzero = 0;
        for (size_t v = 0; v < hist.size(); ++v)
            if (hist[v]) {
                count += hist[v];
                ++nonzero;
            }
        if (nonzero <= 1) continue;  // a constant cell contributes exactly zero
        std::complex<double> mean{0, 0};
        for (size_t v = 0; v < hist.size(); ++v)
            if (hist[v]) mean += double(hist[v]) * circle[v];
        mean /= double(count);
        for (size_t v = 0; v < hist.size(); ++v)
            if (hist[v]) total += double(hist[v]) * std::abs(circle[v] - mean);
    }
    rep.error = total / double(size);
    return rep;
}

namespace {

ProbeRow row_of(const CondExpReport& r) { return ProbeRow{r.error, r.cells, r.overfit}; }

ProbeRow probe_main(const X5Cube& c, int M, std::vector<double>* refinement,
                    double* corr_out) {
    auto sden = dense_pseudo(c.s);
    PhaseTable sphase = PhaseTable::from(sden);
    PhaseTable target = PhaseTable::from(c.s.p);
    std::vector<PhaseTable> gens;
    ProbeRow out;
    for (uint32_t a = 0; a < (uint32_t(1) << M); ++a) {
        gens.push_back(translate(sphase, a));
        auto rep = conditional_expectation_error(target, gens);
        if (refinement) refinement->push_back(rep.error);
        out = row_of(rep);
    }
    if (corr_out) *corr_out = correlation(sphase, target).magnitude;
    return out;
}

}  // namespace

ProbeReport measurability_probe(int n, int M, uint32_t r, uint64_t seed) {
    if (n > 18) throw std::invalid_argument("measurability_probe: n exceeds 18");
    ProbeReport rep;
    rep.n = n;
    rep.M = M;
    rep.r = r;
    rep.seed = seed;
    rep.points = size_t(1) << n;

    auto c = sample_ncube(n, r, seed);
    rep.main = probe_main(c, M, &rep.refinement, &rep.correlation);

    // control rows: a target among the generators, and a constant target
    auto sphase = PhaseTable::from(dense_pseudo(c.s));
    std::vector<PhaseTable> gens;
    for (uint32_t a = 0; a < (uint32_t(1) << M); ++a) gens.push_back(translate(sphase, a));
    rep.control_self = row_of(conditional_expectation_error(sphase, gens));
    PhaseTable constant;
    constant.n = n;
    constant.level = 3;
    constant.num.assign(size_t(1) << n, 3);
    rep.control_const = row_of(conditional_expectation_error(constant, gens));

    // the level-one contrast with the same seed
    auto c1 = sample_ncube(n, 1, seed);
    rep.contrast = probe_main(c1, M, nullptr, &rep.contrast_correlation);
    return rep;
}

}  // namespace nilforge
