#include "nilforge/cube.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

namespace nilforge {

namespace {

int popcount32(uint32_t m) { return __builtin_popcount(m); }

uint64_t factor_mask(uint32_t r) { return (uint64_t(1) << r) - 1; }

}  // namespace

FilteredGroup FilteredGroup::degree_filtration(std::vector<uint32_t> levels, int d) {
    FilteredGroup g;
    g.factor_levels = std::move(levels);
    g.filt.assign(size_t(d) + 1, std::vector<uint32_t>(g.factor_levels.size(), 0));
    return g;
}

size_t FilteredGroup::order() const {
    size_t n = 1;
    for (uint32_t r : factor_levels) n <<= r;
    return n;
}

uint32_t FilteredGroup::sub_exponent(int i, int j) const {
    if (i <= 0) return 0;
    uint32_t s = (size_t(i) < filt.size()) ? filt[size_t(i)][size_t(j)] : factor_levels[size_t(j)];
    return std::min(s, factor_levels[size_t(j)]);
}

bool FilteredGroup::level_trivial(int i) const {
    for (int j = 0; j < nfactors(); ++j)
        if (sub_exponent(i, j) < factor_levels[size_t(j)]) return false;
    return true;
}

int FilteredGroup::degree() const {
    int d = 0;
    for (int i = 1; i <= int(filt.size()); ++i)
        if (!level_trivial(i)) d = i;
    return d;
}

bool FilteredGroup::has_proper(int i) const {
    for (int j = 0; j < nfactors(); ++j)
        if (sub_exponent(i, j) > 0) return true;
    return false;
}

bool FilteredGroup::in_level(const GroupElem& g, int i) const {
    for (int j = 0; j < nfactors(); ++j) {
        uint32_t s = sub_exponent(i, j);
        if (g[size_t(j)] & ((uint64_t(1) << s) - 1)) return false;
    }
    return true;
}

GroupElem FilteredGroup::add(const GroupElem& a, const GroupElem& b) const {
    GroupElem c(a.size());
    for (size_t j = 0; j < a.size(); ++j) c[j] = (a[j] + b[j]) & factor_mask(factor_levels[j]);
    return c;
}

GroupElem FilteredGroup::neg(const GroupElem& a) const {
    GroupElem c(a.size());
    for (size_t j = 0; j < a.size(); ++j) c[j] = (~a[j] + 1) & factor_mask(factor_levels[j]);
    return c;
}

GroupElem FilteredGroup::sub(const GroupElem& a, const GroupElem& b) const {
    return add(a, neg(b));
}

size_t FilteredGroup::elem_index(const GroupElem& g) const {
    size_t idx = 0;
    for (int j = nfactors() - 1; j >= 0; --j) idx = (idx << factor_levels[size_t(j)]) | g[size_t(j)];
    return idx;
}

GroupElem FilteredGroup::elem_at(size_t idx) const {
    GroupElem g(factor_levels.size());
    for (int j = 0; j < nfactors(); ++j) {
        g[size_t(j)] = idx & factor_mask(factor_levels[size_t(j)]);
        idx >>= factor_levels[size_t(j)];
    }
    return g;
}

GroupElem FilteredGroup::random_in_level(int i, Rng& rng) const {
    GroupElem g(factor_levels.size());
    for (int j = 0; j < nfactors(); ++j) {
        uint32_t s = sub_exponent(i, j);
        uint32_t r = factor_levels[size_t(j)];
        g[size_t(j)] = rng.below(uint64_t(1) << (r - s)) << s;
    }
    return g;
}

CubeTuple cube_from_param(const FilteredGroup& g, const HKParam& p) {
    CubeTuple t(p.m);
    for (uint32_t w = 0; w < t.size(); ++w) {
        GroupElem acc = g.zero();
        for (uint32_t a = 0; a <= w; ++a)
            if ((a & w) == a) acc = g.add(acc, p.h[a]);
        t.v[w] = acc;
    }
    return t;
}

std::optional<HKParam> hk_cube_check(const CubeTuple& t, const FilteredGroup& g) {
    HKParam p(t.m);
    for (uint32_t a = 0; a < t.size(); ++a) {
        // alternating sum over the subcube below a eliminates the parameter
        GroupElem acc = g.zero();
        int pa = popcount32(a);
        for (uint32_t b = 0; b <= a; ++b) {
            if ((b & a) != b) continue;
            GroupElem term = t.v[b];
            if ((pa - popcount32(b)) & 1) term = g.neg(term);
            acc = g.add(acc, term);
        }
        if (!g.in_level(acc, pa)) return std::nullopt;
        p.h[a] = acc;
    }
    return p;
}

HKParam random_param(const FilteredGroup& g, int m, Rng& rng) {
    HKParam p(m);
    for (uint32_t a = 0; a < p.h.size(); ++a) p.h[a] = g.random_in_level(popcount32(a), rng);
    return p;
}

GroupElem corner_complete(const CubeTuple& partial, const FilteredGroup& g) {
    int m = partial.m;
    uint32_t top = (uint32_t(1) << m) - 1;
    for (int i = 0; i < m; ++i) {
        CubeTuple face(m - 1);
        uint32_t low = (uint32_t(1) << i) - 1;
        for (uint32_t w = 0; w < face.size(); ++w) {
            uint32_t full = (w & low) | ((w & ~low) << 1);
            face.v[w] = partial.v[full];
        }
        if (!hk_cube_check(face, g))
            throw std::domain_error("corner_complete: face omitting axis " +
                                    std::to_string(i + 1) + " is not a cube");
    }
    GroupElem acc = g.zero();
    for (uint32_t b = 0; b < top; ++b) {
        GroupElem term = partial.v[b];
        if ((m - popcount32(b)) & 1) term = g.neg(term);
        acc = g.add(acc, term);
    }
    return g.neg(acc);  // top parameter chosen zero
}

bool corner_unique(const FilteredGroup& g, int m) { return g.level_trivial(m); }

bool morphism_check(const std::vector<GroupElem>& f, const FilteredGroup& dom,
                    const FilteredGroup& cod) {
    if (f.size() != dom.order()) throw std::invalid_argument("morphism_check: table size");
    struct Gen {
        GroupElem h;
        int deg;
    };
    std::vector<Gen> gens;
    for (int i = 1; !dom.level_trivial(i) && i <= 64; ++i) {
        for (int j = 0; j < dom.nfactors(); ++j) {
            uint32_t s = dom.sub_exponent(i, j);
            if (s >= dom.factor_levels[size_t(j)]) continue;
            GroupElem h = dom.zero();
            h[size_t(j)] = uint64_t(1) << s;
            gens.push_back({h, i});
        }
    }
    int cod_deg = cod.degree();

    std::function<bool(const std::vector<GroupElem>&, size_t, int)> rec =
        [&](const std::vector<GroupElem>& table, size_t gi, int total) -> bool {
        if (total > 0) {
            for (const auto& e : table)
                if (!cod.in_level(e, total)) return false;
        }
        bool is_zero_table = true;
        for (const auto& e : table) {
            for (uint64_t w : e)
                if (w) {
                    is_zero_table = false;
                    break;
                }
            if (!is_zero_table) break;
        }
        // further differences of the zero function stay zero
        if (is_zero_table) return true;
        if (total > cod_deg) return false;
        for (size_t g2 = gi; g2 < gens.size(); ++g2) {
            std::vector<GroupElem> d(table.size());
            for (size_t x = 0; x < table.size(); ++x) {
                GroupElem xe = dom.elem_at(x);
                size_t xh = dom.elem_index(dom.add(xe, gens[g2].h));
                d[x] = cod.sub(table[xh], table[x]);
            }
            if (!rec(d, g2, total + gens[g2].deg)) return false;
        }
        return true;
    };
    return rec(f, 0, 0);
}

bool phom_check(const FilteredGroup& g) {
    if (g.has_proper(1)) throw std::invalid_argument("phom_check: filtration not ergodic");
    for (int i = 1; i <= g.degree() + 1; ++i)
        for (int j = 0; j < g.nfactors(); ++j) {
            uint32_t s = g.sub_exponent(i, j);
            uint32_t snext = g.sub_exponent(i + 1, j);
            uint32_t r = g.factor_levels[size_t(j)];
            if (std::min(s + 1, r) < snext) return false;
        }
    return true;
}

FilteredGroup hk_group(const FilteredGroup& g, int k) {
    FilteredGroup out;
    size_t cnt = size_t(1) << k;
    for (uint32_t a = 0; a < cnt; ++a) {
        int pa = popcount32(a);
        for (int j = 0; j < g.nfactors(); ++j)
            out.factor_levels.push_back(g.factor_levels[size_t(j)] - g.sub_exponent(pa, j));
    }
    int deg = g.degree();
    out.filt.assign(size_t(deg) + 1, {});
    for (int i = 0; i <= deg; ++i)
        for (uint32_t a = 0; a < cnt; ++a) {
            int pa = popcount32(a);
            for (int j = 0; j < g.nfactors(); ++j) {
                uint32_t base = g.sub_exponent(pa, j);
                uint32_t lifted = g.sub_exponent(pa + i, j);
                out.filt[size_t(i)].push_back(lifted - base);
            }
        }
    return out;
}

// ---- skew products -----------------------------------------------------------

namespace {

// all (k1)-dimensional faces of the m-cube: free axes plus pinned-axis bits
template <typename Fn>
void for_each_face(int m, int k1, Fn&& fn) {
    if (k1 > m) return;
    std::vector<int> axes(static_cast<size_t>(k1));
    std::function<void(int, int)> choose = [&](int start, int depth) {
        if (depth == k1) {
            uint32_t freemask = 0;
            for (int a : axes) freemask |= uint32_t(1) << a;
            uint32_t pinned = (~freemask) & ((uint32_t(1) << m) - 1);
            for (uint32_t sub = pinned;; sub = (sub - 1) & pinned) {
                fn(axes, sub);
                if (sub == 0) break;
            }
            return;
        }
        for (int a = start; a < m; ++a) {
            axes[size_t(depth)] = a;
            choose(a + 1, depth + 1);
        }
    };
    choose(0, 0);
}

uint32_t face_vertex(const std::vector<int>& axes, uint32_t pinned_bits, uint32_t w) {
    uint32_t v = pinned_bits;
    for (size_t i = 0; i < axes.size(); ++i)
        if (w >> i & 1) v |= uint32_t(1) << axes[i];
    return v;
}

}  // namespace

bool skew_cube_check(const SkewTuple& t, const SkewSpace& s) {
    CubeTuple base(t.m);
    base.v = t.base;
    if (!hk_cube_check(base, *s.base)) return false;
    bool ok = true;
    for_each_face(t.m, s.k + 1, [&](const std::vector<int>& axes, uint32_t pinned) {
        if (!ok) return;
        CubeTuple face(s.k + 1);
        uint32_t zsum = 0;
        for (uint32_t w = 0; w < face.size(); ++w) {
            uint32_t v = face_vertex(axes, pinned, w);
            face.v[w] = t.base[v];
            zsum ^= t.fiber[v];  // alternating sum in an elementary 2-group
        }
        if (zsum != s.rho(face)) ok = false;
    });
    return ok;
}

SkewTuple skew_lift(const CubeTuple& base_cube, const SkewSpace& s) {
    SkewTuple t(base_cube.m);
    t.base = base_cube.v;
    int k1 = s.k + 1;
    std::vector<uint32_t> order(t.size());
    for (uint32_t w = 0; w < t.size(); ++w) order[w] = w;
    std::sort(order.begin(), order.end(), [](uint32_t a, uint32_t b) {
        return popcount32(a) != popcount32(b) ? popcount32(a) < popcount32(b) : a < b;
    });
    for (uint32_t w : order) {
        if (popcount32(w) < k1) {
            t.fiber[w] = 0;
            continue;
        }
        // complete along the face spanned by the first k+1 set bits of w
        std::vector<int> axes;
        for (int b = 0; b < t.m && int(axes.size()) < k1; ++b)
            if (w >> b & 1) axes.push_back(b);
        uint32_t freemask = 0;
        for (int a : axes) freemask |= uint32_t(1) << a;
        uint32_t pinned = w & ~freemask;
        CubeTuple face(k1);
        uint32_t zsum = 0;
        for (uint32_t fw = 0; fw < face.size(); ++fw) {
            uint32_t v = face_vertex(axes, pinned, fw);
            face.v[fw] = t.base[v];
            if (v != w) zsum ^= t.fiber[v];
        }
        t.fiber[w] = s.rho(face) ^ zsum;
    }
    return t;
}

void write_cube_csv(std::ostream& os, const CubeTuple& t, const FilteredGroup& g) {
    for (uint32_t w = 0; w < t.size(); ++w) {
        std::string bits(size_t(t.m), '0');
        for (int i = 0; i < t.m; ++i)
            if (w >> i & 1) bits[size_t(i)] = '1';
        os << bits << "," << g.elem_index(t.v[w]) << "\n";
    }
}

std::optional<CubeTuple> read_cube_csv(std::istream& is, const FilteredGroup& g,
                                       std::string* err) {
    std::vector<GroupElem> vals;
    std::string line;
    int m = -1;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) {
            if (err) *err = "bad cube row: " + line;
            return std::nullopt;
        }
        std::string bits = line.substr(0, comma);
        if (m < 0)
            m = int(bits.size());
        else if (int(bits.size()) != m) {
            if (err) *err = "inconsistent vertex width: " + line;
            return std::nullopt;
        }
        uint32_t w = 0;
        for (int i = 0; i < m; ++i) {
            if (bits[size_t(i)] == '1')
                w |= uint32_t(1) << i;
            else if (bits[size_t(i)] != '0') {
                if (err) *err = "bad vertex bitstring: " + line;
                return std::nullopt;
            }
        }
        size_t idx = 0;
        try {
            size_t pos = 0;
            idx = std::stoull(line.substr(comma + 1), &pos);
            if (pos != line.size() - comma - 1 || idx >= g.order()) throw std::runtime_error("");
        } catch (...) {
            if (err) *err = "bad point index: " + line;
            return std::nullopt;
        }
        if (w != vals.size()) {
            if (err) *err = "cube rows out of order: " + line;
            return std::nullopt;
        }
        vals.push_back(g.elem_at(idx));
    }
    if (m < 0 || vals.size() != (size_t(1) << m)) {
        if (err) *err = "cube has wrong number of rows";
        return std::nullopt;
    }
    CubeTuple t(m);
    t.v = std::move(vals);
    return t;
}

}  // namespace nilforge
