#include "nilforge/poly.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "nilforge/kernels.hpp"

namespace nilforge {

namespace {

uint64_t mod_mask(uint32_t lambda) {
    return lambda >= 64 ? ~uint64_t(0) : ((uint64_t(1) << lambda) - 1);
}

// canonical coefficients from a multilinear numerator form mod 2^lambda
PolyRep canonicalize(int n, int d, uint32_t level, uint32_t lambda,
                     const std::map<uint32_t, uint64_t>& w, std::string* violation) {
    PolyRep p;
    p.n = n;
    p.d = d;
    p.level = level;
    for (const auto& [mask, raw] : w) {
        Dyadic v = Dyadic::make(raw, lambda);
        if (v.is_zero()) continue;
        if (mask == 0) {
            p.alpha = v;
            continue;
        }
        int k = popcount(mask);
        int denom = d + 1 - k;
        if (denom < 0 || v.lev > uint32_t(denom)) {
            if (violation) {
                std::ostringstream os;
                os << "monomial {";
                bool first = true;
                for (int i = 0; i < n; ++i)
                    if (mask >> i & 1) {
                        os << (first ? "" : ",") << (i + 1);
                        first = false;
                    }
                os << "} has degree " << (k + int(v.lev) - 1) << " > " << d;
                *violation = os.str();
            }
            throw std::domain_error("canonicalize: degree bound violated");
        }
        p.coeffs[mask] = v.num << (uint32_t(denom) - v.lev);
    }
    return p;
}

std::vector<int> mask_indices(uint32_t mask) {
    std::vector<int> idx;
    for (int i = 0; i < 32; ++i)
        if (mask >> i & 1) idx.push_back(i + 1);
    return idx;
}

bool lex_mask_less(uint32_t a, uint32_t b) {
    return mask_indices(a) < mask_indices(b);
}

}  // namespace

// ---- FuncTable -------------------------------------------------------------

uint32_t FuncTable::max_level() const {
    uint32_t m = 0;
    for (const auto& d : v) m = std::max(m, d.lev);
    return m;
}

FuncTable derivative(const FuncTable& f, uint32_t h) {
    FuncTable g(f.n);
    for (uint32_t x = 0; x < f.size(); ++x) g.v[x] = f.v[x ^ h] - f.v[x];
    return g;
}

FuncTable translate(const FuncTable& f, uint32_t h) {
    FuncTable g(f.n);
    for (uint32_t x = 0; x < f.size(); ++x) g.v[x] = f.v[x ^ h];
    return g;
}

FuncTable operator+(const FuncTable& a, const FuncTable& b) {
    if (a.n != b.n) throw std::invalid_argument("table dimension mismatch");
    FuncTable g(a.n);
    for (uint32_t x = 0; x < a.size(); ++x) g.v[x] = a.v[x] + b.v[x];
    return g;
}

FuncTable operator-(const FuncTable& a, const FuncTable& b) {
    if (a.n != b.n) throw std::invalid_argument("table dimension mismatch");
    FuncTable g(a.n);
    for (uint32_t x = 0; x < a.size(); ++x) g.v[x] = a.v[x] - b.v[x];
    return g;
}

FuncTable scale(const FuncTable& f, int64_t m) {
    FuncTable g(f.n);
    for (uint32_t x = 0; x < f.size(); ++x) g.v[x] = f.v[x].scale(m);
    return g;
}

namespace {

bool all_zero(const FuncTable& f) {
    for (const auto& d : f.v)
        if (!d.is_zero()) return false;
    return true;
}

bool degree_test_rec(const FuncTable& f, int k, int depth, int min_i) {
    if (depth == k + 1) return all_zero(f);
    for (int i = min_i; i < f.n; ++i)
        if (!degree_test_rec(derivative(f, uint32_t(1) << i), k, depth + 1, i)) return false;
    return true;
}

}  // namespace

bool degree_test(const FuncTable& f, int k) {
    if (k < -1) throw std::invalid_argument("degree_test: k < -1");
    return degree_test_rec(f, k, 0, 0);
}

FuncTable restrict_coord(const FuncTable& f, int j, int bit) {
    FuncTable g(f.n - 1);
    uint32_t low = (uint32_t(1) << j) - 1;
    for (uint32_t y = 0; y < g.size(); ++y) {
        uint32_t x = (y & low) | (uint32_t(bit) << j) | ((y & ~low) << 1);
        g.v[y] = f.v[x];
    }
    return g;
}

FuncTable extend_invariant(const FuncTable& f, int j) {
    FuncTable g(f.n + 1);
    uint32_t low = (uint32_t(1) << j) - 1;
    for (uint32_t x = 0; x < g.size(); ++x) {
        uint32_t y = (x & low) | ((x >> (j + 1)) << j);
        g.v[x] = f.v[y];
    }
    return g;
}

// ---- PolyRep ----------------------------------------------------------------

Dyadic eval(const PolyRep& p, uint32_t x) {
    uint32_t lambda = uint32_t(p.d) + 1;
    uint64_t mask = mod_mask(lambda);
    uint64_t acc = 0;
    for (const auto& [S, c] : p.coeffs)
        if ((S & x) == S) acc = (acc + (c << popcount(S))) & mask;
    return Dyadic::make(acc, lambda) + p.alpha;
}

Dyadic eval(const PolyRep& p, BitVector x) {
    if (x.n != p.n) throw std::invalid_argument("eval: dimension mismatch");
    return eval(p, x.bits);
}

int measured_degree(const PolyRep& p) {
    int deg = -1;
    if (!p.alpha.is_zero()) deg = 0;
    for (const auto& [S, c] : p.coeffs) {
        Dyadic v = Dyadic::make(c, uint32_t(p.d + 1 - popcount(S)));
        if (v.is_zero()) continue;
        deg = std::max(deg, popcount(S) + int(v.lev) - 1);
    }
    return deg;
}

bool degree_test(const PolyRep& p, int k) {
    if (k < -1) throw std::invalid_argument("degree_test: k < -1");
    return measured_degree(p) <= k;
}

PolyRep rebound(const PolyRep& p, int d2) {
    if (measured_degree(p) > d2) throw std::domain_error("rebound: degree too large");
    PolyRep q;
    q.n = p.n;
    q.d = d2;
    q.level = p.level;
    q.alpha = p.alpha;
    for (const auto& [S, c] : p.coeffs) {
        int k = popcount(S);
        Dyadic v = Dyadic::make(c, uint32_t(p.d + 1 - k));
        if (v.is_zero()) continue;
        q.coeffs[S] = v.num << (uint32_t(d2 + 1 - k) - v.lev);
    }
    return q;
}

PolyRep derivative(const PolyRep& p, uint32_t h) {
    uint32_t lambda = uint32_t(p.d) + 1;
    uint64_t mask = mod_mask(lambda);
    std::map<uint32_t, uint64_t> w;
    for (const auto& [S, c] : p.coeffs) {
        uint32_t touched = S & h;
        if (touched == 0) continue;
        uint64_t base = (c << popcount(S)) & mask;
        uint32_t untouched = S & ~h;
        // expand the flipped coordinates: prod (1 - x_i) over touched bits
        for (uint32_t sub = touched;; sub = (sub - 1) & touched) {
            uint32_t target = untouched | sub;
            uint64_t term = (popcount(sub) & 1) ? ((mask + 1 - base) & mask) : base;
            auto& slot = w[target];
            slot = (slot + term) & mask;
            if (sub == 0) break;
        }
        auto& slot = w[S];
        slot = (slot + (mask + 1 - base)) & mask;
    }
    return canonicalize(p.n, p.d, p.level, lambda, w, nullptr);
}

PolyRep exact_root(const PolyRep& p) {
    PolyRep q;
    q.n = p.n;
    q.d = p.d + 1;
    q.level = p.level + 1;
    q.alpha = p.alpha.half();
    q.coeffs = p.coeffs;  // same integers against denominators one level deeper
    return q;
}

FuncTable to_table(const PolyRep& p) {
    FuncTable t(p.n);
    for (uint32_t x = 0; x < t.size(); ++x) t.v[x] = eval(p, x);
    return t;
}

std::optional<PolyRep> from_table(const FuncTable& t, int d, std::string* violation) {
    uint32_t lambda = std::max<uint32_t>(t.max_level(), uint32_t(d) + 1);
    uint64_t mask = mod_mask(lambda);
    std::vector<uint64_t> w(t.size());
    for (uint32_t x = 0; x < t.size(); ++x) w[x] = t.v[x].num_at_level(lambda);
    for (int b = 0; b < t.n; ++b) {
        uint32_t bit = uint32_t(1) << b;
        for (uint32_t x = 0; x < t.size(); ++x)
            if (x & bit) w[x] = (w[x] - w[x ^ bit]) & mask;
    }
    std::map<uint32_t, uint64_t> wm;
    for (uint32_t x = 0; x < t.size(); ++x)
        if (w[x]) wm[x] = w[x];
    try {
        return canonicalize(t.n, d, std::max(t.max_level(), 1u), lambda, wm, violation);
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
}

PolyRep substitute_linear(const PolyRep& p, const std::vector<uint32_t>& rows) {
    if (int(rows.size()) != p.n) throw std::invalid_argument("substitute_linear: bad matrix");
    FuncTable t(p.n);
    for (uint32_t y = 0; y < t.size(); ++y) {
        uint32_t x = 0;
        for (int i = 0; i < p.n; ++i)
            x |= uint32_t(popcount(rows[i] & y) & 1) << i;
        t.v[y] = eval(p, x);
    }
    auto q = from_table(t, std::max(measured_degree(p), 0), nullptr);
    if (!q) throw std::logic_error("substitute_linear: degree changed");
    PolyRep r = rebound(*q, p.d);
    r.level = p.level;
    return r;
}

PolyRep invert_one_plus_shift(const PolyRep& p, uint32_t e) {
    if (e == 0) throw std::invalid_argument("invert_one_plus_shift: e = 0");
    if (measured_degree(derivative(p, e)) >= 0)
        throw std::invalid_argument("invert_one_plus_shift: input is not shift-invariant");
    int j = __builtin_ctz(e);
    if (e != (uint32_t(1) << j)) {
        // change coordinates so the invariant direction becomes basis vector j
        std::vector<uint32_t> rows(p.n);
        for (int i = 0; i < p.n; ++i) {
            rows[i] = uint32_t(1) << i;
            if (i != j && (e >> i & 1)) rows[i] |= uint32_t(1) << j;
        }
        PolyRep q = invert_one_plus_shift(substitute_linear(p, rows), uint32_t(1) << j);
        return substitute_linear(q, rows);  // the substitution is an involution
    }
    PolyRep q;
    q.n = p.n;
    q.d = p.d + 1;
    q.level = p.level + 1;
    q.alpha = p.alpha.half();
    for (const auto& [S, c] : p.coeffs) {
        if (S >> j & 1) throw std::logic_error("invert_one_plus_shift: invariance broken");
        q.coeffs[S | (uint32_t(1) << j)] = c;  // same denominator at bound d+1
    }
    return q;
}

PolyRep random_poly(int n, int d, uint32_t level, Rng& rng) {
    PolyRep p;
    p.n = n;
    p.d = d;
    p.level = level;
    p.alpha = Dyadic::make(rng.below(uint64_t(1) << level), level);
    for (uint32_t S = 1; S < (uint32_t(1) << n); ++S) {
        int k = popcount(S);
        if (k > d) continue;
        uint32_t denom = uint32_t(d + 1 - k);
        uint32_t e = std::min(denom, level);
        uint64_t c = rng.below(uint64_t(1) << e) << (denom - e);
        if (c) p.coeffs[S] = c;
    }
    return p;
}

// ---- classical polynomials ---------------------------------------------------

int F2Poly::eval(uint32_t x) const {
    int acc = 0;
    for (uint32_t S : monos)
        if ((S & x) == S) acc ^= 1;
    return acc;
}

int F2Poly::degree() const {
    int d = -1;
    for (uint32_t S : monos) d = std::max(d, popcount(S));
    return d;
}

F2Poly operator+(const F2Poly& a, const F2Poly& b) {
    if (a.n != b.n) throw std::invalid_argument("classical sum: dimension mismatch");
    F2Poly r;
    r.n = a.n;
    std::set_symmetric_difference(a.monos.begin(), a.monos.end(), b.monos.begin(), b.monos.end(),
                                  std::back_inserter(r.monos));
    return r;
}

F2Poly poly_product(const F2Poly& a, const F2Poly& b) {
    if (a.n != b.n) throw std::invalid_argument("classical product: dimension mismatch");
    std::map<uint32_t, int> acc;
    for (uint32_t S : a.monos)
        for (uint32_t T : b.monos) acc[S | T] ^= 1;
    F2Poly r;
    r.n = a.n;
    for (const auto& [m, bit] : acc)
        if (bit) r.monos.push_back(m);
    return r;
}

F2Poly random_classical(int n, int d, Rng& rng) {
    F2Poly r;
    r.n = n;
    for (uint32_t S = 0; S < (uint32_t(1) << n); ++S)
        if (popcount(S) <= d && rng.bits(1)) r.monos.push_back(S);
    return r;
}

PolyRep classical_to_polyrep(const F2Poly& q, int d) {
    if (q.degree() > d) throw std::invalid_argument("classical_to_polyrep: degree too large");
    PolyRep p;
    p.n = q.n;
    p.d = d;
    p.level = 1;
    for (uint32_t S : q.monos) {
        if (S == 0)
            p.alpha = Dyadic::make(1, 1);
        else
            p.coeffs[S] = uint64_t(1) << uint32_t(d - popcount(S));
    }
    return p;
}

std::optional<F2Poly> classical_from_polyrep(const PolyRep& p) {
    F2Poly q;
    q.n = p.n;
    if (!p.alpha.is_zero()) {
        if (p.alpha != Dyadic::make(1, 1)) return std::nullopt;
        q.monos.push_back(0);
    }
    for (const auto& [S, c] : p.coeffs) {
        Dyadic v = Dyadic::make(c, uint32_t(p.d + 1 - popcount(S)));
        if (v.is_zero()) continue;
        if (v != Dyadic::make(1, 1)) return std::nullopt;
        q.monos.push_back(S);
    }
    std::sort(q.monos.begin(), q.monos.end());
    return q;
}

// ---- Z/4Z polynomials ---------------------------------------------------------

Z4 Z4Poly::eval(uint32_t x) const {
    int acc = 0;
    for (const auto& [S, a] : coeffs)
        if ((S & x) == S) acc += a;
    return Z4(acc);
}

int measured_degree(const Z4Poly& r) {
    int deg = -1;
    for (const auto& [S, a] : r.coeffs) {
        if ((a & 3) == 0) continue;
        if (S == 0) {
            deg = std::max(deg, 0);
            continue;
        }
        int lev = (a & 1) ? 2 : 1;  // level of a/4 in lowest terms
        deg = std::max(deg, popcount(S) + lev - 1);
    }
    return deg;
}

namespace {

bool z4_all_zero(const std::vector<uint8_t>& t) {
    for (uint8_t v : t)
        if (v & 3) return false;
    return true;
}

bool z4_degree_rec(const std::vector<uint8_t>& t, int n, int k, int depth, int min_i) {
    if (depth == k + 1) return z4_all_zero(t);
    for (int i = min_i; i < n; ++i) {
        uint32_t h = uint32_t(1) << i;
        std::vector<uint8_t> d(t.size());
        for (uint32_t x = 0; x < t.size(); ++x)
            d[x] = uint8_t((t[x ^ h] - t[x]) & 3);
        if (!z4_degree_rec(d, n, k, depth + 1, i)) return false;
    }
    return true;
}

}  // namespace

bool degree_test_z4(const Z4Poly& r, int k) {
    if (r.n > 20) throw std::invalid_argument("degree_test_z4: table too large");
    return z4_degree_rec(dense_values_z4(r), r.n, k, 0, 0);
}

// ---- dense numerator tables ----------------------------------------------------

DenseTable dense_table(const PolyRep& p) {
    uint32_t lambda = std::max<uint32_t>(uint32_t(p.d) + 1, p.alpha.lev);
    if (lambda > 16) throw std::invalid_argument("dense_table: level exceeds 16 bits");
    DenseTable t;
    t.n = p.n;
    t.level = lambda;
    t.num.assign(size_t(1) << p.n, 0);
    uint16_t mask = uint16_t((uint32_t(1) << lambda) - 1);
    t.num[0] = uint16_t(p.alpha.num_at_level(lambda) & mask);
    for (const auto& [S, c] : p.coeffs) {
        uint64_t w = (c << popcount(S)) << (lambda - uint32_t(p.d + 1));
        t.num[S] = uint16_t((t.num[S] + w) & mask);
    }
    kern::subset_sum(t.num.data(), unsigned(p.n), mask);
    return t;
}

DenseTable dense_table(const F2Poly& q) {
    DenseTable t;
    t.n = q.n;
    t.level = 1;
    t.num.assign(size_t(1) << q.n, 0);
    for (uint32_t S : q.monos) t.num[S] ^= 1;
    kern::subset_sum(t.num.data(), unsigned(q.n), 1);
    return t;
}

std::vector<uint8_t> dense_values_z4(const Z4Poly& r) {
    std::vector<uint16_t> w(size_t(1) << r.n, 0);
    for (const auto& [S, a] : r.coeffs) w[S] = uint16_t(a & 3);
    kern::subset_sum(w.data(), unsigned(r.n), 3);
    std::vector<uint8_t> out(w.size());
    for (size_t i = 0; i < w.size(); ++i) out[i] = uint8_t(w[i]);
    return out;
}

DenseTable dense_from_functable(const FuncTable& f) {
    uint32_t lambda = f.max_level();
    if (lambda > 16) throw std::invalid_argument("dense_from_functable: level exceeds 16 bits");
    DenseTable t;
    t.n = f.n;
    t.level = lambda;
    t.num.resize(f.size());
    for (uint32_t x = 0; x < f.size(); ++x) t.num[x] = uint16_t(f.v[x].num_at_level(lambda));
    return t;
}

// ---- serialization ---------------------------------------------------------------

void write_poly(std::ostream& os, const PolyRep& p) {
    os << "POLY n=" << p.n << " d=" << p.d << " level=" << p.level << "\n";
    os << "CONST " << p.alpha.num << "/2^" << p.alpha.lev << "\n";
    std::vector<uint32_t> keys;
    for (const auto& [S, c] : p.coeffs)
        if (c) keys.push_back(S);
    std::sort(keys.begin(), keys.end(), lex_mask_less);
    for (uint32_t S : keys) {
        os << "TERM ";
        auto idx = mask_indices(S);
        for (size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i];
        os << " " << p.coeffs.at(S) << "\n";
    }
}

std::string poly_to_string(const PolyRep& p) {
    std::ostringstream os;
    write_poly(os, p);
    return os.str();
}

namespace {

bool parse_kv(const std::string& tok, const char* key, long long& out) {
    std::string prefix = std::string(key) + "=";
    if (tok.rfind(prefix, 0) != 0) return false;
    try {
        size_t pos = 0;
        out = std::stoll(tok.substr(prefix.size()), &pos);
        return pos == tok.size() - prefix.size();
    } catch (...) {
        return false;
    }
}

bool fail(std::string* err, const std::string& msg) {
    if (err) *err = msg;
    return false;
}

bool read_poly_impl(std::istream& is, PolyRep& p, std::string* err) {
    std::string line;
    if (!std::getline(is, line)) return fail(err, "missing POLY header");
    std::istringstream hs(line);
    std::string tag, t1, t2, t3;
    hs >> tag >> t1 >> t2 >> t3;
    long long n = -1, d = -1, level = -1;
    if (tag != "POLY" || !parse_kv(t1, "n", n) || !parse_kv(t2, "d", d) ||
        !parse_kv(t3, "level", level))
        return fail(err, "bad POLY header: " + line);
    if (n < 0 || n > 30 || d < 0 || d > 60 || level < 0 || level > 62)
        return fail(err, "POLY header out of range: " + line);
    p.n = int(n);
    p.d = int(d);
    p.level = uint32_t(level);
    if (!std::getline(is, line)) return fail(err, "missing CONST line");
    {
        std::istringstream cs(line);
        std::string ctag, cval;
        cs >> ctag >> cval;
        if (ctag != "CONST") return fail(err, "bad CONST line: " + line);
        auto caret = cval.find("/2^");
        if (caret == std::string::npos) return fail(err, "bad CONST value: " + cval);
        uint64_t num = 0;
        long long lev = -1;
        try {
            size_t pos = 0;
            num = std::stoull(cval.substr(0, caret), &pos);
            if (pos != caret) return fail(err, "bad CONST value: " + cval);
            lev = std::stoll(cval.substr(caret + 3), &pos);
            if (pos != cval.size() - caret - 3) return fail(err, "bad CONST value: " + cval);
        } catch (...) {
            return fail(err, "bad CONST value: " + cval);
        }
        if (lev < 0 || lev > 62) return fail(err, "CONST level out of range");
        Dyadic a = Dyadic::make(num, uint32_t(lev));
        if (a.num != num || a.lev != uint32_t(lev)) return fail(err, "CONST not canonical: " + cval);
        p.alpha = a;
    }
    uint32_t prev_mask = 0;
    bool have_prev = false;
    // consume TERM lines only, leaving any following block header unread
    while (is.peek() == 'T' && std::getline(is, line)) {
        std::istringstream ts(line);
        std::string tag2, idxs;
        unsigned long long c = 0;
        ts >> tag2 >> idxs >> c;
        if (ts.fail() || tag2 != "TERM") return fail(err, "bad TERM line: " + line);
        uint32_t mask = 0;
        int last = 0;
        size_t start = 0;
        while (start <= idxs.size()) {
            auto comma = idxs.find(',', start);
            std::string part = idxs.substr(start, comma == std::string::npos ? std::string::npos
                                                                             : comma - start);
            int i = 0;
            try {
                size_t pos = 0;
                i = std::stoi(part, &pos);
                if (pos != part.size()) return fail(err, "bad TERM indices: " + line);
            } catch (...) {
                return fail(err, "bad TERM indices: " + line);
            }
            if (i <= last || i > p.n) return fail(err, "TERM indices out of order: " + line);
            last = i;
            mask |= uint32_t(1) << (i - 1);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        int k = popcount(mask);
        if (k > p.d) return fail(err, "TERM monomial larger than degree bound: " + line);
        if (c == 0 || c >= (uint64_t(1) << (p.d + 1 - k)))
            return fail(err, "TERM coefficient out of range: " + line);
        if (have_prev && !lex_mask_less(prev_mask, mask))
            return fail(err, "TERM lines out of lexicographic order: " + line);
        prev_mask = mask;
        have_prev = true;
        p.coeffs[mask] = c;
    }
    return true;
}

}  // namespace

std::optional<PolyRep> read_poly(std::istream& is, std::string* err) {
    PolyRep p;
    if (!read_poly_impl(is, p, err)) return std::nullopt;
    return p;
}

std::optional<PolyRep> poly_from_string(const std::string& s, std::string* err) {
    std::istringstream is(s);
    return read_poly(is, err);
}

void write_table_csv(std::ostream& os, const FuncTable& t) {
    for (uint32_t x = 0; x < t.size(); ++x) {
        std::string bits(size_t(t.n), '0');
        for (int i = 0; i < t.n; ++i)
            if (x >> i & 1) bits[size_t(i)] = '1';
        os << bits << "," << t.v[x].num << "," << t.v[x].lev << "\n";
    }
}

std::optional<FuncTable> read_table_csv(std::istream& is, std::string* err) {
    std::vector<Dyadic> vals;
    std::string line;
    int n = -1;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto c1 = line.find(',');
        auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) {
            fail(err, "bad table row: " + line);
            return std::nullopt;
        }
        std::string bits = line.substr(0, c1);
        if (n < 0)
            n = int(bits.size());
        else if (int(bits.size()) != n) {
            fail(err, "inconsistent bitstring width: " + line);
            return std::nullopt;
        }
        uint32_t x = 0;
        for (int i = 0; i < n; ++i) {
            if (bits[size_t(i)] == '1')
                x |= uint32_t(1) << i;
            else if (bits[size_t(i)] != '0') {
                fail(err, "bad bitstring: " + line);
                return std::nullopt;
            }
        }
        if (x != vals.size()) {
            fail(err, "table rows out of order: " + line);
            return std::nullopt;
        }
        try {
            size_t pos = 0;
            std::string nums = line.substr(c1 + 1, c2 - c1 - 1);
            uint64_t num = std::stoull(nums, &pos);
            if (pos != nums.size()) throw std::runtime_error("");
            std::string levs = line.substr(c2 + 1);
            long long lev = std::stoll(levs, &pos);
            if (pos != levs.size() || lev < 0 || lev > 62) throw std::runtime_error("");
            vals.push_back(Dyadic::make(num, uint32_t(lev)));
        } catch (...) {
            fail(err, "bad table row: " + line);
            return std::nullopt;
        }
    }
    if (n < 0 || vals.size() != (size_t(1) << n)) {
        fail(err, "table has wrong number of rows");
        return std::nullopt;
    }
    FuncTable t(n);
    t.v = std::move(vals);
    return t;
}

}  // namespace nilforge
