#include "nilforge/zmod.hpp"

#include <algorithm>
#include <stdexcept>

namespace nilforge {

namespace {

uint32_t val2(uint64_t x) { return x == 0 ? 64 : uint32_t(__builtin_ctzll(x)); }

uint64_t inv_odd(uint64_t a, uint64_t mask) {
    // Newton iteration doubles correct bits per step
    uint64_t x = a;
    for (int i = 0; i < 6; ++i) x = (x * (2 - a * x)) & mask;
    return x & mask;
}

struct HowellRow {
    std::vector<uint64_t> row;    // length m (equation space)
    std::vector<uint64_t> trans;  // length u (combination of original columns)
    size_t lead = 0;
    uint32_t v = 0;
};

size_t leading(const std::vector<uint64_t>& row) {
    for (size_t i = 0; i < row.size(); ++i)
        if (row[i]) return i;
    return row.size();
}

}  // namespace

std::optional<std::vector<uint64_t>> solve_mod2r(const std::vector<std::vector<int64_t>>& M,
                                                 const std::vector<uint64_t>& b, uint32_t r) {
    if (r == 0 || r > 62) throw std::invalid_argument("solve_mod2r: bad modulus");
    size_t m = M.size();
    size_t u = m ? M[0].size() : 0;
    uint64_t mask = (uint64_t(1) << r) - 1;

    // rows of the working matrix are the columns of M (the column space of M
    // as a module over Z/2^r), with the combination tracked alongside
    std::vector<HowellRow> pending;
    for (size_t j = 0; j < u; ++j) {
        HowellRow hr;
        hr.row.resize(m);
        for (size_t i = 0; i < m; ++i) hr.row[i] = uint64_t(M[i][j]) & mask;
        hr.trans.assign(u, 0);
        hr.trans[j] = 1;
        if (leading(hr.row) < m) pending.push_back(std::move(hr));
    }

    std::vector<HowellRow> H;
    while (!pending.empty()) {
        // pick the pending row with the smallest leading column, then the
        // smallest 2-adic valuation there
        size_t best = 0;
        size_t blead = leading(pending[0].row);
        uint32_t bv = val2(pending[0].row[blead]);
        for (size_t i = 1; i < pending.size(); ++i) {
            size_t l = leading(pending[i].row);
            uint32_t v = val2(pending[i].row[l]);
            if (l < blead || (l == blead && v < bv)) {
                best = i;
                blead = l;
                bv = v;
            }
        }
        HowellRow piv = std::move(pending[best]);
        pending.erase(pending.begin() + long(best));
        piv.lead = blead;
        piv.v = bv;
        // normalize the leading entry to exactly 2^v
        uint64_t unit = piv.row[blead] >> bv;
        uint64_t iu = inv_odd(unit, mask);
        for (auto& x : piv.row) x = (x * iu) & mask;
        for (auto& x : piv.trans) x = (x * iu) & mask;
        // clear this column from the remaining pending rows
        std::vector<HowellRow> keep;
        for (auto& pr : pending) {
            if (pr.row[blead]) {
                uint64_t coef = pr.row[blead] >> bv;  // divisible: v was minimal
                if ((pr.row[blead] & ((uint64_t(1) << bv) - 1)) != 0)
                    throw std::logic_error("solve_mod2r: pivot valuation not minimal");
                for (size_t i = 0; i < m; ++i)
                    pr.row[i] = (pr.row[i] - coef * piv.row[i]) & mask;
                for (size_t i = 0; i < u; ++i)
                    pr.trans[i] = (pr.trans[i] - coef * piv.trans[i]) & mask;
            }
            if (leading(pr.row) < m) keep.push_back(std::move(pr));
        }
        pending = std::move(keep);
        // annihilator of the pivot re-enters at a later column
        if (piv.v > 0) {
            uint64_t ann = uint64_t(1) << (r - piv.v);
            HowellRow a;
            a.row.resize(m);
            a.trans.resize(u);
            for (size_t i = 0; i < m; ++i) a.row[i] = (piv.row[i] * ann) & mask;
            for (size_t i = 0; i < u; ++i) a.trans[i] = (piv.trans[i] * ann) & mask;
            if (leading(a.row) < m) pending.push_back(std::move(a));
        }
        H.push_back(std::move(piv));
    }
    std::sort(H.begin(), H.end(),
              [](const HowellRow& a, const HowellRow& b) { return a.lead < b.lead; });

    // greedy reduction of b against the Howell basis
    std::vector<uint64_t> res(b);
    for (auto& x : res) x &= mask;
    std::vector<uint64_t> x(u, 0);
    for (const auto& hr : H) {
        uint64_t cur = res[hr.lead];
        if (cur == 0) continue;
        if (val2(cur) < hr.v) return std::nullopt;
        uint64_t coef = cur >> hr.v;
        for (size_t i = 0; i < res.size(); ++i) res[i] = (res[i] - coef * hr.row[i]) & mask;
        for (size_t i = 0; i < u; ++i) x[i] = (x[i] + coef * hr.trans[i]) & mask;
    }
    for (uint64_t v : res)
        if (v) return std::nullopt;
    return x;
}

std::vector<std::vector<int64_t>> integer_left_kernel(const std::vector<std::vector<int64_t>>& M) {
    size_t m = M.size();
    size_t u = m ? M[0].size() : 0;
    // reduce [M | I] by integer row operations until the M-part is echelon
    std::vector<std::vector<int64_t>> A(m), T(m);
    for (size_t i = 0; i < m; ++i) {
        A[i] = M[i];
        T[i].assign(m, 0);
        T[i][i] = 1;
    }
    auto axpy = [&](size_t dst, size_t src, int64_t q) {
        // row[dst] -= q * row[src], with overflow guard
        for (size_t j = 0; j < u; ++j) {
            __int128 v = (__int128)A[dst][j] - (__int128)q * A[src][j];
            if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("left kernel overflow");
            A[dst][j] = int64_t(v);
        }
        for (size_t j = 0; j < m; ++j) {
            __int128 v = (__int128)T[dst][j] - (__int128)q * T[src][j];
            if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("left kernel overflow");
            T[dst][j] = int64_t(v);
        }
    };
    size_t row = 0;
    for (size_t col = 0; col < u && row < m; ++col) {
        while (true) {
            size_t best = m;
            for (size_t i = row; i < m; ++i)
                if (A[i][col] != 0 &&
                    (best == m || std::abs(A[i][col]) < std::abs(A[best][col])))
                    best = i;
            if (best == m) break;
            std::swap(A[row], A[best]);
            std::swap(T[row], T[best]);
            bool others = false;
            for (size_t i = row + 1; i < m; ++i) {
                if (A[i][col] == 0) continue;
                int64_t q = A[i][col] / A[row][col];
                axpy(i, row, q);
                if (A[i][col] != 0) others = true;
            }
            if (!others) {
                ++row;
                break;
            }
        }
    }
    std::vector<std::vector<int64_t>> kernel;
    for (size_t i = 0; i < m; ++i) {
        bool zero = true;
        for (size_t j = 0; j < u; ++j)
            if (A[i][j]) {
                zero = false;
                break;
            }
        if (zero) kernel.push_back(T[i]);
    }
    return kernel;
}

}  // namespace nilforge
