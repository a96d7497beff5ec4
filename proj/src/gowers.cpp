#include "nilforge/gowers.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <thread>

#include "nilforge/kernels.hpp"

namespace nilforge {

namespace {

std::vector<std::complex<double>> unit_circle(uint32_t level) {
    size_t size = size_t(1) << level;
    std::vector<std::complex<double>> e(size);
    for (size_t v = 0; v < size; ++v) {
        double theta = 2.0 * M_PI * double(v) / double(size);
        e[v] = {std::cos(theta), std::sin(theta)};
    }
    e[0] = {1.0, 0.0};
    if (level >= 1) e[size / 2] = {-1.0, 0.0};
    if (level >= 2) {
        e[size / 4] = {0.0, 1.0};
        e[3 * size / 4] = {0.0, -1.0};
    }
    return e;
}

}  // namespace

PhaseTable PhaseTable::from(const PolyRep& p) { return from(dense_table(p)); }

PhaseTable PhaseTable::from(const PseudoQuintic& s) { return from(dense_pseudo(s)); }

PhaseTable PhaseTable::from(const FuncTable& f) { return from(dense_from_functable(f)); }

PhaseTable PhaseTable::from(const DenseTable& t) {
    PhaseTable f;
    f.n = t.n;
    f.level = std::max(t.level, 1u);
    f.num = t.num;
    return f;
}

PhaseTable add_classical_phase(const PhaseTable& f, const F2Poly& q) {
    if (q.n != f.n) throw std::invalid_argument("add_classical_phase: dimension mismatch");
    auto qt = dense_table(q);
    PhaseTable out = f;
    uint16_t mask = uint16_t((uint32_t(1) << f.level) - 1);
    for (size_t x = 0; x < out.num.size(); ++x)
        out.num[x] = uint16_t((out.num[x] + (uint16_t(qt.num[x]) << (f.level - 1))) & mask);
    return out;
}

PhaseTable translate(const PhaseTable& f, uint32_t a) {
    PhaseTable out = f;
    for (size_t x = 0; x < f.num.size(); ++x) out.num[x] = f.num[x ^ a];
    return out;
}

double gowers_norm_naive(const PhaseTable& f, int k) {
    if ((k + 2) * f.n > 30)
        throw std::invalid_argument("gowers_norm_naive: " +
                                    std::to_string((uint64_t(1) << ((k + 2) * f.n))) +
                                    " tuples exceed the enumeration budget");
    size_t size = f.num.size();
    uint16_t mask = uint16_t((uint32_t(1) << f.level) - 1);
    std::vector<uint64_t> counts(size_t(1) << f.level, 0);
    // shared-prefix walk over the shift tuples; contributions are identical
    // to the flat product formula, each tuple counted exactly once
    std::vector<std::vector<uint16_t>> stack(size_t(k) + 2, std::vector<uint16_t>(size));
    stack[0] = f.num;
    std::function<void(int)> rec = [&](int depth) {
        if (depth == k + 1) {
            for (size_t x = 0; x < size; ++x) ++counts[stack[size_t(depth)][x]];
            return;
        }
        for (size_t h = 0; h < size; ++h) {
            auto& src = stack[size_t(depth)];
            auto& dst = stack[size_t(depth) + 1];
            for (size_t x = 0; x < size; ++x)
                dst[x] = uint16_t((src[x ^ h] - src[x]) & mask);
            rec(depth + 1);
        }
    };
    rec(0);
    auto circle = unit_circle(f.level);
    std::complex<double> acc{0, 0};
    uint64_t total = 0;
    for (size_t v = 0; v < counts.size(); ++v) {
        acc += double(counts[v]) * circle[v];
        total += counts[v];
    }
    double val = acc.real() / double(total);
    if (val <= 0) return 0.0;
    return std::pow(val, 1.0 / double(uint64_t(1) << (k + 1)));
}

namespace {

double box_power(const std::vector<uint16_t>& table, int j, uint16_t mask,
                 const std::vector<std::complex<double>>& circle,
                 std::vector<std::vector<uint16_t>>& scratch) {
    size_t size = table.size();
    if (j == 1) {
        std::complex<double> acc{0, 0};
        for (uint16_t v : table) acc += circle[v];
        acc /= double(size);
        return std::norm(acc);
    }
    double acc = 0;
    auto& buf = scratch[size_t(j)];
    for (size_t h = 0; h < size; ++h) {
        kern::diff_table(buf.data(), table.data(), size, h, mask);
        acc += box_power(buf, j - 1, mask, circle, scratch);
    }
    // scratch[j] is clobbered by deeper levels only below j
    return acc / double(size);
}

}  // namespace

double gowers_norm_recursive(const PhaseTable& f, int k, int threads) {
    if (uint64_t(k + 1) * uint64_t(f.n) > 34)
        throw std::invalid_argument("gowers_norm_recursive: work beyond the budget guard");
    size_t size = f.num.size();
    uint16_t mask = uint16_t((uint32_t(1) << f.level) - 1);
    auto circle = unit_circle(f.level);
    int depth = k + 1;
    if (depth == 1) {
        std::vector<std::vector<uint16_t>> scratch;
        return std::sqrt(box_power(f.num, 1, mask, circle, scratch));
    }
    // top level parallel over the shift, reduced in fixed index order
    std::vector<double> slot(size, 0.0);
    int nthreads = std::max(1, std::min<int>(threads, int(size)));
    auto worker = [&](size_t lo, size_t hi) {
        std::vector<std::vector<uint16_t>> scratch(size_t(depth) + 1,
                                                   std::vector<uint16_t>(size));
        std::vector<uint16_t> buf(size);
        for (size_t h = lo; h < hi; ++h) {
            kern::diff_table(buf.data(), f.num.data(), size, h, mask);
            slot[h] = box_power(buf, depth - 1, mask, circle, scratch);
        }
    };
    if (nthreads == 1) {
        worker(0, size);
    } else {
        std::vector<std::thread> pool;
        size_t chunk = (size + size_t(nthreads) - 1) / size_t(nthreads);
        for (int t = 0; t < nthreads; ++t) {
            size_t lo = size_t(t) * chunk, hi = std::min(size, lo + chunk);
            if (lo < hi) pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    double acc = 0;
    for (double v : slot) acc += v;
    acc /= double(size);
    if (acc <= 0) return 0.0;
    return std::pow(acc, 1.0 / double(uint64_t(1) << depth));
}

bool poly_norm_one_certificate(const PolyRep& p, int k) { return degree_test(p, k); }

Correlation correlation(const PhaseTable& f, const PhaseTable& g) {
    if (f.n != g.n) throw std::invalid_argument("correlation: dimension mismatch");
    uint32_t level = std::max(f.level, g.level);
    size_t size = f.num.size();
    std::vector<uint64_t> counts(size_t(1) << level, 0);
    uint16_t mask = uint16_t((uint32_t(1) << level) - 1);
    for (size_t x = 0; x < size; ++x) {
        uint16_t d = uint16_t(((uint32_t(f.num[x]) << (level - f.level)) -
                               (uint32_t(g.num[x]) << (level - g.level))) &
                              mask);
        ++counts[d];
    }
    auto circle = unit_circle(level);
    std::complex<double> acc{0, 0};
    for (size_t v = 0; v < counts.size(); ++v) acc += double(counts[v]) * circle[v];
    Correlation out;
    out.magnitude = std::abs(acc) / double(size);
    // half-valued differences admit an exact signed count
    bool halfval = true;
    for (size_t v = 1; v < counts.size(); ++v)
        if (counts[v] && v != (size_t(1) << (level - 1))) halfval = false;
    if (halfval) {
        int64_t numr = int64_t(counts[0]) - int64_t(counts[size_t(1) << (level - 1)]);
        out.exact = std::make_pair(numr, uint64_t(size));
    }
    return out;
}

Correlation correlation(const PhaseTable& f, const PolyRep& p) {
    return correlation(f, PhaseTable::from(p));
}

}  // namespace nilforge
