#include "nilforge/dyadic.hpp"

#include <cmath>

namespace nilforge {

Dyadic Dyadic::make(uint64_t num, uint32_t lev) {
    if (lev > kMaxLevel) throw std::overflow_error("dyadic level exceeds 62");
    num &= (lev == 0) ? 0 : ((uint64_t(1) << lev) - 1);
    if (num == 0) return Dyadic{};
    while ((num & 1) == 0) {
        num >>= 1;
        --lev;
    }
    Dyadic d;
    d.num = num;
    d.lev = lev;
    return d;
}

uint64_t Dyadic::num_at_level(uint32_t r) const {
    if (r < lev) throw std::invalid_argument("num_at_level: target level too small");
    if (r > kMaxLevel) throw std::overflow_error("dyadic level exceeds 62");
    return num << (r - lev);
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
    uint32_t r = lev > o.lev ? lev : o.lev;
    return make(num_at_level(r) + o.num_at_level(r), r);
}

Dyadic Dyadic::operator-() const {
    if (num == 0) return Dyadic{};
    return make((uint64_t(1) << lev) - num, lev);
}

Dyadic Dyadic::scale(int64_t m) const {
    if (num == 0 || m == 0) return Dyadic{};
    uint64_t mod = uint64_t(1) << lev;
    uint64_t mm = static_cast<uint64_t>(((m % int64_t(mod)) + int64_t(mod))) & (mod - 1);
    // num < 2^62 and mm < 2^62; reduce via 128-bit product
    unsigned __int128 p = static_cast<unsigned __int128>(mm) * num;
    return make(static_cast<uint64_t>(p & (mod - 1)), lev);
}

Dyadic Dyadic::half() const {
    if (num == 0) return Dyadic{};
    return make(num, lev + 1);
}

std::string Dyadic::str() const {
    return std::to_string(num) + "/" + std::to_string(uint64_t(1) << lev);
}

std::optional<Dyadic> Dyadic::parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 >= s.size()) return std::nullopt;
    uint64_t num = 0, den = 0;
    try {
        size_t pos = 0;
        num = std::stoull(s.substr(0, slash), &pos);
        if (pos != slash) return std::nullopt;
        den = std::stoull(s.substr(slash + 1), &pos);
        if (pos != s.size() - slash - 1) return std::nullopt;
    } catch (...) {
        return std::nullopt;
    }
    if (den == 0 || (den & (den - 1)) != 0) return std::nullopt;
    uint32_t lev = 0;
    while ((uint64_t(1) << lev) != den) ++lev;
    if (lev > kMaxLevel) return std::nullopt;
    return make(num, lev);
}

std::complex<double> e_phase(const Dyadic& a) {
    // 2-torsion values have exact doubles; the general case goes through libm
    if (a.lev == 0) return {1.0, 0.0};
    if (a.lev == 1) return {-1.0, 0.0};
    if (a.lev == 2) return {0.0, a.num == 1 ? 1.0 : -1.0};
    double theta = 2.0 * M_PI * (static_cast<double>(a.num) / static_cast<double>(uint64_t(1) << a.lev));
    return {std::cos(theta), std::sin(theta)};
}

}  // namespace nilforge
