#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "nilforge/cube.hpp"
#include "nilforge/rng.hpp"
#include "nilforge/x5.hpp"

using namespace nilforge;

namespace {

QuadPair make_pair(int n, std::vector<uint32_t> m1, std::vector<uint32_t> m2) {
    return QuadPair{F2Poly{n, std::move(m1)}, F2Poly{n, std::move(m2)}};
}

}  // namespace

TEST_CASE("mod-4 carrier construction") {
    // product quadratic: values stay in {0,1}, so the binomial map vanishes
    auto r = build_R(F2Poly{2, {0b11}});
    CHECK(r.coeffs == std::map<uint32_t, uint8_t>{{0b11, 1}});
    for (uint32_t x = 0; x < 4; ++x) {
        CHECK(int(r.eval(x).v & 1) == F2Poly{2, {0b11}}.eval(x));
        CHECK(r.eval(x).v <= 1);
    }
    CHECK(degree_test_z4(r, 3));

    CHECK(build_R(F2Poly{2, {}}).coeffs.empty());

    // sum of coordinates reaches 2, where the binomial map switches on
    auto r2 = build_R(F2Poly{2, {0b01, 0b10}});
    CHECK(r2.eval(0b11) == Z4(2));
    CHECK(binom2(r2.eval(0b11)) == 1);

    Rng rng(90);
    for (int t = 0; t < 30; ++t) {
        int n = 1 + int(rng.below(4));
        auto q1 = random_classical(n, 2, rng);
        auto r3 = build_R(q1);
        CHECK(measured_degree(r3) <= 3);
        if (n <= 3) CHECK(degree_test_z4(r3, 3));
        for (uint32_t x = 0; x < (uint32_t(1) << n); ++x)
            CHECK(int(r3.eval(x).v & 1) == q1.eval(x));
    }
}

TEST_CASE("distinguished lifts") {
    // (x1 x2, x1): the carrier never reaches 2, the lift vanishes
    auto c1 = make_pair(2, {0b11}, {0b01});
    auto s1 = lift(c1, 5);
    for (uint32_t x = 0; x < 4; ++x) CHECK(s1.eval(x).is_zero());
    auto rep1 = x5_cube_check({c1.q1, c1.q2}, [&](uint32_t x) { return s1.eval(x); }, 2);
    CHECK(rep1.ok);
    CHECK(rep1.exhaustive);

    // (x1 + x2, x1): the lift is one half exactly at the all-ones point
    auto c2 = make_pair(2, {0b01, 0b10}, {0b01});
    auto s2 = lift(c2, 5);
    for (uint32_t x = 0; x < 4; ++x)
        CHECK(s2.eval(x) == (x == 3 ? Dyadic::make(1, 1) : Dyadic{}));
    CHECK(x5_cube_check({c2.q1, c2.q2}, [&](uint32_t x) { return s2.eval(x); }, 2).ok);

    auto c3 = make_pair(2, {}, {});
    auto s3 = lift(c3, 5);
    for (uint32_t x = 0; x < 4; ++x) CHECK(s3.eval(x).is_zero());

    CHECK_THROWS_AS(lift(c1, 0), std::invalid_argument);
    CHECK_THROWS_AS(lift(c1, 6), std::invalid_argument);
}

TEST_CASE("membership at dimension one is unconstrained") {
    Rng rng(91);
    for (int t = 0; t < 20; ++t) {
        QuadPair q{random_classical(1, 2, rng), random_classical(1, 2, rng)};
        FuncTable s(1);
        for (auto& v : s.v) v = Dyadic::make(rng.next(), 5);
        CHECK(x5_cube_check(q, [&](uint32_t x) { return s.v[x]; }, 1).ok);
    }
}

TEST_CASE("quintic shifts stay members, a level-six perturbation does not") {
    Rng rng(92);
    for (int t = 0; t < 5; ++t) {
        auto c = sample_ncube(2, 5, rng.next());
        auto rep = x5_cube_check(c);
        CHECK(rep.ok);
        CHECK(rep.exhaustive);

        auto p = random_poly(2, 5, 5, rng);
        auto shifted = [&](uint32_t x) { return c.s.eval(x) + eval(p, x); };
        CHECK(x5_cube_check(c.q, shifted, 2).ok);

        auto perturbed = [&](uint32_t x) {
            return c.s.eval(x) + Dyadic::make((x & 1), 6);
        };
        CHECK(!x5_cube_check(c.q, perturbed, 2).ok);
    }
}

TEST_CASE("coset law") {
    Rng rng(93);
    for (int t = 0; t < 20; ++t) {
        int n = 2 + int(rng.below(2));
        uint64_t seed = rng.next();
        auto a = sample_ncube(n, 5, seed);
        auto b = sample_ncube(n, 5, rng.next());
        // put the second sample over the same quadratic pair
        b.q = a.q;
        b.s.rlift = a.s.rlift;
        b.s.q2 = a.s.q2;
        FuncTable diff(n);
        for (uint32_t x = 0; x < diff.size(); ++x) diff.v[x] = a.s.eval(x) - b.s.eval(x);
        CHECK(from_table(diff, 5).has_value());
    }
}

TEST_CASE("uniform sampling of cubes") {
    // determinism under a fixed seed
    auto a = sample_ncube(3, 5, 777);
    auto b = sample_ncube(3, 5, 777);
    CHECK(a.q.q1 == b.q.q1);
    CHECK(a.q.q2 == b.q.q2);
    CHECK(a.s.p == b.s.p);

    // at n = 1 the cube space is the full square; the empirical distribution
    // over endpoint pairs must be flat (chi-square over all 16384 cells)
    const uint64_t cells = 4 * 32 * 4 * 32;
    std::vector<uint32_t> counts(cells, 0);
    const uint64_t draws = 1000000;
    Rng seeder(102);
    for (uint64_t t = 0; t < draws; ++t) {
        auto c = sample_ncube(1, 5, seeder.next());
        uint64_t key = c.q.eval(0);
        key = key * 32 + c.s.eval(0).num_at_level(5);
        key = key * 4 + c.q.eval(1);
        key = key * 32 + c.s.eval(1).num_at_level(5);
        ++counts[key];
    }
    double expect = double(draws) / double(cells);
    double chi2 = 0;
    for (uint64_t i = 0; i < cells; ++i) {
        double d = double(counts[i]) - expect;
        chi2 += d * d / expect;
    }
    double df = double(cells - 1);
    CHECK(std::abs(chi2 - df) < 6.0 * std::sqrt(2.0 * df));
}

TEST_CASE("sampled cubes verify, and the pullback is a 2-homogeneous cocycle") {
    Rng rng(94);
    for (int n : {3, 4, 6}) {
        auto c = sample_ncube(n, 5, rng.next());
        auto rep = x5_cube_check(c, 3000, rng.next());
        CHECK(rep.ok);
        CHECK(!rep.exhaustive);
    }
    // pullback cocycle properties at a workable size
    auto c = sample_ncube(2, 5, 4242);
    auto pull = pullback_cocycle(c.q, 2);
    // agree with the reference evaluation
    Rng rng2(95);
    for (int t = 0; t < 2000; ++t) {
        std::array<uint32_t, 6> hs{};
        std::vector<uint32_t> hv(6);
        for (int i = 0; i < 6; ++i) hv[size_t(i)] = hs[size_t(i)] = uint32_t(rng2.below(4));
        CHECK(pull.eval(hv, 0) == pullback_rho(c.q, hs));
    }
    CHECK(check_2homog(pull, 20000, 97));
    auto rep = check_cocycle_axioms(pull, 4000, 96);
    CHECK(rep.ok);
}

TEST_CASE("the quadratic layer of a sampled cube projects to Klein cubes") {
    Rng rng(96);
    for (int t = 0; t < 200; ++t) {
        int n = 2 + int(rng.below(3));
        auto c = sample_ncube(n, 5, rng.next());
        uint32_t sz = uint32_t(1) << n;
        std::array<Klein, 64> tuple;
        uint32_t x = uint32_t(rng.below(sz));
        std::array<uint32_t, 6> hs{};
        for (auto& h : hs) h = uint32_t(rng.below(sz));
        for (uint32_t w = 0; w < 64; ++w) {
            uint32_t pt = x;
            for (int i = 0; i < 6; ++i)
                if (w >> i & 1) pt ^= hs[size_t(i)];
            tuple[w] = c.q.eval(pt);
        }
        CHECK(cube6_from_tuple(tuple).has_value());
    }
}

TEST_CASE("the pair-parameter formula matches the bilinear-form presentation") {
    // read a parameterized Klein 6-cube as a quadratic pair on F_2^6 and
    // evaluate through the paired second derivatives at the basis shifts
    Rng rng(97);
    for (int t = 0; t < 4000; ++t) {
        KleinCube c;
        c.m = 6;
        uint64_t bits = rng.next();
        c.x = Klein(bits & 3);
        bits >>= 2;
        for (int i = 0; i < 6; ++i) {
            c.h[size_t(i)] = Klein(bits & 3);
            bits >>= 2;
        }
        uint64_t bits2 = rng.next();
        for (int s = 0; s < 15; ++s) {
            c.hh[size_t(s)] = Klein(bits2 & 3);
            bits2 >>= 2;
        }
        FuncTable t1(6), t2(6);
        for (uint32_t w = 0; w < 64; ++w) {
            Klein v = c.vertex(w);
            t1.v[w] = Dyadic::make(v & 1, 1);
            t2.v[w] = Dyadic::make(v >> 1 & 1, 1);
        }
        auto p1 = from_table(t1, 2), p2 = from_table(t2, 2);
        REQUIRE(p1.has_value());
        REQUIRE(p2.has_value());
        auto q1 = classical_from_polyrep(*p1), q2 = classical_from_polyrep(*p2);
        REQUIRE(q1.has_value());
        REQUIRE(q2.has_value());
        std::array<uint32_t, 6> basis = {1, 2, 4, 8, 16, 32};
        CHECK(pullback_rho(QuadPair{*q1, *q2}, basis) == rho_eval(c));
    }
}

TEST_CASE("affine reparameterizations of sampled cubes are cubes") {
    Rng rng(98);
    auto c = sample_ncube(4, 5, rng.next());
    auto dt = dense_pseudo(c.s);
    for (int m : {1, 2}) {
        for (int t = 0; t < 4; ++t) {
            // random affine map F_2^m -> F_2^4
            std::vector<uint32_t> cols(static_cast<size_t>(m));
            for (auto& v : cols) v = uint32_t(rng.below(16));
            uint32_t shift = uint32_t(rng.below(16));
            auto embed = [&](uint32_t y) {
                uint32_t x = shift;
                for (int i = 0; i < m; ++i)
                    if (y >> i & 1) x ^= cols[size_t(i)];
                return x;
            };
            // compose both components through the map
            FuncTable s1(m), s2(m);
            FuncTable sv(m);
            for (uint32_t y = 0; y < (uint32_t(1) << m); ++y) {
                Klein qv = c.q.eval(embed(y));
                s1.v[y] = Dyadic::make(qv & 1, 1);
                s2.v[y] = Dyadic::make(qv >> 1 & 1, 1);
                sv.v[y] = dt.at(embed(y));
            }
            auto p1 = from_table(s1, 2), p2 = from_table(s2, 2);
            REQUIRE(p1.has_value());
            REQUIRE(p2.has_value());
            auto q1 = classical_from_polyrep(*p1), q2 = classical_from_polyrep(*p2);
            REQUIRE(q1.has_value());
            REQUIRE(q2.has_value());
            CHECK(x5_cube_check(QuadPair{*q1, *q2}, [&](uint32_t y) { return sv.v[y]; }, m).ok);
        }
    }
}

TEST_CASE("the fourth derivative of the binomial carrier is the paired square") {
    Rng rng(99);
    for (int n = 1; n <= 4; ++n)
        for (int t = 0; t < 8; ++t) {
            auto q1 = random_classical(n, 2, rng);
            auto r = build_R(q1);
            auto rv = dense_values_z4(r);
            uint32_t sz = uint32_t(1) << n;
            auto bilin = [&](uint32_t a, uint32_t b) {
                return q1.eval(0) ^ q1.eval(a) ^ q1.eval(b) ^ q1.eval(a ^ b);
            };
            uint64_t trials = (n <= 3) ? (uint64_t(1) << (5 * n)) : 4000;
            for (uint64_t code = 0; code < trials; ++code) {
                uint32_t x, h[4];
                if (n <= 3) {
                    uint64_t cc = code;
                    x = uint32_t(cc & (sz - 1));
                    cc >>= n;
                    for (auto& hh : h) {
                        hh = uint32_t(cc & (sz - 1));
                        cc >>= n;
                    }
                } else {
                    x = uint32_t(rng.below(sz));
                    for (auto& hh : h) hh = uint32_t(rng.below(sz));
                }
                int lhs = 0;
                for (uint32_t omega = 0; omega < 16; ++omega) {
                    uint32_t pt = x;
                    for (int i = 0; i < 4; ++i)
                        if (omega >> i & 1) pt ^= h[i];
                    lhs ^= binom2(int(rv[pt]));
                }
                int rhs = (bilin(h[0], h[1]) & bilin(h[2], h[3])) ^
                          (bilin(h[0], h[2]) & bilin(h[1], h[3])) ^
                          (bilin(h[0], h[3]) & bilin(h[1], h[2]));
                CHECK(lhs == rhs);
            }
        }
}

TEST_CASE("corner completion") {
    // all-zero partials complete to zero
    for (int n = 2; n <= 5; ++n) {
        X5Partial p;
        p.n = n;
        p.r = 5;
        p.qv.assign(size_t(1) << n, 0);
        p.sv.assign(size_t(1) << n, Dyadic{});
        auto v = x5_corner_complete(p);
        CHECK(v.q == 0);
        CHECK(v.s.is_zero());
    }

    // deleting and recompleting the top vertex of a sampled 6-cube is exact
    Rng rng(100);
    for (int t = 0; t < 3; ++t) {
        auto c = sample_ncube(6, 5, rng.next());
        auto dt = dense_pseudo(c.s);
        X5Partial p;
        p.n = 6;
        p.r = 5;
        p.qv.resize(64);
        p.sv.resize(64);
        for (uint32_t x = 0; x < 64; ++x) {
            p.qv[x] = c.q.eval(x);
            p.sv[x] = dt.at(x);
        }
        auto v = x5_corner_complete(p);
        CHECK(v.q == c.q.eval(63));
        CHECK(v.s == dt.at(63));
    }

    // completions at small n are members
    for (int t = 0; t < 3; ++t) {
        auto c = sample_ncube(2, 5, rng.next());
        auto dt = dense_pseudo(c.s);
        X5Partial p;
        p.n = 2;
        p.r = 5;
        p.qv.resize(4);
        p.sv.resize(4);
        for (uint32_t x = 0; x < 4; ++x) {
            p.qv[x] = c.q.eval(x);
            p.sv[x] = dt.at(x);
        }
        // replace the top entry by the canonical completion and verify
        auto v = x5_corner_complete(p);
        FuncTable s1(2), s2(2), sv(2);
        for (uint32_t x = 0; x < 4; ++x) {
            Klein qq = x == 3 ? v.q : p.qv[x];
            s1.v[x] = Dyadic::make(qq & 1, 1);
            s2.v[x] = Dyadic::make(qq >> 1 & 1, 1);
            sv.v[x] = x == 3 ? v.s : p.sv[x];
        }
        auto p1 = from_table(s1, 2), p2 = from_table(s2, 2);
        REQUIRE(p1.has_value());
        REQUIRE(p2.has_value());
        auto q1 = classical_from_polyrep(*p1), q2 = classical_from_polyrep(*p2);
        CHECK(x5_cube_check(QuadPair{*q1, *q2}, [&](uint32_t x) { return sv.v[x]; }, 2).ok);
    }
}

TEST_CASE("pq files roundtrip byte-exactly") {
    Rng rng(101);
    for (int t = 0; t < 20; ++t) {
        int n = 1 + int(rng.below(5));
        uint32_t r = 1 + uint32_t(rng.below(5));
        auto c = sample_ncube(n, r, rng.next());
        std::ostringstream os;
        write_pq(os, c);
        std::istringstream is(os.str());
        std::string err;
        auto back = read_pq(is, &err);
        REQUIRE_MESSAGE(back.has_value(), err);
        CHECK(back->q.q1 == c.q.q1);
        CHECK(back->q.q2 == c.q.q2);
        CHECK(back->s.rlift == c.s.rlift);
        CHECK(back->s.p == c.s.p);
        std::ostringstream os2;
        write_pq(os2, *back);
        CHECK(os2.str() == os.str());
    }
    std::istringstream bad("PQ n=2 r=9\n");
    CHECK(!read_pq(bad).has_value());
}
