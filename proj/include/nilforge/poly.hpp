#pragma once
// Non-classical polynomial algebra on F_2^n.  The canonical monomial form
// (constant plus squarefree monomials c_S / 2^{d+1-|S|}) is the authoritative
// representation; dense tables are a derived cache.  Coefficients are unique,
// which gives exact equality, exact degree measurement, and uniform sampling.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nilforge/dyadic.hpp"
#include "nilforge/rng.hpp"

namespace nilforge {

class Rng;

// Element of F_2^n packed in a machine word, n <= 30.  Addition is XOR.
struct BitVector {
    int n = 0;
    uint32_t bits = 0;
};

inline int popcount(uint32_t m) { return __builtin_popcount(m); }

// Dense exact table of a map F_2^n -> torus.
struct FuncTable {
    int n = 0;
    std::vector<Dyadic> v;  // size 2^n, indexed by packed point

    FuncTable() = default;
    explicit FuncTable(int n_) : n(n_), v(size_t(1) << n_) {}
    size_t size() const { return v.size(); }
    uint32_t max_level() const;
    friend bool operator==(const FuncTable&, const FuncTable&) = default;
};

FuncTable derivative(const FuncTable& f, uint32_t h);
FuncTable translate(const FuncTable& f, uint32_t h);
FuncTable operator+(const FuncTable& a, const FuncTable& b);
FuncTable operator-(const FuncTable& a, const FuncTable& b);
FuncTable scale(const FuncTable& f, int64_t m);
// degree <= k test by iterated differences along all basis multisets
bool degree_test(const FuncTable& f, int k);
// restriction to the hyperplane x_j = bit, as a table on F_2^{n-1}
FuncTable restrict_coord(const FuncTable& f, int j, int bit);
// e_j-invariant extension of a table on F_2^{n-1} back to F_2^n
FuncTable extend_invariant(const FuncTable& f, int j);

// Canonical monomial representation of P in Poly^d(F_2^n -> (1/2^level)Z/Z).
struct PolyRep {
    int n = 0;
    int d = 0;           // degree bound of the canonical form
    uint32_t level = 1;  // declared value level r
    Dyadic alpha;
    std::map<uint32_t, uint64_t> coeffs;  // monomial mask -> c, 0 < c < 2^{d+1-|S|}

    friend bool operator==(const PolyRep&, const PolyRep&) = default;
};

Dyadic eval(const PolyRep& p, BitVector x);
Dyadic eval(const PolyRep& p, uint32_t x);

// exact degree of the represented function (-1 for the zero function)
int measured_degree(const PolyRep& p);
bool degree_test(const PolyRep& p, int k);

// the same function re-expressed with degree bound d2 >= measured degree
PolyRep rebound(const PolyRep& p, int d2);

// d/dh as a PolyRep with the same degree bound, via coefficient recomputation
PolyRep derivative(const PolyRep& p, uint32_t h);

// Q with 2Q = P, degree bound d+1, by coefficient halving
PolyRep exact_root(const PolyRep& p);

// Q of degree <= d+1 with Q + T^e Q = P; requires e != 0 and d/de P = 0
PolyRep invert_one_plus_shift(const PolyRep& p, uint32_t e);

// P composed with the linear map x = A y (rows[i] = mask of row i)
PolyRep substitute_linear(const PolyRep& p, const std::vector<uint32_t>& rows);

// uniform over Poly^d(F_2^n -> (1/2^level)Z/Z)
PolyRep random_poly(int n, int d, uint32_t level, Rng& rng);

FuncTable to_table(const PolyRep& p);
// inverse of to_table on degree-d tables; nullopt with a violation report otherwise
std::optional<PolyRep> from_table(const FuncTable& t, int d, std::string* violation = nullptr);

// ---- classical (F_2-valued) polynomials --------------------------------
struct F2Poly {
    int n = 0;
    std::vector<uint32_t> monos;  // sorted, unique monomial masks (0 = constant 1)

    int eval(uint32_t x) const;
    int degree() const;  // -1 for zero
    friend bool operator==(const F2Poly&, const F2Poly&) = default;
};

F2Poly operator+(const F2Poly& a, const F2Poly& b);
// pointwise product; degree at most deg a + deg b
F2Poly poly_product(const F2Poly& a, const F2Poly& b);
F2Poly random_classical(int n, int d, Rng& rng);
// the torus-valued polynomial P/2 in canonical degree-d form
PolyRep classical_to_polyrep(const F2Poly& q, int d);
std::optional<F2Poly> classical_from_polyrep(const PolyRep& p);

// ---- Z/4Z-valued cubic carriers -----------------------------------------
struct Z4Poly {
    int n = 0;
    std::map<uint32_t, uint8_t> coeffs;  // mask -> coefficient mod 4 (mask 0 = constant)

    Z4 eval(uint32_t x) const;
    friend bool operator==(const Z4Poly&, const Z4Poly&) = default;
};

// exact degree of the torus map R/4 (equivalently of R as a Z/4Z-valued map)
int measured_degree(const Z4Poly& r);
// iterated-difference test d^{k+1} R = 0 over basis multisets, exact
bool degree_test_z4(const Z4Poly& r, int k);

// ---- dense numerator tables (kernel-backed caches) ------------------------
struct DenseTable {
    int n = 0;
    uint32_t level = 0;            // values are num[x]/2^level
    std::vector<uint16_t> num;     // size 2^n

    Dyadic at(uint32_t x) const { return Dyadic::make(num[x], level); }
};

DenseTable dense_table(const PolyRep& p);           // requires max(d+1, alpha level) <= 16
DenseTable dense_table(const F2Poly& q);            // level 1
std::vector<uint8_t> dense_values_z4(const Z4Poly& r);
DenseTable dense_from_functable(const FuncTable& f);

// ---- serialization --------------------------------------------------------
// POLY n=<n> d=<d> level=<r> / CONST <num>/2^<lev> / TERM i1,..,ik <c>
void write_poly(std::ostream& os, const PolyRep& p);
std::optional<PolyRep> read_poly(std::istream& is, std::string* err = nullptr);
std::string poly_to_string(const PolyRep& p);
std::optional<PolyRep> poly_from_string(const std::string& s, std::string* err = nullptr);

// CSV rows "bitstring,num,level" in ascending point order
void write_table_csv(std::ostream& os, const FuncTable& t);
std::optional<FuncTable> read_table_csv(std::istream& is, std::string* err = nullptr);

}  // namespace nilforge
