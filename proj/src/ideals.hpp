#pragma once

#include "quadfield.hpp"

#include <array>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace cmll {

// Fractional ideal of O_K in canonical form: (1/den) * J where J is the
// integral ideal with Z-basis {a, b + c*w}, a,c > 0, 0 <= b < a, c | a,
// c | b, and gcd(a, b, c, den) has the content pulled out so that
// gcd(content(J), den) = 1. Two FracIdeals are equal iff their fields are.
class FracIdeal {
public:
    FracIdeal() = default; // zero ideal

    static FracIdeal zero() { return FracIdeal(); }
    static FracIdeal one(const FieldCtx& ctx);
    // O_K-span of the given field elements.
    static FracIdeal from_gens(const FieldCtx& ctx, const std::vector<KElem>& gens);
    static FracIdeal from_hnf(const FieldCtx& ctx, Int a, Int b, Int c, Int den = 1);
    static FracIdeal principal(const FieldCtx& ctx, const KElem& g);
    static FracIdeal from_int(const FieldCtx& ctx, const Int& n); // (n)

    bool is_zero() const { return a_ == 0; }
    bool is_one() const { return a_ == 1 && b_ == 0 && c_ == 1 && den_ == 1; }
    bool is_integral() const { return !is_zero() && den_ == 1; }

    const Int& a() const { return a_; }
    const Int& b() const { return b_; }
    const Int& c() const { return c_; }
    const Int& den() const { return den_; }

    // Basis of the underlying lattice (1/den){a, b+c*w} as field elements.
    std::pair<KElem, KElem> basis(const FieldCtx& ctx) const;

    Rat norm() const; // a*c/den^2
    // Norm of the integral part (den must be 1 for a plain integer norm).
    Int norm_int() const;

    bool operator==(const FracIdeal& o) const
    {
        return a_ == o.a_ && b_ == o.b_ && c_ == o.c_ && den_ == o.den_;
    }
    bool operator!=(const FracIdeal& o) const { return !(*this == o); }
    // Lexicographic on (a, b, c, den); used for canonical orderings.
    bool operator<(const FracIdeal& o) const;

    bool contains(const FieldCtx& ctx, const KElem& x) const;
    bool contains_quadint(const QuadInt& x) const; // den must be 1

    static FracIdeal mul(const FieldCtx& ctx, const FracIdeal& x, const FracIdeal& y);
    static FracIdeal sum(const FieldCtx& ctx, const FracIdeal& x, const FracIdeal& y);
    FracIdeal inv(const FieldCtx& ctx) const;
    FracIdeal conj(const FieldCtx& ctx) const;
    FracIdeal scale(const FieldCtx& ctx, const KElem& z) const; // z * I
    FracIdeal pow(const FieldCtx& ctx, long e) const;

    // Integral part and denominator as ideals: I = integral_part / den.
    FracIdeal integral_part() const;

    std::string str() const;

private:
    Int a_{0}, b_{0}, c_{1}, den_{1};
    void normalize(const FieldCtx& ctx);
};

struct PrimePower {
    FracIdeal p;
    int e;
};

// Sorted by (norm, HNF) of the prime; product of p^e equals the input.
using PrimeFactorization = std::vector<PrimePower>;

bool is_coprime(const FieldCtx& ctx, const FracIdeal& x, const FracIdeal& y);

// Primes of O_K above the rational prime p, each with its ramification index.
// Split: two primes e=1; inert: one prime e=1 (norm p^2); ramified: one prime e=2.
std::vector<std::pair<FracIdeal, int>> primes_above(const FieldCtx& ctx, const Int& p);

PrimeFactorization factor_ideal(const FieldCtx& ctx, const FracIdeal& I);

// Valuation v_p(I) for prime p (I nonzero, possibly fractional).
int valuation(const FieldCtx& ctx, const FracIdeal& I, const FracIdeal& p);
// Valuation of a nonzero element.
int valuation_elem(const FieldCtx& ctx, const KElem& x, const FracIdeal& p);

// Exhaustive search over lattice points of the exact target norm.
// Returns a deterministic generator if I is principal.
std::optional<KElem> is_principal(const FieldCtx& ctx, const FracIdeal& I);

// g = 1 (mod f) in the multiplicative sense: (g-1) = f*A*B^-1 with B integral
// coprime to f; equivalently v_p(g-1) >= v_p(f) for each p | f.
bool one_mod_f(const FieldCtx& ctx, const KElem& g, const FracIdeal& f);
// Same with a precomputed factorization of f.
bool one_mod_f(const FieldCtx& ctx, const KElem& g, const PrimeFactorization& f_fact);

// Precomputed prime powers of f for repeated one_mod_f tests.
class OneModTester {
public:
    OneModTester(const FieldCtx& ctx, const PrimeFactorization& f_fact);
    bool test(const KElem& g) const;
    bool test_quadint(const QuadInt& g) const;

private:
    const FieldCtx* ctx_;
    std::vector<std::pair<FracIdeal, FracIdeal>> pe_; // (p, p^e)
    std::vector<int> exps_;
};

// x in I, y in J with x + y = 1 (I, J coprime integral ideals).
std::pair<KElem, KElem> ideal_bezout(const FieldCtx& ctx, const FracIdeal& I, const FracIdeal& J);

// All integral ideals with norm exactly n, sorted by HNF order.
std::vector<FracIdeal> ideals_of_norm(const FieldCtx& ctx, const Int& n);
// All integral ideals with 1 <= norm <= bound, sorted by (norm, HNF).
std::vector<FracIdeal> ideals_up_to_norm(const FieldCtx& ctx, const Int& bound);

// Residue of x modulo the integral ideal f, for x with v_p(x) >= 0 at all
// p | f (denominators prime to f are inverted; denominators sharing a prime
// with f are handled by solving at raised modulus). Throws ValidationError
// if x is not f-integral.
QuadInt residue_mod(const FieldCtx& ctx, const KElem& x, const FracIdeal& f,
                    const PrimeFactorization& f_fact);

// Product lattice basis with witness: basis vectors of x*y expressed as
// integer combinations of the pairwise products g_i * h_j of the inputs'
// basis vectors (i, j in {0, 1}; index 2*i + j).
struct ProductWitness {
    FracIdeal product;
    std::array<KElem, 4> pair_products;
    std::vector<std::vector<Int>> expr; // expr[k][2*i+j]
};
ProductWitness mul_with_witness(const FieldCtx& ctx, const FracIdeal& x, const FracIdeal& y);

// Coordinates of x in the lattice basis of I (must be a member).
std::pair<Int, Int> lattice_coords(const FieldCtx& ctx, const FracIdeal& I, const KElem& x);

// O_K/f for an integral ideal f: canonical coset representatives and residue
// arithmetic. Enumeration requires Nf within the given cap.
class ResidueRing {
public:
    ResidueRing(const FieldCtx& ctx, const FracIdeal& f, const Int& enum_cap = Int(1000000));

    const Int& size() const { return size_; }
    const FieldCtx& ctx() const { return *ctx_; }
    const FracIdeal& modulus() const { return f_; }

    QuadInt reduce(const QuadInt& x) const;
    // Requires v_p(x) >= 0 at all p | f.
    QuadInt reduce_elem(const KElem& x) const;

    QuadInt add(const QuadInt& x, const QuadInt& y) const;
    QuadInt mul(const QuadInt& x, const QuadInt& y) const;
    bool is_unit(const QuadInt& x) const;
    QuadInt inv_unit(const QuadInt& x) const;

    // All Nf coset representatives, in a fixed deterministic order.
    std::vector<QuadInt> elements() const;
    // Unit subgroup, in enumeration order (cached on first use).
    const std::vector<QuadInt>& units() const;

    // Solve m*y = target in the ring; all solutions (possibly none).
    std::vector<QuadInt> solve_scalar(const Int& m, const QuadInt& target) const;

private:
    const FieldCtx* ctx_;
    FracIdeal f_;
    Int ha_, hb_, hc_; // HNF of f
    Int size_;
    mutable std::vector<QuadInt> units_;
    mutable PrimeFactorization fact_;
};

} // namespace cmll
