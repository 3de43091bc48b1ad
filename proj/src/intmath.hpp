#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmll {

using Int = mpz_class;
using Rat = mpq_class;

// Raised on bad user input (CLI exit code 3).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a structural identity that must hold fails (CLI exit code 4).
struct InternalError : std::runtime_error {
    explicit InternalError(const std::string& msg) : std::runtime_error(msg) {}
};

inline Int gcd(const Int& a, const Int& b)
{
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int lcm(const Int& a, const Int& b)
{
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

// Floor square root; requires n >= 0.
inline Int isqrt(const Int& n)
{
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool is_square(const Int& n, Int& root)
{
    if (n < 0)
        return false;
    root = isqrt(n);
    return root * root == n;
}

// Euclidean remainder in [0, m), m > 0.
inline Int mod_floor(const Int& a, const Int& m)
{
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Int fdiv(const Int& a, const Int& m)
{
    Int r;
    mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline bool divides(const Int& d, const Int& a)
{
    return d != 0 && mpz_divisible_p(a.get_mpz_t(), d.get_mpz_t());
}

// g = gcd(a, b) = s*a + t*b.
inline void ext_gcd(const Int& a, const Int& b, Int& g, Int& s, Int& t)
{
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
}

// Inverse of a modulo m (m > 1, gcd(a, m) = 1).
Int inv_mod(const Int& a, const Int& m);

// Solve a*x = b (mod m), m > 0. Returns the solutions' canonical form:
// x = x0 + (m/g)*k. False if gcd(a, m) does not divide b.
bool solve_lin_cong(const Int& a, const Int& b, const Int& m, Int& x0, Int& step);

int kronecker(const Int& a, const Int& b);

// Deterministic primality for the desk-scale range (< 3.3e24 guaranteed;
// falls back to strong BPSW beyond, which has no known counterexample).
bool is_prime(const Int& n);

// Factor n > 0 by trial division then Pollard rho. Deterministic.
std::map<Int, int> factor(const Int& n);

bool is_squarefree(const Int& n);

std::vector<Int> divisors(const Int& n);

// --- small integer matrix utilities -------------------------------------
//
// Columns are length-2 integer vectors. hnf2 reduces a set of columns to
// the (lower-left) Hermite form basis {(a, 0), (b, c)} with a, c > 0,
// 0 <= b < a. Input must span a finite-index sublattice of Z^2.
// If expr != nullptr, on return (*expr)[k] holds the expression of basis
// vector k as an integer combination of the original columns.

struct Col2 {
    Int x, y;
};

void hnf2(std::vector<Col2> cols, Int& a, Int& b, Int& c,
          std::vector<std::vector<Int>>* expr = nullptr);

std::string to_string(const Int& n);

} // namespace cmll
