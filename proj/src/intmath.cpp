#include "intmath.hpp"

#include <algorithm>

namespace cmll {

Int inv_mod(const Int& a, const Int& m)
{
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw InternalError("inv_mod: element not invertible");
    return r;
}

bool solve_lin_cong(const Int& a, const Int& b, const Int& m, Int& x0, Int& step)
{
    Int g, s, t;
    ext_gcd(mod_floor(a, m), m, g, s, t);
    if (!divides(g, b))
        return false;
    step = m / g;
    x0 = mod_floor(s * (b / g), step);
    return true;
}

int kronecker(const Int& a, const Int& b)
{
    return mpz_kronecker(a.get_mpz_t(), b.get_mpz_t());
}

namespace {

bool miller_rabin_witness(const Int& n, const Int& a)
{
    if (mod_floor(a, n) == 0)
        return false;
    Int d = n - 1;
    unsigned long r = mpz_scan1(d.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), r);
    Int x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n - 1)
        return false;
    for (unsigned long i = 1; i < r; ++i) {
        x = mod_floor(x * x, n);
        if (x == n - 1)
            return false;
    }
    return true; // composite witness found
}

} // namespace

bool is_prime(const Int& n)
{
    if (n < 2)
        return false;
    static const long small[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
    for (long p : small) {
        if (n == p)
            return true;
        if (divides(Int(p), n))
            return false;
    }
    // Witness set deterministic for n < 3.317e24.
    for (long a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (miller_rabin_witness(n, Int(a)))
            return false;
    }
    if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 81)
        return true;
    return mpz_probab_prime_p(n.get_mpz_t(), 30) != 0;
}

namespace {

Int pollard_rho(const Int& n)
{
    // Deterministic scan over polynomial offsets.
    for (long c = 1; c < 64; ++c) {
        Int x = 2, y = 2, d = 1;
        while (d == 1) {
            x = mod_floor(x * x + c, n);
            y = mod_floor(y * y + c, n);
            y = mod_floor(y * y + c, n);
            d = gcd(x >= y ? x - y : y - x, n);
        }
        if (d != n)
            return d;
    }
    throw InternalError("pollard_rho: failed to split " + to_string(n));
}

void factor_into(const Int& n, std::map<Int, int>& out)
{
    if (n == 1)
        return;
    if (is_prime(n)) {
        out[n] += 1;
        return;
    }
    Int d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

} // namespace

std::map<Int, int> factor(const Int& n)
{
    if (n <= 0)
        throw ValidationError("factor: argument must be positive");
    std::map<Int, int> out;
    Int m = n;
    for (long p = 2; p < 100000 && Int(p) * p <= m; p == 2 ? p = 3 : p += 2) {
        while (divides(Int(p), m)) {
            out[Int(p)] += 1;
            m /= p;
        }
    }
    factor_into(m, out);
    return out;
}

bool is_squarefree(const Int& n)
{
    if (n <= 0)
        return false;
    for (auto& [p, e] : factor(n))
        if (e > 1)
            return false;
    return true;
}

std::vector<Int> divisors(const Int& n)
{
    std::vector<Int> out{1};
    for (auto& [p, e] : factor(n)) {
        size_t sz = out.size();
        Int pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (size_t i = 0; i < sz; ++i)
                out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void hnf2(std::vector<Col2> cols, Int& a, Int& b, Int& c,
          std::vector<std::vector<Int>>* expr)
{
    const size_t n = cols.size();
    std::vector<std::vector<Int>> ex;
    if (expr) {
        ex.assign(n, std::vector<Int>(n, 0));
        for (size_t i = 0; i < n; ++i)
            ex[i][i] = 1;
    }
    auto axpy = [&](size_t dst, size_t src, const Int& k) {
        cols[dst].x += k * cols[src].x;
        cols[dst].y += k * cols[src].y;
        if (expr)
            for (size_t j = 0; j < n; ++j)
                ex[dst][j] += k * ex[src][j];
    };
    auto swap_cols = [&](size_t i, size_t j) {
        std::swap(cols[i], cols[j]);
        if (expr)
            std::swap(ex[i], ex[j]);
    };

    // Clear the y-row down to a single pivot by gcd elimination.
    size_t piv = n;
    for (size_t pass = 0;; ++pass) {
        piv = n;
        for (size_t i = 0; i < n; ++i)
            if (cols[i].y != 0 && (piv == n || abs(cols[i].y) < abs(cols[piv].y)))
                piv = i;
        if (piv == n)
            break;
        bool done = true;
        for (size_t i = 0; i < n; ++i) {
            if (i == piv || cols[i].y == 0)
                continue;
            Int q = fdiv(cols[i].y, cols[piv].y);
            axpy(i, piv, -q);
            if (cols[i].y != 0)
                done = false;
        }
        if (done)
            break;
        if (pass > 4 * n + 64)
            throw InternalError("hnf2: elimination failed to converge");
    }
    if (piv == n) {
        // y-row identically zero: rank-one input, not a finite-index lattice.
        throw InternalError("hnf2: input does not span a rank-2 lattice");
    }
    if (cols[piv].y < 0)
        axpy(piv, piv, -2);
    if (piv != n - 1)
        swap_cols(piv, n - 1);

    // gcd of the x-entries of the remaining columns.
    size_t xp = n; // pivot among 0..n-2
    for (size_t pass = 0;; ++pass) {
        xp = n;
        for (size_t i = 0; i + 1 < n; ++i)
            if (cols[i].x != 0 && (xp == n || abs(cols[i].x) < abs(cols[xp].x)))
                xp = i;
        if (xp == n)
            throw InternalError("hnf2: input does not span a rank-2 lattice");
        bool done = true;
        for (size_t i = 0; i + 1 < n; ++i) {
            if (i == xp || cols[i].x == 0)
                continue;
            Int q = fdiv(cols[i].x, cols[xp].x);
            axpy(i, xp, -q);
            if (cols[i].x != 0)
                done = false;
        }
        if (done)
            break;
        if (pass > 4 * n + 64)
            throw InternalError("hnf2: elimination failed to converge");
    }
    if (cols[xp].x < 0)
        axpy(xp, xp, -2);

    a = cols[xp].x;
    c = cols[n - 1].y;
    // Reduce the second basis vector's x-coordinate into [0, a).
    Int q = fdiv(cols[n - 1].x, a);
    axpy(n - 1, xp, -q);
    b = cols[n - 1].x;

    if (expr) {
        expr->clear();
        expr->push_back(ex[xp]);
        expr->push_back(ex[n - 1]);
    }
}

std::string to_string(const Int& n)
{
    return n.get_str();
}

} // namespace cmll
