#include "ideals.hpp"

#include <algorithm>
#include <array>

namespace cmll {

namespace {

// Norm form of b + c*w as a polynomial identity.
Int norm_pair(const FieldCtx& ctx, const Int& b, const Int& c)
{
    return ctx.norm(QuadInt{b, c});
}

} // namespace

void FracIdeal::normalize(const FieldCtx& ctx)
{
    if (a_ == 0) {
        b_ = 0;
        c_ = 1;
        den_ = 1;
        return;
    }
    if (a_ < 0)
        a_ = -a_;
    if (c_ < 0)
        c_ = -c_;
    b_ = mod_floor(b_, a_);
    if (!divides(c_, a_) || !divides(c_, b_) || !divides(a_ * c_, norm_pair(ctx, b_, c_)))
        throw InternalError("FracIdeal: HNF triple is not an O_K-module");
    Int content = gcd(gcd(a_, b_), c_);
    Int g = gcd(content, den_);
    if (g > 1) {
        a_ /= g;
        b_ /= g;
        c_ /= g;
        den_ /= g;
    }
}

FracIdeal FracIdeal::one(const FieldCtx& ctx)
{
    return from_hnf(ctx, 1, 0, 1, 1);
}

FracIdeal FracIdeal::from_hnf(const FieldCtx& ctx, Int a, Int b, Int c, Int den)
{
    if (den <= 0)
        throw ValidationError("ideal denominator must be positive");
    FracIdeal I;
    I.a_ = std::move(a);
    I.b_ = std::move(b);
    I.c_ = std::move(c);
    I.den_ = std::move(den);
    I.normalize(ctx);
    return I;
}

FracIdeal FracIdeal::from_gens(const FieldCtx& ctx, const std::vector<KElem>& gens)
{
    if (gens.empty())
        throw ValidationError("empty generator list");
    Int D = 1;
    for (const auto& g : gens)
        D = lcm(D, g.den);
    std::vector<Col2> cols;
    for (const auto& g : gens) {
        if (g.is_zero())
            continue;
        QuadInt n = ctx.mul_int(g.num, D / g.den);
        QuadInt nw = ctx.mul(n, QuadInt{0, 1});
        cols.push_back({n.a, n.b});
        cols.push_back({nw.a, nw.b});
    }
    if (cols.empty())
        throw ValidationError("all generators are zero");
    Int a, b, c;
    hnf2(std::move(cols), a, b, c);
    return from_hnf(ctx, a, b, c, D);
}

FracIdeal FracIdeal::principal(const FieldCtx& ctx, const KElem& g)
{
    return from_gens(ctx, {g});
}

FracIdeal FracIdeal::from_int(const FieldCtx& ctx, const Int& n)
{
    if (n == 0)
        throw ValidationError("zero ideal");
    Int m = abs(n);
    return from_hnf(ctx, m, 0, m, 1);
}

std::pair<KElem, KElem> FracIdeal::basis(const FieldCtx& ctx) const
{
    if (is_zero())
        throw ValidationError("zero ideal has no basis");
    return {ctx.make_elem(QuadInt{a_, 0}, den_), ctx.make_elem(QuadInt{b_, c_}, den_)};
}

Rat FracIdeal::norm() const
{
    if (is_zero())
        return Rat(0);
    Rat r(a_ * c_, den_ * den_);
    r.canonicalize();
    return r;
}

Int FracIdeal::norm_int() const
{
    if (den_ != 1)
        throw InternalError("norm_int on non-integral ideal");
    return a_ * c_;
}

bool FracIdeal::operator<(const FracIdeal& o) const
{
    if (a_ != o.a_)
        return a_ < o.a_;
    if (b_ != o.b_)
        return b_ < o.b_;
    if (c_ != o.c_)
        return c_ < o.c_;
    return den_ < o.den_;
}

bool FracIdeal::contains_quadint(const QuadInt& x) const
{
    if (is_zero())
        return x.is_zero();
    if (den_ != 1)
        throw InternalError("contains_quadint on non-integral ideal");
    if (!divides(c_, x.b))
        return false;
    Int k = x.b / c_;
    return divides(a_, x.a - k * b_);
}

bool FracIdeal::contains(const FieldCtx& ctx, const KElem& x) const
{
    if (is_zero())
        return x.is_zero();
    // x in (1/den)*J  <=>  den*num in xden*J
    QuadInt t = ctx.mul_int(x.num, den_);
    Int C = c_ * x.den, A = a_ * x.den, B = b_ * x.den;
    if (!divides(C, t.b))
        return false;
    Int k = t.b / C;
    return divides(A, t.a - k * B);
}

FracIdeal FracIdeal::mul(const FieldCtx& ctx, const FracIdeal& x, const FracIdeal& y)
{
    if (x.is_zero() || y.is_zero())
        return zero();
    std::array<QuadInt, 2> bx{QuadInt{x.a_, 0}, QuadInt{x.b_, x.c_}};
    std::array<QuadInt, 2> by{QuadInt{y.a_, 0}, QuadInt{y.b_, y.c_}};
    std::vector<Col2> cols;
    for (const auto& u : bx)
        for (const auto& v : by) {
            QuadInt p = ctx.mul(u, v);
            QuadInt pw = ctx.mul(p, QuadInt{0, 1});
            cols.push_back({p.a, p.b});
            cols.push_back({pw.a, pw.b});
        }
    Int a, b, c;
    hnf2(std::move(cols), a, b, c);
    return from_hnf(ctx, a, b, c, x.den_ * y.den_);
}

FracIdeal FracIdeal::sum(const FieldCtx& ctx, const FracIdeal& x, const FracIdeal& y)
{
    if (x.is_zero())
        return y;
    if (y.is_zero())
        return x;
    Int L = lcm(x.den_, y.den_);
    Int sx = L / x.den_, sy = L / y.den_;
    std::vector<Col2> cols{{x.a_ * sx, Int(0)},
                           {x.b_ * sx, x.c_ * sx},
                           {y.a_ * sy, Int(0)},
                           {y.b_ * sy, y.c_ * sy}};
    Int a, b, c;
    hnf2(std::move(cols), a, b, c);
    return from_hnf(ctx, a, b, c, L);
}

FracIdeal FracIdeal::inv(const FieldCtx& ctx) const
{
    if (is_zero())
        throw ValidationError("cannot invert the zero ideal");
    // I = J/den, I^-1 = den * conj(J) / N(J)
    FracIdeal Jc = integral_part().conj(ctx);
    return from_hnf(ctx, Jc.a_ * den_, Jc.b_ * den_, Jc.c_ * den_, a_ * c_);
}

FracIdeal FracIdeal::conj(const FieldCtx& ctx) const
{
    if (is_zero())
        return zero();
    QuadInt s = ctx.conj(QuadInt{b_, c_});
    std::vector<Col2> cols{{a_, Int(0)}, {s.a, s.b}};
    Int a, b, c;
    hnf2(std::move(cols), a, b, c);
    return from_hnf(ctx, a, b, c, den_);
}

FracIdeal FracIdeal::scale(const FieldCtx& ctx, const KElem& z) const
{
    if (is_zero() || z.is_zero())
        return zero();
    QuadInt u = ctx.mul(z.num, QuadInt{a_, 0});
    QuadInt v = ctx.mul(z.num, QuadInt{b_, c_});
    QuadInt uw = ctx.mul(u, QuadInt{0, 1});
    QuadInt vw = ctx.mul(v, QuadInt{0, 1});
    std::vector<Col2> cols{{u.a, u.b}, {uw.a, uw.b}, {v.a, v.b}, {vw.a, vw.b}};
    Int a, b, c;
    hnf2(std::move(cols), a, b, c);
    return from_hnf(ctx, a, b, c, den_ * z.den);
}

FracIdeal FracIdeal::pow(const FieldCtx& ctx, long e) const
{
    if (e == 0)
        return one(ctx);
    FracIdeal base = e > 0 ? *this : inv(ctx);
    unsigned long k = e > 0 ? e : -e;
    FracIdeal r = one(ctx);
    while (k) {
        if (k & 1)
            r = mul(ctx, r, base);
        base = mul(ctx, base, base);
        k >>= 1;
    }
    return r;
}

FracIdeal FracIdeal::integral_part() const
{
    FracIdeal J = *this;
    J.den_ = 1;
    return J;
}

std::string FracIdeal::str() const
{
    std::string s = "[" + a_.get_str() + "," + b_.get_str() + "," + c_.get_str() + "]";
    if (den_ != 1)
        s += "/" + den_.get_str();
    return s;
}

bool is_coprime(const FieldCtx& ctx, const FracIdeal& x, const FracIdeal& y)
{
    if (x.is_zero() || y.is_zero())
        return false;
    return FracIdeal::sum(ctx, x, y).is_one();
}

// --- primes ----------------------------------------------------------------

namespace {

// Square root mod an odd prime p (Tonelli-Shanks); requires kronecker(n,p)=1.
Int sqrt_mod(const Int& n0, const Int& p)
{
    Int n = mod_floor(n0, p);
    if (n == 0)
        return 0;
    if (mod_floor(p, 4) == 3) {
        Int r;
        Int e = (p + 1) / 4;
        mpz_powm(r.get_mpz_t(), n.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
        return r;
    }
    Int q = p - 1;
    unsigned long s = mpz_scan1(q.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(q.get_mpz_t(), q.get_mpz_t(), s);
    Int z = 2;
    while (kronecker(z, p) != -1)
        ++z;
    Int m(static_cast<long>(s)), c, t, r;
    mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    mpz_powm(t.get_mpz_t(), n.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    Int e2 = (q + 1) / 2;
    mpz_powm(r.get_mpz_t(), n.get_mpz_t(), e2.get_mpz_t(), p.get_mpz_t());
    while (t != 1) {
        Int i = 0, tt = t;
        while (tt != 1) {
            tt = mod_floor(tt * tt, p);
            ++i;
            if (i == m)
                throw InternalError("sqrt_mod: not a quadratic residue");
        }
        Int b = c;
        for (Int j = 0; j < m - i - 1; ++j)
            b = mod_floor(b * b, p);
        m = i;
        c = mod_floor(b * b, p);
        t = mod_floor(t * c, p);
        r = mod_floor(r * b, p);
    }
    return r;
}

// Roots of the minimal polynomial of w modulo p.
std::vector<Int> omega_roots_mod(const FieldCtx& ctx, const Int& p)
{
    std::vector<Int> roots;
    if (p == 2) {
        for (Int t = 0; t < 2; ++t)
            if (mod_floor(ctx.norm(QuadInt{t, -1}), 2) == 0) // N(t - w) = minpoly(t)
                roots.push_back(t);
        std::sort(roots.begin(), roots.end());
        return roots;
    }
    if (ctx.omega_kind() == OmegaKind::SQRT) {
        // x^2 + d
        Int nd = mod_floor(-ctx.d(), p);
        int kr = kronecker(nd, p);
        if (nd == 0)
            roots.push_back(0);
        else if (kr == 1) {
            Int r = sqrt_mod(nd, p);
            roots.push_back(r);
            if (r != mod_floor(-r, p))
                roots.push_back(mod_floor(-r, p));
        }
    } else {
        // x^2 - x + m, roots (1 +- s)/2 with s^2 = 1 - 4m = -d
        Int nd = mod_floor(-ctx.d(), p);
        int kr = kronecker(nd, p);
        Int inv2 = inv_mod(Int(2), p);
        if (nd == 0)
            roots.push_back(mod_floor(inv2, p));
        else if (kr == 1) {
            Int s = sqrt_mod(nd, p);
            roots.push_back(mod_floor((1 + s) * inv2, p));
            Int r2 = mod_floor((1 - s) * inv2, p);
            if (r2 != roots[0])
                roots.push_back(r2);
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

} // namespace

std::vector<std::pair<FracIdeal, int>> primes_above(const FieldCtx& ctx, const Int& p)
{
    if (!is_prime(p))
        throw ValidationError("primes_above: " + to_string(p) + " is not prime");
    auto roots = omega_roots_mod(ctx, p);
    std::vector<std::pair<FracIdeal, int>> out;
    if (roots.empty()) {
        out.push_back({FracIdeal::from_int(ctx, p), 1}); // inert, norm p^2
        return out;
    }
    bool ramified = roots.size() == 1 && divides(p, ctx.disc());
    for (const Int& r : roots) {
        // (p, w - r): HNF directly [p, (p - r mod p) + 1*w]... basis {p, -r + w}
        FracIdeal P = FracIdeal::from_hnf(ctx, p, mod_floor(-r, p), 1, 1);
        out.push_back({P, ramified ? 2 : 1});
    }
    std::sort(out.begin(), out.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}

int valuation(const FieldCtx& ctx, const FracIdeal& I, const FracIdeal& p)
{
    if (I.is_zero())
        throw ValidationError("valuation of the zero ideal");
    auto count = [&](FracIdeal J) {
        int v = 0;
        FracIdeal pinv = p.inv(ctx);
        while (true) {
            auto [e1, e2] = J.basis(ctx);
            if (!p.contains(ctx, e1) || !p.contains(ctx, e2))
                break;
            J = FracIdeal::mul(ctx, J, pinv);
            ++v;
        }
        return v;
    };
    int v = count(I.integral_part());
    if (I.den() != 1)
        v -= count(FracIdeal::from_int(ctx, I.den()));
    return v;
}

int valuation_elem(const FieldCtx& ctx, const KElem& x, const FracIdeal& p)
{
    if (x.is_zero())
        throw ValidationError("valuation of zero");
    int v = valuation(ctx, FracIdeal::from_gens(ctx, {KElem{x.num, 1}}), p);
    if (x.den != 1)
        v -= valuation(ctx, FracIdeal::from_int(ctx, x.den), p);
    return v;
}

PrimeFactorization factor_ideal(const FieldCtx& ctx, const FracIdeal& I)
{
    if (I.is_zero())
        throw ValidationError("cannot factor the zero ideal");
    PrimeFactorization out;
    Int n = I.integral_part().norm_int() * I.den();
    if (n == 1)
        return out;
    for (auto& [q, e] : factor(n)) {
        (void)e;
        for (auto& [P, re] : primes_above(ctx, q)) {
            (void)re;
            int v = valuation(ctx, I, P);
            if (v != 0)
                out.push_back({P, v});
        }
    }
    std::sort(out.begin(), out.end(), [](const PrimePower& x, const PrimePower& y) {
        Int nx = x.p.norm_int(), ny = y.p.norm_int();
        if (nx != ny)
            return nx < ny;
        return x.p < y.p;
    });
    return out;
}

std::optional<KElem> is_principal(const FieldCtx& ctx, const FracIdeal& I)
{
    if (I.is_zero())
        throw ValidationError("is_principal on the zero ideal");
    FracIdeal J = I.integral_part();
    Int N = J.norm_int();
    if (N == 1)
        return ctx.make_elem(QuadInt{1, 0}, I.den());
    auto member = [&](const QuadInt& g) { return J.contains_quadint(g); };
    if (ctx.omega_kind() == OmegaKind::SQRT) {
        Int vmax = isqrt(N / ctx.d());
        for (Int v = 0; v <= vmax; ++v) {
            Int rem = N - ctx.d() * v * v, u;
            if (!is_square(rem, u))
                continue;
            for (int s = 0; s < 2; ++s) {
                QuadInt g{s == 0 ? u : -u, v};
                if (member(g))
                    return ctx.make_elem(g, I.den());
                if (u == 0)
                    break;
            }
        }
    } else {
        Int q = 4 * ctx.half_m() - 1; // = d
        Int vmax = isqrt(4 * N / q);
        for (Int v = 0; v <= vmax; ++v) {
            Int rem = 4 * N - q * v * v, t;
            if (!is_square(rem, t))
                continue;
            for (int s = 0; s < 2; ++s) {
                Int tt = s == 0 ? t : -t;
                if (!divides(Int(2), tt - v))
                    continue;
                QuadInt g{(tt - v) / 2, v};
                if (member(g))
                    return ctx.make_elem(g, I.den());
                if (t == 0)
                    break;
            }
        }
    }
    return std::nullopt;
}

bool one_mod_f(const FieldCtx& ctx, const KElem& g, const PrimeFactorization& f_fact)
{
    if (g.is_zero())
        return false;
    KElem y = ctx.k_sub(g, ctx.make_elem(QuadInt{1, 0}, 1));
    if (y.is_zero())
        return true;
    for (const auto& pp : f_fact) {
        if (pp.e <= 0)
            continue;
        if (y.den == 1) {
            FracIdeal pe = pp.p.pow(ctx, pp.e);
            if (!pe.contains_quadint(y.num))
                return false;
        } else if (valuation_elem(ctx, y, pp.p) < pp.e) {
            return false;
        }
    }
    return true;
}

bool one_mod_f(const FieldCtx& ctx, const KElem& g, const FracIdeal& f)
{
    if (!f.is_integral())
        throw ValidationError("one_mod_f: modulus must be integral");
    return one_mod_f(ctx, g, factor_ideal(ctx, f));
}

OneModTester::OneModTester(const FieldCtx& ctx, const PrimeFactorization& f_fact) : ctx_(&ctx)
{
    for (const auto& pp : f_fact) {
        if (pp.e <= 0)
            continue;
        pe_.push_back({pp.p, pp.p.pow(ctx, pp.e)});
        exps_.push_back(pp.e);
    }
}

bool OneModTester::test_quadint(const QuadInt& g) const
{
    QuadInt y{g.a - 1, g.b};
    if (y.is_zero())
        return true;
    for (const auto& [p, pe] : pe_)
        if (!pe.contains_quadint(y))
            return false;
    return true;
}

bool OneModTester::test(const KElem& g) const
{
    if (g.is_zero())
        return false;
    if (g.den == 1)
        return test_quadint(g.num);
    KElem y = ctx_->k_sub(g, ctx_->make_elem(QuadInt{1, 0}, 1));
    if (y.is_zero())
        return true;
    for (size_t i = 0; i < pe_.size(); ++i)
        if (valuation_elem(*ctx_, y, pe_[i].first) < exps_[i])
            return false;
    return true;
}

std::pair<KElem, KElem> ideal_bezout(const FieldCtx& ctx, const FracIdeal& I, const FracIdeal& J)
{
    if (!I.is_integral() || !J.is_integral())
        throw ValidationError("ideal_bezout requires integral ideals");
    std::vector<Col2> cols{{I.a(), Int(0)}, {I.b(), I.c()}, {J.a(), Int(0)}, {J.b(), J.c()}};
    Int a, b, c;
    std::vector<std::vector<Int>> expr;
    hnf2(cols, a, b, c, &expr);
    if (!(a == 1 && c == 1))
        throw ValidationError("ideal_bezout: ideals are not coprime");
    // Basis vector (1, 0) = sum_k expr[0][k] * col_k.
    QuadInt x = ctx.add(ctx.mul_int(QuadInt{I.a(), 0}, expr[0][0]),
                        ctx.mul_int(QuadInt{I.b(), I.c()}, expr[0][1]));
    QuadInt y = ctx.add(ctx.mul_int(QuadInt{J.a(), 0}, expr[0][2]),
                        ctx.mul_int(QuadInt{J.b(), J.c()}, expr[0][3]));
    if (ctx.add(x, y) != QuadInt{1, 0})
        throw InternalError("ideal_bezout: witness does not sum to 1");
    return {KElem{x, 1}, KElem{y, 1}};
}

std::vector<FracIdeal> ideals_of_norm(const FieldCtx& ctx, const Int& n)
{
    std::vector<FracIdeal> out;
    if (n <= 0)
        return out;
    for (const Int& c : divisors(n)) {
        if (!divides(c * c, n))
            continue;
        Int a = n / c;
        Int quot = n / (c * c);
        for (Int t = 0; t < a / c; ++t) {
            if (divides(quot, ctx.norm(QuadInt{t, 1})))
                out.push_back(FracIdeal::from_hnf(ctx, a, c * t, c, 1));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<FracIdeal> ideals_up_to_norm(const FieldCtx& ctx, const Int& bound)
{
    std::vector<FracIdeal> out;
    for (Int n = 1; n <= bound; ++n)
        for (auto& I : ideals_of_norm(ctx, n))
            out.push_back(std::move(I));
    return out;
}

QuadInt residue_mod(const FieldCtx& ctx, const KElem& x, const FracIdeal& f,
                    const PrimeFactorization& f_fact)
{
    if (!f.is_integral())
        throw ValidationError("residue_mod: modulus must be integral");
    auto reduce_triple = [&ctx](const QuadInt& t, const Int& A, const Int& B, const Int& C) {
        Int v = mod_floor(t.b, C);
        Int k = (t.b - v) / C;
        Int u = mod_floor(t.a - k * B, A);
        return QuadInt{u, v};
    };
    if (x.den == 1)
        return reduce_triple(x.num, f.a(), f.b(), f.c());

    // Raise the modulus by the f-supported part of the denominator, solve
    // den*y = num there; all solutions agree modulo f.
    FracIdeal m = FracIdeal::one(ctx);
    for (const auto& pp : f_fact) {
        int v = valuation(ctx, FracIdeal::from_int(ctx, x.den), pp.p);
        if (v > 0)
            m = FracIdeal::mul(ctx, m, pp.p.pow(ctx, v));
    }
    FracIdeal M = FracIdeal::mul(ctx, f, m);
    const Int &A = M.a(), &B = M.b(), &C = M.c();
    Int yb0, sb;
    if (!solve_lin_cong(x.den, x.num.b, C, yb0, sb))
        throw ValidationError("element is not integral at a prime dividing the modulus");
    Int g = C / sb;
    for (Int j = 0; j < g; ++j) {
        Int yb = yb0 + j * sb;
        Int k = (x.den * yb - x.num.b) / C;
        Int ya0, sa;
        if (solve_lin_cong(x.den, x.num.a + k * B, A, ya0, sa))
            return reduce_triple(QuadInt{ya0, yb}, f.a(), f.b(), f.c());
    }
    throw ValidationError("element is not integral at a prime dividing the modulus");
}

ProductWitness mul_with_witness(const FieldCtx& ctx, const FracIdeal& x, const FracIdeal& y)
{
    if (x.is_zero() || y.is_zero())
        throw ValidationError("mul_with_witness on the zero ideal");
    auto [e1, e2] = x.basis(ctx);
    auto [f1, f2] = y.basis(ctx);
    ProductWitness W;
    std::array<KElem, 2> bx{e1, e2}, by{f1, f2};
    std::vector<Col2> cols;
    Int D = x.den() * y.den();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            W.pair_products[2 * i + j] = ctx.k_mul(bx[i], by[j]);
            // numerator over common denominator D
            const KElem& p = W.pair_products[2 * i + j];
            QuadInt n = ctx.mul_int(p.num, D / p.den);
            cols.push_back({n.a, n.b});
        }
    Int a, b, c;
    std::vector<std::vector<Int>> expr;
    // hnf2 needs the w-row spanned; pair products of ideal bases always span.
    hnf2(cols, a, b, c, &expr);
    W.product = FracIdeal::from_hnf(ctx, a, b, c, D);
    W.expr = std::move(expr);
    return W;
}

std::pair<Int, Int> lattice_coords(const FieldCtx& ctx, const FracIdeal& I, const KElem& x)
{
    if (I.is_zero())
        throw ValidationError("lattice_coords on the zero ideal");
    // den_I * x = alpha * a + beta * (b + c*w)
    QuadInt t = ctx.mul_int(x.num, I.den());
    if (!divides(x.den, t.a) || !divides(x.den, t.b))
        throw ValidationError("element is not in the lattice");
    t.a /= x.den;
    t.b /= x.den;
    if (!divides(I.c(), t.b))
        throw ValidationError("element is not in the lattice");
    Int beta = t.b / I.c();
    Int rem = t.a - beta * I.b();
    if (!divides(I.a(), rem))
        throw ValidationError("element is not in the lattice");
    return {rem / I.a(), beta};
}

// --- ResidueRing ------------------------------------------------------------

ResidueRing::ResidueRing(const FieldCtx& ctx, const FracIdeal& f, const Int& enum_cap)
    : ctx_(&ctx), f_(f)
{
    if (!f.is_integral() || f.is_zero())
        throw ValidationError("residue ring modulus must be a nonzero integral ideal");
    ha_ = f.a();
    hb_ = f.b();
    hc_ = f.c();
    size_ = ha_ * hc_;
    if (size_ > enum_cap)
        throw ValidationError("residue ring size " + to_string(size_) +
                              " exceeds enumeration cap " + to_string(enum_cap));
}

QuadInt ResidueRing::reduce(const QuadInt& x) const
{
    Int v = mod_floor(x.b, hc_);
    Int k = (x.b - v) / hc_;
    Int u = mod_floor(x.a - k * hb_, ha_);
    return {u, v};
}

QuadInt ResidueRing::reduce_elem(const KElem& x) const
{
    if (x.den == 1)
        return reduce(x.num);
    if (fact_.empty())
        fact_ = factor_ideal(*ctx_, f_);
    return residue_mod(*ctx_, x, f_, fact_);
}

QuadInt ResidueRing::add(const QuadInt& x, const QuadInt& y) const
{
    return reduce(ctx_->add(x, y));
}

QuadInt ResidueRing::mul(const QuadInt& x, const QuadInt& y) const
{
    return reduce(ctx_->mul(x, y));
}

bool ResidueRing::is_unit(const QuadInt& x) const
{
    if (x.is_zero())
        return size_ == 1;
    FracIdeal xi = FracIdeal::from_gens(*ctx_, {KElem{x, 1}});
    return FracIdeal::sum(*ctx_, xi, f_).is_one();
}

QuadInt ResidueRing::inv_unit(const QuadInt& x) const
{
    // Walk the cyclic orbit of x; its length divides the unit group order.
    QuadInt cur = reduce(x);
    if (cur == QuadInt{1, 0})
        return cur;
    for (Int i = 0; i < size_; ++i) {
        QuadInt nxt = mul(cur, x);
        if (nxt == QuadInt{1, 0})
            return cur;
        cur = nxt;
    }
    throw ValidationError("inv_unit: element is not a unit");
}

std::vector<QuadInt> ResidueRing::elements() const
{
    std::vector<QuadInt> out;
    for (Int v = 0; v < hc_; ++v)
        for (Int u = 0; u < ha_; ++u)
            out.push_back({u, v});
    return out;
}

const std::vector<QuadInt>& ResidueRing::units() const
{
    if (units_.empty()) {
        for (const auto& x : elements())
            if (is_unit(x))
                units_.push_back(x);
    }
    return units_;
}

std::vector<QuadInt> ResidueRing::solve_scalar(const Int& m, const QuadInt& target) const
{
    // Solve m*y = target + s*(ha,0) + k*(hb + hc*w): triangular in (y.b, y.a).
    std::vector<QuadInt> out;
    Int yb0, step_b;
    if (!solve_lin_cong(m, target.b, hc_, yb0, step_b))
        return out;
    Int g = hc_ / step_b;
    for (Int j = 0; j < g; ++j) {
        Int yb = yb0 + j * step_b;
        Int k = (m * yb - target.b) / hc_;
        Int ya0, step_a;
        if (!solve_lin_cong(m, target.a + k * hb_, ha_, ya0, step_a))
            continue;
        Int ga = ha_ / step_a;
        for (Int i = 0; i < ga; ++i)
            out.push_back(reduce({ya0 + i * step_a, yb}));
    }
    return out;
}

} // namespace cmll
