#include "jinv.hpp"

#include <cmath>

namespace cmll {

namespace {

Rat elem_re(const FieldCtx& ctx, const QuadInt& num, const Int& den)
{
    Rat r;
    if (ctx.omega_kind() == OmegaKind::SQRT)
        r = Rat(num.a, den);
    else
        r = Rat(2 * num.a + num.b, 2 * den);
    r.canonicalize();
    return r;
}

Rat elem_im_coeff(const FieldCtx& ctx, const QuadInt& num, const Int& den)
{
    // Im = coeff * sqrt(d)
    Rat r;
    if (ctx.omega_kind() == OmegaKind::SQRT)
        r = Rat(num.b, den);
    else
        r = Rat(num.b, 2 * den);
    r.canonicalize();
    return r;
}

} // namespace

TauData tau_reduce(const FieldCtx& ctx, const FracIdeal& lattice)
{
    if (lattice.is_zero())
        throw ValidationError("tau of the zero lattice");
    auto [e1, e2] = lattice.basis(ctx);
    KElem tau = ctx.k_div(e2, e1);
    if (tau.num.b == 0)
        throw InternalError("degenerate lattice basis");
    if (tau.num.b < 0)
        tau = ctx.k_inv(tau); // flip to the upper half plane
    if (tau.num.b < 0)
        throw InternalError("tau is not in the upper half plane");

    auto re = [&] { return elem_re(ctx, tau.num, tau.den); };
    auto norm = [&] { return ctx.k_norm(tau); };
    for (int guard = 0; guard < 4096; ++guard) {
        // translate Re into [-1/2, 1/2)
        Rat r = re();
        Rat shifted = r + Rat(1, 2);
        Int t;
        mpz_fdiv_q(t.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
        if (t != 0)
            tau = ctx.k_sub(tau, ctx.make_elem(QuadInt{t, 0}, 1));
        Rat n = norm();
        if (n > 1)
            return {tau.num, tau.den, re(), elem_im_coeff(ctx, tau.num, tau.den)};
        if (n == 1 && re() <= 0)
            return {tau.num, tau.den, re(), elem_im_coeff(ctx, tau.num, tau.den)};
        tau = ctx.k_neg(ctx.k_inv(tau));
    }
    throw InternalError("tau reduction did not converge");
}

namespace {

void set_rat(mpfr_ptr x, const Rat& r)
{
    mpfr_set_q(x, r.get_mpq_t(), MPFR_RNDN);
}

void cmul(BigComplex& r, const BigComplex& a, const BigComplex& b, mpfr_prec_t prec)
{
    BigFloat t1(prec), t2(prec), re(prec), im(prec);
    mpfr_mul(t1.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    mpfr_sub(re.get(), t1.get(), t2.get(), MPFR_RNDN);
    mpfr_mul(t1.get(), a.re.get(), b.im.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), a.im.get(), b.re.get(), MPFR_RNDN);
    mpfr_add(im.get(), t1.get(), t2.get(), MPFR_RNDN);
    r.re = re;
    r.im = im;
}

void cdiv(BigComplex& r, const BigComplex& a, const BigComplex& b, mpfr_prec_t prec)
{
    BigFloat n(prec), t1(prec), t2(prec), re(prec), im(prec);
    mpfr_mul(t1.get(), b.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), b.im.get(), b.im.get(), MPFR_RNDN);
    mpfr_add(n.get(), t1.get(), t2.get(), MPFR_RNDN);
    mpfr_mul(t1.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    mpfr_add(re.get(), t1.get(), t2.get(), MPFR_RNDN);
    mpfr_div(re.get(), re.get(), n.get(), MPFR_RNDN);
    mpfr_mul(t1.get(), a.im.get(), b.re.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), a.re.get(), b.im.get(), MPFR_RNDN);
    mpfr_sub(im.get(), t1.get(), t2.get(), MPFR_RNDN);
    mpfr_div(im.get(), im.get(), n.get(), MPFR_RNDN);
    r.re = re;
    r.im = im;
}

} // namespace

JValue j_eval(const FieldCtx& ctx, const TauData& tau, long bits)
{
    if (bits < 64)
        throw ValidationError("precision must be at least 64 bits");
    const mpfr_prec_t prec = bits + 96;
    (void)ctx;

    // q = exp(2 pi i tau): |q| = exp(-2 pi y), arg = 2 pi x
    BigFloat pi(prec), y(prec), x(prec), t(prec), absq(prec), argq(prec);
    mpfr_const_pi(pi.get(), MPFR_RNDN);
    set_rat(t.get(), tau.im_coeff);
    BigFloat sd(prec);
    mpfr_set_z(sd.get(), ctx.d().get_mpz_t(), MPFR_RNDN);
    mpfr_sqrt(sd.get(), sd.get(), MPFR_RNDN);
    mpfr_mul(y.get(), t.get(), sd.get(), MPFR_RNDN);
    set_rat(x.get(), tau.re);

    mpfr_mul(absq.get(), pi.get(), y.get(), MPFR_RNDN);
    mpfr_mul_ui(absq.get(), absq.get(), 2, MPFR_RNDN);
    mpfr_neg(absq.get(), absq.get(), MPFR_RNDN);
    mpfr_exp(absq.get(), absq.get(), MPFR_RNDN);
    mpfr_mul(argq.get(), pi.get(), x.get(), MPFR_RNDN);
    mpfr_mul_ui(argq.get(), argq.get(), 2, MPFR_RNDN);

    // |q| <= exp(-pi sqrt(3)) ~ 0.00433 in the fundamental domain
    double qabs = mpfr_get_d(absq.get(), MPFR_RNDN);
    if (!(qabs < 0.005))
        throw InternalError("tau is not reduced: |q| too large");

    BigComplex q(prec);
    mpfr_cos(q.re.get(), argq.get(), MPFR_RNDN);
    mpfr_sin(q.im.get(), argq.get(), MPFR_RNDN);
    mpfr_mul(q.re.get(), q.re.get(), absq.get(), MPFR_RNDN);
    mpfr_mul(q.im.get(), q.im.get(), absq.get(), MPFR_RNDN);

    // number of terms: n^4 |q|^n < 2^-(bits+64) for all n > M
    long M = 8;
    while (true) {
        double lhs = 4 * std::log(static_cast<double>(M + 1)) +
                     (M + 1) * std::log(qabs);
        if (lhs < -(static_cast<double>(bits) + 64) * 0.6931471805599453 && M >= 16)
            break;
        ++M;
        if (M > 100000)
            throw InternalError("q-expansion truncation bound not reached");
    }

    // E4 = 1 + 240 sum sigma3(n) q^n ; Delta = q prod (1-q^n)^24
    BigComplex e4(prec), prod(prec), qn(prec), term(prec), tmp(prec);
    mpfr_set_ui(e4.re.get(), 1, MPFR_RNDN);
    mpfr_set_ui(prod.re.get(), 1, MPFR_RNDN);
    mpfr_set_ui(qn.re.get(), 1, MPFR_RNDN);
    for (long n = 1; n <= M; ++n) {
        cmul(qn, qn, q, prec);
        // sigma3(n)
        Int s3 = 0;
        for (long d = 1; d <= n; ++d)
            if (n % d == 0) {
                Int dd(d);
                s3 += dd * dd * dd;
            }
        BigFloat c(prec);
        mpfr_set_z(c.get(), s3.get_mpz_t(), MPFR_RNDN);
        mpfr_mul_ui(c.get(), c.get(), 240, MPFR_RNDN);
        term = qn;
        mpfr_mul(term.re.get(), term.re.get(), c.get(), MPFR_RNDN);
        mpfr_mul(term.im.get(), term.im.get(), c.get(), MPFR_RNDN);
        mpfr_add(e4.re.get(), e4.re.get(), term.re.get(), MPFR_RNDN);
        mpfr_add(e4.im.get(), e4.im.get(), term.im.get(), MPFR_RNDN);
        // prod *= (1 - q^n)^24
        BigComplex f(prec);
        mpfr_ui_sub(f.re.get(), 1, qn.re.get(), MPFR_RNDN);
        mpfr_neg(f.im.get(), qn.im.get(), MPFR_RNDN);
        BigComplex f24(prec);
        mpfr_set_ui(f24.re.get(), 1, MPFR_RNDN);
        for (int k = 0; k < 24; ++k)
            cmul(f24, f24, f, prec);
        cmul(prod, prod, f24, prec);
    }
    BigComplex delta(prec);
    cmul(delta, prod, q, prec);

    JValue out(prec);
    BigComplex e43(prec);
    mpfr_set_ui(e43.re.get(), 1, MPFR_RNDN);
    cmul(e43, e4, e4, prec);
    cmul(e43, e43, e4, prec);
    cdiv(out.j, e43, delta, prec);
    (void)tmp;

    // Rigorous error budget (coarse but valid):
    //  - E4 tail: 240 * sum_{n>M} sigma3(n)|q|^n <= 240*1.03*(M+1)^4 |q|^(M+1)
    //    < 2^-(bits+54) by the choice of M;
    //  - Delta relative tail: |sum_{n>M} 24 log(1-q^n)| <= 25|q|^(M+1)/(1-|q|)
    //    < 2^-(bits+58);
    //  - mpfr roundoff at precision bits+96 across O(M) multiplications:
    //    relative error < M * 2^-(bits+90) < 2^-(bits+60).
    // |j| < 2^48 at desk-scale discriminants, so the absolute error is below
    // 2^-(bits+4). Report 2^-bits as a safe outer bound.
    mpfr_exp_t e0;
    char* s = mpfr_get_str(nullptr, &e0, 10, 8, absq.get(), MPFR_RNDN);
    mpfr_free_str(s);
    out.error_bound = "2^-" + std::to_string(bits);
    return out;
}

JValue j_invariant(const FieldCtx& ctx, const FracIdeal& lattice, long bits)
{
    return j_eval(ctx, tau_reduce(ctx, lattice), bits);
}

HilbertData hilbert_class_polynomial(const FieldCtx& ctx, long bits,
                                     const std::vector<FracIdeal>& class_reps)
{
    const mpfr_prec_t prec = bits + 96;
    size_t h = class_reps.size();
    std::vector<BigComplex> roots;
    roots.reserve(h);
    for (const auto& rep : class_reps)
        roots.push_back(j_invariant(ctx, rep, bits).j);

    // multiply (X - j_i)
    std::vector<BigComplex> coeff;
    coeff.emplace_back(prec);
    mpfr_set_ui(coeff[0].re.get(), 1, MPFR_RNDN);
    for (const auto& r : roots) {
        std::vector<BigComplex> next;
        for (size_t i = 0; i <= coeff.size(); ++i)
            next.emplace_back(prec);
        for (size_t i = 0; i < coeff.size(); ++i) {
            // next[i+1] += coeff[i]; next[i] -= coeff[i]*r
            mpfr_add(next[i + 1].re.get(), next[i + 1].re.get(), coeff[i].re.get(), MPFR_RNDN);
            mpfr_add(next[i + 1].im.get(), next[i + 1].im.get(), coeff[i].im.get(), MPFR_RNDN);
            BigComplex t(prec);
            cmul(t, coeff[i], r, prec);
            mpfr_sub(next[i].re.get(), next[i].re.get(), t.re.get(), MPFR_RNDN);
            mpfr_sub(next[i].im.get(), next[i].im.get(), t.im.get(), MPFR_RNDN);
        }
        coeff = std::move(next);
    }

    HilbertData out;
    out.bits = bits;
    BigFloat resid(prec), tmp(prec);
    mpfr_set_zero(resid.get(), 1);
    for (size_t i = 0; i < coeff.size(); ++i) {
        Int c;
        mpfr_get_z(c.get_mpz_t(), coeff[i].re.get(), MPFR_RNDN);
        mpfr_set_z(tmp.get(), c.get_mpz_t(), MPFR_RNDN);
        mpfr_sub(tmp.get(), coeff[i].re.get(), tmp.get(), MPFR_RNDN);
        mpfr_abs(tmp.get(), tmp.get(), MPFR_RNDN);
        if (mpfr_cmp(tmp.get(), resid.get()) > 0)
            resid = tmp;
        mpfr_abs(tmp.get(), coeff[i].im.get(), MPFR_RNDN);
        if (mpfr_cmp(tmp.get(), resid.get()) > 0)
            resid = tmp;
        out.coeffs.push_back(c);
    }
    BigFloat bound(prec);
    mpfr_set_d(bound.get(), 1e-10, MPFR_RNDN);
    if (mpfr_cmp(resid.get(), bound.get()) >= 0)
        throw ValidationError("rounding residual too large; retry with at least " +
                              std::to_string(2 * bits) + " bits");
    char buf[64];
    mpfr_snprintf(buf, sizeof buf, "%.3Re", resid.get());
    out.residual = buf;
    if (out.coeffs.size() != h + 1 || out.coeffs.back() != 1)
        throw InternalError("hilbert polynomial is not monic of degree h");
    return out;
}

std::string j_decimal(const JValue& v, int digits)
{
    char buf[256];
    mpfr_snprintf(buf, sizeof buf, "%.*Rf", digits, v.j.re.get());
    return buf;
}

} // namespace cmll
