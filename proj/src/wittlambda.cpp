#include "wittlambda.hpp"

#include <algorithm>
#include <set>

namespace cmll {

WittParams make_witt_params(const FieldCtx& ctx, const QuadInt& pi, const Int& q, int len)
{
    if (len < 1 || len > 16)
        throw ValidationError("witt length out of range");
    WittParams par{ctx, pi, q, len, false};
    if (pi.b == 0 && abs(pi.a) == q) {
        if (!is_prime(q))
            throw ValidationError("pi is not prime");
        par.rational = true;
        return par;
    }
    if (ctx.norm(pi) != q)
        throw ValidationError("q must equal N(pi)");
    auto fact = factor_ideal(ctx, FracIdeal::principal(ctx, KElem{pi, 1}));
    if (fact.size() != 1 || fact[0].e != 1)
        throw ValidationError("pi does not generate a prime ideal");
    return par;
}

// --- MPoly --------------------------------------------------------------------

namespace {

void mp_insert(const FieldCtx& ctx, MPoly& f, const Mono& m, const KElem& c)
{
    if (c.is_zero())
        return;
    auto it = f.terms.find(m);
    if (it == f.terms.end()) {
        f.terms.emplace(m, c);
        return;
    }
    KElem s = ctx.k_add(it->second, c);
    if (s.is_zero())
        f.terms.erase(it);
    else
        it->second = s;
}

} // namespace

MPoly mp_const(const FieldCtx& ctx, int nvars, const KElem& c)
{
    MPoly f{nvars, {}};
    mp_insert(ctx, f, Mono(nvars, 0), c);
    return f;
}

MPoly mp_var(const FieldCtx& ctx, int nvars, int i)
{
    MPoly f{nvars, {}};
    Mono m(nvars, 0);
    m[i] = 1;
    mp_insert(ctx, f, m, ctx.make_elem(QuadInt{1, 0}, 1));
    return f;
}

MPoly mp_add(const FieldCtx& ctx, const MPoly& f, const MPoly& g)
{
    MPoly r = f;
    for (const auto& [m, c] : g.terms)
        mp_insert(ctx, r, m, c);
    return r;
}

MPoly mp_sub(const FieldCtx& ctx, const MPoly& f, const MPoly& g)
{
    MPoly r = f;
    for (const auto& [m, c] : g.terms)
        mp_insert(ctx, r, m, ctx.k_neg(c));
    return r;
}

MPoly mp_mul(const FieldCtx& ctx, const MPoly& f, const MPoly& g)
{
    MPoly r{f.nvars, {}};
    for (const auto& [mf, cf] : f.terms)
        for (const auto& [mg, cg] : g.terms) {
            Mono m(mf.size());
            for (size_t i = 0; i < m.size(); ++i)
                m[i] = mf[i] + mg[i];
            mp_insert(ctx, r, m, ctx.k_mul(cf, cg));
        }
    return r;
}

MPoly mp_pow(const FieldCtx& ctx, const MPoly& f, const Int& e)
{
    if (e < 0)
        throw ValidationError("mp_pow: negative exponent");
    MPoly r = mp_const(ctx, f.nvars, ctx.make_elem(QuadInt{1, 0}, 1));
    MPoly base = f;
    Int k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t()))
            r = mp_mul(ctx, r, base);
        base = mp_mul(ctx, base, base);
        k >>= 1;
    }
    return r;
}

MPoly mp_scale(const FieldCtx& ctx, const MPoly& f, const KElem& c)
{
    MPoly r{f.nvars, {}};
    for (const auto& [m, cf] : f.terms)
        mp_insert(ctx, r, m, ctx.k_mul(cf, c));
    return r;
}

bool mp_integral(const MPoly& f, bool rational_mode)
{
    for (const auto& [m, c] : f.terms) {
        if (c.den != 1)
            return false;
        if (rational_mode && c.num.b != 0)
            return false;
    }
    return true;
}

WittPolynomials witt_polynomials(const WittParams& par, int cap)
{
    if (par.len - 1 > cap)
        throw ValidationError("witt length exceeds the configured cap");
    const FieldCtx& ctx = par.ctx;
    const int n = par.len;
    const int nv = 2 * n;
    KElem piK = ctx.make_elem(par.pi, 1);
    KElem one = ctx.make_elem(QuadInt{1, 0}, 1);

    auto ghost = [&](int m, int offset) {
        MPoly g = mp_const(ctx, nv, ctx.make_elem(QuadInt{0, 0}, 1));
        KElem pik = one;
        for (int i = 0; i <= m; ++i) {
            Int e;
            mpz_pow_ui(e.get_mpz_t(), par.q.get_mpz_t(), m - i);
            MPoly t = mp_pow(ctx, mp_var(ctx, nv, offset + i), e);
            g = mp_add(ctx, g, mp_scale(ctx, t, pik));
            pik = ctx.k_mul(pik, piK);
        }
        return g;
    };

    WittPolynomials out{par, {}, {}};
    KElem pim = one; // pi^m
    for (int m = 0; m < n; ++m) {
        MPoly rhsS = mp_add(ctx, ghost(m, 0), ghost(m, n));
        MPoly rhsP = mp_mul(ctx, ghost(m, 0), ghost(m, n));
        KElem pii = one;
        for (int i = 0; i < m; ++i) {
            Int e;
            mpz_pow_ui(e.get_mpz_t(), par.q.get_mpz_t(), m - i);
            rhsS = mp_sub(ctx, rhsS, mp_scale(ctx, mp_pow(ctx, out.S[i], e), pii));
            rhsP = mp_sub(ctx, rhsP, mp_scale(ctx, mp_pow(ctx, out.P[i], e), pii));
            pii = ctx.k_mul(pii, piK);
        }
        KElem inv_pim = ctx.k_inv(pim);
        MPoly Sm = mp_scale(ctx, rhsS, inv_pim);
        MPoly Pm = mp_scale(ctx, rhsP, inv_pim);
        if (!mp_integral(Sm, par.rational) || !mp_integral(Pm, par.rational))
            throw InternalError("witt polynomial integrality failed at degree " +
                                std::to_string(m));
        out.S.push_back(std::move(Sm));
        out.P.push_back(std::move(Pm));
        pim = ctx.k_mul(pim, piK);
    }
    return out;
}

// --- Carrier --------------------------------------------------------------------

namespace {

PolyT poly_trim(PolyT p)
{
    while (!p.empty() && p.back().is_zero())
        p.pop_back();
    return p;
}

} // namespace

Carrier Carrier::integers(const FieldCtx& ctx)
{
    return Carrier(CarrierKind::ZZ, ctx);
}

Carrier Carrier::ok(const FieldCtx& ctx)
{
    return Carrier(CarrierKind::OK, ctx);
}

Carrier Carrier::ok_poly(const FieldCtx& ctx)
{
    return Carrier(CarrierKind::OKPolyT, ctx);
}

Carrier Carrier::ok_mod_pn(const FieldCtx& ctx, const QuadInt& pi, int N)
{
    Carrier c(CarrierKind::OKModPN, ctx);
    c.pi_ = pi;
    c.prec_ = N;
    c.modulus_ = FracIdeal::principal(ctx, KElem{pi, 1}).pow(ctx, N);
    return c;
}

QuadInt Carrier::reduce(const QuadInt& x) const
{
    if (kind_ != CarrierKind::OKModPN)
        return x;
    Int v = mod_floor(x.b, modulus_.c());
    Int k = (x.b - v) / modulus_.c();
    Int u = mod_floor(x.a - k * modulus_.b(), modulus_.a());
    return {u, v};
}

CElem Carrier::from_int(long v) const
{
    return from_quadint(QuadInt{v, 0});
}

CElem Carrier::from_quadint(const QuadInt& x) const
{
    if (kind_ == CarrierKind::OKPolyT)
        return poly_trim(PolyT{x});
    return reduce(x);
}

CElem Carrier::var_t() const
{
    if (kind_ != CarrierKind::OKPolyT)
        throw ValidationError("carrier has no variable T");
    return PolyT{QuadInt{0, 0}, QuadInt{1, 0}};
}

CElem Carrier::add(const CElem& x, const CElem& y) const
{
    if (kind_ == CarrierKind::OKPolyT) {
        const auto &p = std::get<PolyT>(x), &q = std::get<PolyT>(y);
        PolyT r(std::max(p.size(), q.size()), QuadInt{0, 0});
        for (size_t i = 0; i < r.size(); ++i) {
            if (i < p.size())
                r[i] = ctx_.add(r[i], p[i]);
            if (i < q.size())
                r[i] = ctx_.add(r[i], q[i]);
        }
        return poly_trim(std::move(r));
    }
    return reduce(ctx_.add(std::get<QuadInt>(x), std::get<QuadInt>(y)));
}

CElem Carrier::sub(const CElem& x, const CElem& y) const
{
    return add(x, neg(y));
}

CElem Carrier::neg(const CElem& x) const
{
    if (kind_ == CarrierKind::OKPolyT) {
        PolyT p = std::get<PolyT>(x);
        for (auto& c : p)
            c = ctx_.neg(c);
        return p;
    }
    return reduce(ctx_.neg(std::get<QuadInt>(x)));
}

CElem Carrier::mul(const CElem& x, const CElem& y) const
{
    if (kind_ == CarrierKind::OKPolyT) {
        const auto &p = std::get<PolyT>(x), &q = std::get<PolyT>(y);
        if (p.empty() || q.empty())
            return PolyT{};
        PolyT r(p.size() + q.size() - 1, QuadInt{0, 0});
        for (size_t i = 0; i < p.size(); ++i)
            for (size_t j = 0; j < q.size(); ++j)
                r[i + j] = ctx_.add(r[i + j], ctx_.mul(p[i], q[j]));
        return poly_trim(std::move(r));
    }
    return reduce(ctx_.mul(std::get<QuadInt>(x), std::get<QuadInt>(y)));
}

CElem Carrier::scalar_mul(const QuadInt& k, const CElem& x) const
{
    if (kind_ == CarrierKind::OKPolyT) {
        PolyT p = std::get<PolyT>(x);
        for (auto& c : p)
            c = ctx_.mul(k, c);
        return poly_trim(std::move(p));
    }
    return reduce(ctx_.mul(k, std::get<QuadInt>(x)));
}

CElem Carrier::pow(const CElem& x, const Int& e) const
{
    if (e < 0)
        throw ValidationError("carrier pow: negative exponent");
    CElem r = from_int(1), base = x;
    Int k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t()))
            r = mul(r, base);
        base = mul(base, base);
        k >>= 1;
    }
    return r;
}

bool Carrier::eq(const CElem& x, const CElem& y) const
{
    return is_zero(sub(x, y));
}

bool Carrier::is_zero(const CElem& x) const
{
    if (kind_ == CarrierKind::OKPolyT)
        return poly_trim(std::get<PolyT>(x)).empty();
    return reduce(std::get<QuadInt>(x)).is_zero();
}

bool Carrier::in_ideal(const CElem& x, const FracIdeal& J) const
{
    if (kind_ == CarrierKind::OKPolyT) {
        for (const auto& c : std::get<PolyT>(x))
            if (!J.contains_quadint(c))
                return false;
        return true;
    }
    if (kind_ == CarrierKind::OKModPN)
        throw ValidationError("ideal membership on a truncated carrier");
    return J.contains_quadint(std::get<QuadInt>(x));
}

CElem Carrier::psi(const FrobLift& lift, const CElem& x) const
{
    if (kind_ != CarrierKind::OKPolyT)
        return x; // the canonical lift on scalar carriers is the identity
    const PolyT& p = std::get<PolyT>(x);
    PolyT image;
    if (lift.t_image)
        image = *lift.t_image;
    else {
        Int n = lift.p.norm_int();
        image.assign(mpz_get_ui(n.get_mpz_t()) + 1, QuadInt{0, 0});
        image.back() = QuadInt{1, 0};
    }
    // substitute T -> image
    CElem acc = from_int(0);
    CElem pw = from_int(1);
    for (size_t i = 0; i < p.size(); ++i) {
        acc = add(acc, scalar_mul(p[i], pw));
        pw = mul(pw, CElem{image});
    }
    return acc;
}

CElem Carrier::div_pi(const CElem& x, const QuadInt& pi, const Int& q, bool rational) const
{
    auto div_quad = [&](const QuadInt& v) {
        if (rational) {
            if (!divides(pi.a, v.a) || !divides(pi.a, v.b))
                throw InternalError("exact division by pi failed (broken Frobenius lift)");
            return QuadInt{v.a / pi.a, v.b / pi.a};
        }
        QuadInt t = ctx_.mul(v, ctx_.conj(pi));
        if (!divides(q, t.a) || !divides(q, t.b))
            throw InternalError("exact division by pi failed (broken Frobenius lift)");
        return QuadInt{t.a / q, t.b / q};
    };
    if (kind_ == CarrierKind::OKPolyT) {
        PolyT p = std::get<PolyT>(x);
        for (auto& c : p)
            c = div_quad(c);
        return poly_trim(std::move(p));
    }
    return reduce(div_quad(std::get<QuadInt>(x)));
}

std::string Carrier::str(const CElem& x) const
{
    if (kind_ == CarrierKind::OKPolyT) {
        const auto& p = std::get<PolyT>(x);
        if (p.empty())
            return "0";
        std::string s;
        for (size_t i = 0; i < p.size(); ++i) {
            if (i)
                s += " + ";
            s += "(" + FieldCtx::format(p[i]) + ")T^" + std::to_string(i);
        }
        return s;
    }
    return FieldCtx::format(std::get<QuadInt>(x));
}

// --- ghost / witt vectors --------------------------------------------------------

GhostVector ghost_map(const Carrier& car, const WittVector& w)
{
    GhostVector g{w.par, {}};
    for (int m = 0; m < w.par.len; ++m) {
        CElem acc = car.from_int(0);
        QuadInt pik{1, 0};
        for (int i = 0; i <= m; ++i) {
            Int e;
            mpz_pow_ui(e.get_mpz_t(), w.par.q.get_mpz_t(), m - i);
            acc = car.add(acc, car.scalar_mul(pik, car.pow(w.coords[i], e)));
            pik = car.ctx().mul(pik, w.par.pi);
        }
        g.comps.push_back(acc);
    }
    return g;
}

CElem mp_eval(const Carrier& car, const MPoly& f, const std::vector<CElem>& vals)
{
    CElem acc = car.from_int(0);
    for (const auto& [m, c] : f.terms) {
        if (c.den != 1)
            throw InternalError("mp_eval: non-integral coefficient");
        CElem t = car.from_int(1);
        for (size_t i = 0; i < m.size(); ++i)
            if (m[i] != 0)
                t = car.mul(t, car.pow(vals[i], Int(m[i])));
        acc = car.add(acc, car.scalar_mul(c.num, t));
    }
    return acc;
}

namespace {

WittVector witt_binop(const Carrier& car, const WittPolynomials& wp, const WittVector& x,
                      const WittVector& y, bool add)
{
    if (x.par.len != y.par.len || x.par.pi != y.par.pi || x.par.q != y.par.q ||
        !(x.par.ctx == y.par.ctx) || x.par.len != wp.par.len)
        throw ValidationError("mismatched witt parameters");
    std::vector<CElem> vals;
    vals.insert(vals.end(), x.coords.begin(), x.coords.end());
    vals.insert(vals.end(), y.coords.begin(), y.coords.end());
    WittVector r{x.par, {}};
    for (int m = 0; m < x.par.len; ++m)
        r.coords.push_back(mp_eval(car, add ? wp.S[m] : wp.P[m], vals));
    return r;
}

} // namespace

WittVector witt_add(const Carrier& car, const WittPolynomials& wp, const WittVector& x,
                    const WittVector& y)
{
    return witt_binop(car, wp, x, y, true);
}

WittVector witt_mul(const Carrier& car, const WittPolynomials& wp, const WittVector& x,
                    const WittVector& y)
{
    return witt_binop(car, wp, x, y, false);
}

// --- delta rings -------------------------------------------------------------------

DeltaRing make_delta_ring(const Carrier& car, const WittParams& par, std::optional<PolyT> t_image)
{
    FracIdeal p = par.rational ? FracIdeal::from_int(par.ctx, par.pi.a)
                               : FracIdeal::principal(par.ctx, KElem{par.pi, 1});
    return DeltaRing{car, par, FrobLift{p, std::move(t_image)}};
}

CElem delta(const DeltaRing& R, const CElem& a)
{
    CElem num = R.carrier.sub(R.carrier.psi(R.lift, a), R.carrier.pow(a, R.par.q));
    return R.carrier.div_pi(num, R.par.pi, R.par.q, R.par.rational);
}

CElem psi_from_delta(const DeltaRing& R, const CElem& a)
{
    return R.carrier.add(R.carrier.pow(a, R.par.q),
                         R.carrier.scalar_mul(R.par.pi, delta(R, a)));
}

LambdaReport verify_lambda(const Carrier& car, const std::vector<FrobLift>& lifts,
                           const std::vector<CElem>& samples)
{
    LambdaReport rep;
    for (size_t i = 0; i < lifts.size(); ++i)
        for (size_t j = i + 1; j < lifts.size(); ++j)
            for (const auto& a : samples) {
                CElem xy = car.psi(lifts[i], car.psi(lifts[j], a));
                CElem yx = car.psi(lifts[j], car.psi(lifts[i], a));
                if (!car.eq(xy, yx)) {
                    rep.commutation_pass = false;
                    rep.failures.push_back("lifts at " + lifts[i].p.str() + " and " +
                                           lifts[j].p.str() + " do not commute");
                }
            }
    for (const auto& lift : lifts)
        for (const auto& a : samples) {
            CElem diff = car.sub(car.psi(lift, a), car.pow(a, lift.p.norm_int()));
            if (!car.in_ideal(diff, lift.p)) {
                rep.congruence_pass = false;
                rep.failures.push_back("Frobenius congruence fails at " + lift.p.str() +
                                       " on " + car.str(a));
            }
        }
    return rep;
}

bool dwork_membership(const Carrier& car, const GhostVector& g, const FrobLift& lift)
{
    if (!car.flat())
        throw ValidationError("dwork membership requires a flat carrier");
    for (int m = 0; m + 1 < g.par.len; ++m) {
        CElem diff = car.sub(car.psi(lift, g.comps[m]), g.comps[m + 1]);
        if (!car.in_ideal(diff, lift.p.pow(car.ctx(), m + 1)))
            return false;
    }
    return true;
}

// --- coprime index factorization ------------------------------------------------------

std::vector<FracIdeal> ideal_divisors(const FieldCtx& ctx, const FracIdeal& a)
{
    if (!a.is_integral())
        throw ValidationError("divisors of a non-integral ideal");
    auto fact = factor_ideal(ctx, a);
    std::vector<FracIdeal> out{FracIdeal::one(ctx)};
    for (const auto& pp : fact) {
        size_t sz = out.size();
        FracIdeal pk = FracIdeal::one(ctx);
        for (int k = 1; k <= pp.e; ++k) {
            pk = FracIdeal::mul(ctx, pk, pp.p);
            for (size_t i = 0; i < sz; ++i)
                out.push_back(FracIdeal::mul(ctx, out[i], pk));
        }
    }
    std::sort(out.begin(), out.end(), [](const FracIdeal& x, const FracIdeal& y) {
        Int nx = x.norm_int(), ny = y.norm_int();
        if (nx != ny)
            return nx < ny;
        return x < y;
    });
    return out;
}

bool indexed_dwork(const Carrier& car, const FieldCtx& ctx, const IndexedGhost& g)
{
    if (!car.flat())
        throw ValidationError("dwork membership requires a flat carrier");
    if (car.kind() == CarrierKind::OKPolyT)
        throw ValidationError("indexed dwork uses scalar carriers");
    auto fact = factor_ideal(ctx, g.modulus);
    auto find = [&](const FracIdeal& e) -> long {
        for (size_t i = 0; i < g.index.size(); ++i)
            if (g.index[i] == e)
                return static_cast<long>(i);
        return -1;
    };
    for (size_t i = 0; i < g.index.size(); ++i) {
        for (const auto& pp : fact) {
            FracIdeal ep = FracIdeal::mul(ctx, g.index[i], pp.p);
            long j = find(ep);
            if (j < 0)
                continue;
            int v = valuation(ctx, g.index[i], pp.p);
            FrobLift lift{pp.p, std::nullopt};
            CElem diff = car.sub(car.psi(lift, g.comps[i]), g.comps[j]);
            if (!car.in_ideal(diff, pp.p.pow(ctx, v + 1)))
                return false;
        }
    }
    return true;
}

CheckReport coprime_factorization_check(const FieldCtx& ctx, const FracIdeal& a,
                                        const FracIdeal& b, const Carrier& car, int samples)
{
    CheckReport rep;
    if (!a.is_integral() || !b.is_integral())
        throw ValidationError("coprime factorization requires integral ideals");
    if (!is_coprime(ctx, a, b) && !(a.is_one() || b.is_one()))
        throw ValidationError("ideals are not coprime");

    FracIdeal ab = FracIdeal::mul(ctx, a, b);
    auto da = ideal_divisors(ctx, a);
    auto db = ideal_divisors(ctx, b);
    auto dab = ideal_divisors(ctx, ab);

    // index bijection divisors(ab) = divisors(a) x divisors(b)
    if (da.size() * db.size() != dab.size())
        rep.fail("divisor counts do not multiply");
    std::set<FracIdeal> seen;
    for (const auto& x : da)
        for (const auto& y : db) {
            FracIdeal p = FracIdeal::mul(ctx, x, y);
            if (!seen.insert(p).second)
                rep.fail("divisor product collision at " + p.str());
            if (std::find(dab.begin(), dab.end(), p) == dab.end())
                rep.fail("product is not a divisor of ab: " + p.str());
        }

    // Dwork predicate factors through the bijection on sample families.
    auto slice_dwork = [&](const FracIdeal& modulus, const std::vector<FracIdeal>& index,
                           const std::vector<CElem>& comps) {
        IndexedGhost s{modulus, index, comps};
        return indexed_dwork(car, ctx, s);
    };
    for (int t = 0; t < samples; ++t) {
        QuadInt x{2 + t, (t % 3) - 1};
        // base family g_e = x^(Ne), plus a perturbation for odd t
        IndexedGhost full{ab, dab, {}};
        std::map<std::string, CElem> by_str;
        for (const auto& e : dab) {
            CElem v = car.pow(car.from_quadint(x), e.norm_int());
            by_str[e.str()] = v;
        }
        if (t % 2 == 1 && dab.size() > 1)
            by_str[dab.back().str()] =
                car.add(by_str[dab.back().str()], car.from_int(1));
        for (const auto& e : dab)
            full.comps.push_back(by_str[e.str()]);
        bool full_ok = indexed_dwork(car, ctx, full);

        bool factored_ok = true;
        // slices over a with fixed divisor of b
        for (const auto& y : db) {
            std::vector<CElem> comps;
            for (const auto& e : da)
                comps.push_back(by_str[FracIdeal::mul(ctx, e, y).str()]);
            if (!slice_dwork(a, da, comps))
                factored_ok = false;
        }
        // slices over b with fixed divisor of a
        for (const auto& e : da) {
            std::vector<CElem> comps;
            for (const auto& y : db)
                comps.push_back(by_str[FracIdeal::mul(ctx, e, y).str()]);
            if (!slice_dwork(b, db, comps))
                factored_ok = false;
        }
        ++rep.checked;
        if (full_ok != factored_ok)
            rep.fail("dwork predicate does not factor on sample " + std::to_string(t));
        if (t % 2 == 0 && !full_ok)
            rep.fail("base sample family unexpectedly fails dwork");
    }
    return rep;
}

} // namespace cmll
