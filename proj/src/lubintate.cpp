#include "lubintate.hpp"

#include <algorithm>

namespace cmll {

PadicRing::PadicRing(const FieldCtx& ctx, const QuadInt& pi, const Int& q, int prec)
    : ctx_(ctx), pi_(pi), q_(q), prec_(prec)
{
    if (prec < 1 || prec > 4096)
        throw ValidationError("padic precision out of range");
    rational_ = (pi.b == 0 && abs(pi.a) == q);
    if (rational_) {
        if (!is_prime(q))
            throw ValidationError("pi is not prime");
    } else {
        if (ctx_.norm(pi) != q)
            throw ValidationError("q must equal N(pi)");
        auto fact = factor_ideal(ctx_, FracIdeal::principal(ctx_, KElem{pi, 1}));
        if (fact.size() != 1 || fact[0].e != 1)
            throw ValidationError("pi does not generate a prime ideal");
    }
    p_ = rational_ ? FracIdeal::from_int(ctx_, pi.a) : FracIdeal::principal(ctx_, KElem{pi, 1});
    FracIdeal m = p_.pow(ctx_, prec_);
    A_ = m.a();
    B_ = m.b();
    C_ = m.c();
}

QuadInt PadicRing::reduce(const QuadInt& x) const
{
    if (rational_)
        return {mod_floor(x.a, A_), mod_floor(x.b, A_)};
    Int v = mod_floor(x.b, C_);
    Int k = (x.b - v) / C_;
    Int u = mod_floor(x.a - k * B_, A_);
    return {u, v};
}

QuadInt PadicRing::div_pi_raw(const QuadInt& x) const
{
    if (rational_)
        return {x.a / pi_.a, x.b / pi_.a};
    QuadInt t = ctx_.mul(x, ctx_.conj(pi_));
    return {t.a / q_, t.b / q_};
}

QuadInt PadicRing::pow(const QuadInt& x, const Int& e) const
{
    if (e < 0)
        throw ValidationError("padic pow: negative exponent");
    QuadInt r{1, 0}, base = reduce(x);
    Int k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t()))
            r = mul(r, base);
        base = mul(base, base);
        k >>= 1;
    }
    return r;
}

int PadicRing::val(const QuadInt& x) const
{
    QuadInt r = reduce(x);
    if (r.is_zero())
        return prec_;
    int v = 0;
    QuadInt cur = r;
    while (v < prec_) {
        // cur in p?
        bool in_p;
        if (rational_)
            in_p = divides(pi_.a, cur.a) && divides(pi_.a, cur.b);
        else
            in_p = p_.contains_quadint(cur);
        if (!in_p)
            break;
        cur = div_pi_raw(cur);
        ++v;
    }
    return v;
}

QuadInt PadicRing::inv_unit(const QuadInt& x) const
{
    if (!is_unit(x))
        throw ValidationError("inv_unit: not a unit");
    // |(O/p^N)^x| = q^(N-1) (q-1)
    Int order = q_ - 1;
    for (int i = 1; i < prec_; ++i)
        order *= q_;
    return pow(x, order - 1);
}

QuadInt PadicRing::div_pi(const QuadInt& x) const
{
    QuadInt r = reduce(x);
    bool in_p = rational_ ? (divides(pi_.a, r.a) && divides(pi_.a, r.b)) : p_.contains_quadint(r);
    if (!in_p)
        throw InternalError("exact division by pi failed");
    return reduce(div_pi_raw(r));
}

QuadInt PadicRing::teichmuller(const QuadInt& r) const
{
    QuadInt z = reduce(r);
    for (int i = 0; i <= prec_ + 2; ++i) {
        QuadInt nz = pow(z, q_);
        if (nz == z)
            return z;
        z = nz;
    }
    throw InternalError("teichmuller iteration did not converge");
}

// --- series ----------------------------------------------------------------

PSeries ps_make(const PadicRing& R, std::vector<QuadInt> coeffs, int cutoff)
{
    PSeries f;
    f.c.assign(cutoff + 1, QuadInt{0, 0});
    for (size_t i = 0; i < coeffs.size() && i <= static_cast<size_t>(cutoff); ++i)
        f.c[i] = R.reduce(coeffs[i]);
    return f;
}

PSeries ps_zero(const PadicRing& R, int cutoff)
{
    (void)R;
    PSeries f;
    f.c.assign(cutoff + 1, QuadInt{0, 0});
    return f;
}

PSeries ps_add(const PadicRing& R, const PSeries& f, const PSeries& g)
{
    PSeries r = ps_zero(R, std::max(f.degree(), g.degree()));
    for (size_t i = 0; i < r.c.size(); ++i) {
        QuadInt s{0, 0};
        if (i < f.c.size())
            s = R.add(s, f.c[i]);
        if (i < g.c.size())
            s = R.add(s, g.c[i]);
        r.c[i] = s;
    }
    return r;
}

PSeries ps_sub(const PadicRing& R, const PSeries& f, const PSeries& g)
{
    PSeries ng = g;
    for (auto& x : ng.c)
        x = R.neg(x);
    return ps_add(R, f, ng);
}

PSeries ps_mul(const PadicRing& R, const PSeries& f, const PSeries& g, int cutoff)
{
    PSeries r = ps_zero(R, cutoff);
    for (int i = 0; i <= f.degree(); ++i) {
        if (R.is_zero(f.c[i]))
            continue;
        for (int j = 0; j <= g.degree() && i + j <= cutoff; ++j) {
            if (R.is_zero(g.c[j]))
                continue;
            r.c[i + j] = R.add(r.c[i + j], R.mul(f.c[i], g.c[j]));
        }
    }
    return r;
}

PSeries ps_scale(const PadicRing& R, const QuadInt& k, const PSeries& f)
{
    PSeries r = f;
    for (auto& x : r.c)
        x = R.mul(k, x);
    return r;
}

PSeries ps_compose(const PadicRing& R, const PSeries& f, const PSeries& g, int cutoff)
{
    if (g.c.empty() || !R.is_zero(g.c[0]))
        throw ValidationError("series composition requires a pointed inner series");
    // Horner: f(g) = f_0 + g*(f_1 + g*(f_2 + ...)).
    PSeries r = ps_zero(R, cutoff);
    for (int i = f.degree(); i >= 1; --i) {
        r = ps_mul(R, r, g, cutoff);
        r.c[0] = R.add(r.c[0], f.c[i]);
    }
    r = ps_mul(R, r, g, cutoff);
    if (!f.c.empty())
        r.c[0] = R.add(r.c[0], f.c[0]);
    return r;
}

bool ps_eq(const PadicRing& R, const PSeries& f, const PSeries& g)
{
    int d = std::max(f.degree(), g.degree());
    for (int i = 0; i <= d; ++i) {
        QuadInt a = i <= f.degree() ? f.c[i] : QuadInt{0, 0};
        QuadInt b = i <= g.degree() ? g.c[i] : QuadInt{0, 0};
        if (R.reduce(a) != R.reduce(b))
            return false;
    }
    return true;
}

PSeries ps_truncate(const PadicRing& R, const PSeries& f, int cutoff)
{
    PSeries r = ps_zero(R, cutoff);
    for (int i = 0; i <= cutoff && i <= f.degree(); ++i)
        r.c[i] = R.reduce(f.c[i]);
    return r;
}

// --- truncated multivariate polynomials --------------------------------------

namespace {

int tdeg(const std::vector<int>& m)
{
    int s = 0;
    for (int e : m)
        s += e;
    return s;
}

void tp_insert(const PadicRing& R, TruncPoly& f, const std::vector<int>& m, const QuadInt& c)
{
    if (tdeg(m) > f.cutoff)
        return;
    QuadInt rc = R.reduce(c);
    if (rc.is_zero())
        return;
    auto it = f.t.find(m);
    if (it == f.t.end()) {
        f.t.emplace(m, rc);
        return;
    }
    QuadInt s = R.add(it->second, rc);
    if (s.is_zero())
        f.t.erase(it);
    else
        it->second = s;
}

} // namespace

TruncPoly tp_zero(const PadicRing& R, int nvars, int cutoff)
{
    (void)R;
    return TruncPoly{nvars, cutoff, {}};
}

TruncPoly tp_var(const PadicRing& R, int nvars, int cutoff, int i)
{
    TruncPoly f = tp_zero(R, nvars, cutoff);
    std::vector<int> m(nvars, 0);
    m[i] = 1;
    tp_insert(R, f, m, QuadInt{1, 0});
    return f;
}

TruncPoly tp_add(const PadicRing& R, const TruncPoly& f, const TruncPoly& g)
{
    TruncPoly r = f;
    for (const auto& [m, c] : g.t)
        tp_insert(R, r, m, c);
    return r;
}

TruncPoly tp_sub(const PadicRing& R, const TruncPoly& f, const TruncPoly& g)
{
    TruncPoly r = f;
    for (const auto& [m, c] : g.t)
        tp_insert(R, r, m, R.neg(c));
    return r;
}

TruncPoly tp_mul(const PadicRing& R, const TruncPoly& f, const TruncPoly& g)
{
    TruncPoly r = tp_zero(R, f.nvars, std::min(f.cutoff, g.cutoff));
    for (const auto& [mf, cf] : f.t)
        for (const auto& [mg, cg] : g.t) {
            std::vector<int> m(mf.size());
            int d = 0;
            for (size_t i = 0; i < m.size(); ++i) {
                m[i] = mf[i] + mg[i];
                d += m[i];
            }
            if (d > r.cutoff)
                continue;
            tp_insert(R, r, m, R.mul(cf, cg));
        }
    return r;
}

TruncPoly tp_scale(const PadicRing& R, const QuadInt& k, const TruncPoly& f)
{
    TruncPoly r = tp_zero(R, f.nvars, f.cutoff);
    for (const auto& [m, c] : f.t)
        tp_insert(R, r, m, R.mul(k, c));
    return r;
}

bool tp_eq(const PadicRing& R, const TruncPoly& f, const TruncPoly& g)
{
    // Reduce both sides into R before comparing (operands may carry a higher
    // working precision).
    auto coeff = [&](const TruncPoly& h, const std::vector<int>& m) {
        auto it = h.t.find(m);
        return it == h.t.end() ? QuadInt{0, 0} : R.reduce(it->second);
    };
    for (const auto& [m, c] : f.t)
        if (coeff(g, m) != R.reduce(c))
            return false;
    for (const auto& [m, c] : g.t)
        if (coeff(f, m) != R.reduce(c))
            return false;
    return true;
}

TruncPoly tp_subst(const PadicRing& R, const TruncPoly& f, const std::vector<TruncPoly>& vals)
{
    if (vals.empty())
        throw ValidationError("tp_subst: no values");
    int nv = vals[0].nvars;
    int cut = vals[0].cutoff;
    // Cache powers of each substituted value.
    std::vector<std::vector<TruncPoly>> pows(vals.size());
    for (size_t i = 0; i < vals.size(); ++i)
        pows[i].push_back(tp_zero(R, nv, cut)); // placeholder for exponent 0
    auto power = [&](size_t i, int e) -> const TruncPoly& {
        auto& tab = pows[i];
        while (static_cast<int>(tab.size()) <= e) {
            if (tab.size() == 1)
                tab.push_back(vals[i]);
            else
                tab.push_back(tp_mul(R, tab.back(), vals[i]));
        }
        return tab[e];
    };
    TruncPoly r = tp_zero(R, nv, cut);
    for (const auto& [m, c] : f.t) {
        TruncPoly term = tp_zero(R, nv, cut);
        std::vector<int> zero(nv, 0);
        tp_insert(R, term, zero, c);
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0)
                continue;
            term = tp_mul(R, term, power(i, m[i]));
        }
        r = tp_add(R, r, term);
    }
    return r;
}

TruncPoly tp_from_series(const PadicRing& R, const PSeries& s, int nvars, int cutoff, int i)
{
    TruncPoly f = tp_zero(R, nvars, cutoff);
    for (int d = 0; d <= s.degree() && d <= cutoff; ++d) {
        std::vector<int> m(nvars, 0);
        m[i] = d;
        tp_insert(R, f, m, s.c[d]);
    }
    return f;
}

PSeries tp_to_series(const PadicRing& R, const TruncPoly& f, int cutoff)
{
    PSeries s = ps_zero(R, cutoff);
    for (const auto& [m, c] : f.t) {
        int var = -1, deg = 0;
        for (size_t i = 0; i < m.size(); ++i)
            if (m[i] != 0) {
                if (var != -1 && var != static_cast<int>(i))
                    throw InternalError("tp_to_series: polynomial is not univariate");
                var = static_cast<int>(i);
                deg = m[i];
            }
        if (deg <= cutoff)
            s.c[deg] = R.add(s.c[deg], c);
    }
    return s;
}

// --- Lubin-Tate -----------------------------------------------------------------

std::vector<QuadInt> LubinTateModule::canonical_f(const FieldCtx& ctx, const QuadInt& pi,
                                                  const Int& q)
{
    (void)ctx;
    std::vector<QuadInt> f(mpz_get_ui(q.get_mpz_t()) + 1, QuadInt{0, 0});
    f[1] = pi;
    f.back() = QuadInt{1, 0};
    return f;
}

std::vector<QuadInt> LubinTateModule::multiplicative_f(const FieldCtx& ctx, const Int& p)
{
    (void)ctx;
    // (1+T)^p - 1
    std::vector<QuadInt> f(mpz_get_ui(p.get_mpz_t()) + 1, QuadInt{0, 0});
    for (unsigned long i = 1; i <= mpz_get_ui(p.get_mpz_t()); ++i) {
        Int b;
        mpz_bin_ui(b.get_mpz_t(), p.get_mpz_t(), i);
        f[i] = QuadInt{b, 0};
    }
    return f;
}

LubinTateModule::LubinTateModule(const FieldCtx& ctx, const QuadInt& pi, const Int& q,
                                 const std::vector<QuadInt>& f_exact, int deg, int prec,
                                 int assoc_check_deg)
    : ctx_(ctx),
      f_exact_(f_exact),
      D_(deg),
      Rw_(ctx, pi, q, prec + deg + 4),
      Rout_(ctx, pi, q, prec)
{
    if (deg < 2 || deg > 512)
        throw ValidationError("degree cutoff out of range");
    // validate f: f = pi T mod deg 2, f = T^q mod pi
    if (f_exact_.size() < 2 || !(f_exact_[0].is_zero()))
        throw ValidationError("structural series must be pointed");
    if (Rw_.reduce(f_exact_[1]) != Rw_.reduce(pi))
        throw ValidationError("structural series must have linear coefficient pi");
    PadicRing R1 = Rw_.at_precision(1);
    for (size_t i = 0; i < f_exact_.size(); ++i) {
        QuadInt r = R1.reduce(f_exact_[i]);
        bool want_unit = (Int(static_cast<long>(i)) == q);
        if (want_unit) {
            if (R1.sub(r, QuadInt{1, 0}) != QuadInt{0, 0})
                throw ValidationError("structural series must reduce to T^q mod pi");
        } else if (i >= 2 && !r.is_zero()) {
            throw ValidationError("structural series must reduce to T^q mod pi");
        }
    }
    if (f_exact_.size() <= static_cast<size_t>(mpz_get_ui(q.get_mpz_t())))
        throw ValidationError("structural series must reduce to T^q mod pi");

    f_ = ps_make(Rw_, f_exact_, D_);

    // Solve the group law F(X,Y): F = X + Y mod deg 2, f(F) = F(f, f).
    F_ = tp_add(Rw_, tp_var(Rw_, 2, D_, 0), tp_var(Rw_, 2, D_, 1));
    TruncPoly fX = tp_from_series(Rw_, f_, 2, D_, 0);
    TruncPoly fY = tp_from_series(Rw_, f_, 2, D_, 1);
    for (int r = 2; r <= D_; ++r) {
        // G = f(F) - F(f(X), f(Y)), correct at degree r
        TruncPoly fF = tp_subst(Rw_, tp_from_series(Rw_, f_, 1, D_, 0), {F_});
        TruncPoly Fff = tp_subst(Rw_, F_, {fX, fY});
        TruncPoly G = tp_sub(Rw_, fF, Fff);
        // homogeneous degree-r part
        TruncPoly H = tp_zero(Rw_, 2, D_);
        for (const auto& [m, c] : G.t)
            if (m[0] + m[1] == r)
                H.t.emplace(m, c);
        if (H.t.empty())
            continue;
        // E = H / (pi^r - pi)
        QuadInt unit = Rw_.sub(Rw_.pow(Rw_.reduce(Rw_.pi()), Int(r - 1)), QuadInt{1, 0});
        QuadInt unit_inv = Rw_.inv_unit(unit);
        TruncPoly E = tp_zero(Rw_, 2, D_);
        for (const auto& [m, c] : H.t)
            E.t.emplace(m, Rw_.mul(Rw_.div_pi(c), unit_inv));
        F_ = tp_add(Rw_, F_, E);
    }
    // Coefficients solved at degree r carry pi-adic noise beyond
    // prec + (pad - r); verify structural identities at output precision.
    PadicRing Rchk = Rw_.at_precision(Rout_.prec());
    TruncPoly Fsw = tp_subst(Rw_, F_, {tp_var(Rw_, 2, D_, 1), tp_var(Rw_, 2, D_, 0)});
    if (!tp_eq(Rchk, F_, Fsw))
        throw InternalError("group law is not commutative");
    if (assoc_check_deg > 0) {
        int ad = std::min(assoc_check_deg, D_);
        TruncPoly X = tp_var(Rw_, 3, ad, 0), Y = tp_var(Rw_, 3, ad, 1), Z = tp_var(Rw_, 3, ad, 2);
        TruncPoly FXY = tp_subst(Rw_, F_, {X, Y});
        TruncPoly FYZ = tp_subst(Rw_, F_, {Y, Z});
        TruncPoly lhs = tp_subst(Rw_, F_, {FXY, Z});
        TruncPoly rhs = tp_subst(Rw_, F_, {X, FYZ});
        if (!tp_eq(Rchk, lhs, rhs))
            throw InternalError("group law is not associative to the check degree");
    }
}

PSeries LubinTateModule::solve_commuting(const PSeries& lhs_f, const PSeries& rhs_f,
                                         const QuadInt& linear) const
{
    // phi with rhs_f(phi) = phi(lhs_f) and phi = linear*T mod deg 2.
    PSeries phi = ps_zero(Rw_, D_);
    phi.c[1] = Rw_.reduce(linear);
    for (int r = 2; r <= D_; ++r) {
        PSeries lhs = ps_compose(Rw_, rhs_f, phi, D_);
        PSeries rhs = ps_compose(Rw_, phi, lhs_f, D_);
        QuadInt delta = Rw_.sub(lhs.c[r], rhs.c[r]);
        if (Rw_.is_zero(delta))
            continue;
        QuadInt unit = Rw_.sub(Rw_.pow(Rw_.reduce(Rw_.pi()), Int(r - 1)), QuadInt{1, 0});
        QuadInt e = Rw_.mul(Rw_.div_pi(delta), Rw_.inv_unit(unit));
        phi.c[r] = e;
    }
    return phi;
}

PSeries LubinTateModule::pi_series() const
{
    return ps_truncate(Rout_, ps_make(Rout_, f_exact_, D_), D_);
}

TruncPoly LubinTateModule::group_law() const
{
    TruncPoly out = tp_zero(Rout_, 2, D_);
    for (const auto& [m, c] : F_.t)
        tp_insert(Rout_, out, m, Rout_.reduce(c));
    return out;
}

PSeries LubinTateModule::endo_work(const QuadInt& a) const
{
    auto key = std::pair<Int, Int>(a.a, a.b);
    auto it = endo_cache_.find(key);
    if (it != endo_cache_.end())
        return it->second;
    PSeries phi = solve_commuting(f_, f_, Rw_.reduce(a));
    // verify the commutation to cutoff at output precision (uniqueness witness)
    PSeries lhs = ps_compose(Rw_, f_, phi, D_);
    PSeries rhs = ps_compose(Rw_, phi, f_, D_);
    if (!ps_eq(Rw_.at_precision(Rout_.prec()), lhs, rhs))
        throw InternalError("endomorphism solve failed to commute");
    endo_cache_.emplace(key, phi);
    return phi;
}

PSeries LubinTateModule::endo(const QuadInt& a) const
{
    return ps_truncate(Rout_, endo_work(a), D_);
}

PSeries LubinTateModule::add_points(const PSeries& x, const PSeries& y) const
{
    TruncPoly xs = tp_from_series(Rw_, x, 1, D_, 0);
    TruncPoly ys = tp_from_series(Rw_, y, 1, D_, 0);
    TruncPoly s = tp_subst(Rw_, F_, {xs, ys});
    return tp_to_series(Rw_, s, D_);
}

CheckReport frobenius_congruence_check(const LubinTateModule& M, int nmax)
{
    CheckReport rep;
    const PadicRing& Rw = M.work_ring();
    Int qn = 1;
    for (int i = 0; i < nmax; ++i)
        qn *= Rw.q();
    if (qn > 4096)
        throw ValidationError("frobenius check degree exceeds cap");
    int cutoff = static_cast<int>(qn.get_si());
    PadicRing R1 = Rw.at_precision(1);
    PSeries f = ps_make(Rw, M.f_exact(), cutoff);
    PSeries cur = ps_zero(Rw, cutoff);
    cur.c[1] = QuadInt{1, 0}; // [pi^0] = T
    Int qk = 1;
    for (int n = 0; n <= nmax; ++n) {
        ++rep.checked;
        // cur = [pi^n] at cutoff; want cur = T^(q^n) mod pi
        for (int i = 0; i <= cur.degree(); ++i) {
            QuadInt r = R1.reduce(cur.c[i]);
            bool is_qn = Int(i) == qk;
            if (is_qn ? (R1.sub(r, QuadInt{1, 0}) != QuadInt{0, 0}) : !r.is_zero()) {
                rep.fail("[pi^" + std::to_string(n) + "] is not T^(q^" + std::to_string(n) +
                         ") mod pi at degree " + std::to_string(i));
                break;
            }
        }
        if (n < nmax)
            cur = ps_compose(Rw, f, cur, cutoff);
        qk *= Rw.q();
    }
    return rep;
}

TorsionData torsion_polynomial(const LubinTateModule& M, int n, int degree_cap)
{
    if (n < 0)
        throw ValidationError("torsion level must be nonnegative");
    const PadicRing& Rw = M.work_ring();
    const PadicRing& Rout = M.ring();
    Int qn = 1;
    for (int i = 0; i < n; ++i)
        qn *= Rw.q();
    if (qn > degree_cap)
        throw ValidationError("torsion degree exceeds the cutoff budget");
    int deg = static_cast<int>(qn.get_si());
    // exact polynomial composition (the structural series is a polynomial)
    PSeries f = ps_make(Rw, M.f_exact(), static_cast<int>(M.f_exact().size()) - 1);
    PSeries cur = ps_zero(Rw, 1);
    cur.c[1] = QuadInt{1, 0};
    for (int i = 0; i < n; ++i)
        cur = ps_compose(Rw, f, cur, deg);
    TorsionData out;
    out.pin = ps_truncate(Rout, cur, deg);
    // quotient [pi^n]/[pi^(n-1)] = h([pi^(n-1)]) with h = f/T
    PSeries h = ps_zero(Rw, static_cast<int>(M.f_exact().size()) - 2);
    for (int i = 0; i + 1 < static_cast<int>(M.f_exact().size()); ++i)
        h.c[i] = Rw.reduce(M.f_exact()[i + 1]);
    PSeries prev = ps_zero(Rw, 1);
    prev.c[1] = QuadInt{1, 0};
    for (int i = 0; i + 1 < n; ++i)
        prev = ps_compose(Rw, f, prev, deg);
    PSeries quot;
    if (n == 0) {
        quot = ps_zero(Rw, 1);
        quot.c[1] = QuadInt{1, 0}; // [pi^0] = T itself
        out.quotient_degree = 1;
    } else {
        // h has a constant term; substitute by hand: quot = sum h_i prev^i
        PSeries acc = ps_zero(Rw, deg);
        PSeries pw = ps_zero(Rw, deg);
        pw.c[0] = QuadInt{1, 0};
        for (int i = 0; i <= h.degree(); ++i) {
            if (!Rw.is_zero(h.c[i]))
                acc = ps_add(Rw, acc, ps_scale(Rw, h.c[i], pw));
            pw = ps_mul(Rw, pw, prev, deg);
        }
        quot = acc;
        Int qd = (Rw.q() - 1) * (qn / Rw.q());
        out.quotient_degree = qd;
    }
    out.quotient = ps_truncate(Rout, quot, deg);
    // Eisenstein witness at output precision: all coefficients below the
    // leading one in p, constant term of valuation exactly 1, leading
    // coefficient a unit.
    out.eisenstein = true;
    long qd = out.quotient_degree.get_si();
    if (n == 0) {
        out.eisenstein = true;
        return out;
    }
    for (long i = 0; i < qd; ++i)
        if (Rout.val(out.quotient.c[i]) < 1)
            out.eisenstein = false;
    if (Rout.val(out.quotient.c[0]) != 1)
        out.eisenstein = false;
    if (!Rout.is_unit(out.quotient.c[qd]))
        out.eisenstein = false;
    for (long i = qd + 1; i <= out.quotient.degree(); ++i)
        if (!Rout.is_zero(out.quotient.c[i]))
            out.eisenstein = false;
    return out;
}

std::optional<PSeries> lt_isomorphism(const LubinTateModule& M1, const LubinTateModule& M2,
                                      const QuadInt& u)
{
    const PadicRing& Rw = M1.work_ring();
    if (!(M1.ring().ctx() == M2.ring().ctx()) || M1.ring().pi() != M2.ring().pi() ||
        M1.ring().q() != M2.ring().q())
        throw ValidationError("isomorphism check requires matching coefficient rings");
    if (!Rw.is_unit(Rw.reduce(u)))
        throw ValidationError("linear coefficient must be a unit");
    int D = std::min(M1.degree_cutoff(), M2.degree_cutoff());
    PSeries f1 = ps_make(Rw, M1.f_exact(), D);
    PSeries f2 = ps_make(Rw, M2.f_exact(), D);
    // phi(f1) = f2(phi), phi = u T mod deg 2
    PSeries phi = ps_zero(Rw, D);
    phi.c[1] = Rw.reduce(u);
    for (int r = 2; r <= D; ++r) {
        PSeries lhs = ps_compose(Rw, f2, phi, D);
        PSeries rhs = ps_compose(Rw, phi, f1, D);
        QuadInt delta = Rw.sub(lhs.c[r], rhs.c[r]);
        if (Rw.is_zero(delta))
            continue;
        QuadInt unit = Rw.sub(Rw.pow(Rw.reduce(Rw.pi()), Int(r - 1)), QuadInt{1, 0});
        bool in_p = Rw.val(delta) >= 1;
        if (!in_p)
            return std::nullopt; // obstruction
        phi.c[r] = Rw.mul(Rw.div_pi(delta), Rw.inv_unit(unit));
    }
    PSeries lhs = ps_compose(Rw, f2, phi, D);
    PSeries rhs = ps_compose(Rw, phi, f1, D);
    if (!ps_eq(Rw.at_precision(M1.ring().prec()), ps_truncate(Rw, lhs, D),
               ps_truncate(Rw, rhs, D)))
        return std::nullopt;
    return ps_truncate(M1.ring(), phi, D);
}

} // namespace cmll
