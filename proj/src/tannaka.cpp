#include "tannaka.hpp"

#include <algorithm>
#include <set>

namespace cmll {

GeneratorData choose_generators(const RayClassGroup& G, const FracIdeal& g,
                                const Int& search_bound)
{
    const FieldCtx& ctx = G.ctx();
    if (!g.is_integral())
        throw ValidationError("auxiliary modulus must be integral");
    // f | g
    if (!FracIdeal::mul(ctx, g, G.conductor().inv(ctx)).is_integral())
        throw ValidationError("auxiliary modulus must be divisible by the conductor");

    GeneratorData data{&G, g, {}, {}, {}, {}};
    std::vector<Int> targets(G.elementary().rbegin(), G.elementary().rend());

    // prime ideals coprime to g by (norm, HNF) order
    std::vector<FracIdeal> primes;
    for (Int p = 2; p <= search_bound; ++p) {
        if (!is_prime(p))
            continue;
        for (auto& [P, e] : primes_above(ctx, p)) {
            (void)e;
            if (is_coprime(ctx, P, g))
                primes.push_back(P);
        }
    }
    std::sort(primes.begin(), primes.end(), [](const FracIdeal& x, const FracIdeal& y) {
        if (x.norm_int() != y.norm_int())
            return x.norm_int() < y.norm_int();
        return x < y;
    });

    AbelianOps ops = G.ops();
    std::set<long> span{G.identity()};
    for (const Int& n : targets) {
        bool found = false;
        for (const auto& P : primes) {
            long e = G.bracket_ideal(P);
            if (element_order(ops, e) != n.get_si())
                continue;
            bool clean = true;
            long x = e;
            for (Int k = 1; k < n; ++k) {
                if (span.count(x)) {
                    clean = false;
                    break;
                }
                x = G.mul(x, e);
            }
            if (!clean)
                continue;
            std::set<long> next;
            long cx = G.identity();
            for (Int k = 0; k < n; ++k) {
                for (long s : span)
                    next.insert(G.mul(s, cx));
                cx = G.mul(cx, e);
            }
            span = std::move(next);
            data.primes.push_back(P);
            data.orders.push_back(n);
            data.gen_elems.push_back(e);
            found = true;
            break;
        }
        if (!found)
            throw ValidationError("generator search bound exhausted");
    }
    if (static_cast<long>(span.size()) != G.order())
        throw InternalError("chosen prime classes do not span the ray class group");

    // coordinate table by mixed-radix enumeration
    data.coords.assign(G.order(), {});
    size_t r = data.primes.size();
    std::vector<long> x(r, 0);
    while (true) {
        long acc = G.identity();
        for (size_t i = 0; i < r; ++i)
            acc = G.mul(acc, G.pow(data.gen_elems[i], Int(x[i])));
        if (!data.coords[acc].empty())
            throw InternalError("generator coordinates are not unique");
        data.coords[acc] = x;
        size_t i = 0;
        while (i < r) {
            if (++x[i] < data.orders[i])
                break;
            x[i] = 0;
            ++i;
        }
        if (i == r || r == 0)
            break;
    }
    if (r == 0)
        data.coords[G.identity()] = {};
    for (long e = 0; e < G.order(); ++e)
        if (data.coords[e].empty() && e != G.identity() && r > 0)
            throw InternalError("generator coordinates incomplete");
    return data;
}

namespace {

void check_coprime_to_g(const GeneratorData& data, const FracIdeal& a)
{
    const FieldCtx& ctx = data.G->ctx();
    if (a.is_zero())
        throw ValidationError("zero ideal");
    if (!is_coprime(ctx, a.integral_part(), data.g) ||
        (a.den() != 1 && !is_coprime(ctx, FracIdeal::from_int(ctx, a.den()), data.g)))
        throw ValidationError("ideal is not coprime to the auxiliary modulus");
}

} // namespace

Decomposition decompose(const GeneratorData& data, const FracIdeal& a)
{
    const RayClassGroup& G = *data.G;
    const FieldCtx& ctx = G.ctx();
    check_coprime_to_g(data, a);
    long e = G.bracket_ideal(a);
    Decomposition out{a, FracIdeal::one(ctx), KElem{QuadInt{1, 0}, 1}, data.coords[e]};
    FracIdeal gamma = a;
    for (size_t i = 0; i < data.primes.size(); ++i)
        gamma = FracIdeal::mul(ctx, gamma, data.primes[i].pow(ctx, -out.exps[i]));
    out.gamma = gamma;
    auto g0 = is_principal(ctx, gamma);
    if (!g0)
        throw InternalError("gamma is not principal (contradicts the group computation)");
    bool certified = false;
    for (const auto& u : ctx.unit_group()) {
        KElem cand = ctx.k_mul(*g0, KElem{u, 1});
        if (one_mod_f(ctx, cand, G.conductor_factors())) {
            out.generator = cand;
            certified = true;
            break;
        }
    }
    if (!certified)
        throw InternalError("no generator of gamma is 1 mod f");
    return out;
}

CheckReport relation_checks(const GeneratorData& data, const Int& bound)
{
    CheckReport rep;
    const RayClassGroup& G = *data.G;
    const FieldCtx& ctx = G.ctx();

    std::vector<FracIdeal> corpus;
    for (const auto& a : ideals_up_to_norm(ctx, bound))
        if (is_coprime(ctx, a, data.g))
            corpus.push_back(a);

    // Prin_{1 mod f}^{(g)} corpus from explicit elements z = 1 mod f.
    std::vector<FracIdeal> prin;
    {
        const FracIdeal& f = G.conductor();
        Int B = bound;
        Int smax = isqrt(4 * B) / f.a() + 2;
        Int tmax = isqrt(4 * B) / f.c() + 2;
        for (Int s = -smax; s <= smax; ++s)
            for (Int t = -tmax; t <= tmax; ++t) {
                QuadInt w = ctx.add(ctx.mul_int(QuadInt{f.a(), 0}, s),
                                    ctx.mul_int(QuadInt{f.b(), f.c()}, t));
                QuadInt z = ctx.add(QuadInt{1, 0}, w);
                if (z.is_zero() || ctx.norm(z) > B)
                    continue;
                FracIdeal I = FracIdeal::principal(ctx, KElem{z, 1});
                if (!is_coprime(ctx, I, data.g))
                    continue;
                if (std::find(prin.begin(), prin.end(), I) == prin.end())
                    prin.push_back(I);
            }
        std::sort(prin.begin(), prin.end());
    }

    std::map<std::string, Decomposition> cache;
    auto dec = [&](const FracIdeal& a) -> const Decomposition& {
        auto it = cache.find(a.str());
        if (it == cache.end())
            it = cache.emplace(a.str(), decompose(data, a)).first;
        return it->second;
    };

    for (const auto& a : corpus) {
        const auto& da = dec(a);
        // relation (i): gamma(ab) = gamma(a)gamma(b) for b in Prin
        for (const auto& b : prin) {
            ++rep.checked;
            FracIdeal ab = FracIdeal::mul(ctx, a, b);
            const auto& dab = dec(ab);
            if (dab.gamma != FracIdeal::mul(ctx, da.gamma, dec(b).gamma))
                rep.fail("mult-prin fails at a=" + a.str() + " b=" + b.str());
        }
        // relations (ii), (iii) for b = p_j
        for (size_t j = 0; j < data.primes.size(); ++j) {
            ++rep.checked;
            FracIdeal ap = FracIdeal::mul(ctx, a, data.primes[j]);
            const auto& dap = dec(ap);
            if (da.exps[j] != data.orders[j].get_si() - 1) {
                if (dap.gamma != da.gamma)
                    rep.fail("mult-prime-triv fails at a=" + a.str() + " j=" +
                             std::to_string(j));
            } else {
                FracIdeal pn = data.primes[j].pow(ctx, data.orders[j].get_si());
                const auto& dpn = dec(pn);
                if (dap.gamma != FracIdeal::mul(ctx, da.gamma, dpn.gamma))
                    rep.fail("mult-prime-carry fails at a=" + a.str() + " j=" +
                             std::to_string(j));
            }
        }
    }
    // gamma(p_j) = O_K
    for (size_t j = 0; j < data.primes.size(); ++j) {
        ++rep.checked;
        if (!dec(data.primes[j]).gamma.is_one())
            rep.fail("gamma(p_j) != O_K");
    }
    return rep;
}

// --- symbolic words -----------------------------------------------------------

SymbolicWord symbolic_extension(const GeneratorData& data, const FracIdeal& a)
{
    const RayClassGroup& G = *data.G;
    const FieldCtx& ctx = G.ctx();
    Decomposition d = decompose(data, a);
    SymbolicWord w;
    w.l_part = d.gamma;
    long sigma_a = G.bracket_ideal(a);
    // A^(sigma_a - 1)
    if (sigma_a != G.identity()) {
        w.A_exp[sigma_a] += 1;
        w.A_exp[G.identity()] -= 1;
    }
    w.alpha.resize(data.primes.size());
    for (size_t i = 0; i < data.primes.size(); ++i) {
        w.alpha[i].assign(data.orders[i].get_si(), 0);
        for (long j = 0; j < d.exps[i]; ++j)
            w.alpha[i][j] += 1;
    }
    (void)ctx;
    return w;
}

SymbolicWord word_mul(const GeneratorData& data, const SymbolicWord& x, const SymbolicWord& y)
{
    const FieldCtx& ctx = data.G->ctx();
    SymbolicWord r = x;
    r.l_part = FracIdeal::mul(ctx, x.l_part, y.l_part);
    for (const auto& [k, v] : y.A_exp) {
        r.A_exp[k] += v;
        if (r.A_exp[k] == 0)
            r.A_exp.erase(k);
    }
    for (size_t i = 0; i < r.alpha.size(); ++i)
        for (size_t j = 0; j < r.alpha[i].size(); ++j)
            r.alpha[i][j] += y.alpha[i][j];
    return r;
}

SymbolicWord word_inv(const GeneratorData& data, const SymbolicWord& x)
{
    const FieldCtx& ctx = data.G->ctx();
    SymbolicWord r = x;
    r.l_part = x.l_part.inv(ctx);
    for (auto& [k, v] : r.A_exp)
        v = -v;
    for (auto& vec : r.alpha)
        for (auto& v : vec)
            v = -v;
    return r;
}

SymbolicWord word_act(const GeneratorData& data, long sigma, const SymbolicWord& x)
{
    const RayClassGroup& G = *data.G;
    SymbolicWord r = x;
    // l-part has values in K^x: fixed by the action
    r.A_exp.clear();
    for (const auto& [k, v] : x.A_exp)
        r.A_exp[G.mul(sigma, k)] += v;
    for (auto it = r.A_exp.begin(); it != r.A_exp.end();)
        it = it->second == 0 ? r.A_exp.erase(it) : std::next(it);
    // alpha_i sees only the sigma_i-coordinate of sigma
    const auto& t = data.coords[sigma];
    for (size_t i = 0; i < r.alpha.size(); ++i) {
        long n = static_cast<long>(r.alpha[i].size());
        std::vector<Int> shifted(n, 0);
        for (long j = 0; j < n; ++j)
            shifted[(j + t[i]) % n] = x.alpha[i][j];
        r.alpha[i] = std::move(shifted);
    }
    return r;
}

SymbolicWord word_normalize(const GeneratorData& data, const SymbolicWord& x)
{
    const FieldCtx& ctx = data.G->ctx();
    SymbolicWord r = x;
    for (size_t i = 0; i < r.alpha.size(); ++i) {
        Int m = r.alpha[i].empty() ? Int(0) : r.alpha[i][0];
        if (m == 0)
            continue;
        for (auto& v : r.alpha[i])
            v -= m;
        // alpha_i^(m * N_i) -> l(p_i^(n_i))^m
        Int ei = data.orders[i] * m;
        long e = ei.get_si();
        r.l_part = FracIdeal::mul(ctx, r.l_part, data.primes[i].pow(ctx, e));
    }
    return r;
}

bool word_is_identity(const GeneratorData& data, const SymbolicWord& x)
{
    SymbolicWord r = word_normalize(data, x);
    if (!r.l_part.is_one())
        return false;
    if (!r.A_exp.empty())
        return false;
    for (const auto& vec : r.alpha)
        for (const auto& v : vec)
            if (v != 0)
                return false;
    return true;
}

CheckReport cocycle_verify(const GeneratorData& data, const FracIdeal& a, const FracIdeal& b)
{
    CheckReport rep;
    const RayClassGroup& G = *data.G;
    const FieldCtx& ctx = G.ctx();
    ++rep.checked;

    Decomposition da = decompose(data, a), db = decompose(data, b);
    FracIdeal ab = FracIdeal::mul(ctx, a, b);
    Decomposition dab = decompose(data, ab);
    // exponent bookkeeping z_i = x_i + y_i - delta_i n_i
    for (size_t i = 0; i < data.primes.size(); ++i) {
        long z = dab.exps[i], xx = da.exps[i], yy = db.exps[i];
        long delta = (xx + yy - z) / data.orders[i].get_si();
        if (z != xx + yy - delta * data.orders[i].get_si() || (delta != 0 && delta != 1))
            rep.fail("exponent bookkeeping fails at i=" + std::to_string(i));
    }

    SymbolicWord wa = symbolic_extension(data, a);
    SymbolicWord wb = symbolic_extension(data, b);
    SymbolicWord wab = symbolic_extension(data, ab);
    long sigma_a = G.bracket_ideal(a);
    SymbolicWord lhs = word_mul(data, wa, word_act(data, sigma_a, wb));
    SymbolicWord test = word_mul(data, lhs, word_inv(data, wab));
    if (!word_is_identity(data, test))
        rep.fail("cocycle identity fails at a=" + a.str() + " b=" + b.str());
    return rep;
}

CheckReport cocycle_sweep(const GeneratorData& data, const Int& bound)
{
    CheckReport rep;
    const FieldCtx& ctx = data.G->ctx();
    std::vector<FracIdeal> corpus;
    for (const auto& a : ideals_up_to_norm(ctx, bound))
        if (is_coprime(ctx, a, data.g))
            corpus.push_back(a);
    for (const auto& a : corpus)
        for (const auto& b : corpus) {
            auto r = cocycle_verify(data, a, b);
            rep.checked += r.checked;
            if (!r.pass) {
                rep.pass = false;
                for (const auto& m : r.failures)
                    rep.fail(m);
            }
        }
    return rep;
}

} // namespace cmll
