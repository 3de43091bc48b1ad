#include "selftest.hpp"

#include "cmlattice.hpp"
#include "config.hpp"
#include "lubintate.hpp"
#include "tannaka.hpp"
#include "wittlambda.hpp"

#include <json.hpp>

#include <random>
#include <sstream>

namespace cmll {

using nlohmann::json;

namespace {

CriterionResult criterion_ray_class_orders()
{
    CriterionResult r{1, "ray class orders", true, ""};
    std::ostringstream det;
    FieldCtx f1 = make_field(1);
    ClassGroup cg1(f1);
    RayClassGroup g3(f1, FracIdeal::from_int(f1, 3), cg1);
    RayClassGroup g2i(f1, FracIdeal::principal(f1, KElem{QuadInt{2, 1}, 1}), cg1);
    FieldCtx f5 = make_field(5);
    ClassGroup cg5(f5);
    FieldCtx f23 = make_field(23);
    ClassGroup cg23(f23);
    RayClassGroup g5(f5, FracIdeal::one(f5), cg5);
    RayClassGroup g23(f23, FracIdeal::one(f23), cg23);

    struct Want {
        const RayClassGroup* G;
        long order;
        Int enum_bound;
    };
    std::vector<Want> wants{{&g3, 2, Int(30)}, {&g2i, 1, Int(10)}, {&g5, 2, Int(10)},
                            {&g23, 3, Int(15)}};
    for (const auto& w : wants) {
        long formula = w.G->order();
        long direct = w.G->order_by_enumeration(w.enum_bound);
        if (formula != w.order || direct != w.order)
            r.pass = false;
        det << "order(" << w.G->conductor().str() << ", d=" << w.G->ctx().d().get_str()
            << "): formula=" << formula << " enumerated=" << direct << " expected=" << w.order
            << "; ";
    }
    r.details = det.str();
    return r;
}

CriterionResult criterion_exactness()
{
    CriterionResult r{2, "five-term exactness, Nf <= 200, d in {1,3,5}", true, ""};
    long conductors = 0, checked = 0;
    std::vector<std::string> fails;
    for (long dval : {1L, 3L, 5L}) {
        FieldCtx ctx = make_field(dval);
        ClassGroup cg(ctx);
        for (const auto& f : ideals_up_to_norm(ctx, 200)) {
            auto rep = exactness_check(ctx, f, cg, 40);
            ++conductors;
            checked += rep.checked;
            if (!rep.pass) {
                r.pass = false;
                for (const auto& m : rep.failures)
                    if (fails.size() < 8)
                        fails.push_back(m);
            }
        }
    }
    std::ostringstream det;
    det << conductors << " conductors, " << checked << " node checks, "
        << (r.pass ? "no counterexamples" : "FAILURES");
    for (const auto& m : fails)
        det << "; " << m;
    r.details = det.str();
    return r;
}

CriterionResult criterion_witt()
{
    CriterionResult r{3, "witt polynomial integrality, ghost homomorphism, delta axioms", true,
                      ""};
    FieldCtx f1 = make_field(1);
    long ghost_checks = 0, delta_checks = 0;

    struct Setup {
        WittParams par;
        Carrier car;
        bool gauss;
    };
    std::vector<Setup> setups{
        {make_witt_params(f1, QuadInt{2, 0}, 2, 4), Carrier::integers(f1), false},
        {make_witt_params(f1, QuadInt{3, 0}, 3, 4), Carrier::integers(f1), false},
        {make_witt_params(f1, QuadInt{1, 1}, 2, 4), Carrier::ok(f1), true},
    };
    std::mt19937 rng(2026);
    std::uniform_int_distribution<long> dist(-9, 9);
    for (const auto& su : setups) {
        WittPolynomials wp = witt_polynomials(su.par); // integrality asserted inside
        for (int m = 0; m < su.par.len; ++m)
            if (!mp_integral(wp.S[m], su.par.rational) || !mp_integral(wp.P[m], su.par.rational))
                r.pass = false;
        for (int t = 0; t < 334; ++t) {
            auto rnd = [&] {
                return su.car.from_quadint(QuadInt{dist(rng), su.gauss ? dist(rng) : 0});
            };
            WittVector x{su.par, {}}, y{su.par, {}};
            for (int i = 0; i < su.par.len; ++i) {
                x.coords.push_back(rnd());
                y.coords.push_back(rnd());
            }
            auto gs = ghost_map(su.car, witt_add(su.car, wp, x, y));
            auto gp = ghost_map(su.car, witt_mul(su.car, wp, x, y));
            auto gx = ghost_map(su.car, x), gy = ghost_map(su.car, y);
            ++ghost_checks;
            for (int m = 0; m < su.par.len; ++m) {
                if (!su.car.eq(gs.comps[m], su.car.add(gx.comps[m], gy.comps[m])) ||
                    !su.car.eq(gp.comps[m], su.car.mul(gx.comps[m], gy.comps[m])))
                    r.pass = false;
            }
        }
        // delta axioms (product rule, sum rule, psi homomorphism)
        DeltaRing R = make_delta_ring(su.car, su.par);
        long qq = su.par.q.get_si();
        for (int t = 0; t < 334; ++t) {
            CElem a = su.car.from_quadint(QuadInt{dist(rng), su.gauss ? dist(rng) : 0});
            CElem b = su.car.from_quadint(QuadInt{dist(rng), su.gauss ? dist(rng) : 0});
            ++delta_checks;
            CElem lhs = delta(R, su.car.mul(a, b));
            CElem rhs = su.car.add(
                su.car.add(su.car.mul(su.car.pow(a, su.par.q), delta(R, b)),
                           su.car.mul(su.car.pow(b, su.par.q), delta(R, a))),
                su.car.scalar_mul(su.par.pi, su.car.mul(delta(R, a), delta(R, b))));
            if (!su.car.eq(lhs, rhs))
                r.pass = false;
            CElem lhs2 =
                su.car.sub(su.car.sub(delta(R, su.car.add(a, b)), delta(R, a)), delta(R, b));
            CElem rhs2 = su.car.from_int(0);
            for (long i = 1; i < qq; ++i) {
                Int binom;
                mpz_bin_uiui(binom.get_mpz_t(), qq, i);
                CElem coeff = su.car.div_pi(su.car.from_quadint(QuadInt{binom, 0}), su.par.pi,
                                            su.par.q, su.par.rational);
                rhs2 = su.car.sub(rhs2, su.car.mul(coeff, su.car.mul(su.car.pow(a, Int(qq - i)),
                                                                     su.car.pow(b, Int(i)))));
            }
            if (!su.car.eq(lhs2, rhs2))
                r.pass = false;
            if (!su.car.eq(psi_from_delta(R, su.car.mul(a, b)),
                           su.car.mul(psi_from_delta(R, a), psi_from_delta(R, b))))
                r.pass = false;
        }
    }
    std::ostringstream det;
    det << "3 parameter sets to length 4; " << ghost_checks
        << " ghost-homomorphism samples; " << delta_checks << " delta-axiom samples";
    r.details = det.str();
    return r;
}

CriterionResult criterion_lubin_tate()
{
    CriterionResult r{4, "lubin-tate laws, binomial endomorphisms, frobenius congruences", true,
                      ""};
    FieldCtx f1 = make_field(1);
    std::ostringstream det;

    // multiplicative law over Z2 at D=32
    auto fm = LubinTateModule::multiplicative_f(f1, 2);
    LubinTateModule Mm(f1, QuadInt{2, 0}, 2, fm, 32, 16);
    TruncPoly F = Mm.group_law();
    bool exact = F.t.size() == 3 && F.t.count({1, 0}) && F.t.count({0, 1}) && F.t.count({1, 1});
    for (const auto& [m, c] : F.t)
        if (c != QuadInt{1, 0})
            exact = false;
    if (!exact)
        r.pass = false;
    det << "F = X+Y+XY " << (exact ? "exact" : "NOT exact") << " at D=32; ";

    const PadicRing& R = Mm.ring();
    Int p16 = 1;
    for (int i = 0; i < 16; ++i)
        p16 *= 2;
    bool binom_ok = true;
    for (long a = 0; a <= 10; ++a) {
        PSeries e = Mm.endo(QuadInt{a, 0});
        for (int i = 0; i <= 32; ++i) {
            Int expect = 0;
            if (i >= 1 && i <= a)
                mpz_bin_uiui(expect.get_mpz_t(), a, i);
            if (R.reduce(e.c[i]) != R.reduce(QuadInt{mod_floor(expect, p16), 0}))
                binom_ok = false;
        }
    }
    if (!binom_ok)
        r.pass = false;
    det << "[a] binomial for a <= 10 " << (binom_ok ? "ok" : "FAIL") << "; ";

    for (long q : {2L, 3L, 5L}) {
        auto f = LubinTateModule::canonical_f(f1, QuadInt{q, 0}, q);
        LubinTateModule M(f1, QuadInt{q, 0}, q, f, 8, 6);
        auto fc = frobenius_congruence_check(M, 3);
        if (!fc.pass)
            r.pass = false;
        bool tq = true;
        for (int n = 1; n <= 3; ++n) {
            auto td = torsion_polynomial(M, n);
            Int expect = q - 1;
            for (int i = 1; i < n; ++i)
                expect *= q;
            if (td.quotient_degree != expect || !td.eisenstein)
                tq = false;
        }
        if (!tq)
            r.pass = false;
        det << "q=" << q << " frobenius n<=3 " << (fc.pass ? "ok" : "FAIL") << ", torsion "
            << (tq ? "ok" : "FAIL") << "; ";
    }
    r.details = det.str();
    return r;
}

CriterionResult criterion_cm_torsor()
{
    CriterionResult r{5, "CM moduli torsors, hom/eval identities, kernel sizes", true, ""};
    std::ostringstream det;
    for (long dval : {1L, 2L, 3L, 5L, 7L, 11L}) {
        FieldCtx ctx = make_field(dval);
        ClassGroup cg(ctx);
        for (int use3 = 0; use3 < 2; ++use3) {
            FracIdeal f = use3 ? FracIdeal::from_int(ctx, 3) : FracIdeal::one(ctx);
            RayClassGroup G(ctx, f, cg);
            ModuliSet M(ctx, G);
            auto cert = M.certify();
            if (!cert.pass || M.size() != G.order())
                r.pass = false;
            det << "d=" << dval << (use3 ? " f=(3)" : " f=(1)") << " |M|=" << M.size()
                << (cert.pass ? " torsor" : " FAIL") << "; ";
        }
        auto ev = torsor_eval_check(ctx, cg, 20);
        auto ks = kernel_size_check(ctx, cg, 200);
        if (!ev.pass || !ks.pass)
            r.pass = false;
    }
    r.details = det.str();
    return r;
}

CriterionResult criterion_hilbert()
{
    CriterionResult r{6, "hilbert class polynomials", true, ""};
    std::ostringstream det;
    struct Want {
        long d;
        std::vector<Int> coeffs;
    };
    std::vector<Want> wants{
        {1, {Int(-1728), Int(1)}},
        {2, {Int(-8000), Int(1)}},
        {5, {Int("-681472000"), Int("-1264000"), Int(1)}},
    };
    for (const auto& w : wants) {
        FieldCtx ctx = make_field(w.d);
        ClassGroup cg(ctx);
        auto h = hilbert_class_polynomial(ctx, 256, cg.reps());
        auto h2 = hilbert_class_polynomial(ctx, 512, cg.reps());
        bool ok = h.coeffs == w.coeffs && h2.coeffs == w.coeffs;
        if (!ok)
            r.pass = false;
        det << "d=" << w.d << (ok ? " ok" : " FAIL") << " residual=" << h.residual << "; ";
    }
    r.details = det.str();
    return r;
}

CriterionResult criterion_ghost_rigidity()
{
    CriterionResult r{7, "ghost family rigidity and composition", true, ""};
    FieldCtx f1 = make_field(1);
    CMLattice E{FracIdeal::one(f1)};
    long comps = 0;
    for (const auto& u : f1.unit_group()) {
        auto rep = ghost_rigidity_check(f1, E, u, 20);
        comps += rep.checked;
        if (!rep.pass)
            r.pass = false;
    }
    auto comp = ghost_family_checks(f1, E, 20, 100);
    if (!comp.pass)
        r.pass = false;
    std::ostringstream det;
    det << comps << " component forcings over the unit group; " << comp.checked
        << " kernel/composition checks";
    r.details = det.str();
    return r;
}

CriterionResult criterion_tannaka()
{
    CriterionResult r{8, "tannaka cocycle and gamma relations", true, ""};
    std::ostringstream det;
    struct Case {
        long d;
        bool f3;
    };
    for (auto [dval, use3] : {Case{1, true}, Case{5, false}}) {
        FieldCtx ctx = make_field(dval);
        ClassGroup cg(ctx);
        FracIdeal f = use3 ? FracIdeal::from_int(ctx, 3) : FracIdeal::one(ctx);
        RayClassGroup G(ctx, f, cg);
        GeneratorData data = choose_generators(G, f);
        auto rel = relation_checks(data, 100);
        auto coc = cocycle_sweep(data, 60);
        if (!rel.pass || !coc.pass)
            r.pass = false;
        det << "d=" << dval << " f=" << f.str() << ": relations " << rel.checked
            << (rel.pass ? " ok" : " FAIL") << ", cocycle pairs " << coc.checked
            << (coc.pass ? " ok" : " FAIL") << "; ";
    }
    r.details = det.str();
    return r;
}

json results_to_json(const std::vector<CriterionResult>& results)
{
    json arr = json::array();
    for (const auto& c : results)
        arr.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"details", c.details}});
    return arr;
}

std::vector<CriterionResult> run_once()
{
    return {criterion_ray_class_orders(), criterion_exactness(),     criterion_witt(),
            criterion_lubin_tate(),       criterion_cm_torsor(),     criterion_hilbert(),
            criterion_ghost_rigidity(),   criterion_tannaka()};
}

} // namespace

std::string SelftestReport::to_json(bool pretty) const
{
    json out;
    out["schema"] = "1";
    out["all_pass"] = all_pass;
    out["criteria"] = results_to_json(results);
    return pretty ? out.dump(2) : out.dump();
}

SelftestReport run_selftest()
{
    SelftestReport rep;
    auto first = run_once();
    auto second = run_once();
    std::string s1 = results_to_json(first).dump();
    std::string s2 = results_to_json(second).dump();
    rep.results = first;
    CriterionResult det{9, "determinism: two runs produce byte-identical reports", s1 == s2, ""};
    det.details = det.pass ? "reports identical (" + std::to_string(s1.size()) + " bytes)"
                           : "reports differ";
    rep.results.push_back(det);
    for (const auto& c : rep.results)
        if (!c.pass)
            rep.all_pass = false;
    return rep;
}

} // namespace cmll
