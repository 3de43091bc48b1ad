#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lubintate.hpp"

#include <random>

using namespace cmll;

namespace {

// Independent binomial oracle: (1+T)^a - 1 mod 2^N.
std::vector<Int> binomial_series(long a, int deg)
{
    std::vector<Int> c(deg + 1, 0);
    for (int i = 1; i <= deg && i <= a; ++i)
        mpz_bin_uiui(c[i].get_mpz_t(), a, i);
    return c;
}

} // namespace

TEST_CASE("padic coefficient ring basics")
{
    FieldCtx f1 = make_field(1);
    PadicRing R(f1, QuadInt{2, 0}, 2, 8);
    CHECK(R.rational());
    CHECK(R.reduce(QuadInt{256 + 3, 0}) == QuadInt{3, 0});
    CHECK(R.val(QuadInt{12, 0}) == 2);
    CHECK(R.val(QuadInt{0, 0}) == 8);
    CHECK(R.mul(R.inv_unit(QuadInt{3, 0}), QuadInt{3, 0}) == QuadInt{1, 0});
    CHECK(R.div_pi(QuadInt{6, 0}) == QuadInt{3, 0});
    CHECK_THROWS_AS(R.div_pi(QuadInt{3, 0}), InternalError);

    // Gaussian ring at pi = 1+i
    PadicRing G(f1, QuadInt{1, 1}, 2, 6);
    CHECK_FALSE(G.rational());
    CHECK(G.val(QuadInt{2, 0}) == 2); // (2) = (1+i)^2
    CHECK(G.div_pi(QuadInt{1, 1}) == QuadInt{1, 0});

    // teichmuller at q = 5
    PadicRing R5(f1, QuadInt{5, 0}, 5, 8);
    QuadInt t = R5.teichmuller(QuadInt{2, 0});
    CHECK(R5.pow(t, 5) == t);
    CHECK(R5.val(R5.sub(t, QuadInt{2, 0})) >= 1);

    CHECK_THROWS_AS(PadicRing(f1, QuadInt{2, 0}, 4, 4), ValidationError); // (2) ramified in Z[i]
    CHECK_THROWS_AS(PadicRing(f1, QuadInt{6, 0}, 6, 4), ValidationError);
}

TEST_CASE("multiplicative formal group over Z2: exact group law and endomorphisms")
{
    FieldCtx f1 = make_field(1);
    auto f = LubinTateModule::multiplicative_f(f1, 2);
    LubinTateModule M(f1, QuadInt{2, 0}, 2, f, 32, 16);

    // F(X,Y) = X + Y + XY exactly to the cutoff
    TruncPoly F = M.group_law();
    REQUIRE(F.t.size() == 3);
    CHECK(F.t.at({1, 0}) == QuadInt{1, 0});
    CHECK(F.t.at({0, 1}) == QuadInt{1, 0});
    CHECK(F.t.at({1, 1}) == QuadInt{1, 0});

    // [a](T) = (1+T)^a - 1 for a <= 10, against the binomial oracle
    const PadicRing& R = M.ring();
    Int p16 = 1;
    for (int i = 0; i < 16; ++i)
        p16 *= 2;
    for (long a = 0; a <= 10; ++a) {
        PSeries e = M.endo(QuadInt{a, 0});
        auto oracle = binomial_series(a, 32);
        for (int i = 0; i <= 32; ++i)
            CHECK(R.reduce(e.c[i]) == R.reduce(QuadInt{mod_floor(oracle[i], p16), 0}));
    }
    // [3](T) = 3T + 3T^2 + T^3
    PSeries e3 = M.endo(QuadInt{3, 0});
    CHECK(e3.c[1] == QuadInt{3, 0});
    CHECK(e3.c[2] == QuadInt{3, 0});
    CHECK(e3.c[3] == QuadInt{1, 0});
    for (int i = 4; i <= 32; ++i)
        CHECK(R.is_zero(e3.c[i]));
    // [0] = 0, [1] = T
    CHECK(ps_eq(R, M.endo(QuadInt{0, 0}), ps_zero(R, 32)));
    PSeries idT = ps_zero(R, 32);
    idT.c[1] = QuadInt{1, 0};
    CHECK(ps_eq(R, M.endo(QuadInt{1, 0}), idT));
}

TEST_CASE("canonical module normalization and roots of unity")
{
    FieldCtx f1 = make_field(1);
    auto f = LubinTateModule::canonical_f(f1, QuadInt{5, 0}, 5);
    LubinTateModule M(f1, QuadInt{5, 0}, 5, f, 16, 8);

    // F = X + Y mod degree 2
    TruncPoly F = M.group_law();
    CHECK(F.t.at({1, 0}) == QuadInt{1, 0});
    CHECK(F.t.at({0, 1}) == QuadInt{1, 0});

    // [zeta](T) = zeta*T for zeta^(q-1) = 1
    const PadicRing& R = M.ring();
    QuadInt zeta = R.teichmuller(QuadInt{2, 0});
    PSeries e = M.endo(zeta);
    CHECK(e.c[1] == zeta);
    for (int i = 2; i <= e.degree(); ++i)
        CHECK(R.is_zero(e.c[i]));

    // strictness: linear coefficient is a exactly
    for (long a = -6; a <= 6; ++a)
        CHECK(R.reduce(M.endo(QuadInt{a, 0}).c[1]) == R.reduce(QuadInt{a, 0}));
}

TEST_CASE("endomorphism ring homomorphism properties")
{
    std::mt19937 rng(9);
    std::uniform_int_distribution<long> dist(-8, 8);
    FieldCtx f1 = make_field(1);
    FieldCtx f3 = make_field(3);

    struct Setup {
        FieldCtx ctx;
        QuadInt pi;
        Int q;
        bool gauss;
    };
    std::vector<Setup> setups{
        {f1, QuadInt{2, 0}, 2, false},
        {f1, QuadInt{3, 0}, 3, false},
        {f3, QuadInt{2, 0}, 4, true}, // inert 2 in Q(sqrt(-3)): q = 4
        {f1, QuadInt{5, 0}, 5, false},
        {f1, QuadInt{1, 1}, 2, true}, // ramified-ish split prime of Z[i]
    };
    for (const auto& su : setups) {
        auto f = LubinTateModule::canonical_f(su.ctx, su.pi, su.q);
        LubinTateModule M(su.ctx, su.pi, su.q, f, 16, 8, /*assoc*/ 10);
        const PadicRing& R = M.ring();
        PadicRing Rc = M.work_ring().at_precision(R.prec());
        for (int t = 0; t < 12; ++t) {
            QuadInt a{dist(rng), su.gauss ? dist(rng) : 0};
            QuadInt b{dist(rng), su.gauss ? dist(rng) : 0};
            // [a][b] = [ab]
            PSeries ab = ps_compose(M.work_ring(), M.endo_work(a), M.endo_work(b), 16);
            CHECK(ps_eq(Rc, ab, M.endo_work(su.ctx.mul(a, b))));
            // F([a],[b]) = [a+b]
            PSeries sum = M.add_points(M.endo_work(a), M.endo_work(b));
            CHECK(ps_eq(Rc, sum, M.endo_work(su.ctx.add(a, b))));
        }
        // canonical f: [pi] = pi*T mod T^q (vanishing pattern below degree q)
        PSeries piser = M.endo_work(su.pi);
        for (int i = 2; i < su.q.get_si() && i <= piser.degree(); ++i)
            CHECK(Rc.is_zero(piser.c[i]));
    }
}

TEST_CASE("frobenius congruences [pi^n] = T^(q^n) mod pi")
{
    FieldCtx f1 = make_field(1);
    for (long q : {2L, 3L, 5L}) {
        auto f = LubinTateModule::canonical_f(f1, QuadInt{q, 0}, q);
        LubinTateModule M(f1, QuadInt{q, 0}, q, f, 8, 6);
        auto rep = frobenius_congruence_check(M, 3);
        CHECK(rep.pass);
    }
    // multiplicative case p=2: (1+T)^2-1 = 2T+T^2 = T^2 mod 2, and [4] = T^4 mod 2
    auto fm = LubinTateModule::multiplicative_f(f1, 2);
    LubinTateModule Mm(f1, QuadInt{2, 0}, 2, fm, 8, 6);
    CHECK(frobenius_congruence_check(Mm, 2).pass);
}

TEST_CASE("torsion polynomials and Eisenstein quotients")
{
    FieldCtx f1 = make_field(1);

    // multiplicative p=2, n=1: [2] = 2T+T^2, quotient = T + 2
    auto fm = LubinTateModule::multiplicative_f(f1, 2);
    LubinTateModule Mm(f1, QuadInt{2, 0}, 2, fm, 8, 8);
    auto t1 = torsion_polynomial(Mm, 1);
    CHECK(t1.quotient_degree == 1);
    CHECK(t1.quotient.c[0] == QuadInt{2, 0});
    CHECK(t1.quotient.c[1] == QuadInt{1, 0});
    CHECK(t1.eisenstein);

    // n=0 gives T
    auto t0 = torsion_polynomial(Mm, 0);
    CHECK(t0.pin.c[1] == QuadInt{1, 0});

    // n=2: [4](T) = f(f(T)) of degree 4
    auto t2 = torsion_polynomial(Mm, 2);
    CHECK(t2.pin.degree() == 4);
    CHECK(t2.quotient_degree == 2);
    CHECK(t2.eisenstein);
    // [4] = ((1+T)^4 - 1): binomial coefficients 4, 6, 4, 1
    CHECK(t2.pin.c[1] == QuadInt{4, 0});
    CHECK(t2.pin.c[2] == QuadInt{6, 0});
    CHECK(t2.pin.c[3] == QuadInt{4, 0});
    CHECK(t2.pin.c[4] == QuadInt{1, 0});

    // canonical modules: quotient degrees q^(n-1)(q-1)
    for (long q : {2L, 3L, 5L}) {
        auto f = LubinTateModule::canonical_f(f1, QuadInt{q, 0}, q);
        LubinTateModule M(f1, QuadInt{q, 0}, q, f, 8, 6);
        for (int n = 1; n <= (q <= 3 ? 3 : 2); ++n) {
            auto td = torsion_polynomial(M, n);
            Int expect = q - 1;
            for (int i = 1; i < n; ++i)
                expect *= q;
            CHECK(td.quotient_degree == expect);
            CHECK(td.eisenstein);
        }
    }
    CHECK_THROWS_AS(torsion_polynomial(Mm, 30), ValidationError);
}

TEST_CASE("isomorphism between the canonical and multiplicative modules over Z2")
{
    FieldCtx f1 = make_field(1);
    auto fc = LubinTateModule::canonical_f(f1, QuadInt{2, 0}, 2);
    auto fm = LubinTateModule::multiplicative_f(f1, 2);
    LubinTateModule M1(f1, QuadInt{2, 0}, 2, fc, 16, 8);
    LubinTateModule M2(f1, QuadInt{2, 0}, 2, fm, 16, 8);

    // identity isomorphism
    auto id = lt_isomorphism(M1, M1, QuadInt{1, 0});
    REQUIRE(id.has_value());
    PSeries idT = ps_zero(M1.ring(), 16);
    idT.c[1] = QuadInt{1, 0};
    CHECK(ps_eq(M1.ring(), *id, idT));

    // some phi with u = 1 between the two laws
    auto phi = lt_isomorphism(M1, M2, QuadInt{1, 0});
    REQUIRE(phi.has_value());
    CHECK(phi->c[1] == QuadInt{1, 0});

    CHECK_THROWS_AS(lt_isomorphism(M1, M2, QuadInt{2, 0}), ValidationError); // non-unit
}

TEST_CASE("raising precision and cutoff reproduces lower-precision results")
{
    FieldCtx f1 = make_field(1);
    auto f = LubinTateModule::canonical_f(f1, QuadInt{3, 0}, 3);
    LubinTateModule lo(f1, QuadInt{3, 0}, 3, f, 12, 6);
    LubinTateModule hi(f1, QuadInt{3, 0}, 3, f, 24, 12);
    const PadicRing& R = lo.ring();
    // group law coefficients agree after truncation
    TruncPoly Flo = lo.group_law();
    TruncPoly Fhi = hi.group_law();
    for (const auto& [m, c] : Flo.t) {
        auto it = Fhi.t.find(m);
        QuadInt other = it == Fhi.t.end() ? QuadInt{0, 0} : it->second;
        CHECK(R.reduce(c) == R.reduce(other));
    }
    for (const auto& [m, c] : Fhi.t) {
        if (m[0] + m[1] > 12)
            continue;
        auto it = Flo.t.find(m);
        QuadInt other = it == Flo.t.end() ? QuadInt{0, 0} : it->second;
        CHECK(R.reduce(c) == R.reduce(other));
    }
    for (long a : {2L, 5L, 7L}) {
        PSeries elo = lo.endo(QuadInt{a, 0});
        PSeries ehi = hi.endo(QuadInt{a, 0});
        for (int i = 0; i <= 12; ++i)
            CHECK(R.reduce(elo.c[i]) == R.reduce(ehi.c[i]));
    }
}

TEST_CASE("ill-formed structural series are rejected")
{
    FieldCtx f1 = make_field(1);
    // wrong linear coefficient
    std::vector<QuadInt> bad1{{0, 0}, {3, 0}, {1, 0}};
    CHECK_THROWS_AS(LubinTateModule(f1, QuadInt{2, 0}, 2, bad1, 8, 4), ValidationError);
    // not T^q mod pi
    std::vector<QuadInt> bad2{{0, 0}, {2, 0}, {1, 0}, {1, 0}};
    CHECK_THROWS_AS(LubinTateModule(f1, QuadInt{2, 0}, 2, bad2, 8, 4), ValidationError);
    // missing T^q coefficient entirely
    std::vector<QuadInt> bad3{{0, 0}, {2, 0}};
    CHECK_THROWS_AS(LubinTateModule(f1, QuadInt{2, 0}, 2, bad3, 8, 4), ValidationError);
}
