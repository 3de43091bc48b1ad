#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rayclass.hpp"

using namespace cmll;

namespace {

// Independent class-number oracle: count reduced primitive binary quadratic
// forms (a, b, c) of the given negative discriminant.
long reduced_form_count(const Int& disc)
{
    long count = 0;
    for (Int a = 1; 3 * a * a <= -disc; ++a) {
        for (Int b = -a + 1; b <= a; ++b) {
            Int num = b * b - disc;
            if (!divides(4 * a, num))
                continue;
            Int c = num / (4 * a);
            if (c < a)
                continue;
            if ((abs(b) == a || a == c) && b < 0)
                continue;
            if (gcd(gcd(a, abs(b)), c) != 1)
                continue;
            ++count;
        }
    }
    return count;
}

KElem qi(long a, long b, long den = 1)
{
    return KElem{QuadInt{a, b}, Int(den)};
}

} // namespace

TEST_CASE("class numbers against the reduced-forms oracle")
{
    for (const long dval : {1L, 2L, 3L, 5L, 7L, 11L, 14L, 23L, 47L, 163L}) {
        FieldCtx ctx = make_field(dval);
        ClassGroup cg(ctx);
        CHECK(cg.h() == reduced_form_count(ctx.disc()));
    }
}

TEST_CASE("class group structure basics")
{
    FieldCtx f5 = make_field(5);
    ClassGroup cg5(f5);
    REQUIRE(cg5.h() == 2);
    CHECK(cg5.reps()[0].is_one());
    CHECK(cg5.reps()[1].norm_int() == 2);
    CHECK(cg5.elementary() == std::vector<Int>{2});
    CHECK(cg5.mul(1, 1) == 0);

    FieldCtx f23 = make_field(23);
    ClassGroup cg23(f23);
    REQUIRE(cg23.h() == 3);
    CHECK(cg23.elementary() == std::vector<Int>{3});

    // position() finds the right witness
    auto pos = cg5.position(FracIdeal::from_gens(f5, {qi(3, 0), qi(1, 1)}));
    CHECK(pos.cls == 1);
}

TEST_CASE("ray class group orders")
{
    FieldCtx f1 = make_field(1);
    ClassGroup cg1(f1);

    RayClassGroup g3(f1, FracIdeal::from_int(f1, 3), cg1);
    CHECK(g3.order() == 2);
    CHECK(g3.elementary() == std::vector<Int>{2});

    RayClassGroup g2i(f1, FracIdeal::principal(f1, qi(2, 1)), cg1);
    CHECK(g2i.order() == 1);

    // f = O_K: CL^(f) is CL
    RayClassGroup gtriv(f1, FracIdeal::one(f1), cg1);
    CHECK(gtriv.order() == 1);

    FieldCtx f5 = make_field(5);
    ClassGroup cg5(f5);
    RayClassGroup g5(f5, FracIdeal::one(f5), cg5);
    CHECK(g5.order() == 2);
    CHECK(g5.elementary() == cg5.elementary());
}

TEST_CASE("bracket map: identity cases and a nontrivial class")
{
    FieldCtx f1 = make_field(1);
    ClassGroup cg1(f1);
    FracIdeal three = FracIdeal::from_int(f1, 3);
    RayClassGroup G(f1, three, cg1);

    CHECK(G.bracket_ideal(FracIdeal::one(f1)) == G.identity());
    // principal with generator = 1 mod f
    CHECK(G.bracket_ideal(FracIdeal::principal(f1, qi(4, 0))) == G.identity());
    CHECK(G.bracket_ideal(FracIdeal::principal(f1, qi(1, 3))) == G.identity());
    // (1+i) generates the nontrivial class of CL^((3))
    long e = G.bracket_ideal(FracIdeal::principal(f1, qi(1, 1)));
    CHECK(e != G.identity());
    CHECK(G.mul(e, e) == G.identity());
}

TEST_CASE("bracket map is a homomorphism on a coprime corpus")
{
    for (const long dval : {1L, 5L}) {
        FieldCtx ctx = make_field(dval);
        ClassGroup cg(ctx);
        FracIdeal f = FracIdeal::from_int(ctx, 3);
        RayClassGroup G(ctx, f, cg);
        std::vector<FracIdeal> corpus;
        for (const auto& a : ideals_up_to_norm(ctx, 25))
            if (is_coprime(ctx, a, f))
                corpus.push_back(a);
        for (size_t i = 0; i < corpus.size(); i += 2)
            for (size_t j = 0; j < corpus.size(); j += 2) {
                long lhs = G.bracket_ideal(FracIdeal::mul(ctx, corpus[i], corpus[j]));
                CHECK(lhs == G.mul(G.bracket_ideal(corpus[i]), G.bracket_ideal(corpus[j])));
            }
        // inverse ideals map to inverse classes
        for (size_t i = 0; i < corpus.size(); i += 5)
            CHECK(G.bracket_ideal(corpus[i].inv(ctx)) == G.inv(G.bracket_ideal(corpus[i])));
    }
}

TEST_CASE("kernel check and enumeration order")
{
    FieldCtx f1 = make_field(1);
    ClassGroup cg1(f1);
    RayClassGroup G(f1, FracIdeal::from_int(f1, 3), cg1);
    auto rep = G.kernel_check(50);
    CHECK(rep.pass);
    CHECK(rep.checked > 20);
    CHECK(G.order_by_enumeration(30) == 2);

    FieldCtx f5 = make_field(5);
    ClassGroup cg5(f5);
    RayClassGroup G5(f5, FracIdeal::one(f5), cg5);
    CHECK(G5.order_by_enumeration(10) == 2);
    // h = 2 witness
    CHECK(G5.bracket_ideal(FracIdeal::from_gens(f5, {qi(2, 0), qi(1, 1)})) != G5.identity());

    FieldCtx f23 = make_field(23);
    ClassGroup cg23(f23);
    RayClassGroup G23(f23, FracIdeal::one(f23), cg23);
    CHECK(G23.order_by_enumeration(15) == 3);
}

TEST_CASE("separates_units")
{
    FieldCtx f1 = make_field(1);
    CHECK_FALSE(separates_units(f1, FracIdeal::principal(f1, qi(1, 1))));
    CHECK(separates_units(f1, FracIdeal::principal(f1, qi(2, 1))));
    FieldCtx f5 = make_field(5);
    CHECK(separates_units(f5, FracIdeal::from_int(f5, 3)));
    CHECK_FALSE(separates_units(f5, FracIdeal::one(f5)));
}

TEST_CASE("idele brackets")
{
    FieldCtx f1 = make_field(1);
    ClassGroup cg1(f1);
    FracIdeal three = FracIdeal::from_int(f1, 3);
    RayClassGroup G(f1, three, cg1);

    // s = 1 everywhere
    CHECK(G.bracket_idele({}) == G.identity());

    // s a uniformizer at one prime away from f: [s] = [p^-1] = [p]^-1
    FracIdeal p5 = primes_above(f1, 5)[0].first;
    IdeleComponent c{p5, 1, QuadInt{1, 0}, 0};
    CHECK(G.bracket_idele({c}) == G.inv(G.bracket_ideal(p5)));

    // s = global unit at every prime of a finite support set including f
    for (const auto& u : f1.unit_group()) {
        std::vector<IdeleComponent> s;
        s.push_back({three, 0, u, 1});
        s.push_back({p5, 0, u, 1});
        CHECK(G.bracket_idele(s) == G.identity());
    }

    // diagonal element of K^x supported on its own primes and f
    // s = (1+i) at (1+i) and at (3): [s] must be trivial
    FracIdeal p2 = FracIdeal::principal(f1, qi(1, 1));
    std::vector<IdeleComponent> diag;
    diag.push_back({p2, 1, QuadInt{1, 1}, 0});
    diag.push_back({three, 0, QuadInt{1, 1}, 1});
    CHECK(G.bracket_idele(diag) == G.identity());

    // nontrivial twist: unit residue (1+w) at (3) only
    std::vector<IdeleComponent> tw{{three, 0, QuadInt{1, 1}, 1}};
    CHECK(G.bracket_idele(tw) != G.identity());

    // error paths
    CHECK_THROWS_AS(G.bracket_idele({{three, 1, QuadInt{1, 0}, 1}}), ValidationError);
    CHECK_THROWS_AS(G.bracket_idele({{three, 0, QuadInt{1, 0}, 0}}), ValidationError);
    CHECK_THROWS_AS(G.bracket_idele({{FracIdeal::from_int(f1, 6), 1, QuadInt{1, 0}, 0}}),
                    ValidationError);
}

TEST_CASE("exactness of the five-term sequence at small conductors")
{
    for (const long dval : {1L, 3L, 5L}) {
        FieldCtx ctx = make_field(dval);
        ClassGroup cg(ctx);
        for (const auto& f : ideals_up_to_norm(ctx, 25)) {
            auto rep = exactness_check(ctx, f, cg);
            if (!rep.pass) {
                for (const auto& msg : rep.failures)
                    MESSAGE(msg);
            }
            CHECK(rep.pass);
        }
    }
}

TEST_CASE("reduction between conductors commutes with brackets")
{
    FieldCtx f1 = make_field(1);
    ClassGroup cg1(f1);
    RayClassGroup G3(f1, FracIdeal::from_int(f1, 3), cg1);
    RayClassGroup G9(f1, FracIdeal::from_int(f1, 9), cg1);
    auto rep = surjection_check(G3, G9, 40);
    CHECK(rep.pass);

    FieldCtx f5 = make_field(5);
    ClassGroup cg5(f5);
    RayClassGroup H1(f5, FracIdeal::one(f5), cg5);
    RayClassGroup H3(f5, FracIdeal::from_int(f5, 3), cg5);
    auto rep2 = surjection_check(H1, H3, 40);
    CHECK(rep2.pass);
}

TEST_CASE("dlog and canonical representatives")
{
    FieldCtx f1 = make_field(1);
    ClassGroup cg1(f1);
    RayClassGroup G(f1, FracIdeal::from_int(f1, 9), cg1);
    // order = 1 * #(Z[i]/9)^x / 4 = 54/4? (Z[i]/9)^x has 81*(1-1/9)=72... check via group
    CHECK(G.order() == G.residue_unit_count() / G.global_unit_image_size());
    for (long e = 0; e < G.order(); ++e) {
        auto x = G.dlog(e);
        long acc = G.identity();
        for (size_t i = 0; i < x.size(); ++i)
            acc = G.mul(acc, G.pow(G.generators()[i].first, Int(x[i])));
        CHECK(acc == e);
        const FracIdeal& I = G.canonical_ideal(e);
        CHECK(G.bracket_ideal(I) == e);
    }
}
