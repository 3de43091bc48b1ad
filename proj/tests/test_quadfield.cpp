#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ideals.hpp"
#include "quadfield.hpp"

#include <random>
#include <set>

using namespace cmll;

TEST_CASE("make_field basic invariants")
{
    FieldCtx f1 = make_field(1);
    CHECK(f1.disc() == -4);
    CHECK(f1.omega_kind() == OmegaKind::SQRT);
    CHECK(f1.w() == 4);

    FieldCtx f3 = make_field(3);
    CHECK(f3.disc() == -3);
    CHECK(f3.omega_kind() == OmegaKind::HALF);
    CHECK(f3.w() == 6);

    FieldCtx f2 = make_field(2);
    CHECK(f2.disc() == -8);
    CHECK(f2.w() == 2);

    CHECK_THROWS_AS(make_field(4), ValidationError);
    CHECK_THROWS_AS(make_field(12), ValidationError);
    CHECK_THROWS_AS(make_field(0), ValidationError);
    CHECK_THROWS_AS(make_field(-3), ValidationError);
}

TEST_CASE("unit groups")
{
    FieldCtx f1 = make_field(1);
    auto u1 = f1.unit_group();
    REQUIRE(u1.size() == 4);
    CHECK(u1[0] == QuadInt{1, 0});
    // closed under multiplication and conjugation, all of norm 1
    for (const auto& x : u1) {
        CHECK(f1.norm(x) == 1);
        bool found = false;
        for (const auto& y : u1)
            if (f1.conj(x) == y)
                found = true;
        CHECK(found);
        for (const auto& y : u1) {
            QuadInt p = f1.mul(x, y);
            bool in = false;
            for (const auto& z : u1)
                if (p == z)
                    in = true;
            CHECK(in);
        }
    }

    FieldCtx f5 = make_field(5);
    auto u5 = f5.unit_group();
    REQUIRE(u5.size() == 2);
    CHECK(u5[1] == QuadInt{-1, 0});

    FieldCtx f3 = make_field(3);
    auto u3 = f3.unit_group();
    REQUIRE(u3.size() == 6);
    std::set<std::pair<std::string, std::string>> distinct;
    for (const auto& x : u3) {
        CHECK(f3.norm(x) == 1);
        distinct.insert({x.a.get_str(), x.b.get_str()});
    }
    CHECK(distinct.size() == 6);
}

TEST_CASE("norm, trace, conj examples")
{
    FieldCtx f1 = make_field(1);
    CHECK(f1.norm(QuadInt{1, 1}) == 2); // 1+i

    FieldCtx f5 = make_field(5);
    CHECK(f5.norm(QuadInt{0, 1}) == 5);
    CHECK(f5.trace(QuadInt{0, 1}) == 0);

    // d=3, w = (1+sqrt(-3))/2: expand (1+sqrt(-3))(1-sqrt(-3))/4 = 1
    FieldCtx f3 = make_field(3);
    CHECK(f3.norm(QuadInt{0, 1}) == 1);
    CHECK(f3.trace(QuadInt{0, 1}) == 1);
}

TEST_CASE("ring axioms and norm multiplicativity on random elements")
{
    std::mt19937 rng(42);
    std::uniform_int_distribution<long> dist(-50, 50);
    for (const long dval : {1L, 2L, 3L, 5L, 7L, 11L}) {
        FieldCtx ctx = make_field(dval);
        for (int i = 0; i < 200; ++i) {
            QuadInt x{dist(rng), dist(rng)}, y{dist(rng), dist(rng)}, z{dist(rng), dist(rng)};
            CHECK(ctx.norm(ctx.mul(x, y)) == ctx.norm(x) * ctx.norm(y));
            CHECK(ctx.conj(ctx.conj(x)) == x);
            CHECK(ctx.mul(x, ctx.conj(x)) == QuadInt{ctx.norm(x), 0});
            CHECK(ctx.add(x, ctx.conj(x)) == QuadInt{ctx.trace(x), 0});
            CHECK(ctx.mul(x, ctx.add(y, z)) == ctx.add(ctx.mul(x, y), ctx.mul(x, z)));
            CHECK(ctx.mul(ctx.mul(x, y), z) == ctx.mul(x, ctx.mul(y, z)));
            // conj is a ring automorphism
            CHECK(ctx.conj(ctx.mul(x, y)) == ctx.mul(ctx.conj(x), ctx.conj(y)));
        }
    }
}

TEST_CASE("field element arithmetic in lowest terms")
{
    FieldCtx ctx = make_field(3);
    KElem half = ctx.make_elem(QuadInt{1, 1}, 2);
    KElem prod = ctx.k_mul(half, ctx.k_inv(half));
    CHECK(prod == ctx.make_elem(QuadInt{1, 0}, 1));
    KElem e2 = ctx.make_elem(QuadInt{2, 4}, 6);
    CHECK(e2.den == 3);
    CHECK(e2.num == QuadInt{1, 2});
    CHECK_THROWS_AS(ctx.k_inv(ctx.make_elem(QuadInt{0, 0}, 1)), ValidationError);
}

TEST_CASE("element string round trip")
{
    FieldCtx ctx = make_field(1);
    CHECK(FieldCtx::format(QuadInt{3, -2}) == "3+-2*w");
    CHECK(FieldCtx::parse_quadint("3+-2*w") == QuadInt{3, -2});
    CHECK(FieldCtx::parse_quadint("5") == QuadInt{5, 0});
    CHECK(FieldCtx::parse_quadint("-7+1*w") == QuadInt{-7, 1});
    KElem e = FieldCtx::parse_elem("1+1*w/2");
    CHECK(e.num == QuadInt{1, 1});
    CHECK(e.den == 2);
    CHECK_THROWS_AS(FieldCtx::parse_quadint("w+3"), ValidationError);
    CHECK_THROWS_AS(FieldCtx::parse_quadint("3+2w"), ValidationError);
}

TEST_CASE("residue ring sizes and units")
{
    FieldCtx f1 = make_field(1);
    // (1+i) has norm 2
    FracIdeal p2 = FracIdeal::principal(f1, KElem{QuadInt{1, 1}, 1});
    ResidueRing r2(f1, p2);
    CHECK(r2.size() == 2);

    FracIdeal three = FracIdeal::from_int(f1, 3);
    ResidueRing r9(f1, three);
    CHECK(r9.size() == 9);
    CHECK(r9.units().size() == 8);

    ResidueRing r1(f1, FracIdeal::one(f1));
    CHECK(r1.size() == 1);

    CHECK_THROWS_AS(ResidueRing(f1, FracIdeal::from_hnf(f1, 3, 0, 3, 2)), ValidationError);
}

TEST_CASE("reduction is a surjective ring homomorphism with kernel f")
{
    for (const long dval : {1L, 5L}) {
        FieldCtx ctx = make_field(dval);
        for (const auto& f :
             {FracIdeal::from_int(ctx, 3), ideals_of_norm(ctx, 2).at(0), FracIdeal::from_int(ctx, 4)}) {
            ResidueRing R(ctx, f);
            std::mt19937 rng(7);
            std::uniform_int_distribution<long> dist(-30, 30);
            for (int i = 0; i < 100; ++i) {
                QuadInt x{dist(rng), dist(rng)}, y{dist(rng), dist(rng)};
                CHECK(R.reduce(ctx.add(x, y)) == R.add(R.reduce(x), R.reduce(y)));
                CHECK(R.reduce(ctx.mul(x, y)) == R.mul(R.reduce(x), R.reduce(y)));
                // kernel is exactly f
                CHECK((R.reduce(x) == QuadInt{0, 0}) == f.contains_quadint(x));
            }
            // surjectivity: the canonical representatives are fixed points
            for (const auto& e : R.elements())
                CHECK(R.reduce(e) == e);
        }
    }
}

TEST_CASE("residue ring unit group order is multiplicative over prime powers")
{
    FieldCtx ctx = make_field(1);
    // f = (3)*(1+i): N = 18, units = 8 * 1
    FracIdeal f = FracIdeal::mul(ctx, FracIdeal::from_int(ctx, 3),
                                 FracIdeal::principal(ctx, KElem{QuadInt{1, 1}, 1}));
    ResidueRing R(ctx, f);
    CHECK(R.size() == 18);
    CHECK(R.units().size() == 8);
}
