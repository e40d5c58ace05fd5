#include <catch2/catch_amalgamated.hpp>

#include "brute.hpp"
#include "hopb/chain.hpp"
#include "hopb/gen.hpp"

using namespace hopb;

namespace {

const FieldCtx F2(2);
const FieldCtx F5(5);

using Dims = std::map<int, std::size_t>;

GenConfig small_config(std::uint32_t p)
{
    GenConfig cfg;
    cfg.p = p;
    cfg.degree_lo = -2;
    cfg.degree_hi = 3;
    cfg.max_dim = 3;
    return cfg;
}

/// Secondary quasi-iso test: induced maps on homology are square and invertible.
bool iso_on_homology(const ChainMap& f)
{
    if (homology_dims(f.src()) != homology_dims(f.tgt()))
        return false;
    for (const auto& [n, m] : homology_map(f))
        if (m.rows() != m.cols() || rank(m) != m.rows())
            return false;
    return true;
}

ChainComplex s0_plus_s1(FieldCtx F) { return direct_sum(ChainComplex::sphere(F, 0), ChainComplex::sphere(F, 1)); }

}  // namespace

TEST_CASE("complex construction validates d^2 = 0 and shapes", "[chain]")
{
    const Matrix one = Matrix::identity(F5, 1);
    CHECK_THROWS_AS(ChainComplex(F5, {{0, 1}, {1, 1}, {2, 1}}, {{1, one}, {2, one}}), InvariantError);
    CHECK_THROWS_AS(ChainComplex(F5, {{0, 1}, {1, 2}}, {{1, one}}), InvariantError);
    CHECK_NOTHROW(ChainComplex(F5, {{-2, 1}, {-1, 1}}, {{-1, one}}));
}

TEST_CASE("homology_dims", "[chain]")
{
    CHECK(homology_dims(ChainComplex::sphere(F5, 2)) == Dims{{2, 1}});
    CHECK(homology_dims(ChainComplex::disc(F5, 1)).empty());

    const ChainComplex x(F2, {{1, 2}, {0, 1}}, {{1, Matrix::from_rows(F2, 1, 2, {{1, 1}})}});
    CHECK(hopb::testing::brute_homology(x) == Dims{{1, 1}});
    CHECK(homology_dims(x) == Dims{{1, 1}});
}

TEST_CASE("homology_dims agrees with enumeration on random complexes", "[chain][property]")
{
    for (std::uint32_t p : {2u, 3u}) {
        Generator gen(small_config(p), 11);
        for (int trial = 0; trial < 60; ++trial) {
            const ChainComplex x = gen.complex();
            CHECK(homology_dims(x) == hopb::testing::brute_homology(x));
        }
    }
}

TEST_CASE("weak equivalences, fibrations and cofibrations", "[chain]")
{
    const auto zero = ChainComplex::zero(F5);
    const auto s0 = ChainComplex::sphere(F5, 0);
    const auto s1 = ChainComplex::sphere(F5, 1);

    CHECK(is_weq(ChainMap::identity(s0_plus_s1(F5))));
    CHECK(is_weq(ChainMap::zero(zero, ChainComplex::disc(F5, 1))));
    CHECK_FALSE(is_weq(ChainMap::zero(zero, s0)));

    CHECK(is_fibration(projection_first(s0, s1)));
    CHECK(is_cofibration(inclusion_first(s0, s1)));
    CHECK_FALSE(is_fibration(ChainMap::zero(zero, s0)));
    CHECK(is_cofibration(ChainMap::zero(zero, s0)));
}

TEST_CASE("is_weq agrees with the induced-map check", "[chain][property]")
{
    Generator gen(small_config(5), 3);
    int weqs = 0;
    for (int trial = 0; trial < 80; ++trial) {
        const ChainComplex x = gen.complex();
        const ChainMap f = trial % 2 ? gen.weak_equivalence(x) : gen.chain_map(x, gen.complex());
        const bool w = is_weq(f);
        weqs += w;
        CHECK(w == iso_on_homology(f));
    }
    CHECK(weqs >= 40);
}

TEST_CASE("2-out-of-3 for weak equivalences", "[chain][property]")
{
    for (std::uint32_t p : {2u, 5u}) {
        Generator gen(small_config(p), 17);
        for (int trial = 0; trial < 60; ++trial) {
            const ChainComplex x = gen.complex();
            const ChainMap f = gen.rng().chance(1, 2) ? gen.weak_equivalence(x) : gen.chain_map(x, gen.complex());
            const ChainMap g = gen.rng().chance(1, 2) ? gen.trivial_cofibration_from(f.tgt())
                                                      : gen.chain_map(f.tgt(), gen.complex());
            const int count = is_weq(f) + is_weq(g) + is_weq(compose(g, f));
            CHECK(count != 2);
        }
    }
}

TEST_CASE("path_object", "[chain]")
{
    SECTION("zero complex")
    {
        CHECK(path_object(ChainComplex::zero(F5)).object.is_zero());
    }
    SECTION("sphere: P(0) = F^2, P(-1) = F, homology of S(0)")
    {
        const auto po = path_object(ChainComplex::sphere(F5, 0));
        CHECK(po.object.dims() == Dims{{0, 2}, {-1, 1}});
        CHECK(homology_dims(po.object) == Dims{{0, 1}});
        CHECK(is_weq(po.diagonal));
    }
    SECTION("disc: acyclic")
    {
        CHECK(homology_dims(path_object(ChainComplex::disc(F5, 1)).object).empty());
    }
    SECTION("random complexes")
    {
        Generator gen(small_config(5), 5);
        for (int trial = 0; trial < 40; ++trial) {
            const ChainComplex y = gen.complex();
            const auto po = path_object(y);
            CHECK(is_weq(po.diagonal));
            CHECK(is_fibration(po.ends));
            const ChainMap diag = pair_map(ChainMap::identity(y), ChainMap::identity(y));
            CHECK(compose(po.ends, po.diagonal) == diag);
            CHECK(homology_dims(po.object) == homology_dims(y));
        }
    }
}

TEST_CASE("factorize", "[chain]")
{
    SECTION("identity")
    {
        const auto y = s0_plus_s1(F5);
        const auto fac = factorize(ChainMap::identity(y));
        CHECK(compose(fac.q, fac.i) == ChainMap::identity(y));
        CHECK(is_cofibration(fac.i));
        CHECK(is_weq(fac.i));
        CHECK(is_fibration(fac.q));
    }
    SECTION("0 -> S(0): the path space is acyclic")
    {
        const auto s0 = ChainComplex::sphere(F5, 0);
        const auto fac = factorize(ChainMap::zero(ChainComplex::zero(F5), s0));
        CHECK(homology_dims(fac.mid).empty());
        CHECK(is_fibration(fac.q));
        CHECK(rank(fac.q.at(0)) == 1);
    }
    SECTION("already a fibration")
    {
        const auto f = projection_first(ChainComplex::sphere(F5, 0), ChainComplex::sphere(F5, 1));
        const auto fac = factorize(f);
        CHECK(compose(fac.q, fac.i) == f);
        CHECK(is_cofibration(fac.i));
        CHECK(is_weq(fac.i));
        CHECK(is_fibration(fac.q));
    }
    SECTION("the middle object is the pullback X x_Y P(Y)")
    {
        Generator gen(small_config(2), 8);
        for (int trial = 0; trial < 20; ++trial) {
            const ChainMap f = gen.chain_map(gen.complex(), gen.complex());
            const auto po = path_object(f.tgt());
            const auto ev0 = compose(projection_first(f.tgt(), f.tgt()), po.ends);
            const Pullback pb = pullback(f, ev0);
            const auto fac = factorize(f);
            CHECK(pb.object.dims() == fac.mid.dims());
            CHECK(homology_dims(pb.object) == homology_dims(fac.mid));
        }
    }
}

TEST_CASE("factorize_morphism", "[chain]")
{
    Generator gen(small_config(5), 21);
    const ChainMap f = gen.chain_map(gen.complex(), gen.complex());
    const auto fac = factorize(f);

    SECTION("identity square gives the identity")
    {
        const auto m = factorize_morphism(f, f, ChainMap::identity(f.src()), ChainMap::identity(f.tgt()));
        CHECK(m == ChainMap::identity(fac.mid));
    }
    SECTION("weak equivalences induce a weak equivalence")
    {
        // a: X -> X (+) P and b: Y -> Y (+) P' with f' chosen so the square commutes.
        const ChainMap a = gen.trivial_cofibration_from(f.src());
        const Pushout po = pushout(f, a);
        const ChainMap b = po.from_d;
        const ChainMap f2 = po.from_c;
        REQUIRE(is_weq(a));
        REQUIRE(is_weq(b));
        const auto m = factorize_morphism(f, f2, a, b);
        CHECK(is_weq(m));
    }
    SECTION("zero maps")
    {
        const auto z = ChainComplex::zero(F5);
        const ChainMap zf = ChainMap::zero(z, z);
        const auto m = factorize_morphism(f, zf, ChainMap::zero(f.src(), z), ChainMap::zero(f.tgt(), z));
        CHECK(m.tgt().is_zero());
    }
    SECTION("non-commuting square")
    {
        const ChainMap b = ChainMap::zero(f.tgt(), f.tgt());
        if (!(compose(b, f) == compose(f, ChainMap::identity(f.src()))))
            CHECK_THROWS_AS(factorize_morphism(f, f, ChainMap::identity(f.src()), b), InvariantError);
    }
}

TEST_CASE("factorization axioms and naturality on random maps", "[chain][property]")
{
    for (std::uint32_t p : {2u, 5u}) {
        Generator gen(small_config(p), 99);
        for (int trial = 0; trial < 40; ++trial) {
            const ChainMap f = gen.chain_map(gen.complex(), gen.complex());
            const auto fac = factorize(f);
            CHECK(compose(fac.q, fac.i) == f);
            CHECK(is_cofibration(fac.i));
            CHECK(is_weq(fac.i));
            CHECK(is_fibration(fac.q));

            const ChainMap a = gen.chain_map(f.src(), gen.complex());
            const Pushout po = pushout(f, a);
            const auto m = factorize_morphism(f, po.from_c, a, po.from_d);
            const auto fac2 = factorize(po.from_c);
            CHECK(compose(m, fac.i) == compose(fac2.i, a));
            CHECK(compose(fac2.q, m) == compose(po.from_d, fac.q));
        }
    }
}

TEST_CASE("pullback", "[chain]")
{
    SECTION("pullback of identities is the diagonal")
    {
        const auto y = s0_plus_s1(F5);
        const auto id = ChainMap::identity(y);
        const Pullback pb = pullback(id, id);
        CHECK(pb.object.dims() == y.dims());
        CHECK(is_weq(pb.to_b));
        CHECK(is_cofibration(pb.to_b));
        CHECK(is_fibration(pb.to_b));
        const ChainMap w = universal_into_pullback(id, id, pb);
        CHECK(compose(pb.to_b, w) == id);
        CHECK(compose(w, pb.to_b) == ChainMap::identity(pb.object));
    }
    SECTION("fiber over zero is the kernel")
    {
        Generator gen(small_config(2), 4);
        const ChainMap f = gen.chain_map(gen.complex(), gen.complex());
        const Pullback pb = pullback(f, ChainMap::zero(ChainComplex::zero(F2), f.tgt()));
        for (auto [n, k] : f.src().dims())
            CHECK(pb.object.dim(n) == k - rank(f.at(n)));
    }
    SECTION("projection S(0) + S(1) -> S(0) against 0 -> S(0) gives S(1)")
    {
        const auto s0 = ChainComplex::sphere(F5, 0);
        const Pullback pb = pullback(projection_first(s0, ChainComplex::sphere(F5, 1)),
                                     ChainMap::zero(ChainComplex::zero(F5), s0));
        CHECK(pb.object.dims() == Dims{{1, 1}});
    }
}

TEST_CASE("universal_into_pullback", "[chain]")
{
    Generator gen(small_config(5), 31);
    const ChainMap f = gen.fibration_onto(gen.complex());
    const ChainMap g = gen.chain_map(gen.complex(), f.tgt());
    const Pullback pb = pullback(f, g);

    CHECK(universal_into_pullback(pb.to_b, pb.to_c, pb) == ChainMap::identity(pb.object));

    const auto z = ChainComplex::zero(F5);
    CHECK(universal_into_pullback(ChainMap::zero(z, f.src()), ChainMap::zero(z, g.src()), pb).src().is_zero());

    // Any map into the pullback is recovered from its two projections.
    const ChainMap a = gen.chain_map(gen.complex(), pb.object);
    CHECK(universal_into_pullback(compose(pb.to_b, a), compose(pb.to_c, a), pb) == a);

    if (!compose(f, ChainMap::identity(f.src())).components().empty()) {
        const ChainMap bad = ChainMap::zero(g.src(), g.src());
        if (!(compose(f, pb.to_b) == compose(g, compose(bad, pb.to_c))))
            CHECK_THROWS_AS(universal_into_pullback(pb.to_b, compose(bad, pb.to_c), pb), InvariantError);
    }
}

TEST_CASE("pushout", "[chain]")
{
    SECTION("along the identity")
    {
        Generator gen(small_config(5), 41);
        const ChainMap g = gen.chain_map(gen.complex(), gen.complex());
        const Pushout po = pushout(g, ChainMap::identity(g.src()));
        CHECK(po.object.dims() == g.tgt().dims());
        CHECK(is_weq(po.from_d));
        CHECK(is_cofibration(po.from_d));
        CHECK(is_fibration(po.from_d));
    }
    SECTION("from the zero complex is the direct sum")
    {
        const auto z = ChainComplex::zero(F5);
        const auto d = ChainComplex::sphere(F5, 0);
        const auto c = ChainComplex::disc(F5, 2);
        const Pushout po = pushout(ChainMap::zero(z, d), ChainMap::zero(z, c));
        CHECK(po.object.dims() == direct_sum(d, c).dims());
    }
    SECTION("S(0) <- S(0) -> D(1): one class in degrees 1 and 0, acyclic")
    {
        const auto s0 = ChainComplex::sphere(F5, 0);
        const auto d1 = ChainComplex::disc(F5, 1);
        const ChainMap incl(s0, d1, {{0, Matrix::identity(F5, 1)}});
        const Pushout po = pushout(ChainMap::identity(s0), incl);
        CHECK(po.object.dims() == Dims{{1, 1}, {0, 1}});
        CHECK(homology_dims(po.object).empty());
    }
    SECTION("universal property")
    {
        Generator gen(small_config(2), 43);
        for (int trial = 0; trial < 20; ++trial) {
            const ChainMap g = gen.chain_map(gen.complex(), gen.complex());
            const ChainMap h = gen.chain_map(g.src(), gen.complex());
            const Pushout po = pushout(g, h);
            CHECK(compose(po.from_d, g) == compose(po.from_c, h));
            const ChainMap out = gen.chain_map(po.object, gen.complex());
            const ChainMap w = universal_from_pushout(compose(out, po.from_d), compose(out, po.from_c), po);
            CHECK(w == out);
        }
    }
}

TEST_CASE("chain_homotopy", "[chain]")
{
    SECTION("equal maps: zero homotopy")
    {
        const auto id = ChainMap::identity(s0_plus_s1(F5));
        auto h = chain_homotopy(id, id);
        REQUIRE(h);
        for (int n = -2; n <= 2; ++n)
            CHECK(h->at(n).is_zero());
    }
    SECTION("the disc is contractible")
    {
        const auto d1 = ChainComplex::disc(F5, 1);
        auto h = chain_homotopy(ChainMap::identity(d1), ChainMap::zero(d1, d1));
        REQUIRE(h);
        // d h + h d = 1 forces h(0) = 1 and h(1) = 0 here.
        CHECK(h->at(0) == Matrix::identity(F5, 1));
        CHECK(h->at(1).is_zero());
    }
    SECTION("a sphere is not contractible")
    {
        const auto s0 = ChainComplex::sphere(F5, 0);
        CHECK_FALSE(chain_homotopy(ChainMap::identity(s0), ChainMap::zero(s0, s0)));
        CHECK_FALSE(chain_homotopy_by_linear_system(ChainMap::identity(s0), ChainMap::zero(s0, s0)));
    }
}

TEST_CASE("chain_homotopy agrees with the linear-system route", "[chain][property]")
{
    for (std::uint32_t p : {2u, 3u}) {
        Generator gen(small_config(p), 77);
        int found = 0;
        for (int trial = 0; trial < 60; ++trial) {
            const ChainComplex x = gen.complex();
            const ChainComplex y = gen.complex();
            const ChainMap f = gen.chain_map(x, y);
            // Half the time g = f + (d k + k d), which is homotopic to f by construction.
            ChainMap g = gen.chain_map(x, y);
            if (trial % 2 == 0) {
                std::map<int, Matrix> k, null;
                for (auto [n, dn] : x.dims())
                    k.emplace(n, gen.matrix(y.dim(n + 1), dn));
                auto at = [&](int n) { return k.count(n) ? k.at(n) : Matrix(x.field(), y.dim(n + 1), x.dim(n)); };
                for (auto [n, dn] : x.dims())
                    if (y.dim(n))
                        null.emplace(n, y.d(n + 1) * at(n) + at(n - 1) * x.d(n));
                g = f + ChainMap(x, y, null);
            }
            auto fast = chain_homotopy(f, g);
            auto ref = chain_homotopy_by_linear_system(f, g);
            CHECK(bool(fast) == bool(ref));
            CHECK(bool(fast) == (homology_map(f) == homology_map(g)));
            if (trial % 2 == 0)
                CHECK(fast);
            found += bool(fast);
        }
        CHECK(found >= 30);
    }
}

TEST_CASE("lift", "[chain]")
{
    Generator gen(small_config(5), 51);

    SECTION("from the zero complex into a fibration")
    {
        const ChainComplex z = gen.acyclic(3);
        const ChainMap p = gen.fibration_onto(gen.complex());
        const ChainMap v = gen.chain_map(z, p.tgt());
        const auto zero = ChainComplex::zero(F5);
        const ChainMap i = ChainMap::zero(zero, z);
        const ChainMap u = ChainMap::zero(zero, p.src());
        const ChainMap l = lift(i, p, u, v);
        CHECK(compose(p, l) == v);
    }
    SECTION("along the identity the lift is u")
    {
        const ChainMap p = gen.fibration_onto(gen.complex());
        const ChainMap u = gen.chain_map(gen.complex(), p.src());
        const ChainMap l = lift(ChainMap::identity(u.src()), p, u, compose(p, u));
        CHECK(l == u);
    }
    SECTION("Z = X (+) D(1) over the zero complex")
    {
        const ChainComplex x = gen.complex();
        const ChainComplex e = gen.complex();
        const ChainMap u = gen.chain_map(x, e);
        const ChainMap i = inclusion_first(x, ChainComplex::disc(F5, 1));
        const auto zero = ChainComplex::zero(F5);
        const ChainMap l = lift(i, ChainMap::zero(e, zero), u, ChainMap::zero(i.tgt(), zero));
        CHECK(compose(l, i) == u);
    }
    SECTION("precondition failures")
    {
        const auto s0 = ChainComplex::sphere(F5, 0);
        const auto zero = ChainComplex::zero(F5);
        // 0 -> S(0) is a cofibration but not a weak equivalence.
        CHECK_THROWS_AS(lift(ChainMap::zero(zero, s0), ChainMap::identity(s0), ChainMap::zero(zero, s0),
                             ChainMap::identity(s0)),
                        LiftError);
        // 0 -> S(0) is not a fibration.
        CHECK_THROWS_AS(lift(ChainMap::identity(zero), ChainMap::zero(zero, s0), ChainMap::identity(zero),
                             ChainMap::zero(zero, s0)),
                        LiftError);
        // Non-commuting square.
        CHECK_THROWS_AS(lift(ChainMap::identity(s0), ChainMap::identity(s0), ChainMap::identity(s0),
                             ChainMap::zero(s0, s0)),
                        LiftError);
    }
}

TEST_CASE("lifts satisfy their postconditions and are homotopic", "[chain][property]")
{
    for (std::uint32_t p : {2u, 5u}) {
        Generator gen(small_config(p), 123);
        for (int trial = 0; trial < 40; ++trial) {
            const ChainMap i = gen.trivial_cofibration_from(gen.complex());
            const ChainMap fib = gen.fibration_onto(gen.complex());
            // Any chain map Z -> E yields a commuting problem.
            const ChainMap witness = gen.chain_map(i.tgt(), fib.src());
            const ChainMap u = compose(witness, i);
            const ChainMap v = compose(fib, witness);

            const ChainMap l1 = lift(i, fib, u, v);
            const ChainMap l2 = lift(i, fib, u, v, gen.rng().next());
            auto l3 = lift_by_linear_system(i, fib, u, v);
            REQUIRE(l3);
            for (const ChainMap& l : {l1, l2, *l3}) {
                CHECK(compose(l, i) == u);
                CHECK(compose(fib, l) == v);
            }
            CHECK(chain_homotopy(l1, l2));
            CHECK(chain_homotopy(l1, *l3));
        }
    }
}

TEST_CASE("pullbacks along fibrations preserve weak equivalences", "[chain][property]")
{
    Generator gen(small_config(5), 8);
    for (int trial = 0; trial < 30; ++trial) {
        const ChainComplex d = gen.complex();
        const ChainMap f = gen.fibration_onto(d);
        const ChainMap g = gen.weak_equivalence(gen.complex());
        const ChainMap h = gen.chain_map(g.tgt(), d);
        const Pullback small = pullback(f, compose(h, g));
        const Pullback big = pullback(f, h);
        const ChainMap u = universal_into_pullback(small.to_b, compose(g, small.to_c), big);
        CHECK(is_weq(u));
    }
}
