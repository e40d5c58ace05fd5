#include <catch2/catch_amalgamated.hpp>

#include "hopb/gen.hpp"
#include "hopb/hopull.hpp"
#include "hopb/oracle.hpp"

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

Cospan zero_legs(const ChainComplex& d)
{
    const auto z = ChainComplex::zero(d.field());
    return Cospan(ChainMap::zero(z, d), ChainMap::zero(z, d));
}

CommSquare identity_square(const ChainComplex& y)
{
    const auto id = ChainMap::identity(y);
    return CommSquare(id, id, Cospan(id, id));
}

/// B = S(0) (+) S(1) ->> D = S(0) <- C = 0, with vertex the strict pullback S(1) or 0.
CommSquare anchor_square(FieldCtx F, bool empty_vertex)
{
    const auto s0 = ChainComplex::sphere(F, 0);
    const auto s1 = ChainComplex::sphere(F, 1);
    const auto z = ChainComplex::zero(F);
    const Cospan x(ChainMap::zero(z, s0), projection_first(s0, s1));
    const ChainComplex a = empty_vertex ? z : s1;
    return CommSquare(empty_vertex ? ChainMap::zero(z, x.b()) : inclusion_second(s0, s1), ChainMap::zero(a, z), x);
}

bool all_verdicts(const CommSquare& sq, bool expected)
{
    bool ok = is_model_square_full(sq) == expected && is_homotopy_fiber_square(sq) == expected;
    for (Sigma s : kAllSigmas)
        for (ReplaceMode m : kAllModes)
            ok = ok && is_model_square(sq, s, m) == expected;
    return ok;
}

}  // namespace

TEST_CASE("CommSquare validates commutation", "[hopull]")
{
    const auto s0 = ChainComplex::sphere(F5, 0);
    const auto id = ChainMap::identity(s0);
    const auto z = ChainMap::zero(s0, s0);
    CHECK_THROWS_AS(CommSquare(id, z, Cospan(id, id)), InvariantError);
    CHECK_NOTHROW(CommSquare(z, z, Cospan(id, id)));
}

TEST_CASE("cocone_oracle", "[hopull]")
{
    CHECK(cocone_oracle(zero_legs(ChainComplex::zero(F5))).empty());
    CHECK(cocone_oracle(zero_legs(ChainComplex::sphere(F5, 1))) == Dims{{0, 1}});
    const auto y = direct_sum(ChainComplex::sphere(F2, 2), ChainComplex::disc(F2, 1));
    const auto id = ChainMap::identity(y);
    CHECK(cocone_oracle(Cospan(id, id)) == homology_dims(y));
}

TEST_CASE("homotopy_pullback examples", "[hopull]")
{
    const auto y = direct_sum(ChainComplex::sphere(F5, 2), ChainComplex::sphere(F5, -1));
    const auto id = ChainMap::identity(y);
    for (Sigma s : kAllSigmas)
        for (ReplaceMode m : kAllModes) {
            CHECK(homotopy_pullback(Cospan(id, id), s, m).homology == homology_dims(y));
            CHECK(homotopy_pullback(zero_legs(ChainComplex::sphere(F5, 1)), s, m).homology == Dims{{0, 1}});
            CHECK(homotopy_pullback(zero_legs(ChainComplex::sphere(F5, 0)), s, m).homology == Dims{{-1, 1}});
        }
}

TEST_CASE("homotopy_pullback is deterministic", "[hopull]")
{
    Generator gen(small_config(5), 5);
    const Cospan x = gen.cospan();
    const HopullResult a = homotopy_pullback(x, Sigma::ReeD, ReplaceMode::Functorial);
    const HopullResult b = homotopy_pullback(x, Sigma::ReeD, ReplaceMode::Functorial);
    CHECK(a.object() == b.object());
    CHECK(a.homology == homology_dims(a.object()));
}

TEST_CASE("model square examples", "[hopull]")
{
    const auto y = direct_sum(ChainComplex::sphere(F5, 1), ChainComplex::disc(F5, 2));
    CHECK(all_verdicts(identity_square(y), true));
    CHECK(all_verdicts(anchor_square(F5, false), true));
    CHECK(all_verdicts(anchor_square(F5, true), false));
    CHECK(cocone_oracle(anchor_square(F5, false).cospan()) == Dims{{1, 1}});
    for (Leg leg : {Leg::First, Leg::Second}) {
        CHECK(is_model_square_rp(identity_square(y), leg));
        CHECK(is_model_square_rp(anchor_square(F5, false), leg));
        CHECK_FALSE(is_model_square_rp(anchor_square(F5, true), leg));
    }
}

TEST_CASE("paste", "[hopull]")
{
    const auto y = ChainComplex::sphere(F5, 0);
    const CommSquare id = identity_square(y);
    CHECK(paste(id, id) == id);

    // Two strict pullbacks along fibrations paste to the pullback of the composite.
    Generator gen(small_config(5), 7);
    for (int trial = 0; trial < 10; ++trial) {
        const ChainComplex f_obj = gen.complex();
        const ChainMap h = gen.fibration_onto(f_obj);  // C -> F
        const ChainMap e_to_f = gen.chain_map(gen.complex(), f_obj);
        const Pullback right_pb = pullback(h, e_to_f);  // B = E x_F C
        const CommSquare right(right_pb.to_b, right_pb.to_c, Cospan(e_to_f, h));
        const ChainMap d_to_e = gen.chain_map(gen.complex(), e_to_f.src());
        const Pullback left_pb = pullback(right_pb.to_c, d_to_e);
        const CommSquare left(left_pb.to_b, left_pb.to_c, Cospan(d_to_e, right_pb.to_c));
        const CommSquare total = paste(left, right);
        const Pullback total_pb = pullback(h, compose(e_to_f, d_to_e));
        CHECK(homology_dims(total.a()) == homology_dims(total_pb.object));
        CHECK(is_weq(universal_into_pullback(total.u(), total.v(), total_pb)));
        CHECK(universal_into_pullback(total.u(), total.v(), total_pb).at(0).rows() ==
              universal_into_pullback(total.u(), total.v(), total_pb).at(0).cols());
    }
    CHECK_THROWS_AS(paste(id, anchor_square(F5, false)), InvariantError);
}

TEST_CASE("transfer_verdict", "[hopull]")
{
    const CommSquare sq = anchor_square(F5, false);
    const SquareMap ids{ChainMap::identity(sq.a()), ChainMap::identity(sq.cospan().b()),
                        ChainMap::identity(sq.cospan().c()), ChainMap::identity(sq.cospan().d())};
    CHECK(transfer_verdict(sq, sq, ids));
    const SquareMap zeros{ChainMap::zero(sq.a(), sq.a()), ChainMap::zero(sq.cospan().b(), sq.cospan().b()),
                          ChainMap::identity(sq.cospan().c()), ChainMap::zero(sq.cospan().d(), sq.cospan().d())};
    CHECK_THROWS_AS(transfer_verdict(sq, sq, zeros), InvariantError);
}

TEST_CASE("homotopy pullbacks agree across structures and with the oracle", "[hopull][property]")
{
    for (std::uint32_t p : {2u, 5u}) {
        Generator gen(small_config(p), 101 + p);
        for (int trial = 0; trial < 30; ++trial) {
            const Cospan x = gen.cospan();
            const Dims truth = cocone_oracle(x);
            for (Sigma s : kAllSigmas)
                for (ReplaceMode m : kAllModes)
                    CHECK(homotopy_pullback(x, s, m).homology == truth);
        }
    }
}

TEST_CASE("generated squares are labelled correctly", "[hopull][property]")
{
    for (std::uint32_t p : {2u, 5u}) {
        Generator gen(small_config(p), 201 + p);
        for (int trial = 0; trial < 20; ++trial) {
            const CommSquare pos = gen.model_square();
            CHECK(homology_dims(pos.a()) == cocone_oracle(pos.cospan()));
            CHECK(all_verdicts(pos, true));
            const CommSquare neg = gen.sphere_padded_square();
            CHECK(homology_dims(neg.a()) != cocone_oracle(neg.cospan()));
            CHECK(all_verdicts(neg, false));
            const CommSquare any = gen.strict_square();
            const bool full = is_model_square_full(any);
            CHECK(all_verdicts(any, full));
            if (homology_dims(any.a()) != cocone_oracle(any.cospan()))
                CHECK_FALSE(full);
        }
    }
}
