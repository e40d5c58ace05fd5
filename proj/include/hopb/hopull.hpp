#pragma once

// Homotopy pullbacks of cospans, model squares and homotopy fiber squares.

#include "hopb/cospan.hpp"

#include <map>

namespace hopb {

/// Commutative square
///
///     A --u--> B
///     |v       |f
///     v        v
///     C --g--> D
class CommSquare {
public:
    CommSquare(ChainMap u, ChainMap v, Cospan cospan)
        : u_(std::move(u)), v_(std::move(v)), x_(std::move(cospan))
    {
        if (!(u_.src() == v_.src()))
            throw InvariantError("square: u and v have different sources");
        if (!(u_.tgt() == x_.b()) || !(v_.tgt() == x_.c()))
            throw InvariantError("square: u, v do not land in the cospan's B and C");
        if (!(compose(x_.f(), u_) == compose(x_.g(), v_)))
            throw InvariantError("square does not commute: f u != g v");
    }

    const ChainComplex& a() const { return u_.src(); }
    const ChainMap& u() const { return u_; }
    const ChainMap& v() const { return v_; }
    const Cospan& cospan() const { return x_; }

    friend bool operator==(const CommSquare& a, const CommSquare& b)
    {
        return a.u_ == b.u_ && a.v_ == b.v_ && a.x_ == b.x_;
    }

private:
    ChainMap u_;
    ChainMap v_;
    Cospan x_;
};

/// The standard pullback of a sigma-fibrant replacement, a representative of B x^h_D C.
struct HopullResult {
    Sigma sigma;
    Replacement replacement;
    Pullback pullback;
    std::map<int, std::size_t> homology;

    const ChainComplex& object() const { return pullback.object; }
};

inline HopullResult homotopy_pullback(const Cospan& x, Sigma s, ReplaceMode mode)
{
    Replacement r = fibrant_replace(x, s, mode);
    Pullback pb = limit(r.tgt());
    auto h = homology_dims(pb.object);
    return {s, std::move(r), std::move(pb), std::move(h)};
}

/// The universal map from the square's vertex into the pullback of a replacement of its cospan.
inline ChainMap universal_map_into(const CommSquare& sq, const Replacement& r, const Pullback& pb)
{
    return universal_into_pullback(compose(r.map.on_b(), sq.u()), compose(r.map.on_c(), sq.v()), pb);
}

/// A is a model of the sigma-homotopy pullback: A -> B' x_D' C' is a weak equivalence.
inline bool is_model_square(const CommSquare& sq, Sigma s, ReplaceMode mode)
{
    const Replacement r = fibrant_replace(sq.cospan(), s, mode);
    const Pullback pb = limit(r.tgt());
    return is_weq(universal_map_into(sq, r, pb));
}

/// Verdict against the canonical representative G ->> H <<- E (inj functorial replacement,
/// fibrant in all three structures).
inline bool is_model_square_full(const CommSquare& sq)
{
    return is_model_square(sq, Sigma::Inj, ReplaceMode::Functorial);
}

enum class Leg { First, Second };  // g, f

/// Right proper weakening: replace only the chosen leg by a fibration and test A against
/// the pullback with the untouched other leg.
inline bool is_model_square_rp(const CommSquare& sq, Leg leg)
{
    const Cospan& x = sq.cospan();
    if (leg == Leg::Second) {
        const Factorization fac = factorize(x.f());
        const Pullback pb = pullback(fac.q, x.g());
        return is_weq(universal_into_pullback(compose(fac.i, sq.u()), sq.v(), pb));
    }
    const Factorization fac = factorize(x.g());
    const Pullback pb = pullback(x.f(), fac.q);
    return is_weq(universal_into_pullback(sq.u(), compose(fac.i, sq.v()), pb));
}

/// A -> N_f x_D N_g is a weak equivalence, with N the mapping path space factorization.
inline bool is_homotopy_fiber_square(const CommSquare& sq)
{
    const Cospan& x = sq.cospan();
    const Factorization ff = factorize(x.f());
    const Factorization fg = factorize(x.g());
    const Pullback pb = pullback(ff.q, fg.q);
    return is_weq(universal_into_pullback(compose(ff.i, sq.u()), compose(fg.i, sq.v()), pb));
}

/// Pastes
///
///     A --> B --> C
///     |     |     |
///     v     v     v
///     D --> E --> F
///
/// from left = (A; u: A->B, v: A->D; D -> E <- B) and right = (B; u: B->C, v: B->E; E -> F <- C).
/// The shared column B -> E must be the same map in both squares.
inline CommSquare paste(const CommSquare& left, const CommSquare& right)
{
    if (!(left.cospan().f() == right.v()))
        throw InvariantError("paste: squares do not share the middle column");
    return CommSquare(compose(right.u(), left.u()), left.v(),
                      Cospan(compose(right.cospan().g(), left.cospan().g()), right.cospan().f()));
}

/// Maps from the corners of one square to the corresponding corners of another.
struct SquareMap {
    ChainMap on_a;
    ChainMap on_b;
    ChainMap on_c;
    ChainMap on_d;
};

/// Model-square verdict of `first`, after checking that `maps` is a levelwise weak
/// equivalence of squares first -> second (all four faces commute).
inline bool transfer_verdict(const CommSquare& first, const CommSquare& second, const SquareMap& maps)
{
    const auto ends = [](const ChainMap& m, const ChainComplex& s, const ChainComplex& t) {
        return m.src() == s && m.tgt() == t;
    };
    if (!ends(maps.on_a, first.a(), second.a()) || !ends(maps.on_b, first.cospan().b(), second.cospan().b()) ||
        !ends(maps.on_c, first.cospan().c(), second.cospan().c()) ||
        !ends(maps.on_d, first.cospan().d(), second.cospan().d()))
        throw InvariantError("transfer_verdict: connecting maps have wrong endpoints");
    if (!(compose(maps.on_b, first.u()) == compose(second.u(), maps.on_a)) ||
        !(compose(maps.on_c, first.v()) == compose(second.v(), maps.on_a)) ||
        !(compose(maps.on_d, first.cospan().f()) == compose(second.cospan().f(), maps.on_b)) ||
        !(compose(maps.on_d, first.cospan().g()) == compose(second.cospan().g(), maps.on_c)))
        throw InvariantError("transfer_verdict: a connecting face does not commute");
    if (!is_weq(maps.on_a) || !is_weq(maps.on_b) || !is_weq(maps.on_c) || !is_weq(maps.on_d))
        throw InvariantError("transfer_verdict: a connecting map is not a weak equivalence");
    return is_model_square_full(first);
}

}  // namespace hopb
