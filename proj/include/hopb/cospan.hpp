#pragma once

// Cospans C -g-> D <-f- B of chain complexes and the three model structures
// inj, Ree_I (degrees c:0, d:1, b:2) and Ree_D (degrees c:2, d:1, b:0) on them.
// "First arrow" is g, "second arrow" is f.

#include "hopb/chain.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace hopb {

enum class Sigma { Inj, ReeI, ReeD };
enum class ReplaceMode { Functorial, Local };
enum class Node { B, C, D };

inline constexpr Sigma kAllSigmas[] = {Sigma::Inj, Sigma::ReeI, Sigma::ReeD};
inline constexpr ReplaceMode kAllModes[] = {ReplaceMode::Functorial, ReplaceMode::Local};

inline std::string_view to_string(Sigma s)
{
    switch (s) {
    case Sigma::Inj: return "inj";
    case Sigma::ReeI: return "ree-i";
    case Sigma::ReeD: return "ree-d";
    }
    return "?";
}

inline std::string_view to_string(ReplaceMode m)
{
    return m == ReplaceMode::Functorial ? "functorial" : "local";
}

inline std::optional<Sigma> parse_sigma(std::string_view s)
{
    if (s == "inj")
        return Sigma::Inj;
    if (s == "ree-i")
        return Sigma::ReeI;
    if (s == "ree-d")
        return Sigma::ReeD;
    return std::nullopt;
}

inline std::optional<ReplaceMode> parse_mode(std::string_view s)
{
    if (s == "functorial")
        return ReplaceMode::Functorial;
    if (s == "local")
        return ReplaceMode::Local;
    return std::nullopt;
}

class Cospan {
public:
    Cospan(ChainMap g, ChainMap f) : g_(std::move(g)), f_(std::move(f))
    {
        if (!(g_.tgt() == f_.tgt()))
            throw InvariantError("cospan legs do not share a target");
    }

    const ChainMap& g() const { return g_; }
    const ChainMap& f() const { return f_; }
    const ChainComplex& c() const { return g_.src(); }
    const ChainComplex& d() const { return g_.tgt(); }
    const ChainComplex& b() const { return f_.src(); }
    const FieldCtx& field() const { return g_.field(); }

    const ChainComplex& node(Node r) const
    {
        switch (r) {
        case Node::B: return b();
        case Node::C: return c();
        case Node::D: return d();
        }
        return d();
    }

    friend bool operator==(const Cospan& a, const Cospan& b) { return a.g_ == b.g_ && a.f_ == b.f_; }

private:
    ChainMap g_;
    ChainMap f_;
};

/// Natural transformation between cospans; both squares must commute.
class CospanMorphism {
public:
    CospanMorphism(Cospan src, Cospan tgt, ChainMap on_c, ChainMap on_d, ChainMap on_b)
        : src_(std::move(src)), tgt_(std::move(tgt)), c_(std::move(on_c)), d_(std::move(on_d)),
          b_(std::move(on_b))
    {
        if (!(c_.src() == src_.c()) || !(c_.tgt() == tgt_.c()) || !(d_.src() == src_.d()) ||
            !(d_.tgt() == tgt_.d()) || !(b_.src() == src_.b()) || !(b_.tgt() == tgt_.b()))
            throw InvariantError("cospan morphism components have wrong endpoints");
        if (!(compose(tgt_.g(), c_) == compose(d_, src_.g())))
            throw InvariantError("cospan morphism: square at c does not commute");
        if (!(compose(tgt_.f(), b_) == compose(d_, src_.f())))
            throw InvariantError("cospan morphism: square at b does not commute");
    }

    static CospanMorphism identity(const Cospan& x)
    {
        return CospanMorphism(x, x, ChainMap::identity(x.c()), ChainMap::identity(x.d()),
                              ChainMap::identity(x.b()));
    }

    const Cospan& src() const { return src_; }
    const Cospan& tgt() const { return tgt_; }
    const ChainMap& on_c() const { return c_; }
    const ChainMap& on_d() const { return d_; }
    const ChainMap& on_b() const { return b_; }

    const ChainMap& at(Node r) const
    {
        switch (r) {
        case Node::B: return b_;
        case Node::C: return c_;
        case Node::D: return d_;
        }
        return d_;
    }

    friend bool operator==(const CospanMorphism& a, const CospanMorphism& b)
    {
        return a.src_ == b.src_ && a.tgt_ == b.tgt_ && a.c_ == b.c_ && a.d_ == b.d_ && a.b_ == b.b_;
    }

private:
    Cospan src_;
    Cospan tgt_;
    ChainMap c_;
    ChainMap d_;
    ChainMap b_;
};

inline CospanMorphism compose(const CospanMorphism& psi, const CospanMorphism& phi)
{
    return CospanMorphism(phi.src(), psi.tgt(), compose(psi.on_c(), phi.on_c()),
                          compose(psi.on_d(), phi.on_d()), compose(psi.on_b(), phi.on_b()));
}

inline Cospan terminal_cospan(FieldCtx field)
{
    const auto z = ChainComplex::zero(field);
    return Cospan(ChainMap::identity(z), ChainMap::identity(z));
}

inline CospanMorphism to_terminal(const Cospan& x)
{
    const auto z = ChainComplex::zero(x.field());
    return CospanMorphism(x, terminal_cospan(x.field()), ChainMap::zero(x.c(), z),
                          ChainMap::zero(x.d(), z), ChainMap::zero(x.b(), z));
}

/// The constant cospan A -> A <- A.
inline Cospan constant_cospan(const ChainComplex& a)
{
    return Cospan(ChainMap::identity(a), ChainMap::identity(a));
}

// ---------------------------------------------------------------------------
// Limits

inline Pullback limit(const Cospan& x) { return pullback(x.f(), x.g()); }

/// Lim(phi): the universal map between standard pullbacks.
inline ChainMap limit_map(const CospanMorphism& phi)
{
    const Pullback src = limit(phi.src());
    const Pullback tgt = limit(phi.tgt());
    return universal_into_pullback(compose(phi.on_b(), src.to_b), compose(phi.on_c(), src.to_c), tgt);
}

/// Adjunction bijection: a cospan map A* -> X corresponds to A -> Lim X.
inline ChainMap limit_adjunct(const CospanMorphism& phi)
{
    if (!(phi.src() == constant_cospan(phi.src().d())))
        throw InvariantError("limit_adjunct: source is not a constant cospan");
    return universal_into_pullback(phi.on_b(), phi.on_c(), limit(phi.tgt()));
}

inline CospanMorphism limit_adjunct_inverse(const ChainMap& w, const Cospan& x)
{
    const Pullback pb = limit(x);
    if (!(w.tgt() == pb.object))
        throw InvariantError("limit_adjunct_inverse: map does not land in Lim X");
    const ChainMap to_c = compose(pb.to_c, w);
    return CospanMorphism(constant_cospan(w.src()), x, to_c, compose(x.g(), to_c),
                          compose(pb.to_b, w));
}

// ---------------------------------------------------------------------------
// Matching and latching objects

namespace detail {

/// Whether M_r is D (otherwise it is the terminal object).
inline bool matches_over_d(Node r, Sigma s)
{
    return (r == Node::B && s != Sigma::ReeD) || (r == Node::C && s != Sigma::ReeI);
}

}  // namespace detail

/// M_r X. inj: (b: D, c: D, d: 0); Ree_I: (b: D); Ree_D: (c: D).
inline ChainComplex matching_object(const Cospan& x, Node r, Sigma s)
{
    return detail::matches_over_d(r, s) ? x.d() : ChainComplex::zero(x.field());
}

/// L_r X. inj: all zero; Ree_I: (d: C); Ree_D: (d: B).
inline ChainComplex latching_object(const Cospan& x, Node r, Sigma s)
{
    if (r != Node::D || s == Sigma::Inj)
        return ChainComplex::zero(x.field());
    return s == Sigma::ReeI ? x.c() : x.b();
}

inline bool is_weq_cospan(const CospanMorphism& phi)
{
    return is_weq(phi.on_c()) && is_weq(phi.on_d()) && is_weq(phi.on_b());
}

/// X_r -> Y_r x_{M_r Y} M_r X. Where the matching object is zero this is phi_r itself.
inline ChainMap relative_matching_map(const CospanMorphism& phi, Node r, Sigma s)
{
    if (!detail::matches_over_d(r, s))
        return phi.at(r);
    const bool at_b = r == Node::B;
    const ChainMap& leg_tgt = at_b ? phi.tgt().f() : phi.tgt().g();
    const ChainMap& leg_src = at_b ? phi.src().f() : phi.src().g();
    const Pullback pb = pullback(leg_tgt, phi.on_d());
    return universal_into_pullback(phi.at(r), leg_src, pb);
}

inline bool is_fibration_sigma(const CospanMorphism& phi, Sigma s)
{
    for (Node r : {Node::D, Node::B, Node::C})
        if (!is_fibration(relative_matching_map(phi, r, s)))
            return false;
    return true;
}

/// X_r II_{L_r X} L_r Y -> Y_r. Where the latching object is zero this is phi_r itself.
inline ChainMap relative_latching_map(const CospanMorphism& phi, Node r, Sigma s)
{
    if (r != Node::D || s == Sigma::Inj)
        return phi.at(r);
    // Ree_I: D II_C C' -> D'; Ree_D: D II_B B' -> D'.
    const bool via_c = s == Sigma::ReeI;
    const ChainMap& leg_src = via_c ? phi.src().g() : phi.src().f();
    const ChainMap& leg_tgt = via_c ? phi.tgt().g() : phi.tgt().f();
    const ChainMap& side = via_c ? phi.on_c() : phi.on_b();
    const Pushout po = pushout(leg_src, side);
    return universal_from_pushout(phi.on_d(), leg_tgt, po);
}

inline bool is_cofibration_sigma(const CospanMorphism& phi, Sigma s)
{
    for (Node r : {Node::C, Node::B, Node::D})
        if (!is_cofibration(relative_latching_map(phi, r, s)))
            return false;
    return true;
}

inline bool is_fibrant_sigma(const Cospan& x, Sigma s)
{
    switch (s) {
    case Sigma::Inj: return is_fibration(x.f()) && is_fibration(x.g());
    case Sigma::ReeI: return is_fibration(x.f());
    case Sigma::ReeD: return is_fibration(x.g());
    }
    return false;
}

// ---------------------------------------------------------------------------
// Fibrant replacement

/// A levelwise weak equivalence from src into a sigma-fibrant cospan.
struct Replacement {
    CospanMorphism map;
    Sigma sigma;
    ReplaceMode mode;

    const Cospan& src() const { return map.src(); }
    const Cospan& tgt() const { return map.tgt(); }
};

/// Functorial mode factors the legs that sigma requires to be fibrations through their
/// mapping path spaces. Local mode returns the identity on an already fibrant cospan.
inline Replacement fibrant_replace(const Cospan& x, Sigma s, ReplaceMode mode)
{
    if (mode == ReplaceMode::Local && is_fibrant_sigma(x, s))
        return {CospanMorphism::identity(x), s, mode};

    const bool replace_f = s != Sigma::ReeD;
    const bool replace_g = s != Sigma::ReeI;
    ChainMap new_g = x.g(), new_f = x.f();
    ChainMap on_c = ChainMap::identity(x.c()), on_b = ChainMap::identity(x.b());
    if (replace_g) {
        Factorization fac = factorize(x.g());
        new_g = std::move(fac.q);
        on_c = std::move(fac.i);
    }
    if (replace_f) {
        Factorization fac = factorize(x.f());
        new_f = std::move(fac.q);
        on_b = std::move(fac.i);
    }
    Cospan tgt(std::move(new_g), std::move(new_f));
    return {CospanMorphism(x, std::move(tgt), std::move(on_c), ChainMap::identity(x.d()),
                           std::move(on_b)),
            s, mode};
}

/// A map l: R1.tgt -> R2.tgt with l o R1.map = R2.map, built node by node in Reedy order:
/// inj lifts d then b and c against the legs; Ree_I lifts c, then d relative to the
/// latching object C, then b against f (Ree_D symmetrically). Each step calls chain::lift.
///
/// Throws LiftError when R1.map is not a levelwise trivial cofibration, or (Reedy cases)
/// when the latching comparison at d is not one.
inline CospanMorphism lift_replacements(const Cospan& x, const Replacement& r1, const Replacement& r2,
                                        std::optional<std::uint64_t> perturb = std::nullopt)
{
    if (!(r1.src() == x) || !(r2.src() == x))
        throw LiftError("lift_replacements: replacements are not of the given cospan");
    if (r1.sigma != r2.sigma)
        throw LiftError("lift_replacements: replacements live in different model structures");
    if (!is_fibrant_sigma(r2.tgt(), r2.sigma))
        throw LiftError("lift_replacements: target replacement is not fibrant");
    for (Node r : {Node::B, Node::C, Node::D}) {
        const ChainMap& j = r1.map.at(r);
        if (!is_cofibration(j) || !is_weq(j))
            throw LiftError("lift_replacements: first replacement is not a levelwise trivial cofibration");
    }

    const Cospan& t1 = r1.tgt();
    const Cospan& t2 = r2.tgt();
    const auto zero = ChainComplex::zero(x.field());
    auto seed = [&](std::uint64_t k) -> std::optional<std::uint64_t> {
        if (!perturb)
            return std::nullopt;
        return *perturb * 0x9e3779b97f4a7c15ULL + k;
    };
    // Lift against an object's map to the terminal complex.
    auto lift_to_object = [&](const ChainMap& j, const ChainMap& target, std::uint64_t k) {
        return lift(j, ChainMap::zero(target.tgt(), zero), target, ChainMap::zero(j.tgt(), zero), seed(k));
    };

    const ChainMap& jc = r1.map.on_c();
    const ChainMap& jd = r1.map.on_d();
    const ChainMap& jb = r1.map.on_b();
    const ChainMap& kc = r2.map.on_c();
    const ChainMap& kd = r2.map.on_d();
    const ChainMap& kb = r2.map.on_b();

    if (r1.sigma == Sigma::Inj) {
        ChainMap ld = lift_to_object(jd, kd, 1);
        ChainMap lb = lift(jb, t2.f(), kb, compose(ld, t1.f()), seed(2));
        ChainMap lc = lift(jc, t2.g(), kc, compose(ld, t1.g()), seed(3));
        return CospanMorphism(t1, t2, std::move(lc), std::move(ld), std::move(lb));
    }

    // Ree_I: the free node is c and the fibrant leg is f; Ree_D swaps the roles.
    const bool ree_i = r1.sigma == Sigma::ReeI;
    const ChainMap& j_free = ree_i ? jc : jb;
    const ChainMap& k_free = ree_i ? kc : kb;
    const ChainMap& j_fib = ree_i ? jb : jc;
    const ChainMap& k_fib = ree_i ? kb : kc;
    const ChainMap& leg_x = ree_i ? x.g() : x.f();
    const ChainMap& leg1_free = ree_i ? t1.g() : t1.f();
    const ChainMap& leg2_free = ree_i ? t2.g() : t2.f();
    const ChainMap& leg1_fib = ree_i ? t1.f() : t1.g();
    const ChainMap& leg2_fib = ree_i ? t2.f() : t2.g();

    ChainMap l_free = lift_to_object(j_free, k_free, 1);
    const Pushout po = pushout(leg_x, j_free);
    const ChainMap latch = universal_from_pushout(jd, leg1_free, po);
    const ChainMap into = universal_from_pushout(kd, compose(leg2_free, l_free), po);
    ChainMap ld = lift_to_object(latch, into, 2);
    ChainMap l_fib = lift(j_fib, leg2_fib, k_fib, compose(ld, leg1_fib), seed(3));
    if (ree_i)
        return CospanMorphism(t1, t2, std::move(l_free), std::move(ld), std::move(l_fib));
    return CospanMorphism(t1, t2, std::move(l_fib), std::move(ld), std::move(l_free));
}

}  // namespace hopb
