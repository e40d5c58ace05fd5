#pragma once

// Seeded random instance generators. Deterministic for a fixed seed and config.

#include "hopb/hopull.hpp"
#include "hopb/rng.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace hopb {

struct GenConfig {
    std::uint64_t seed = 1;
    std::uint32_t p = 2;
    int degree_lo = -3;
    int degree_hi = 6;
    std::size_t max_dim = 4;
    std::size_t trials = 10;

    void validate() const
    {
        if (trials < 1)
            throw std::invalid_argument("config: trials must be at least 1");
        if (degree_lo > degree_hi)
            throw std::invalid_argument("config: empty degree range");
        if (max_dim < 1)
            throw std::invalid_argument("config: max_dim must be at least 1");
        FieldCtx check(p);
        (void)check;
    }

    FieldCtx field() const { return FieldCtx(p); }
};

class Generator {
public:
    Generator(const GenConfig& cfg, std::uint64_t seed) : cfg_(cfg), field_(cfg.p), rng_(seed)
    {
        cfg.validate();
    }

    SplitMix64& rng() { return rng_; }
    const FieldCtx& field() const { return field_; }
    const GenConfig& config() const { return cfg_; }

    Matrix matrix(std::size_t r, std::size_t c)
    {
        Matrix m(field_, r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                m.set(i, j, static_cast<std::uint32_t>(rng_.below(field_.p())));
        return m;
    }

    /// A random r x c matrix of rank at most k.
    Matrix low_rank_matrix(std::size_t r, std::size_t c, std::size_t k)
    {
        return matrix(r, k) * matrix(k, c);
    }

    /// Dimensions drawn in [0, max_dim] on a random sub-interval of the degree range; each
    /// differential lands in the cycles below it, so d^2 = 0 by construction.
    ChainComplex complex(std::size_t max_dim = 0)
    {
        if (max_dim == 0)
            max_dim = cfg_.max_dim;
        int lo = rng_.between(cfg_.degree_lo, cfg_.degree_hi);
        int hi = rng_.between(cfg_.degree_lo, cfg_.degree_hi);
        if (lo > hi)
            std::swap(lo, hi);
        std::map<int, std::size_t> dims;
        std::map<int, Matrix> d;
        for (int n = lo; n <= hi; ++n)
            dims[n] = rng_.chance(1, 5) ? 0 : rng_.below(max_dim + 1);
        Matrix below(field_, 0, 0);  // d(n-1)
        for (int n = lo; n <= hi; ++n) {
            const std::size_t dn = dims[n];
            const std::size_t prev = n > lo ? dims[n - 1] : 0;
            Matrix dn_mat(field_, prev, dn);
            if (prev && dn) {
                const Matrix cycles = kernel_basis(below);
                const std::size_t k = rng_.below(std::min(cycles.cols(), dn) + 1);
                dn_mat = cycles * low_rank_matrix(cycles.cols(), dn, k);
            }
            below = dn_mat;
            d.emplace(n, std::move(dn_mat));
        }
        return ChainComplex(field_, std::move(dims), std::move(d));
    }

    /// A uniformly random chain map src -> tgt (a random element of the space of chain maps).
    ChainMap chain_map(const ChainComplex& src, const ChainComplex& tgt)
    {
        detail::LinearSystem sys(field_);
        std::map<int, std::size_t> unknown;
        auto [lo, hi] = degree_window({&src, &tgt});
        for (int n = lo; n <= hi; ++n)
            if (src.dim(n) && tgt.dim(n))
                unknown[n] = sys.add_unknown(tgt.dim(n), src.dim(n));
        for (int n = lo; n <= hi; ++n) {
            if (!src.dim(n) || !tgt.dim(n - 1))
                continue;
            const auto eq = sys.add_equation(Matrix(field_, tgt.dim(n - 1), src.dim(n)));
            if (unknown.count(n))
                sys.add_term(eq, unknown[n], tgt.d(n), Matrix::identity(field_, src.dim(n)));
            if (unknown.count(n - 1))
                sys.add_term(eq, unknown[n - 1], -Matrix::identity(field_, tgt.dim(n - 1)), src.d(n));
        }
        const Matrix space = kernel_basis(sys.matrix());
        const Matrix pick = space * matrix(space.cols(), 1);
        const auto blocks = sys.unpack(pick);
        std::map<int, Matrix> comps;
        for (auto [n, idx] : unknown)
            comps.emplace(n, blocks[idx]);
        return ChainMap(src, tgt, std::move(comps));
    }

    /// A direct sum of up to `count` discs D(n) with n in the degree range.
    ChainComplex acyclic(std::size_t count = 3)
    {
        ChainComplex out = ChainComplex::zero(field_);
        const std::size_t k = rng_.below(count + 1);
        for (std::size_t i = 0; i < k; ++i)
            out = direct_sum(out, ChainComplex::disc(field_, rng_.between(cfg_.degree_lo + 1, cfg_.degree_hi)));
        return out;
    }

    /// A fibration onto d: the projection d (+) k -> d precomposed with the chain automorphisms
    /// [[1, r], [0, 1]] and [[1, 0], [t, 1]], i.e. [1 + r t | r].
    ChainMap fibration_onto(const ChainComplex& d)
    {
        const ChainComplex k = complex(std::max<std::size_t>(1, cfg_.max_dim / 2));
        const ChainMap r = chain_map(k, d);
        const ChainMap t = chain_map(d, k);
        return copair_map(ChainMap::identity(d) + compose(r, t), r);
    }

    /// An injective weak equivalence b -> b (+) a with a acyclic: (1 + r t, t).
    ChainMap trivial_cofibration_from(const ChainComplex& b)
    {
        const ChainComplex a = acyclic();
        const ChainMap t = chain_map(b, a);
        const ChainMap r = chain_map(a, b);
        return pair_map(ChainMap::identity(b) + compose(r, t), t);
    }

    /// A weak equivalence base (+) a1 -> base (+) a2 (a1, a2 acyclic) that is in general
    /// neither injective nor surjective.
    ChainMap weak_equivalence(const ChainComplex& base)
    {
        const ChainComplex a1 = acyclic();
        const ChainComplex a2 = acyclic();
        const ChainComplex src = direct_sum(base, a1);
        // src -> base is a surjective weq, base -> base (+) a2 an injective one.
        const ChainMap collapse = copair_map(ChainMap::identity(base), chain_map(a1, base));
        const ChainMap t = chain_map(base, a2);
        return compose(pair_map(ChainMap::identity(base), t), collapse);
    }

    /// A cospan C -g-> D <-f- B. When `fibration_leg` is set that leg is a fibration by construction.
    Cospan cospan(std::optional<Leg> fibration_leg = std::nullopt)
    {
        const ChainComplex d = complex();
        ChainMap g = fibration_leg == Leg::First ? fibration_onto(d) : chain_map(complex(), d);
        ChainMap f = fibration_leg == Leg::Second ? fibration_onto(d) : chain_map(complex(), d);
        return Cospan(std::move(g), std::move(f));
    }

    /// The strict pullback of a cospan with a fibration leg, with
    /// its vertex optionally replaced through a weak equivalence A (+) P -> A.
    CommSquare model_square()
    {
        const Cospan x = cospan(rng_.chance(1, 2) ? Leg::First : Leg::Second);
        return pad_vertex(x);
    }

    /// Same as model_square but with a sphere S(k) added to the vertex with zero maps, which
    /// changes its homology.
    CommSquare sphere_padded_square()
    {
        return sphere_pad(cospan(rng_.chance(1, 2) ? Leg::First : Leg::Second));
    }

    /// Strict pullback of x with a sphere summand mapped to zero.
    CommSquare sphere_pad(const Cospan& x)
    {
        const Pullback pb = limit(x);
        const ChainComplex s = ChainComplex::sphere(field_, rng_.between(cfg_.degree_lo, cfg_.degree_hi));
        const ChainMap pr = projection_first(pb.object, s);
        return CommSquare(compose(pb.to_b, pr), compose(pb.to_c, pr), x);
    }

    /// Strict pullback square of a cospan with arbitrary legs.
    CommSquare strict_square()
    {
        const Cospan x = cospan();
        const Pullback pb = limit(x);
        return CommSquare(pb.to_b, pb.to_c, x);
    }

    /// Vertex A = Lim X (+) P, P acyclic, mapped to Lim X by [1 | gamma].
    CommSquare pad_vertex(const Cospan& x)
    {
        const Pullback pb = limit(x);
        if (rng_.chance(1, 3))
            return CommSquare(pb.to_b, pb.to_c, x);
        const ChainComplex pad = acyclic();
        const ChainMap collapse = copair_map(ChainMap::identity(pb.object), chain_map(pad, pb.object));
        return CommSquare(compose(pb.to_b, collapse), compose(pb.to_c, collapse), x);
    }

    /// Inclusion of x into (C + Kc -> D + Kd <- B + Kb) with legs [[g, a], [0, b]]. Half of
    /// the time the blocks Kc -> Kd and Kb -> Kd are injective, so the latching maps are too.
    CospanMorphism extension(const Cospan& x)
    {
        const std::size_t small = std::max<std::size_t>(1, cfg_.max_dim / 2);
        const ChainComplex kc = complex(small);
        const ChainComplex kb = complex(small);
        const ChainComplex extra = complex(small);
        ChainComplex kd = extra;
        std::optional<ChainMap> beta_c, beta_b;
        if (rng_.chance(1, 2)) {
            const ChainComplex kcb = direct_sum(kc, kb);
            kd = direct_sum(kcb, extra);
            beta_c = compose(inclusion_first(kcb, extra), inclusion_first(kc, kb));
            beta_b = compose(inclusion_first(kcb, extra), inclusion_second(kc, kb));
        } else {
            beta_c = chain_map(kc, kd);
            beta_b = chain_map(kb, kd);
        }
        const ChainMap into_d = inclusion_first(x.d(), kd);
        Cospan tgt(copair_map(compose(into_d, x.g()), pair_map(chain_map(kc, x.d()), *beta_c)),
                   copair_map(compose(into_d, x.f()), pair_map(chain_map(kb, x.d()), *beta_b)));
        return CospanMorphism(x, std::move(tgt), inclusion_first(x.c(), kc), into_d,
                              inclusion_first(x.b(), kb));
    }

    /// A random cospan mapping into y: C'' -> D <- B'' with legs g phi_c, f phi_b and phi_d = id.
    CospanMorphism restriction_into(const Cospan& y)
    {
        const ChainMap phi_c = chain_map(complex(), y.c());
        const ChainMap phi_b = chain_map(complex(), y.b());
        Cospan src(compose(y.g(), phi_c), compose(y.f(), phi_b));
        return CospanMorphism(std::move(src), y, phi_c, ChainMap::identity(y.d()), phi_b);
    }

    /// Pads the replaced legs of r's target with discs mapped randomly into D. The result is
    /// still a sigma-fibrant replacement by a levelwise trivial cofibration.
    Replacement perturb(const Replacement& r)
    {
        const Cospan& t = r.tgt();
        auto pad_leg = [&](const ChainMap& leg, const ChainMap& into) -> std::pair<ChainMap, ChainMap> {
            const ChainComplex pad = acyclic(2);
            ChainMap new_leg = copair_map(leg, chain_map(pad, leg.tgt()));
            ChainMap new_into = compose(inclusion_first(leg.src(), pad), into);
            return {std::move(new_leg), std::move(new_into)};
        };
        auto [g, on_c] = pad_leg(t.g(), r.map.on_c());
        auto [f, on_b] = pad_leg(t.f(), r.map.on_b());
        Cospan tgt(std::move(g), std::move(f));
        return {CospanMorphism(r.src(), std::move(tgt), std::move(on_c), r.map.on_d(), std::move(on_b)),
                r.sigma, r.mode};
    }

private:
    GenConfig cfg_;
    FieldCtx field_;
    SplitMix64 rng_;
};

/// Per-trial seed: the run seed XOR the trial index.
inline std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) { return seed ^ trial; }

}  // namespace hopb
