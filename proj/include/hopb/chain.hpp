#pragma once

// Chain complexes over F_p as a model category: weak equivalences are
// quasi-isomorphisms, fibrations are degreewise surjections and cofibrations
// are degreewise injections. Every object is fibrant and cofibrant.

#include "hopb/linfp.hpp"
#include "hopb/rng.hpp"

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hopb {

/// Finitely supported Z-graded complex with d(n): X_n -> X_{n-1}.
class ChainComplex {
public:
    explicit ChainComplex(FieldCtx field) : field_(field) {}

    /// `d` maps n to the matrix of d(n), shape dim(n-1) x dim(n). Missing entries are zero.
    /// Throws InvariantError on a shape mismatch or when d(n-1) d(n) != 0.
    ChainComplex(FieldCtx field, std::map<int, std::size_t> dims, std::map<int, Matrix> d)
        : field_(field)
    {
        for (auto [n, k] : dims)
            if (k > 0)
                dims_[n] = k;
        for (auto& [n, m] : d) {
            if (!(m.field() == field_))
                throw InvariantError("d(" + std::to_string(n) + ") is over a different field");
            if (m.rows() != dim(n - 1) || m.cols() != dim(n))
                throw InvariantError("d(" + std::to_string(n) + ") has shape " + m.shape() +
                                     ", expected " + std::to_string(dim(n - 1)) + "x" +
                                     std::to_string(dim(n)));
            if (!m.empty())
                d_.emplace(n, std::move(m));
        }
        for (const auto& [n, m] : d_) {
            auto below = d_.find(n - 1);
            if (below != d_.end() && !(below->second * m).is_zero())
                throw InvariantError("d(" + std::to_string(n - 1) + ") * d(" + std::to_string(n) +
                                     ") != 0");
        }
    }

    static ChainComplex zero(FieldCtx field) { return ChainComplex(field); }

    /// F_p concentrated in degree n.
    static ChainComplex sphere(FieldCtx field, int n) { return ChainComplex(field, {{n, 1}}, {}); }

    /// F_p in degrees n and n-1 with identity differential; acyclic.
    static ChainComplex disc(FieldCtx field, int n)
    {
        return ChainComplex(field, {{n, 1}, {n - 1, 1}}, {{n, Matrix::identity(field, 1)}});
    }

    const FieldCtx& field() const { return field_; }

    std::size_t dim(int n) const
    {
        auto it = dims_.find(n);
        return it == dims_.end() ? 0 : it->second;
    }

    Matrix d(int n) const
    {
        auto it = d_.find(n);
        if (it != d_.end())
            return it->second;
        return Matrix(field_, dim(n - 1), dim(n));
    }

    const std::map<int, std::size_t>& dims() const { return dims_; }
    const std::map<int, Matrix>& differentials() const { return d_; }

    bool is_zero() const { return dims_.empty(); }

    /// Lowest and highest degree with nonzero dimension; (0, -1) for the zero complex.
    std::pair<int, int> bounds() const
    {
        if (dims_.empty())
            return {0, -1};
        return {dims_.begin()->first, dims_.rbegin()->first};
    }

    std::size_t total_dim() const
    {
        std::size_t s = 0;
        for (auto [n, k] : dims_)
            s += k;
        return s;
    }

    friend bool operator==(const ChainComplex& a, const ChainComplex& b)
    {
        return a.field_ == b.field_ && a.dims_ == b.dims_ && a.d_ == b.d_;
    }

private:
    FieldCtx field_;
    std::map<int, std::size_t> dims_;
    std::map<int, Matrix> d_;
};

/// Degree window [lo, hi] that contains the support of every complex given, padded by one.
inline std::pair<int, int> degree_window(std::initializer_list<const ChainComplex*> complexes)
{
    int lo = std::numeric_limits<int>::max();
    int hi = std::numeric_limits<int>::min();
    for (const ChainComplex* c : complexes) {
        if (c->is_zero())
            continue;
        auto [a, b] = c->bounds();
        lo = std::min(lo, a);
        hi = std::max(hi, b);
    }
    if (lo > hi)
        return {0, -1};
    return {lo - 1, hi + 1};
}

/// Degreewise matrices f(n): src_n -> tgt_n commuting with the differentials.
class ChainMap {
public:
    /// Throws InvariantError on a shape mismatch or when d f != f d.
    ChainMap(ChainComplex src, ChainComplex tgt, std::map<int, Matrix> components)
        : src_(std::move(src)), tgt_(std::move(tgt))
    {
        if (!(src_.field() == tgt_.field()))
            throw InvariantError("chain map between complexes over different fields");
        for (auto& [n, m] : components) {
            if (m.rows() != tgt_.dim(n) || m.cols() != src_.dim(n))
                throw InvariantError("component f(" + std::to_string(n) + ") has shape " +
                                     m.shape() + ", expected " + std::to_string(tgt_.dim(n)) +
                                     "x" + std::to_string(src_.dim(n)));
            if (!m.empty())
                f_.emplace(n, std::move(m));
        }
        auto [lo, hi] = degree_window({&src_, &tgt_});
        for (int n = lo; n <= hi; ++n)
            if (!(tgt_.d(n) * at(n) == at(n - 1) * src_.d(n)))
                throw InvariantError("chain map condition d f = f d fails in degree " +
                                     std::to_string(n));
    }

    static ChainMap identity(const ChainComplex& x)
    {
        std::map<int, Matrix> c;
        for (auto [n, k] : x.dims())
            c.emplace(n, Matrix::identity(x.field(), k));
        return ChainMap(x, x, std::move(c));
    }

    static ChainMap zero(const ChainComplex& src, const ChainComplex& tgt)
    {
        return ChainMap(src, tgt, {});
    }

    const ChainComplex& src() const { return src_; }
    const ChainComplex& tgt() const { return tgt_; }
    const FieldCtx& field() const { return src_.field(); }

    Matrix at(int n) const
    {
        auto it = f_.find(n);
        if (it != f_.end())
            return it->second;
        return Matrix(src_.field(), tgt_.dim(n), src_.dim(n));
    }

    const std::map<int, Matrix>& components() const { return f_; }

    friend bool operator==(const ChainMap& a, const ChainMap& b)
    {
        if (!(a.src_ == b.src_) || !(a.tgt_ == b.tgt_))
            return false;
        auto [lo, hi] = degree_window({&a.src_, &a.tgt_});
        for (int n = lo; n <= hi; ++n)
            if (!(a.at(n) == b.at(n)))
                return false;
        return true;
    }

private:
    ChainComplex src_;
    ChainComplex tgt_;
    std::map<int, Matrix> f_;
};

namespace detail {

inline void require_parallel(const ChainMap& f, const ChainMap& g, const char* what)
{
    if (!(f.src() == g.src()) || !(f.tgt() == g.tgt()))
        throw InvariantError(std::string(what) + ": maps are not parallel");
}

template <class Fn>
ChainMap degreewise(const ChainComplex& src, const ChainComplex& tgt, Fn&& component)
{
    std::map<int, Matrix> c;
    auto [lo, hi] = degree_window({&src, &tgt});
    for (int n = lo; n <= hi; ++n)
        if (src.dim(n) && tgt.dim(n))
            c.emplace(n, component(n));
    return ChainMap(src, tgt, std::move(c));
}

}  // namespace detail

/// g o f
inline ChainMap compose(const ChainMap& g, const ChainMap& f)
{
    if (!(f.tgt() == g.src()))
        throw InvariantError("compose: target of f is not the source of g");
    return detail::degreewise(f.src(), g.tgt(), [&](int n) { return g.at(n) * f.at(n); });
}

inline ChainMap operator+(const ChainMap& f, const ChainMap& g)
{
    detail::require_parallel(f, g, "sum");
    return detail::degreewise(f.src(), f.tgt(), [&](int n) { return f.at(n) + g.at(n); });
}

inline ChainMap operator-(const ChainMap& f, const ChainMap& g)
{
    detail::require_parallel(f, g, "difference");
    return detail::degreewise(f.src(), f.tgt(), [&](int n) { return f.at(n) - g.at(n); });
}

inline ChainMap operator-(const ChainMap& f)
{
    return detail::degreewise(f.src(), f.tgt(), [&](int n) { return -f.at(n); });
}

// ---------------------------------------------------------------------------
// Direct sums

inline ChainComplex direct_sum(const ChainComplex& x, const ChainComplex& y)
{
    std::map<int, std::size_t> dims;
    std::map<int, Matrix> d;
    auto [lo, hi] = degree_window({&x, &y});
    for (int n = lo; n <= hi; ++n) {
        dims[n] = x.dim(n) + y.dim(n);
        d.emplace(n, block_diag(x.d(n), y.d(n)));
    }
    return ChainComplex(x.field(), std::move(dims), std::move(d));
}

/// x -> x (+) y
inline ChainMap inclusion_first(const ChainComplex& x, const ChainComplex& y)
{
    const auto s = direct_sum(x, y);
    return detail::degreewise(x, s, [&](int n) {
        return vstack(Matrix::identity(x.field(), x.dim(n)), Matrix(x.field(), y.dim(n), x.dim(n)));
    });
}

/// y -> x (+) y
inline ChainMap inclusion_second(const ChainComplex& x, const ChainComplex& y)
{
    const auto s = direct_sum(x, y);
    return detail::degreewise(y, s, [&](int n) {
        return vstack(Matrix(x.field(), x.dim(n), y.dim(n)), Matrix::identity(x.field(), y.dim(n)));
    });
}

/// x (+) y -> x
inline ChainMap projection_first(const ChainComplex& x, const ChainComplex& y)
{
    const auto s = direct_sum(x, y);
    return detail::degreewise(s, x, [&](int n) {
        return hstack(Matrix::identity(x.field(), x.dim(n)), Matrix(x.field(), x.dim(n), y.dim(n)));
    });
}

/// x (+) y -> y
inline ChainMap projection_second(const ChainComplex& x, const ChainComplex& y)
{
    const auto s = direct_sum(x, y);
    return detail::degreewise(s, y, [&](int n) {
        return hstack(Matrix(x.field(), y.dim(n), x.dim(n)), Matrix::identity(x.field(), y.dim(n)));
    });
}

/// (f, g): a -> b (+) c
inline ChainMap pair_map(const ChainMap& f, const ChainMap& g)
{
    if (!(f.src() == g.src()))
        throw InvariantError("pair_map: sources differ");
    return detail::degreewise(f.src(), direct_sum(f.tgt(), g.tgt()),
                              [&](int n) { return vstack(f.at(n), g.at(n)); });
}

/// [f | g]: b (+) c -> d
inline ChainMap copair_map(const ChainMap& f, const ChainMap& g)
{
    if (!(f.tgt() == g.tgt()))
        throw InvariantError("copair_map: targets differ");
    return detail::degreewise(direct_sum(f.src(), g.src()), f.tgt(),
                              [&](int n) { return hstack(f.at(n), g.at(n)); });
}

/// f (+) g
inline ChainMap sum_map(const ChainMap& f, const ChainMap& g)
{
    return detail::degreewise(direct_sum(f.src(), g.src()), direct_sum(f.tgt(), g.tgt()),
                              [&](int n) { return block_diag(f.at(n), g.at(n)); });
}

// ---------------------------------------------------------------------------
// Homology

/// dim H_n for every n with nonzero homology.
inline std::map<int, std::size_t> homology_dims(const ChainComplex& x)
{
    std::map<int, std::size_t> h;
    auto [lo, hi] = x.bounds();
    for (int n = lo; n <= hi; ++n) {
        const std::size_t dn = x.dim(n);
        if (dn == 0)
            continue;
        const std::size_t cycles = dn - rank(x.d(n));
        const std::size_t boundaries = rank(x.d(n + 1));
        if (cycles > boundaries)
            h[n] = cycles - boundaries;
    }
    return h;
}

inline bool is_acyclic(const ChainComplex& x) { return homology_dims(x).empty(); }

/// cone(f)_n = X_{n-1} (+) Y_n with d(x, y) = (-dx, f x + dy).
inline ChainComplex mapping_cone(const ChainMap& f)
{
    const ChainComplex& x = f.src();
    const ChainComplex& y = f.tgt();
    const FieldCtx& F = f.field();
    std::map<int, std::size_t> dims;
    std::map<int, Matrix> d;
    auto [lo, hi] = degree_window({&x, &y});
    for (int n = lo; n <= hi + 1; ++n) {
        dims[n] = x.dim(n - 1) + y.dim(n);
        Matrix m(F, x.dim(n - 2) + y.dim(n - 1), x.dim(n - 1) + y.dim(n));
        m.paste(0, 0, -x.d(n - 1));
        m.paste(x.dim(n - 2), 0, f.at(n - 1));
        m.paste(x.dim(n - 2), x.dim(n - 1), y.d(n));
        d.emplace(n, std::move(m));
    }
    return ChainComplex(F, std::move(dims), std::move(d));
}

/// Quasi-isomorphism test: the mapping cone is acyclic.
inline bool is_weq(const ChainMap& f) { return is_acyclic(mapping_cone(f)); }

inline bool is_fibration(const ChainMap& f)
{
    for (auto [n, k] : f.tgt().dims())
        if (!is_surjective(f.at(n)))
            return false;
    return true;
}

inline bool is_cofibration(const ChainMap& f)
{
    for (auto [n, k] : f.src().dims())
        if (!is_injective(f.at(n)))
            return false;
    return true;
}

/// A degreewise splitting X_n = B_n (+) H_n (+) W_n into boundaries, chosen cycle
/// representatives and a complement that d maps isomorphically onto B_{n-1}.
/// The contraction s satisfies d s + s d = 1 - pi, pi the projection onto H along B (+) W.
class HomologySplitting {
public:
    explicit HomologySplitting(const ChainComplex& x) : complex_(x)
    {
        const FieldCtx& F = x.field();
        for (auto [n, dn] : x.dims()) {
            const Matrix d_out = x.d(n);      // X_n -> X_{n-1}
            const Matrix d_in = x.d(n + 1);   // X_{n+1} -> X_n
            const auto in_pivots = pivot_columns(d_in);
            const auto out_pivots = pivot_columns(d_out);

            Matrix basis = d_in.select_cols(in_pivots);  // B_n
            const Matrix cycles = kernel_basis(d_out);
            std::vector<std::size_t> reps;
            for (std::size_t j = 0; j < cycles.cols(); ++j) {
                Matrix trial = hstack(basis, cycles.col_range(j, 1));
                if (rank(trial) == trial.cols()) {
                    basis = std::move(trial);
                    reps.push_back(j);
                }
            }
            const std::size_t nb = in_pivots.size();
            const std::size_t nh = reps.size();
            basis = hstack(basis, unit_columns(F, dn, out_pivots));  // W_n
            const Matrix coords = inverse(basis);

            Slice s{Matrix(F, x.dim(n + 1), dn), cycles.select_cols(reps), coords.row_range(nb, nh)};
            s.contraction = unit_columns(F, x.dim(n + 1), in_pivots) * coords.row_range(0, nb);
            slices_.emplace(n, std::move(s));
        }
    }

    const ChainComplex& complex() const { return complex_; }

    /// s(n): X_n -> X_{n+1}
    Matrix contraction(int n) const
    {
        auto it = slices_.find(n);
        return it == slices_.end() ? Matrix(complex_.field(), complex_.dim(n + 1), complex_.dim(n))
                                   : it->second.contraction;
    }

    /// Columns are cycles representing a basis of H_n.
    Matrix cycle_reps(int n) const
    {
        auto it = slices_.find(n);
        return it == slices_.end() ? Matrix(complex_.field(), complex_.dim(n), 0) : it->second.reps;
    }

    /// Coordinates of the homology class of an element of X_n (rows index the basis of H_n).
    Matrix class_coords(int n) const
    {
        auto it = slices_.find(n);
        return it == slices_.end() ? Matrix(complex_.field(), 0, complex_.dim(n)) : it->second.coords;
    }

    Matrix projection(int n) const { return cycle_reps(n) * class_coords(n); }

    std::size_t betti(int n) const { return cycle_reps(n).cols(); }

private:
    struct Slice {
        Matrix contraction;
        Matrix reps;
        Matrix coords;
    };
    ChainComplex complex_;
    std::map<int, Slice> slices_;
};

/// Matrices of H_n(f) in the bases fixed by the two splittings.
inline std::map<int, Matrix> homology_map(const ChainMap& f, const HomologySplitting& src,
                                          const HomologySplitting& tgt)
{
    std::map<int, Matrix> out;
    auto [lo, hi] = degree_window({&f.src(), &f.tgt()});
    for (int n = lo; n <= hi; ++n) {
        Matrix m = tgt.class_coords(n) * f.at(n) * src.cycle_reps(n);
        if (!m.empty())
            out.emplace(n, std::move(m));
    }
    return out;
}

inline std::map<int, Matrix> homology_map(const ChainMap& f)
{
    return homology_map(f, HomologySplitting(f.src()), HomologySplitting(f.tgt()));
}

// ---------------------------------------------------------------------------
// Homotopies

/// h(n): src_n -> tgt_{n+1} with f - g = d h + h d.
class ChainHomotopy {
public:
    ChainHomotopy(ChainMap f, ChainMap g, std::map<int, Matrix> h)
        : f_(std::move(f)), g_(std::move(g))
    {
        detail::require_parallel(f_, g_, "ChainHomotopy");
        const ChainComplex& x = f_.src();
        const ChainComplex& y = f_.tgt();
        for (auto& [n, m] : h) {
            if (m.rows() != y.dim(n + 1) || m.cols() != x.dim(n))
                throw InvariantError("homotopy h(" + std::to_string(n) + ") has shape " + m.shape());
            if (!m.empty())
                h_.emplace(n, std::move(m));
        }
        auto [lo, hi] = degree_window({&x, &y});
        for (int n = lo; n <= hi; ++n)
            if (!(f_.at(n) - g_.at(n) == y.d(n + 1) * at(n) + at(n - 1) * x.d(n)))
                throw InvariantError("homotopy identity fails in degree " + std::to_string(n));
    }

    const ChainMap& first() const { return f_; }
    const ChainMap& second() const { return g_; }

    Matrix at(int n) const
    {
        auto it = h_.find(n);
        if (it != h_.end())
            return it->second;
        return Matrix(f_.field(), f_.tgt().dim(n + 1), f_.src().dim(n));
    }

private:
    ChainMap f_;
    ChainMap g_;
    std::map<int, Matrix> h_;
};

/// A homotopy f ~ g, or nullopt when f and g differ on homology.
inline std::optional<ChainHomotopy> chain_homotopy(const ChainMap& f, const ChainMap& g)
{
    detail::require_parallel(f, g, "chain_homotopy");
    const ChainMap phi = f - g;
    const HomologySplitting sx(f.src());
    const HomologySplitting sy(f.tgt());
    for (const auto& [n, m] : homology_map(phi, sx, sy))
        if (!m.is_zero())
            return std::nullopt;
    // h = s_Y phi + pi_Y phi s_X
    std::map<int, Matrix> h;
    auto [lo, hi] = degree_window({&f.src(), &f.tgt()});
    for (int n = lo; n <= hi; ++n) {
        if (f.src().dim(n) == 0 || f.tgt().dim(n + 1) == 0)
            continue;
        h.emplace(n, sy.contraction(n) * phi.at(n) +
                         sy.projection(n + 1) * phi.at(n + 1) * sx.contraction(n));
    }
    return ChainHomotopy(f, g, std::move(h));
}

namespace detail {

/// Flattens equations of the form sum_k L_k X_k R_k = rhs in unknown matrices X_k.
class LinearSystem {
public:
    explicit LinearSystem(FieldCtx field) : field_(field) {}

    std::size_t add_unknown(std::size_t rows, std::size_t cols)
    {
        unknowns_.push_back({offset_unknowns_, rows, cols});
        offset_unknowns_ += rows * cols;
        return unknowns_.size() - 1;
    }

    std::size_t add_equation(const Matrix& rhs)
    {
        equations_.push_back({offset_equations_, rhs.rows(), rhs.cols(), rhs, {}});
        offset_equations_ += rhs.rows() * rhs.cols();
        return equations_.size() - 1;
    }

    void add_term(std::size_t eq, std::size_t unknown, Matrix left, Matrix right)
    {
        equations_[eq].terms.push_back({unknown, std::move(left), std::move(right)});
    }

    /// Coefficient matrix and right-hand side column.
    std::pair<Matrix, Matrix> assemble() const
    {
        Matrix a(field_, offset_equations_, offset_unknowns_);
        Matrix b(field_, offset_equations_, 1);
        for (const auto& e : equations_) {
            for (std::size_t r = 0; r < e.rows; ++r)
                for (std::size_t c = 0; c < e.cols; ++c)
                    b.set(e.offset + r * e.cols + c, 0, e.rhs(r, c));
            for (const auto& t : e.terms) {
                const auto& u = unknowns_[t.unknown];
                // (L X R)_{rc} = sum_{ij} L_{ri} X_{ij} R_{jc}
                for (std::size_t r = 0; r < e.rows; ++r)
                    for (std::size_t c = 0; c < e.cols; ++c)
                        for (std::size_t i = 0; i < u.rows; ++i) {
                            const std::uint32_t l = t.left(r, i);
                            if (l == 0)
                                continue;
                            for (std::size_t j = 0; j < u.cols; ++j) {
                                const std::size_t row = e.offset + r * e.cols + c;
                                const std::size_t col = u.offset + i * u.cols + j;
                                a.set(row, col, field_.add(a(row, col), field_.mul(l, t.right(j, c))));
                            }
                        }
            }
        }
        return {std::move(a), std::move(b)};
    }

    Matrix matrix() const { return assemble().first; }

    /// Splits a solution column back into the unknown blocks.
    std::vector<Matrix> unpack(const Matrix& x) const
    {
        std::vector<Matrix> out;
        for (const auto& u : unknowns_) {
            Matrix m(field_, u.rows, u.cols);
            for (std::size_t i = 0; i < u.rows; ++i)
                for (std::size_t j = 0; j < u.cols; ++j)
                    m.set(i, j, x(u.offset + i * u.cols + j, 0));
            out.push_back(std::move(m));
        }
        return out;
    }

    std::optional<std::vector<Matrix>> solve() const
    {
        auto [a, b] = assemble();
        auto x = hopb::solve(a, b);
        if (!x)
            return std::nullopt;
        return unpack(*x);
    }

private:
    struct Unknown {
        std::size_t offset, rows, cols;
    };
    struct Term {
        std::size_t unknown;
        Matrix left, right;
    };
    struct Equation {
        std::size_t offset, rows, cols;
        Matrix rhs;
        std::vector<Term> terms;
    };
    FieldCtx field_;
    std::vector<Unknown> unknowns_;
    std::vector<Equation> equations_;
    std::size_t offset_unknowns_ = 0;
    std::size_t offset_equations_ = 0;
};

}  // namespace detail

/// Reference route for chain_homotopy: one global linear system in all h(n).
inline std::optional<ChainHomotopy> chain_homotopy_by_linear_system(const ChainMap& f,
                                                                    const ChainMap& g)
{
    detail::require_parallel(f, g, "chain_homotopy_by_linear_system");
    const ChainComplex& x = f.src();
    const ChainComplex& y = f.tgt();
    const FieldCtx& F = f.field();
    detail::LinearSystem sys(F);
    std::map<int, std::size_t> unknown;
    auto [lo, hi] = degree_window({&x, &y});
    for (int n = lo; n <= hi; ++n)
        if (x.dim(n) && y.dim(n + 1))
            unknown[n] = sys.add_unknown(y.dim(n + 1), x.dim(n));
    for (int n = lo; n <= hi; ++n) {
        if (!x.dim(n) || !y.dim(n))
            continue;
        const auto eq = sys.add_equation(f.at(n) - g.at(n));
        if (unknown.count(n))
            sys.add_term(eq, unknown[n], y.d(n + 1), Matrix::identity(F, x.dim(n)));
        if (unknown.count(n - 1))
            sys.add_term(eq, unknown[n - 1], Matrix::identity(F, y.dim(n)), x.d(n));
    }
    auto sol = sys.solve();
    if (!sol)
        return std::nullopt;
    std::map<int, Matrix> h;
    for (auto [n, idx] : unknown)
        h.emplace(n, (*sol)[idx]);
    return ChainHomotopy(f, g, std::move(h));
}

// ---------------------------------------------------------------------------
// Path objects and the functorial factorization

#ifdef HOPB_MUTATE_PATH_SIGN
// Mutation hook for the harness self-check: flips the sign of the dc term.
inline constexpr bool kPathSignMutated = true;
#else
inline constexpr bool kPathSignMutated = false;
#endif

/// P(Y)_n = Y_n (+) Y_n (+) Y_{n+1},  d(a, b, c) = (da, db, a - b - dc).
struct PathObject {
    ChainComplex object;
    ChainMap diagonal;  // w = (1, 1, 0): Y -> P(Y), a weak equivalence
    ChainMap ends;      // (a, b): P(Y) -> Y (+) Y, a fibration
};

inline PathObject path_object(const ChainComplex& y)
{
    const FieldCtx& F = y.field();
    std::map<int, std::size_t> dims;
    std::map<int, Matrix> d;
    auto [lo, hi] = degree_window({&y});
    for (int n = lo; n <= hi; ++n) {
        dims[n] = 2 * y.dim(n) + y.dim(n + 1);
        Matrix m(F, 2 * y.dim(n - 1) + y.dim(n), 2 * y.dim(n) + y.dim(n + 1));
        m.paste(0, 0, y.d(n));
        m.paste(y.dim(n - 1), y.dim(n), y.d(n));
        const std::size_t r = 2 * y.dim(n - 1);
        m.paste(r, 0, Matrix::identity(F, y.dim(n)));
        m.paste(r, y.dim(n), -Matrix::identity(F, y.dim(n)));
        m.paste(r, 2 * y.dim(n), kPathSignMutated ? y.d(n + 1) : -y.d(n + 1));
        d.emplace(n, std::move(m));
    }
    ChainComplex p(F, std::move(dims), std::move(d));
    const ChainComplex yy = direct_sum(y, y);
    ChainMap w = detail::degreewise(y, p, [&](int n) {
        const auto k = y.dim(n);
        return vstack(vstack(Matrix::identity(F, k), Matrix::identity(F, k)),
                      Matrix(F, y.dim(n + 1), k));
    });
    ChainMap ends = detail::degreewise(p, yy, [&](int n) {
        const auto k = y.dim(n);
        return hstack(Matrix::identity(F, 2 * k), Matrix(F, 2 * k, y.dim(n + 1)));
    });
    return {std::move(p), std::move(w), std::move(ends)};
}

/// f = q o i with i a trivial cofibration and q a fibration.
struct Factorization {
    ChainComplex mid;
    ChainMap i;
    ChainMap q;
};

/// Mapping path space N_f = X x_Y P(Y), coordinates (x, b, c) in X_n (+) Y_n (+) Y_{n+1}
/// with d(x, b, c) = (dx, db, f x - b - dc), i(x) = (x, f x, 0) and q(x, b, c) = b.
inline Factorization factorize(const ChainMap& f)
{
    const ChainComplex& x = f.src();
    const ChainComplex& y = f.tgt();
    const FieldCtx& F = f.field();
    std::map<int, std::size_t> dims;
    std::map<int, Matrix> d;
    auto [lo, hi] = degree_window({&x, &y});
    for (int n = lo; n <= hi; ++n) {
        dims[n] = x.dim(n) + y.dim(n) + y.dim(n + 1);
        Matrix m(F, x.dim(n - 1) + y.dim(n - 1) + y.dim(n), dims[n]);
        m.paste(0, 0, x.d(n));
        m.paste(x.dim(n - 1), x.dim(n), y.d(n));
        const std::size_t r = x.dim(n - 1) + y.dim(n - 1);
        m.paste(r, 0, f.at(n));
        m.paste(r, x.dim(n), -Matrix::identity(F, y.dim(n)));
        m.paste(r, x.dim(n) + y.dim(n), kPathSignMutated ? y.d(n + 1) : -y.d(n + 1));
        d.emplace(n, std::move(m));
    }
    ChainComplex mid(F, std::move(dims), std::move(d));
    ChainMap i = detail::degreewise(x, mid, [&](int n) {
        return vstack(vstack(Matrix::identity(F, x.dim(n)), f.at(n)), Matrix(F, y.dim(n + 1), x.dim(n)));
    });
    ChainMap q = detail::degreewise(mid, y, [&](int n) {
        Matrix m(F, y.dim(n), mid.dim(n));
        m.paste(0, x.dim(n), Matrix::identity(F, y.dim(n)));
        return m;
    });
    return {std::move(mid), std::move(i), std::move(q)};
}

/// The map N_f -> N_f' induced by a commuting square b f = f' a; it is (x, y, c) -> (a x, b y, b c).
inline ChainMap factorize_morphism(const ChainMap& f, const ChainMap& f2, const ChainMap& a,
                                   const ChainMap& b)
{
    if (!(a.src() == f.src()) || !(a.tgt() == f2.src()) || !(b.src() == f.tgt()) ||
        !(b.tgt() == f2.tgt()))
        throw InvariantError("factorize_morphism: square has mismatched corners");
    if (!(compose(b, f) == compose(f2, a)))
        throw InvariantError("factorize_morphism: square does not commute");
    const Factorization n1 = factorize(f);
    const Factorization n2 = factorize(f2);
    return detail::degreewise(n1.mid, n2.mid, [&](int n) {
        return block_diag(block_diag(a.at(n), b.at(n)), b.at(n + 1));
    });
}

// ---------------------------------------------------------------------------
// Pullbacks and pushouts

/// Standard pullback of b -f-> d <-g- c: P_n = ker(B_n (+) C_n -> D_n, (b, c) -> f b - g c).
struct Pullback {
    ChainMap f;
    ChainMap g;
    ChainComplex object;
    ChainMap to_b;
    ChainMap to_c;
};

inline Pullback pullback(const ChainMap& f, const ChainMap& g)
{
    if (!(f.tgt() == g.tgt()))
        throw InvariantError("pullback: maps do not share a target");
    const ChainComplex& b = f.src();
    const ChainComplex& c = g.src();
    const FieldCtx& F = f.field();
    std::map<int, Matrix> basis;
    std::map<int, std::size_t> dims;
    auto [lo, hi] = degree_window({&b, &c, &f.tgt()});
    for (int n = lo; n <= hi; ++n) {
        Matrix k = kernel_basis(hstack(f.at(n), -g.at(n)));
        dims[n] = k.cols();
        basis.emplace(n, std::move(k));
    }
    std::map<int, Matrix> d;
    for (int n = lo + 1; n <= hi; ++n) {
        const Matrix image = block_diag(b.d(n), c.d(n)) * basis.at(n);
        auto dn = solve(basis.at(n - 1), image);
        if (!dn)
            throw InvariantError("pullback: differential does not restrict");  // unreachable
        d.emplace(n, std::move(*dn));
    }
    ChainComplex p(F, dims, std::move(d));
    ChainMap to_b = detail::degreewise(p, b, [&](int n) { return basis.at(n).row_range(0, b.dim(n)); });
    ChainMap to_c = detail::degreewise(p, c, [&](int n) {
        return basis.at(n).row_range(b.dim(n), c.dim(n));
    });
    return {f, g, std::move(p), std::move(to_b), std::move(to_c)};
}

/// The unique w: A -> P with to_b w = u and to_c w = v. Requires f u = g v.
inline ChainMap universal_into_pullback(const ChainMap& u, const ChainMap& v, const Pullback& pb)
{
    if (!(u.src() == v.src()))
        throw InvariantError("universal_into_pullback: sources differ");
    if (!(compose(pb.f, u) == compose(pb.g, v)))
        throw InvariantError("universal_into_pullback: f u != g v");
    return detail::degreewise(u.src(), pb.object, [&](int n) {
        auto w = solve(vstack(pb.to_b.at(n), pb.to_c.at(n)), vstack(u.at(n), v.at(n)));
        if (!w)
            throw InvariantError("universal_into_pullback: no solution");  // unreachable
        return std::move(*w);
    });
}

/// Standard pushout of d <-g- c -h-> c': Q_n = coker(C_n -> D_n (+) C'_n, c -> (g c, -h c)).
struct Pushout {
    ChainMap g;
    ChainMap h;
    ChainComplex object;
    ChainMap from_d;
    ChainMap from_c;
    std::map<int, Matrix> section;  // chosen complement, (D (+) C')_n <- Q_n
};

inline Pushout pushout(const ChainMap& g, const ChainMap& h)
{
    if (!(g.src() == h.src()))
        throw InvariantError("pushout: maps do not share a source");
    const ChainComplex& dd = g.tgt();
    const ChainComplex& cc = h.tgt();
    const FieldCtx& F = g.field();
    std::map<int, Matrix> quotient, section;
    std::map<int, std::size_t> dims;
    auto [lo, hi] = degree_window({&g.src(), &dd, &cc});
    for (int n = lo; n <= hi; ++n) {
        const Matrix rel = vstack(g.at(n), -h.at(n));
        const Matrix image = rel.select_cols(pivot_columns(rel));
        const auto comp = complement_indices(image);
        Matrix sec = unit_columns(F, rel.rows(), comp);
        const Matrix coords = inverse(hstack(image, sec));
        quotient.emplace(n, coords.row_range(image.cols(), comp.size()));
        dims[n] = comp.size();
        section.emplace(n, std::move(sec));
    }
    std::map<int, Matrix> d;
    for (int n = lo + 1; n <= hi; ++n)
        d.emplace(n, quotient.at(n - 1) * block_diag(dd.d(n), cc.d(n)) * section.at(n));
    ChainComplex q(F, dims, std::move(d));
    ChainMap from_d = detail::degreewise(dd, q, [&](int n) {
        return quotient.at(n).col_range(0, dd.dim(n));
    });
    ChainMap from_c = detail::degreewise(cc, q, [&](int n) {
        return quotient.at(n).col_range(dd.dim(n), cc.dim(n));
    });
    return {g, h, std::move(q), std::move(from_d), std::move(from_c), std::move(section)};
}

/// The unique w: Q -> T with w from_d = alpha and w from_c = beta. Requires alpha g = beta h.
inline ChainMap universal_from_pushout(const ChainMap& alpha, const ChainMap& beta, const Pushout& po)
{
    if (!(alpha.tgt() == beta.tgt()))
        throw InvariantError("universal_from_pushout: targets differ");
    if (!(compose(alpha, po.g) == compose(beta, po.h)))
        throw InvariantError("universal_from_pushout: alpha g != beta h");
    return detail::degreewise(po.object, alpha.tgt(), [&](int n) {
        return hstack(alpha.at(n), beta.at(n)) * po.section.at(n);
    });
}

// ---------------------------------------------------------------------------
// Lifting

class LiftError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void check_lifting_problem(const ChainMap& i, const ChainMap& p, const ChainMap& u,
                                  const ChainMap& v)
{
    if (!(u.src() == i.src()) || !(u.tgt() == p.src()) || !(v.src() == i.tgt()) ||
        !(v.tgt() == p.tgt()))
        throw LiftError("lift: square has mismatched corners");
    if (!(compose(p, u) == compose(v, i)))
        throw LiftError("lift: square does not commute (p u != v i)");
}

inline Matrix random_matrix(FieldCtx F, std::size_t r, std::size_t c, SplitMix64& rng)
{
    Matrix m(F, r, c);
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < c; ++b)
            m.set(a, b, static_cast<std::uint32_t>(rng.below(F.p())));
    return m;
}

}  // namespace detail

/// Solves the lifting problem
///
///     X --u--> E
///     |i       |p
///     v        v
///     Z --v--> Y
///
/// for i a trivial cofibration and p a fibration: returns l with l i = u and p l = v.
///
/// Z is split as i(X) (+) Q with Q acyclic; a contraction of Q corrects both the
/// complement (into a subcomplex) and a degreewise preimage under p (into a chain map).
/// `perturb` randomizes the complement and the preimage, producing a different lift.
inline ChainMap lift(const ChainMap& i, const ChainMap& p, const ChainMap& u, const ChainMap& v,
                     std::optional<std::uint64_t> perturb = std::nullopt)
{
    detail::check_lifting_problem(i, p, u, v);
    if (!is_cofibration(i) || !is_weq(i))
        throw LiftError("lift: i is not a trivial cofibration");
    if (!is_fibration(p))
        throw LiftError("lift: p is not a fibration");

    const ChainComplex& x = i.src();
    const ChainComplex& z = i.tgt();
    const ChainComplex& e = p.src();
    const FieldCtx& F = i.field();
    SplitMix64 rng(perturb.value_or(0));
    auto [lo, hi] = degree_window({&x, &z, &e, &p.tgt()});

    // Degreewise complement sigma0 of i(X) in Z, with coordinates (rho; pi) = [i | sigma0]^-1.
    std::map<int, Matrix> sigma0, rho, pi;
    std::map<int, std::size_t> qdims;
    for (int n = lo; n <= hi; ++n) {
        Matrix s = unit_columns(F, z.dim(n), complement_indices(i.at(n)));
        if (perturb)
            s = s + i.at(n) * detail::random_matrix(F, x.dim(n), s.cols(), rng);
        const Matrix coords = inverse(hstack(i.at(n), s));
        rho.emplace(n, coords.row_range(0, x.dim(n)));
        pi.emplace(n, coords.row_range(x.dim(n), s.cols()));
        qdims[n] = s.cols();
        sigma0.emplace(n, std::move(s));
    }
    auto at = [&](const std::map<int, Matrix>& m, int n, std::size_t r, std::size_t c) {
        auto it = m.find(n);
        return it == m.end() ? Matrix(F, r, c) : it->second;
    };
    auto qdim = [&](int n) { return qdims.count(n) ? qdims.at(n) : std::size_t{0}; };
    auto sig0 = [&](int n) { return at(sigma0, n, z.dim(n), qdim(n)); };

    std::map<int, Matrix> dq;
    for (int n = lo + 1; n <= hi; ++n)
        dq.emplace(n, pi.at(n - 1) * z.d(n) * sigma0.at(n));
    const ChainComplex q(F, qdims, dq);
    const HomologySplitting split(q);
    for (auto [n, k] : q.dims())
        if (split.betti(n) != 0)
            throw LiftError("lift: cokernel of i is not acyclic");  // unreachable after is_weq
    auto dQ = [&](int n) { return q.d(n); };

    // twist t(n) = rho (d sigma0 - sigma0 d_Q): Q_n -> X_{n-1}; sigma = sigma0 + i t s.
    auto twist = [&](int n) {
        return at(rho, n - 1, x.dim(n - 1), z.dim(n - 1)) * (z.d(n) * sig0(n) - sig0(n - 1) * dQ(n));
    };
    std::map<int, Matrix> sigma;
    for (int n = lo; n <= hi; ++n)
        sigma.emplace(n, sig0(n) + i.at(n) * twist(n + 1) * split.contraction(n));

    // lambda0: degreewise preimage of v sigma under p; lambda = lambda0 + c s with c its defect.
    std::map<int, Matrix> lambda0;
    for (int n = lo; n <= hi; ++n) {
        auto pre = solve(p.at(n), v.at(n) * sigma.at(n));
        if (!pre)
            throw LiftError("lift: p is not surjective in degree " + std::to_string(n));
        Matrix l = std::move(*pre);
        if (perturb) {
            const Matrix ker = kernel_basis(p.at(n));
            l = l + ker * detail::random_matrix(F, ker.cols(), l.cols(), rng);
        }
        lambda0.emplace(n, std::move(l));
    }
    auto lam0 = [&](int n) { return at(lambda0, n, e.dim(n), qdim(n)); };
    auto defect = [&](int n) { return e.d(n) * lam0(n) - lam0(n - 1) * dQ(n); };

    return detail::degreewise(z, e, [&](int n) {
        const Matrix lambda = lam0(n) + defect(n + 1) * split.contraction(n);
        return hstack(u.at(n), lambda) * inverse(hstack(i.at(n), sigma.at(n)));
    });
}

/// Reference route for lift: one global linear system in all l(n). Returns nullopt
/// when no lift exists (no model-structure preconditions are assumed).
inline std::optional<ChainMap> lift_by_linear_system(const ChainMap& i, const ChainMap& p,
                                                     const ChainMap& u, const ChainMap& v)
{
    detail::check_lifting_problem(i, p, u, v);
    const ChainComplex& x = i.src();
    const ChainComplex& z = i.tgt();
    const ChainComplex& e = p.src();
    const ChainComplex& y = p.tgt();
    const FieldCtx& F = i.field();
    detail::LinearSystem sys(F);
    std::map<int, std::size_t> unknown;
    auto [lo, hi] = degree_window({&x, &z, &e, &y});
    for (int n = lo; n <= hi; ++n)
        if (z.dim(n) && e.dim(n))
            unknown[n] = sys.add_unknown(e.dim(n), z.dim(n));
    for (int n = lo; n <= hi; ++n) {
        if (e.dim(n) && x.dim(n)) {
            const auto eq = sys.add_equation(u.at(n));
            if (unknown.count(n))
                sys.add_term(eq, unknown[n], Matrix::identity(F, e.dim(n)), i.at(n));
        }
        if (y.dim(n) && z.dim(n)) {
            const auto eq = sys.add_equation(v.at(n));
            if (unknown.count(n))
                sys.add_term(eq, unknown[n], p.at(n), Matrix::identity(F, z.dim(n)));
        }
        if (e.dim(n - 1) && z.dim(n)) {
            const auto eq = sys.add_equation(Matrix(F, e.dim(n - 1), z.dim(n)));
            if (unknown.count(n))
                sys.add_term(eq, unknown[n], e.d(n), Matrix::identity(F, z.dim(n)));
            if (unknown.count(n - 1))
                sys.add_term(eq, unknown[n - 1], -Matrix::identity(F, e.dim(n - 1)), z.d(n));
        }
    }
    auto sol = sys.solve();
    if (!sol)
        return std::nullopt;
    std::map<int, Matrix> l;
    for (auto [n, idx] : unknown)
        l.emplace(n, (*sol)[idx]);
    return ChainMap(z, e, std::move(l));
}

}  // namespace hopb
