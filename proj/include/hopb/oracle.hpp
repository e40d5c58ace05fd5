#pragma once

// Independent ground truth for homotopy pullback homology. Only the test harness
// includes this header; none of the constructions in hopull.hpp consult it.

#include "hopb/cospan.hpp"

#include <map>

namespace hopb {

/// E_n = B_n (+) C_n (+) D_{n+1},  d(b, c, w) = (db, dc, f b - g c - dw).
inline ChainComplex cocone_complex(const Cospan& x)
{
    const ChainComplex& b = x.b();
    const ChainComplex& c = x.c();
    const ChainComplex& d = x.d();
    const FieldCtx& F = x.field();
    std::map<int, std::size_t> dims;
    std::map<int, Matrix> diff;
    auto [lo, hi] = degree_window({&b, &c, &d});
    for (int n = lo; n <= hi; ++n) {
        dims[n] = b.dim(n) + c.dim(n) + d.dim(n + 1);
        Matrix m(F, b.dim(n - 1) + c.dim(n - 1) + d.dim(n), dims[n]);
        m.paste(0, 0, b.d(n));
        m.paste(b.dim(n - 1), b.dim(n), c.d(n));
        const std::size_t r = b.dim(n - 1) + c.dim(n - 1);
        m.paste(r, 0, x.f().at(n));
        m.paste(r, b.dim(n), -x.g().at(n));
        m.paste(r, b.dim(n) + c.dim(n), -d.d(n + 1));
        diff.emplace(n, std::move(m));
    }
    return ChainComplex(F, std::move(dims), std::move(diff));
}

inline std::map<int, std::size_t> cocone_oracle(const Cospan& x)
{
    return homology_dims(cocone_complex(x));
}

}  // namespace hopb
