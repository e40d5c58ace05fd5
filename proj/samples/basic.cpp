// Loop object of S(1) and a model-square check over F_5.

#include "hopb/hopull.hpp"

#include <cstdio>

using namespace hopb;

static void print_homology(const char* label, const std::map<int, std::size_t>& h)
{
    std::printf("%s:", label);
    if (h.empty())
        std::printf(" 0");
    for (const auto& [n, d] : h)
        std::printf(" H_%d = %zu", n, d);
    std::printf("\n");
}

int main()
{
    const FieldCtx F(5);
    const auto z = ChainComplex::zero(F);
    const auto s0 = ChainComplex::sphere(F, 0);
    const auto s1 = ChainComplex::sphere(F, 1);

    // 0 -> S(1) <- 0
    const Cospan loop(ChainMap::zero(z, s1), ChainMap::zero(z, s1));
    for (Sigma s : {Sigma::Inj, Sigma::ReeI, Sigma::ReeD})
        print_homology("homotopy pullback", homotopy_pullback(loop, s, ReplaceMode::Functorial).homology);

    // B = S(0) + S(1) ->> S(0) <- 0, with the strict pullback S(1) and with 0 as vertex
    const Cospan x(ChainMap::zero(z, s0), projection_first(s0, s1));
    const CommSquare strict(inclusion_second(s0, s1), ChainMap::zero(s1, z), x);
    const CommSquare empty(ChainMap::zero(z, x.b()), ChainMap::zero(z, z), x);
    std::printf("strict pullback is a model square: %s\n", is_model_square_full(strict) ? "yes" : "no");
    std::printf("empty vertex is a model square: %s\n", is_model_square_full(empty) ? "yes" : "no");
    return 0;
}
