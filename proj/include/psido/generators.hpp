#pragma once

// Seeded random inputs shared by the property tests, the acceptance binary and
// the demo command.

#include <random>

#include "psido/bisingular.hpp"
#include "psido/ktheory.hpp"
#include "psido/symbol.hpp"

namespace psido::gen {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Gaussian rational with numerators in [-3, 3] and denominator 1 or 2, never zero.
inline GaussRat coefficient(Rng& rng) {
    for (;;) {
        const long d = uniform(rng, 1, 2);
        GaussRat c(frac(uniform(rng, -3, 3), d), frac(uniform(rng, -3, 3), d));
        if (!c.is_zero()) return c;
    }
}

inline TrigPoly trig(Rng& rng, int max_freq, int terms) {
    TrigPoly u;
    while (u.is_zero())
        for (int i = 0; i < terms; ++i) u.add_term(uniform(rng, -max_freq, max_freq), coefficient(rng));
    return u;
}

// Complete symbol of exact order `order` with components down to order - depth.
inline ShubinSymbol symbol(Rng& rng, int order, int depth, int max_freq) {
    std::map<int, TrigPoly> comps;
    comps[order] = trig(rng, max_freq, 2);
    for (int j = order - 1; j >= order - depth; --j)
        if (uniform(rng, 0, 1)) comps[j] = trig(rng, max_freq, 2);
    return ShubinSymbol(std::move(comps));
}

// Polynomial in (x, xi) of total degree exactly `degree`.
inline ShubinSymbol polynomial(Rng& rng, int degree) {
    ShubinSymbol s;
    while (s.is_zero() || s.total_degree() != degree) {
        s = ShubinSymbol();
        const int p = uniform(rng, 0, degree);
        s += ShubinSymbol::polynomial_monomial(p, degree - p, coefficient(rng));
        const int extra = uniform(rng, 0, 3);
        for (int i = 0; i < extra; ++i) {
            const int d = uniform(rng, 0, degree);
            const int q = uniform(rng, 0, d);
            s += ShubinSymbol::polynomial_monomial(d - q, q, coefficient(rng));
        }
    }
    return s;
}

// Tensor sum with 1..3 terms; term 0 attains both orders.
inline BisingularSymbol bisingular(Rng& rng, BiOrder m, int depth, int max_freq) {
    std::vector<TensorTerm> terms;
    const int n = uniform(rng, 1, 3);
    for (int t = 0; t < n; ++t) {
        const int o1 = t == 0 ? m.m1 : m.m1 - uniform(rng, 0, 1);
        const int o2 = t == 0 ? m.m2 : m.m2 - uniform(rng, 0, 1);
        terms.push_back({symbol(rng, o1, depth, max_freq), symbol(rng, o2, depth, max_freq), {}});
    }
    return BisingularSymbol(m, std::move(terms));
}

// Symbol of declared order m whose two principal symbols cancel: b minus the
// reconstruction of its own principal pair, plus random terms of order (m1-1, m2-1).
inline BisingularSymbol cancelling(Rng& rng, BiOrder m, int depth, int max_freq) {
    BisingularSymbol b = bisingular(rng, m, depth, max_freq);
    BisingularSymbol a = b - reconstruct(principal_pair(b));
    if (uniform(rng, 0, 1)) {
        BisingularSymbol low({m.m1 - 1, m.m2 - 1},
                             {{symbol(rng, m.m1 - 1, depth, max_freq), symbol(rng, m.m2 - 1, depth, max_freq), {}}});
        a += low;
    }
    return BisingularSymbol(m, a.terms());
}

inline SigmaPair compatible_pair(Rng& rng, BiOrder m, int depth, int max_freq) {
    return principal_pair(bisingular(rng, m, depth, max_freq));
}

// (x + i xi)^k for k >= 0, (x - i xi)^|k| for k < 0, as a pointwise power.
inline ShubinSymbol ladder_power(int k) {
    const ShubinSymbol base = ShubinSymbol::x() + ShubinSymbol::xi().scaled(k >= 0 ? GaussRat::I() : -GaussRat::I());
    ShubinSymbol s = ShubinSymbol::one();
    for (int i = 0; i < (k >= 0 ? k : -k); ++i) s = s * base;
    return s;
}

inline IntMatrix int_matrix(Rng& rng, size_t rows, size_t cols, int bound) {
    IntMatrix M(rows, cols);
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j) M(i, j) = uniform(rng, -bound, bound);
    return M;
}

}  // namespace psido::gen
