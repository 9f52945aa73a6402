#include <cmath>

#include <doctest.h>

#include "psido/errors.hpp"
#include "psido/generators.hpp"
#include "psido/symbol.hpp"

using namespace psido;

namespace {

using Monomials = std::map<std::pair<int, int>, GaussRat>;

// Independent Kohn-Nirenberg product on monomial coefficient maps:
// x^p xi^q # x^r xi^s = sum_k (1/k!) d_xi^k(x^p xi^q) (-i d_x)^k (x^r xi^s).
Monomials kn_oracle(const Monomials& a, const Monomials& b) {
    Monomials out;
    for (const auto& [pq, ca] : a)
        for (const auto& [rs, cb] : b) {
            const auto [p, q] = pq;
            const auto [r, s] = rs;
            for (int k = 0; k <= std::min(q, r); ++k) {
                Rational falling_q = 1, falling_r = 1;
                for (int i = 0; i < k; ++i) {
                    falling_q *= q - i;
                    falling_r *= r - i;
                }
                GaussRat c = ca * cb * GaussRat(Rational(falling_q * falling_r / factorial(k))) * i_power(-k);
                out[{p + r - k, q + s - k}] += c;
            }
        }
    std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
}

std::complex<double> eval_monomials(const Monomials& m, double x, double xi) {
    std::complex<double> v = 0;
    for (const auto& [pq, c] : m) v += c.to_complex() * std::pow(x, pq.first) * std::pow(xi, pq.second);
    return v;
}

}  // namespace

TEST_CASE("trig polynomials multiply like functions") {
    gen::Rng rng(1);
    for (int n = 0; n < 20; ++n) {
        const TrigPoly a = gen::trig(rng, 3, 3), b = gen::trig(rng, 3, 3);
        for (double t : {0.0, 0.7, 2.1, 4.4}) CHECK(std::abs((a * b).evaluate(t) - a.evaluate(t) * b.evaluate(t)) < 1e-12);
    }
}

TEST_CASE("coordinate symbols") {
    const ShubinSymbol x = ShubinSymbol::x(), xi = ShubinSymbol::xi();
    CHECK(x.order() == 1);
    CHECK(x.is_polynomial_class());
    CHECK(std::abs(x.evaluate(0.3, -2.0) - 0.3) < 1e-14);
    CHECK(std::abs(xi.evaluate(0.3, -2.0) + 2.0) < 1e-14);
    const ShubinSymbol z = x + xi.scaled(GaussRat::I());
    CHECK(z == ShubinSymbol::monomial(1, 1));
    CHECK(sh_principal(z) == TrigPoly::monomial(1));
    CHECK(to_polynomial_string(z) == "x + i*xi");
}

TEST_CASE("polynomial monomials round trip through the polar form") {
    for (int p = 0; p <= 4; ++p)
        for (int q = 0; q + p <= 4; ++q) {
            const ShubinSymbol s = ShubinSymbol::polynomial_monomial(p, q);
            const Monomials m = s.to_monomials();
            REQUIRE(m.size() == 1);
            CHECK(m.begin()->first == std::pair{p, q});
            CHECK(m.begin()->second == GaussRat(1));
            CHECK(std::abs(s.evaluate(0.4, 1.3) - std::pow(0.4, p) * std::pow(1.3, q)) < 1e-12);
        }
}

TEST_CASE("weight of even order is an exact polynomial") {
    const ShubinSymbol w = ShubinSymbol::weight(2, 0);
    CHECK(w.is_complete());
    for (double x : {0.0, 0.5, 3.0})
        for (double xi : {-1.0, 0.25}) CHECK(std::abs(w.evaluate(x, xi) - (1 + x * x + xi * xi)) < 1e-12);
    CHECK_FALSE(ShubinSymbol::weight(1, 4).is_complete());
}

TEST_CASE("derivatives agree with finite differences away from the cut-off") {
    gen::Rng rng(2);
    const double h = 1e-5;
    for (int n = 0; n < 30; ++n) {
        const ShubinSymbol s = gen::symbol(rng, gen::uniform(rng, -2, 3), 2, 3);
        const ShubinSymbol dx = sh_derivative(s, Variable::x), dxi = sh_derivative(s, Variable::xi);
        for (auto [x, xi] : {std::pair{1.5, 0.7}, {-2.0, 1.1}, {0.3, -3.0}}) {
            const auto fx = (s.evaluate(x + h, xi) - s.evaluate(x - h, xi)) / (2 * h);
            const auto fxi = (s.evaluate(x, xi + h) - s.evaluate(x, xi - h)) / (2 * h);
            const double scale = 1 + std::abs(fx) + std::abs(fxi);
            CHECK(std::abs(dx.evaluate(x, xi) - fx) < 1e-6 * scale);
            CHECK(std::abs(dxi.evaluate(x, xi) - fxi) < 1e-6 * scale);
        }
        CHECK(dx.order() <= s.order() - 1);
    }
}

TEST_CASE("pointwise product evaluates to the product of values") {
    gen::Rng rng(3);
    for (int n = 0; n < 30; ++n) {
        const ShubinSymbol a = gen::symbol(rng, gen::uniform(rng, -1, 2), 1, 2);
        const ShubinSymbol b = gen::symbol(rng, gen::uniform(rng, -1, 2), 1, 2);
        const ShubinSymbol ab = a * b;
        CHECK(ab.order() == a.order() + b.order());
        for (auto [x, xi] : {std::pair{1.2, 0.9}, {-4.0, 2.0}}) {
            const auto expect = a.evaluate(x, xi) * b.evaluate(x, xi);
            CHECK(std::abs(ab.evaluate(x, xi) - expect) < 1e-10 * (1 + std::abs(expect)));
        }
    }
}

TEST_CASE("Kohn-Nirenberg composition of xi and x") {
    const ShubinSymbol r = kn_compose(ShubinSymbol::xi(), ShubinSymbol::x());
    CHECK(to_polynomial_string(r) == "x*xi - i");
    CHECK(kn_compose(ShubinSymbol::x(), ShubinSymbol::xi()) == ShubinSymbol::polynomial_monomial(1, 1));
}

TEST_CASE("composition of polynomials matches the monomial oracle") {
    gen::Rng rng(4);
    for (int n = 0; n < 40; ++n) {
        const ShubinSymbol a = gen::polynomial(rng, gen::uniform(rng, 0, 3));
        const ShubinSymbol b = gen::polynomial(rng, gen::uniform(rng, 0, 3));
        const ShubinSymbol c = kn_compose(a, b);
        CHECK(c.is_complete());
        const Monomials expect = kn_oracle(a.to_monomials(), b.to_monomials());
        CHECK(c.to_monomials() == expect);
        CHECK(std::abs(c.evaluate(0.6, -1.4) - eval_monomials(expect, 0.6, -1.4)) < 1e-9);
    }
}

TEST_CASE("composition is associative on polynomials") {
    gen::Rng rng(5);
    for (int n = 0; n < 20; ++n) {
        const ShubinSymbol a = gen::polynomial(rng, 2), b = gen::polynomial(rng, 2), c = gen::polynomial(rng, 1);
        CHECK(kn_compose(kn_compose(a, b), c) == kn_compose(a, kn_compose(b, c)));
    }
}

TEST_CASE("principal part of a composition is the product of principal parts") {
    gen::Rng rng(6);
    for (int n = 0; n < 30; ++n) {
        const ShubinSymbol a = gen::symbol(rng, gen::uniform(rng, -2, 2), 2, 2);
        const ShubinSymbol b = gen::symbol(rng, gen::uniform(rng, -2, 2), 2, 2);
        const ShubinSymbol c = kn_compose(a, b, 2);
        CHECK(sh_principal(c) == sh_principal(a) * sh_principal(b));
        CHECK(c.order() == a.order() + b.order());
    }
}

TEST_CASE("truncated composition keeps a floor") {
    const ShubinSymbol a = ShubinSymbol::monomial(-1, 1), b = ShubinSymbol::monomial(2, 0);
    const ShubinSymbol c = kn_compose(a, b, 1);
    REQUIRE(c.floor().has_value());
    CHECK(*c.floor() >= a.order() + b.order() - 1);
}

TEST_CASE("seminorm check") {
    const ShubinSymbol z = ShubinSymbol::monomial(1, 1);
    CHECK(seminorm_check(z, 1).pass);
    CHECK(seminorm_check(z, 2).pass);
    CHECK_FALSE(seminorm_check(z, 0).pass);
    gen::Rng rng(7);
    for (int n = 0; n < 20; ++n) {
        const ShubinSymbol s = gen::symbol(rng, gen::uniform(rng, -3, 3), 2, 3);
        CHECK(seminorm_check(s, s.order()).pass);
        CHECK_FALSE(seminorm_check(s, s.order() - 1).pass);
    }
}

TEST_CASE("literal parsing") {
    const ParsedSymbol p = parse_symbol_literal("[(1, 1, 1/2), (1, -1, 1/2)]");
    CHECK(p.symbol == ShubinSymbol::x());
    CHECK(p.warnings.empty());

    const ParsedSymbol dup = parse_symbol_literal("[(0, 0, 1), (0, 0, 2), (1, 1, 0)]");
    CHECK(dup.warnings.size() == 2);
    CHECK(dup.symbol == ShubinSymbol::constant(GaussRat(3)));

    CHECK(parse_symbol_literal("[(1, 1, -1/2 i), (1, -1, 1/2 i)]").symbol == ShubinSymbol::xi());
    CHECK(parse_symbol_literal("[]").symbol.is_zero());

    try {
        parse_symbol_literal("[(1, 1, 1),\n (2, x, 1)]");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() > 1);
    }
    CHECK_THROWS_AS(parse_symbol_literal("[(1, 1, 1/0)]"), ParseError);
    CHECK_THROWS_AS(parse_symbol_literal("[(1, 1, 1)"), ParseError);
}

TEST_CASE("documents round trip") {
    gen::Rng rng(8);
    for (int n = 0; n < 20; ++n) {
        ShubinSymbol s = gen::symbol(rng, gen::uniform(rng, -2, 3), 3, 3);
        if (n % 2) s = s.truncated(s.order() - 1);
        CHECK(parse_symbol_document(write_symbol_document(s)).symbol == s);
    }
}
