#include <doctest.h>

#include "psido/bisingular.hpp"
#include "psido/errors.hpp"
#include "psido/generators.hpp"

using namespace psido;

namespace {

const ShubinSymbol z = ShubinSymbol::monomial(1, 1);      // x + i xi
const ShubinSymbol zbar = ShubinSymbol::monomial(1, -1);  // x - i xi

}  // namespace

TEST_CASE("external product evaluates factorwise") {
    gen::Rng rng(11);
    for (int n = 0; n < 20; ++n) {
        const ShubinSymbol f = gen::symbol(rng, 1, 1, 2), g = gen::symbol(rng, 0, 1, 2);
        const BisingularSymbol a = external_product(f, g);
        CHECK(a.order() == BiOrder{1, 0});
        CHECK(std::abs(a.evaluate(1.3, 0.4, -2.0, 1.1) - f.evaluate(1.3, 0.4) * g.evaluate(-2.0, 1.1)) < 1e-12);
    }
}

TEST_CASE("principal symbols of an external product") {
    const BisingularSymbol a = external_product(z, zbar);
    const SymbolValuedLoop s1 = sigma1(a), s2 = sigma2(a);
    CHECK(s1.factor() == Factor::one);
    CHECK(s1.value_order() == 1);
    REQUIRE(s1.coeffs().size() == 1);
    CHECK(s1.coeffs().at(1) == zbar);
    REQUIRE(s2.coeffs().size() == 1);
    CHECK(s2.coeffs().at(-1) == z);
    BiTrigPoly common;
    common.add_term(1, -1, GaussRat(1));
    CHECK(tsigma2(s1) == common);
    CHECK(tsigma1(s2) == common);
    CHECK(compat_check(s1, s2));
}

TEST_CASE("lower-order terms do not reach the principal symbols") {
    const BisingularSymbol a = external_product(z, zbar) + external_product(ShubinSymbol::one(), zbar);
    CHECK(sigma2(a).coeffs().at(-1) == z + ShubinSymbol::one());
    CHECK(sigma1(a).coeffs().size() == 1);
}

TEST_CASE("principal pairs of random symbols are compatible") {
    gen::Rng rng(12);
    for (int n = 0; n < 40; ++n) {
        const BisingularSymbol a = gen::bisingular(rng, {gen::uniform(rng, -1, 2), gen::uniform(rng, -1, 2)}, 2, 2);
        CHECK(compat_check(sigma1(a), sigma2(a)));
    }
}

TEST_CASE("incompatible pairs are rejected") {
    const SymbolValuedLoop F(Factor::one, 1, {{1, z}});
    const SymbolValuedLoop G(Factor::two, 1, {{1, zbar}});
    CHECK_FALSE(compat_check(F, G));
    CHECK_THROWS_AS(SigmaPair::make(F, G), PreconditionError);
}

TEST_CASE("reconstruction realizes a given pair") {
    gen::Rng rng(13);
    for (int n = 0; n < 40; ++n) {
        const SigmaPair p = gen::compatible_pair(rng, {gen::uniform(rng, -1, 2), gen::uniform(rng, -1, 2)}, 2, 2);
        const BisingularSymbol a = reconstruct(p);
        CHECK(a.order() == p.order);
        CHECK(sigma1(a) == p.F);
        CHECK(sigma2(a) == p.G);
    }
}

TEST_CASE("a symbol minus the reconstruction of its principal pair drops order") {
    gen::Rng rng(14);
    for (int n = 0; n < 40; ++n) {
        const BisingularSymbol a = gen::cancelling(rng, {gen::uniform(rng, 0, 2), gen::uniform(rng, 0, 2)}, 2, 2);
        CHECK(sigma1(a).is_zero());
        CHECK(sigma2(a).is_zero());
        const CheckReport r = kernel_order_check(a);
        CHECK(r.applicable);
        CHECK_MESSAGE(r.pass, r.detail);
    }
}

TEST_CASE("kernel check on a symbol with a nonzero principal symbol") {
    const CheckReport r = kernel_order_check(external_product(z, z));
    CHECK_FALSE(r.applicable);
}

TEST_CASE("terms cancelling across the tensor sum") {
    const BisingularSymbol a({1, 1}, {{z, ShubinSymbol::one(), {}}, {z.scaled(GaussRat(-1)), ShubinSymbol::one(), {}}});
    CHECK(kernel_order_check(a).pass);
}

TEST_CASE("bisingular composition acts factorwise") {
    gen::Rng rng(15);
    for (int n = 0; n < 20; ++n) {
        const ShubinSymbol f = gen::polynomial(rng, 2), g = gen::polynomial(rng, 1);
        const ShubinSymbol f2 = gen::polynomial(rng, 1), g2 = gen::polynomial(rng, 2);
        const BisingularSymbol c = bs_compose(external_product(f, g), external_product(f2, g2));
        const BisingularSymbol expect = external_product(kn_compose(f, f2), kn_compose(g, g2));
        CHECK(bimonomial_expansion(c) == bimonomial_expansion(expect));
        CHECK(c.order() == BiOrder{3, 3});
    }
}

TEST_CASE("principal symbols are multiplicative") {
    gen::Rng rng(16);
    for (int n = 0; n < 20; ++n) {
        const BisingularSymbol a = gen::bisingular(rng, {1, 1}, 1, 2), b = gen::bisingular(rng, {1, 0}, 1, 2);
        const BisingularSymbol c = bs_compose(a, b, 2);
        const SigmaPair lhs = principal_pair(c);
        const SigmaPair rhs = sigma_pair_compose(principal_pair(a), principal_pair(b), 2);
        CHECK(tsigma2(lhs.F) == tsigma2(rhs.F));
        CHECK(tsigma1(lhs.G) == tsigma1(rhs.G));
    }
}

TEST_CASE("regrouping preserves the bimonomial expansion") {
    gen::Rng rng(17);
    for (int n = 0; n < 20; ++n) {
        const BisingularSymbol a = gen::bisingular(rng, {2, 1}, 2, 2);
        CHECK(bimonomial_expansion(regroup(a, a.order())) == bimonomial_expansion(a));
    }
}

TEST_CASE("terms above the declared order are rejected") {
    CHECK_THROWS_AS(BisingularSymbol({0, 1}, {{z, z, {}}}), PreconditionError);
}

TEST_CASE("bsym and sig documents round trip") {
    gen::Rng rng(18);
    for (int n = 0; n < 15; ++n) {
        const SigmaPair p = gen::compatible_pair(rng, {1, 1}, 1, 2);
        const BisingularSymbol a = reconstruct(p);
        const ParsedBisingular back = parse_bisingular_document(write_bisingular_document(a));
        CHECK(bimonomial_expansion(back.symbol) == bimonomial_expansion(a));
        const ParsedSigma sig = parse_sigma_document(write_sigma_document(p));
        REQUIRE(sig.F.has_value());
        REQUIRE(sig.G.has_value());
        CHECK(*sig.F == p.F);
        CHECK(*sig.G == p.G);
    }
}

TEST_CASE("bsym parse errors carry positions") {
    CHECK_THROWS_AS(parse_bisingular_document("term { f = [(0,0,1)] g = [(0,0,1)] }"), ParseError);
    CHECK_THROWS_AS(parse_bisingular_document("order = [0, 0]\nterm { f = [(0,0,1)] }"), ParseError);
    try {
        parse_bisingular_document("order = [0, 0]\nterm { f = [(0,0,1)] g = [(0,0,1)] cutoff = chi3 }");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_sigma_document("order = [1, 1]\nF { 1 : [(1,1,1)] 1 : [(1,1,1)] }"), ParseError);
}
