#pragma once

// Bisingular symbols on R^1 x R^1 as finite tensor sums f(x1, xi1) g(x2, xi2),
// the two operator-valued principal symbols, and the algebra of compatible
// principal-symbol pairs.

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "psido/symbol.hpp"

namespace psido {

struct BiOrder {
    int m1 = 0;
    int m2 = 0;
    friend bool operator==(const BiOrder&, const BiOrder&) = default;
};

// Cut-off bookkeeping for terms produced by reconstruct(). Principal symbol
// extraction ignores it; evaluation multiplies by chi(r1) and/or chi(r2).
struct TermCutoff {
    bool factor1 = false;
    bool factor2 = false;
    friend bool operator==(const TermCutoff&, const TermCutoff&) = default;
};

struct TensorTerm {
    ShubinSymbol f;  // factor 1
    ShubinSymbol g;  // factor 2
    TermCutoff cutoff;
    friend bool operator==(const TensorTerm&, const TensorTerm&) = default;
};

class BisingularSymbol {
public:
    BisingularSymbol() = default;
    // Throws PreconditionError if a term exceeds the declared order.
    BisingularSymbol(BiOrder order, std::vector<TensorTerm> terms);

    static BisingularSymbol unit();

    BiOrder order() const { return order_; }
    const std::vector<TensorTerm>& terms() const { return terms_; }
    // No terms, or every term vanishes.
    bool is_zero() const;
    // Some term reaches m1 in factor 1 and some term reaches m2 in factor 2.
    bool attains_order() const;

    std::complex<double> evaluate(double x1, double xi1, double x2, double xi2) const;

    BisingularSymbol scaled(const GaussRat& c) const;
    // Concatenates terms; order is the componentwise max.
    BisingularSymbol& operator+=(const BisingularSymbol& o);

private:
    BiOrder order_;
    std::vector<TensorTerm> terms_;
};

BisingularSymbol operator+(BisingularSymbol a, const BisingularSymbol& b);
BisingularSymbol operator-(BisingularSymbol a, const BisingularSymbol& b);

enum class Factor { one = 1, two = 2 };

// theta -> sum_k e^{ik theta} coeffs[k], theta on the circle of `factor`, values
// Shubin symbols on the other factor.
class SymbolValuedLoop {
public:
    SymbolValuedLoop() = default;
    SymbolValuedLoop(Factor factor, int value_order, std::map<int, ShubinSymbol> coeffs);

    Factor factor() const { return factor_; }
    int value_order() const { return value_order_; }
    const std::map<int, ShubinSymbol>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    friend bool operator==(const SymbolValuedLoop&, const SymbolValuedLoop&) = default;

private:
    Factor factor_ = Factor::one;
    int value_order_ = 0;
    std::map<int, ShubinSymbol> coeffs_;
};

// sum c_{k1,k2} e^{i k1 theta1} e^{i k2 theta2}
class BiTrigPoly {
public:
    using Key = std::pair<int, int>;

    const std::map<Key, GaussRat>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    void add_term(int k1, int k2, const GaussRat& c);
    GaussRat coeff(int k1, int k2) const;
    std::complex<double> evaluate(double theta1, double theta2) const;

    friend bool operator==(const BiTrigPoly&, const BiTrigPoly&) = default;

private:
    std::map<Key, GaussRat> coeffs_;
};

BiTrigPoly product(const TrigPoly& u1, const TrigPoly& u2);
std::string to_string(const BiTrigPoly& u);
std::string to_string(const SymbolValuedLoop& loop);

// Compatible pair (F, G): F lives on circle 1 with values of order m2 on factor 2,
// G on circle 2 with values of order m1 on factor 1.
struct SigmaPair {
    SymbolValuedLoop F;
    SymbolValuedLoop G;
    BiOrder order;

    // Throws PreconditionError unless compat_check(F, G) holds.
    static SigmaPair make(SymbolValuedLoop F, SymbolValuedLoop G);
    static SigmaPair unit();

    friend bool operator==(const SigmaPair&, const SigmaPair&) = default;
};

BisingularSymbol external_product(const ShubinSymbol& f, const ShubinSymbol& g);

// Termwise (f#f') (x) (g#g').
BisingularSymbol bs_compose(const BisingularSymbol& a, const BisingularSymbol& b,
                            std::optional<int> depth = std::nullopt);

SymbolValuedLoop sigma1(const BisingularSymbol& a);
SymbolValuedLoop sigma2(const BisingularSymbol& a);

// Pointwise principal symbols: tsigma1 reads the factor-1 principal of the
// values of a factor-2 loop (G), tsigma2 the factor-2 principal of F.
BiTrigPoly tsigma1(const SymbolValuedLoop& G);
BiTrigPoly tsigma2(const SymbolValuedLoop& F);

bool compat_check(const SymbolValuedLoop& F, const SymbolValuedLoop& G);

// Pointwise product in theta with Kohn-Nirenberg composition of the values.
SymbolValuedLoop loop_compose(const SymbolValuedLoop& p, const SymbolValuedLoop& q,
                              std::optional<int> depth = std::nullopt);

// {p.F o q.F, p.G o q.G}; p acts on the left.
SigmaPair sigma_pair_compose(const SigmaPair& p, const SigmaPair& q, std::optional<int> depth = std::nullopt);

inline SigmaPair principal_pair(const BisingularSymbol& a) { return SigmaPair::make(sigma1(a), sigma2(a)); }

// a = chi1 P + chi2 Q - chi1 chi2 R with P, Q the homogeneous extensions of F, G
// and R that of the common pointwise principal symbol.
BisingularSymbol reconstruct(const SigmaPair& p);

// Expansion in the basis r1^j1 e^{ik1 t1} (x) r2^j2 e^{ik2 t2}; only meaningful
// for the known (non-truncated) parts of the factors.
using BiMonomialKey = std::tuple<int, int, int, int>;  // (j1, k1, j2, k2)
std::map<BiMonomialKey, GaussRat> bimonomial_expansion(const BisingularSymbol& a);

// Canonical tensor-sum form built from the bimonomial expansion, one term per
// factor-1 monomial. Cut-off metadata is dropped (it only changes the symbol
// by a smoothing term).
BisingularSymbol regroup(const BisingularSymbol& a, BiOrder order);

// If sigma1(a) = sigma2(a) = 0, verifies that a has a representation of order
// (m1 - 1, m2 - 1).
CheckReport kernel_order_check(const BisingularSymbol& a);

struct ParsedBisingular {
    BisingularSymbol symbol;
    std::vector<std::string> warnings;
};

ParsedBisingular parse_bisingular_document(const std::string& text);
std::string write_bisingular_document(const BisingularSymbol& a);

// .sig: "order = [m1, m2]" then "F { k : <literal> ... }" and/or "G { ... }".
// Either block may be omitted (loop-only input for family indices).
struct ParsedSigma {
    std::optional<SymbolValuedLoop> F;
    std::optional<SymbolValuedLoop> G;
    BiOrder order;
    std::vector<std::string> warnings;
};

ParsedSigma parse_sigma_document(const std::string& text);
std::string write_sigma_document(const SigmaPair& p);

}  // namespace psido
