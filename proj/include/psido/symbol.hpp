#pragma once

// Classical Shubin symbols on one factor R^1 with coordinates (x, xi).
//
// A symbol is a finite polyhomogeneous expansion sum_j c_j(theta) r^j in polar
// coordinates x = r cos(theta), xi = r sin(theta), where every angular part
// c_j is a trigonometric polynomial with Gaussian-rational coefficients. The
// expansion is either complete (the symbol equals the finite sum) or
// truncated at a floor degree, below which nothing is known.

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psido/exact.hpp"

namespace psido {

class TrigPoly {
public:
    TrigPoly() = default;
    explicit TrigPoly(GaussRat constant);

    static TrigPoly monomial(int frequency, GaussRat coeff = GaussRat(1));

    bool is_zero() const { return coeffs_.empty(); }
    const std::map<int, GaussRat>& coeffs() const { return coeffs_; }
    GaussRat coeff(int frequency) const;
    void add_term(int frequency, const GaussRat& c);

    std::complex<double> evaluate(double theta) const;
    TrigPoly conj() const;  // pointwise complex conjugate
    TrigPoly scaled(const GaussRat& c) const;
    // max |coeff| * number of coefficients, a bound for sup |u|.
    double sup_bound() const;

    TrigPoly& operator+=(const TrigPoly& o);
    TrigPoly& operator-=(const TrigPoly& o);

    friend bool operator==(const TrigPoly&, const TrigPoly&) = default;

private:
    std::map<int, GaussRat> coeffs_;
};

TrigPoly operator+(TrigPoly a, const TrigPoly& b);
TrigPoly operator-(TrigPoly a, const TrigPoly& b);
TrigPoly tp_mul(const TrigPoly& a, const TrigPoly& b);
inline TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) { return tp_mul(a, b); }

std::string to_string(const TrigPoly& u);

enum class Variable { x, xi };

class ShubinSymbol {
public:
    // Order reported by the zero symbol; keeps order arithmetic overflow-free.
    static constexpr int kZeroOrder = -(1 << 28);

    ShubinSymbol() = default;  // the zero symbol
    // `floor` = lowest known degree for truncated expansions; nullopt means complete.
    ShubinSymbol(std::map<int, TrigPoly> components, std::optional<int> floor = std::nullopt);

    static ShubinSymbol constant(GaussRat c);
    static ShubinSymbol one() { return constant(GaussRat(1)); }
    // c * r^degree * e^{i frequency theta}
    static ShubinSymbol monomial(int degree, int frequency, GaussRat c = GaussRat(1));
    static ShubinSymbol x();
    static ShubinSymbol xi();
    // x^p xi^q, exact.
    static ShubinSymbol polynomial_monomial(int p, int q, GaussRat c = GaussRat(1));
    // <x,xi>^order = (1+r^2)^{order/2}, binomial series. Complete (and exact)
    // when order is even and non-negative, otherwise truncated after `depth`.
    static ShubinSymbol weight(int order, int depth);

    bool is_zero() const { return components_.empty(); }
    bool is_complete() const { return !floor_.has_value(); }
    std::optional<int> floor() const { return floor_; }
    int order() const;
    int depth() const;
    int lowest_degree() const;

    // c_j; zero when j is outside the stored range.
    TrigPoly component(int degree) const;
    // D+1 slots from degree order() down to order()-depth().
    std::vector<TrigPoly> components() const;
    const std::map<int, TrigPoly>& nonzero_components() const { return components_; }

    // Evaluation at (x, xi). Components that are polynomials in (x, xi) are
    // evaluated everywhere; the others are multiplied by the cut-off
    // chi(r) below r = 1.
    std::complex<double> evaluate(double x, double xi) const;

    // Every component r^j e^{ik theta} has |k| <= j and j = k mod 2.
    bool is_polynomial_class() const;
    // Monomial expansion {(p, q) -> coeff of x^p xi^q}; requires polynomial class.
    std::map<std::pair<int, int>, GaussRat> to_monomials() const;
    // max degree j with a nonzero component (total polynomial degree).
    int total_degree() const;

    ShubinSymbol scaled(const GaussRat& c) const;
    // Keep only degrees >= new_floor and mark truncated there.
    ShubinSymbol truncated(int new_floor) const;
    // Pointwise complex conjugate.
    ShubinSymbol conj() const;

    ShubinSymbol& operator+=(const ShubinSymbol& o);
    ShubinSymbol& operator-=(const ShubinSymbol& o);

    friend bool operator==(const ShubinSymbol&, const ShubinSymbol&) = default;

private:
    void canonicalize();

    std::map<int, TrigPoly> components_;  // nonzero only
    std::optional<int> floor_;
};

ShubinSymbol operator+(ShubinSymbol a, const ShubinSymbol& b);
ShubinSymbol operator-(ShubinSymbol a, const ShubinSymbol& b);

// smoothstep cut-off: 0 for r <= 1/2, 1 for r >= 1, cubic Hermite between.
double cutoff(double r);

ShubinSymbol sh_derivative(const ShubinSymbol& s, Variable var);
ShubinSymbol sh_mul(const ShubinSymbol& a, const ShubinSymbol& b);
inline ShubinSymbol operator*(const ShubinSymbol& a, const ShubinSymbol& b) { return sh_mul(a, b); }

// Kohn-Nirenberg composition a # b ~ sum_k (1/k!) d_xi^k a * D_x^k b with
// D_x = -i d_x. With depth given, terms of homogeneity below
// order(a)+order(b)-depth are dropped unless the expansion terminates first.
// nullopt asks for the full expansion, which must terminate.
ShubinSymbol kn_compose(const ShubinSymbol& a, const ShubinSymbol& b,
                        std::optional<int> depth = std::nullopt);

// Leading component c_m.
TrigPoly sh_principal(const ShubinSymbol& s);

struct SampleGrid {
    std::vector<double> radii;
    int angles = 32;

    static SampleGrid standard();
};

struct CheckReport {
    bool pass = false;
    bool applicable = true;
    double worst_ratio = 0.0;
    std::string detail;
};

struct SeminormOptions {
    int max_derivative_order = 2;
    // Multiplier on the analytic bound sum|coeff| * 2^{max(0,-e)/2}.
    double cap = 1.0;
};

// Checks |d^alpha_x d^beta_xi s| <= C <x,xi>^{order - alpha - beta} on the grid.
CheckReport seminorm_check(const ShubinSymbol& s, int claimed_order,
                           const SampleGrid& grid = SampleGrid::standard(),
                           const SeminormOptions& options = {});

std::string to_string(const ShubinSymbol& s);  // triple literal
// Polynomial-class symbols only, e.g. "x*xi - i".
std::string to_polynomial_string(const ShubinSymbol& s);

struct ParsedSymbol {
    ShubinSymbol symbol;
    std::vector<std::string> warnings;
};

// Literal grammar: [(j, k, c), ...] meaning sum c r^j e^{ik theta}.
ParsedSymbol parse_symbol_literal(const std::string& text);
// .sym document: optional "floor = <int>" followed by a literal.
ParsedSymbol parse_symbol_document(const std::string& text);
std::string write_symbol_document(const ShubinSymbol& s);

}  // namespace psido
