#pragma once

// Fredholm index of truncated operators (spectral counting and heat traces),
// winding numbers and bidegrees, determinant winding of operator loops, and the
// topological index of external-product symbol pairs.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psido/bisingular.hpp"
#include "psido/quantization.hpp"
#include "psido/symbol.hpp"

namespace psido {

enum class IndexMethod { spectral_gap, heat_trace, winding, bidegree, det_family };

std::string to_string(IndexMethod m);

struct IndexReport {
    long value = 0;
    IndexMethod method = IndexMethod::winding;
    double residual = 0.0;      // distance of the raw quantity from `value` (or gap ratio)
    bool reliable = false;      // residual < 0.1
    std::vector<int> truncations;
    std::map<std::string, double> diagnostics;
    std::string note;
};

// Structured text: one "key: value" per line.
std::string to_text(const IndexReport& r);

inline constexpr double kResidualCap = 0.1;

// Throws PreconditionError when |u| < 1e-9 on the 4096-point grid.
IndexReport winding(const TrigPoly& u);

struct IndexStrategy {
    IndexMethod method = IndexMethod::spectral_gap;
    std::optional<double> tau;  // spectral_gap threshold; auto when absent
    std::optional<double> t;    // heat_trace time; auto when absent

    static IndexStrategy gap(std::optional<double> tau = std::nullopt) {
        return {IndexMethod::spectral_gap, tau, std::nullopt};
    }
    static IndexStrategy heat(std::optional<double> t = std::nullopt) {
        return {IndexMethod::heat_trace, std::nullopt, t};
    }
};

// Works on the exact compressions P A^*A P and P A A^* P of the buffered block.
// Throws NumericalError if no reliable gap exists or the heat-trace residual
// reaches the cap.
IndexReport analytic_index(const TruncatedOperator& A, const IndexStrategy& strategy = {});

// Index of the graded external product, computed from the factor spectra: the
// compressed Laplacians of the product are Kronecker sums of factor ones.
IndexReport analytic_index(const SharpProduct& A, const IndexStrategy& strategy = {});

struct MultiplicativityReport {
    CheckReport check;
    IndexReport first;
    IndexReport second;
    IndexReport product;
};

MultiplicativityReport index_multiplicativity(const ShubinSymbol& f, const ShubinSymbol& g, int N1, int N2,
                                              const IndexStrategy& strategy = {});

// Winding of det L(theta) for L(theta) = sum_k e^{ik theta} coeffs[k]. Requires
// pointwise invertibility on the 1024-point grid (refined adaptively).
IndexReport family_index(const std::map<int, CMatrix>& loop);
// Quantizes every coefficient of the loop at size N.
IndexReport family_index(const SymbolValuedLoop& loop, int N);

struct Bidegree {
    int d1 = 0;
    int d2 = 0;
    double residual = 0.0;
    friend bool operator==(const Bidegree&, const Bidegree&) = default;
};

// Throws on a zero of u on the 256 x 256 grid or inconsistent slice windings.
Bidegree bidegree(const BiTrigPoly& u);

// Defined for external-product pairs (F, G) = sigma(f # g) and for pairs with
// scalar values; the value is d1 * d2 for the bidegree of the common pointwise
// symbol, routed through beta(l) = (l m, l) and epsilon. Throws
// PreconditionError for other pair shapes.
IndexReport topological_index(const SigmaPair& p, int splitting_m = 0);

}  // namespace psido
