#pragma once

// Kohn-Nirenberg quantization of polynomial-class symbols on the Hermite
// basis h_0, h_1, ... of L^2(R), and of tensor-sum bisingular symbols on the
// product basis h_i (x) h_j.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "psido/bisingular.hpp"
#include "psido/symbol.hpp"

namespace psido {

using CMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

struct LadderMatrices {
    CMatrix X;  // position
    CMatrix D;  // momentum -i d/dx
};

// (N+B) x (N+B) truncations. X[n+1,n] = sqrt((n+1)/2); D[n+1,n] = i sqrt((n+1)/2),
// D[n,n+1] = -i sqrt((n+1)/2).
LadderMatrices hermite_ladder_matrices(int N, int B);

enum class Quantization { kohn_nirenberg };

// Finite section of an operator. `wide` holds the exact matrix entries on a
// buffered index set; `core` lists the positions of the truncation basis inside
// it. Every column of wide(:, core) is the full image of a core basis vector, so
// range_block() is exactly A P and adjoint_range_block() exactly A^* P, where P
// projects onto the core.
class TruncatedOperator {
public:
    TruncatedOperator(CMatrix wide, std::vector<Index> core, std::vector<int> basis_sizes, int buffer);

    const CMatrix& wide() const { return wide_; }
    const std::vector<Index>& core() const { return core_; }
    const std::vector<int>& basis_sizes() const { return basis_sizes_; }
    int buffer() const { return buffer_; }
    Quantization quantization() const { return Quantization::kohn_nirenberg; }
    Index size() const { return static_cast<Index>(core_.size()); }

    CMatrix matrix() const;  // P A P on the core, N x N
    CMatrix range_block() const;
    CMatrix adjoint_range_block() const;

private:
    CMatrix wide_;
    std::vector<Index> core_;
    std::vector<int> basis_sizes_;
    int buffer_;
};

// Requires s polynomial-class; x^p xi^q maps to X^p D^q. The buffer defaults
// to the total degree of s.
TruncatedOperator quantize_poly(const ShubinSymbol& s, int N, std::optional<int> buffer = std::nullopt);

// sum_t quantize(f_t, N1) (x) quantize(g_t, N2). Cut-off metadata is ignored
// (it changes the operator by a smoothing term).
TruncatedOperator quantize_bisingular(const BisingularSymbol& a, int N1, int N2);

// Graded external product of two elliptic operators P1, P2:
//   [ P1 (x) 1    -1 (x) P2^* ]
//   [ 1 (x) P2     P1^* (x) 1 ]
// acting on two copies of L^2(R^2). Kept in factored form; dense() assembles it.
struct SharpProduct {
    TruncatedOperator first;
    TruncatedOperator second;

    TruncatedOperator dense() const;
};

SharpProduct sharp_product(const ShubinSymbol& f, const ShubinSymbol& g, int N1, int N2);

// || Op(a) Op(b) - Op(a # b) || on the top-left block unaffected by truncation,
// relative to max(1, ||Op(a)|| ||Op(b)||). Passes at 1e-10.
CheckReport composition_consistency(const ShubinSymbol& a, const ShubinSymbol& b, int N,
                                    double tolerance = 1e-10);

struct DecayReport {
    bool pass = false;
    std::vector<int> sizes;
    std::vector<std::vector<double>> singular_values;  // descending, one list per size
    std::vector<double> decay_ratios;                  // s_{n/2} / s_0 per size
    std::string detail;
};

// Negative-order operator realized as (Op(base) + shift)^{-1} on truncations of
// increasing size. Passes when the singular values decay (s_{n/2}/s_0 shrinks
// with n and ends below 1/2) and, if a prediction is given, s_k approaches it.
DecayReport compactness_proxy(const ShubinSymbol& base, const std::vector<int>& sizes, double shift,
                              const std::function<double(int)>& predicted = {});
DecayReport compactness_proxy(const BisingularSymbol& base, const std::vector<int>& sizes, double shift);

// Text: "cmatrix <rows> <cols>" then one row per line of "re im" pairs.
void write_matrix_text(std::ostream& out, const CMatrix& m);
CMatrix read_matrix_text(std::istream& in);
// Binary: "PSDM", uint64 rows, uint64 cols, row-major (re, im) doubles.
void write_matrix_binary(std::ostream& out, const CMatrix& m);
CMatrix read_matrix_binary(std::istream& in);

}  // namespace psido
