#pragma once

// Finitely generated abelian groups with explicit generator bases, integer
// homomorphisms between them, Smith normal form, and the exact-sequence
// solvers (six-term, Mayer-Vietoris, torsion-free Kunneth).

#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psido/exact.hpp"

namespace psido {

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

    static IntMatrix identity(size_t n);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    Integer& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
    const Integer& operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

    IntMatrix transpose() const;
    std::vector<Integer> column(size_t j) const;
    bool is_zero() const;
    // Bareiss elimination; square matrices only.
    Integer determinant() const;

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<Integer> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
// [a | b]
IntMatrix hconcat(const IntMatrix& a, const IntMatrix& b);
std::string to_string(const IntMatrix& m);

// Z^rank + Z/d1 + ... + Z/dk with d1 | d2 | ... and every di >= 2. Generators
// are ordered free ones first, then the cyclic torsion ones.
struct FGAbGroup {
    size_t rank = 0;
    std::vector<Integer> torsion;

    // Any list of positive orders; returns invariant factors.
    static FGAbGroup make(size_t rank, std::vector<Integer> orders = {});
    static FGAbGroup free(size_t rank) { return FGAbGroup{rank, {}}; }

    size_t generators() const { return rank + torsion.size(); }
    bool is_zero() const { return rank == 0 && torsion.empty(); }
    bool is_free() const { return torsion.empty(); }
    // Diagonal relation matrix, generators() x torsion.size().
    IntMatrix relations() const;

    friend bool operator==(const FGAbGroup&, const FGAbGroup&) = default;
};

// "0", "Z", "Z^2 + Z/2 + Z/6"
std::string to_string(const FGAbGroup& g);

// Homomorphism given on generators: column j is the image of generator j.
class IntHom {
public:
    IntHom() = default;
    // Throws PreconditionError on a shape mismatch or if the matrix does not
    // respect the torsion of the source. Entries are reduced modulo target torsion.
    IntHom(IntMatrix matrix, FGAbGroup source, FGAbGroup target);

    // Map Z^cols -> Z^rows.
    static IntHom free(IntMatrix matrix);
    static IntHom zero(FGAbGroup source, FGAbGroup target);

    const IntMatrix& matrix() const { return matrix_; }
    const FGAbGroup& source() const { return source_; }
    const FGAbGroup& target() const { return target_; }

    friend bool operator==(const IntHom&, const IntHom&) = default;

private:
    IntMatrix matrix_;
    FGAbGroup source_;
    FGAbGroup target_;
};

// g after f
IntHom compose(const IntHom& g, const IntHom& f);

struct SNF {
    IntMatrix U;
    IntMatrix D;
    IntMatrix V;
    IntMatrix Uinv;
    size_t rank = 0;
};

// U M V = D with U, V unimodular and d1 | d2 | ... on the diagonal (all >= 0).
// The postconditions are re-verified on every call (std::logic_error if not).
SNF snf(const IntMatrix& M);

// Integer solution of A x = b, if any.
std::optional<std::vector<Integer>> solve_integer(const IntMatrix& A, const std::vector<Integer>& b);

struct KernelResult {
    FGAbGroup group;
    IntHom inclusion;  // group -> source
    bool lifted = false;  // source or target had torsion
};

struct CokernelResult {
    FGAbGroup group;
    IntHom projection;  // target -> group
    bool lifted = false;
};

KernelResult kernel(const IntHom& h);
CokernelResult cokernel(const IntHom& h);
inline FGAbGroup hom_kernel(const IntHom& h) { return kernel(h).group; }
inline FGAbGroup hom_cokernel(const IntHom& h) { return cokernel(h).group; }

// ker(out) = im(in), checked on lattices of representatives.
bool exact_at(const IntHom& in, const IntHom& out);

// 0 -> sub -> group -> quotient -> 0. `group` is the split candidate; it is
// the only possibility when the quotient is free or one side vanishes.
struct Extension {
    FGAbGroup sub;
    FGAbGroup quotient;
    FGAbGroup group;
    bool determined = true;
};

// Claim: ker(out) = im(in) at the object `at`.
struct ExactnessStep {
    std::string at;
    IntHom in;
    IntHom out;
};

struct SolveResult {
    FGAbGroup K0;
    FGAbGroup K1;
    Extension ext0;
    Extension ext1;
    bool ambiguous = false;
    std::vector<ExactnessStep> steps;  // the full cyclic sequence with the solved groups filled in
};

// Re-verifies every recorded exactness step. On failure names the step.
bool audit(const SolveResult& r, std::string* failure = nullptr);

using KPair = std::pair<FGAbGroup, FGAbGroup>;  // (K0, K1)

// Extension 0 -> I -> A -> Q -> 0 with index map delta: K1(Q) -> K0(I) and
// exponential map eps: K0(Q) -> K1(I).
SolveResult six_term_solve(const KPair& KI, const KPair& KQ, const IntHom& delta, const IntHom& eps);

// Torsion inputs are rejected (PreconditionError).
KPair kunneth_torsion_free(const KPair& A, const KPair& B);

// Pullback of two corners over a common quotient: `left` holds K(corner 1) + K(corner 2),
// `right` the K-theory of the common quotient, M0 / M1 the difference maps.
struct PullbackData {
    KPair left;
    KPair right;
    IntHom M0;
    IntHom M1;
};

SolveResult mayer_vietoris(const PullbackData& P);

struct EpsilonBeta {
    std::pair<Integer, Integer> beta;
    bool check = false;
};

// beta(l) = (l m, l); check is epsilon(beta(l)) == l for epsilon(k, l) = l.
EpsilonBeta epsilon_beta(const Integer& l, const Integer& m);

struct KEntry {
    std::string name;
    FGAbGroup K0;
    FGAbGroup K1;
    std::string provenance;
};

struct KTheoryReport {
    std::vector<KEntry> entries;
    SolveResult sigma;  // Mayer-Vietoris solution for the symbol algebra
    bool audited = false;

    const KEntry* find(const std::string& name) const;
};

// The bisingular instance: factor algebras from their extensions by the
// compacts, the four mixed tensor algebras A^{i,j}, and the symbol algebra.
KTheoryReport paper_instance();

std::string to_text(const KTheoryReport& r);

// .kd documents: see README for the grammar.
struct KDiagram {
    enum class Kind { mv, sixterm, kunneth } kind = Kind::mv;
    PullbackData pullback;
    KPair ideal, quotient;
    IntHom delta, eps;
    KPair A, B;
};

FGAbGroup parse_group(const std::string& text);
KDiagram parse_kd_document(const std::string& text);

}  // namespace psido
