#include "psido/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "psido/errors.hpp"

namespace psido {

namespace {

using cd = std::complex<double>;

double spectral_norm(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(0);
}

std::vector<Index> leading_core(int N) {
    std::vector<Index> core(N);
    for (int i = 0; i < N; ++i) core[i] = i;
    return core;
}

void require_polynomial(const ShubinSymbol& s, const char* what) {
    if (!s.is_complete())
        throw PreconditionError(std::string(what) + " is a truncated expansion; only complete polynomial symbols can be quantized");
    for (const auto& [j, u] : s.nonzero_components())
        for (const auto& [k, c] : u.coeffs())
            if (j < 0 || std::abs(k) > j || (j - k) % 2 != 0)
                throw PreconditionError(std::string(what) + " is not polynomial: component (" + std::to_string(j) +
                                        ", " + std::to_string(k) + ") is not a polynomial in (x, xi)");
}

// Exact wide block of Op(s) on N + B basis vectors.
CMatrix assemble_wide(const ShubinSymbol& s, int N, int B) {
    const int M = N + 2 * B;
    const int W = N + B;
    auto ladder = hermite_ladder_matrices(M, 0);
    const auto monomials = s.to_monomials();
    int pmax = 0, qmax = 0;
    for (const auto& [pq, c] : monomials) {
        pmax = std::max(pmax, pq.first);
        qmax = std::max(qmax, pq.second);
    }
    std::vector<CMatrix> xp{CMatrix::Identity(M, M)}, dq{CMatrix::Identity(M, M)};
    for (int p = 1; p <= pmax; ++p) xp.push_back(ladder.X * xp.back());
    for (int q = 1; q <= qmax; ++q) dq.push_back(ladder.D * dq.back());
    CMatrix out = CMatrix::Zero(M, M);
    for (const auto& [pq, c] : monomials) out += c.to_complex() * (xp[pq.first] * dq[pq.second]);
    return out.topLeftCorner(W, W);
}

}  // namespace

LadderMatrices hermite_ladder_matrices(int N, int B) {
    if (N < 1 || B < 0) throw PreconditionError("ladder matrices need N >= 1 and B >= 0");
    const int M = N + B;
    LadderMatrices out{CMatrix::Zero(M, M), CMatrix::Zero(M, M)};
    for (int n = 0; n + 1 < M; ++n) {
        const double s = std::sqrt((n + 1) / 2.0);
        out.X(n + 1, n) = s;
        out.X(n, n + 1) = s;
        out.D(n + 1, n) = cd(0, s);
        out.D(n, n + 1) = cd(0, -s);
    }
    return out;
}

TruncatedOperator::TruncatedOperator(CMatrix wide, std::vector<Index> core, std::vector<int> basis_sizes, int buffer)
    : wide_(std::move(wide)), core_(std::move(core)), basis_sizes_(std::move(basis_sizes)), buffer_(buffer) {
    for (Index i : core_)
        if (i < 0 || i >= wide_.rows()) throw PreconditionError("core index outside the assembled block");
    if (!wide_.allFinite()) throw NumericalError("non-finite matrix entry");
}

CMatrix TruncatedOperator::matrix() const { return wide_(core_, core_); }

CMatrix TruncatedOperator::range_block() const { return wide_(Eigen::all, core_); }

CMatrix TruncatedOperator::adjoint_range_block() const {
    return wide_(core_, Eigen::all).adjoint();
}

TruncatedOperator quantize_poly(const ShubinSymbol& s, int N, std::optional<int> buffer) {
    if (N < 1) throw PreconditionError("truncation size must be positive");
    require_polynomial(s, "symbol");
    const int deg = s.total_degree();
    const int B = buffer.value_or(deg);
    if (B < deg)
        throw PreconditionError("buffer " + std::to_string(B) + " is below the total degree " + std::to_string(deg));
    return TruncatedOperator(assemble_wide(s, N, B), leading_core(N), {N}, B);
}

TruncatedOperator quantize_bisingular(const BisingularSymbol& a, int N1, int N2) {
    if (N1 < 1 || N2 < 1) throw PreconditionError("truncation sizes must be positive");
    int B1 = 0, B2 = 0;
    for (const auto& t : a.terms()) {
        require_polynomial(t.f, "factor-1 symbol");
        require_polynomial(t.g, "factor-2 symbol");
        B1 = std::max(B1, t.f.total_degree());
        B2 = std::max(B2, t.g.total_degree());
    }
    const Index W1 = N1 + B1, W2 = N2 + B2;
    CMatrix wide = CMatrix::Zero(W1 * W2, W1 * W2);
    for (const auto& t : a.terms()) {
        CMatrix f = assemble_wide(t.f, N1, B1);
        CMatrix g = assemble_wide(t.g, N2, B2);
        for (Index i = 0; i < W1; ++i)
            for (Index j = 0; j < W1; ++j)
                if (f(i, j) != cd(0)) wide.block(i * W2, j * W2, W2, W2) += f(i, j) * g;
    }
    std::vector<Index> core;
    for (Index i1 = 0; i1 < N1; ++i1)
        for (Index i2 = 0; i2 < N2; ++i2) core.push_back(i1 * W2 + i2);
    return TruncatedOperator(std::move(wide), std::move(core), {N1, N2}, std::max(B1, B2));
}

SharpProduct sharp_product(const ShubinSymbol& f, const ShubinSymbol& g, int N1, int N2) {
    return SharpProduct{quantize_poly(f, N1), quantize_poly(g, N2)};
}

TruncatedOperator SharpProduct::dense() const {
    const CMatrix& P1 = first.wide();
    const CMatrix& P2 = second.wide();
    const Index W1 = P1.rows(), W2 = P2.rows(), W = W1 * W2;
    const CMatrix I1 = CMatrix::Identity(W1, W1), I2 = CMatrix::Identity(W2, W2);
    auto kron = [](const CMatrix& a, const CMatrix& b) {
        CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
        for (Index i = 0; i < a.rows(); ++i)
            for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        return out;
    };
    CMatrix wide(2 * W, 2 * W);
    wide.topLeftCorner(W, W) = kron(P1, I2);
    wide.topRightCorner(W, W) = -kron(I1, P2.adjoint());
    wide.bottomLeftCorner(W, W) = kron(I1, P2);
    wide.bottomRightCorner(W, W) = kron(P1.adjoint(), I2);
    std::vector<Index> core;
    for (Index block = 0; block < 2; ++block)
        for (Index i1 : first.core())
            for (Index i2 : second.core()) core.push_back(block * W + i1 * W2 + i2);
    return TruncatedOperator(std::move(wide), std::move(core),
                             {static_cast<int>(first.size()), static_cast<int>(second.size())},
                             std::max(first.buffer(), second.buffer()));
}

CheckReport composition_consistency(const ShubinSymbol& a, const ShubinSymbol& b, int N, double tolerance) {
    CheckReport rep;
    const int da = a.total_degree(), db = b.total_degree();
    const int block = N - da - db;
    if (block < 1) throw PreconditionError("truncation too small for the degrees involved");
    const CMatrix A = quantize_poly(a, N).matrix();
    const CMatrix B = quantize_poly(b, N).matrix();
    const CMatrix C = quantize_poly(kn_compose(a, b), N).matrix();
    const CMatrix diff = (A * B - C).topLeftCorner(block, block);
    const double scale = std::max(1.0, spectral_norm(A) * spectral_norm(B));
    rep.worst_ratio = spectral_norm(diff) / scale;
    rep.pass = rep.worst_ratio <= tolerance;
    std::ostringstream os;
    os << "block " << block << ", defect " << rep.worst_ratio << " relative to scale " << scale;
    rep.detail = os.str();
    return rep;
}

namespace {

std::vector<double> inverse_singular_values(const CMatrix& M) {
    Eigen::BDCSVD<CMatrix> check(M);
    const auto& s = check.singularValues();
    if (s.size() == 0) return {};
    if (s(s.size() - 1) <= 1e-12 * s(0))
        throw PreconditionError("singular truncation; supply a shift that makes it invertible");
    CMatrix inv = M.partialPivLu().inverse();
    Eigen::BDCSVD<CMatrix> svd(inv);
    const auto& v = svd.singularValues();
    return std::vector<double>(v.data(), v.data() + v.size());
}

DecayReport decay_report(std::vector<int> sizes, std::vector<std::vector<double>> svs,
                         const std::function<double(int)>& predicted) {
    DecayReport rep;
    rep.sizes = std::move(sizes);
    rep.singular_values = std::move(svs);
    bool monotone = true;
    for (size_t i = 0; i < rep.singular_values.size(); ++i) {
        const auto& s = rep.singular_values[i];
        rep.decay_ratios.push_back(s[s.size() / 2] / s[0]);
        if (i > 0 && !(rep.decay_ratios[i] < rep.decay_ratios[i - 1])) monotone = false;
    }
    std::ostringstream os;
    const double last = rep.decay_ratios.empty() ? 1.0 : rep.decay_ratios.back();
    bool pass = rep.decay_ratios.size() >= 2 && monotone && last < 0.5;
    os << "decay ratio s[n/2]/s[0]:";
    for (double r : rep.decay_ratios) os << ' ' << r;
    if (!monotone) os << "; ratio does not shrink with n";
    if (last >= 0.5) os << "; no decay";
    if (predicted && !rep.singular_values.empty()) {
        const auto& s = rep.singular_values.back();
        double worst = 0.0;
        for (size_t k = 0; k < s.size() / 2; ++k) worst = std::max(worst, std::abs(s[k] - predicted(int(k))));
        os << "; max deviation from prediction " << worst;
        if (worst > 1e-8) pass = false;
    }
    rep.pass = pass;
    rep.detail = os.str();
    return rep;
}

}  // namespace

DecayReport compactness_proxy(const ShubinSymbol& base, const std::vector<int>& sizes, double shift,
                              const std::function<double(int)>& predicted) {
    require_polynomial(base, "base symbol");
    if (base.is_zero() || base.order() < 0 || base.order() % 2 != 0)
        throw PreconditionError("base symbol must have even non-negative order");
    const TrigPoly principal = sh_principal(base);
    for (int i = 0; i < 4096; ++i)
        if (std::abs(principal.evaluate(2 * std::numbers::pi * i / 4096)) < 1e-9)
            throw PreconditionError("base symbol is not elliptic");
    std::vector<std::vector<double>> svs;
    for (int N : sizes) {
        CMatrix M = quantize_poly(base, N).matrix();
        M += shift * CMatrix::Identity(N, N);
        svs.push_back(inverse_singular_values(M));
    }
    return decay_report(sizes, std::move(svs), predicted);
}

DecayReport compactness_proxy(const BisingularSymbol& base, const std::vector<int>& sizes, double shift) {
    std::vector<std::vector<double>> svs;
    for (int N : sizes) {
        CMatrix M = quantize_bisingular(base, N, N).matrix();
        M += shift * CMatrix::Identity(M.rows(), M.cols());
        svs.push_back(inverse_singular_values(M));
    }
    return decay_report(sizes, std::move(svs), {});
}

}  // namespace psido
