#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include "psido/errors.hpp"
#include "psido/generators.hpp"
#include "psido/quantization.hpp"
#include "oracles.hpp"

using namespace psido;

namespace {

using cd = std::complex<double>;

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_CASE("ladder matrices agree with quadrature of Hermite functions") {
    const int N = 24;
    const auto [nodes, weights] = oracle::gauss_hermite(60);
    CMatrix X = CMatrix::Zero(N, N), D = CMatrix::Zero(N, N);
    std::vector<double> h, dh;
    for (int q = 0; q < nodes.size(); ++q) {
        oracle::hermite_values(nodes(q), N, h, dh);
        for (int m = 0; m < N; ++m)
            for (int n = 0; n < N; ++n) {
                X(m, n) += weights(q) * h[m] * nodes(q) * h[n];
                D(m, n) += weights(q) * h[m] * cd(0, -1) * dh[n];
            }
    }
    const LadderMatrices L = hermite_ladder_matrices(N, 0);
    CHECK(max_abs(L.X - X) < 1e-10);
    CHECK(max_abs(L.D - D) < 1e-10);
}

TEST_CASE("canonical commutation away from the truncation edge") {
    const LadderMatrices L = hermite_ladder_matrices(20, 1);
    const CMatrix C = L.X * L.D - L.D * L.X;
    const CMatrix expect = cd(0, 1) * CMatrix::Identity(20, 20);
    CHECK(max_abs(C.topLeftCorner(20, 20) - expect) < 1e-13);
}

TEST_CASE("quantizing coordinates gives the ladder matrices") {
    const LadderMatrices L = hermite_ladder_matrices(16, 0);
    CHECK(max_abs(quantize_poly(ShubinSymbol::x(), 16).matrix() - L.X) < 1e-14);
    CHECK(max_abs(quantize_poly(ShubinSymbol::xi(), 16).matrix() - L.D) < 1e-14);
    CHECK(max_abs(quantize_poly(ShubinSymbol::one(), 16).matrix() - CMatrix::Identity(16, 16)) < 1e-14);
}

TEST_CASE("x + i xi quantizes to sqrt(2) times the annihilation operator") {
    const TruncatedOperator A = quantize_poly(ShubinSymbol::monomial(1, 1), 8);
    CHECK(A.buffer() == 1);
    const CMatrix R = A.range_block();
    REQUIRE(R.rows() == 9);
    REQUIRE(R.cols() == 8);
    CMatrix expect = CMatrix::Zero(9, 8);
    for (int n = 1; n < 8; ++n) expect(n - 1, n) = std::sqrt(2.0 * n);
    CHECK(max_abs(R - expect) < 1e-13);
    // The adjoint block holds the full image of the creation operator, including row 8.
    CMatrix expect_adj = CMatrix::Zero(9, 8);
    for (int n = 0; n < 8; ++n) expect_adj(n + 1, n) = std::sqrt(2.0 * (n + 1));
    CHECK(max_abs(A.adjoint_range_block() - expect_adj) < 1e-13);
}

TEST_CASE("products of truncations match the quantized composition") {
    gen::Rng rng(21);
    const int N = 20;
    for (int n = 0; n < 25; ++n) {
        const ShubinSymbol a = gen::polynomial(rng, gen::uniform(rng, 0, 3));
        const ShubinSymbol b = gen::polynomial(rng, gen::uniform(rng, 0, 3));
        const int M = N + a.total_degree() + b.total_degree();
        const CMatrix AB = quantize_poly(a, M).matrix() * quantize_poly(b, M).matrix();
        const CMatrix C = quantize_poly(kn_compose(a, b), N).matrix();
        CHECK(max_abs(AB.topLeftCorner(N, N) - C) < 1e-9 * (1 + max_abs(C)));
        CHECK(composition_consistency(a, b, 32).pass);
    }
}

TEST_CASE("composition consistency fails for a wrong composition rule") {
    // x xi versus xi x: the pointwise product ignores the commutator.
    const ShubinSymbol x = ShubinSymbol::x(), xi = ShubinSymbol::xi();
    const CMatrix A = quantize_poly(xi, 20).matrix() * quantize_poly(x, 20).matrix();
    const CMatrix wrong = quantize_poly(x * xi, 20).matrix();
    CHECK(max_abs((A - wrong).topLeftCorner(18, 18)) > 0.5);
}

TEST_CASE("quantization preconditions") {
    CHECK_THROWS_AS(quantize_poly(ShubinSymbol::monomial(-1, 1), 8), PreconditionError);
    CHECK_THROWS_AS(quantize_poly(ShubinSymbol::monomial(2, 1), 8), PreconditionError);
    CHECK_THROWS_AS(quantize_poly(ShubinSymbol::monomial(2, 0).truncated(1), 8), PreconditionError);
    CHECK_THROWS_AS(quantize_poly(ShubinSymbol::monomial(2, 0), 8, 1), PreconditionError);
    CHECK_THROWS_AS(quantize_poly(ShubinSymbol::x(), 0), PreconditionError);
}

TEST_CASE("bisingular quantization of an external product is a Kronecker product") {
    const ShubinSymbol f = ShubinSymbol::monomial(1, 1), g = ShubinSymbol::x() * ShubinSymbol::x();
    const int N1 = 5, N2 = 4;
    const CMatrix F = quantize_poly(f, N1).matrix(), G = quantize_poly(g, N2).matrix();
    const CMatrix A = quantize_bisingular(external_product(f, g), N1, N2).matrix();
    REQUIRE(A.rows() == N1 * N2);
    double worst = 0;
    for (int i1 = 0; i1 < N1; ++i1)
        for (int j1 = 0; j1 < N1; ++j1)
            for (int i2 = 0; i2 < N2; ++i2)
                for (int j2 = 0; j2 < N2; ++j2)
                    worst = std::max(worst, std::abs(A(i1 * N2 + i2, j1 * N2 + j2) - F(i1, j1) * G(i2, j2)));
    CHECK(worst < 1e-13);
}

TEST_CASE("dense sharp product assembles the graded block operator") {
    const ShubinSymbol f = ShubinSymbol::monomial(1, 1), g = ShubinSymbol::monomial(1, -1);
    const SharpProduct sp = sharp_product(f, g, 3, 4);
    const TruncatedOperator D = sp.dense();
    CHECK(D.size() == 2 * 3 * 4);
    const CMatrix P1 = sp.first.matrix(), P2 = sp.second.matrix();
    const CMatrix M = D.matrix();
    // top-left block is P1 (x) 1 on the core
    for (int i1 = 0; i1 < 3; ++i1)
        for (int j1 = 0; j1 < 3; ++j1)
            CHECK(std::abs(M(i1 * 4, j1 * 4) - P1(i1, j1)) < 1e-14);
    // bottom-left block is 1 (x) P2
    for (int i2 = 0; i2 < 4; ++i2)
        for (int j2 = 0; j2 < 4; ++j2) CHECK(std::abs(M(12 + i2, j2) - P2(i2, j2)) < 1e-14);
}

TEST_CASE("compactness proxy matches the dense eigensolver") {
    const ShubinSymbol H = ShubinSymbol::x() * ShubinSymbol::x() + ShubinSymbol::xi() * ShubinSymbol::xi() +
                           ShubinSymbol::x();
    const int N = 40;
    const DecayReport r = compactness_proxy(H, {10, 20, N}, 1.0);
    CHECK(r.pass);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(quantize_poly(H, N).matrix() + CMatrix::Identity(N, N));
    std::vector<double> expect;
    for (int i = 0; i < N; ++i) expect.push_back(1.0 / std::abs(es.eigenvalues()(i)));
    std::sort(expect.rbegin(), expect.rend());
    const auto& s = r.singular_values.back();
    for (int k = 0; k < N / 2; ++k) CHECK(std::abs(s[k] - expect[k]) < 1e-8);
}

TEST_CASE("compactness proxy on bisingular and control inputs") {
    CHECK_FALSE(compactness_proxy(ShubinSymbol::one(), {8, 16, 32}, 0.0).pass);
    CHECK_THROWS_AS(compactness_proxy(ShubinSymbol::x(), {8}, 0.0), PreconditionError);
    CHECK_THROWS_AS(compactness_proxy(ShubinSymbol::x() * ShubinSymbol::x(), {8}, 0.0), PreconditionError);
    const ShubinSymbol H = ShubinSymbol::monomial(2, 0);
    const BisingularSymbol HH = external_product(H, H);
    CHECK(compactness_proxy(HH, {4, 8, 12}, 0.0).pass);
}

TEST_CASE("matrix containers round trip") {
    gen::Rng rng(22);
    CMatrix m(3, 5);
    std::normal_distribution<double> nd;
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) m(i, j) = {nd(rng), nd(rng)};
    std::stringstream text;
    write_matrix_text(text, m);
    CHECK(read_matrix_text(text) == m);
    std::stringstream bin;
    write_matrix_binary(bin, m);
    CHECK(read_matrix_binary(bin) == m);
    std::stringstream bad("XXXX");
    CHECK_THROWS_AS(read_matrix_binary(bad), ParseError);
    std::stringstream short_text("cmatrix 2 2\n1 0 2 0\n");
    CHECK_THROWS_AS(read_matrix_text(short_text), ParseError);
}
