#include "psido/index.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "psido/errors.hpp"
#include "psido/ktheory.hpp"

namespace psido {

namespace {

using cd = std::complex<double>;
constexpr double kTwoPi = 2 * std::numbers::pi;

double wrap(double a) {
    while (a > std::numbers::pi) a -= kTwoPi;
    while (a <= -std::numbers::pi) a += kTwoPi;
    return a;
}

// Total phase increment of theta -> phase(theta) over [0, 2pi], with phase
// known modulo 2pi. Intervals whose increment exceeds pi/2 are bisected.
double track_phase(const std::function<double(double)>& phase, int grid) {
    double total = 0.0;
    std::function<double(double, double, double, double, int)> segment =
        [&](double a, double b, double pa, double pb, int depth) -> double {
        double d = wrap(pb - pa);
        if (std::abs(d) <= std::numbers::pi / 2 || depth > 30) return d;
        double m = 0.5 * (a + b);
        double pm = phase(m);
        return segment(a, m, pa, pm, depth + 1) + segment(m, b, pm, pb, depth + 1);
    };
    double prev = phase(0.0);
    const double first = prev;
    for (int j = 1; j <= grid; ++j) {
        double th = kTwoPi * j / grid;
        double cur = j == grid ? first : phase(th);
        total += segment(kTwoPi * (j - 1) / grid, th, prev, cur, 0);
        prev = cur;
    }
    return total;
}

IndexReport winding_of(const std::function<cd(double)>& u, int grid, const std::string& what) {
    auto phase = [&](double th) {
        cd v = u(th);
        if (std::abs(v) < 1e-9) throw PreconditionError(what + " vanishes near theta = " + std::to_string(th));
        return std::arg(v);
    };
    for (int j = 0; j < grid; ++j) phase(kTwoPi * j / grid);
    const double raw = track_phase(phase, grid) / kTwoPi;
    IndexReport r;
    r.method = IndexMethod::winding;
    r.value = std::lround(raw);
    r.residual = std::abs(raw - r.value);
    r.reliable = r.residual < kResidualCap;
    r.diagnostics["raw"] = raw;
    r.diagnostics["grid"] = grid;
    return r;
}

std::vector<double> gram_spectrum(const CMatrix& R) {
    const CMatrix G = R.adjoint() * R;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(G, Eigen::EigenvaluesOnly);
    std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    for (double& x : v) x = std::max(x, 0.0);
    return v;
}

struct Gap {
    double tau = 0.0;
    double lower = 0.0;  // largest eigenvalue below tau (0 if none)
    double upper = 0.0;  // smallest eigenvalue above tau
    double ratio = 0.0;  // lower / upper
};

// Split of the lower half of the joint spectrum. Takes the highest split whose
// eigenvalue ratio is under the cap: near-kernel modes of a coarse truncation
// can sit far above rounding level, and a split inside the bulk is harmless
// because bulk eigenvalues occur in both spectra and cancel in the count. With
// no such split, falls back to the largest relative gap ("nothing below"
// competing with lower value kFloor) so the caller reports its ratio.
Gap auto_gap(std::vector<double> all) {
    constexpr double kFloor = 1e-14;
    std::sort(all.begin(), all.end());
    if (all.empty()) throw NumericalError("empty spectrum");
    const double median = all[all.size() / 2];
    if (!(median > 0)) throw NumericalError("no reliable spectral gap: median eigenvalue is zero");
    double best = -1e300;
    Gap g, highest;
    bool have_highest = false;
    for (size_t i = 0; i < all.size(); ++i) {
        const double up = all[i] / median;
        if (up > 1.0) break;
        if (up <= 0) continue;
        const double low = i == 0 ? 0.0 : all[i - 1] / median;
        Gap c;
        c.lower = low * median;
        c.upper = all[i];
        c.tau = median * std::sqrt(std::max(low, kFloor) * up);
        c.ratio = low / up;
        if (c.ratio < kResidualCap) {
            highest = c;
            have_highest = true;
        }
        const double score = std::log(up) - std::log(std::max(low, kFloor));
        if (score > best) {
            best = score;
            g = c;
        }
    }
    if (have_highest) return highest;
    if (best < 0) throw NumericalError("no reliable spectral gap below the median eigenvalue");
    return g;
}

Gap explicit_gap(const std::vector<double>& all, double tau) {
    Gap g;
    g.tau = tau;
    g.upper = std::numeric_limits<double>::infinity();
    for (double v : all) {
        if (v < tau) g.lower = std::max(g.lower, v);
        else g.upper = std::min(g.upper, v);
    }
    g.ratio = g.lower / g.upper;
    return g;
}

IndexReport spectral_index(const std::vector<double>& e1, const std::vector<double>& e2, const IndexStrategy& s) {
    std::vector<double> all = e1;
    all.insert(all.end(), e2.begin(), e2.end());
    if (all.empty()) throw NumericalError("empty spectrum");
    const Gap g = s.tau ? explicit_gap(all, *s.tau) : auto_gap(all);
    IndexReport r;
    r.diagnostics["gap_lower"] = g.lower;
    r.diagnostics["gap_upper"] = g.upper;
    r.diagnostics["tau"] = g.tau;
    if (s.method == IndexMethod::spectral_gap) {
        r.method = IndexMethod::spectral_gap;
        const long n1 = std::count_if(e1.begin(), e1.end(), [&](double v) { return v < g.tau; });
        const long n2 = std::count_if(e2.begin(), e2.end(), [&](double v) { return v < g.tau; });
        r.value = n1 - n2;
        r.residual = g.ratio;
        r.diagnostics["below_tau_AstarA"] = double(n1);
        r.diagnostics["below_tau_AAstar"] = double(n2);
        if (r.residual >= kResidualCap)
            throw NumericalError("no reliable spectral gap: eigenvalue ratio across tau is " + std::to_string(g.ratio));
    } else {
        r.method = IndexMethod::heat_trace;
        const double t = s.t.value_or(10.0 / g.upper);
        double h = 0.0;
        for (double v : e1) h += std::exp(-t * v);
        for (double v : e2) h -= std::exp(-t * v);
        r.value = std::lround(h);
        r.residual = std::abs(h - r.value);
        r.diagnostics["t"] = t;
        r.diagnostics["raw"] = h;
        // Modes in the upper half of the spectrum sit near the truncation edge,
        // where the two compressions need not match; they must have died out.
        std::sort(all.begin(), all.end());
        const double median = all[all.size() / 2];
        double edge = 0.0;
        for (double v : all)
            if (v >= median) edge += std::exp(-t * v);
        r.diagnostics["edge_mass"] = edge;
        if (edge >= kResidualCap)
            throw NumericalError("heat time t = " + std::to_string(t) + " too short: truncation-edge modes carry weight " +
                                 std::to_string(edge));
        if (r.residual >= kResidualCap)
            throw NumericalError("heat-trace residual " + std::to_string(r.residual) + " at t = " + std::to_string(t));
    }
    r.reliable = r.residual < kResidualCap;
    return r;
}

std::vector<double> kron_sum(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out;
    out.reserve(a.size() * b.size());
    for (double x : a)
        for (double y : b) out.push_back(x + y);
    return out;
}

}  // namespace

std::string to_string(IndexMethod m) {
    switch (m) {
    case IndexMethod::spectral_gap: return "spectral_gap";
    case IndexMethod::heat_trace: return "heat_trace";
    case IndexMethod::winding: return "winding";
    case IndexMethod::bidegree: return "bidegree";
    case IndexMethod::det_family: return "det_family";
    }
    return "?";
}

std::string to_text(const IndexReport& r) {
    std::ostringstream os;
    os << "method: " << to_string(r.method) << '\n'
       << "value: " << r.value << '\n'
       << "residual: " << r.residual << '\n'
       << "reliable: " << (r.reliable ? "yes" : "no") << '\n';
    if (!r.truncations.empty()) {
        os << "truncations:";
        for (int n : r.truncations) os << ' ' << n;
        os << '\n';
    }
    for (const auto& [k, v] : r.diagnostics) os << k << ": " << v << '\n';
    if (!r.note.empty()) os << "note: " << r.note << '\n';
    return os.str();
}

IndexReport winding(const TrigPoly& u) {
    return winding_of([&](double th) { return u.evaluate(th); }, 4096, "symbol");
}

IndexReport analytic_index(const TruncatedOperator& A, const IndexStrategy& strategy) {
    IndexReport r = spectral_index(gram_spectrum(A.range_block()), gram_spectrum(A.adjoint_range_block()), strategy);
    r.truncations = A.basis_sizes();
    return r;
}

IndexReport analytic_index(const SharpProduct& A, const IndexStrategy& strategy) {
    const auto a = gram_spectrum(A.first.range_block()), c = gram_spectrum(A.first.adjoint_range_block());
    const auto b = gram_spectrum(A.second.range_block()), d = gram_spectrum(A.second.adjoint_range_block());
    // D*D = diag(P1*P1 + P2*P2, P1P1* + P2P2*), DD* = diag(P1P1* + P2*P2, P1*P1 + P2P2*)
    auto e1 = kron_sum(a, b), e1b = kron_sum(c, d);
    auto e2 = kron_sum(c, b), e2b = kron_sum(a, d);
    e1.insert(e1.end(), e1b.begin(), e1b.end());
    e2.insert(e2.end(), e2b.begin(), e2b.end());
    IndexReport r = spectral_index(e1, e2, strategy);
    r.truncations = {static_cast<int>(A.first.size()), static_cast<int>(A.second.size())};
    r.note = "graded external product, Kronecker-sum spectra";
    return r;
}

MultiplicativityReport index_multiplicativity(const ShubinSymbol& f, const ShubinSymbol& g, int N1, int N2,
                                              const IndexStrategy& strategy) {
    for (const auto* s : {&f, &g})
        if (s->is_zero() || s->order() < 0) throw PreconditionError("factors must be nonzero of non-negative order");
    MultiplicativityReport rep;
    SharpProduct sp = sharp_product(f, g, N1, N2);
    rep.first = analytic_index(sp.first, strategy);
    rep.second = analytic_index(sp.second, strategy);
    rep.product = analytic_index(sp, strategy);
    rep.check.pass = rep.product.value == rep.first.value * rep.second.value && rep.first.reliable &&
                     rep.second.reliable && rep.product.reliable;
    rep.check.worst_ratio = std::max({rep.first.residual, rep.second.residual, rep.product.residual});
    rep.check.detail = std::to_string(rep.product.value) + " = " + std::to_string(rep.first.value) + " x " +
                       std::to_string(rep.second.value);
    if (!rep.check.pass) rep.check.detail += " violated";
    return rep;
}

IndexReport family_index(const std::map<int, CMatrix>& loop) {
    if (loop.empty()) throw PreconditionError("empty loop");
    const Index n = loop.begin()->second.rows();
    for (const auto& [k, m] : loop)
        if (m.rows() != n || m.cols() != n) throw PreconditionError("loop coefficients must be square of equal size");
    double worst_cond = 0.0;
    auto at = [&](double th) {
        CMatrix M = CMatrix::Zero(n, n);
        for (const auto& [k, m] : loop) M += std::polar(1.0, k * th) * m;
        return M;
    };
    auto phase = [&](double th) {
        CMatrix M = at(th);
        Eigen::JacobiSVD<CMatrix> svd(M);
        const auto& s = svd.singularValues();
        const double cond = s(n - 1) > 0 ? s(0) / s(n - 1) : std::numeric_limits<double>::infinity();
        if (!(cond < 1e12))
            throw PreconditionError("loop not invertible at this truncation (theta = " + std::to_string(th) + ")");
        worst_cond = std::max(worst_cond, cond);
        Eigen::PartialPivLU<CMatrix> lu(M);
        double ph = lu.permutationP().determinant() < 0 ? std::numbers::pi : 0.0;
        for (Index i = 0; i < n; ++i) ph += std::arg(lu.matrixLU()(i, i));
        return ph;
    };
    const double raw = track_phase(phase, 1024) / kTwoPi;
    IndexReport r;
    r.method = IndexMethod::det_family;
    r.value = std::lround(raw);
    r.residual = std::abs(raw - r.value);
    r.reliable = r.residual < kResidualCap;
    r.truncations = {static_cast<int>(n)};
    r.diagnostics["raw"] = raw;
    r.diagnostics["max_condition"] = worst_cond;
    if (!r.reliable) throw NumericalError("determinant winding residual " + std::to_string(r.residual));
    return r;
}

IndexReport family_index(const SymbolValuedLoop& loop, int N) {
    std::map<int, CMatrix> mats;
    for (const auto& [k, s] : loop.coeffs()) mats[k] = quantize_poly(s, N).matrix();
    if (mats.empty()) throw PreconditionError("zero loop is not invertible");
    return family_index(mats);
}

Bidegree bidegree(const BiTrigPoly& u) {
    constexpr int grid = 256;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j)
            if (std::abs(u.evaluate(kTwoPi * i / grid, kTwoPi * j / grid)) < 1e-9)
                throw PreconditionError("pointwise symbol vanishes on the torus grid");
    auto slice = [&](int dir, double fixed) {
        return winding_of(
            [&](double th) { return dir == 1 ? u.evaluate(th, fixed) : u.evaluate(fixed, th); }, 4096, "symbol");
    };
    Bidegree b;
    auto r1 = slice(1, 0.0), r2 = slice(2, 0.0);
    b.d1 = int(r1.value);
    b.d2 = int(r2.value);
    b.residual = std::max(r1.residual, r2.residual);
    for (int s = 1; s <= 8; ++s) {
        const double fixed = kTwoPi * s / 9;
        auto a1 = slice(1, fixed), a2 = slice(2, fixed);
        if (a1.value != b.d1 || a2.value != b.d2) throw NumericalError("bidegree differs between slices");
        b.residual = std::max({b.residual, a1.residual, a2.residual});
    }
    return b;
}

namespace {

bool scalar_values(const SymbolValuedLoop& L) {
    for (const auto& [k, s] : L.coeffs()) {
        const auto& comps = s.nonzero_components();
        if (!s.is_complete() || comps.size() != 1 || comps.begin()->first != 0 ||
            comps.begin()->second.coeffs().size() != 1 || comps.begin()->second.coeffs().begin()->first != 0)
            return false;
    }
    return true;
}

// Every coefficient is a multiple of one common symbol.
bool rank_one_values(const SymbolValuedLoop& L) {
    const ShubinSymbol* base = nullptr;
    for (const auto& [k, s] : L.coeffs()) {
        if (!base) {
            base = &s;
            continue;
        }
        const auto& [j, u] = *base->nonzero_components().rbegin();
        const auto& [freq, c0] = *u.coeffs().begin();
        const GaussRat ratio = s.component(j).coeff(freq) / c0;
        if (ratio.is_zero() || !(s == base->scaled(ratio))) return false;
    }
    return true;
}

}  // namespace

IndexReport topological_index(const SigmaPair& p, int splitting_m) {
    const bool scalar = scalar_values(p.F) && scalar_values(p.G);
    const bool external = rank_one_values(p.F) && rank_one_values(p.G);
    if (!scalar && !external)
        throw PreconditionError("pair is outside the formal-formula scope: only external products and scalar pairs are supported");
    if (!compat_check(p.F, p.G)) throw PreconditionError("incompatible pair");
    const Bidegree b = bidegree(tsigma2(p.F));
    const Integer l = Integer(b.d1) * b.d2;
    const EpsilonBeta eb = epsilon_beta(l, splitting_m);
    if (!eb.check) throw std::logic_error("epsilon o beta != id");
    IndexReport r;
    r.method = IndexMethod::bidegree;
    r.value = eb.beta.second.get_si();
    r.residual = b.residual;
    r.reliable = r.residual < kResidualCap;
    r.diagnostics["d1"] = b.d1;
    r.diagnostics["d2"] = b.d2;
    r.diagnostics["m"] = splitting_m;
    r.diagnostics["beta_first"] = eb.beta.first.get_d();
    r.note = scalar ? "scalar pair" : "external product";
    return r;
}

}  // namespace psido
