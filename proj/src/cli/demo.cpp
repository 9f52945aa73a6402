#include <sstream>

#include "psido/cli.hpp"
#include "psido/errors.hpp"
#include "psido/generators.hpp"
#include "psido/index.hpp"
#include "psido/ktheory.hpp"
#include "psido/quantization.hpp"

namespace psido::cli {

namespace {

template <typename F>
DemoCheck guarded(const std::string& name, F&& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        return {name, false, std::string("exception: ") + e.what()};
    }
}

DemoCheck ktheory_groups() {
    return guarded("ktheory.groups", [] {
        const KTheoryReport r = paper_instance();
        const FGAbGroup Z = FGAbGroup::free(1), zero;
        bool ok = r.audited;
        auto expect = [&](const std::string& n, const FGAbGroup& k0, const FGAbGroup& k1) {
            const KEntry* e = r.find(n);
            ok = ok && e && e->K0 == k0 && e->K1 == k1;
        };
        expect("Sigma", Z, Z);
        expect("calA", Z, zero);
        for (const char* n : {"A^{0,0}", "A^{-1,0}", "A^{0,-1}", "A^{-1,-1}"}) expect(n, Z, zero);
        return DemoCheck{"ktheory.groups", ok, "K(Sigma) = (Z, Z), K(A^{i,j}) = (Z, 0)"};
    });
}

DemoCheck mv_instance() {
    return guarded("ktheory.mv_map", [] {
        const IntHom m = IntHom::free(IntMatrix{{1, -1}, {0, 0}});
        const FGAbGroup k = hom_kernel(m), c = hom_cokernel(m);
        const bool ok = k == FGAbGroup::free(1) && c == FGAbGroup::free(1);
        return DemoCheck{"ktheory.mv_map", ok, "ker = " + to_string(k) + ", coker = " + to_string(c)};
    });
}

DemoCheck sixterm_factor() {
    return guarded("ktheory.sixterm", [] {
        const FGAbGroup Z = FGAbGroup::free(1), zero;
        const SolveResult r =
            six_term_solve({Z, zero}, {Z, Z}, IntHom::free(IntMatrix{{1}}), IntHom::zero(Z, zero));
        const bool ok = audit(r) && r.K0 == Z && r.K1 == zero;
        return DemoCheck{"ktheory.sixterm", ok, "(" + to_string(r.K0) + ", " + to_string(r.K1) + ")"};
    });
}

DemoCheck mv_trivial() {
    return guarded("ktheory.mv_identity", [] {
        const FGAbGroup Z = FGAbGroup::free(1);
        PullbackData d{{Z, Z}, {Z, Z}, IntHom::free(IntMatrix{{1}}), IntHom::free(IntMatrix{{1}})};
        const SolveResult r = mayer_vietoris(d);
        const bool ok = audit(r) && r.K0.is_zero() && r.K1.is_zero();
        return DemoCheck{"ktheory.mv_identity", ok, "(" + to_string(r.K0) + ", " + to_string(r.K1) + ")"};
    });
}

DemoCheck snf_properties() {
    return guarded("ktheory.snf", [] {
        gen::Rng rng(9);
        int done = 0;
        for (; done < 200; ++done) {
            const IntMatrix M = gen::int_matrix(rng, gen::uniform(rng, 1, 5), gen::uniform(rng, 1, 5), 5);
            const SNF s = snf(M);  // verifies its own postconditions
            if (!(s.U * M * s.V == s.D)) break;
        }
        return DemoCheck{"ktheory.snf", done == 200, std::to_string(done) + "/200 random instances"};
    });
}

DemoCheck exactness() {
    return guarded("symbol.exactness", [] {
        gen::Rng rng(3);
        int kernel_ok = 0, round_trip_ok = 0;
        for (int i = 0; i < 40; ++i) {
            const BiOrder m{gen::uniform(rng, 0, 2), gen::uniform(rng, 0, 2)};
            kernel_ok += kernel_order_check(gen::cancelling(rng, m, 2, 2)).pass;
            const SigmaPair p = gen::compatible_pair(rng, m, 2, 2);
            const BisingularSymbol a = reconstruct(p);
            round_trip_ok += sigma1(a) == p.F && sigma2(a) == p.G;
        }
        std::ostringstream os;
        os << "kernel " << kernel_ok << "/40, reconstruct " << round_trip_ok << "/40";
        return DemoCheck{"symbol.exactness", kernel_ok == 40 && round_trip_ok == 40, os.str()};
    });
}

DemoCheck composition() {
    return guarded("quantize.composition", [] {
        gen::Rng rng(7);
        int ok = 0;
        double worst = 0;
        for (int i = 0; i < 10; ++i) {
            const CheckReport r = composition_consistency(gen::polynomial(rng, gen::uniform(rng, 0, 3)),
                                                          gen::polynomial(rng, gen::uniform(rng, 0, 3)), 32);
            ok += r.pass;
            worst = std::max(worst, r.worst_ratio);
        }
        std::ostringstream os;
        os << ok << "/10 pairs, worst " << worst;
        return DemoCheck{"quantize.composition", ok == 10, os.str()};
    });
}

DemoCheck compactness() {
    return guarded("quantize.compactness", [] {
        const ShubinSymbol H = ShubinSymbol::x() * ShubinSymbol::x() + ShubinSymbol::xi() * ShubinSymbol::xi();
        const DecayReport osc = compactness_proxy(H, {16, 32, 64}, 0.0, [](int k) { return 1.0 / (2 * k + 1); });
        const DecayReport control = compactness_proxy(ShubinSymbol::one(), {16, 32, 64}, 0.0);
        return DemoCheck{"quantize.compactness", osc.pass && !control.pass,
                         std::string("oscillator ") + (osc.pass ? "decays" : "does not decay") + ", identity " +
                             (control.pass ? "decays" : "does not decay")};
    });
}

DemoCheck analytic() {
    return guarded("index.analytic", [] {
        int ok = 0;
        std::ostringstream os;
        for (int k = -2; k <= 2; ++k) {
            const ShubinSymbol s = gen::ladder_power(k);
            const TruncatedOperator A = quantize_poly(s, 64);
            const IndexReport g = analytic_index(A, IndexStrategy::gap());
            const IndexReport h = analytic_index(A, IndexStrategy::heat());
            const IndexReport w = winding(sh_principal(s));
            const bool pass = g.reliable && h.reliable && g.value == k && h.value == k && w.value == k;
            ok += pass;
            os << (k == -2 ? "" : " ") << g.value;
        }
        return DemoCheck{"index.analytic", ok == 5, "indices at N = 64: " + os.str()};
    });
}

DemoCheck multiplicativity() {
    return guarded("index.multiplicativity", [] {
        int ok = 0, total = 0;
        for (auto [k1, k2] : {std::pair{1, -1}, {2, 1}, {-2, 2}, {0, 2}}) {
            ++total;
            ok += index_multiplicativity(gen::ladder_power(k1), gen::ladder_power(k2), 48, 48).check.pass;
        }
        return DemoCheck{"index.multiplicativity", ok == total,
                         std::to_string(ok) + "/" + std::to_string(total) + " cases at N1 = N2 = 48"};
    });
}

DemoCheck agreement() {
    return guarded("index.agreement", [] {
        const ShubinSymbol f = gen::ladder_power(1);
        const SigmaPair p = principal_pair(external_product(f, f));
        const IndexReport an = analytic_index(sharp_product(f, f, 32, 32));
        bool ok = an.reliable && an.value == 1;
        std::string top;
        for (int m = 0; m <= 2; ++m) {
            const IndexReport t = topological_index(p, m);
            ok = ok && t.reliable && t.value == 1;
            top += (m ? " " : "") + std::to_string(t.value);
        }
        return DemoCheck{"index.agreement", ok, "analytic " + std::to_string(an.value) + ", topological (m = 0..2) " + top};
    });
}

}  // namespace

std::vector<DemoCheck> run_demo(bool quick) {
    std::vector<DemoCheck> out{ktheory_groups(), mv_instance(), sixterm_factor(), mv_trivial()};
    if (quick) return out;
    out.push_back(snf_properties());
    out.push_back(exactness());
    out.push_back(composition());
    out.push_back(compactness());
    out.push_back(analytic());
    out.push_back(multiplicativity());
    out.push_back(agreement());
    return out;
}

}  // namespace psido::cli
