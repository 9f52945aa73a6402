#include "psido/bisingular.hpp"

#include <sstream>

#include "psido/errors.hpp"

namespace psido {

// ------------------------------------------------------- BisingularSymbol

BisingularSymbol::BisingularSymbol(BiOrder order, std::vector<TensorTerm> terms) : order_(order) {
    for (auto& t : terms) {
        if (t.f.is_zero() || t.g.is_zero()) continue;
        if (t.f.order() > order.m1 || t.g.order() > order.m2)
            throw PreconditionError("tensor term of order (" + std::to_string(t.f.order()) + ", " +
                                    std::to_string(t.g.order()) + ") exceeds declared order (" +
                                    std::to_string(order.m1) + ", " + std::to_string(order.m2) + ")");
        terms_.push_back(std::move(t));
    }
}

BisingularSymbol BisingularSymbol::unit() {
    return BisingularSymbol({0, 0}, {TensorTerm{ShubinSymbol::one(), ShubinSymbol::one(), {}}});
}

bool BisingularSymbol::is_zero() const { return terms_.empty(); }

bool BisingularSymbol::attains_order() const {
    bool first = false, second = false;
    for (const auto& t : terms_) {
        first = first || t.f.order() == order_.m1;
        second = second || t.g.order() == order_.m2;
    }
    return first && second;
}

std::complex<double> BisingularSymbol::evaluate(double x1, double xi1, double x2, double xi2) const {
    std::complex<double> sum = 0.0;
    for (const auto& t : terms_) {
        double chi = 1.0;
        if (t.cutoff.factor1) chi *= cutoff(std::hypot(x1, xi1));
        if (t.cutoff.factor2) chi *= cutoff(std::hypot(x2, xi2));
        if (chi == 0.0) continue;
        sum += chi * t.f.evaluate(x1, xi1) * t.g.evaluate(x2, xi2);
    }
    return sum;
}

BisingularSymbol BisingularSymbol::scaled(const GaussRat& c) const {
    std::vector<TensorTerm> terms;
    if (!c.is_zero())
        for (const auto& t : terms_) terms.push_back({t.f.scaled(c), t.g, t.cutoff});
    return BisingularSymbol(order_, std::move(terms));
}

BisingularSymbol& BisingularSymbol::operator+=(const BisingularSymbol& o) {
    if (terms_.empty()) order_ = o.order_;
    else if (!o.terms_.empty()) order_ = {std::max(order_.m1, o.order_.m1), std::max(order_.m2, o.order_.m2)};
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    return *this;
}

BisingularSymbol operator+(BisingularSymbol a, const BisingularSymbol& b) { return a += b; }
BisingularSymbol operator-(BisingularSymbol a, const BisingularSymbol& b) { return a += b.scaled(GaussRat(-1)); }

// ----------------------------------------------------------------- loops

SymbolValuedLoop::SymbolValuedLoop(Factor factor, int value_order, std::map<int, ShubinSymbol> coeffs)
    : factor_(factor), value_order_(value_order) {
    for (auto& [k, s] : coeffs) {
        if (s.is_zero()) continue;
        if (s.order() > value_order)
            throw PreconditionError("loop coefficient at frequency " + std::to_string(k) + " has order " +
                                    std::to_string(s.order()) + " > value order " + std::to_string(value_order));
        coeffs_.emplace(k, std::move(s));
    }
}

void BiTrigPoly::add_term(int k1, int k2, const GaussRat& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = coeffs_.try_emplace({k1, k2}, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) coeffs_.erase(it);
    }
}

GaussRat BiTrigPoly::coeff(int k1, int k2) const {
    auto it = coeffs_.find({k1, k2});
    return it == coeffs_.end() ? GaussRat() : it->second;
}

std::complex<double> BiTrigPoly::evaluate(double theta1, double theta2) const {
    std::complex<double> sum = 0.0;
    for (const auto& [key, c] : coeffs_) sum += c.to_complex() * std::polar(1.0, key.first * theta1 + key.second * theta2);
    return sum;
}

BiTrigPoly product(const TrigPoly& u1, const TrigPoly& u2) {
    BiTrigPoly out;
    for (const auto& [k1, c1] : u1.coeffs())
        for (const auto& [k2, c2] : u2.coeffs()) out.add_term(k1, k2, c1 * c2);
    return out;
}

std::string to_string(const BiTrigPoly& u) {
    if (u.is_zero()) return "0";
    std::string out;
    for (const auto& [key, c] : u.coeffs()) {
        if (!out.empty()) out += " + ";
        out += "(" + to_string(c) + ")*e^{i(" + std::to_string(key.first) + "*theta1 + " +
               std::to_string(key.second) + "*theta2)}";
    }
    return out;
}

std::string to_string(const SymbolValuedLoop& loop) {
    std::string out = "factor " + std::to_string(static_cast<int>(loop.factor())) + ", value order " +
                      std::to_string(loop.value_order()) + " {";
    for (const auto& [k, s] : loop.coeffs()) out += " " + std::to_string(k) + " : " + to_string(s) + ";";
    return out + " }";
}

// ------------------------------------------------------------- SigmaPair

SigmaPair SigmaPair::make(SymbolValuedLoop F, SymbolValuedLoop G) {
    if (!compat_check(F, G)) throw PreconditionError("incompatible symbol pair: tsigma2(F) != tsigma1(G)");
    BiOrder order{G.value_order(), F.value_order()};
    return SigmaPair{std::move(F), std::move(G), order};
}

SigmaPair SigmaPair::unit() {
    return make(SymbolValuedLoop(Factor::one, 0, {{0, ShubinSymbol::one()}}),
                SymbolValuedLoop(Factor::two, 0, {{0, ShubinSymbol::one()}}));
}

// ------------------------------------------------------------ operations

BisingularSymbol external_product(const ShubinSymbol& f, const ShubinSymbol& g) {
    if (f.is_zero() || g.is_zero()) return {};
    return BisingularSymbol({f.order(), g.order()}, {TensorTerm{f, g, {}}});
}

BisingularSymbol bs_compose(const BisingularSymbol& a, const BisingularSymbol& b, std::optional<int> depth) {
    std::vector<TensorTerm> terms;
    for (const auto& s : a.terms()) {
        for (const auto& t : b.terms()) {
            TermCutoff cut{s.cutoff.factor1 || t.cutoff.factor1, s.cutoff.factor2 || t.cutoff.factor2};
            terms.push_back({kn_compose(s.f, t.f, depth), kn_compose(s.g, t.g, depth), cut});
        }
    }
    BiOrder order{a.order().m1 + b.order().m1, a.order().m2 + b.order().m2};
    return BisingularSymbol(order, std::move(terms));
}

SymbolValuedLoop sigma1(const BisingularSymbol& a) {
    std::map<int, ShubinSymbol> coeffs;
    for (const auto& t : a.terms()) {
        const TrigPoly u = t.f.component(a.order().m1);
        for (const auto& [k, c] : u.coeffs()) coeffs[k] += t.g.scaled(c);
    }
    return SymbolValuedLoop(Factor::one, a.order().m2, std::move(coeffs));
}

SymbolValuedLoop sigma2(const BisingularSymbol& a) {
    std::map<int, ShubinSymbol> coeffs;
    for (const auto& t : a.terms()) {
        const TrigPoly u = t.g.component(a.order().m2);
        for (const auto& [k, c] : u.coeffs()) coeffs[k] += t.f.scaled(c);
    }
    return SymbolValuedLoop(Factor::two, a.order().m1, std::move(coeffs));
}

BiTrigPoly tsigma1(const SymbolValuedLoop& G) {
    if (G.factor() != Factor::two) throw PreconditionError("tsigma1 expects a loop on circle 2");
    BiTrigPoly out;
    for (const auto& [k2, s] : G.coeffs()) {
        const TrigPoly u = s.component(G.value_order());
        for (const auto& [k1, c] : u.coeffs()) out.add_term(k1, k2, c);
    }
    return out;
}

BiTrigPoly tsigma2(const SymbolValuedLoop& F) {
    if (F.factor() != Factor::one) throw PreconditionError("tsigma2 expects a loop on circle 1");
    BiTrigPoly out;
    for (const auto& [k1, s] : F.coeffs()) {
        const TrigPoly u = s.component(F.value_order());
        for (const auto& [k2, c] : u.coeffs()) out.add_term(k1, k2, c);
    }
    return out;
}

bool compat_check(const SymbolValuedLoop& F, const SymbolValuedLoop& G) { return tsigma2(F) == tsigma1(G); }

SymbolValuedLoop loop_compose(const SymbolValuedLoop& p, const SymbolValuedLoop& q, std::optional<int> depth) {
    if (p.factor() != q.factor()) throw PreconditionError("cannot compose loops on different circles");
    std::map<int, ShubinSymbol> coeffs;
    for (const auto& [k, s] : p.coeffs())
        for (const auto& [l, t] : q.coeffs()) coeffs[k + l] += kn_compose(s, t, depth);
    return SymbolValuedLoop(p.factor(), p.value_order() + q.value_order(), std::move(coeffs));
}

SigmaPair sigma_pair_compose(const SigmaPair& p, const SigmaPair& q, std::optional<int> depth) {
    if (!compat_check(p.F, p.G) || !compat_check(q.F, q.G))
        throw PreconditionError("sigma_pair_compose: incompatible input pair");
    return SigmaPair::make(loop_compose(p.F, q.F, depth), loop_compose(p.G, q.G, depth));
}

BisingularSymbol reconstruct(const SigmaPair& p) {
    if (!compat_check(p.F, p.G)) throw PreconditionError("reconstruct: incompatible symbol pair");
    const int m1 = p.order.m1, m2 = p.order.m2;
    std::vector<TensorTerm> terms;
    for (const auto& [k, value] : p.F.coeffs())
        terms.push_back({ShubinSymbol::monomial(m1, k), value, {true, false}});
    for (const auto& [k, value] : p.G.coeffs())
        terms.push_back({value, ShubinSymbol::monomial(m2, k), {false, true}});
    const BiTrigPoly common = tsigma2(p.F);
    for (const auto& [key, c] : common.coeffs())
        terms.push_back({ShubinSymbol::monomial(m1, key.first, -c), ShubinSymbol::monomial(m2, key.second), {true, true}});
    return BisingularSymbol(p.order, std::move(terms));
}

std::map<BiMonomialKey, GaussRat> bimonomial_expansion(const BisingularSymbol& a) {
    std::map<BiMonomialKey, GaussRat> out;
    for (const auto& t : a.terms())
        for (const auto& [j1, u1] : t.f.nonzero_components())
            for (const auto& [k1, c1] : u1.coeffs())
                for (const auto& [j2, u2] : t.g.nonzero_components())
                    for (const auto& [k2, c2] : u2.coeffs()) out[{j1, k1, j2, k2}] += c1 * c2;
    std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
}

BisingularSymbol regroup(const BisingularSymbol& a, BiOrder order) {
    std::map<std::pair<int, int>, std::map<int, TrigPoly>> groups;
    for (const auto& [key, c] : bimonomial_expansion(a)) {
        auto [j1, k1, j2, k2] = key;
        groups[{j1, k1}][j2].add_term(k2, c);
    }
    std::vector<TensorTerm> terms;
    for (auto& [jk, comps] : groups)
        terms.push_back({ShubinSymbol::monomial(jk.first, jk.second), ShubinSymbol(std::move(comps)), {}});
    return BisingularSymbol(order, std::move(terms));
}

CheckReport kernel_order_check(const BisingularSymbol& a) {
    CheckReport report;
    const BiOrder m = a.order();
    if (!sigma1(a).is_zero() || !sigma2(a).is_zero()) {
        report.applicable = false;
        report.pass = false;
        report.detail = "not applicable: principal symbols do not both vanish";
        return report;
    }
    for (const auto& t : a.terms()) {
        bool f_unknown = !t.f.is_complete() && t.g.order() > m.m2 - 1;
        bool g_unknown = !t.g.is_complete() && t.f.order() > m.m1 - 1;
        if (f_unknown || g_unknown) {
            report.pass = false;
            report.detail = "undetermined: a truncated factor multiplies a top-order factor";
            return report;
        }
    }
    int worst1 = ShubinSymbol::kZeroOrder, worst2 = ShubinSymbol::kZeroOrder;
    auto expansion = bimonomial_expansion(a);
    for (const auto& [key, c] : expansion) {
        worst1 = std::max(worst1, std::get<0>(key));
        worst2 = std::max(worst2, std::get<2>(key));
    }
    std::ostringstream detail;
    if ((expansion.empty() || (worst1 <= m.m1 - 1 && worst2 <= m.m2 - 1))) {
        BisingularSymbol lower = regroup(a, {m.m1 - 1, m.m2 - 1});
        report.pass = true;
        detail << "order drops to (" << m.m1 - 1 << ", " << m.m2 - 1 << "); " << lower.terms().size()
               << " regrouped terms";
    } else {
        report.pass = false;
        detail << "bimonomial of degree (" << worst1 << ", " << worst2 << ") survives";
    }
    report.detail = detail.str();
    return report;
}

}  // namespace psido
