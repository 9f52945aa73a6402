#include "psido/bisingular.hpp"
#include "psido/errors.hpp"
#include "text_lexer.hpp"

namespace psido {

namespace {

using detail::TokenCursor;

BiOrder parse_order(TokenCursor& cur) {
    cur.expect('=');
    cur.expect('[');
    BiOrder m;
    m.m1 = static_cast<int>(cur.parse_int());
    cur.expect(',');
    m.m2 = static_cast<int>(cur.parse_int());
    cur.expect(']');
    return m;
}

void append_warnings(std::vector<std::string>& out, const std::vector<std::string>& in, const std::string& where) {
    for (const auto& w : in) out.push_back(where + ": " + w);
}

std::string cutoff_name(const TermCutoff& c) {
    if (c.factor1 && c.factor2) return "chi1chi2";
    if (c.factor1) return "chi1";
    return "chi2";
}

}  // namespace

ParsedBisingular parse_bisingular_document(const std::string& text) {
    TokenCursor cur(text);
    ParsedBisingular out;
    std::optional<BiOrder> order;
    std::vector<TensorTerm> terms;
    while (!cur.at_end()) {
        const detail::Token at = cur.peek();
        std::string key = cur.expect_ident();
        if (key == "order") {
            if (order) throw ParseError("duplicate 'order'", at.line, at.column);
            order = parse_order(cur);
        } else if (key == "term") {
            cur.expect('{');
            std::optional<ShubinSymbol> f, g;
            std::optional<int> f_floor, g_floor;
            TermCutoff cut;
            while (!cur.accept('}')) {
                const detail::Token field_at = cur.peek();
                std::string field = cur.expect_ident();
                cur.expect('=');
                std::string where = "term " + std::to_string(terms.size() + 1) + " " + field;
                if (field == "f" || field == "g") {
                    ParsedSymbol ps = detail::parse_literal(cur);
                    append_warnings(out.warnings, ps.warnings, where);
                    (field == "f" ? f : g) = ps.symbol;
                } else if (field == "f_floor" || field == "g_floor") {
                    (field == "f_floor" ? f_floor : g_floor) = static_cast<int>(cur.parse_int());
                } else if (field == "cutoff") {
                    std::string v = cur.expect_ident();
                    if (v == "chi1") cut = {true, false};
                    else if (v == "chi2") cut = {false, true};
                    else if (v == "chi1chi2") cut = {true, true};
                    else if (v == "none") cut = {};
                    else throw ParseError("unknown cutoff '" + v + "'", field_at.line, field_at.column);
                } else {
                    throw ParseError("unknown term field '" + field + "'", field_at.line, field_at.column);
                }
            }
            if (!f || !g) throw ParseError("term needs both 'f' and 'g'", at.line, at.column);
            if (f_floor) f = f->truncated(*f_floor);
            if (g_floor) g = g->truncated(*g_floor);
            terms.push_back({*f, *g, cut});
        } else {
            throw ParseError("unknown key '" + key + "'", at.line, at.column);
        }
    }
    if (!order) cur.fail("missing 'order = [m1, m2]'");
    try {
        out.symbol = BisingularSymbol(*order, std::move(terms));
    } catch (const PreconditionError& e) {
        cur.fail(e.what());
    }
    return out;
}

std::string write_bisingular_document(const BisingularSymbol& a) {
    std::string out = "order = [" + std::to_string(a.order().m1) + ", " + std::to_string(a.order().m2) + "]\n";
    for (const auto& t : a.terms()) {
        out += "term {\n  f = " + to_string(t.f) + "\n";
        if (t.f.floor()) out += "  f_floor = " + std::to_string(*t.f.floor()) + "\n";
        out += "  g = " + to_string(t.g) + "\n";
        if (t.g.floor()) out += "  g_floor = " + std::to_string(*t.g.floor()) + "\n";
        if (t.cutoff.factor1 || t.cutoff.factor2) out += "  cutoff = " + cutoff_name(t.cutoff) + "\n";
        out += "}\n";
    }
    return out;
}

ParsedSigma parse_sigma_document(const std::string& text) {
    TokenCursor cur(text);
    ParsedSigma out;
    std::optional<BiOrder> order;
    std::optional<std::map<int, ShubinSymbol>> f_coeffs, g_coeffs;
    while (!cur.at_end()) {
        const detail::Token at = cur.peek();
        std::string key = cur.expect_ident();
        if (key == "order") {
            if (order) throw ParseError("duplicate 'order'", at.line, at.column);
            order = parse_order(cur);
        } else if (key == "F" || key == "G") {
            auto& target = key == "F" ? f_coeffs : g_coeffs;
            if (target) throw ParseError("duplicate block '" + key + "'", at.line, at.column);
            target.emplace();
            cur.expect('{');
            while (!cur.accept('}')) {
                const detail::Token entry_at = cur.peek();
                int k = static_cast<int>(cur.parse_int());
                cur.expect(':');
                ParsedSymbol ps = detail::parse_literal(cur);
                append_warnings(out.warnings, ps.warnings, key + "[" + std::to_string(k) + "]");
                if (!target->emplace(k, ps.symbol).second)
                    throw ParseError("duplicate frequency " + std::to_string(k), entry_at.line, entry_at.column);
            }
        } else {
            throw ParseError("unknown key '" + key + "'", at.line, at.column);
        }
    }
    if (!order) cur.fail("missing 'order = [m1, m2]'");
    if (!f_coeffs && !g_coeffs) cur.fail("expected an 'F' or 'G' block");
    out.order = *order;
    try {
        if (f_coeffs) out.F = SymbolValuedLoop(Factor::one, order->m2, std::move(*f_coeffs));
        if (g_coeffs) out.G = SymbolValuedLoop(Factor::two, order->m1, std::move(*g_coeffs));
    } catch (const PreconditionError& e) {
        cur.fail(e.what());
    }
    return out;
}

std::string write_sigma_document(const SigmaPair& p) {
    std::string out = "order = [" + std::to_string(p.order.m1) + ", " + std::to_string(p.order.m2) + "]\n";
    auto block = [&out](const char* name, const SymbolValuedLoop& loop) {
        out += std::string(name) + " {\n";
        for (const auto& [k, s] : loop.coeffs()) out += "  " + std::to_string(k) + " : " + to_string(s) + "\n";
        out += "}\n";
    };
    block("F", p.F);
    block("G", p.G);
    return out;
}

}  // namespace psido
