#include <map>
#include <optional>

#include "psido/ktheory.hpp"
#include "text_lexer.hpp"

namespace psido {

namespace {

using detail::TokenCursor;
using detail::TokenKind;

Integer parse_integer(TokenCursor& cur) {
    bool negative = cur.accept('-');
    if (!negative) cur.accept('+');
    const auto& t = cur.peek();
    if (t.kind != TokenKind::number || t.text.find('.') != std::string::npos) cur.fail("expected an integer");
    Integer v(cur.next().text);
    return negative ? Integer(-v) : v;
}

// 0 | term (+ term)*, term = Z | Z^n | Z/d
FGAbGroup parse_group_at(TokenCursor& cur) {
    if (cur.peek().kind == TokenKind::number && cur.peek().text == "0") {
        cur.next();
        return {};
    }
    size_t rank = 0;
    std::vector<Integer> orders;
    do {
        if (!cur.is_ident("Z")) cur.fail("expected 'Z' or '0'");
        cur.next();
        if (cur.accept('^')) {
            Integer n = parse_integer(cur);
            if (n < 0) cur.fail("negative rank");
            rank += n.get_ui();
        } else if (cur.accept('/')) {
            Integer d = parse_integer(cur);
            if (d < 1) cur.fail("cyclic order must be positive");
            orders.push_back(d);
        } else {
            ++rank;
        }
    } while (cur.accept('+'));
    return FGAbGroup::make(rank, orders);
}

KPair parse_pair(TokenCursor& cur) {
    cur.expect('[');
    FGAbGroup k0 = parse_group_at(cur);
    cur.expect(',');
    FGAbGroup k1 = parse_group_at(cur);
    cur.expect(']');
    return {k0, k1};
}

// "0" (zero map, shape from the groups) or [[a, b], [c, d]].
struct RawMatrix {
    bool zero = false;
    std::vector<std::vector<Integer>> rows;
    int line = 1, column = 1;
};

RawMatrix parse_matrix(TokenCursor& cur) {
    RawMatrix m;
    m.line = cur.peek().line;
    m.column = cur.peek().column;
    if (cur.peek().kind == TokenKind::number && cur.peek().text == "0") {
        cur.next();
        m.zero = true;
        return m;
    }
    cur.expect('[');
    if (!cur.accept(']')) {
        do {
            cur.expect('[');
            std::vector<Integer> row;
            if (!cur.accept(']')) {
                do row.push_back(parse_integer(cur));
                while (cur.accept(','));
                cur.expect(']');
            }
            if (!m.rows.empty() && row.size() != m.rows.front().size()) cur.fail("ragged matrix");
            m.rows.push_back(std::move(row));
        } while (cur.accept(','));
        cur.expect(']');
    }
    return m;
}

IntHom make_hom(const RawMatrix& raw, const FGAbGroup& source, const FGAbGroup& target, const std::string& name) {
    if (raw.zero) return IntHom::zero(source, target);
    const size_t cols = raw.rows.empty() ? 0 : raw.rows.front().size();
    IntMatrix m(raw.rows.size(), cols);
    for (size_t i = 0; i < raw.rows.size(); ++i)
        for (size_t j = 0; j < cols; ++j) m(i, j) = raw.rows[i][j];
    try {
        return IntHom(std::move(m), source, target);
    } catch (const PreconditionError& e) {
        throw ParseError(name + ": " + e.what(), raw.line, raw.column);
    }
}

}  // namespace

FGAbGroup parse_group(const std::string& text) {
    TokenCursor cur(text);
    FGAbGroup g = parse_group_at(cur);
    cur.expect_end();
    return g;
}

KDiagram parse_kd_document(const std::string& text) {
    TokenCursor cur(text);
    std::optional<KDiagram::Kind> kind;
    std::map<std::string, KPair> pairs;
    std::map<std::string, RawMatrix> matrices;
    while (!cur.at_end()) {
        const std::string key = cur.expect_ident();
        cur.expect('=');
        if (key == "kind") {
            if (kind) cur.fail("duplicate key 'kind'");
            const std::string v = cur.expect_ident();
            if (v == "mv") kind = KDiagram::Kind::mv;
            else if (v == "sixterm") kind = KDiagram::Kind::sixterm;
            else if (v == "kunneth") kind = KDiagram::Kind::kunneth;
            else throw ParseError("unknown diagram kind '" + v + "'", cur.peek().line, cur.peek().column);
        } else if (key == "left" || key == "right" || key == "ideal" || key == "quotient" || key == "A" || key == "B") {
            if (pairs.count(key)) cur.fail("duplicate key '" + key + "'");
            pairs[key] = parse_pair(cur);
        } else if (key == "M0" || key == "M1" || key == "delta" || key == "eps") {
            if (matrices.count(key)) cur.fail("duplicate key '" + key + "'");
            matrices[key] = parse_matrix(cur);
        } else {
            cur.fail("unknown key '" + key + "'");
        }
    }
    if (!kind) cur.fail("missing 'kind'");
    auto need_pair = [&](const std::string& k) -> const KPair& {
        auto it = pairs.find(k);
        if (it == pairs.end()) cur.fail("missing '" + k + "'");
        return it->second;
    };
    auto need_matrix = [&](const std::string& k) -> const RawMatrix& {
        auto it = matrices.find(k);
        if (it == matrices.end()) cur.fail("missing '" + k + "'");
        return it->second;
    };
    KDiagram d;
    d.kind = *kind;
    switch (d.kind) {
    case KDiagram::Kind::mv:
        d.pullback.left = need_pair("left");
        d.pullback.right = need_pair("right");
        d.pullback.M0 = make_hom(need_matrix("M0"), d.pullback.left.first, d.pullback.right.first, "M0");
        d.pullback.M1 = make_hom(need_matrix("M1"), d.pullback.left.second, d.pullback.right.second, "M1");
        break;
    case KDiagram::Kind::sixterm:
        d.ideal = need_pair("ideal");
        d.quotient = need_pair("quotient");
        d.delta = make_hom(need_matrix("delta"), d.quotient.second, d.ideal.first, "delta");
        d.eps = make_hom(need_matrix("eps"), d.quotient.first, d.ideal.second, "eps");
        break;
    case KDiagram::Kind::kunneth:
        d.A = need_pair("A");
        d.B = need_pair("B");
        break;
    }
    return d;
}

}  // namespace psido
