#include <set>

#include "psido/symbol.hpp"
#include "text_lexer.hpp"

namespace psido {
namespace detail {

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> out;
    int line = 1, column = 1;
    size_t i = 0;
    auto advance = [&](size_t n) {
        for (size_t j = 0; j < n; ++j, ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.column = column;
        size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            if (j + 1 < text.size() && text[j] == '.' && std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
                ++j;
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            }
            t.kind = TokenKind::number;
            advance(j - start);
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' || text[j] == '.'))
                ++j;
            t.kind = TokenKind::ident;
            advance(j - start);
        } else if (std::string("[](){},=:+-/*^;").find(c) != std::string::npos) {
            t.kind = TokenKind::punct;
            advance(1);
        } else {
            throw ParseError(std::string("unexpected character '") + c + "'", line, column);
        }
        t.text = text.substr(start, i - start);
        out.push_back(std::move(t));
    }
    Token end;
    end.line = line;
    end.column = column;
    out.push_back(end);
    return out;
}

long TokenCursor::parse_int() {
    bool negative = accept('-');
    if (!negative) accept('+');
    const Token& t = peek();
    if (t.kind != TokenKind::number || t.text.find('.') != std::string::npos) fail("expected an integer");
    long v = std::stol(next().text);
    return negative ? -v : v;
}

Rational TokenCursor::parse_rational() {
    const Token& t = peek();
    if (t.kind != TokenKind::number) fail("expected a number");
    std::string s = next().text;
    Rational value;
    if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        Integer den(1);
        for (size_t j = dot + 1; j < s.size(); ++j) den *= 10;
        value = Rational(Integer(digits), den);
        value.canonicalize();
    } else {
        value = Rational(Integer(s));
    }
    if (accept('/')) {
        const Token& d = peek();
        if (d.kind != TokenKind::number || d.text.find('.') != std::string::npos) fail("expected a denominator");
        Integer den(next().text);
        if (den == 0) fail("zero denominator");
        value /= Rational(den);
    }
    return value;
}

GaussRat TokenCursor::parse_complex() {
    // sum of signed terms, each "q", "q i", "q*i" or "i"
    GaussRat total;
    bool first = true;
    for (;;) {
        bool negative = false;
        if (is_punct('-') || is_punct('+')) {
            negative = next().text[0] == '-';
        } else if (!first) {
            break;
        }
        Rational mag(1);
        bool have_number = false;
        if (peek().kind == TokenKind::number) {
            mag = parse_rational();
            have_number = true;
        }
        bool imaginary = false;
        if (is_punct('*') && is_ident("i", 1)) {
            next();
            next();
            imaginary = true;
        } else if (is_ident("i")) {
            next();
            imaginary = true;
        }
        if (!have_number && !imaginary) fail("expected a complex number");
        if (negative) mag = -mag;
        if (imaginary)
            total.im += mag;
        else
            total.re += mag;
        first = false;
        if (!(is_punct('+') || is_punct('-'))) break;
    }
    return total;
}

ParsedSymbol parse_literal(TokenCursor& cur) {
    ParsedSymbol out;
    std::map<int, TrigPoly> comps;
    std::set<std::pair<long, long>> seen;
    cur.expect('[');
    if (!cur.accept(']')) {
        do {
            const Token& at = cur.peek();
            cur.expect('(');
            long j = cur.parse_int();
            cur.expect(',');
            long k = cur.parse_int();
            cur.expect(',');
            GaussRat c = cur.parse_complex();
            cur.expect(')');
            std::string where = " at line " + std::to_string(at.line) + ", column " + std::to_string(at.column);
            if (!seen.insert({j, k}).second)
                out.warnings.push_back("duplicate term (" + std::to_string(j) + ", " + std::to_string(k) +
                                       ") summed" + where);
            if (c.is_zero())
                out.warnings.push_back("zero coefficient (" + std::to_string(j) + ", " + std::to_string(k) +
                                       ") dropped" + where);
            comps[static_cast<int>(j)].add_term(static_cast<int>(k), c);
        } while (cur.accept(','));
        cur.expect(']');
    }
    out.symbol = ShubinSymbol(std::move(comps));
    return out;
}

}  // namespace detail

ParsedSymbol parse_symbol_literal(const std::string& text) {
    detail::TokenCursor cur(text);
    ParsedSymbol out = detail::parse_literal(cur);
    cur.expect_end();
    return out;
}

ParsedSymbol parse_symbol_document(const std::string& text) {
    detail::TokenCursor cur(text);
    std::optional<int> floor;
    if (cur.is_ident("floor")) {
        cur.next();
        cur.expect('=');
        floor = static_cast<int>(cur.parse_int());
    }
    ParsedSymbol out = detail::parse_literal(cur);
    cur.expect_end();
    if (floor) {
        for (const auto& [j, u] : out.symbol.nonzero_components())
            if (j < *floor) out.warnings.push_back("component of degree " + std::to_string(j) + " below floor dropped");
        out.symbol = out.symbol.truncated(*floor);
    }
    return out;
}

std::string write_symbol_document(const ShubinSymbol& s) {
    std::string out;
    if (s.floor()) out += "floor = " + std::to_string(*s.floor()) + "\n";
    return out + to_string(s) + "\n";
}

}  // namespace psido
