#pragma once

// Tokenizer shared by the .sym / .bsym / .sig / .kd readers.

#include <cctype>
#include <string>
#include <vector>

#include "psido/errors.hpp"
#include "psido/exact.hpp"
#include "psido/symbol.hpp"

namespace psido::detail {

enum class TokenKind { number, ident, punct, end };

struct Token {
    TokenKind kind = TokenKind::end;
    std::string text;
    int line = 1;
    int column = 1;
};

std::vector<Token> tokenize(const std::string& text);

class TokenCursor {
public:
    explicit TokenCursor(const std::string& text) : tokens_(tokenize(text)) {}

    const Token& peek(size_t ahead = 0) const {
        size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }
    const Token& next() {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size()) ++pos_;
        return t;
    }
    bool at_end() const { return peek().kind == TokenKind::end; }
    bool is_punct(char c, size_t ahead = 0) const {
        return peek(ahead).kind == TokenKind::punct && peek(ahead).text[0] == c;
    }
    bool is_ident(const std::string& s, size_t ahead = 0) const {
        return peek(ahead).kind == TokenKind::ident && peek(ahead).text == s;
    }
    bool accept(char c) {
        if (!is_punct(c)) return false;
        next();
        return true;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    std::string expect_ident() {
        if (peek().kind != TokenKind::ident) fail("expected an identifier");
        return next().text;
    }
    void expect_end() {
        if (!at_end()) fail("unexpected trailing input");
    }
    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        std::string got = t.kind == TokenKind::end ? "end of input" : "'" + t.text + "'";
        throw ParseError(msg + ", got " + got, t.line, t.column);
    }

    long parse_int();
    Rational parse_rational();  // unsigned: digits[.digits][/digits]
    GaussRat parse_complex();

private:
    std::vector<Token> tokens_;
    size_t pos_ = 0;
};

// Symbol literal [(j, k, c), ...] at the cursor.
ParsedSymbol parse_literal(TokenCursor& cur);

}  // namespace psido::detail
