#pragma once

#include "dendrite/dsl/diagnostic.hpp"

#include <string_view>
#include <vector>

namespace dendrite::dsl {

enum class Tok {
    identifier,
    number,
    comment,
    lbrace,
    rbrace,
    lparen,
    rparen,
    lbracket,
    rbracket,
    comma,
    semicolon,
    colon,
    assign,
    concat,
    plus,
    minus,
    star,
    slash,
    caret,
    lt,
    le,
    gt,
    ge,
    eq,
    ne,
    end,
};

std::string_view describe(Tok t);

struct Token {
    Tok kind = Tok::end;
    std::string_view text;
    Span span;
    double number = 0.0;
};

/// Splits source into tokens. Comments (`#` or `//` to end of line) are kept
/// as tokens; unknown characters produce diagnostics and are skipped. The
/// last token is always Tok::end.
std::vector<Token> lex(std::string_view source, std::vector<Diagnostic>& diags);

} // namespace dendrite::dsl
