#include "dendrite/dsl/lexer.hpp"

#include <cctype>
#include <charconv>

namespace dendrite::dsl {

std::string_view describe(Tok t) {
    switch (t) {
    case Tok::identifier:
        return "identifier";
    case Tok::number:
        return "number";
    case Tok::comment:
        return "comment";
    case Tok::lbrace:
        return "'{'";
    case Tok::rbrace:
        return "'}'";
    case Tok::lparen:
        return "'('";
    case Tok::rparen:
        return "')'";
    case Tok::lbracket:
        return "'['";
    case Tok::rbracket:
        return "']'";
    case Tok::comma:
        return "','";
    case Tok::semicolon:
        return "';'";
    case Tok::colon:
        return "':'";
    case Tok::assign:
        return "'='";
    case Tok::concat:
        return "'<<'";
    case Tok::plus:
        return "'+'";
    case Tok::minus:
        return "'-'";
    case Tok::star:
        return "'*'";
    case Tok::slash:
        return "'/'";
    case Tok::caret:
        return "'^'";
    case Tok::lt:
        return "'<'";
    case Tok::le:
        return "'<='";
    case Tok::gt:
        return "'>'";
    case Tok::ge:
        return "'>='";
    case Tok::eq:
        return "'=='";
    case Tok::ne:
        return "'!='";
    case Tok::end:
        return "end of input";
    }
    return "token";
}

namespace {

class Lexer {
public:
    Lexer(std::string_view src, std::vector<Diagnostic>& diags) : src_(src), diags_(diags) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            if (pos_ >= src_.size()) {
                out.push_back(Token{Tok::end, {}, here(0)});
                return out;
            }
            const char c = src_[pos_];
            if (c == '#' || (c == '/' && peek(1) == '/')) {
                const std::size_t start = pos_;
                const Span sp = here(0);
                while (pos_ < src_.size() && src_[pos_] != '\n')
                    advance();
                out.push_back(token(Tok::comment, start, sp));
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                const std::size_t start = pos_;
                const Span sp = here(0);
                while (pos_ < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                    advance();
                out.push_back(token(Tok::identifier, start, sp));
            } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                       (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
                out.push_back(number());
            } else {
                punct(out);
            }
        }
    }

private:
    char peek(std::size_t k) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

    void advance() {
        const unsigned char c = static_cast<unsigned char>(src_[pos_++]);
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else if ((c & 0xC0) != 0x80) {
            ++col_;
        }
    }

    // Continuation bytes of a multi-byte character do not start a new column.
    Span here(std::size_t length) const { return Span{pos_, length, line_, col_}; }

    Token token(Tok kind, std::size_t start, Span sp) const {
        sp.length = pos_ - start;
        return Token{kind, src_.substr(start, pos_ - start), sp};
    }

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            advance();
    }

    Token number() {
        const std::size_t start = pos_;
        const Span sp = here(0);
        auto digits = [&] {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                advance();
        };
        digits();
        if (peek(0) == '.') {
            advance();
            digits();
        }
        if ((peek(0) == 'e' || peek(0) == 'E') &&
            (std::isdigit(static_cast<unsigned char>(peek(1))) ||
             ((peek(1) == '+' || peek(1) == '-') && std::isdigit(static_cast<unsigned char>(peek(2)))))) {
            advance();
            if (peek(0) == '+' || peek(0) == '-')
                advance();
            digits();
        }
        Token t = token(Tok::number, start, sp);
        const auto* b = t.text.data();
        auto [ptr, ec] = std::from_chars(b, b + t.text.size(), t.number);
        if (ec != std::errc{} || ptr != b + t.text.size())
            diags_.push_back(make_diagnostic(Severity::error, "malformed number '" + std::string(t.text) + "'",
                                             t.span, src_));
        return t;
    }

    void punct(std::vector<Token>& out) {
        const std::size_t start = pos_;
        const Span sp = here(0);
        const char c = src_[pos_];
        const char n = peek(1);
        auto emit = [&](Tok kind, int width) {
            for (int i = 0; i < width; ++i)
                advance();
            out.push_back(token(kind, start, sp));
        };
        switch (c) {
        case '{':
            return emit(Tok::lbrace, 1);
        case '}':
            return emit(Tok::rbrace, 1);
        case '(':
            return emit(Tok::lparen, 1);
        case ')':
            return emit(Tok::rparen, 1);
        case '[':
            return emit(Tok::lbracket, 1);
        case ']':
            return emit(Tok::rbracket, 1);
        case ',':
            return emit(Tok::comma, 1);
        case ';':
            return emit(Tok::semicolon, 1);
        case ':':
            return emit(Tok::colon, 1);
        case '+':
            return emit(Tok::plus, 1);
        case '-':
            return emit(Tok::minus, 1);
        case '*':
            return emit(Tok::star, 1);
        case '/':
            return emit(Tok::slash, 1);
        case '^':
            return emit(Tok::caret, 1);
        case '<':
            if (n == '<')
                return emit(Tok::concat, 2);
            if (n == '=')
                return emit(Tok::le, 2);
            return emit(Tok::lt, 1);
        case '>':
            if (n == '=')
                return emit(Tok::ge, 2);
            return emit(Tok::gt, 1);
        case '=':
            if (n == '=')
                return emit(Tok::eq, 2);
            return emit(Tok::assign, 1);
        case '!':
            if (n == '=')
                return emit(Tok::ne, 2);
            break;
        default:
            break;
        }
        // Consume the whole (possibly multi-byte) character.
        advance();
        while (pos_ < src_.size() && (static_cast<unsigned char>(src_[pos_]) & 0xC0) == 0x80)
            advance();
        Span bad = sp;
        bad.length = pos_ - start;
        diags_.push_back(make_diagnostic(Severity::error,
                                         "unexpected character '" + std::string(src_.substr(start, pos_ - start)) + "'",
                                         bad, src_));
    }

    std::string_view src_;
    std::vector<Diagnostic>& diags_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

} // namespace

std::vector<Token> lex(std::string_view source, std::vector<Diagnostic>& diags) {
    return Lexer(source, diags).run();
}

} // namespace dendrite::dsl
