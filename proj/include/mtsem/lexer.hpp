#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "mtsem/diagnostics.hpp"
#include "mtsem/token.hpp"

namespace mtsem {

inline bool is_keyword(std::string_view word) {
    return word == "class" || word == "enum" || word == "def" || word == "by" ||
           word == "llm" || word == "sem" || word == "let" || word == "true" ||
           word == "false" || word == "None";
}

namespace detail {

class Lexer {
  public:
    explicit Lexer(std::string_view source) : src_(source) {}

    std::vector<Token> run() {
        std::vector<Token> tokens;
        while (true) {
            skip_trivia();
            if (at_end()) {
                tokens.push_back(make(TokenKind::EndOfInput, pos_, ""));
                return tokens;
            }
            tokens.push_back(next_token());
        }
    }

  private:
    bool at_end() const { return pos_ >= src_.size(); }
    char peek() const { return src_[pos_]; }
    char peek2() const { return pos_ + 1 < src_.size() ? src_[pos_ + 1] : '\0'; }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_trivia() {
        while (!at_end()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                bump();
            } else if (c == '#') {
                while (!at_end() && peek() != '\n') bump();
            } else {
                break;
            }
        }
    }

    Span span_from(std::size_t begin, int line, int col) const {
        return Span{line, col, begin, pos_};
    }

    Token make(TokenKind kind, std::size_t begin, std::string value) {
        Token t;
        t.kind = kind;
        t.text = std::string(src_.substr(begin, pos_ - begin));
        t.value = value.empty() && kind != TokenKind::StringLit ? t.text : std::move(value);
        t.span = Span{tok_line_, tok_col_, begin, pos_};
        return t;
    }

    [[noreturn]] void fail(const std::string& message, std::size_t begin) {
        Diagnostic d;
        d.kind = DiagKind::Lexical;
        d.message = message;
        d.span = Span{tok_line_, tok_col_, begin, pos_ > begin ? pos_ : begin + 1};
        throw CompileError(std::move(d));
    }

    Token next_token() {
        tok_line_ = line_;
        tok_col_ = col_;
        std::size_t begin = pos_;
        char c = peek();

        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_word(begin);
        if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(begin);
        if (c == '"') return lex_string(begin);

        switch (c) {
            case '{': case '}': case '(': case ')': case '[': case ']':
            case ',': case ':': case ';': case '=': case '.':
                bump();
                return make(TokenKind::Punct, begin, "");
            case '-':
                bump();
                if (!at_end() && peek() == '>') {
                    bump();
                    return make(TokenKind::Punct, begin, "");
                }
                fail("illegal character '-'", begin);
            default:
                bump();
                fail(std::string("illegal character '") + c + "'", begin);
        }
    }

    Token lex_word(std::size_t begin) {
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) bump();
        std::string_view word = src_.substr(begin, pos_ - begin);
        return make(is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, begin, "");
    }

    Token lex_number(std::size_t begin) {
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) bump();
        bool is_float = false;
        if (!at_end() && peek() == '.' && std::isdigit(static_cast<unsigned char>(peek2()))) {
            is_float = true;
            bump();
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) bump();
        }
        if (!at_end() && (peek() == 'e' || peek() == 'E')) {
            std::size_t mark = pos_;
            bump();
            if (!at_end() && (peek() == '+' || peek() == '-')) bump();
            if (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
                is_float = true;
                while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) bump();
            } else {
                fail("malformed exponent in numeric literal", mark);
            }
        }
        return make(is_float ? TokenKind::FloatLit : TokenKind::IntLit, begin, "");
    }

    Token lex_string(std::size_t begin) {
        bump();  // opening quote
        std::string payload;
        while (true) {
            if (at_end() || peek() == '\n') fail("unterminated string literal", begin);
            char c = peek();
            if (c == '"') {
                bump();
                return make(TokenKind::StringLit, begin, payload);
            }
            if (c == '\\') {
                bump();
                if (at_end()) fail("unterminated string literal", begin);
                char esc = peek();
                switch (esc) {
                    case '"': payload += '"'; break;
                    case '\\': payload += '\\'; break;
                    case 'n': payload += '\n'; break;
                    case 't': payload += '\t'; break;
                    default: fail(std::string("invalid escape '\\") + esc + "'", pos_ - 1);
                }
                bump();
            } else {
                payload += c;
                bump();
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    int tok_line_ = 1;
    int tok_col_ = 1;
};

}  // namespace detail

/// Tokenizes MTL source. Comments run from '#' to end of line. The returned
/// stream always ends with an EndOfInput token.
inline std::vector<Token> tokenize(std::string_view source) {
    return detail::Lexer(source).run();
}

}  // namespace mtsem
