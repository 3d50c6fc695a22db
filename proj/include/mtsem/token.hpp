#pragma once

#include <string>

#include "mtsem/diagnostics.hpp"

namespace mtsem {

enum class TokenKind {
    Keyword,
    Identifier,
    StringLit,
    IntLit,
    FloatLit,
    Punct,
    EndOfInput,
};

inline const char* token_kind_name(TokenKind kind) {
    switch (kind) {
        case TokenKind::Keyword: return "keyword";
        case TokenKind::Identifier: return "identifier";
        case TokenKind::StringLit: return "string";
        case TokenKind::IntLit: return "int";
        case TokenKind::FloatLit: return "float";
        case TokenKind::Punct: return "punctuation";
        case TokenKind::EndOfInput: return "end of input";
    }
    return "?";
}

struct Token {
    TokenKind kind = TokenKind::EndOfInput;
    std::string text;   // raw source slice, including quotes for strings
    std::string value;  // unescaped payload for strings, otherwise == text
    Span span;
};

}  // namespace mtsem
