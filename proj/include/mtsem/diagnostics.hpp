#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtsem {

/// Half-open byte range plus the 1-based line/column of its first byte.
struct Span {
    int line = 1;
    int column = 1;
    std::size_t begin = 0;
    std::size_t end = 0;
};

enum class DiagKind {
    Lexical,
    Syntax,
    Symbol,
    SemText,
};

struct Diagnostic {
    DiagKind kind = DiagKind::Syntax;
    std::string message;
    Span span;
    std::optional<Span> related;             // earlier declaration, for duplicates
    std::vector<std::string> expected;       // expected tokens, for syntax errors

    std::string to_string() const {
        std::string out = "error: " + message;
        if (!expected.empty()) {
            out += " (expected ";
            for (std::size_t i = 0; i < expected.size(); ++i) {
                if (i > 0) out += ", ";
                out += expected[i];
            }
            out += ")";
        }
        out += " at line " + std::to_string(span.line) + ", col " + std::to_string(span.column);
        if (related) {
            out += "\nnote: previously declared at line " + std::to_string(related->line) +
                   ", col " + std::to_string(related->column);
        }
        return out;
    }
};

class CompileError : public std::runtime_error {
  public:
    explicit CompileError(Diagnostic diag)
        : std::runtime_error(diag.to_string()), diag_(std::move(diag)) {}

    const Diagnostic& diagnostic() const { return diag_; }

  private:
    Diagnostic diag_;
};

}  // namespace mtsem
