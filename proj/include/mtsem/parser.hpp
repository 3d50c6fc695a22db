#pragma once

#include <charconv>
#include <initializer_list>
#include <string>
#include <vector>

#include "mtsem/ast.hpp"
#include "mtsem/diagnostics.hpp"
#include "mtsem/lexer.hpp"
#include "mtsem/token.hpp"

namespace mtsem {
namespace detail {

class Parser {
  public:
    explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {}

    SourceProgram run() {
        SourceProgram program;
        while (!at(TokenKind::EndOfInput)) {
            program.decls.push_back(parse_decl());
        }
        return program;
    }

  private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& advance() { return toks_[pos_++]; }

    bool at(TokenKind kind) const { return peek().kind == kind; }
    bool at_kw(const char* kw) const { return at(TokenKind::Keyword) && peek().text == kw; }
    bool at_punct(const char* p) const { return at(TokenKind::Punct) && peek().text == p; }

    [[noreturn]] void fail(const std::string& msg, std::initializer_list<const char*> expected) {
        Diagnostic d;
        d.kind = DiagKind::Syntax;
        d.message = msg;
        d.span = peek().span;
        for (const char* e : expected) d.expected.emplace_back(e);
        throw CompileError(std::move(d));
    }

    Token expect_punct(const char* p) {
        if (!at_punct(p)) fail("unexpected " + describe(peek()), {p});
        return advance();
    }

    Token expect_kw(const char* kw) {
        if (!at_kw(kw)) fail("unexpected " + describe(peek()), {kw});
        return advance();
    }

    Token expect_ident() {
        if (!at(TokenKind::Identifier)) fail("unexpected " + describe(peek()), {"identifier"});
        return advance();
    }

    static std::string describe(const Token& t) {
        if (t.kind == TokenKind::EndOfInput) return "end of input";
        return std::string(token_kind_name(t.kind)) + " '" + t.text + "'";
    }

    Span close_span(const Span& start) const {
        const Span& prev = toks_[pos_ > 0 ? pos_ - 1 : 0].span;
        return Span{start.line, start.column, start.begin, prev.end};
    }

    Decl parse_decl() {
        if (at_kw("class")) return parse_class();
        if (at_kw("enum")) return parse_enum();
        if (at_kw("def")) return parse_func();
        if (at_kw("sem")) return parse_sem();
        if (at_kw("let")) return parse_global();
        fail("unexpected " + describe(peek()) + " at top level",
             {"class", "enum", "def", "sem", "let"});
    }

    ClassDecl parse_class() {
        Span start = advance().span;  // class
        ClassDecl cls;
        cls.name = expect_ident().text;
        expect_punct("{");
        if (at(TokenKind::StringLit)) cls.docstring = advance().value;
        while (!at_punct("}")) {
            if (at_kw("def")) {
                cls.methods.push_back(parse_func());
            } else if (at(TokenKind::Identifier)) {
                cls.attrs.push_back(parse_attr());
            } else {
                fail("unexpected " + describe(peek()) + " in class body",
                     {"identifier", "def", "}"});
            }
        }
        advance();  // }
        cls.span = close_span(start);
        return cls;
    }

    AttrDecl parse_attr() {
        AttrDecl attr;
        Token name = expect_ident();
        attr.name = name.text;
        expect_punct(":");
        attr.type = parse_type();
        if (at_punct("=")) {
            advance();
            attr.default_value = parse_literal();
        }
        expect_punct(";");
        attr.span = close_span(name.span);
        return attr;
    }

    EnumDecl parse_enum() {
        Span start = advance().span;  // enum
        EnumDecl en;
        en.name = expect_ident().text;
        expect_punct("{");
        if (at(TokenKind::StringLit)) en.docstring = advance().value;
        Token first = expect_ident();
        en.variants.push_back({first.text, first.span});
        while (at_punct(",")) {
            advance();
            Token v = expect_ident();
            en.variants.push_back({v.text, v.span});
        }
        expect_punct("}");
        en.span = close_span(start);
        return en;
    }

    FuncDecl parse_func() {
        Span start = advance().span;  // def
        FuncDecl fn;
        fn.name = expect_ident().text;
        expect_punct("(");
        if (!at_punct(")")) {
            fn.params.push_back(parse_param());
            while (at_punct(",")) {
                advance();
                fn.params.push_back(parse_param());
            }
        }
        expect_punct(")");
        expect_punct("->");
        fn.return_type = parse_type();
        if (at_kw("by")) {
            advance();
            expect_kw("llm");
            fn.is_by_llm = true;
            if (at(TokenKind::StringLit)) fn.docstring = advance().value;
            expect_punct(";");
        } else if (at_punct("{")) {
            skip_opaque_block();
        } else {
            fail("unexpected " + describe(peek()) + " after function signature", {"by", "{"});
        }
        fn.span = close_span(start);
        return fn;
    }

    // Opaque bodies are balanced-brace token runs; the contents are never used.
    void skip_opaque_block() {
        expect_punct("{");
        int depth = 1;
        while (depth > 0) {
            if (at(TokenKind::EndOfInput)) fail("unterminated function body", {"}"});
            if (at_punct("{")) ++depth;
            if (at_punct("}")) --depth;
            advance();
        }
    }

    Param parse_param() {
        Param p;
        Token name = expect_ident();
        p.name = name.text;
        expect_punct(":");
        p.type = parse_type();
        if (at_punct("=")) {
            advance();
            p.default_value = parse_literal();
        }
        p.span = close_span(name.span);
        return p;
    }

    SemDecl parse_sem() {
        Span start = advance().span;  // sem
        SemDecl sem;
        sem.target_path.push_back(expect_ident().text);
        while (at_punct(".")) {
            advance();
            sem.target_path.push_back(expect_ident().text);
        }
        expect_punct("=");
        if (!at(TokenKind::StringLit)) fail("unexpected " + describe(peek()), {"string"});
        Token text = advance();
        if (trimmed(text.value).empty()) {
            Diagnostic d;
            d.kind = DiagKind::Syntax;
            d.message = "sem text must not be empty";
            d.span = text.span;
            throw CompileError(std::move(d));
        }
        sem.text = text.value;
        expect_punct(";");
        sem.span = close_span(start);
        return sem;
    }

    GlobalDecl parse_global() {
        Span start = advance().span;  // let
        GlobalDecl g;
        g.name = expect_ident().text;
        expect_punct(":");
        g.type = parse_type();
        expect_punct(";");
        g.span = close_span(start);
        return g;
    }

    TypeExpr parse_type() {
        TypeExpr type;
        Token head = expect_ident();
        type.name = head.text;
        if (at_punct("[")) {
            advance();
            type.args.push_back(parse_type());
            while (at_punct(",")) {
                advance();
                type.args.push_back(parse_type());
            }
            expect_punct("]");
            std::size_t arity = 0;
            if (!is_builtin_generic(type.name, arity)) {
                Diagnostic d;
                d.kind = DiagKind::Syntax;
                d.message = "'" + type.name + "' is not a generic type (only list, dict, Optional)";
                d.span = head.span;
                throw CompileError(std::move(d));
            }
            if (type.args.size() != arity) {
                Diagnostic d;
                d.kind = DiagKind::Syntax;
                d.message = "'" + type.name + "' takes " + std::to_string(arity) +
                            " type argument(s), got " + std::to_string(type.args.size());
                d.span = head.span;
                throw CompileError(std::move(d));
            }
        }
        return type;
    }

    Literal parse_literal() {
        Literal lit;
        if (at(TokenKind::StringLit)) {
            lit.kind = Literal::Kind::Str;
            lit.str = advance().value;
            return lit;
        }
        if (at(TokenKind::IntLit)) {
            const Token& t = advance();
            lit.kind = Literal::Kind::Int;
            std::from_chars(t.text.data(), t.text.data() + t.text.size(), lit.int_val);
            return lit;
        }
        if (at(TokenKind::FloatLit)) {
            const Token& t = advance();
            lit.kind = Literal::Kind::Float;
            lit.float_val = std::stod(t.text);
            return lit;
        }
        if (at_kw("true")) { advance(); lit.kind = Literal::Kind::True; return lit; }
        if (at_kw("false")) { advance(); lit.kind = Literal::Kind::False; return lit; }
        if (at_kw("None")) { advance(); lit.kind = Literal::Kind::None; return lit; }
        if (at_punct("[")) {
            advance();
            expect_punct("]");
            lit.kind = Literal::Kind::EmptyList;
            return lit;
        }
        fail("unexpected " + describe(peek()) + " in literal",
             {"string", "int", "float", "true", "false", "None", "[]"});
    }

    static std::string trimmed(const std::string& s) {
        std::size_t b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return "";
        std::size_t e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    const std::vector<Token>& toks_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a token stream into a program. The first error aborts parsing.
inline SourceProgram parse_program(const std::vector<Token>& tokens) {
    return detail::Parser(tokens).run();
}

inline SourceProgram parse_source(std::string_view source) {
    return parse_program(tokenize(source));
}

}  // namespace mtsem
