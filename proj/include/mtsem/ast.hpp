#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mtsem/diagnostics.hpp"

namespace mtsem {

/// Shortest decimal form that parses back to exactly the same double.
inline std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

/// A named type or a builtin generic instantiation (list, dict, Optional).
struct TypeExpr {
    std::string name;
    std::vector<TypeExpr> args;

    bool is_generic() const { return !args.empty(); }

    bool is_primitive() const {
        return args.empty() &&
               (name == "str" || name == "int" || name == "float" || name == "bool");
    }

    std::string to_string() const {
        if (args.empty()) return name;
        std::string out = name + "[";
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (i > 0) out += ", ";
            out += args[i].to_string();
        }
        out += "]";
        return out;
    }

    friend bool operator==(const TypeExpr& a, const TypeExpr& b) {
        return a.name == b.name && a.args == b.args;
    }
};

inline bool is_builtin_generic(const std::string& name, std::size_t& arity) {
    if (name == "list") { arity = 1; return true; }
    if (name == "dict") { arity = 2; return true; }
    if (name == "Optional") { arity = 1; return true; }
    return false;
}

inline bool is_reserved_type_name(const std::string& name) {
    std::size_t arity = 0;
    return TypeExpr{name, {}}.is_primitive() || is_builtin_generic(name, arity);
}

/// Literal defaults: strings, numbers, true/false, None, or the empty list.
struct Literal {
    enum class Kind { Str, Int, Float, True, False, None, EmptyList };
    Kind kind = Kind::None;
    std::string str;      // Str payload
    long long int_val = 0;
    double float_val = 0.0;

    friend bool operator==(const Literal& a, const Literal& b) {
        if (a.kind != b.kind) return false;
        switch (a.kind) {
            case Kind::Str: return a.str == b.str;
            case Kind::Int: return a.int_val == b.int_val;
            case Kind::Float: return a.float_val == b.float_val;
            default: return true;
        }
    }
};

struct Param {
    std::string name;
    TypeExpr type;
    std::optional<Literal> default_value;
    Span span;

    friend bool operator==(const Param& a, const Param& b) {
        return a.name == b.name && a.type == b.type && a.default_value == b.default_value;
    }
};

struct FuncDecl {
    std::string name;
    std::optional<std::string> docstring;
    std::vector<Param> params;
    TypeExpr return_type;
    bool is_by_llm = false;  // otherwise an opaque body that is never interpreted
    Span span;

    friend bool operator==(const FuncDecl& a, const FuncDecl& b) {
        return a.name == b.name && a.docstring == b.docstring && a.params == b.params &&
               a.return_type == b.return_type && a.is_by_llm == b.is_by_llm;
    }
};

struct AttrDecl {
    std::string name;
    TypeExpr type;
    std::optional<Literal> default_value;
    Span span;

    friend bool operator==(const AttrDecl& a, const AttrDecl& b) {
        return a.name == b.name && a.type == b.type && a.default_value == b.default_value;
    }
};

struct ClassDecl {
    std::string name;
    std::optional<std::string> docstring;
    std::vector<AttrDecl> attrs;
    std::vector<FuncDecl> methods;
    Span span;

    friend bool operator==(const ClassDecl& a, const ClassDecl& b) {
        return a.name == b.name && a.docstring == b.docstring && a.attrs == b.attrs &&
               a.methods == b.methods;
    }
};

struct EnumVariantDecl {
    std::string name;
    Span span;

    friend bool operator==(const EnumVariantDecl& a, const EnumVariantDecl& b) {
        return a.name == b.name;
    }
};

struct EnumDecl {
    std::string name;
    std::optional<std::string> docstring;
    std::vector<EnumVariantDecl> variants;
    Span span;

    friend bool operator==(const EnumDecl& a, const EnumDecl& b) {
        return a.name == b.name && a.docstring == b.docstring && a.variants == b.variants;
    }
};

struct SemDecl {
    std::vector<std::string> target_path;  // >= 1 segment
    std::string text;                      // non-empty after trimming
    Span span;

    friend bool operator==(const SemDecl& a, const SemDecl& b) {
        return a.target_path == b.target_path && a.text == b.text;
    }
};

struct GlobalDecl {
    std::string name;
    TypeExpr type;
    Span span;

    friend bool operator==(const GlobalDecl& a, const GlobalDecl& b) {
        return a.name == b.name && a.type == b.type;
    }
};

using Decl = std::variant<ClassDecl, EnumDecl, FuncDecl, SemDecl, GlobalDecl>;

struct SourceProgram {
    std::vector<Decl> decls;

    friend bool operator==(const SourceProgram& a, const SourceProgram& b) {
        return a.decls == b.decls;
    }
};

// ---------------------------------------------------------------------------
// Pretty printer. parse(pretty_print(ast)) reproduces a structurally equal AST.
// ---------------------------------------------------------------------------

inline std::string escape_mtl_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += "\"";
    return out;
}

inline std::string literal_to_source(const Literal& lit) {
    switch (lit.kind) {
        case Literal::Kind::Str: return escape_mtl_string(lit.str);
        case Literal::Kind::Int: return std::to_string(lit.int_val);
        case Literal::Kind::Float: {
            std::string s = format_double(lit.float_val);
            if (s.find('.') == std::string::npos && s.find('e') == std::string::npos)
                s += ".0";  // keep the token a float literal
            return s;
        }
        case Literal::Kind::True: return "true";
        case Literal::Kind::False: return "false";
        case Literal::Kind::None: return "None";
        case Literal::Kind::EmptyList: return "[]";
    }
    return "None";
}

namespace detail {

inline void print_func(const FuncDecl& fn, const std::string& indent, std::string& out) {
    out += indent + "def " + fn.name + "(";
    for (std::size_t i = 0; i < fn.params.size(); ++i) {
        const Param& p = fn.params[i];
        if (i > 0) out += ", ";
        out += p.name + ": " + p.type.to_string();
        if (p.default_value) out += " = " + literal_to_source(*p.default_value);
    }
    out += ") -> " + fn.return_type.to_string();
    if (fn.is_by_llm) {
        out += " by llm";
        if (fn.docstring) out += " " + escape_mtl_string(*fn.docstring);
        out += ";\n";
    } else {
        out += " { }\n";
    }
}

}  // namespace detail

inline std::string pretty_print(const SourceProgram& program) {
    std::string out;
    for (const Decl& decl : program.decls) {
        if (!out.empty()) out += "\n";
        if (const auto* cls = std::get_if<ClassDecl>(&decl)) {
            out += "class " + cls->name + " {\n";
            if (cls->docstring) out += "  " + escape_mtl_string(*cls->docstring) + "\n";
            for (const AttrDecl& attr : cls->attrs) {
                out += "  " + attr.name + ": " + attr.type.to_string();
                if (attr.default_value) out += " = " + literal_to_source(*attr.default_value);
                out += ";\n";
            }
            for (const FuncDecl& fn : cls->methods) detail::print_func(fn, "  ", out);
            out += "}\n";
        } else if (const auto* en = std::get_if<EnumDecl>(&decl)) {
            out += "enum " + en->name + " {\n";
            if (en->docstring) out += "  " + escape_mtl_string(*en->docstring) + "\n";
            out += "  ";
            for (std::size_t i = 0; i < en->variants.size(); ++i) {
                if (i > 0) out += ", ";
                out += en->variants[i].name;
            }
            out += "\n}\n";
        } else if (const auto* fn = std::get_if<FuncDecl>(&decl)) {
            detail::print_func(*fn, "", out);
        } else if (const auto* sem = std::get_if<SemDecl>(&decl)) {
            out += "sem ";
            for (std::size_t i = 0; i < sem->target_path.size(); ++i) {
                if (i > 0) out += ".";
                out += sem->target_path[i];
            }
            out += " = " + escape_mtl_string(sem->text) + ";\n";
        } else if (const auto* g = std::get_if<GlobalDecl>(&decl)) {
            out += "let " + g->name + ": " + g->type.to_string() + ";\n";
        }
    }
    return out;
}

}  // namespace mtsem
