#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "mtsem/ast.hpp"
#include "mtsem/diagnostics.hpp"

namespace mtsem {

using SymbolId = std::int32_t;
inline constexpr SymbolId kModuleRoot = 0;

enum class SymbolKind {
    Module,
    Class,
    Enum,
    EnumVariant,
    Function,
    Method,
    Param,
    Attribute,
    Global,
};

inline const char* symbol_kind_name(SymbolKind kind) {
    switch (kind) {
        case SymbolKind::Module: return "module";
        case SymbolKind::Class: return "class";
        case SymbolKind::Enum: return "enum";
        case SymbolKind::EnumVariant: return "enum-variant";
        case SymbolKind::Function: return "function";
        case SymbolKind::Method: return "method";
        case SymbolKind::Param: return "param";
        case SymbolKind::Attribute: return "attribute";
        case SymbolKind::Global: return "global";
    }
    return "?";
}

/// One record per named entity. The same shape serves as the plain symbol
/// table (all semtext fields empty) and as the semtext-enriched table.
struct SemTableEntry {
    SymbolId id = kModuleRoot;
    std::string name;
    std::string path;  // canonical dotted path; empty for the module root
    SymbolKind kind = SymbolKind::Module;
    std::optional<TypeExpr> type;  // params, attributes and globals only
    SymbolId scope = kModuleRoot;
    std::vector<SymbolId> members;  // declaration order
    std::optional<std::string> semtext;
    std::optional<std::string> docstring;
    std::optional<Literal> default_value;  // attributes and params
    Span span;
    Span semtext_span;  // where the sem was declared; diagnostics only

    friend bool operator==(const SemTableEntry& a, const SemTableEntry& b) {
        return a.id == b.id && a.name == b.name && a.path == b.path && a.kind == b.kind &&
               a.type == b.type && a.scope == b.scope && a.members == b.members &&
               a.semtext == b.semtext && a.docstring == b.docstring &&
               a.default_value == b.default_value;
    }
};

struct SemTable {
    std::vector<SemTableEntry> entries;  // entries[0] is the module root scope
    std::unordered_map<std::string, SymbolId> by_path;

    SemTable() {
        entries.push_back(SemTableEntry{});
    }

    const SemTableEntry& root() const { return entries[kModuleRoot]; }
    const SemTableEntry& at(SymbolId id) const { return entries[static_cast<std::size_t>(id)]; }
    SemTableEntry& at(SymbolId id) { return entries[static_cast<std::size_t>(id)]; }

    const SemTableEntry* find_path(const std::string& path) const {
        auto it = by_path.find(path);
        return it == by_path.end() ? nullptr : &at(it->second);
    }

    /// Named entities, excluding the module root scope.
    std::size_t size() const { return entries.size() - 1; }

    const SemTableEntry* member_of(SymbolId scope, const std::string& name) const {
        for (SymbolId id : at(scope).members) {
            if (at(id).name == name) return &at(id);
        }
        return nullptr;
    }

    friend bool operator==(const SemTable& a, const SemTable& b) {
        return a.entries == b.entries;
    }
};

namespace detail {

class SymbolTableBuilder {
  public:
    explicit SymbolTableBuilder(const SourceProgram& program) : program_(program) {}

    SemTable run() {
        for (const Decl& decl : program_.decls) {
            std::visit([this](const auto& node) { declare(node); }, decl);
        }
        validate_signatures();
        return std::move(table_);
    }

  private:
    [[noreturn]] void fail(std::string message, Span span, std::optional<Span> related = {}) {
        Diagnostic d;
        d.kind = DiagKind::Symbol;
        d.message = std::move(message);
        d.span = span;
        d.related = related;
        throw CompileError(std::move(d));
    }

    SymbolId add(SymbolKind kind, const std::string& name, SymbolId scope, Span span) {
        if (const SemTableEntry* dup = table_.member_of(scope, name)) {
            fail("duplicate declaration of '" + name + "' in " +
                     (scope == kModuleRoot ? "module scope" : "'" + table_.at(scope).path + "'"),
                 span, dup->span);
        }
        SemTableEntry entry;
        entry.id = static_cast<SymbolId>(table_.entries.size());
        entry.name = name;
        entry.path = scope == kModuleRoot ? name : table_.at(scope).path + "." + name;
        entry.kind = kind;
        entry.scope = scope;
        entry.span = span;
        table_.at(scope).members.push_back(entry.id);
        table_.by_path.emplace(entry.path, entry.id);
        table_.entries.push_back(std::move(entry));
        return table_.entries.back().id;
    }

    void declare(const ClassDecl& cls) {
        check_type_name(cls.name, cls.span);
        SymbolId id = add(SymbolKind::Class, cls.name, kModuleRoot, cls.span);
        table_.at(id).docstring = cls.docstring;
        for (const AttrDecl& attr : cls.attrs) {
            SymbolId aid = add(SymbolKind::Attribute, attr.name, id, attr.span);
            table_.at(aid).type = attr.type;
            table_.at(aid).default_value = attr.default_value;
        }
        for (const FuncDecl& fn : cls.methods) declare_func(fn, id, SymbolKind::Method);
    }

    void declare(const EnumDecl& en) {
        check_type_name(en.name, en.span);
        SymbolId id = add(SymbolKind::Enum, en.name, kModuleRoot, en.span);
        table_.at(id).docstring = en.docstring;
        for (const EnumVariantDecl& variant : en.variants) {
            add(SymbolKind::EnumVariant, variant.name, id, variant.span);
        }
    }

    void declare(const FuncDecl& fn) { declare_func(fn, kModuleRoot, SymbolKind::Function); }

    void declare(const GlobalDecl& g) {
        SymbolId id = add(SymbolKind::Global, g.name, kModuleRoot, g.span);
        table_.at(id).type = g.type;
    }

    void declare(const SemDecl&) {}  // handled by the sem build pass

    void declare_func(const FuncDecl& fn, SymbolId scope, SymbolKind kind) {
        SymbolId id = add(kind, fn.name, scope, fn.span);
        table_.at(id).docstring = fn.docstring;
        for (const Param& p : fn.params) {
            SymbolId pid = add(SymbolKind::Param, p.name, id, p.span);
            table_.at(pid).type = p.type;
            table_.at(pid).default_value = p.default_value;
        }
    }

    void check_type_name(const std::string& name, Span span) {
        if (is_reserved_type_name(name)) {
            fail("'" + name + "' is a reserved type name", span);
        }
    }

    // Second pass: every type mentioned in a signature must resolve, and
    // default literals must fit their declared types.
    void validate_signatures() {
        for (const SemTableEntry& entry : table_.entries) {
            if (entry.type) check_type(*entry.type, entry.span);
            if (entry.default_value && entry.type)
                check_default(*entry.default_value, *entry.type, entry);
        }
        for (const Decl& decl : program_.decls) {
            if (const auto* fn = std::get_if<FuncDecl>(&decl)) {
                check_type(fn->return_type, fn->span);
            } else if (const auto* cls = std::get_if<ClassDecl>(&decl)) {
                for (const FuncDecl& m : cls->methods) check_type(m.return_type, m.span);
            }
        }
    }

    void check_type(const TypeExpr& type, Span span) {
        if (type.is_generic()) {
            if (type.name == "dict") {
                const TypeExpr& key = type.args[0];
                if (!(key.args.empty() && key.name == "str"))
                    fail("dict key type must be str, got '" + key.to_string() + "'", span);
            }
            for (const TypeExpr& arg : type.args) check_type(arg, span);
            return;
        }
        if (type.is_primitive()) return;
        const SemTableEntry* e = table_.find_path(type.name);
        if (!e || (e->kind != SymbolKind::Class && e->kind != SymbolKind::Enum)) {
            fail("undeclared type '" + type.name + "'", span);
        }
    }

    void check_default(const Literal& lit, const TypeExpr& type, const SemTableEntry& entry) {
        bool ok = false;
        switch (lit.kind) {
            case Literal::Kind::Str: ok = type == TypeExpr{"str", {}}; break;
            case Literal::Kind::Int:
                ok = type == TypeExpr{"int", {}} || type == TypeExpr{"float", {}};
                break;
            case Literal::Kind::Float: ok = type == TypeExpr{"float", {}}; break;
            case Literal::Kind::True:
            case Literal::Kind::False: ok = type == TypeExpr{"bool", {}}; break;
            case Literal::Kind::None: ok = type.name == "Optional" && type.is_generic(); break;
            case Literal::Kind::EmptyList: ok = type.name == "list" && type.is_generic(); break;
        }
        if (!ok) {
            fail("default value for '" + entry.path + "' does not match its type '" +
                     type.to_string() + "'",
                 entry.span);
        }
    }

    const SourceProgram& program_;
    SemTable table_;
};

}  // namespace detail

/// Builds the pre-pass symbol table: one entry per named entity, no semtexts.
inline SemTable build_symbol_table(const SourceProgram& program) {
    return detail::SymbolTableBuilder(program).run();
}

/// Resolves a dotted path. The first segment is searched in the given scope,
/// then in enclosing scopes outward to the module root; remaining segments
/// descend through members (attributes, methods, params, enum variants).
inline const SemTableEntry& lookup(const std::vector<std::string>& target_path,
                                   SymbolId scope,
                                   const SemTable& table,
                                   Span at = {}) {
    auto unresolved = [&](std::size_t segment, SymbolId searched) -> CompileError {
        Diagnostic d;
        d.kind = DiagKind::Symbol;
        std::string candidates;
        for (SymbolId id : table.at(searched).members) {
            if (!candidates.empty()) candidates += ", ";
            candidates += table.at(id).name;
        }
        d.message = "cannot resolve '" + target_path[segment] + "' (segment " +
                    std::to_string(segment + 1) + " of ";
        for (std::size_t i = 0; i < target_path.size(); ++i) {
            if (i > 0) d.message += ".";
            d.message += target_path[i];
        }
        d.message += ")";
        if (!candidates.empty()) d.message += "; candidates: " + candidates;
        d.span = at;
        return CompileError(std::move(d));
    };

    const SemTableEntry* current = nullptr;
    SymbolId search = scope;
    while (true) {
        current = table.member_of(search, target_path[0]);
        if (current) break;
        if (search == kModuleRoot) throw unresolved(0, kModuleRoot);
        search = table.at(search).scope;
    }
    for (std::size_t i = 1; i < target_path.size(); ++i) {
        const SemTableEntry* next = table.member_of(current->id, target_path[i]);
        if (!next) throw unresolved(i, current->id);
        current = next;
    }
    return *current;
}

/// SemTable build pass: walks the AST in source order and attaches each sem
/// declaration's text to the resolved entry. Duplicate targets are an error.
inline SemTable build_semtable(const SourceProgram& program, const SemTable& symtable) {
    SemTable result = symtable;
    for (const Decl& decl : program.decls) {
        const auto* sem = std::get_if<SemDecl>(&decl);
        if (!sem) continue;
        const SemTableEntry& target = lookup(sem->target_path, kModuleRoot, result, sem->span);
        SemTableEntry& entry = result.at(target.id);
        if (entry.semtext) {
            Diagnostic d;
            d.kind = DiagKind::SemText;
            d.message = "duplicate sem for '" + entry.path + "'";
            d.span = sem->span;
            d.related = entry.semtext_span;
            throw CompileError(std::move(d));
        }
        entry.semtext = sem->text;
        entry.semtext_span = sem->span;
    }
    return result;
}

}  // namespace mtsem
