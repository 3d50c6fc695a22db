#pragma once

#include <deque>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "mtsem/ast.hpp"
#include "mtsem/semtable.hpp"

namespace mtsem {

enum class HierarchyKind { Class, Enum, Generic };

inline const char* hierarchy_kind_name(HierarchyKind kind) {
    switch (kind) {
        case HierarchyKind::Class: return "obj";
        case HierarchyKind::Enum: return "enum";
        case HierarchyKind::Generic: return "generic";
    }
    return "?";
}

/// One constituent of a hierarchy entry: a class attribute (name + type),
/// an enum variant (name only), or a generic type parameter (type only).
struct HierarchyMember {
    std::string name;
    std::optional<TypeExpr> type;
    std::optional<Literal> default_value;
    std::optional<std::string> semtext;

    friend bool operator==(const HierarchyMember& a, const HierarchyMember& b) {
        return a.name == b.name && a.type == b.type && a.default_value == b.default_value &&
               a.semtext == b.semtext;
    }
};

struct HierarchyEntry {
    TypeExpr key;
    HierarchyKind kind = HierarchyKind::Class;
    std::optional<std::string> semtext;
    std::vector<HierarchyMember> members;

    friend bool operator==(const HierarchyEntry& a, const HierarchyEntry& b) {
        return a.key == b.key && a.kind == b.kind && a.semtext == b.semtext &&
               a.members == b.members;
    }
};

struct MtirInput {
    std::string name;
    TypeExpr type;
    std::optional<Literal> default_value;
    std::optional<std::string> semtext;

    friend bool operator==(const MtirInput& a, const MtirInput& b) {
        return a.name == b.name && a.type == b.type && a.default_value == b.default_value &&
               a.semtext == b.semtext;
    }
};

/// Call-site IR: function name, typed inputs and output, and the hierarchy
/// map covering every non-primitive type reachable from the signature.
/// With all semtext fields empty this is the base IR; the enrichment pass
/// fills them in to produce the starred form.
struct MtIr {
    std::string name;
    std::string symbol_path;  // dotted path of the call-site (for methods)
    std::optional<std::string> semtext;
    std::vector<MtirInput> inputs;
    TypeExpr output;
    std::optional<std::string> output_semtext;
    std::vector<HierarchyEntry> hierarchy;  // first-visit worklist order

    const HierarchyEntry* find_entry(const TypeExpr& type) const {
        for (const HierarchyEntry& e : hierarchy) {
            if (e.key == type) return &e;
        }
        return nullptr;
    }

    friend bool operator==(const MtIr& a, const MtIr& b) {
        return a.name == b.name && a.symbol_path == b.symbol_path && a.semtext == b.semtext &&
               a.inputs == b.inputs && a.output == b.output &&
               a.output_semtext == b.output_semtext && a.hierarchy == b.hierarchy;
    }
};

using MtIrStar = MtIr;

enum class SemanticsMode { Sem, Docstring, Both };

/// Builds the base IR for a by-llm call-site. The worklist is a FIFO queue
/// seeded with the input types in parameter order, then the output type;
/// a visited set keyed by the printed type guarantees termination on cycles.
inline MtIr build_base_mtir(const FuncDecl& callsite,
                            const std::string& symbol_path,
                            const SemTable& table) {
    MtIr ir;
    ir.name = callsite.name;
    ir.symbol_path = symbol_path;
    ir.output = callsite.return_type;

    std::deque<TypeExpr> worklist;
    for (const Param& p : callsite.params) {
        ir.inputs.push_back(MtirInput{p.name, p.type, p.default_value, {}});
        worklist.push_back(p.type);
    }
    worklist.push_back(callsite.return_type);

    std::unordered_set<std::string> visited;
    while (!worklist.empty()) {
        TypeExpr type = worklist.front();
        worklist.pop_front();
        if (type.is_primitive()) continue;
        if (!visited.insert(type.to_string()).second) continue;

        HierarchyEntry entry;
        entry.key = type;
        if (type.is_generic()) {
            entry.kind = HierarchyKind::Generic;
            for (const TypeExpr& arg : type.args) {
                entry.members.push_back(HierarchyMember{"", arg, {}, {}});
                worklist.push_back(arg);
            }
        } else {
            const SemTableEntry* decl = table.find_path(type.name);
            if (!decl || (decl->kind != SymbolKind::Class && decl->kind != SymbolKind::Enum)) {
                Diagnostic d;
                d.kind = DiagKind::Symbol;
                d.message = "signature of '" + symbol_path + "' references unresolvable type '" +
                            type.name + "'";
                d.span = callsite.span;
                throw CompileError(std::move(d));
            }
            if (decl->kind == SymbolKind::Class) {
                entry.kind = HierarchyKind::Class;
                for (SymbolId mid : decl->members) {
                    const SemTableEntry& member = table.at(mid);
                    if (member.kind != SymbolKind::Attribute) continue;
                    entry.members.push_back(
                        HierarchyMember{member.name, member.type, member.default_value, {}});
                    worklist.push_back(*member.type);
                }
            } else {
                entry.kind = HierarchyKind::Enum;
                for (SymbolId mid : decl->members) {
                    entry.members.push_back(HierarchyMember{table.at(mid).name, {}, {}, {}});
                }
            }
        }
        ir.hierarchy.push_back(std::move(entry));
    }
    return ir;
}

namespace detail {

inline std::optional<std::string> effective_semtext(const SemTableEntry* entry,
                                                    SemanticsMode mode) {
    if (!entry) return std::nullopt;
    switch (mode) {
        case SemanticsMode::Sem: return entry->semtext;
        case SemanticsMode::Docstring: return entry->docstring;
        case SemanticsMode::Both: return entry->semtext ? entry->semtext : entry->docstring;
    }
    return std::nullopt;
}

inline std::optional<std::string> semtext_for_type(const TypeExpr& type,
                                                   const SemTable& table,
                                                   SemanticsMode mode) {
    if (type.is_generic() || type.is_primitive()) return std::nullopt;
    return effective_semtext(table.find_path(type.name), mode);
}

}  // namespace detail

/// Enrichment pass: pairs every entity slot (function name, params, output,
/// hierarchy keys, attributes and variants) with its semtext from the table,
/// or leaves it empty. In docstring mode docstrings stand in for semtexts;
/// in both mode an explicit sem wins over a docstring per entity.
inline MtIrStar enrich_mtir(const MtIr& base,
                            const SemTable& table,
                            SemanticsMode mode = SemanticsMode::Sem) {
    MtIrStar star = base;
    star.semtext = detail::effective_semtext(table.find_path(base.symbol_path), mode);
    for (MtirInput& input : star.inputs) {
        input.semtext =
            detail::effective_semtext(table.find_path(base.symbol_path + "." + input.name), mode);
    }
    star.output_semtext = detail::semtext_for_type(base.output, table, mode);
    for (HierarchyEntry& entry : star.hierarchy) {
        entry.semtext = detail::semtext_for_type(entry.key, table, mode);
        if (entry.kind == HierarchyKind::Generic) continue;
        for (HierarchyMember& member : entry.members) {
            member.semtext = detail::effective_semtext(
                table.find_path(entry.key.name + "." + member.name), mode);
        }
    }
    return star;
}

/// Drops every semtext slot, recovering the base IR.
inline MtIr project_base(const MtIrStar& star) {
    MtIr base = star;
    base.semtext.reset();
    base.output_semtext.reset();
    for (MtirInput& input : base.inputs) input.semtext.reset();
    for (HierarchyEntry& entry : base.hierarchy) {
        entry.semtext.reset();
        for (HierarchyMember& member : entry.members) member.semtext.reset();
    }
    return base;
}

/// Canonical, byte-deterministic JSON rendering of a call-site IR.
inline std::string serialize_mtir(const MtIrStar& ir) {
    nlohmann::ordered_json doc;
    doc["name"] = ir.name;
    if (ir.semtext) doc["semtext"] = *ir.semtext;
    doc["inputs"] = nlohmann::ordered_json::array();
    for (const MtirInput& input : ir.inputs) {
        nlohmann::ordered_json j;
        j["name"] = input.name;
        j["type"] = input.type.to_string();
        if (input.semtext) j["semtext"] = *input.semtext;
        doc["inputs"].push_back(std::move(j));
    }
    doc["output"]["type"] = ir.output.to_string();
    if (ir.output_semtext) doc["output"]["semtext"] = *ir.output_semtext;
    doc["hierarchy"] = nlohmann::ordered_json::array();
    for (const HierarchyEntry& entry : ir.hierarchy) {
        nlohmann::ordered_json j;
        j["type"] = entry.key.to_string();
        j["kind"] = hierarchy_kind_name(entry.kind);
        if (entry.semtext) j["semtext"] = *entry.semtext;
        j["members"] = nlohmann::ordered_json::array();
        for (const HierarchyMember& member : entry.members) {
            nlohmann::ordered_json m;
            if (!member.name.empty()) m["name"] = member.name;
            if (member.type) m["type"] = member.type->to_string();
            if (member.semtext) m["semtext"] = *member.semtext;
            j["members"].push_back(std::move(m));
        }
        doc["hierarchy"].push_back(std::move(j));
    }
    return doc.dump();
}

}  // namespace mtsem
