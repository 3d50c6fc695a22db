#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mtsem/mtir.hpp"
#include "mtsem/values.hpp"

namespace mtsem {

inline constexpr const char* kSystemPromptLines[3] = {
    "This is an operation you must perform and return the output values.",
    "Follow the provided Input, Output, and Type information.",
    "Do not explain. Do not add commentary. Return only the output value(s).",
};

inline constexpr const char* kClosingLine =
    "Generate and return the output result(s) only, adhering to the provided Type in the "
    "following format";

struct BoundArguments {
    std::vector<std::pair<std::string, RuntimeValue>> values;  // parameter order
};

/// Binds externally supplied argument values to the call-site's parameters.
/// Missing parameters with declared defaults are filled from the defaults;
/// every value is checked against its declared type.
inline BoundArguments bind_arguments(const MtIrStar& ir,
                                     const std::map<std::string, RuntimeValue>& args) {
    TypeCatalog catalog = TypeCatalog::from_mtir(ir);
    BoundArguments bound;
    for (const MtirInput& input : ir.inputs) {
        auto it = args.find(input.name);
        if (it != args.end()) {
            bound.values.emplace_back(input.name,
                                      type_check(it->second, input.type, catalog, input.name));
        } else if (input.default_value) {
            bound.values.emplace_back(input.name,
                                      type_check(literal_to_value(*input.default_value),
                                                 input.type, catalog, input.name));
        } else {
            throw TypeCheckError(input.name, "missing required argument");
        }
    }
    for (const auto& [name, value] : args) {
        bool known = false;
        for (const MtirInput& input : ir.inputs) known |= input.name == name;
        if (!known) throw TypeCheckError(name, "'" + ir.name + "' has no parameter '" + name + "'");
    }
    return bound;
}

/// The rendered prompt, kept as ordered named sections. render() is a pure
/// function of the document; section order is fixed.
struct PromptDocument {
    std::vector<std::string> system_prompt;
    std::vector<std::string> inputs_information;
    std::vector<std::string> output_information;
    std::vector<std::vector<std::string>> type_explanations;  // one block per hierarchy entry
    std::vector<std::string> action;
    std::vector<std::string> output_marker;

    std::string render() const {
        std::vector<std::string> lines;
        lines.push_back("[System Prompt]");
        lines.insert(lines.end(), system_prompt.begin(), system_prompt.end());
        lines.push_back("");
        lines.push_back("[Inputs_Information]");
        lines.insert(lines.end(), inputs_information.begin(), inputs_information.end());
        lines.push_back("");
        lines.push_back("[Output_Information]");
        lines.insert(lines.end(), output_information.begin(), output_information.end());
        lines.push_back("");
        lines.push_back("[Type_Explanations]");
        for (const auto& block : type_explanations) {
            lines.insert(lines.end(), block.begin(), block.end());
            lines.push_back("");
        }
        if (type_explanations.empty()) lines.push_back("");
        lines.push_back("[Action]");
        lines.insert(lines.end(), action.begin(), action.end());
        lines.push_back("");
        lines.push_back(kClosingLine);
        lines.push_back("");
        lines.insert(lines.end(), output_marker.begin(), output_marker.end());

        std::string out;
        for (const std::string& line : lines) {
            out += line;
            out += '\n';
        }
        return out;
    }
};

struct PromptOptions {
    bool include_defaults = false;
};

namespace detail {

/// Semtexts ride on the same line as their entity, as a trailing suffix.
/// Newlines are escaped so multi-line texts (docstring mode) stay one block.
inline std::string semtext_suffix(const std::optional<std::string>& semtext) {
    if (!semtext) return "";
    std::string out = " -- \"";
    for (char c : *semtext) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            default: out += c;
        }
    }
    out += "\"";
    return out;
}

}  // namespace detail

/// Assembles the final prompt from the enriched IR and the bound arguments.
/// Every semtext is placed on the line of its own entity: parameters on their
/// input lines, types on their hierarchy block header, attributes and enum
/// variants on their member lines, the function on the action line. The
/// output line only carries a semtext when its type has no hierarchy block,
/// so no text ever appears twice.
inline PromptDocument assemble_prompt(const MtIrStar& ir,
                                      const BoundArguments& bound,
                                      const PromptOptions& options = {}) {
    PromptDocument doc;
    doc.system_prompt = {kSystemPromptLines[0], kSystemPromptLines[1], kSystemPromptLines[2]};

    for (std::size_t i = 0; i < ir.inputs.size(); ++i) {
        const MtirInput& input = ir.inputs[i];
        doc.inputs_information.push_back(
            "(" + input.name + ") (" + input.type.to_string() + ") = " +
            render_value(bound.values[i].second) + detail::semtext_suffix(input.semtext));
    }

    std::string output_line = "(" + ir.output.to_string() + ")";
    if (ir.output_semtext && ir.find_entry(ir.output) == nullptr)
        output_line += detail::semtext_suffix(ir.output_semtext);
    doc.output_information.push_back(output_line);

    for (const HierarchyEntry& entry : ir.hierarchy) {
        if (entry.kind == HierarchyKind::Generic) continue;  // self-describing in type syntax
        std::vector<std::string> block;
        if (entry.kind == HierarchyKind::Class) {
            block.push_back("(" + entry.key.name + ") (obj) eg: " + entry.key.name + "(" +
                            detail::semtext_suffix(entry.semtext));
            for (std::size_t i = 0; i < entry.members.size(); ++i) {
                const HierarchyMember& member = entry.members[i];
                std::string line = "  " + member.name + " = " + member.type->to_string();
                if (options.include_defaults && member.default_value)
                    line += " (default " + render_value(literal_to_value(*member.default_value)) + ")";
                if (i + 1 < entry.members.size()) line += ",";
                block.push_back(line + detail::semtext_suffix(member.semtext));
            }
            block.push_back(")");
        } else {
            block.push_back("(" + entry.key.name + ") (enum) variants:" +
                            detail::semtext_suffix(entry.semtext));
            for (std::size_t i = 0; i < entry.members.size(); ++i) {
                std::string line = "  " + entry.members[i].name;
                if (i + 1 < entry.members.size()) line += ",";
                block.push_back(line + detail::semtext_suffix(entry.members[i].semtext));
            }
        }
        doc.type_explanations.push_back(std::move(block));
    }

    doc.action.push_back(ir.name + detail::semtext_suffix(ir.semtext));
    doc.output_marker = {"[Output]", "<result>"};
    return doc;
}

}  // namespace mtsem
