#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mtsem/backend.hpp"
#include "mtsem/mtir.hpp"
#include "mtsem/parser.hpp"
#include "mtsem/prompt.hpp"
#include "mtsem/response.hpp"
#include "mtsem/semtable.hpp"
#include "mtsem/values.hpp"

namespace mtsem {

struct CompiledProgram {
    SourceProgram program;
    SemTable table;  // semtext-enriched
};

/// Front end + symbol table + sem build pass for one compilation unit.
inline CompiledProgram compile(std::string_view source) {
    CompiledProgram unit;
    unit.program = parse_source(source);
    unit.table = build_semtable(unit.program, build_symbol_table(unit.program));
    return unit;
}

struct Callsite {
    const FuncDecl* decl = nullptr;
    std::string symbol_path;
};

/// Finds a by-llm function or method. Accepts the full dotted path; a plain
/// name also resolves if it names exactly one by-llm call-site.
inline Callsite find_callsite(const CompiledProgram& unit, const std::string& name) {
    std::vector<Callsite> matches;
    auto consider = [&](const FuncDecl& fn, const std::string& path) {
        if (!fn.is_by_llm) return;
        if (path == name || (name.find('.') == std::string::npos && fn.name == name))
            matches.push_back(Callsite{&fn, path});
    };
    for (const Decl& decl : unit.program.decls) {
        if (const auto* fn = std::get_if<FuncDecl>(&decl)) {
            consider(*fn, fn->name);
        } else if (const auto* cls = std::get_if<ClassDecl>(&decl)) {
            for (const FuncDecl& m : cls->methods) consider(m, cls->name + "." + m.name);
        }
    }
    if (matches.empty())
        throw std::runtime_error("no by-llm function named '" + name + "'");
    if (matches.size() > 1) {
        std::string options;
        for (const Callsite& c : matches) {
            if (!options.empty()) options += ", ";
            options += c.symbol_path;
        }
        throw std::runtime_error("ambiguous function name '" + name + "' (candidates: " +
                                 options + ")");
    }
    return matches.front();
}

inline MtIrStar build_callsite_ir(const CompiledProgram& unit,
                                  const std::string& name,
                                  SemanticsMode mode = SemanticsMode::Sem) {
    Callsite callsite = find_callsite(unit, name);
    return enrich_mtir(build_base_mtir(*callsite.decl, callsite.symbol_path, unit.table),
                       unit.table, mode);
}

struct InvokeOptions {
    SemanticsMode mode = SemanticsMode::Sem;
    PromptOptions prompt;
    int retries = 2;  // extra attempts after a parse or type failure
    std::string model = "gpt-4o";
    double temperature = 0.0;
    int max_tokens = 1024;
    std::chrono::milliseconds timeout = std::chrono::seconds(30);
};

struct InvokeOutcome {
    RuntimeValue value;
    std::string prompt;  // exactly what the backend received on the first try
    int attempts = 1;
};

/// Full runtime path for one call: assemble the prompt, ask the backend, and
/// parse the typed reply. On a parse or type failure the backend is re-asked
/// up to `retries` times with a one-line corrective suffix naming the error.
inline InvokeOutcome invoke_callsite(const CompiledProgram& unit,
                                     const std::string& name,
                                     const std::map<std::string, RuntimeValue>& args,
                                     Backend& backend,
                                     const InvokeOptions& options = {}) {
    MtIrStar ir = build_callsite_ir(unit, name, options.mode);
    BoundArguments bound = bind_arguments(ir, args);
    const std::string prompt = assemble_prompt(ir, bound, options.prompt).render();

    CompletionRequest request;
    request.model = options.model;
    request.temperature = options.temperature;
    request.max_tokens = options.max_tokens;
    request.timeout = options.timeout;

    std::string current = prompt;
    int attempt = 0;
    while (true) {
        ++attempt;
        request.prompt = current;
        CompletionResult completion = backend.complete(request);
        try {
            InvokeOutcome outcome;
            outcome.value = parse_response(completion.text, ir.output, ir);
            outcome.prompt = prompt;
            outcome.attempts = attempt;
            return outcome;
        } catch (const ResponseError& e) {
            if (attempt > options.retries) throw;
            const char* kind = e.kind() == ResponseError::Kind::Parse ? "parsed" : "typed";
            current = prompt + "\nYour previous response could not be " + std::string(kind) +
                      " (" + e.what() + "). Return only the output value(s).";
        }
    }
}

inline std::map<std::string, RuntimeValue> decode_argument_file(const std::string& json_text) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw TypeCheckError("", std::string("malformed argument JSON: ") + e.what());
    }
    if (!doc.is_object()) throw TypeCheckError("", "argument file must be a JSON object");
    std::map<std::string, RuntimeValue> args;
    try {
        for (const auto& [key, value] : doc.items()) args.emplace(key, value_from_json(value));
    } catch (const nlohmann::json::exception& e) {
        throw TypeCheckError("", std::string("malformed argument JSON: ") + e.what());
    }
    return args;
}

}  // namespace mtsem
