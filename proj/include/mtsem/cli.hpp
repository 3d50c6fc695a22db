#pragma once

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"

#include "mtsem/pipeline.hpp"

namespace mtsem {

// Exit codes, kept stable for scripting:
//   0 ok, 1 compile error, 2 usage or I/O error,
//   3 response parse failure, 4 response type failure, 5 backend failure.
enum ExitCode : int {
    kExitOk = 0,
    kExitCompile = 1,
    kExitUsage = 2,
    kExitResponseParse = 3,
    kExitResponseType = 4,
    kExitBackend = 5,
};

namespace detail {

inline std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline SemanticsMode parse_mode(const std::string& mode) {
    if (mode == "sem") return SemanticsMode::Sem;
    if (mode == "docstring") return SemanticsMode::Docstring;
    return SemanticsMode::Both;
}

inline nlohmann::ordered_json semtable_to_json(const SemTable& table) {
    std::vector<const SemTableEntry*> sorted;
    for (const SemTableEntry& entry : table.entries) {
        if (entry.kind != SymbolKind::Module) sorted.push_back(&entry);
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const SemTableEntry* a, const SemTableEntry* b) { return a->path < b->path; });
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const SemTableEntry* entry : sorted) {
        nlohmann::ordered_json j;
        j["path"] = entry->path;
        j["kind"] = symbol_kind_name(entry->kind);
        if (entry->type) j["type"] = entry->type->to_string();
        if (entry->semtext) j["semtext"] = *entry->semtext;
        if (entry->docstring) j["docstring"] = *entry->docstring;
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace detail

/// Runs the command-line driver. `backend_override`, when set, replaces the
/// backend that `invoke` would construct from its flags (used by tests to
/// observe the exact prompts a run sends).
inline int run_cli(const std::vector<std::string>& args,
                   std::ostream& out = std::cout,
                   std::ostream& err = std::cerr,
                   Backend* backend_override = nullptr) {
    CLI::App app{"Compiler and LLM runtime for the MTL language"};
    app.require_subcommand(1);

    std::string source_path;
    std::string fn_name;
    std::string args_path;
    std::string semantics = "sem";
    std::string backend_spec = "http";
    std::string output_format = "text";
    std::string model;
    int retries = 2;
    bool include_defaults = false;

    auto add_semantics = [&](CLI::App* cmd) {
        cmd->add_option("--semantics", semantics, "Semantic enrichment source")
            ->check(CLI::IsMember({"sem", "docstring", "both"}));
    };

    CLI::App* check = app.add_subcommand("check", "Parse and analyze a source file");
    check->add_option("source", source_path, "MTL source file")->required();

    CLI::App* dump_symbols =
        app.add_subcommand("dump-symbols", "Emit the analyzed symbol table as JSON");
    dump_symbols->add_option("source", source_path, "MTL source file")->required();

    CLI::App* dump_mtir = app.add_subcommand("dump-mtir", "Emit a call-site IR as JSON");
    dump_mtir->add_option("source", source_path, "MTL source file")->required();
    dump_mtir->add_option("--fn", fn_name, "by-llm function name")->required();
    add_semantics(dump_mtir);

    CLI::App* dump_prompt =
        app.add_subcommand("dump-prompt", "Print the exact prompt a call would send");
    dump_prompt->add_option("source", source_path, "MTL source file")->required();
    dump_prompt->add_option("--fn", fn_name, "by-llm function name")->required();
    dump_prompt->add_option("--args", args_path, "JSON argument file")->required();
    dump_prompt->add_flag("--include-defaults", include_defaults,
                          "Show attribute defaults in Type_Explanations");
    add_semantics(dump_prompt);

    CLI::App* invoke = app.add_subcommand("invoke", "Run a by-llm function end to end");
    invoke->add_option("source", source_path, "MTL source file")->required();
    invoke->add_option("--fn", fn_name, "by-llm function name")->required();
    invoke->add_option("--args", args_path, "JSON argument file")->required();
    invoke->add_option("--backend", backend_spec, "mock:<script.json> or http");
    invoke->add_option("--retries", retries, "Re-ask attempts after a bad response");
    invoke->add_option("--output", output_format, "Result rendering")
        ->check(CLI::IsMember({"text", "json"}));
    invoke->add_option("--model", model, "Model name (default MTSEM_MODEL or gpt-4o)");
    invoke->add_flag("--include-defaults", include_defaults,
                     "Show attribute defaults in Type_Explanations");
    add_semantics(invoke);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    auto load_unit = [&](CompiledProgram& unit) -> std::optional<int> {
        std::optional<std::string> source = detail::read_file(source_path);
        if (!source) {
            err << "error: cannot read '" << source_path << "'\n";
            return kExitUsage;
        }
        try {
            unit = compile(*source);
        } catch (const CompileError& e) {
            err << e.diagnostic().to_string() << "\n";
            return kExitCompile;
        }
        return std::nullopt;
    };

    auto load_args = [&](std::map<std::string, RuntimeValue>& values) -> std::optional<int> {
        std::optional<std::string> text = detail::read_file(args_path);
        if (!text) {
            err << "error: cannot read '" << args_path << "'\n";
            return kExitUsage;
        }
        try {
            values = decode_argument_file(*text);
        } catch (const TypeCheckError& e) {
            err << "error: " << e.what() << "\n";
            return kExitUsage;
        }
        return std::nullopt;
    };

    CompiledProgram unit;
    SemanticsMode mode = detail::parse_mode(semantics);

    if (check->parsed()) {
        if (auto code = load_unit(unit)) return *code;
        return kExitOk;
    }

    if (dump_symbols->parsed()) {
        if (auto code = load_unit(unit)) return *code;
        out << detail::semtable_to_json(unit.table).dump(2) << "\n";
        return kExitOk;
    }

    if (dump_mtir->parsed()) {
        if (auto code = load_unit(unit)) return *code;
        try {
            out << serialize_mtir(build_callsite_ir(unit, fn_name, mode)) << "\n";
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            return kExitUsage;
        }
        return kExitOk;
    }

    if (dump_prompt->parsed()) {
        if (auto code = load_unit(unit)) return *code;
        std::map<std::string, RuntimeValue> values;
        if (auto code = load_args(values)) return *code;
        try {
            MtIrStar ir = build_callsite_ir(unit, fn_name, mode);
            BoundArguments bound = bind_arguments(ir, values);
            PromptOptions options;
            options.include_defaults = include_defaults;
            out << assemble_prompt(ir, bound, options).render();
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            return kExitUsage;
        }
        return kExitOk;
    }

    // invoke
    if (auto code = load_unit(unit)) return *code;
    std::map<std::string, RuntimeValue> values;
    if (auto code = load_args(values)) return *code;

    std::unique_ptr<Backend> owned;
    Backend* backend = backend_override;
    if (!backend) {
        try {
            if (backend_spec.rfind("mock:", 0) == 0) {
                owned = std::make_unique<MockBackend>(
                    MockBackend::load_scripts(backend_spec.substr(5)));
            } else if (backend_spec == "http") {
                owned = std::make_unique<HttpBackend>(HttpBackend::from_env());
            } else {
                err << "error: unknown backend '" << backend_spec << "'\n";
                return kExitUsage;
            }
        } catch (const BackendError& e) {
            err << "error: " << e.what() << "\n";
            return kExitBackend;
        }
        backend = owned.get();
    }

    InvokeOptions options;
    options.mode = mode;
    options.retries = retries;
    options.prompt.include_defaults = include_defaults;
    if (!model.empty()) {
        options.model = model;
    } else if (const char* env_model = std::getenv("MTSEM_MODEL")) {
        options.model = env_model;
    }

    try {
        InvokeOutcome outcome = invoke_callsite(unit, fn_name, values, *backend, options);
        if (output_format == "json") {
            out << value_to_json(outcome.value).dump() << "\n";
        } else {
            out << render_value(outcome.value) << "\n";
        }
        return kExitOk;
    } catch (const ResponseError& e) {
        err << "error: " << (e.kind() == ResponseError::Kind::Parse ? "response parse failure: "
                                                                    : "response type failure: ")
            << e.what() << "\n";
        return e.kind() == ResponseError::Kind::Parse ? kExitResponseParse : kExitResponseType;
    } catch (const BackendError& e) {
        err << "error: backend failure: " << e.what() << "\n";
        return kExitBackend;
    } catch (const TypeCheckError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace mtsem
