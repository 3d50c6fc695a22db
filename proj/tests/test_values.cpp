#include "doctest.h"

#include "mtsem/pipeline.hpp"
#include "mtsem/prompt.hpp"
#include "mtsem/response.hpp"
#include "mtsem/values.hpp"
#include "support/generators.hpp"
#include "support/helpers.hpp"

using namespace mtsem;

namespace {

MtIrStar planning_ir() {
    std::string source = testing::read_file_or_die(testing::testdata_path("generate_plan.mtl"));
    static CompiledProgram unit = compile(source);
    return build_callsite_ir(unit, "generate_plan");
}

RuntimeValue fig_repo_state() {
    ObjectValue repo;
    repo.class_name = "RepoState";
    repo.fields.emplace_back("files", RuntimeValue::list({
        RuntimeValue::str("api/handlers.py"),
        RuntimeValue::str("api/auth.py"),
        RuntimeValue::str("api/utils/__init__.py"),
    }));
    repo.fields.emplace_back("dirty_files",
                             RuntimeValue::list({RuntimeValue::str("api/handlers.py")}));
    repo.fields.emplace_back("lint_issues", RuntimeValue::list({RuntimeValue::str(
                                                "Unused import in api/handlers.py")}));
    repo.fields.emplace_back(
        "test_failures",
        RuntimeValue::list({RuntimeValue::str("tests/test_handlers.py::test_logging_roundtrip failed")}));
    return RuntimeValue::object(std::move(repo));
}

}  // namespace

TEST_CASE("render_value reproduces the repository snapshot line") {
    CHECK(render_value(fig_repo_state()) ==
          "RepoState(files = ['api/handlers.py', 'api/auth.py', 'api/utils/__init__.py'], "
          "dirty_files = ['api/handlers.py'], lint_issues = ['Unused import in api/handlers.py'], "
          "test_failures = ['tests/test_handlers.py::test_logging_roundtrip failed'])");
}

TEST_CASE("render_value basics") {
    CHECK(render_value(RuntimeValue::list({})) == "[]");
    CHECK(render_value(RuntimeValue::none()) == "None");
    CHECK(render_value(RuntimeValue::boolean(true)) == "true");
    CHECK(render_value(RuntimeValue::boolean(false)) == "false");
    CHECK(render_value(RuntimeValue::integer(-42)) == "-42");
    CHECK(render_value(RuntimeValue::str("it's\na \"test\"\t\\")) ==
          "'it\\'s\\na \"test\"\\t\\\\'");
    CHECK(render_value(RuntimeValue::enum_variant("AgentTypes", "END")) == "AgentTypes.END");
    DictValue d;
    d.entries.emplace_back("k", RuntimeValue::integer(1));
    d.entries.emplace_back("x y", RuntimeValue::list({RuntimeValue::real(0.5)}));
    CHECK(render_value(RuntimeValue::dict(std::move(d))) == "{'k': 1, 'x y': [0.5]}");
}

TEST_CASE("bind_arguments accepts the planning example") {
    MtIrStar ir = planning_ir();
    std::map<std::string, RuntimeValue> args;
    args.emplace("goal", RuntimeValue::str("Add structured logging"));
    args.emplace("repo_state", fig_repo_state());
    BoundArguments bound = bind_arguments(ir, args);
    REQUIRE(bound.values.size() == 2);
    CHECK(bound.values[0].first == "goal");
    CHECK(bound.values[1].first == "repo_state");
}

TEST_CASE("bind_arguments with an empty parameter list") {
    CompiledProgram unit = compile("def g() -> int by llm;");
    MtIrStar ir = build_callsite_ir(unit, "g");
    CHECK(bind_arguments(ir, {}).values.empty());
}

TEST_CASE("bind_arguments rejects a mistyped argument with its path") {
    MtIrStar ir = planning_ir();
    std::map<std::string, RuntimeValue> args;
    args.emplace("goal", RuntimeValue::integer(42));
    args.emplace("repo_state", fig_repo_state());
    try {
        bind_arguments(ir, args);
        FAIL("expected a type error");
    } catch (const TypeCheckError& e) {
        CHECK(e.path() == "goal");
    }
}

TEST_CASE("bind_arguments reports nested paths") {
    MtIrStar ir = planning_ir();
    ObjectValue repo = std::get<ObjectValue>(fig_repo_state().data);
    repo.fields[0].second = RuntimeValue::list(
        {RuntimeValue::str("ok"), RuntimeValue::str("ok"), RuntimeValue::integer(3)});
    std::map<std::string, RuntimeValue> args;
    args.emplace("goal", RuntimeValue::str("g"));
    args.emplace("repo_state", RuntimeValue::object(std::move(repo)));
    try {
        bind_arguments(ir, args);
        FAIL("expected a type error");
    } catch (const TypeCheckError& e) {
        CHECK(e.path() == "repo_state.files[2]");
        CHECK(std::string(e.what()).find("expected str") != std::string::npos);
    }
}

TEST_CASE("missing arguments fall back to declared defaults") {
    CompiledProgram unit = compile(
        "def f(a: str, b: str = \"fallback\", c: Optional[int] = None) -> str by llm;");
    MtIrStar ir = build_callsite_ir(unit, "f");
    std::map<std::string, RuntimeValue> args;
    args.emplace("a", RuntimeValue::str("x"));
    BoundArguments bound = bind_arguments(ir, args);
    REQUIRE(bound.values.size() == 3);
    CHECK(bound.values[1].second == RuntimeValue::str("fallback"));
    CHECK(bound.values[2].second == RuntimeValue::none());

    std::map<std::string, RuntimeValue> empty;
    CHECK_THROWS_AS(bind_arguments(ir, empty), TypeCheckError);  // a is required

    std::map<std::string, RuntimeValue> extra = args;
    extra.emplace("nope", RuntimeValue::integer(1));
    CHECK_THROWS_AS(bind_arguments(ir, extra), TypeCheckError);
}

TEST_CASE("object type checking fills defaults and orders fields") {
    MtIrStar ir = planning_ir();
    TypeCatalog catalog = TypeCatalog::from_mtir(ir);
    ObjectValue partial;
    partial.class_name = "Plan";
    // deliberately out of declaration order, defaulted fields omitted
    partial.fields.emplace_back("description", RuntimeValue::str("d"));
    partial.fields.emplace_back("action", RuntimeValue::str("a"));
    partial.fields.emplace_back("category", RuntimeValue::str("c"));
    RuntimeValue checked =
        type_check(RuntimeValue::object(std::move(partial)), TypeExpr{"Plan", {}}, catalog);

    const ObjectValue& plan = std::get<ObjectValue>(checked.data);
    REQUIRE(plan.fields.size() == 6);
    CHECK(plan.fields[0].first == "action");
    CHECK(plan.fields[3].first == "file");
    CHECK(plan.fields[3].second == RuntimeValue::none());
    CHECK(plan.fields[4].second == RuntimeValue::str("medium"));
    CHECK(plan.fields[5].second == RuntimeValue::integer(1));

    ObjectValue unknown;
    unknown.class_name = "Plan";
    unknown.fields.emplace_back("bogus", RuntimeValue::str("x"));
    CHECK_THROWS_AS(
        type_check(RuntimeValue::object(std::move(unknown)), TypeExpr{"Plan", {}}, catalog),
        TypeCheckError);
}

TEST_CASE("int widens to float, nothing else converts") {
    TypeCatalog catalog;
    CHECK(type_check(RuntimeValue::integer(3), TypeExpr{"float", {}}, catalog) ==
          RuntimeValue::real(3.0));
    CHECK_THROWS_AS(type_check(RuntimeValue::real(3.0), TypeExpr{"int", {}}, catalog),
                    TypeCheckError);
    CHECK_THROWS_AS(type_check(RuntimeValue::boolean(true), TypeExpr{"int", {}}, catalog),
                    TypeCheckError);
    CHECK_THROWS_AS(type_check(RuntimeValue::integer(1), TypeExpr{"bool", {}}, catalog),
                    TypeCheckError);
    CHECK_THROWS_AS(type_check(RuntimeValue::none(), TypeExpr{"str", {}}, catalog),
                    TypeCheckError);
    CHECK(type_check(RuntimeValue::none(), TypeExpr{"Optional", {TypeExpr{"str", {}}}}, catalog)
              .is_none());
}

TEST_CASE("argument JSON decoding covers tags, nulls and numbers") {
    auto args = decode_argument_file(R"({
        "s": "text",
        "n": null,
        "i": 7,
        "f": 7.5,
        "b": true,
        "arr": [1, 2],
        "obj": {"$type": "Plan", "action": "a"},
        "en": {"$enum": "AgentTypes", "variant": "END"},
        "map": {"k": "v"}
    })");
    CHECK(args.at("s") == RuntimeValue::str("text"));
    CHECK(args.at("n") == RuntimeValue::none());
    CHECK(args.at("i") == RuntimeValue::integer(7));
    CHECK(args.at("f") == RuntimeValue::real(7.5));
    CHECK(args.at("b") == RuntimeValue::boolean(true));
    CHECK(std::get<std::vector<RuntimeValue>>(args.at("arr").data).size() == 2);
    const auto& obj = std::get<ObjectValue>(args.at("obj").data);
    CHECK(obj.class_name == "Plan");
    REQUIRE(obj.fields.size() == 1);
    const auto& en = std::get<EnumValue>(args.at("en").data);
    CHECK(en.variant == "END");
    CHECK(std::get<DictValue>(args.at("map").data).entries[0].first == "k");

    CHECK_THROWS_AS(decode_argument_file("[1, 2]"), TypeCheckError);
    CHECK_THROWS_AS(decode_argument_file("not json"), TypeCheckError);
}

TEST_CASE("value json encoding mirrors the argument format") {
    ObjectValue obj;
    obj.class_name = "Plan";
    obj.fields.emplace_back("action", RuntimeValue::str("a"));
    obj.fields.emplace_back("priority", RuntimeValue::integer(2));
    nlohmann::ordered_json j = value_to_json(RuntimeValue::object(std::move(obj)));
    CHECK(j.dump() == R"({"$type":"Plan","action":"a","priority":2})");
    CHECK(value_to_json(RuntimeValue::enum_variant("E", "V")).dump() ==
          R"({"$enum":"E","variant":"V"})");
}

TEST_CASE("round trip: parse_response(render_value(v)) == v on generated values") {
    MtIrStar ir = planning_ir();
    TypeCatalog catalog = TypeCatalog::from_mtir(ir);
    std::vector<TypeExpr> universe = {
        TypeExpr{"str", {}},
        TypeExpr{"int", {}},
        TypeExpr{"float", {}},
        TypeExpr{"bool", {}},
        TypeExpr{"list", {TypeExpr{"str", {}}}},
        TypeExpr{"Optional", {TypeExpr{"str", {}}}},
        TypeExpr{"Plan", {}},
        TypeExpr{"RepoState", {}},
        TypeExpr{"list", {TypeExpr{"Plan", {}}}},
    };
    testing::Rng rng(314159);
    for (int i = 0; i < 600; ++i) {
        const TypeExpr& type = universe[static_cast<std::size_t>(i) % universe.size()];
        RuntimeValue v = testing::random_value(rng, type, catalog);
        std::string rendered = render_value(v);
        CAPTURE(rendered);
        RuntimeValue back = parse_response(rendered, type, ir);
        CHECK(back == v);
    }
}

TEST_CASE("round trip over a universe with enums and dicts") {
    CompiledProgram unit = compile(
        "enum Mode { FAST, SLOW }\n"
        "class Box { tags: dict[str, list[int]]; mode: Mode; note: Optional[str]; }\n"
        "def f(b: Box) -> dict[str, Box] by llm;\n");
    MtIrStar ir = build_callsite_ir(unit, "f");
    TypeCatalog catalog = TypeCatalog::from_mtir(ir);
    TypeExpr out = ir.output;
    testing::Rng rng(2718);
    for (int i = 0; i < 300; ++i) {
        RuntimeValue v = testing::random_value(rng, out, catalog);
        RuntimeValue back = parse_response(render_value(v), out, ir);
        CHECK(back == v);
    }
}
