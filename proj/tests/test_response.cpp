#include "doctest.h"

#include "mtsem/pipeline.hpp"
#include "mtsem/response.hpp"
#include "support/helpers.hpp"

using namespace mtsem;

namespace {

MtIrStar planning_ir() {
    std::string source = testing::read_file_or_die(testing::testdata_path("generate_plan.mtl"));
    static CompiledProgram unit = compile(source);
    return build_callsite_ir(unit, "generate_plan");
}

}  // namespace

TEST_CASE("a plan list literal parses against list[Plan]") {
    MtIrStar ir = planning_ir();
    RuntimeValue v = parse_response(
        "[Plan(action = 'Add logging', category = 'feature', description = 'd', "
        "file = None, effort = 'low', priority = 1)]",
        ir.output, ir);
    const auto& items = std::get<std::vector<RuntimeValue>>(v.data);
    REQUIRE(items.size() == 1);
    const auto& plan = std::get<ObjectValue>(items[0].data);
    CHECK(plan.class_name == "Plan");
    CHECK(plan.fields[0].second == RuntimeValue::str("Add logging"));
    CHECK(plan.fields[3].second == RuntimeValue::none());
    CHECK(plan.fields[5].second == RuntimeValue::integer(1));
}

TEST_CASE("scalar parses") {
    MtIrStar ir = planning_ir();
    CHECK(parse_response("42", TypeExpr{"int", {}}, ir) == RuntimeValue::integer(42));
    CHECK(parse_response("-3", TypeExpr{"int", {}}, ir) == RuntimeValue::integer(-3));
    CHECK(parse_response("2", TypeExpr{"float", {}}, ir) == RuntimeValue::real(2.0));
    CHECK(parse_response("true", TypeExpr{"bool", {}}, ir) == RuntimeValue::boolean(true));
    CHECK(parse_response("None", TypeExpr{"Optional", {TypeExpr{"int", {}}}}, ir).is_none());
    CHECK(parse_response("\"double quoted\"", TypeExpr{"str", {}}, ir) ==
          RuntimeValue::str("double quoted"));
}

TEST_CASE("wrong-typed fields raise a type error naming the path") {
    MtIrStar ir = planning_ir();
    try {
        parse_response(
            "[Plan(action = 1, category = 'c', description = 'd', file = None, "
            "effort = 'e', priority = 1)]",
            ir.output, ir);
        FAIL("expected a type error");
    } catch (const ResponseError& e) {
        CHECK(e.kind() == ResponseError::Kind::Type);
        CHECK(std::string(e.what()).find("action") != std::string::npos);
    }
    try {
        parse_response("Plan(action = 1)", TypeExpr{"Plan", {}}, ir);
        FAIL("expected a type error");
    } catch (const ResponseError& e) {
        CHECK(e.kind() == ResponseError::Kind::Type);
        CHECK(std::string(e.what()).find("Plan.action") != std::string::npos);
    }
}

TEST_CASE("malformed literals raise parse errors, distinct from type errors") {
    MtIrStar ir = planning_ir();
    for (const char* bad : {"", "[1, ", "Plan(action 'x')", "{'k' 1}", "@", "'unterminated",
                            "1 2", "Plan(action = 'x') trailing"}) {
        CAPTURE(bad);
        try {
            parse_response(bad, TypeExpr{"int", {}}, ir);
            FAIL("expected a parse error");
        } catch (const ResponseError& e) {
            CHECK(e.kind() == ResponseError::Kind::Parse);
        }
    }
}

TEST_CASE("well-formed but wrong shapes are type errors") {
    MtIrStar ir = planning_ir();
    for (const char* wrong : {"'text'", "[1, 2]", "None", "RepoState(files = [], "
                              "dirty_files = [], lint_issues = [], test_failures = [])"}) {
        CAPTURE(wrong);
        try {
            parse_response(wrong, TypeExpr{"int", {}}, ir);
            FAIL("expected a type error");
        } catch (const ResponseError& e) {
            CHECK(e.kind() == ResponseError::Kind::Type);
        }
    }
}

TEST_CASE("code fences and output echoes are stripped") {
    MtIrStar ir = planning_ir();
    CHECK(parse_response("```\n42\n```", TypeExpr{"int", {}}, ir) == RuntimeValue::integer(42));
    CHECK(parse_response("```python\n42\n```", TypeExpr{"int", {}}, ir) ==
          RuntimeValue::integer(42));
    CHECK(parse_response("[Output]\n42", TypeExpr{"int", {}}, ir) == RuntimeValue::integer(42));
    CHECK(parse_response("[Output]\n<result>\n42", TypeExpr{"int", {}}, ir) ==
          RuntimeValue::integer(42));
    CHECK(parse_response("\n\n  42  \n", TypeExpr{"int", {}}, ir) == RuntimeValue::integer(42));
}

TEST_CASE("enum literals check the variant against the declaration") {
    CompiledProgram unit = compile(
        testing::read_file_or_die(testing::testdata_path("content_creator.mtl")));
    MtIrStar ir = build_callsite_ir(unit, "call_next_agent");
    CHECK(parse_response("AgentTypes.PLANNER_AGENT", ir.output, ir) ==
          RuntimeValue::enum_variant("AgentTypes", "PLANNER_AGENT"));
    try {
        parse_response("AgentTypes.NOPE", ir.output, ir);
        FAIL("expected a type error");
    } catch (const ResponseError& e) {
        CHECK(e.kind() == ResponseError::Kind::Type);
    }
    try {
        parse_response("WorkflowStage.PLANNING", ir.output, ir);
        FAIL("expected a type error");
    } catch (const ResponseError& e) {
        CHECK(e.kind() == ResponseError::Kind::Type);
    }
}

TEST_CASE("arbitrary reply bytes produce typed errors, never crashes") {
    MtIrStar ir = planning_ir();
    std::mt19937 rng(0xD1CE);
    std::uniform_int_distribution<int> byte(0, 255);
    std::uniform_int_distribution<int> len(0, 120);
    for (int i = 0; i < 1000; ++i) {
        std::string soup;
        int n = len(rng);
        for (int j = 0; j < n; ++j) soup += static_cast<char>(byte(rng));
        try {
            parse_response(soup, ir.output, ir);
        } catch (const ResponseError&) {
        }
    }
}

TEST_CASE("int does not accept float syntax, float widens int") {
    MtIrStar ir = planning_ir();
    try {
        parse_response("1.5", TypeExpr{"int", {}}, ir);
        FAIL("expected a type error");
    } catch (const ResponseError& e) {
        CHECK(e.kind() == ResponseError::Kind::Type);
    }
    CHECK(parse_response("1.5", TypeExpr{"float", {}}, ir) == RuntimeValue::real(1.5));
}
