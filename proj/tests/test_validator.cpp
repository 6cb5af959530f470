#include <doctest.h>

#include <sstream>

#include <ddc/entity.hpp>
#include <ddc/kb.hpp>
#include <ddc/metamodel.hpp>
#include <ddc/validator.hpp>

#include "test_support.hpp"

using namespace ddc;
using test_support::temp_dir;

namespace {

const metamodel& model() {
    static metamodel m = builtin_metamodel();
    return m;
}

knowledge_base kb_of(std::vector<entity> entities) {
    std::vector<diagnostic> diags;
    knowledge_base kb = make_kb(std::move(entities), model(), diags);
    REQUIRE(diags.empty());
    return kb;
}

std::vector<std::string> codes_of(const std::vector<diagnostic>& diags) {
    std::vector<std::string> out;
    for (const auto& d : diags) out.push_back(d.code);
    return out;
}

}  // namespace

TEST_CASE("a well-formed entity has no findings") {
    entity e = test_support::make_entity("system", "order-manager");
    e.relationships["depends_on"] = {"routing-engine"};
    CHECK(validate_entity(e, model()).empty());
}

TEST_CASE("empty core fields are reported") {
    entity e = test_support::make_entity("system", "order-manager");
    e.name.clear();
    e.description.clear();
    auto diags = validate_entity(e, model());
    auto codes = codes_of(diags);
    CHECK(std::count(codes.begin(), codes.end(), diag::empty_name) == 1);
    CHECK(std::count(codes.begin(), codes.end(), diag::missing_required_field) == 1);
}

TEST_CASE("ids must be kebab-case") {
    entity e = test_support::make_entity("system", "OrderManager");
    auto codes = codes_of(validate_entity(e, model()));
    CHECK(codes == std::vector<std::string>{diag::naming_convention});

    entity empty_id = test_support::make_entity("system", "");
    empty_id.name = "Unnamed";
    codes = codes_of(validate_entity(empty_id, model()));
    CHECK(codes == std::vector<std::string>{diag::missing_required_field});
}

TEST_CASE("status must come from the vocabulary") {
    for (const char* ok : {"active", "deprecated", "draft", "stub"}) {
        entity e = test_support::make_entity("capability", "cap");
        e.status = ok;
        CHECK(validate_entity(e, model()).empty());
    }
    entity e = test_support::make_entity("capability", "cap");
    e.status = "retired";
    auto codes = codes_of(validate_entity(e, model()));
    CHECK(codes == std::vector<std::string>{diag::invalid_status});
}

TEST_CASE("unknown types short-circuit the other checks") {
    entity e = test_support::make_entity("widget", "w");
    e.name.clear();
    auto codes = codes_of(validate_entity(e, model()));
    CHECK(codes == std::vector<std::string>{diag::unknown_entity_type});
}

TEST_CASE("relationship keys must be defined and allowed for the type") {
    entity e = test_support::make_entity("capability", "cap");
    e.relationships["depends_on"] = {"x"};
    auto diags = validate_entity(e, model());
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].code == diag::relationship_key_not_allowed);
    CHECK(diags[0].message.find("not allowed on type 'capability'") != std::string::npos);

    entity f = test_support::make_entity("system", "sys");
    f.relationships["made_of"] = {"x"};
    diags = validate_entity(f, model());
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].code == diag::relationship_key_not_allowed);
    CHECK(diags[0].message.find("unknown relationship key") != std::string::npos);
}

TEST_CASE("single-target keys reject multiple targets") {
    entity e = test_support::make_entity("system", "sys");
    e.relationships["implements_capability"] = {"a", "b"};
    auto diags = validate_entity(e, model());
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].code == diag::relationship_key_not_allowed);
    CHECK(diags[0].message.find("single target") != std::string::npos);
}

TEST_CASE("stub descriptions have a length cap") {
    entity stub = test_support::make_entity("jargon-tech", "consumer-group");
    stub.body = "seen in incident review, needs a writeup\n";
    REQUIRE(stub.depth() == curation_depth::stub);
    stub.description = std::string(201, 'x');
    auto codes = codes_of(validate_entity(stub, model()));
    CHECK(codes == std::vector<std::string>{diag::stub_description});

    stub.description = std::string(200, 'x');
    CHECK(validate_entity(stub, model()).empty());

    entity deep = test_support::make_entity("jargon-tech", "consumer-group");
    deep.description = std::string(500, 'x');
    REQUIRE(deep.depth() == curation_depth::deep);
    CHECK(validate_entity(deep, model()).empty());
}

TEST_CASE("extra required fields can be satisfied by extras or relationships") {
    metamodel m = builtin_metamodel();
    for (auto& t : m.entity_types)
        if (t.type_name == "system")
            t.required_fields.push_back("owner_contact");
    entity e = test_support::make_entity("system", "sys");
    auto codes = codes_of(validate_entity(e, m));
    CHECK(codes == std::vector<std::string>{diag::missing_required_field});

    e.extras["owner_contact"] = field_value{false, "platform-team", {}};
    CHECK(validate_entity(e, m).empty());
}

TEST_CASE("dangling targets are errors attributed to the source") {
    entity a = test_support::make_entity("system", "a");
    a.relationships["depends_on"] = {"ghost"};
    validation_report report = validate_kb(kb_of({a}));
    REQUIRE(report.diagnostics.size() == 1);
    const diagnostic& d = report.diagnostics[0];
    CHECK(d.code == diag::dangling_target);
    CHECK(d.level == severity::error);
    CHECK(d.entity_id == "a");
    CHECK(d.message.find("ghost") != std::string::npos);
    CHECK(report.error_count() == 1);
    CHECK(report.warning_count() == 0);
}

TEST_CASE("endpoint types are checked on both ends") {
    entity j = test_support::make_entity("jargon-tech", "queue-lag");
    j.relationships["describes"] = {"cap"};
    entity cap = test_support::make_entity("capability", "cap");
    entity sys = test_support::make_entity("system", "sys");
    sys.relationships["depends_on"] = {"cap"};

    validation_report report = validate_kb(kb_of({j, cap, sys}));
    auto codes = codes_of(report.diagnostics);
    CHECK(std::count(codes.begin(), codes.end(), diag::endpoint_type_mismatch) == 2);
}

TEST_CASE("entities with no edges in either direction are orphan warnings") {
    entity a = test_support::make_entity("system", "a");
    a.relationships["related_systems"] = {"b"};
    entity b = test_support::make_entity("system", "b");
    entity loner = test_support::make_entity("capability", "loner");

    validation_report report = validate_kb(kb_of({a, b, loner}));
    REQUIRE(report.diagnostics.size() == 1);
    CHECK(report.diagnostics[0].code == diag::orphan_entity);
    CHECK(report.diagnostics[0].level == severity::warning);
    CHECK(report.diagnostics[0].entity_id == "loner");
    CHECK(report.error_count() == 0);
    CHECK(report.warning_count() == 1);
}

TEST_CASE("an incoming edge clears orphan status even when undirected") {
    entity a = test_support::make_entity("system", "a");
    a.relationships["related_systems"] = {"b"};
    entity b = test_support::make_entity("system", "b");
    validation_report report = validate_kb(kb_of({a, b}));
    CHECK(report.diagnostics.empty());
}

TEST_CASE("a dangling edge still counts for the source's orphan check") {
    entity a = test_support::make_entity("system", "a");
    a.relationships["depends_on"] = {"ghost"};
    validation_report report = validate_kb(kb_of({a}));
    auto codes = codes_of(report.diagnostics);
    CHECK(std::count(codes.begin(), codes.end(), diag::orphan_entity) == 0);
}

TEST_CASE("reports are ordered by path, line, and code") {
    entity z = test_support::make_entity("system", "zz");
    z.status = "retired";
    entity a = test_support::make_entity("system", "aa");
    a.relationships["depends_on"] = {"ghost"};
    a.name.clear();

    validation_report report = validate_kb(kb_of({z, a}));
    REQUIRE(report.diagnostics.size() == 4);
    CHECK(report.diagnostics[0].path == "kb/system/aa.md");
    CHECK(report.diagnostics[0].code == diag::dangling_target);
    CHECK(report.diagnostics[1].code == diag::empty_name);
    CHECK(report.diagnostics[2].path == "kb/system/zz.md");
    CHECK(report.diagnostics[2].code == diag::invalid_status);
    CHECK(report.diagnostics[3].code == diag::orphan_entity);
}

TEST_CASE("ci output is one parseable line per finding") {
    temp_dir root;
    entity a = test_support::make_entity("system", "a");
    a.relationships["depends_on"] = {"ghost"};
    test_support::write_text(root / "kb/system/a.md", serialize_entity(a));

    std::ostringstream out;
    int status = ci_check(root, model(), false, out);
    CHECK(status == 1);
    CHECK(out.str() ==
          "error:DANGLING_TARGET:kb/system/a.md:0:relationship 'depends_on' references "
          "missing entity 'ghost'\n");
}

TEST_CASE("ci exit codes distinguish clean, findings, and bad roots") {
    temp_dir root;
    entity a = test_support::make_entity("system", "a");
    a.relationships["related_systems"] = {"b"};
    entity b = test_support::make_entity("system", "b");
    test_support::write_text(root / "kb/system/a.md", serialize_entity(a));
    test_support::write_text(root / "kb/system/b.md", serialize_entity(b));

    std::ostringstream out;
    CHECK(ci_check(root, model(), false, out) == 0);
    CHECK(out.str().empty());

    entity loner = test_support::make_entity("capability", "loner");
    test_support::write_text(root / "kb/capability/loner.md", serialize_entity(loner));
    std::ostringstream warn_tolerant;
    CHECK(ci_check(root, model(), false, warn_tolerant) == 0);
    CHECK(warn_tolerant.str().find("warning:ORPHAN_ENTITY") == 0);
    std::ostringstream warn_strict;
    CHECK(ci_check(root, model(), true, warn_strict) == 1);

    std::ostringstream missing;
    CHECK(ci_check(root.path / "nowhere", model(), false, missing) == 2);
    CHECK(missing.str().find("error:RootMissing") == 0);
}

TEST_CASE("load problems appear alongside validation findings") {
    temp_dir root;
    test_support::write_text(root / "kb/system/bad.md", "no frontmatter\n");
    std::ostringstream out;
    CHECK(ci_check(root, model(), false, out) == 1);
    CHECK(out.str().find("NO_FRONTMATTER") != std::string::npos);
    CHECK(out.str().find("kb/system/bad.md") != std::string::npos);
}
