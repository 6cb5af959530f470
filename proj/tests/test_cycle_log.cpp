#include <doctest.h>

#include <ddc/cycle_log.hpp>
#include <ddc/errors.hpp>

using namespace ddc;

namespace {

cycle_log_record sample_record() {
    cycle_log_record rec;
    rec.cycle_id = "003";
    rec.problem_name = "Package weight mispricing";
    rec.date_started = "2025-09-15";
    rec.date_completed = "2025-09-15";
    rec.time_spent_minutes = 30;
    rec.entities_created = 4;
    rec.entities_updated = 3;
    rec.entities_reused = {"carrier-gateway", "order-manager"};
    rec.domain = "retail-fulfillment";
    for (const auto& heading : cycle_log_sections)
        rec.sections.emplace_back(heading, "Content for " + heading + ".");
    return rec;
}

}  // namespace

TEST_CASE("a log serializes with fixed frontmatter order and an H1") {
    std::string text = serialize_cycle_log(sample_record());
    CHECK(text.find("---\n"
                    "cycle_id: \"003\"\n"
                    "problem_name: \"Package weight mispricing\"\n"
                    "date_started: 2025-09-15\n"
                    "date_completed: 2025-09-15\n"
                    "time_spent_minutes: 30\n"
                    "entities_created: 4\n"
                    "entities_updated: 3\n"
                    "entities_reused: [carrier-gateway, order-manager]\n"
                    "domain: \"retail-fulfillment\"\n"
                    "---\n") == 0);
    CHECK(text.find("\n# Cycle 003: Package weight mispricing\n") != std::string::npos);
    CHECK(text.find("\n## Problem Input\n\nContent for Problem Input.\n") !=
          std::string::npos);
}

TEST_CASE("logs round-trip through serialize and parse") {
    cycle_log_record rec = sample_record();
    std::string text = serialize_cycle_log(rec);
    cycle_log_record back = parse_cycle_log(text);
    CHECK(back.cycle_id == rec.cycle_id);
    CHECK(back.problem_name == rec.problem_name);
    CHECK(back.date_started == rec.date_started);
    CHECK(back.date_completed == rec.date_completed);
    CHECK(back.time_spent_minutes == rec.time_spent_minutes);
    CHECK(back.entities_created == rec.entities_created);
    CHECK(back.entities_updated == rec.entities_updated);
    CHECK(back.entities_reused == rec.entities_reused);
    CHECK(back.domain == rec.domain);
    CHECK(back.sections == rec.sections);
    CHECK(serialize_cycle_log(back) == text);
}

TEST_CASE("a missing frontmatter key names the field") {
    cycle_log_record rec = sample_record();
    std::string text = serialize_cycle_log(rec);
    std::string broken = text;
    broken.erase(broken.find("domain: "), std::string("domain: \"retail-fulfillment\"\n").size());
    try {
        parse_cycle_log(broken);
        FAIL("expected an error");
    } catch (const error& e) {
        CHECK(e.code() == errc::missing_field);
        CHECK(std::string(e.what()).find("domain") != std::string::npos);
    }
}

TEST_CASE("an absent entities_reused key means an empty list") {
    std::string text =
        "---\n"
        "cycle_id: \"001\"\n"
        "problem_name: \"First incident\"\n"
        "date_started: 2025-09-01\n"
        "date_completed: 2025-09-01\n"
        "time_spent_minutes: 30\n"
        "entities_created: 8\n"
        "entities_updated: 0\n"
        "domain: \"retail-fulfillment\"\n"
        "---\n"
        "\n# Cycle 001: First incident\n"
        "\n## Problem Input\n\nQueue stuck.\n";
    cycle_log_record rec = parse_cycle_log(text);
    CHECK(rec.entities_reused.empty());
    REQUIRE(rec.sections.size() == 1);
    CHECK(rec.sections[0].first == "Problem Input");
    CHECK(rec.sections[0].second == "Queue stuck.");
}

TEST_CASE("counts must be integers") {
    std::string text = serialize_cycle_log(sample_record());
    std::string broken = text;
    broken.replace(broken.find("entities_created: 4"), 19, "entities_created: four");
    CHECK_THROWS_WITH_AS(parse_cycle_log(broken), doctest::Contains("entities_created"),
                         error);
}

TEST_CASE("a file without frontmatter is malformed") {
    try {
        parse_cycle_log("# Cycle 001\n");
        FAIL("expected an error");
    } catch (const error& e) {
        CHECK(e.code() == errc::malformed_frontmatter);
    }
}

TEST_CASE("cycle_number reads the zero-padded id") {
    cycle_log_record rec = sample_record();
    CHECK(rec.cycle_number() == 3);
    rec.cycle_id = "012";
    CHECK(rec.cycle_number() == 12);
    rec.cycle_id = "1a";
    CHECK_THROWS_AS(rec.cycle_number(), error);
}

TEST_CASE("deeper headings stay inside their section") {
    cycle_log_record rec = sample_record();
    rec.sections.clear();
    rec.sections.emplace_back("Human Answers",
                              "### what-runs-where\n\nThree regions.\n\n### who-owns-it\n\n"
                              "The platform team.");
    std::string text = serialize_cycle_log(rec);
    cycle_log_record back = parse_cycle_log(text);
    REQUIRE(back.sections.size() == 1);
    CHECK(back.sections[0].first == "Human Answers");
    CHECK(back.sections[0].second.find("### who-owns-it") != std::string::npos);
}

TEST_CASE("text above the first section heading is ignored") {
    std::string text = serialize_cycle_log(sample_record());
    cycle_log_record rec = parse_cycle_log(text);
    CHECK(rec.sections.size() == cycle_log_sections.size());
    for (size_t i = 0; i < cycle_log_sections.size(); ++i)
        CHECK(rec.sections[i].first == cycle_log_sections[i]);
}

TEST_CASE("quoted names with punctuation round-trip") {
    cycle_log_record rec = sample_record();
    rec.problem_name = "Orders \"lost\" after handoff: carrier says 0 received";
    std::string text = serialize_cycle_log(rec);
    cycle_log_record back = parse_cycle_log(text);
    CHECK(back.problem_name == rec.problem_name);
}
