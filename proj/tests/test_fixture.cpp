#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"

#include "ddc/cycle.hpp"
#include "ddc/kb.hpp"
#include "ddc/metamodel.hpp"
#include "ddc/validator.hpp"

#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace ddc;
using test_support::read_text;
using test_support::temp_dir;

namespace {

const fs::path kFixtures = DDC_FIXTURE_DIR;

std::vector<fs::path> sorted_files(const fs::path& root) {
    std::vector<fs::path> rels;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) rels.push_back(fs::relative(e.path(), root));
    std::sort(rels.begin(), rels.end());
    return rels;
}

void replay_all_scripts(const fs::path& root) {
    const metamodel& m = builtin_metamodel();
    fs::create_directories(root / "kb");
    fs::create_directories(root / "logs");
    fs::create_directories(root / "sandboxes");
    fs::create_directories(root / "meta");
    save_metamodel(m, root / "meta" / "entity-types.yaml",
                   root / "meta" / "relationship-types.yaml");
    for (int i = 1; i <= 9; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "cycle-%03d.yaml", i);
        cycle_script script = load_cycle_script(kFixtures / "scripts" / name, m);
        replay_cycle(script, root, m);
    }
}

}  // namespace

TEST_CASE("replaying the bundled scripts regenerates the bundled workspace byte for byte") {
    temp_dir tmp;
    replay_all_scripts(tmp.path);

    const fs::path bundled = kFixtures / "workspace";
    for (const char* part : {"kb", "logs", "meta"}) {
        auto expected = sorted_files(bundled / part);
        auto actual = sorted_files(tmp.path / part);
        REQUIRE(expected == actual);
        for (const auto& rel : expected) {
            CAPTURE(rel.string());
            CHECK(read_text(bundled / part / rel) == read_text(tmp.path / part / rel));
        }
    }
}

TEST_CASE("the bundled workspace validates cleanly") {
    const metamodel& m = builtin_metamodel();
    std::vector<diagnostic> load_diags;
    knowledge_base kb = load_kb(kFixtures / "workspace", m, load_diags);
    CHECK(load_diags.empty());

    validation_report report = validate_kb(kb);
    CHECK(report.checked_entities == 46);
    CHECK(report.error_count() == 0);
    CHECK(report.warning_count() == 2);

    std::vector<std::string> orphan_files;
    for (const auto& d : report.diagnostics)
        if (d.code == "ORPHAN_ENTITY") orphan_files.push_back(d.path);
    std::sort(orphan_files.begin(), orphan_files.end());
    CHECK(orphan_files == std::vector<std::string>{"kb/persona/store-sales-staff.md",
                                                   "kb/platform/message-broker.md"});

    std::map<std::string, int> by_type;
    for (const auto& [id, e] : kb.entities) ++by_type[e.entity_type];
    std::map<std::string, int> expected{
        {"api", 1},          {"capability", 4}, {"data-model", 1},
        {"jargon-business", 9}, {"jargon-tech", 12}, {"persona", 1},
        {"platform", 1},     {"process", 5},    {"system", 12},
    };
    CHECK(by_type == expected);
}
