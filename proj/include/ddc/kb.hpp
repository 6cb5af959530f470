#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ddc/diagnostics.hpp"
#include "ddc/entity.hpp"
#include "ddc/metamodel.hpp"

namespace ddc {

struct edge {
    std::string source_id;
    std::string key;  // frontmatter key of the relationship
    std::string target_id;

    auto operator<=>(const edge&) const = default;
};

enum class direction { in, out, both };

struct knowledge_base {
    std::filesystem::path root;
    metamodel model;
    std::map<std::string, entity> entities;  // id -> entity, id-sorted
    std::vector<edge> edges;                 // sorted; targets may dangle

    bool contains(const std::string& id) const { return entities.count(id) > 0; }
};

// Walks root/kb/*/*.md in path order. Unreadable or unparseable files become
// diagnostics and are skipped; a duplicate id keeps the first file and records
// a DUPLICATE_ID error. Only a missing root raises (root_missing).
knowledge_base load_kb(const std::filesystem::path& root, const metamodel& m,
                       std::vector<diagnostic>& diagnostics);
knowledge_base load_kb(const std::filesystem::path& root, const metamodel& m);

// Builds a KB from in-memory entities (governance previews, tests). Same
// duplicate handling as load_kb.
knowledge_base make_kb(std::vector<entity> entities, const metamodel& m,
                       std::vector<diagnostic>& diagnostics);

// Neighbor pairs in deterministic (key, other_id) order. out: edges whose
// source is id; in: edges whose target is id; both: union.
// Raises unknown_entity for an id outside the KB.
std::vector<std::pair<std::string, std::string>> neighbors(const knowledge_base& kb,
                                                           const std::string& id,
                                                           direction dir);

// Entities of one type, id-sorted. Raises unknown_type for a type the
// metamodel does not define.
std::vector<const entity*> find_by_type(const knowledge_base& kb,
                                        const std::string& entity_type);

// kb/<type>/<id>.md relative to the workspace root.
std::filesystem::path entity_rel_path(const entity& e);

}  // namespace ddc
