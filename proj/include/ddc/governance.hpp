#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "ddc/kb.hpp"
#include "ddc/validator.hpp"

namespace ddc {

struct change_set {
    std::string source_label;
    std::vector<entity> added;
    std::vector<std::pair<entity, entity>> modified;  // (before, after)
    std::vector<std::string> removed;
};

enum class conflict_kind { divergent_modify, add_add, modify_remove };

const char* conflict_kind_name(conflict_kind k);

struct conflict {
    conflict_kind kind;
    std::string entity_id;
    std::pair<std::string, std::string> parties;  // source labels, sorted
};

// Whole-entity diff by canonical serialization. Errors: metamodel_mismatch.
change_set diff_kb(const knowledge_base& base, const knowledge_base& proposed,
                   const std::string& label);

// Pairwise conflicts between two change sets; identical changes (same
// canonical text) never conflict. Errors: same_source_label.
std::vector<conflict> detect_conflicts(const change_set& a, const change_set& b);

// Applies a change set to an in-memory copy (no writes).
// Errors: invalid_changeset (an id in more than one bucket).
knowledge_base apply_changeset(const knowledge_base& base, const change_set& cs);

// Validates base-with-changes; the report carries any dangling targets the
// changes would introduce.
validation_report check_changeset(const knowledge_base& base, const change_set& cs);

// Interchange format: <dir>/kb/<type>/<id>.md for added or modified entities
// plus an optional <dir>/removed.yaml manifest (removed: [ids]).
change_set load_changeset_dir(const std::filesystem::path& dir,
                              const knowledge_base& base, const std::string& label);

}  // namespace ddc
