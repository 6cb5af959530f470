#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ddc/diagnostics.hpp"

namespace ddc {

inline const std::vector<std::string> core_required_fields = {
    "type", "id", "name", "description", "status"};

inline const std::vector<std::string> status_vocabulary = {
    "active", "deprecated", "draft", "stub"};

enum class cardinality { one, many };

struct entity_type_def {
    std::string type_name;
    std::string description;
    std::vector<std::string> required_fields;
    std::vector<std::string> optional_fields;
    // Frontmatter keys this type may carry; resolved against
    // relationship_type_def::frontmatter_key.
    std::vector<std::string> allowed_relationship_keys;

    bool operator==(const entity_type_def&) const = default;
};

struct relationship_type_def {
    std::string rel_name;
    std::string frontmatter_key;
    std::string source_type;
    std::string target_type;
    cardinality card = cardinality::one;
    bool directed = true;

    bool operator==(const relationship_type_def&) const = default;
};

struct metamodel {
    std::string version;
    std::vector<entity_type_def> entity_types;
    std::vector<relationship_type_def> relationship_types;

    const entity_type_def* find_entity_type(const std::string& name) const;
    const relationship_type_def* find_relationship_by_key(const std::string& key) const;
    const relationship_type_def* find_relationship_by_name(const std::string& name) const;

    bool operator==(const metamodel& other) const;
};

// The built-in model: 11 entity types (the ten curated domain types plus
// platform) and 11 relationship types (ten directed edges plus the undirected
// related_systems association).
const metamodel& builtin_metamodel();

// Structural validation of an assembled model: duplicate names/keys, dangling
// endpoint types, unresolved allowed_relationship_keys, kebab-case type names,
// core required fields present, depends_on self-edge shape.
std::vector<diagnostic> validate_metamodel(const metamodel& m);

// Loads meta/entity-types.yaml + meta/relationship-types.yaml. Unknown keys in
// an entry raise schema_error, as does a model failing validate_metamodel.
// With allow_defaults, a missing file contributes the builtin side instead of
// raising file_missing.
metamodel load_metamodel(const std::filesystem::path& entity_types_file,
                         const std::filesystem::path& relationship_types_file,
                         bool allow_defaults = false);

// Writes both meta files in canonical form (stable key order, sorted entries).
void save_metamodel(const metamodel& m,
                    const std::filesystem::path& entity_types_file,
                    const std::filesystem::path& relationship_types_file);

bool is_kebab_case(const std::string& s);

}  // namespace ddc
