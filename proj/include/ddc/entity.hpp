#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ddc/metamodel.hpp"

namespace ddc {

enum class curation_depth { deep, stub };

// Extra (non-core, non-relationship) frontmatter values: scalar or flow list.
struct field_value {
    bool is_list = false;
    std::string scalar;
    std::vector<std::string> items;

    bool operator==(const field_value&) const = default;
};

struct entity {
    std::string entity_type;
    std::string id;
    std::string name;
    std::string description;
    std::string status;
    // Keyed by frontmatter key (implements_capability, related_systems, ...),
    // key-sorted; target order within a key preserves the source file.
    std::map<std::string, std::vector<std::string>> relationships;
    std::map<std::string, field_value> extras;
    std::optional<curation_depth> depth_override;
    std::string body;  // verbatim text after the closing delimiter line
    std::string source_path;

    // Explicit override wins; otherwise stub means no headed body section.
    curation_depth depth() const;

    // Flattened (frontmatter_key, target_id) pairs in key-sorted order.
    std::vector<std::pair<std::string, std::string>> relationship_pairs() const;

    // Semantic equality: everything except source_path.
    bool operator==(const entity& other) const;
};

// Parses one entity file. Errors: no_frontmatter, malformed_frontmatter,
// unknown_entity_type, missing_required_field, id_filename_mismatch. The
// path-less overload skips the id/filename check (used for embedded drafts).
entity parse_entity(const std::string& file_text, const metamodel& m,
                    const std::string& path);
entity parse_entity(const std::string& file_text, const metamodel& m);

// Canonical form: type, id, name, description, status, depth (if overridden),
// extras alphabetically, relationship keys alphabetically, then the body
// verbatim. serialize then parse is the identity; on canonical files the
// bytes are identical.
std::string serialize_entity(const entity& e);

}  // namespace ddc
