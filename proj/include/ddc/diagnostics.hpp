#pragma once

#include <string>
#include <vector>

namespace ddc {

enum class severity { warning, error };

// Diagnostic codes form a fixed registry (see README). Codes are plain
// strings so custom tooling can extend the set without touching this header.
namespace diag {
inline constexpr const char* no_frontmatter = "NO_FRONTMATTER";
inline constexpr const char* malformed_frontmatter = "MALFORMED_FRONTMATTER";
inline constexpr const char* unknown_entity_type = "UNKNOWN_ENTITY_TYPE";
inline constexpr const char* missing_required_field = "MISSING_REQUIRED_FIELD";
inline constexpr const char* id_filename_mismatch = "ID_FILENAME_MISMATCH";
inline constexpr const char* duplicate_id = "DUPLICATE_ID";
inline constexpr const char* relationship_key_not_allowed = "RELATIONSHIP_KEY_NOT_ALLOWED";
inline constexpr const char* naming_convention = "NAMING_CONVENTION";
inline constexpr const char* empty_name = "EMPTY_NAME";
inline constexpr const char* invalid_status = "INVALID_STATUS";
inline constexpr const char* stub_description = "STUB_DESCRIPTION";
inline constexpr const char* dangling_target = "DANGLING_TARGET";
inline constexpr const char* endpoint_type_mismatch = "ENDPOINT_TYPE_MISMATCH";
inline constexpr const char* orphan_entity = "ORPHAN_ENTITY";
}  // namespace diag

struct diagnostic {
    std::string code;
    severity level = severity::error;
    std::string entity_id;  // empty when not entity-scoped
    std::string message;
    std::string path;  // empty when not file-scoped
    int line = 0;      // 0 when unknown
};

// "severity:CODE:path:line:message" — the machine-parseable line format.
std::string format_diagnostic(const diagnostic& d);

// Stable report order: (path, line, code, entity_id, message).
void sort_diagnostics(std::vector<diagnostic>& diags);

struct validation_report {
    std::vector<diagnostic> diagnostics;
    int checked_entities = 0;

    int error_count() const;
    int warning_count() const;
};

}  // namespace ddc
