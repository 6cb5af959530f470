#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ddc/diagnostics.hpp"

namespace ddc {

// Stable error codes surfaced by operations. The CLI prints the code name so
// scripts can match on it; tests assert on the enum.
enum class errc {
    // entity / log parsing
    no_frontmatter,
    malformed_frontmatter,
    unknown_entity_type,
    missing_required_field,
    id_filename_mismatch,
    missing_field,
    // store
    root_missing,
    unknown_entity,
    unknown_type,
    // metamodel
    file_missing,
    schema_error,
    // cycle engine
    duplicate_cycle_id,
    empty_problem,
    io_failure,
    adapter_failure,
    illegal_state,
    unknown_checklist_item,
    no_pending_attempt,
    draft_validation_failed,
    validation_blocked,
    // analytics
    duplicate_cycle,
    empty_input,
    index_out_of_range,
    insufficient_points,
    invalid_parameter,
    // governance
    metamodel_mismatch,
    same_source_label,
    invalid_changeset,
    // cli
    usage_error,
};

const char* errc_name(errc code);

class error : public std::runtime_error {
public:
    error(errc code, std::string message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    error(errc code, std::string message, std::vector<diagnostic> diags)
        : error(code, std::move(message)) {
        diagnostics_ = std::move(diags);
    }

    errc code() const { return code_; }
    const std::vector<diagnostic>& diagnostics() const { return diagnostics_; }

private:
    errc code_;
    std::vector<diagnostic> diagnostics_;
};

}  // namespace ddc
