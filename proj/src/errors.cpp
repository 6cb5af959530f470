#include "ddc/errors.hpp"

namespace ddc {

const char* errc_name(errc code) {
    switch (code) {
        case errc::no_frontmatter: return "NoFrontmatter";
        case errc::malformed_frontmatter: return "MalformedFrontmatter";
        case errc::unknown_entity_type: return "UnknownEntityType";
        case errc::missing_required_field: return "MissingRequiredField";
        case errc::id_filename_mismatch: return "IdFilenameMismatch";
        case errc::missing_field: return "MissingField";
        case errc::root_missing: return "RootMissing";
        case errc::unknown_entity: return "UnknownEntity";
        case errc::unknown_type: return "UnknownType";
        case errc::file_missing: return "FileMissing";
        case errc::schema_error: return "SchemaError";
        case errc::duplicate_cycle_id: return "DuplicateCycleId";
        case errc::empty_problem: return "EmptyProblem";
        case errc::io_failure: return "IoFailure";
        case errc::adapter_failure: return "AdapterFailure";
        case errc::illegal_state: return "IllegalState";
        case errc::unknown_checklist_item: return "UnknownChecklistItem";
        case errc::no_pending_attempt: return "NoPendingAttempt";
        case errc::draft_validation_failed: return "DraftValidationFailed";
        case errc::validation_blocked: return "ValidationBlocked";
        case errc::duplicate_cycle: return "DuplicateCycle";
        case errc::empty_input: return "EmptyInput";
        case errc::index_out_of_range: return "IndexOutOfRange";
        case errc::insufficient_points: return "InsufficientPoints";
        case errc::invalid_parameter: return "InvalidParameter";
        case errc::metamodel_mismatch: return "MetaModelMismatch";
        case errc::same_source_label: return "SameSourceLabel";
        case errc::invalid_changeset: return "InvalidChangeSet";
        case errc::usage_error: return "UsageError";
    }
    return "UnknownError";
}

}  // namespace ddc
