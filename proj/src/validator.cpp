#include "ddc/validator.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include "ddc/errors.hpp"

namespace ddc {

namespace {

diagnostic entity_diag(const entity& e, const char* code, severity level, std::string message) {
    diagnostic d;
    d.code = code;
    d.level = level;
    d.entity_id = e.id;
    d.path = e.source_path.empty() ? entity_rel_path(e).generic_string() : e.source_path;
    d.message = std::move(message);
    return d;
}

constexpr size_t kStubDescriptionLimit = 200;

}  // namespace

std::vector<diagnostic> validate_entity(const entity& e, const metamodel& m) {
    std::vector<diagnostic> out;

    const entity_type_def* def = m.find_entity_type(e.entity_type);
    if (!def) {
        out.push_back(entity_diag(e, diag::unknown_entity_type, severity::error,
                                  "unknown entity type '" + e.entity_type + "'"));
        return out;
    }

    if (e.id.empty())
        out.push_back(entity_diag(e, diag::missing_required_field, severity::error,
                                  "id is empty"));
    else if (!is_kebab_case(e.id))
        out.push_back(entity_diag(e, diag::naming_convention, severity::error,
                                  "id '" + e.id + "' is not kebab-case"));

    if (e.name.empty())
        out.push_back(entity_diag(e, diag::empty_name, severity::error, "name is empty"));

    if (e.description.empty())
        out.push_back(entity_diag(e, diag::missing_required_field, severity::error,
                                  "description is empty"));

    if (std::find(status_vocabulary.begin(), status_vocabulary.end(), e.status) ==
        status_vocabulary.end())
        out.push_back(entity_diag(e, diag::invalid_status, severity::error,
                                  "status '" + e.status + "' is not one of "
                                  "active, deprecated, draft, stub"));

    for (const auto& field : def->required_fields) {
        if (std::find(core_required_fields.begin(), core_required_fields.end(), field) !=
            core_required_fields.end())
            continue;
        if (!e.extras.count(field) && !e.relationships.count(field))
            out.push_back(entity_diag(e, diag::missing_required_field, severity::error,
                                      "required field '" + field + "' is missing"));
    }

    for (const auto& [key, targets] : e.relationships) {
        const relationship_type_def* rel = m.find_relationship_by_key(key);
        if (!rel) {
            out.push_back(entity_diag(e, diag::relationship_key_not_allowed, severity::error,
                                      "unknown relationship key '" + key + "'"));
            continue;
        }
        const auto& allowed = def->allowed_relationship_keys;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            out.push_back(entity_diag(e, diag::relationship_key_not_allowed, severity::error,
                                      "relationship key '" + key + "' is not allowed on type '" +
                                          e.entity_type + "'"));
        }
        if (rel->card == cardinality::one && targets.size() > 1)
            out.push_back(entity_diag(e, diag::relationship_key_not_allowed, severity::error,
                                      "relationship '" + key + "' takes a single target"));
    }

    if (e.depth() == curation_depth::stub && e.description.size() > kStubDescriptionLimit)
        out.push_back(entity_diag(e, diag::stub_description, severity::error,
                                  "stub description exceeds " +
                                      std::to_string(kStubDescriptionLimit) + " characters"));

    return out;
}

validation_report validate_kb(const knowledge_base& kb) {
    validation_report report;
    report.checked_entities = static_cast<int>(kb.entities.size());

    for (const auto& [id, e] : kb.entities) {
        auto diags = validate_entity(e, kb.model);
        report.diagnostics.insert(report.diagnostics.end(), diags.begin(), diags.end());
    }

    std::set<std::string> linked;
    for (const auto& edge : kb.edges) {
        const entity& source = kb.entities.at(edge.source_id);
        auto target_it = kb.entities.find(edge.target_id);
        if (target_it == kb.entities.end()) {
            report.diagnostics.push_back(entity_diag(
                source, diag::dangling_target, severity::error,
                "relationship '" + edge.key + "' references missing entity '" +
                    edge.target_id + "'"));
            linked.insert(edge.source_id);
            continue;
        }
        linked.insert(edge.source_id);
        linked.insert(edge.target_id);

        const relationship_type_def* rel = kb.model.find_relationship_by_key(edge.key);
        if (!rel) continue;  // already reported per-entity
        const entity& target = target_it->second;
        if (source.entity_type != rel->source_type)
            report.diagnostics.push_back(entity_diag(
                source, diag::endpoint_type_mismatch, severity::error,
                "relationship '" + edge.key + "' starts from type '" + source.entity_type +
                    "' (expected " + rel->source_type + ")"));
        if (target.entity_type != rel->target_type)
            report.diagnostics.push_back(entity_diag(
                source, diag::endpoint_type_mismatch, severity::error,
                "relationship '" + edge.key + "' targets '" + edge.target_id + "' of type '" +
                    target.entity_type + "' (expected " + rel->target_type + ")"));
    }

    for (const auto& [id, e] : kb.entities) {
        if (!linked.count(id))
            report.diagnostics.push_back(entity_diag(e, diag::orphan_entity, severity::warning,
                                                     "entity has no relationships in either "
                                                     "direction"));
    }

    sort_diagnostics(report.diagnostics);
    return report;
}

int ci_check(const std::filesystem::path& root, const metamodel& m, bool fail_on_warning,
             std::ostream& out) {
    std::vector<diagnostic> diagnostics;
    knowledge_base kb;
    try {
        kb = load_kb(root, m, diagnostics);
    } catch (const error& e) {
        out << "error:" << errc_name(e.code()) << ":" << root.generic_string() << ":0:"
            << e.what() << "\n";
        return 2;
    }

    validation_report report = validate_kb(kb);
    report.diagnostics.insert(report.diagnostics.end(), diagnostics.begin(), diagnostics.end());
    sort_diagnostics(report.diagnostics);

    for (const auto& d : report.diagnostics) out << format_diagnostic(d) << "\n";

    int errors = report.error_count();
    int warnings = report.warning_count();
    if (errors > 0) return 1;
    if (fail_on_warning && warnings > 0) return 1;
    return 0;
}

}  // namespace ddc
