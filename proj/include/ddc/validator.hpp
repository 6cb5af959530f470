#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ddc/entity.hpp"
#include "ddc/kb.hpp"
#include "ddc/metamodel.hpp"

namespace ddc {

// Single-entity checks: required fields present and non-empty, known type,
// relationship keys allowed for the type, kebab-case id, name non-empty,
// status in vocabulary, stub description rules. No cross-entity knowledge.
std::vector<diagnostic> validate_entity(const entity& e, const metamodel& m);

// Whole-graph pass: every per-entity check plus dangling targets, endpoint
// type mismatches, and orphan warnings (no edge in either direction).
validation_report validate_kb(const knowledge_base& kb);

// Loads the workspace, merges load diagnostics with the validation report,
// prints one machine-parseable line per finding (nothing when clean), and
// returns the process exit status: 0 clean, 1 findings, 2 usage/IO.
int ci_check(const std::filesystem::path& root, const metamodel& m,
             bool fail_on_warning, std::ostream& out);

}  // namespace ddc
