#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ddc {

// The eight body sections of a cycle log, in writing order.
inline const std::vector<std::string> cycle_log_sections = {
    "Problem Input",
    "Agent Before (Zero/Current Context)",
    "Information Checklist",
    "Human Answers",
    "Entities Curated",
    "Agent After (With Context)",
    "Human Review",
    "Context Reuse Notes",
};

struct cycle_log_record {
    std::string cycle_id;  // zero-padded, e.g. "001"
    std::string problem_name;
    std::string date_started;    // YYYY-MM-DD
    std::string date_completed;  // YYYY-MM-DD
    int time_spent_minutes = 0;
    int entities_created = 0;
    int entities_updated = 0;
    std::vector<std::string> entities_reused;  // ids, absent key tolerated
    std::string domain;
    // (heading, content) pairs in file order; content excludes the heading.
    std::vector<std::pair<std::string, std::string>> sections;

    int cycle_number() const;  // numeric value of cycle_id
};

// Errors: malformed_frontmatter, missing_field (message names the field).
cycle_log_record parse_cycle_log(const std::string& file_text);

// Canonical log text: fixed-order frontmatter (entities_reused after
// entities_updated), an H1 "# Cycle NNN: <problem>", then the eight sections.
std::string serialize_cycle_log(const cycle_log_record& record);

}  // namespace ddc
