#include "ddc/cycle_log.hpp"

#include <sstream>

#include "ddc/errors.hpp"
#include "yaml_util.hpp"

namespace ddc {

namespace {

std::string require_scalar(const YAML::Node& fm, const std::string& key) {
    auto v = yml::get_scalar(fm, key);
    if (!v) throw error(errc::missing_field, "cycle log is missing '" + key + "'");
    return *v;
}

int require_int(const YAML::Node& fm, const std::string& key) {
    if (!fm[key].IsDefined())
        throw error(errc::missing_field, "cycle log is missing '" + key + "'");
    auto v = yml::get_int(fm, key);
    return *v;
}

std::string trim(const std::string& s) {
    size_t begin = s.find_first_not_of(" \t\n");
    if (begin == std::string::npos) return "";
    size_t end = s.find_last_not_of(" \t\n");
    return s.substr(begin, end - begin + 1);
}

bool is_section_heading(const std::string& line) {
    return line.size() > 3 && line.compare(0, 3, "## ") == 0;
}

}  // namespace

int cycle_log_record::cycle_number() const {
    try {
        size_t used = 0;
        int n = std::stoi(cycle_id, &used);
        if (used != cycle_id.size()) throw std::invalid_argument(cycle_id);
        return n;
    } catch (const std::exception&) {
        throw error(errc::malformed_frontmatter,
                    "cycle_id '" + cycle_id + "' is not numeric");
    }
}

cycle_log_record parse_cycle_log(const std::string& file_text) {
    yml::frontmatter_split split;
    try {
        split = yml::split_frontmatter(file_text);
    } catch (const error& e) {
        if (e.code() == errc::no_frontmatter)
            throw error(errc::malformed_frontmatter, e.what());
        throw;
    }
    YAML::Node fm = yml::load_mapping(split.yaml);

    cycle_log_record rec;
    rec.cycle_id = require_scalar(fm, "cycle_id");
    rec.problem_name = require_scalar(fm, "problem_name");
    rec.date_started = require_scalar(fm, "date_started");
    rec.date_completed = require_scalar(fm, "date_completed");
    rec.time_spent_minutes = require_int(fm, "time_spent_minutes");
    rec.entities_created = require_int(fm, "entities_created");
    rec.entities_updated = require_int(fm, "entities_updated");
    rec.entities_reused = yml::get_string_list_or_empty(fm, "entities_reused");
    rec.domain = require_scalar(fm, "domain");

    std::istringstream body(split.body);
    std::string line;
    std::string heading;
    std::string content;
    bool in_section = false;
    while (std::getline(body, line)) {
        if (is_section_heading(line)) {
            if (in_section) rec.sections.emplace_back(heading, trim(content));
            heading = line.substr(3);
            content.clear();
            in_section = true;
            continue;
        }
        if (in_section) {
            content += line;
            content += '\n';
        }
    }
    if (in_section) rec.sections.emplace_back(heading, trim(content));
    return rec;
}

std::string serialize_cycle_log(const cycle_log_record& record) {
    std::ostringstream out;
    out << "---\n";
    out << "cycle_id: " << yml::emit_quoted(record.cycle_id) << "\n";
    out << "problem_name: " << yml::emit_quoted(record.problem_name) << "\n";
    out << "date_started: " << record.date_started << "\n";
    out << "date_completed: " << record.date_completed << "\n";
    out << "time_spent_minutes: " << record.time_spent_minutes << "\n";
    out << "entities_created: " << record.entities_created << "\n";
    out << "entities_updated: " << record.entities_updated << "\n";
    out << "entities_reused: " << yml::emit_flow_list(record.entities_reused) << "\n";
    out << "domain: " << yml::emit_quoted(record.domain) << "\n";
    out << "---\n";
    out << "\n# Cycle " << record.cycle_id << ": " << record.problem_name << "\n";
    for (const auto& [heading, content] : record.sections) {
        out << "\n## " << heading << "\n";
        if (!content.empty()) out << "\n" << content << "\n";
    }
    return out.str();
}

}  // namespace ddc
