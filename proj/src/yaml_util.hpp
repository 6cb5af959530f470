#pragma once

#include <yaml-cpp/yaml.h>

#include <optional>
#include <string>
#include <vector>

#include "ddc/errors.hpp"

// Shared YAML plumbing: frontmatter splitting, typed field access over
// yaml-cpp nodes, and the canonical emitter. Parsing accepts anything
// yaml-cpp accepts; emission is deterministic so canonical files are
// byte-stable.
namespace ddc::yml {

struct frontmatter_split {
    std::string yaml;  // text between the delimiter lines
    std::string body;  // verbatim text after the closing delimiter line
    int yaml_start_line = 2;  // 1-based line of the first frontmatter line
};

// Errors: no_frontmatter (text does not open with a "---" line),
// malformed_frontmatter (no closing delimiter).
frontmatter_split split_frontmatter(const std::string& text);

// Errors: malformed_frontmatter (parse failure or non-mapping document).
YAML::Node load_mapping(const std::string& yaml_text);

std::optional<std::string> get_scalar(const YAML::Node& map, const std::string& key);
// A scalar value is accepted as a one-element list.
std::optional<std::vector<std::string>> get_string_list(const YAML::Node& map,
                                                        const std::string& key);
inline std::vector<std::string> get_string_list_or_empty(const YAML::Node& map,
                                                         const std::string& key) {
    auto v = get_string_list(map, key);
    return v ? *v : std::vector<std::string>{};
}
std::optional<int> get_int(const YAML::Node& map, const std::string& key);
std::optional<bool> get_bool(const YAML::Node& map, const std::string& key);

// Canonical emission. Values stay plain when they are safe plain scalars and
// are double-quoted (with \\, \", \n, \t, \xNN escapes) otherwise.
std::string emit_scalar(const std::string& value, bool flow_context = false);
// Always double-quoted, same escapes.
std::string emit_quoted(const std::string& value);
std::string emit_flow_list(const std::vector<std::string>& items);

}  // namespace ddc::yml
