#include "yaml_util.hpp"

#include <cctype>
#include <cstdio>

namespace ddc::yml {

namespace {

bool is_delimiter_line(const std::string& text, size_t pos, size_t end) {
    return end - pos == 3 && text.compare(pos, 3, "---") == 0;
}

}  // namespace

frontmatter_split split_frontmatter(const std::string& text) {
    size_t first_end = text.find('\n');
    if (first_end == std::string::npos || !is_delimiter_line(text, 0, first_end))
        throw error(errc::no_frontmatter, "text does not start with a frontmatter block");

    size_t pos = first_end + 1;
    while (pos <= text.size()) {
        size_t line_end = text.find('\n', pos);
        size_t end = line_end == std::string::npos ? text.size() : line_end;
        if (is_delimiter_line(text, pos, end)) {
            frontmatter_split out;
            out.yaml = text.substr(first_end + 1, pos - first_end - 1);
            out.body = line_end == std::string::npos ? std::string() : text.substr(line_end + 1);
            return out;
        }
        if (line_end == std::string::npos) break;
        pos = line_end + 1;
    }
    throw error(errc::malformed_frontmatter, "frontmatter block is not closed");
}

YAML::Node load_mapping(const std::string& yaml_text) {
    YAML::Node node;
    try {
        node = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw error(errc::malformed_frontmatter, e.what());
    }
    if (node.IsNull() || (node.IsScalar() && node.Scalar().empty())) return YAML::Node(YAML::NodeType::Map);
    if (!node.IsMap())
        throw error(errc::malformed_frontmatter, "frontmatter is not a key/value mapping");
    return node;
}

std::optional<std::string> get_scalar(const YAML::Node& map, const std::string& key) {
    YAML::Node v = map[key];
    if (!v.IsDefined()) return std::nullopt;
    if (v.IsNull()) return std::string();
    if (!v.IsScalar())
        throw error(errc::malformed_frontmatter, "field '" + key + "' must be a single value");
    return v.Scalar();
}

std::optional<std::vector<std::string>> get_string_list(const YAML::Node& map,
                                                        const std::string& key) {
    YAML::Node v = map[key];
    if (!v.IsDefined()) return std::nullopt;
    if (v.IsNull()) return std::vector<std::string>{};
    if (v.IsScalar()) return std::vector<std::string>{v.Scalar()};
    if (!v.IsSequence())
        throw error(errc::malformed_frontmatter, "field '" + key + "' must be a list");
    std::vector<std::string> items;
    for (const auto& item : v) {
        if (!item.IsScalar())
            throw error(errc::malformed_frontmatter,
                        "field '" + key + "' must be a list of plain values");
        items.push_back(item.Scalar());
    }
    return items;
}

std::optional<int> get_int(const YAML::Node& map, const std::string& key) {
    auto s = get_scalar(map, key);
    if (!s) return std::nullopt;
    try {
        size_t used = 0;
        int value = std::stoi(*s, &used);
        if (used != s->size()) throw std::invalid_argument(*s);
        return value;
    } catch (const std::exception&) {
        throw error(errc::malformed_frontmatter, "field '" + key + "' must be an integer");
    }
}

std::optional<bool> get_bool(const YAML::Node& map, const std::string& key) {
    auto s = get_scalar(map, key);
    if (!s) return std::nullopt;
    if (*s == "true") return true;
    if (*s == "false") return false;
    throw error(errc::malformed_frontmatter, "field '" + key + "' must be true or false");
}

namespace {

bool plain_safe(const std::string& value, bool flow_context) {
    if (value.empty()) return false;
    unsigned char first = static_cast<unsigned char>(value.front());
    if (!(std::isalnum(first) || first == '_')) return false;
    if (value.back() == ' ') return false;
    for (char c : value) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isalnum(u) || u == ' ' || u == '_' || u == '.' || u == '/' || u == '(' ||
            u == ')' || u == '\'' || u == '&' || u == '+' || u == '-')
            continue;
        if (u == ',' && !flow_context) continue;
        return false;
    }
    return true;
}

}  // namespace

std::string emit_scalar(const std::string& value, bool flow_context) {
    if (plain_safe(value, flow_context)) return value;
    return emit_quoted(value);
}

std::string emit_quoted(const std::string& value) {
    std::string out = "\"";
    for (char c : value) {
        unsigned char u = static_cast<unsigned char>(c);
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (u < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\x%02x", u);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
    return out;
}

std::string emit_flow_list(const std::vector<std::string>& items) {
    std::string out = "[";
    for (size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += emit_scalar(items[i], true);
    }
    out += "]";
    return out;
}

}  // namespace ddc::yml
