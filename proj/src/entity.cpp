#include "ddc/entity.hpp"

#include <algorithm>
#include <filesystem>
#include <set>
#include <sstream>

#include "ddc/errors.hpp"
#include "yaml_util.hpp"

namespace ddc {

namespace {

bool has_headed_section(const std::string& body) {
    size_t pos = 0;
    while (pos <= body.size()) {
        if (pos < body.size() && body[pos] == '#') return true;
        size_t nl = body.find('\n', pos);
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    return false;
}

std::string path_stem(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

entity parse_impl(const std::string& file_text, const metamodel& m, const std::string* path) {
    auto split = yml::split_frontmatter(file_text);
    YAML::Node fm = yml::load_mapping(split.yaml);

    entity e;
    if (path) e.source_path = *path;
    e.body = split.body;

    auto type = yml::get_scalar(fm, "type");
    if (!type || type->empty())
        throw error(errc::missing_required_field, "entity has no type field");
    e.entity_type = *type;
    const entity_type_def* def = m.find_entity_type(e.entity_type);
    if (!def)
        throw error(errc::unknown_entity_type,
                    "unknown entity type '" + e.entity_type + "'");

    for (const auto& field : def->required_fields) {
        if (!fm[field].IsDefined())
            throw error(errc::missing_required_field,
                        "entity is missing required field '" + field + "'");
    }

    e.id = yml::get_scalar(fm, "id").value_or("");
    e.name = yml::get_scalar(fm, "name").value_or("");
    e.description = yml::get_scalar(fm, "description").value_or("");
    e.status = yml::get_scalar(fm, "status").value_or("");

    if (path) {
        std::string stem = path_stem(*path);
        if (stem != e.id)
            throw error(errc::id_filename_mismatch,
                        "id '" + e.id + "' does not match filename '" + stem + "'");
    }

    std::set<std::string> seen;
    for (const auto& kv : fm) {
        if (!kv.first.IsScalar())
            throw error(errc::malformed_frontmatter, "frontmatter keys must be plain strings");
        std::string key = kv.first.Scalar();
        if (!seen.insert(key).second)
            throw error(errc::malformed_frontmatter, "duplicate frontmatter key '" + key + "'");
        if (key == "type" || key == "id" || key == "name" || key == "description" ||
            key == "status")
            continue;
        if (key == "depth") {
            auto v = yml::get_scalar(fm, key).value_or("");
            if (v == "deep")
                e.depth_override = curation_depth::deep;
            else if (v == "stub")
                e.depth_override = curation_depth::stub;
            else
                throw error(errc::malformed_frontmatter,
                            "depth must be deep or stub, got '" + v + "'");
            continue;
        }
        if (const relationship_type_def* rel = m.find_relationship_by_key(key)) {
            if (rel->card == cardinality::one) {
                if (kv.second.IsSequence())
                    throw error(errc::malformed_frontmatter,
                                "relationship '" + key + "' takes a single target");
                e.relationships[key] = {yml::get_scalar(fm, key).value_or("")};
            } else {
                e.relationships[key] = yml::get_string_list_or_empty(fm, key);
            }
            continue;
        }
        field_value value;
        if (kv.second.IsSequence()) {
            value.is_list = true;
            value.items = yml::get_string_list_or_empty(fm, key);
        } else {
            value.scalar = yml::get_scalar(fm, key).value_or("");
        }
        e.extras[key] = std::move(value);
    }
    return e;
}

}  // namespace

curation_depth entity::depth() const {
    if (depth_override) return *depth_override;
    return has_headed_section(body) ? curation_depth::deep : curation_depth::stub;
}

std::vector<std::pair<std::string, std::string>> entity::relationship_pairs() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [key, targets] : relationships)
        for (const auto& target : targets) out.emplace_back(key, target);
    return out;
}

bool entity::operator==(const entity& other) const {
    return entity_type == other.entity_type && id == other.id && name == other.name &&
           description == other.description && status == other.status &&
           relationships == other.relationships && extras == other.extras &&
           depth_override == other.depth_override && body == other.body;
}

entity parse_entity(const std::string& file_text, const metamodel& m, const std::string& path) {
    return parse_impl(file_text, m, &path);
}

entity parse_entity(const std::string& file_text, const metamodel& m) {
    return parse_impl(file_text, m, nullptr);
}

std::string serialize_entity(const entity& e) {
    std::ostringstream out;
    out << "---\n";
    out << "type: " << yml::emit_scalar(e.entity_type) << "\n";
    out << "id: " << yml::emit_scalar(e.id) << "\n";
    out << "name: " << yml::emit_scalar(e.name) << "\n";
    out << "description: " << yml::emit_scalar(e.description) << "\n";
    out << "status: " << yml::emit_scalar(e.status) << "\n";
    if (e.depth_override)
        out << "depth: " << (*e.depth_override == curation_depth::deep ? "deep" : "stub")
            << "\n";
    for (const auto& [key, value] : e.extras) {
        out << key << ": ";
        if (value.is_list)
            out << yml::emit_flow_list(value.items);
        else
            out << yml::emit_scalar(value.scalar);
        out << "\n";
    }
    for (const auto& [key, targets] : e.relationships) {
        out << key << ": ";
        if (targets.size() == 1)
            out << yml::emit_scalar(targets.front());
        else
            out << yml::emit_flow_list(targets);
        out << "\n";
    }
    out << "---\n";
    out << e.body;
    return out.str();
}

}  // namespace ddc
