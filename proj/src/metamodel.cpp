#include "ddc/metamodel.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "ddc/errors.hpp"
#include "yaml_util.hpp"

namespace ddc {

namespace {

const std::vector<std::string> kDepthOptional = {"depth"};

entity_type_def make_type(std::string name, std::string description,
                          std::vector<std::string> rel_keys) {
    entity_type_def def;
    def.type_name = std::move(name);
    def.description = std::move(description);
    def.required_fields = core_required_fields;
    def.optional_fields = kDepthOptional;
    def.allowed_relationship_keys = std::move(rel_keys);
    return def;
}

relationship_type_def make_rel(std::string rel_name, std::string key, std::string source,
                               std::string target, cardinality card, bool directed) {
    relationship_type_def def;
    def.rel_name = std::move(rel_name);
    def.frontmatter_key = std::move(key);
    def.source_type = std::move(source);
    def.target_type = std::move(target);
    def.card = card;
    def.directed = directed;
    return def;
}

metamodel build_builtin() {
    metamodel m;
    m.version = "builtin";
    m.entity_types = {
        make_type("api", "A machine-facing contract exposed by a system", {"exposed_by"}),
        make_type("capability", "A business capability the organization provides",
                  {"owned_by"}),
        make_type("data-model", "A core data structure shared across systems", {"used_by"}),
        make_type("decision", "An architectural or organizational decision", {"affects"}),
        make_type("jargon-business", "Business-side terminology and status vocabulary",
                  {"defines"}),
        make_type("jargon-tech", "Technology-side terminology and patterns", {"describes"}),
        make_type("persona", "A user role and its needs", {"belongs_to"}),
        make_type("platform", "Shared infrastructure that systems build on", {}),
        make_type("process", "A business process spanning systems", {"uses"}),
        make_type("system", "A deployed software system",
                  {"depends_on", "implements_capability", "related_systems"}),
        make_type("team", "An organizational unit owning capabilities", {}),
    };
    m.relationship_types = {
        make_rel("affects", "affects", "decision", "capability", cardinality::one, true),
        make_rel("belongs_to", "belongs_to", "persona", "team", cardinality::one, true),
        make_rel("defines", "defines", "jargon-business", "capability", cardinality::one, true),
        make_rel("depends_on", "depends_on", "system", "system", cardinality::many, true),
        make_rel("describes", "describes", "jargon-tech", "system", cardinality::one, true),
        make_rel("exposed_by", "exposed_by", "api", "system", cardinality::one, true),
        make_rel("implements", "implements_capability", "system", "capability",
                 cardinality::one, true),
        make_rel("owned_by", "owned_by", "capability", "team", cardinality::one, true),
        make_rel("related_systems", "related_systems", "system", "system", cardinality::many,
                 false),
        make_rel("used_by", "used_by", "data-model", "system", cardinality::many, true),
        make_rel("uses", "uses", "process", "system", cardinality::many, true),
    };
    return m;
}

template <typename T, typename Key>
std::vector<T> sorted_by(std::vector<T> items, Key key) {
    std::sort(items.begin(), items.end(),
              [&](const T& a, const T& b) { return key(a) < key(b); });
    return items;
}

bool is_snake_case(const std::string& s) {
    if (s.empty() || s.front() == '_' || s.back() == '_') return false;
    for (char c : s)
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
    return true;
}

diagnostic meta_error(std::string code, std::string message) {
    diagnostic d;
    d.code = std::move(code);
    d.level = severity::error;
    d.message = std::move(message);
    return d;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error(errc::file_missing, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw error(errc::io_failure, "cannot write " + path.string());
    out << text;
    if (!out) throw error(errc::io_failure, "cannot write " + path.string());
}

void check_known_keys(const YAML::Node& entry, const std::set<std::string>& known,
                      const std::string& context) {
    for (const auto& kv : entry) {
        std::string key = kv.first.Scalar();
        if (!known.count(key))
            throw error(errc::schema_error, context + ": unknown key '" + key + "'");
    }
}

}  // namespace

const entity_type_def* metamodel::find_entity_type(const std::string& name) const {
    for (const auto& t : entity_types)
        if (t.type_name == name) return &t;
    return nullptr;
}

const relationship_type_def* metamodel::find_relationship_by_key(const std::string& key) const {
    for (const auto& r : relationship_types)
        if (r.frontmatter_key == key) return &r;
    return nullptr;
}

const relationship_type_def* metamodel::find_relationship_by_name(const std::string& name) const {
    for (const auto& r : relationship_types)
        if (r.rel_name == name) return &r;
    return nullptr;
}

bool metamodel::operator==(const metamodel& other) const {
    auto type_key = [](const entity_type_def& t) { return t.type_name; };
    auto rel_key = [](const relationship_type_def& r) { return r.rel_name; };
    return version == other.version &&
           sorted_by(entity_types, type_key) == sorted_by(other.entity_types, type_key) &&
           sorted_by(relationship_types, rel_key) ==
               sorted_by(other.relationship_types, rel_key);
}

const metamodel& builtin_metamodel() {
    static const metamodel m = build_builtin();
    return m;
}

bool is_kebab_case(const std::string& s) {
    if (s.empty() || s.front() == '-' || s.back() == '-') return false;
    bool prev_dash = false;
    for (char c : s) {
        if (c >= 'a' && c <= 'z') {
            prev_dash = false;
        } else if (c >= '0' && c <= '9') {
            prev_dash = false;
        } else if (c == '-') {
            if (prev_dash) return false;
            prev_dash = true;
        } else {
            return false;
        }
    }
    return true;
}

std::vector<diagnostic> validate_metamodel(const metamodel& m) {
    std::vector<diagnostic> out;
    std::set<std::string> type_names;
    for (const auto& t : m.entity_types) {
        if (!type_names.insert(t.type_name).second)
            out.push_back(meta_error("META_DUPLICATE_TYPE",
                                     "duplicate entity type '" + t.type_name + "'"));
        if (!is_kebab_case(t.type_name))
            out.push_back(meta_error("META_NAMING",
                                     "entity type '" + t.type_name + "' is not kebab-case"));
        for (const auto& field : core_required_fields) {
            if (std::find(t.required_fields.begin(), t.required_fields.end(), field) ==
                t.required_fields.end())
                out.push_back(meta_error("META_MISSING_CORE_FIELDS",
                                         "entity type '" + t.type_name +
                                             "' does not require core field '" + field + "'"));
        }
    }

    std::set<std::string> rel_names;
    std::set<std::string> rel_keys;
    for (const auto& r : m.relationship_types) {
        if (!rel_names.insert(r.rel_name).second)
            out.push_back(meta_error("META_DUPLICATE_RELATIONSHIP",
                                     "duplicate relationship '" + r.rel_name + "'"));
        if (!rel_keys.insert(r.frontmatter_key).second)
            out.push_back(meta_error("META_DUPLICATE_KEY", "duplicate frontmatter key '" +
                                                               r.frontmatter_key + "'"));
        if (!is_snake_case(r.rel_name))
            out.push_back(meta_error("META_NAMING",
                                     "relationship '" + r.rel_name + "' is not snake_case"));
        if (!is_snake_case(r.frontmatter_key))
            out.push_back(meta_error("META_NAMING", "frontmatter key '" + r.frontmatter_key +
                                                        "' is not snake_case"));
        if (!m.find_entity_type(r.source_type))
            out.push_back(meta_error("META_UNDEFINED_TYPE",
                                     "relationship '" + r.rel_name +
                                         "' has undefined source type '" + r.source_type + "'"));
        if (!m.find_entity_type(r.target_type))
            out.push_back(meta_error("META_UNDEFINED_TYPE",
                                     "relationship '" + r.rel_name +
                                         "' has undefined target type '" + r.target_type + "'"));
        if (!r.directed && r.source_type != r.target_type)
            out.push_back(meta_error("META_BAD_UNDIRECTED",
                                     "undirected relationship '" + r.rel_name +
                                         "' must join a type to itself"));
    }

    for (const auto& t : m.entity_types) {
        for (const auto& key : t.allowed_relationship_keys) {
            const auto* rel = m.find_relationship_by_key(key);
            if (!rel) {
                out.push_back(meta_error("META_UNRESOLVED_KEY",
                                         "entity type '" + t.type_name +
                                             "' allows unresolved relationship key '" + key +
                                             "'"));
                continue;
            }
            if (rel->source_type != t.type_name)
                out.push_back(meta_error(
                    "META_KEY_SOURCE_MISMATCH",
                    "entity type '" + t.type_name + "' allows key '" + key +
                        "' whose relationship starts from '" + rel->source_type + "'"));
        }
    }
    sort_diagnostics(out);
    return out;
}

namespace {

std::vector<entity_type_def> parse_entity_types(const YAML::Node& root,
                                                const std::filesystem::path& path,
                                                std::string& version) {
    check_known_keys(root, {"version", "entity_types"}, path.string());
    if (auto v = yml::get_scalar(root, "version")) version = *v;
    std::vector<entity_type_def> out;
    YAML::Node types = root["entity_types"];
    if (!types.IsDefined() || types.IsNull()) return out;
    if (!types.IsMap())
        throw error(errc::schema_error, path.string() + ": entity_types must be a mapping");
    for (const auto& kv : types) {
        entity_type_def def;
        def.type_name = kv.first.Scalar();
        const YAML::Node& entry = kv.second;
        if (!entry.IsMap() && !entry.IsNull())
            throw error(errc::schema_error,
                        path.string() + ": entity type '" + def.type_name + "' must be a mapping");
        if (entry.IsMap()) {
            check_known_keys(entry,
                             {"description", "required_fields", "optional_fields",
                              "allowed_relationship_keys"},
                             path.string() + ": entity type '" + def.type_name + "'");
            if (auto d = yml::get_scalar(entry, "description")) def.description = *d;
            if (auto f = yml::get_string_list(entry, "required_fields"))
                def.required_fields = *f;
            else
                def.required_fields = core_required_fields;
            if (auto f = yml::get_string_list(entry, "optional_fields")) def.optional_fields = *f;
            if (auto f = yml::get_string_list(entry, "allowed_relationship_keys"))
                def.allowed_relationship_keys = *f;
        } else {
            def.required_fields = core_required_fields;
        }
        out.push_back(std::move(def));
    }
    return out;
}

std::vector<relationship_type_def> parse_relationship_types(const YAML::Node& root,
                                                            const std::filesystem::path& path) {
    check_known_keys(root, {"relationship_types"}, path.string());
    std::vector<relationship_type_def> out;
    YAML::Node rels = root["relationship_types"];
    if (!rels.IsDefined() || rels.IsNull()) return out;
    if (!rels.IsMap())
        throw error(errc::schema_error, path.string() + ": relationship_types must be a mapping");
    for (const auto& kv : rels) {
        relationship_type_def def;
        def.rel_name = kv.first.Scalar();
        const YAML::Node& entry = kv.second;
        if (!entry.IsMap())
            throw error(errc::schema_error, path.string() + ": relationship '" + def.rel_name +
                                                "' must be a mapping");
        check_known_keys(entry,
                         {"frontmatter_key", "source_type", "target_type", "cardinality",
                          "directed"},
                         path.string() + ": relationship '" + def.rel_name + "'");
        def.frontmatter_key = yml::get_scalar(entry, "frontmatter_key").value_or(def.rel_name);
        auto source = yml::get_scalar(entry, "source_type");
        auto target = yml::get_scalar(entry, "target_type");
        if (!source || !target)
            throw error(errc::schema_error, path.string() + ": relationship '" + def.rel_name +
                                                "' needs source_type and target_type");
        def.source_type = *source;
        def.target_type = *target;
        auto card = yml::get_scalar(entry, "cardinality").value_or("one");
        if (card == "one")
            def.card = cardinality::one;
        else if (card == "many")
            def.card = cardinality::many;
        else
            throw error(errc::schema_error, path.string() + ": relationship '" + def.rel_name +
                                                "' has cardinality '" + card +
                                                "' (expected one or many)");
        def.directed = yml::get_bool(entry, "directed").value_or(true);
        out.push_back(std::move(def));
    }
    return out;
}

YAML::Node load_yaml_file(const std::filesystem::path& path) {
    std::string text = read_file(path);
    try {
        YAML::Node node = YAML::Load(text);
        if (node.IsNull()) return YAML::Node(YAML::NodeType::Map);
        if (!node.IsMap())
            throw error(errc::schema_error, path.string() + ": expected a top-level mapping");
        return node;
    } catch (const YAML::Exception& e) {
        throw error(errc::schema_error, path.string() + ": " + e.what());
    }
}

}  // namespace

metamodel load_metamodel(const std::filesystem::path& entity_types_file,
                         const std::filesystem::path& relationship_types_file,
                         bool allow_defaults) {
    const metamodel& fallback = builtin_metamodel();
    metamodel m;
    m.version = fallback.version;

    if (std::filesystem::exists(entity_types_file)) {
        m.entity_types =
            parse_entity_types(load_yaml_file(entity_types_file), entity_types_file, m.version);
    } else if (allow_defaults) {
        m.entity_types = fallback.entity_types;
    } else {
        throw error(errc::file_missing, "cannot read " + entity_types_file.string());
    }

    if (std::filesystem::exists(relationship_types_file)) {
        m.relationship_types = parse_relationship_types(load_yaml_file(relationship_types_file),
                                                        relationship_types_file);
    } else if (allow_defaults) {
        m.relationship_types = fallback.relationship_types;
    } else {
        throw error(errc::file_missing, "cannot read " + relationship_types_file.string());
    }

    auto diags = validate_metamodel(m);
    bool bad = false;
    for (const auto& d : diags)
        if (d.level == severity::error) bad = true;
    if (bad) throw error(errc::schema_error, "meta-model failed validation", std::move(diags));
    return m;
}

void save_metamodel(const metamodel& m, const std::filesystem::path& entity_types_file,
                    const std::filesystem::path& relationship_types_file) {
    auto types = sorted_by(m.entity_types,
                           [](const entity_type_def& t) { return t.type_name; });
    std::ostringstream et;
    et << "version: " << yml::emit_scalar(m.version) << "\n";
    et << "entity_types:\n";
    for (const auto& t : types) {
        et << "  " << yml::emit_scalar(t.type_name) << ":\n";
        et << "    description: " << yml::emit_scalar(t.description) << "\n";
        et << "    required_fields: " << yml::emit_flow_list(t.required_fields) << "\n";
        et << "    optional_fields: " << yml::emit_flow_list(t.optional_fields) << "\n";
        et << "    allowed_relationship_keys: "
           << yml::emit_flow_list(t.allowed_relationship_keys) << "\n";
    }

    auto rels = sorted_by(m.relationship_types,
                          [](const relationship_type_def& r) { return r.rel_name; });
    std::ostringstream rt;
    rt << "relationship_types:\n";
    for (const auto& r : rels) {
        rt << "  " << yml::emit_scalar(r.rel_name) << ":\n";
        rt << "    frontmatter_key: " << yml::emit_scalar(r.frontmatter_key) << "\n";
        rt << "    source_type: " << yml::emit_scalar(r.source_type) << "\n";
        rt << "    target_type: " << yml::emit_scalar(r.target_type) << "\n";
        rt << "    cardinality: " << (r.card == cardinality::one ? "one" : "many") << "\n";
        rt << "    directed: " << (r.directed ? "true" : "false") << "\n";
    }

    write_file(entity_types_file, et.str());
    write_file(relationship_types_file, rt.str());
}

}  // namespace ddc
