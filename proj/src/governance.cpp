#include "ddc/governance.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ddc/errors.hpp"
#include "yaml_util.hpp"

namespace ddc {

namespace fs = std::filesystem;

const char* conflict_kind_name(conflict_kind k) {
    switch (k) {
        case conflict_kind::divergent_modify: return "divergent-modify";
        case conflict_kind::add_add: return "add-add";
        case conflict_kind::modify_remove: return "modify-remove";
    }
    return "divergent-modify";
}

change_set diff_kb(const knowledge_base& base, const knowledge_base& proposed,
                   const std::string& label) {
    if (!(base.model == proposed.model))
        throw error(errc::metamodel_mismatch,
                    "cannot diff knowledge bases with different meta-models");

    change_set cs;
    cs.source_label = label;
    for (const auto& [id, e] : proposed.entities) {
        auto it = base.entities.find(id);
        if (it == base.entities.end()) {
            cs.added.push_back(e);
        } else if (serialize_entity(it->second) != serialize_entity(e)) {
            cs.modified.emplace_back(it->second, e);
        }
    }
    for (const auto& [id, e] : base.entities)
        if (!proposed.entities.count(id)) cs.removed.push_back(id);
    std::sort(cs.removed.begin(), cs.removed.end());
    return cs;
}

namespace {

std::pair<std::string, std::string> sorted_parties(const std::string& a,
                                                   const std::string& b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

std::map<std::string, const entity*> added_by_id(const change_set& cs) {
    std::map<std::string, const entity*> out;
    for (const auto& e : cs.added) out[e.id] = &e;
    return out;
}

std::map<std::string, const entity*> modified_by_id(const change_set& cs) {
    std::map<std::string, const entity*> out;
    for (const auto& [before, after] : cs.modified) out[after.id] = &after;
    return out;
}

}  // namespace

std::vector<conflict> detect_conflicts(const change_set& a, const change_set& b) {
    if (a.source_label == b.source_label)
        throw error(errc::same_source_label,
                    "both change sets are labeled '" + a.source_label + "'");

    auto parties = sorted_parties(a.source_label, b.source_label);
    std::vector<conflict> out;

    auto a_added = added_by_id(a);
    auto b_added = added_by_id(b);
    auto a_modified = modified_by_id(a);
    auto b_modified = modified_by_id(b);
    std::set<std::string> a_removed(a.removed.begin(), a.removed.end());
    std::set<std::string> b_removed(b.removed.begin(), b.removed.end());

    for (const auto& [id, e] : a_modified) {
        auto it = b_modified.find(id);
        if (it != b_modified.end() &&
            serialize_entity(*e) != serialize_entity(*it->second))
            out.push_back(conflict{conflict_kind::divergent_modify, id, parties});
        if (b_removed.count(id))
            out.push_back(conflict{conflict_kind::modify_remove, id, parties});
    }
    for (const auto& [id, e] : b_modified)
        if (a_removed.count(id))
            out.push_back(conflict{conflict_kind::modify_remove, id, parties});

    for (const auto& [id, e] : a_added) {
        auto it = b_added.find(id);
        if (it != b_added.end() &&
            serialize_entity(*e) != serialize_entity(*it->second))
            out.push_back(conflict{conflict_kind::add_add, id, parties});
    }

    std::sort(out.begin(), out.end(), [](const conflict& x, const conflict& y) {
        if (x.entity_id != y.entity_id) return x.entity_id < y.entity_id;
        return static_cast<int>(x.kind) < static_cast<int>(y.kind);
    });
    return out;
}

knowledge_base apply_changeset(const knowledge_base& base, const change_set& cs) {
    std::set<std::string> seen;
    auto claim = [&](const std::string& id) {
        if (!seen.insert(id).second)
            throw error(errc::invalid_changeset,
                        "entity '" + id + "' appears in more than one bucket");
    };
    for (const auto& e : cs.added) claim(e.id);
    for (const auto& [before, after] : cs.modified) claim(after.id);
    for (const auto& id : cs.removed) claim(id);

    std::map<std::string, entity> merged = base.entities;
    for (const auto& id : cs.removed) {
        if (!merged.erase(id))
            throw error(errc::invalid_changeset,
                        "cannot remove '" + id + "': not in the base");
    }
    for (const auto& e : cs.added) {
        if (merged.count(e.id))
            throw error(errc::invalid_changeset,
                        "cannot add '" + e.id + "': already in the base");
        merged[e.id] = e;
    }
    for (const auto& [before, after] : cs.modified) {
        auto it = merged.find(after.id);
        if (it == merged.end())
            throw error(errc::invalid_changeset,
                        "cannot modify '" + after.id + "': not in the base");
        it->second = after;
    }

    std::vector<entity> flat;
    flat.reserve(merged.size());
    for (auto& [id, e] : merged) flat.push_back(std::move(e));
    std::vector<diagnostic> diags;
    knowledge_base out = make_kb(std::move(flat), base.model, diags);
    out.root = base.root;
    return out;
}

validation_report check_changeset(const knowledge_base& base, const change_set& cs) {
    return validate_kb(apply_changeset(base, cs));
}

change_set load_changeset_dir(const fs::path& dir, const knowledge_base& base,
                              const std::string& label) {
    if (!fs::is_directory(dir))
        throw error(errc::invalid_changeset, "change set directory " + dir.string() +
                                                 " does not exist");

    change_set cs;
    cs.source_label = label;

    fs::path kb_dir = dir / "kb";
    std::vector<fs::path> files;
    if (fs::is_directory(kb_dir))
        for (const auto& type_dir : fs::directory_iterator(kb_dir)) {
            if (!type_dir.is_directory()) continue;
            for (const auto& entry : fs::directory_iterator(type_dir.path()))
                if (entry.path().extension() == ".md") files.push_back(entry.path());
        }
    std::sort(files.begin(), files.end());

    std::set<std::string> touched;
    for (const auto& path : files) {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw error(errc::invalid_changeset, "cannot read " + path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string rel = fs::relative(path, dir).generic_string();
        entity e;
        try {
            e = parse_entity(buf.str(), base.model, rel);
        } catch (const error& err) {
            throw error(errc::invalid_changeset, rel + ": " + err.what());
        }
        if (!touched.insert(e.id).second)
            throw error(errc::invalid_changeset, "entity '" + e.id + "' appears twice");
        auto it = base.entities.find(e.id);
        if (it == base.entities.end())
            cs.added.push_back(std::move(e));
        else if (serialize_entity(it->second) != serialize_entity(e))
            cs.modified.emplace_back(it->second, std::move(e));
        // an unchanged copy is not a change
    }

    fs::path manifest = dir / "removed.yaml";
    if (fs::exists(manifest)) {
        std::ifstream in(manifest, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        YAML::Node root;
        try {
            root = YAML::Load(buf.str());
        } catch (const YAML::Exception& e) {
            throw error(errc::invalid_changeset, manifest.string() + ": " + e.what());
        }
        if (root.IsMap()) {
            auto removed = yml::get_string_list_or_empty(root, "removed");
            for (const auto& id : removed) {
                if (touched.count(id))
                    throw error(errc::invalid_changeset,
                                "entity '" + id + "' is both changed and removed");
                cs.removed.push_back(id);
            }
        }
    }
    std::sort(cs.removed.begin(), cs.removed.end());
    return cs;
}

}  // namespace ddc
