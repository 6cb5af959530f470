#include "ddc/kb.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "ddc/errors.hpp"

namespace ddc {

namespace {

diagnostic parse_failure_diag(const error& e, const std::string& rel_path) {
    diagnostic d;
    switch (e.code()) {
        case errc::no_frontmatter: d.code = diag::no_frontmatter; break;
        case errc::malformed_frontmatter: d.code = diag::malformed_frontmatter; break;
        case errc::unknown_entity_type: d.code = diag::unknown_entity_type; break;
        case errc::missing_required_field: d.code = diag::missing_required_field; break;
        case errc::id_filename_mismatch: d.code = diag::id_filename_mismatch; break;
        default: d.code = diag::malformed_frontmatter; break;
    }
    d.level = severity::error;
    d.path = rel_path;
    d.message = e.what();
    return d;
}

void insert_entity(knowledge_base& kb, entity e, std::vector<diagnostic>& diagnostics) {
    auto it = kb.entities.find(e.id);
    if (it != kb.entities.end()) {
        diagnostic d;
        d.code = diag::duplicate_id;
        d.level = severity::error;
        d.entity_id = e.id;
        d.path = e.source_path.empty() ? entity_rel_path(e).generic_string() : e.source_path;
        d.message = "id '" + e.id + "' already defined by " +
                    (it->second.source_path.empty()
                         ? entity_rel_path(it->second).generic_string()
                         : it->second.source_path);
        diagnostics.push_back(std::move(d));
        return;
    }
    kb.entities.emplace(e.id, std::move(e));
}

void build_edges(knowledge_base& kb) {
    kb.edges.clear();
    for (const auto& [id, e] : kb.entities)
        for (const auto& [key, target] : e.relationship_pairs())
            kb.edges.push_back(edge{id, key, target});
    std::sort(kb.edges.begin(), kb.edges.end());
}

}  // namespace

knowledge_base load_kb(const std::filesystem::path& root, const metamodel& m,
                       std::vector<diagnostic>& diagnostics) {
    if (!std::filesystem::is_directory(root))
        throw error(errc::root_missing, "workspace root " + root.string() + " does not exist");

    knowledge_base kb;
    kb.root = root;
    kb.model = m;

    std::filesystem::path kb_dir = root / "kb";
    if (!std::filesystem::is_directory(kb_dir)) {
        build_edges(kb);
        return kb;
    }

    std::vector<std::filesystem::path> files;
    for (const auto& type_entry : std::filesystem::directory_iterator(kb_dir)) {
        if (!type_entry.is_directory()) continue;
        for (const auto& file_entry : std::filesystem::directory_iterator(type_entry.path())) {
            if (file_entry.is_regular_file() && file_entry.path().extension() == ".md")
                files.push_back(file_entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    for (const auto& path : files) {
        std::string rel = std::filesystem::relative(path, root).generic_string();
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            diagnostic d;
            d.code = "IO_FAILURE";
            d.level = severity::error;
            d.path = rel;
            d.message = "cannot read file";
            diagnostics.push_back(std::move(d));
            continue;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        try {
            entity e = parse_entity(buf.str(), m, rel);
            insert_entity(kb, std::move(e), diagnostics);
        } catch (const error& e) {
            diagnostics.push_back(parse_failure_diag(e, rel));
        }
    }
    build_edges(kb);
    return kb;
}

knowledge_base load_kb(const std::filesystem::path& root, const metamodel& m) {
    std::vector<diagnostic> diagnostics;
    knowledge_base kb = load_kb(root, m, diagnostics);
    if (!diagnostics.empty()) {
        sort_diagnostics(diagnostics);
        throw error(errc::malformed_frontmatter, "knowledge base has unreadable entity files",
                    std::move(diagnostics));
    }
    return kb;
}

knowledge_base make_kb(std::vector<entity> entities, const metamodel& m,
                       std::vector<diagnostic>& diagnostics) {
    knowledge_base kb;
    kb.model = m;
    for (auto& e : entities) {
        if (e.source_path.empty()) e.source_path = entity_rel_path(e).generic_string();
        insert_entity(kb, std::move(e), diagnostics);
    }
    build_edges(kb);
    return kb;
}

std::vector<std::pair<std::string, std::string>> neighbors(const knowledge_base& kb,
                                                           const std::string& id,
                                                           direction dir) {
    if (!kb.contains(id))
        throw error(errc::unknown_entity, "no entity with id '" + id + "'");
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& e : kb.edges) {
        if ((dir == direction::out || dir == direction::both) && e.source_id == id)
            out.emplace(e.key, e.target_id);
        if ((dir == direction::in || dir == direction::both) && e.target_id == id)
            out.emplace(e.key, e.source_id);
    }
    return {out.begin(), out.end()};
}

std::vector<const entity*> find_by_type(const knowledge_base& kb,
                                        const std::string& entity_type) {
    if (!kb.model.find_entity_type(entity_type))
        throw error(errc::unknown_type, "unknown entity type '" + entity_type + "'");
    std::vector<const entity*> out;
    for (const auto& [id, e] : kb.entities)
        if (e.entity_type == entity_type) out.push_back(&e);
    return out;
}

std::filesystem::path entity_rel_path(const entity& e) {
    return std::filesystem::path("kb") / e.entity_type / (e.id + ".md");
}

}  // namespace ddc
