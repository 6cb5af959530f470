#include "ddc/cycle.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "ddc/errors.hpp"
#include "ddc/validator.hpp"
#include "yaml_util.hpp"

namespace ddc {

namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error(errc::io_failure, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw error(errc::io_failure, "cannot write " + path.string());
    out << text;
    out.flush();
    if (!out) throw error(errc::io_failure, "cannot write " + path.string());
}

std::string trim(const std::string& s) {
    size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::string first_line(const std::string& s) {
    size_t nl = s.find('\n');
    return trim(nl == std::string::npos ? s : s.substr(0, nl));
}

std::string today() {
    std::time_t now = std::time(nullptr);
    std::tm tm_buf{};
    localtime_r(&now, &tm_buf);
    char buf[16];
    std::strftime(buf, sizeof buf, "%Y-%m-%d", &tm_buf);
    return buf;
}

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

const char* verdict_name(verdict v) {
    switch (v) {
        case verdict::pending: return "pending";
        case verdict::accepted: return "accepted";
        case verdict::rejected: return "rejected";
    }
    return "pending";
}

verdict verdict_from_name(const std::string& name) {
    if (name == "pending") return verdict::pending;
    if (name == "accepted") return verdict::accepted;
    if (name == "rejected") return verdict::rejected;
    throw error(errc::malformed_frontmatter, "unknown verdict '" + name + "'");
}

std::string join_ids(const std::vector<std::string>& ids) {
    std::string out;
    for (size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ", ";
        out += ids[i];
    }
    return out;
}

void require_state(const sandbox& s, sandbox_state expected, const char* operation) {
    if (s.state != expected)
        throw error(errc::illegal_state,
                    std::string(operation) + " requires state " +
                        sandbox_state_name(expected) + ", sandbox " + s.cycle_id + " is " +
                        sandbox_state_name(s.state));
}

std::vector<std::string> sorted_unique(std::vector<std::string> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

}  // namespace

const char* sandbox_state_name(sandbox_state s) {
    switch (s) {
        case sandbox_state::created: return "created";
        case sandbox_state::gaps_identified: return "gaps_identified";
        case sandbox_state::answers_recorded: return "answers_recorded";
        case sandbox_state::drafted: return "drafted";
        case sandbox_state::re_attempted: return "re_attempted";
        case sandbox_state::rejected: return "rejected";
        case sandbox_state::accepted: return "accepted";
        case sandbox_state::graduated: return "graduated";
        case sandbox_state::logged: return "logged";
    }
    return "created";
}

sandbox_state sandbox_state_from_name(const std::string& name) {
    static const std::pair<const char*, sandbox_state> table[] = {
        {"created", sandbox_state::created},
        {"gaps_identified", sandbox_state::gaps_identified},
        {"answers_recorded", sandbox_state::answers_recorded},
        {"drafted", sandbox_state::drafted},
        {"re_attempted", sandbox_state::re_attempted},
        {"rejected", sandbox_state::rejected},
        {"accepted", sandbox_state::accepted},
        {"graduated", sandbox_state::graduated},
        {"logged", sandbox_state::logged},
    };
    for (const auto& [n, s] : table)
        if (name == n) return s;
    throw error(errc::malformed_frontmatter, "unknown sandbox state '" + name + "'");
}

const attempt* sandbox::accepted_attempt() const {
    for (const auto& a : attempts)
        if (a.review == verdict::accepted) return &a;
    return nullptr;
}

const entity* sandbox::find_draft(const std::string& id) const {
    for (const auto& d : drafts)
        if (d.id == id) return &d;
    return nullptr;
}

// --- persistence -------------------------------------------------------

namespace {

std::string render_state_yaml(const sandbox& s) {
    std::ostringstream out;
    out << "cycle_id: " << yml::emit_quoted(s.cycle_id) << "\n";
    out << "state: " << sandbox_state_name(s.state) << "\n";
    out << "date_started: " << yml::emit_quoted(s.date_started) << "\n";
    out << "date_completed: " << yml::emit_quoted(s.date_completed) << "\n";
    out << "source_docs: " << yml::emit_flow_list(s.source_docs) << "\n";
    out << "deleted_drafts: " << yml::emit_flow_list(s.deleted_drafts) << "\n";
    out << "created_ids: " << yml::emit_flow_list(s.created_ids) << "\n";
    out << "updated_ids: " << yml::emit_flow_list(s.updated_ids) << "\n";
    out << "draft_rounds: " << s.draft_rounds << "\n";
    out << "attempt_cursor: " << s.attempt_cursor << "\n";
    out << "draft_cursor: " << s.draft_cursor << "\n";
    out << "answers_follow_rejection: " << (s.answers_follow_rejection ? "true" : "false")
        << "\n";
    return out.str();
}

std::string render_checklist(const sandbox& s) {
    std::ostringstream out;
    out << "# Information Checklist\n";
    if (!s.checklist.empty()) out << "\n";
    for (const auto& item : s.checklist)
        out << "- [" << (item.answered ? 'x' : ' ') << "] " << item.item_id << " ("
            << item.expected_entity_type << ") " << item.question << "\n";
    return out.str();
}

std::string render_answers(const sandbox& s) {
    std::ostringstream out;
    out << "# Answers\n";
    for (const auto& [key, text] : s.answers) out << "\n## " << key << "\n\n" << text << "\n";
    return out.str();
}

std::string render_attempt(const attempt& a) {
    std::ostringstream out;
    out << "---\n";
    out << "attempt: " << a.number << "\n";
    out << "confidence: " << a.confidence << "\n";
    out << "verdict: " << verdict_name(a.review) << "\n";
    out << "reviewer_notes: " << yml::emit_quoted(a.reviewer_notes) << "\n";
    out << "context: " << yml::emit_flow_list(a.context_entity_ids) << "\n";
    out << "---\n\n";
    out << a.answer_text << "\n";
    return out.str();
}

void parse_checklist_line(const std::string& line, sandbox& s) {
    // "- [x] q1 (system) Which systems take part?"
    if (line.size() < 6 || line.compare(0, 3, "- [") != 0) return;
    checklist_item item;
    item.answered = line[3] == 'x';
    size_t pos = line.find("] ", 3);
    if (pos == std::string::npos) return;
    pos += 2;
    size_t space = line.find(' ', pos);
    if (space == std::string::npos) return;
    item.item_id = line.substr(pos, space - pos);
    size_t open = line.find('(', space);
    size_t close = line.find(')', open);
    if (open == std::string::npos || close == std::string::npos) return;
    item.expected_entity_type = line.substr(open + 1, close - open - 1);
    item.question = close + 2 <= line.size() ? line.substr(close + 2) : "";
    s.checklist.push_back(std::move(item));
}

void parse_answers_text(const std::string& text, sandbox& s) {
    std::istringstream in(text);
    std::string line;
    std::string key;
    std::string content;
    bool in_answer = false;
    auto flush = [&] {
        if (in_answer) s.answers.emplace_back(key, trim(content));
    };
    while (std::getline(in, line)) {
        if (line.size() > 3 && line.compare(0, 3, "## ") == 0) {
            flush();
            key = line.substr(3);
            content.clear();
            in_answer = true;
            continue;
        }
        if (in_answer) {
            content += line;
            content += '\n';
        }
    }
    flush();
}

attempt parse_attempt_file(const std::string& text) {
    auto split = yml::split_frontmatter(text);
    YAML::Node fm = yml::load_mapping(split.yaml);
    attempt a;
    a.number = yml::get_int(fm, "attempt").value_or(0);
    a.confidence = yml::get_int(fm, "confidence").value_or(0);
    a.review = verdict_from_name(yml::get_scalar(fm, "verdict").value_or("pending"));
    a.reviewer_notes = yml::get_scalar(fm, "reviewer_notes").value_or("");
    a.context_entity_ids = yml::get_string_list_or_empty(fm, "context");
    a.answer_text = trim(split.body);
    return a;
}

}  // namespace

void save_sandbox(const sandbox& s) {
    fs::create_directories(s.dir / "attempts");
    fs::create_directories(s.dir / "docs");

    write_file(s.dir / "state.yaml", render_state_yaml(s));
    write_file(s.dir / "problem.md", s.problem);
    write_file(s.dir / "checklist.md", render_checklist(s));
    write_file(s.dir / "answers.md", render_answers(s));

    for (const auto& a : s.attempts)
        write_file(s.dir / "attempts" / (std::to_string(a.number) + ".md"), render_attempt(a));

    fs::remove_all(s.dir / "drafts");
    for (const auto& d : s.drafts) {
        fs::path path = s.dir / "drafts" / d.entity_type / (d.id + ".md");
        fs::create_directories(path.parent_path());
        write_file(path, serialize_entity(d));
    }
}

sandbox load_sandbox(const fs::path& workspace_root, const std::string& cycle_id,
                     const metamodel& m) {
    sandbox s;
    s.cycle_id = cycle_id;
    s.workspace_root = workspace_root;
    s.dir = workspace_root / "sandboxes" / cycle_id;
    if (!fs::is_directory(s.dir))
        throw error(errc::io_failure, "no sandbox " + cycle_id + " under " +
                                          (workspace_root / "sandboxes").string());

    YAML::Node st;
    try {
        st = YAML::Load(read_file(s.dir / "state.yaml"));
    } catch (const YAML::Exception& e) {
        throw error(errc::malformed_frontmatter,
                    "sandbox " + cycle_id + " state.yaml: " + e.what());
    }
    s.state = sandbox_state_from_name(yml::get_scalar(st, "state").value_or("created"));
    s.date_started = yml::get_scalar(st, "date_started").value_or("");
    s.date_completed = yml::get_scalar(st, "date_completed").value_or("");
    s.source_docs = yml::get_string_list_or_empty(st, "source_docs");
    s.deleted_drafts = yml::get_string_list_or_empty(st, "deleted_drafts");
    s.created_ids = yml::get_string_list_or_empty(st, "created_ids");
    s.updated_ids = yml::get_string_list_or_empty(st, "updated_ids");
    s.draft_rounds = yml::get_int(st, "draft_rounds").value_or(0);
    s.attempt_cursor = yml::get_int(st, "attempt_cursor").value_or(0);
    s.draft_cursor = yml::get_int(st, "draft_cursor").value_or(0);
    s.answers_follow_rejection = yml::get_bool(st, "answers_follow_rejection").value_or(false);

    s.problem = read_file(s.dir / "problem.md");
    s.problem_name = first_line(s.problem);

    std::istringstream checklist(read_file(s.dir / "checklist.md"));
    std::string line;
    while (std::getline(checklist, line)) parse_checklist_line(line, s);

    parse_answers_text(read_file(s.dir / "answers.md"), s);

    std::vector<int> numbers;
    if (fs::is_directory(s.dir / "attempts"))
        for (const auto& entry : fs::directory_iterator(s.dir / "attempts"))
            if (entry.path().extension() == ".md") {
                std::string stem = entry.path().stem().string();
                if (all_digits(stem)) numbers.push_back(std::stoi(stem));
            }
    std::sort(numbers.begin(), numbers.end());
    for (int n : numbers) {
        attempt a = parse_attempt_file(read_file(s.dir / "attempts" / (std::to_string(n) + ".md")));
        a.number = n;
        s.attempts.push_back(std::move(a));
    }

    if (fs::is_directory(s.dir / "drafts")) {
        std::vector<fs::path> files;
        for (const auto& type_dir : fs::directory_iterator(s.dir / "drafts")) {
            if (!type_dir.is_directory()) continue;
            for (const auto& entry : fs::directory_iterator(type_dir.path()))
                if (entry.path().extension() == ".md") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& path : files) {
            std::string rel = fs::relative(path, s.dir).generic_string();
            entity d = parse_entity(read_file(path), m, rel);
            s.drafts.push_back(std::move(d));
        }
    }
    return s;
}

std::string next_free_cycle_id(const fs::path& workspace_root) {
    int max_seen = 0;
    fs::path sandboxes = workspace_root / "sandboxes";
    if (fs::is_directory(sandboxes))
        for (const auto& entry : fs::directory_iterator(sandboxes)) {
            std::string name = entry.path().filename().string();
            if (entry.is_directory() && all_digits(name))
                max_seen = std::max(max_seen, std::stoi(name));
        }
    fs::path logs = workspace_root / "logs";
    if (fs::is_directory(logs))
        for (const auto& entry : fs::directory_iterator(logs)) {
            std::string stem = entry.path().stem().string();
            if (stem.rfind("cycle-", 0) == 0 && all_digits(stem.substr(6)))
                max_seen = std::max(max_seen, std::stoi(stem.substr(6)));
        }
    char buf[16];
    std::snprintf(buf, sizeof buf, "%03d", max_seen + 1);
    return buf;
}

// --- operations --------------------------------------------------------

sandbox create_sandbox(const fs::path& workspace_root, const std::string& problem,
                       const std::vector<std::string>& source_docs,
                       const std::string& next_id) {
    if (trim(problem).empty())
        throw error(errc::empty_problem, "a cycle needs a problem statement");
    if (!all_digits(next_id))
        throw error(errc::invalid_parameter, "cycle id '" + next_id + "' is not numeric");

    sandbox s;
    s.cycle_id = next_id;
    s.workspace_root = workspace_root;
    s.dir = workspace_root / "sandboxes" / next_id;
    if (fs::exists(s.dir))
        throw error(errc::duplicate_cycle_id, "sandbox " + next_id + " already exists");
    if (fs::exists(workspace_root / "logs" / ("cycle-" + next_id + ".md")))
        throw error(errc::duplicate_cycle_id, "cycle " + next_id + " already has a log");

    s.state = sandbox_state::created;
    s.problem = problem;
    s.problem_name = first_line(problem);
    s.date_started = today();

    std::error_code ec;
    fs::create_directories(s.dir / "docs", ec);
    if (ec) throw error(errc::io_failure, "cannot create " + s.dir.string());

    for (const auto& doc : source_docs) {
        fs::path source(doc);
        if (!fs::is_regular_file(source))
            throw error(errc::io_failure, "source doc " + doc + " not found");
        fs::copy_file(source, s.dir / "docs" / source.filename(),
                      fs::copy_options::overwrite_existing, ec);
        if (ec) throw error(errc::io_failure, "cannot copy " + doc);
        s.source_docs.push_back(source.filename().string());
    }

    save_sandbox(s);
    return s;
}

void run_attempt(sandbox& s, const knowledge_base& kb_view, agent_adapter& agent) {
    bool legal = s.state == sandbox_state::created || s.state == sandbox_state::drafted ||
                 (s.state == sandbox_state::answers_recorded && s.answers_follow_rejection);
    if (!legal)
        throw error(errc::illegal_state, "cannot attempt from state " +
                                             std::string(sandbox_state_name(s.state)));

    attempt_response resp = agent.next_attempt(s.problem, kb_view, s.drafts);

    if (resp.confidence < 1 || resp.confidence > 5)
        throw error(errc::adapter_failure,
                    "confidence " + std::to_string(resp.confidence) + " outside 1..5");
    for (const auto& id : resp.consulted_ids)
        if (!kb_view.contains(id))
            throw error(errc::adapter_failure,
                        "adapter consulted unknown entity '" + id + "'");

    std::set<std::string> item_ids;
    for (const auto& item : s.checklist) item_ids.insert(item.item_id);
    for (const auto& item : resp.checklist) {
        if (item.item_id.empty() || !item_ids.insert(item.item_id).second)
            throw error(errc::adapter_failure,
                        "checklist item id '" + item.item_id + "' is empty or repeated");
        if (!kb_view.model.find_entity_type(item.expected_entity_type))
            throw error(errc::adapter_failure,
                        "checklist item '" + item.item_id + "' expects unknown type '" +
                            item.expected_entity_type + "'");
    }

    attempt a;
    a.number = static_cast<int>(s.attempts.size()) + 1;
    a.answer_text = resp.answer_text;
    a.confidence = resp.confidence;
    std::vector<std::string> context = resp.consulted_ids;
    for (const auto& d : s.drafts) context.push_back(d.id);
    a.context_entity_ids = sorted_unique(std::move(context));
    s.attempts.push_back(std::move(a));

    bool raised_gaps = !resp.checklist.empty();
    for (auto& item : resp.checklist) s.checklist.push_back(std::move(item));

    s.state = raised_gaps && s.state == sandbox_state::created
                  ? sandbox_state::gaps_identified
                  : sandbox_state::re_attempted;
    s.answers_follow_rejection = false;
    save_sandbox(s);
}

void record_answers(sandbox& s,
                    const std::vector<std::pair<std::string, std::string>>& answers) {
    bool from_rejection = s.state == sandbox_state::rejected;
    if (s.state != sandbox_state::gaps_identified && !from_rejection)
        throw error(errc::illegal_state, "cannot record answers from state " +
                                             std::string(sandbox_state_name(s.state)));

    for (const auto& [key, text] : answers) {
        auto it = std::find_if(s.checklist.begin(), s.checklist.end(),
                               [&](const checklist_item& item) { return item.item_id == key; });
        if (it != s.checklist.end()) {
            it->answered = true;
        } else if (!from_rejection) {
            throw error(errc::unknown_checklist_item,
                        "'" + key + "' does not name a checklist item");
        }
        s.answers.emplace_back(key, text);
    }

    s.state = sandbox_state::answers_recorded;
    s.answers_follow_rejection = from_rejection;
    save_sandbox(s);
}

void draft_entities(sandbox& s, const metamodel& m, agent_adapter& agent) {
    require_state(s, sandbox_state::answers_recorded, "drafting");

    draft_response resp = agent.next_draft(s.answers, m);

    std::vector<entity> drafts = s.drafts;
    for (const auto& id : resp.deleted_ids) {
        auto it = std::find_if(drafts.begin(), drafts.end(),
                               [&](const entity& d) { return d.id == id; });
        if (it == drafts.end())
            throw error(errc::adapter_failure, "adapter deleted unknown draft '" + id + "'");
        drafts.erase(it);
    }

    std::vector<diagnostic> problems;
    std::set<std::string> incoming;
    for (auto& e : resp.entities) {
        if (!incoming.insert(e.id).second)
            throw error(errc::adapter_failure, "adapter drafted '" + e.id + "' twice");
        e.status = "draft";
        e.source_path =
            (fs::path("drafts") / e.entity_type / (e.id + ".md")).generic_string();
        for (auto& d : validate_entity(e, m))
            if (d.level == severity::error) problems.push_back(std::move(d));
    }
    if (!problems.empty()) {
        sort_diagnostics(problems);
        throw error(errc::draft_validation_failed, "drafted entities fail validation",
                    std::move(problems));
    }

    for (auto& e : resp.entities) {
        auto it = std::find_if(drafts.begin(), drafts.end(),
                               [&](const entity& d) { return d.id == e.id; });
        if (it != drafts.end())
            *it = std::move(e);
        else
            drafts.push_back(std::move(e));
    }

    for (const auto& id : resp.deleted_ids)
        if (std::find(s.deleted_drafts.begin(), s.deleted_drafts.end(), id) ==
            s.deleted_drafts.end())
            s.deleted_drafts.push_back(id);

    s.drafts = std::move(drafts);
    ++s.draft_rounds;
    s.state = sandbox_state::drafted;
    s.answers_follow_rejection = false;
    save_sandbox(s);
}

void review_attempt(sandbox& s, verdict v, const std::string& notes) {
    if (v == verdict::pending)
        throw error(errc::invalid_parameter, "a review must accept or reject");
    if (s.state != sandbox_state::re_attempted) {
        bool pending = !s.attempts.empty() && s.attempts.back().review == verdict::pending;
        if (pending)
            throw error(errc::illegal_state, "cannot review from state " +
                                                 std::string(sandbox_state_name(s.state)));
        throw error(errc::no_pending_attempt,
                    "sandbox " + s.cycle_id + " has no attempt awaiting review");
    }

    attempt& a = s.attempts.back();
    a.review = v;
    a.reviewer_notes = notes;
    s.state = v == verdict::accepted ? sandbox_state::accepted : sandbox_state::rejected;
    save_sandbox(s);
}

validation_report graduate(sandbox& s, const fs::path& kb_root, const metamodel& m) {
    require_state(s, sandbox_state::accepted, "graduation");

    std::vector<diagnostic> load_diags;
    knowledge_base before = load_kb(kb_root, m, load_diags);

    std::map<std::string, entity> merged = before.entities;
    for (const auto& d : s.drafts) {
        entity promoted = d;
        promoted.status = "active";
        promoted.source_path = entity_rel_path(promoted).generic_string();
        merged[promoted.id] = std::move(promoted);
    }

    std::vector<entity> flat;
    flat.reserve(merged.size());
    for (auto& [id, e] : merged) flat.push_back(e);

    std::vector<diagnostic> build_diags;
    knowledge_base preview = make_kb(std::move(flat), m, build_diags);
    validation_report report = validate_kb(preview);
    report.diagnostics.insert(report.diagnostics.end(), load_diags.begin(), load_diags.end());
    report.diagnostics.insert(report.diagnostics.end(), build_diags.begin(),
                              build_diags.end());
    sort_diagnostics(report.diagnostics);

    if (report.error_count() > 0)
        throw error(errc::validation_blocked,
                    "graduation would leave the knowledge base invalid", report.diagnostics);

    s.created_ids.clear();
    s.updated_ids.clear();
    for (const auto& d : s.drafts) {
        entity promoted = d;
        promoted.status = "active";
        promoted.source_path = entity_rel_path(promoted).generic_string();
        fs::path path = kb_root / promoted.source_path;
        fs::create_directories(path.parent_path());
        write_file(path, serialize_entity(promoted));
        if (before.contains(promoted.id))
            s.updated_ids.push_back(promoted.id);
        else
            s.created_ids.push_back(promoted.id);
    }
    std::sort(s.created_ids.begin(), s.created_ids.end());
    std::sort(s.updated_ids.begin(), s.updated_ids.end());

    s.state = sandbox_state::graduated;
    save_sandbox(s);
    return report;
}

cycle_log_record write_cycle_log(sandbox& s, const knowledge_base& kb_before,
                                 int time_spent_minutes, const std::string& domain) {
    require_state(s, sandbox_state::graduated, "logging");

    const attempt* accepted = s.accepted_attempt();
    if (!accepted)
        throw error(errc::illegal_state, "graduated sandbox has no accepted attempt");

    cycle_log_record rec;
    rec.cycle_id = s.cycle_id;
    rec.problem_name = s.problem_name;
    rec.date_started = s.date_started;
    rec.date_completed = s.date_completed.empty() ? today() : s.date_completed;
    rec.time_spent_minutes = time_spent_minutes;
    rec.entities_created = static_cast<int>(s.created_ids.size());
    rec.entities_updated = static_cast<int>(s.updated_ids.size());
    for (const auto& id : accepted->context_entity_ids)
        if (kb_before.contains(id)) rec.entities_reused.push_back(id);
    rec.domain = domain;

    auto confidence_block = [](const attempt& a) {
        return a.answer_text + "\n\nConfidence: " + std::to_string(a.confidence) + "/5";
    };

    std::string checklist_text;
    if (s.checklist.empty()) {
        checklist_text = "(none)";
    } else {
        for (size_t i = 0; i < s.checklist.size(); ++i) {
            if (i) checklist_text += "\n";
            checklist_text += std::to_string(i + 1) + ". " + s.checklist[i].question +
                              " (type: " + s.checklist[i].expected_entity_type + ")";
        }
    }

    std::string answers_text;
    if (s.answers.empty()) {
        answers_text = "(none)";
    } else {
        for (size_t i = 0; i < s.answers.size(); ++i) {
            if (i) answers_text += "\n\n";
            answers_text += "### " + s.answers[i].first + "\n\n" + s.answers[i].second;
        }
    }

    std::string curated_text =
        "Created (" + std::to_string(s.created_ids.size()) + "): " +
        (s.created_ids.empty() ? "(none)" : join_ids(s.created_ids)) + "\nUpdated (" +
        std::to_string(s.updated_ids.size()) + "): " +
        (s.updated_ids.empty() ? "(none)" : join_ids(s.updated_ids));
    if (!s.deleted_drafts.empty())
        curated_text += "\nDeleted drafts: " + join_ids(s.deleted_drafts);

    std::string review_text;
    for (const auto& a : s.attempts) {
        if (a.review == verdict::pending) continue;
        if (!review_text.empty()) review_text += "\n";
        review_text += "Attempt " + std::to_string(a.number) + " " + verdict_name(a.review);
        review_text += a.reviewer_notes.empty() ? "." : ": " + a.reviewer_notes;
    }
    if (review_text.empty()) review_text = "(none)";

    std::string reuse_text =
        rec.entities_reused.empty()
            ? "No earlier entities were reused."
            : "Reused from earlier cycles (" + std::to_string(rec.entities_reused.size()) +
                  "): " + join_ids(rec.entities_reused);

    rec.sections = {
        {cycle_log_sections[0], trim(s.problem)},
        {cycle_log_sections[1], confidence_block(s.attempts.front())},
        {cycle_log_sections[2], checklist_text},
        {cycle_log_sections[3], answers_text},
        {cycle_log_sections[4], curated_text},
        {cycle_log_sections[5], confidence_block(*accepted)},
        {cycle_log_sections[6], review_text},
        {cycle_log_sections[7], reuse_text},
    };

    fs::path log_dir = s.workspace_root / "logs";
    fs::create_directories(log_dir);
    write_file(log_dir / ("cycle-" + s.cycle_id + ".md"), serialize_cycle_log(rec));

    s.date_completed = rec.date_completed;
    s.state = sandbox_state::logged;
    save_sandbox(s);
    return rec;
}

// --- scripted replays ----------------------------------------------------

namespace {

void check_known_keys(const YAML::Node& node, const std::set<std::string>& known,
                      const std::string& context) {
    for (const auto& kv : node) {
        std::string key = kv.first.IsScalar() ? kv.first.Scalar() : std::string();
        if (!known.count(key))
            throw error(errc::schema_error, context + ": unknown key '" + key + "'");
    }
}

}  // namespace

cycle_script load_cycle_script(const fs::path& file, const metamodel& m) {
    YAML::Node root;
    try {
        root = YAML::Load(read_file(file));
    } catch (const YAML::Exception& e) {
        throw error(errc::schema_error, file.string() + ": " + e.what());
    }
    if (!root.IsMap()) throw error(errc::schema_error, file.string() + ": expected a mapping");
    check_known_keys(root,
                     {"cycle_id", "problem", "domain", "date_started", "date_completed",
                      "time_spent_minutes", "source_docs", "agent", "human"},
                     file.string());

    cycle_script script;
    script.cycle_id = yml::get_scalar(root, "cycle_id").value_or("");
    script.problem = yml::get_scalar(root, "problem").value_or("");
    script.domain = yml::get_scalar(root, "domain").value_or("");
    script.date_started = yml::get_scalar(root, "date_started").value_or("");
    script.date_completed = yml::get_scalar(root, "date_completed").value_or("");
    script.time_spent_minutes = yml::get_int(root, "time_spent_minutes").value_or(0);
    script.source_docs = yml::get_string_list_or_empty(root, "source_docs");
    if (script.cycle_id.empty())
        throw error(errc::schema_error, file.string() + ": cycle_id is required");

    YAML::Node agent = root["agent"];
    if (!agent.IsMap()) throw error(errc::schema_error, file.string() + ": agent is required");
    check_known_keys(agent, {"attempts", "drafts"}, file.string() + ": agent");

    for (const auto& node : agent["attempts"]) {
        attempt_response resp;
        check_known_keys(node, {"text", "confidence", "context", "checklist"},
                         file.string() + ": attempt");
        resp.answer_text = trim(yml::get_scalar(node, "text").value_or(""));
        resp.confidence = yml::get_int(node, "confidence").value_or(0);
        resp.consulted_ids = yml::get_string_list_or_empty(node, "context");
        for (const auto& item_node : node["checklist"]) {
            check_known_keys(item_node, {"id", "type", "question"},
                             file.string() + ": checklist item");
            checklist_item item;
            item.item_id = yml::get_scalar(item_node, "id").value_or("");
            item.expected_entity_type = yml::get_scalar(item_node, "type").value_or("");
            item.question = yml::get_scalar(item_node, "question").value_or("");
            resp.checklist.push_back(std::move(item));
        }
        script.attempts.push_back(std::move(resp));
    }

    for (const auto& node : agent["drafts"]) {
        draft_response round;
        check_known_keys(node, {"create", "delete"}, file.string() + ": draft round");
        for (const auto& text_node : node["create"]) {
            if (!text_node.IsScalar())
                throw error(errc::schema_error,
                            file.string() + ": draft entities are embedded as file text");
            round.entities.push_back(parse_entity(text_node.Scalar(), m));
        }
        if (node["delete"])
            for (const auto& id_node : node["delete"]) round.deleted_ids.push_back(id_node.Scalar());
        script.drafts.push_back(std::move(round));
    }

    YAML::Node human = root["human"];
    if (human.IsDefined() && !human.IsNull()) {
        if (!human.IsMap())
            throw error(errc::schema_error, file.string() + ": human must be a mapping");
        check_known_keys(human, {"answers", "reviews"}, file.string() + ": human");
        for (const auto& set_node : human["answers"]) {
            if (!set_node.IsMap())
                throw error(errc::schema_error,
                            file.string() + ": each answer set is a key/value mapping");
            std::vector<std::pair<std::string, std::string>> answers;
            for (const auto& kv : set_node)
                answers.emplace_back(kv.first.Scalar(), trim(kv.second.Scalar()));
            script.answer_sets.push_back(std::move(answers));
        }
        for (const auto& node : human["reviews"]) {
            check_known_keys(node, {"verdict", "notes"}, file.string() + ": review");
            script_review review;
            std::string v = yml::get_scalar(node, "verdict").value_or("");
            if (v == "accepted")
                review.v = verdict::accepted;
            else if (v == "rejected")
                review.v = verdict::rejected;
            else
                throw error(errc::schema_error,
                            file.string() + ": review verdict must be accepted or rejected");
            review.notes = yml::get_scalar(node, "notes").value_or("");
            script.reviews.push_back(std::move(review));
        }
    }
    return script;
}

scripted_agent_adapter::scripted_agent_adapter(const cycle_script& script, int attempt_cursor,
                                               int draft_cursor)
    : script_(script), attempt_cursor_(attempt_cursor), draft_cursor_(draft_cursor) {}

attempt_response scripted_agent_adapter::next_attempt(const std::string&,
                                                      const knowledge_base&,
                                                      const std::vector<entity>&) {
    if (attempt_cursor_ >= static_cast<int>(script_.attempts.size()))
        throw error(errc::adapter_failure,
                    "script for cycle " + script_.cycle_id + " has no attempt " +
                        std::to_string(attempt_cursor_ + 1));
    return script_.attempts[attempt_cursor_++];
}

draft_response scripted_agent_adapter::next_draft(
    const std::vector<std::pair<std::string, std::string>>&, const metamodel&) {
    if (draft_cursor_ >= static_cast<int>(script_.drafts.size()))
        throw error(errc::adapter_failure,
                    "script for cycle " + script_.cycle_id + " has no draft round " +
                        std::to_string(draft_cursor_ + 1));
    return script_.drafts[draft_cursor_++];
}

cycle_outcome replay_cycle(const cycle_script& script, const fs::path& workspace_root,
                           const metamodel& m) {
    knowledge_base kb_before = load_kb(workspace_root, m);

    sandbox s = create_sandbox(workspace_root, script.problem, script.source_docs,
                               script.cycle_id);
    if (!script.date_started.empty()) s.date_started = script.date_started;
    if (!script.date_completed.empty()) s.date_completed = script.date_completed;
    save_sandbox(s);

    scripted_agent_adapter agent(script);
    size_t next_answer_set = 0;
    size_t next_review = 0;

    auto sync_cursors = [&] {
        s.attempt_cursor = agent.attempt_cursor();
        s.draft_cursor = agent.draft_cursor();
        save_sandbox(s);
    };

    run_attempt(s, kb_before, agent);
    sync_cursors();

    while (s.state != sandbox_state::accepted) {
        switch (s.state) {
            case sandbox_state::gaps_identified:
            case sandbox_state::rejected:
                if (next_answer_set >= script.answer_sets.size())
                    throw error(errc::adapter_failure,
                                "script for cycle " + script.cycle_id +
                                    " ran out of answer sets");
                record_answers(s, script.answer_sets[next_answer_set++]);
                break;
            case sandbox_state::answers_recorded:
                if (agent.draft_cursor() < static_cast<int>(script.drafts.size())) {
                    draft_entities(s, m, agent);
                } else {
                    run_attempt(s, kb_before, agent);
                }
                sync_cursors();
                break;
            case sandbox_state::drafted:
                run_attempt(s, kb_before, agent);
                sync_cursors();
                break;
            case sandbox_state::re_attempted:
                if (next_review >= script.reviews.size())
                    throw error(errc::adapter_failure,
                                "script for cycle " + script.cycle_id + " ran out of reviews");
                review_attempt(s, script.reviews[next_review].v,
                               script.reviews[next_review].notes);
                ++next_review;
                break;
            default:
                throw error(errc::illegal_state,
                            "replay stuck in state " +
                                std::string(sandbox_state_name(s.state)));
        }
    }

    graduate(s, workspace_root, m);
    cycle_log_record log =
        write_cycle_log(s, kb_before, script.time_spent_minutes, script.domain);

    bool consumed = agent.attempt_cursor() == static_cast<int>(script.attempts.size()) &&
                    agent.draft_cursor() == static_cast<int>(script.drafts.size()) &&
                    next_answer_set == script.answer_sets.size() &&
                    next_review == script.reviews.size();
    if (!consumed)
        throw error(errc::adapter_failure,
                    "script for cycle " + script.cycle_id + " was not fully consumed");

    cycle_outcome outcome;
    outcome.cycle_id = script.cycle_id;
    outcome.sandbox_final = std::move(s);
    outcome.log = std::move(log);
    return outcome;
}

}  // namespace ddc
