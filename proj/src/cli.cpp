#include "ddc/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "ddc/analytics.hpp"
#include "ddc/cycle.hpp"
#include "ddc/errors.hpp"
#include "ddc/governance.hpp"
#include "ddc/kb.hpp"
#include "ddc/metamodel.hpp"
#include "ddc/validator.hpp"
#include "yaml_util.hpp"

namespace ddc::cli {

namespace {

namespace fs = std::filesystem;

int exit_code_for(errc code) {
    switch (code) {
        case errc::usage_error:
        case errc::root_missing:
        case errc::file_missing:
        case errc::io_failure:
            return exit_usage;
        default:
            return exit_findings;
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error(errc::file_missing, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

metamodel workspace_metamodel(const fs::path& root) {
    return load_metamodel(root / "meta" / "entity-types.yaml",
                          root / "meta" / "relationship-types.yaml",
                          /*allow_defaults=*/true);
}

std::vector<cycle_log_record> read_logs(const fs::path& root) {
    std::vector<cycle_log_record> logs;
    fs::path dir = root / "logs";
    if (!fs::is_directory(dir)) return logs;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::string name = entry.path().filename().string();
        if (entry.is_regular_file() && name.rfind("cycle-", 0) == 0 &&
            entry.path().extension() == ".md")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
        try {
            logs.push_back(parse_cycle_log(read_file(path)));
        } catch (const error& e) {
            throw error(e.code(), path.filename().string() + ": " + e.what());
        }
    }
    return logs;
}

std::vector<std::pair<std::string, std::string>> read_answers_file(const fs::path& path) {
    YAML::Node root;
    try {
        root = YAML::Load(read_file(path));
    } catch (const YAML::Exception& e) {
        throw error(errc::schema_error, path.string() + ": " + e.what());
    }
    if (!root.IsMap())
        throw error(errc::schema_error, path.string() + ": expected a key/value mapping");
    std::vector<std::pair<std::string, std::string>> answers;
    for (const auto& kv : root) {
        if (!kv.second.IsScalar())
            throw error(errc::schema_error,
                        path.string() + ": answer '" + kv.first.Scalar() +
                            "' must be plain text");
        answers.emplace_back(kv.first.Scalar(), kv.second.Scalar());
    }
    return answers;
}

// kb as it stood before this cycle's graduation: the current entities minus
// the ids the sandbox created.
knowledge_base kb_before_cycle(const fs::path& root, const metamodel& m, const sandbox& s) {
    knowledge_base kb = load_kb(root, m);
    for (const auto& id : s.created_ids) kb.entities.erase(id);
    return kb;
}

void print_validation(const validation_report& report, std::ostream& out) {
    for (const auto& d : report.diagnostics) out << format_diagnostic(d) << "\n";
}

struct cli_options {
    std::string root;

    bool validate_ci = false;
    bool validate_fail_on_warning = false;

    bool init_force = false;

    std::string new_problem;
    std::string new_problem_file;
    std::string new_id;
    std::vector<std::string> new_docs;

    std::string cycle_id;
    std::string script_file;
    std::string answers_file;
    std::string review_verdict;
    std::string review_notes;
    int log_minutes = 0;
    std::string log_domain;
    std::vector<std::string> run_scripts;

    std::string report_fmt = "table";
    int report_window = 3;
    int report_threshold = 1;

    std::string query_id;
    std::string query_neighbors;
    std::string query_type;

    int promote_threshold = 3;

    std::string check_dir;
    std::string check_against;
};

int cmd_init(const fs::path& root, const cli_options& opt, std::ostream& out) {
    fs::create_directories(root / "kb");
    fs::create_directories(root / "meta");
    fs::create_directories(root / "logs");
    fs::create_directories(root / "sandboxes");
    fs::path et = root / "meta" / "entity-types.yaml";
    fs::path rt = root / "meta" / "relationship-types.yaml";
    if (!opt.init_force && (fs::exists(et) || fs::exists(rt)))
        throw error(errc::usage_error,
                    "meta files already exist under " + (root / "meta").string() +
                        " (use --force to overwrite)");
    save_metamodel(builtin_metamodel(), et, rt);
    out << "initialized workspace at " << root.string() << "\n";
    return exit_ok;
}

int cmd_validate(const fs::path& root, const cli_options& opt, std::ostream& out) {
    metamodel m = workspace_metamodel(root);
    if (opt.validate_ci) return ci_check(root, m, opt.validate_fail_on_warning, out);

    std::vector<diagnostic> load_diags;
    knowledge_base kb = load_kb(root, m, load_diags);
    validation_report report = validate_kb(kb);
    report.diagnostics.insert(report.diagnostics.end(), load_diags.begin(), load_diags.end());
    sort_diagnostics(report.diagnostics);
    print_validation(report, out);
    out << "checked " << report.checked_entities << " entities: " << report.error_count()
        << " errors, " << report.warning_count() << " warnings\n";
    if (report.error_count() > 0) return exit_findings;
    if (opt.validate_fail_on_warning && report.warning_count() > 0) return exit_findings;
    return exit_ok;
}

int cmd_cycle_new(const fs::path& root, const cli_options& opt, std::ostream& out) {
    std::string problem = opt.new_problem;
    if (!opt.new_problem_file.empty()) {
        if (!problem.empty())
            throw error(errc::usage_error, "give the problem inline or via --file, not both");
        problem = read_file(opt.new_problem_file);
    }
    std::string id = opt.new_id.empty() ? next_free_cycle_id(root) : opt.new_id;
    sandbox s = create_sandbox(root, problem, opt.new_docs, id);
    out << "created sandbox " << s.cycle_id << " (state " << sandbox_state_name(s.state)
        << ")\n";
    return exit_ok;
}

int cmd_cycle_attempt(const fs::path& root, const cli_options& opt, std::ostream& out) {
    metamodel m = workspace_metamodel(root);
    sandbox s = load_sandbox(root, opt.cycle_id, m);
    cycle_script script = load_cycle_script(opt.script_file, m);
    scripted_agent_adapter agent(script, s.attempt_cursor, s.draft_cursor);
    knowledge_base kb = load_kb(root, m);
    run_attempt(s, kb, agent);
    s.attempt_cursor = agent.attempt_cursor();
    s.draft_cursor = agent.draft_cursor();
    save_sandbox(s);
    out << "attempt " << s.attempts.back().number << " recorded (state "
        << sandbox_state_name(s.state) << ")\n";
    return exit_ok;
}

int cmd_cycle_answer(const fs::path& root, const cli_options& opt, std::ostream& out) {
    metamodel m = workspace_metamodel(root);
    sandbox s = load_sandbox(root, opt.cycle_id, m);
    record_answers(s, read_answers_file(opt.answers_file));
    out << "answers recorded (state " << sandbox_state_name(s.state) << ")\n";
    return exit_ok;
}

int cmd_cycle_draft(const fs::path& root, const cli_options& opt, std::ostream& out) {
    metamodel m = workspace_metamodel(root);
    sandbox s = load_sandbox(root, opt.cycle_id, m);
    cycle_script script = load_cycle_script(opt.script_file, m);
    scripted_agent_adapter agent(script, s.attempt_cursor, s.draft_cursor);
    draft_entities(s, m, agent);
    s.attempt_cursor = agent.attempt_cursor();
    s.draft_cursor = agent.draft_cursor();
    save_sandbox(s);
    out << "draft round " << s.draft_rounds << " holds " << s.drafts.size()
        << " entities (state " << sandbox_state_name(s.state) << ")\n";
    return exit_ok;
}

int cmd_cycle_review(const fs::path& root, const cli_options& opt, std::ostream& out) {
    metamodel m = workspace_metamodel(root);
    sandbox s = load_sandbox(root, opt.cycle_id, m);
    verdict v;
    if (opt.review_verdict == "accepted")
        v = verdict::accepted;
    else if (opt.review_verdict == "rejected")
        v = verdict::rejected;
    else
        throw error(errc::usage_error, "--verdict must be accepted or rejected");
    review_attempt(s, v, opt.review_notes);
    out << "attempt " << s.attempts.back().number << " " << opt.review_verdict << " (state "
        << sandbox_state_name(s.state) << ")\n";
    return exit_ok;
}

int cmd_cycle_graduate(const fs::path& root, const cli_options& opt, std::ostream& out) {
    metamodel m = workspace_metamodel(root);
    sandbox s = load_sandbox(root, opt.cycle_id, m);
    validation_report report = graduate(s, root, m);
    print_validation(report, out);
    out << "graduated " << s.created_ids.size() + s.updated_ids.size() << " entities ("
        << s.created_ids.size() << " created, " << s.updated_ids.size() << " updated)\n";
    return exit_ok;
}

int cmd_cycle_log(const fs::path& root, const cli_options& opt, std::ostream& out) {
    metamodel m = workspace_metamodel(root);
    sandbox s = load_sandbox(root, opt.cycle_id, m);
    if (opt.log_minutes <= 0)
        throw error(errc::usage_error, "--minutes must be positive");
    if (opt.log_domain.empty()) throw error(errc::usage_error, "--domain is required");
    knowledge_base before = kb_before_cycle(root, m, s);
    cycle_log_record rec = write_cycle_log(s, before, opt.log_minutes, opt.log_domain);
    out << "wrote logs/cycle-" << rec.cycle_id << ".md (" << rec.entities_created
        << " created, " << rec.entities_updated << " updated, " << rec.entities_reused.size()
        << " reused)\n";
    return exit_ok;
}

int cmd_cycle_run(const fs::path& root, const cli_options& opt, std::ostream& out) {
    metamodel m = workspace_metamodel(root);
    for (const auto& file : opt.run_scripts) {
        cycle_script script = load_cycle_script(file, m);
        cycle_outcome outcome = replay_cycle(script, root, m);
        out << "cycle " << outcome.cycle_id << ": " << outcome.log.entities_created
            << " created, " << outcome.log.entities_updated << " updated, "
            << outcome.log.entities_reused.size() << " reused\n";
    }
    return exit_ok;
}

int cmd_report(const fs::path& root, const cli_options& opt, std::ostream& out) {
    metamodel m = workspace_metamodel(root);
    knowledge_base kb = load_kb(root, m);
    std::vector<cycle_log_record> logs = read_logs(root);
    convergence_report report = build_report(logs, kb, opt.report_window,
                                             opt.report_threshold);
    report_format fmt;
    if (opt.report_fmt == "table")
        fmt = report_format::table;
    else if (opt.report_fmt == "delimited")
        fmt = report_format::delimited;
    else
        throw error(errc::usage_error, "--format must be table or delimited");
    out << render_report(report, fmt);
    return exit_ok;
}

int cmd_query(const fs::path& root, const cli_options& opt, std::ostream& out) {
    metamodel m = workspace_metamodel(root);
    knowledge_base kb = load_kb(root, m);

    if (!opt.query_type.empty()) {
        if (!opt.query_id.empty())
            throw error(errc::usage_error, "give an id or --type, not both");
        for (const entity* e : find_by_type(kb, opt.query_type))
            out << e->id << "\t" << e->name << "\n";
        return exit_ok;
    }
    if (opt.query_id.empty())
        throw error(errc::usage_error, "query needs an entity id or --type");

    if (!opt.query_neighbors.empty()) {
        direction dir;
        if (opt.query_neighbors == "in")
            dir = direction::in;
        else if (opt.query_neighbors == "out")
            dir = direction::out;
        else if (opt.query_neighbors == "both")
            dir = direction::both;
        else
            throw error(errc::usage_error, "--neighbors must be in, out or both");
        for (const auto& [key, other] : neighbors(kb, opt.query_id, dir))
            out << key << "\t" << other << "\n";
        return exit_ok;
    }

    auto it = kb.entities.find(opt.query_id);
    if (it == kb.entities.end())
        throw error(errc::unknown_entity, "no entity with id '" + opt.query_id + "'");
    const entity& e = it->second;
    out << "id: " << e.id << "\n";
    out << "type: " << e.entity_type << "\n";
    out << "name: " << e.name << "\n";
    out << "description: " << e.description << "\n";
    out << "status: " << e.status << "\n";
    out << "depth: " << (e.depth() == curation_depth::stub ? "stub" : "deep") << "\n";
    for (const auto& [key, targets] : e.relationships) {
        out << key << ":";
        for (const auto& t : targets) out << " " << t;
        out << "\n";
    }
    return exit_ok;
}

int cmd_promote(const fs::path& root, const cli_options& opt, std::ostream& out) {
    metamodel m = workspace_metamodel(root);
    knowledge_base kb = load_kb(root, m);
    std::vector<cycle_log_record> logs = read_logs(root);
    auto candidates = promotion_candidates(kb, logs, opt.promote_threshold);
    if (candidates.empty()) {
        out << "no promotion candidates\n";
        return exit_ok;
    }
    for (const auto& c : candidates)
        out << c.entity_id << "\treferenced_in=" << c.reference_count << "\n";
    return exit_ok;
}

int cmd_check(const fs::path& root, const cli_options& opt, std::ostream& out) {
    metamodel m = workspace_metamodel(root);
    knowledge_base base = load_kb(root, m);

    fs::path dir(opt.check_dir);
    change_set cs = load_changeset_dir(dir, base, dir.filename().string());
    out << "change set " << cs.source_label << ": " << cs.added.size() << " added, "
        << cs.modified.size() << " modified, " << cs.removed.size() << " removed\n";

    if (!opt.check_against.empty()) {
        fs::path other(opt.check_against);
        change_set cs2 = load_changeset_dir(other, base, other.filename().string());
        out << "change set " << cs2.source_label << ": " << cs2.added.size() << " added, "
            << cs2.modified.size() << " modified, " << cs2.removed.size() << " removed\n";
        auto conflicts = detect_conflicts(cs, cs2);
        for (const auto& c : conflicts)
            out << "conflict:" << conflict_kind_name(c.kind) << ":" << c.entity_id << ":"
                << c.parties.first << "," << c.parties.second << "\n";
        if (conflicts.empty()) {
            out << "no conflicts\n";
            return exit_ok;
        }
        return exit_findings;
    }

    validation_report report = check_changeset(base, cs);
    print_validation(report, out);
    out << "applied cleanly to " << report.checked_entities << " entities: "
        << report.error_count() << " errors, " << report.warning_count() << " warnings\n";
    return report.error_count() > 0 ? exit_findings : exit_ok;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"knowledge workspace for demand-driven context curation"};
    app.name("ddc");
    cli_options opt;
    app.add_option("--root", opt.root, "workspace root (default: $DDC_ROOT or the cwd)")
        ->envname("DDC_ROOT");
    app.require_subcommand(1);

    CLI::App* init = app.add_subcommand("init", "scaffold a workspace with the builtin meta-model");
    init->add_flag("--force", opt.init_force, "overwrite existing meta files");

    CLI::App* validate = app.add_subcommand("validate", "validate the knowledge base");
    validate->add_flag("--ci", opt.validate_ci, "machine-parseable output only");
    validate->add_flag("--fail-on-warning", opt.validate_fail_on_warning,
                       "exit 1 when warnings remain");

    CLI::App* cycle = app.add_subcommand("cycle", "drive curation cycles");
    cycle->require_subcommand(1);

    CLI::App* c_new = cycle->add_subcommand("new", "open a sandbox for a problem");
    c_new->add_option("problem", opt.new_problem, "problem statement");
    c_new->add_option("--file", opt.new_problem_file, "read the problem statement from a file");
    c_new->add_option("--id", opt.new_id, "cycle id (default: next free)");
    c_new->add_option("--doc", opt.new_docs, "source document to copy into the sandbox");

    CLI::App* c_attempt = cycle->add_subcommand("attempt", "run the next scripted attempt");
    c_attempt->add_option("id", opt.cycle_id, "cycle id")->required();
    c_attempt->add_option("--script", opt.script_file, "cycle script file")->required();

    CLI::App* c_answer = cycle->add_subcommand("answer", "record human answers");
    c_answer->add_option("id", opt.cycle_id, "cycle id")->required();
    c_answer->add_option("--file", opt.answers_file, "YAML mapping of answers")->required();

    CLI::App* c_draft = cycle->add_subcommand("draft", "run the next scripted draft round");
    c_draft->add_option("id", opt.cycle_id, "cycle id")->required();
    c_draft->add_option("--script", opt.script_file, "cycle script file")->required();

    CLI::App* c_review = cycle->add_subcommand("review", "review the pending attempt");
    c_review->add_option("id", opt.cycle_id, "cycle id")->required();
    c_review->add_option("--verdict", opt.review_verdict, "accepted or rejected")->required();
    c_review->add_option("--notes", opt.review_notes, "reviewer notes");

    CLI::App* c_graduate = cycle->add_subcommand("graduate", "write accepted drafts into the KB");
    c_graduate->add_option("id", opt.cycle_id, "cycle id")->required();

    CLI::App* c_log = cycle->add_subcommand("log", "write the cycle log");
    c_log->add_option("id", opt.cycle_id, "cycle id")->required();
    c_log->add_option("--minutes", opt.log_minutes, "time spent")->required();
    c_log->add_option("--domain", opt.log_domain, "domain label")->required();

    CLI::App* c_run = cycle->add_subcommand("run", "replay scripted cycles end to end");
    c_run->add_option("--script", opt.run_scripts, "cycle script files, in order")
        ->required()
        ->expected(-1);

    CLI::App* report = app.add_subcommand("report", "convergence analytics over cycle logs");
    report->add_option("--format", opt.report_fmt, "table or delimited");
    report->add_option("--window", opt.report_window, "trailing quiet cycles required");
    report->add_option("--threshold", opt.report_threshold,
                       "max new entities for a quiet cycle");

    CLI::App* query = app.add_subcommand("query", "inspect entities and their neighbors");
    query->add_option("id", opt.query_id, "entity id");
    query->add_option("--neighbors", opt.query_neighbors, "in, out or both");
    query->add_option("--type", opt.query_type, "list entities of a type");

    CLI::App* promote = app.add_subcommand("promote", "list stub promotion candidates");
    promote->add_option("--threshold", opt.promote_threshold,
                        "distinct citing cycles required");

    CLI::App* check = app.add_subcommand("check", "gate a change-set directory");
    check->add_option("dir", opt.check_dir, "change-set directory")->required();
    check->add_option("--conflicts-with", opt.check_against,
                      "second change-set directory to compare");

    try {
        std::vector<std::string> args(argv.rbegin(), argv.rend());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        fs::path root = opt.root.empty() ? fs::current_path() : fs::path(opt.root);

        if (app.got_subcommand(init)) return cmd_init(root, opt, out);
        if (app.got_subcommand(validate)) return cmd_validate(root, opt, out);
        if (app.got_subcommand(cycle)) {
            if (cycle->got_subcommand(c_new)) return cmd_cycle_new(root, opt, out);
            if (cycle->got_subcommand(c_attempt)) return cmd_cycle_attempt(root, opt, out);
            if (cycle->got_subcommand(c_answer)) return cmd_cycle_answer(root, opt, out);
            if (cycle->got_subcommand(c_draft)) return cmd_cycle_draft(root, opt, out);
            if (cycle->got_subcommand(c_review)) return cmd_cycle_review(root, opt, out);
            if (cycle->got_subcommand(c_graduate)) return cmd_cycle_graduate(root, opt, out);
            if (cycle->got_subcommand(c_log)) return cmd_cycle_log(root, opt, out);
            if (cycle->got_subcommand(c_run)) return cmd_cycle_run(root, opt, out);
        }
        if (app.got_subcommand(report)) return cmd_report(root, opt, out);
        if (app.got_subcommand(query)) return cmd_query(root, opt, out);
        if (app.got_subcommand(promote)) return cmd_promote(root, opt, out);
        if (app.got_subcommand(check)) return cmd_check(root, opt, out);
        err << "error: no command given\n";
        return exit_usage;
    } catch (const error& e) {
        for (const auto& d : e.diagnostics()) err << format_diagnostic(d) << "\n";
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
}

}  // namespace ddc::cli
