#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ddc/cycle_log.hpp"
#include "ddc/entity.hpp"
#include "ddc/kb.hpp"

namespace ddc {

// Reachable sandbox states. run_attempt from created lands in gaps_identified
// when the adapter raises a checklist and in re_attempted when it answers
// directly (the answer is then immediately reviewable).
enum class sandbox_state {
    created,
    gaps_identified,
    answers_recorded,
    drafted,
    re_attempted,
    rejected,
    accepted,
    graduated,
    logged,
};

const char* sandbox_state_name(sandbox_state s);
sandbox_state sandbox_state_from_name(const std::string& name);

enum class verdict { pending, accepted, rejected };

struct checklist_item {
    std::string item_id;
    std::string question;
    std::string expected_entity_type;
    bool answered = false;
};

struct attempt {
    int number = 0;  // 1-based
    std::string answer_text;
    int confidence = 0;  // 1..5
    std::vector<std::string> context_entity_ids;
    verdict review = verdict::pending;
    std::string reviewer_notes;
};

struct sandbox {
    std::string cycle_id;  // zero-padded 3 digits
    std::filesystem::path workspace_root;
    std::filesystem::path dir;  // workspace_root / "sandboxes" / cycle_id
    sandbox_state state = sandbox_state::created;
    std::string problem;
    std::string problem_name;  // first line of the problem statement
    std::vector<std::string> source_docs;
    std::vector<checklist_item> checklist;
    std::vector<std::pair<std::string, std::string>> answers;  // (item or label, text)
    std::vector<attempt> attempts;
    std::vector<entity> drafts;              // status draft, id-unique
    std::vector<std::string> deleted_drafts;  // cumulative
    std::string date_started;
    std::string date_completed;
    int draft_rounds = 0;
    // set by graduate(), consumed by write_cycle_log and the CLI
    std::vector<std::string> created_ids;
    std::vector<std::string> updated_ids;
    // scripted-adapter consumption counters, persisted so stepwise CLI runs
    // resume mid-script
    int attempt_cursor = 0;
    int draft_cursor = 0;
    // answers recorded while rejected permit a direct re-attempt
    bool answers_follow_rejection = false;

    const attempt* accepted_attempt() const;
    const entity* find_draft(const std::string& id) const;
};

struct attempt_response {
    std::string answer_text;
    int confidence = 0;
    std::vector<checklist_item> checklist;
    // KB entity ids the agent consulted; becomes the attempt's context
    // together with the current draft ids.
    std::vector<std::string> consulted_ids;
};

struct draft_response {
    std::vector<entity> entities;
    std::vector<std::string> deleted_ids;
};

class agent_adapter {
public:
    virtual ~agent_adapter() = default;
    virtual attempt_response next_attempt(const std::string& problem,
                                          const knowledge_base& kb_view,
                                          const std::vector<entity>& drafts) = 0;
    virtual draft_response next_draft(
        const std::vector<std::pair<std::string, std::string>>& answers,
        const metamodel& m) = 0;
};

// --- operations ------------------------------------------------------------

// Errors: empty_problem, duplicate_cycle_id, io_failure. Copies source docs
// into the sandbox and stamps date_started (today unless preset via the
// scripted replay path).
sandbox create_sandbox(const std::filesystem::path& workspace_root,
                       const std::string& problem,
                       const std::vector<std::string>& source_docs,
                       const std::string& next_id);

// Errors: illegal_state, adapter_failure. Appends an attempt whose context is
// the adapter's consulted ids plus current draft ids.
void run_attempt(sandbox& s, const knowledge_base& kb_view, agent_adapter& agent);

// Errors: illegal_state, unknown_checklist_item. In gaps_identified the keys
// must name checklist items; in rejected any key is accepted as a free-form
// correction.
void record_answers(sandbox& s,
                    const std::vector<std::pair<std::string, std::string>>& answers);

// Errors: illegal_state, adapter_failure, draft_validation_failed. New drafts
// merge by id over previous rounds; deletions are recorded and their files
// removed.
void draft_entities(sandbox& s, const metamodel& m, agent_adapter& agent);

// Errors: illegal_state, no_pending_attempt.
void review_attempt(sandbox& s, verdict v, const std::string& notes);

// Errors: illegal_state, validation_blocked. Validates (KB ∪ drafts) and
// writes every draft canonically to kb/<type>/<id>.md with status active.
// Returns per-file diagnostics from the pre-write validation (warnings only).
validation_report graduate(sandbox& s, const std::filesystem::path& kb_root,
                           const metamodel& m);

// Errors: illegal_state, io_failure. entities_reused = accepted attempt's
// context ∩ kb_before.
cycle_log_record write_cycle_log(sandbox& s, const knowledge_base& kb_before,
                                 int time_spent_minutes, const std::string& domain);

// --- persistence -----------------------------------------------------------

// Sandboxes persist under sandboxes/<id>/ as problem.md, checklist.md,
// answers.md, attempts/<n>.md, drafts/<type>/<id>.md and state.yaml, so every
// CLI step can run in a fresh process.
void save_sandbox(const sandbox& s);
sandbox load_sandbox(const std::filesystem::path& workspace_root,
                     const std::string& cycle_id, const metamodel& m);
std::string next_free_cycle_id(const std::filesystem::path& workspace_root);

// --- scripted replays --------------------------------------------------

struct script_review {
    verdict v = verdict::pending;
    std::string notes;
};

// A full scripted cycle: the agent side (attempts, draft rounds) feeds the
// scripted adapter; the human side (answer sets, reviews) and the log
// metadata drive replay_cycle.
struct cycle_script {
    std::string cycle_id;
    std::string problem;
    std::string domain;
    std::string date_started;
    std::string date_completed;
    int time_spent_minutes = 0;
    std::vector<std::string> source_docs;
    std::vector<attempt_response> attempts;
    std::vector<draft_response> drafts;  // entities embedded as file text
    std::vector<std::vector<std::pair<std::string, std::string>>> answer_sets;
    std::vector<script_review> reviews;
};

cycle_script load_cycle_script(const std::filesystem::path& file, const metamodel& m);

// Serves the script's agent responses in order; exhaustion or a consulted id
// missing from the KB view raises adapter_failure.
class scripted_agent_adapter : public agent_adapter {
public:
    scripted_agent_adapter(const cycle_script& script, int attempt_cursor = 0,
                           int draft_cursor = 0);
    attempt_response next_attempt(const std::string& problem,
                                  const knowledge_base& kb_view,
                                  const std::vector<entity>& drafts) override;
    draft_response next_draft(
        const std::vector<std::pair<std::string, std::string>>& answers,
        const metamodel& m) override;
    int attempt_cursor() const { return attempt_cursor_; }
    int draft_cursor() const { return draft_cursor_; }

private:
    const cycle_script& script_;
    int attempt_cursor_ = 0;
    int draft_cursor_ = 0;
};

struct cycle_outcome {
    std::string cycle_id;
    sandbox sandbox_final;
    cycle_log_record log;
};

// Drives one scripted cycle end to end: create, attempt, answer/draft loops,
// reviews, graduate, log. The script must be fully consumed.
cycle_outcome replay_cycle(const cycle_script& script,
                           const std::filesystem::path& workspace_root,
                           const metamodel& m);

}  // namespace ddc
