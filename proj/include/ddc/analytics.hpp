#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ddc/cycle_log.hpp"
#include "ddc/kb.hpp"

namespace ddc {

// Per-cycle counters in cycle order; index 0 is cycle 1.
struct cycle_series {
    std::vector<int> cycle_numbers;
    std::vector<int> created;
    std::vector<int> updated;
    std::vector<int> reused;
    std::vector<int> minutes;

    std::size_t size() const { return created.size(); }
};

struct power_law_fit {
    double alpha = 0.0;
    double log_intercept = 0.0;
    double r_squared = 0.0;
    int points_used = 0;
};

struct promotion_candidate {
    std::string entity_id;
    int reference_count = 0;
};

struct convergence_report {
    cycle_series series;
    std::vector<std::optional<double>> reuse_ratios;
    std::optional<power_law_fit> fit;
    bool converged = false;
    int convergence_cycle = 0;  // meaningful only when converged
    int total_entities = 0;
    int total_minutes = 0;
    std::map<std::string, int> breakdown;  // entity type -> count, zero omitted
};

// Orders records by numeric cycle id. Errors: empty_input, duplicate_cycle.
cycle_series compute_series(const std::vector<cycle_log_record>& logs);

// reused / (created + reused) for 1-based cycle position n; nullopt when the
// denominator is zero. Errors: index_out_of_range.
std::optional<double> reuse_ratio(const cycle_series& series, int n);

// OLS on (ln n, ln e_n) over positive counts; alpha is the negated slope.
// Errors: insufficient_points (fewer than 2 positive points).
power_law_fit fit_power_law(const std::vector<double>& counts);
power_law_fit fit_power_law(const cycle_series& series);

// Converged when the trailing run after the last count above threshold is at
// least `window` long; fires at (last exceedance + window). Never fires before
// the first window whose counts are all within threshold.
bool detect_convergence(const cycle_series& series, int window, int threshold,
                        int& convergence_cycle);

// Entity-type counts over a KB, zero-count types omitted.
std::map<std::string, int> entity_breakdown(const knowledge_base& kb);

// Stub entities referenced by entities_reused in at least `threshold` distinct
// cycles, most-referenced first (ties by id).
std::vector<promotion_candidate> promotion_candidates(
    const knowledge_base& kb, const std::vector<cycle_log_record>& logs,
    int threshold = 3);

// e_n = llround(scale * n^-alpha) with unit LCG jitter on counts of 2 or more,
// floored at 0; r_n = llround(scale * (1 - n^-alpha)). Deterministic per seed.
// Errors: invalid_parameter (n_cycles < 1, alpha <= 0, scale <= 0).
cycle_series synthetic_series(int n_cycles, double alpha, double scale,
                              std::uint64_t seed);

convergence_report build_report(const std::vector<cycle_log_record>& logs,
                                const knowledge_base& kb, int window = 3,
                                int threshold = 1);

enum class report_format { table, delimited };

// Delimited: "cycle,new,updated,reused,ratio,minutes" rows plus key=value
// summary lines; table: aligned human-readable rendering of the same report.
std::string render_report(const convergence_report& report, report_format format);

}  // namespace ddc
