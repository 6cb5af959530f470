#include "ddc/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <set>
#include <sstream>

#include "ddc/errors.hpp"

namespace ddc {

cycle_series compute_series(const std::vector<cycle_log_record>& logs) {
    if (logs.empty()) throw error(errc::empty_input, "no cycle logs");

    std::vector<const cycle_log_record*> ordered;
    ordered.reserve(logs.size());
    for (const auto& log : logs) ordered.push_back(&log);
    std::sort(ordered.begin(), ordered.end(),
              [](const cycle_log_record* a, const cycle_log_record* b) {
                  return a->cycle_number() < b->cycle_number();
              });

    cycle_series s;
    for (const auto* log : ordered) {
        int n = log->cycle_number();
        if (!s.cycle_numbers.empty() && s.cycle_numbers.back() == n)
            throw error(errc::duplicate_cycle,
                        "cycle " + log->cycle_id + " appears more than once");
        s.cycle_numbers.push_back(n);
        s.created.push_back(log->entities_created);
        s.updated.push_back(log->entities_updated);
        s.reused.push_back(static_cast<int>(log->entities_reused.size()));
        s.minutes.push_back(log->time_spent_minutes);
    }
    return s;
}

std::optional<double> reuse_ratio(const cycle_series& series, int n) {
    if (n < 1 || static_cast<size_t>(n) > series.size())
        throw error(errc::index_out_of_range,
                    "cycle position " + std::to_string(n) + " outside series of size " +
                        std::to_string(series.size()));
    int created = series.created[n - 1];
    int reused = series.reused[n - 1];
    if (created + reused == 0) return std::nullopt;
    return static_cast<double>(reused) / (created + reused);
}

power_law_fit fit_power_law(const std::vector<double>& counts) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0) {
            xs.push_back(std::log(static_cast<double>(i + 1)));
            ys.push_back(std::log(counts[i]));
        }
    }
    if (xs.size() < 2)
        throw error(errc::insufficient_points,
                    "power-law fit needs at least two positive counts");

    size_t k = xs.size();
    double mean_x = 0.0, mean_y = 0.0;
    for (size_t i = 0; i < k; ++i) {
        mean_x += xs[i];
        mean_y += ys[i];
    }
    mean_x /= static_cast<double>(k);
    mean_y /= static_cast<double>(k);

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t i = 0; i < k; ++i) {
        double dx = xs[i] - mean_x;
        double dy = ys[i] - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0)
        throw error(errc::insufficient_points, "power-law fit needs distinct cycle numbers");

    double slope = sxy / sxx;
    power_law_fit fit;
    fit.alpha = -slope;
    fit.log_intercept = mean_y - slope * mean_x;
    fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    fit.points_used = static_cast<int>(k);
    return fit;
}

power_law_fit fit_power_law(const cycle_series& series) {
    std::vector<double> counts(series.created.begin(), series.created.end());
    return fit_power_law(counts);
}

bool detect_convergence(const cycle_series& series, int window, int threshold,
                        int& convergence_cycle) {
    if (window < 1) throw error(errc::invalid_parameter, "window must be at least 1");
    if (threshold < 0) throw error(errc::invalid_parameter, "threshold must be non-negative");

    int n = static_cast<int>(series.size());
    int last_bad = 0;
    for (int i = 0; i < n; ++i)
        if (series.created[i] > threshold) last_bad = i + 1;

    if (n - last_bad >= window) {
        convergence_cycle = last_bad + window;
        return true;
    }
    convergence_cycle = 0;
    return false;
}

std::map<std::string, int> entity_breakdown(const knowledge_base& kb) {
    std::map<std::string, int> out;
    for (const auto& [id, e] : kb.entities) ++out[e.entity_type];
    return out;
}

std::vector<promotion_candidate> promotion_candidates(
    const knowledge_base& kb, const std::vector<cycle_log_record>& logs, int threshold) {
    if (threshold < 1) throw error(errc::invalid_parameter, "threshold must be at least 1");

    std::map<std::string, std::set<std::string>> citing_cycles;
    for (const auto& log : logs)
        for (const auto& id : log.entities_reused) citing_cycles[id].insert(log.cycle_id);

    std::vector<promotion_candidate> out;
    for (const auto& [id, e] : kb.entities) {
        if (e.depth() != curation_depth::stub) continue;
        auto it = citing_cycles.find(id);
        int count = it == citing_cycles.end() ? 0 : static_cast<int>(it->second.size());
        if (count >= threshold) out.push_back(promotion_candidate{id, count});
    }
    std::sort(out.begin(), out.end(),
              [](const promotion_candidate& a, const promotion_candidate& b) {
                  if (a.reference_count != b.reference_count)
                      return a.reference_count > b.reference_count;
                  return a.entity_id < b.entity_id;
              });
    return out;
}

cycle_series synthetic_series(int n_cycles, double alpha, double scale, std::uint64_t seed) {
    if (n_cycles < 1) throw error(errc::invalid_parameter, "n_cycles must be at least 1");
    if (!(alpha > 0.0)) throw error(errc::invalid_parameter, "alpha must be positive");
    if (!(scale > 0.0)) throw error(errc::invalid_parameter, "scale must be positive");

    cycle_series s;
    std::uint64_t state = seed;
    for (int n = 1; n <= n_cycles; ++n) {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        int jitter = static_cast<int>((state >> 33) % 3) - 1;

        double decay = std::pow(static_cast<double>(n), -alpha);
        long long base = std::llround(scale * decay);
        long long created = base >= 2 ? std::max(0LL, base + jitter) : base;
        long long reused = std::llround(scale * (1.0 - decay));

        s.cycle_numbers.push_back(n);
        s.created.push_back(static_cast<int>(created));
        s.updated.push_back(0);
        s.reused.push_back(static_cast<int>(reused));
        s.minutes.push_back(30);
    }
    return s;
}

convergence_report build_report(const std::vector<cycle_log_record>& logs,
                                const knowledge_base& kb, int window, int threshold) {
    convergence_report report;
    if (!logs.empty()) report.series = compute_series(logs);

    for (size_t i = 1; i <= report.series.size(); ++i)
        report.reuse_ratios.push_back(reuse_ratio(report.series, static_cast<int>(i)));

    try {
        report.fit = fit_power_law(report.series);
    } catch (const error& e) {
        if (e.code() != errc::insufficient_points) throw;
    }

    report.converged = detect_convergence(report.series, window, threshold,
                                          report.convergence_cycle);

    for (int c : report.series.created) report.total_entities += c;
    for (int m : report.series.minutes) report.total_minutes += m;
    report.breakdown = entity_breakdown(kb);
    return report;
}

namespace {

std::string format_ratio(double r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", r);
    std::string s = buf;
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.push_back('0');
    return s;
}

std::string format_fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

std::string render_report(const convergence_report& report, report_format format) {
    std::ostringstream out;
    const cycle_series& s = report.series;

    if (format == report_format::delimited) {
        out << "cycle,new,updated,reused,ratio,minutes\n";
        for (size_t i = 0; i < s.size(); ++i) {
            out << s.cycle_numbers[i] << ',' << s.created[i] << ',' << s.updated[i] << ','
                << s.reused[i] << ',';
            if (report.reuse_ratios[i]) out << format_ratio(*report.reuse_ratios[i]);
            out << ',' << s.minutes[i] << "\n";
        }
        out << "total_entities=" << report.total_entities << "\n";
        out << "total_minutes=" << report.total_minutes << "\n";
        if (report.fit) {
            out << "alpha=" << format_fixed(report.fit->alpha) << "\n";
            out << "r_squared=" << format_fixed(report.fit->r_squared) << "\n";
            out << "points_used=" << report.fit->points_used << "\n";
        }
        out << "converged=" << (report.converged ? "true" : "false") << "\n";
        if (report.converged) out << "convergence_cycle=" << report.convergence_cycle << "\n";
        return out.str();
    }

    out << std::left << std::setw(7) << "cycle" << std::setw(6) << "new" << std::setw(9)
        << "updated" << std::setw(8) << "reused" << std::setw(8) << "ratio"
        << "minutes\n";
    for (size_t i = 0; i < s.size(); ++i) {
        out << std::left << std::setw(7) << s.cycle_numbers[i] << std::setw(6) << s.created[i]
            << std::setw(9) << s.updated[i] << std::setw(8) << s.reused[i] << std::setw(8)
            << (report.reuse_ratios[i] ? format_ratio(*report.reuse_ratios[i]) : "-")
            << s.minutes[i] << "\n";
    }
    out << "totals: entities=" << report.total_entities
        << " minutes=" << report.total_minutes << "\n";
    if (report.fit)
        out << "fit: alpha=" << format_fixed(report.fit->alpha)
            << " r_squared=" << format_fixed(report.fit->r_squared)
            << " points=" << report.fit->points_used << "\n";
    if (report.converged)
        out << "convergence: cycle " << report.convergence_cycle << "\n";
    else
        out << "convergence: not reached\n";
    if (!report.breakdown.empty()) {
        out << "breakdown:";
        for (const auto& [type, count] : report.breakdown) out << ' ' << type << '=' << count;
        out << "\n";
    }
    return out.str();
}

}  // namespace ddc
