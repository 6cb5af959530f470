#include "ddc/diagnostics.hpp"

#include <algorithm>
#include <tuple>

namespace ddc {

std::string format_diagnostic(const diagnostic& d) {
    std::string out = d.level == severity::error ? "error" : "warning";
    out += ':';
    out += d.code;
    out += ':';
    out += d.path;
    out += ':';
    out += std::to_string(d.line);
    out += ':';
    out += d.message;
    return out;
}

void sort_diagnostics(std::vector<diagnostic>& diagnostics) {
    std::stable_sort(diagnostics.begin(), diagnostics.end(),
                     [](const diagnostic& a, const diagnostic& b) {
                         return std::tie(a.path, a.line, a.code, a.entity_id, a.message) <
                                std::tie(b.path, b.line, b.code, b.entity_id, b.message);
                     });
}

int validation_report::error_count() const {
    int n = 0;
    for (const auto& d : diagnostics)
        if (d.level == severity::error) ++n;
    return n;
}

int validation_report::warning_count() const {
    int n = 0;
    for (const auto& d : diagnostics)
        if (d.level == severity::warning) ++n;
    return n;
}

}  // namespace ddc
