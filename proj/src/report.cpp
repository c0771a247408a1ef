#include "iadrc/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace iadrc {

namespace {

std::vector<std::pair<std::string, double>> flatten(const PerformanceReport& r) {
    return {{"OPI_x", r.opi_x},
            {"OPI_y", r.opi_y},
            {"OPI_theta", r.opi_theta},
            {"ITAE_right", r.right.itae},
            {"ITAE_left", r.left.itae},
            {"ISU_right", r.right.isu},
            {"ISU_left", r.left.isu},
            {"TV_u_right", r.right.control_tv},
            {"TV_u_left", r.left.control_tv},
            {"peak_abs_e_theta", r.peak_e_theta}};
}

}  // namespace

std::vector<ReportRow> comparison_rows(const PerformanceReport& adrc, const PerformanceReport& iadrc) {
    const auto a = flatten(adrc);
    const auto b = flatten(iadrc);
    std::vector<ReportRow> rows;
    for (std::size_t i = 0; i < a.size(); ++i) rows.push_back({a[i].first, a[i].second, b[i].second});
    return rows;
}

double improvement_percent(double adrc, double iadrc) {
    if (adrc == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return 100.0 * (1.0 - iadrc / adrc);
}

std::string format_comparison(const std::string& label_a, const PerformanceReport& a, const std::string& label_b,
                              const PerformanceReport& b,
                              const std::vector<std::pair<std::string, std::string>>& notes) {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof line, "%-18s %16s %16s %12s\n", "index", label_a.c_str(), label_b.c_str(), "improvement");
    out += line;
    for (const auto& row : comparison_rows(a, b)) {
        const double pct = improvement_percent(row.adrc, row.iadrc);
        char pct_text[32];
        if (std::isnan(pct)) std::snprintf(pct_text, sizeof pct_text, "n/a");
        else std::snprintf(pct_text, sizeof pct_text, "%.2f%%", pct);
        std::snprintf(line, sizeof line, "%-18s %16.6e %16.6e %12s\n", row.label.c_str(), row.adrc, row.iadrc,
                      pct_text);
        out += line;
    }
    if (!notes.empty()) {
        out += "\n";
        for (const auto& [k, v] : notes) out += k + ": " + v + "\n";
    }
    return out;
}

std::string format_report(const std::string& label, const PerformanceReport& r) {
    std::string out = "controller: " + label + "\n";
    char line[128];
    for (const auto& [name, value] : flatten(r)) {
        std::snprintf(line, sizeof line, "%-18s %.17g\n", name.c_str(), value);
        out += line;
    }
    return out;
}

}  // namespace iadrc
