#pragma once

#include <string>
#include <utility>
#include <vector>

#include "iadrc/metrics.hpp"

namespace iadrc {

struct ReportRow {
    std::string label;
    double adrc;
    double iadrc;
};

/// Index rows in table order: pose OPIs, then per-wheel ITAE, ISU, control
/// TV, then peak |e_theta|.
std::vector<ReportRow> comparison_rows(const PerformanceReport& adrc, const PerformanceReport& iadrc);

/// 100 (1 - iadrc / adrc); NaN when adrc == 0.
double improvement_percent(double adrc, double iadrc);

/// Plain-text table of `a` against `b` with the improvement of b over a, followed by optional
/// `key: value` lines.
std::string format_comparison(const std::string& label_a, const PerformanceReport& a, const std::string& label_b,
                              const PerformanceReport& b,
                              const std::vector<std::pair<std::string, std::string>>& notes = {});

/// Single-controller index listing.
std::string format_report(const std::string& label, const PerformanceReport& r);

}  // namespace iadrc
