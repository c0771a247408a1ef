#include "iadrc/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace iadrc {

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols{
        "t",       "wr_ref",  "wl_ref",  "wr",      "wl",      "iar",     "ial",   "ur",        "ul",
        "xhat1_r", "xhat2_r", "xhat3_r", "xhat1_l", "xhat2_l", "xhat3_l", "r1_r",  "r2_r",      "r1_l",
        "r2_l",    "x",       "y",       "theta",   "x_ref",   "y_ref",   "theta_ref", "e_theta", "tau_ext"};
    return cols;
}

void write_csv(std::ostream& out, const SimLog& log) {
    const auto& cols = csv_columns();
    for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
    out << '\n';

    const WheelLog& R = log.right;
    const WheelLog& L = log.left;
    char buf[40];
    for (Eigen::Index i = 0; i < log.samples(); ++i) {
        const double tau = R.tau_ext(i) != 0.0 ? R.tau_ext(i) : L.tau_ext(i);
        const double row[] = {log.t(i),          R.omega_ref(i),    L.omega_ref(i), R.omega(i),       L.omega(i),
                              R.i_a(i),          L.i_a(i),          R.u(i),         L.u(i),           R.xhat1(i),
                              R.xhat2(i),        R.xhat3(i),        L.xhat1(i),     L.xhat2(i),       L.xhat3(i),
                              R.r1(i),           R.r2(i),           L.r1(i),        L.r2(i),          log.pose.x(i),
                              log.pose.y(i),     log.pose.theta(i), log.pose_ref.x(i), log.pose_ref.y(i),
                              log.pose_ref.theta(i), log.e_theta(i), tau};
        static_assert(sizeof row / sizeof row[0] == 27);
        for (std::size_t c = 0; c < std::size(row); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", row[c]);
            out << (c ? "," : "") << buf;
        }
        out << '\n';
    }
}

void write_csv(const std::string& path, const SimLog& log) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_csv(out, log);
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

Eigen::VectorXd CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::out_of_range("no column '" + name + "'");
    return values.col(it - header.begin());
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: missing header");
    {
        std::istringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) table.header.push_back(cell);
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != table.header.size())
            throw std::runtime_error("csv: row " + std::to_string(rows.size() + 1) + " has wrong width");
        rows.push_back(std::move(row));
    }
    table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(table.header.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) table.values(r, c) = rows[r][c];
    return table;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_csv(in);
}

}  // namespace iadrc
