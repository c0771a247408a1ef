#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "iadrc/simulation.hpp"

namespace iadrc {

/// Column order of the simulation log file.
const std::vector<std::string>& csv_columns();

/// One row per log sample, values printed with 17 significant digits.
/// tau_ext holds the torque active on whichever wheel is disturbed.
void write_csv(std::ostream& out, const SimLog& log);
void write_csv(const std::string& path, const SimLog& log);

struct CsvTable {
    std::vector<std::string> header;
    Eigen::MatrixXd values;  // rows = samples

    /// Throws std::out_of_range for an unknown column name.
    Eigen::VectorXd column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::string& path);

}  // namespace iadrc
