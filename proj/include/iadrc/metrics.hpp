#pragma once

#include <Eigen/Dense>

#include "iadrc/simulation.hpp"

namespace iadrc {

// Integrals use the left-rectangle rule on the uniform log grid,
// dt = (t_end - t_0) / (N - 1).

/// Mean squared difference (1/N) sum (ref - act)^2.
double opi(const Eigen::VectorXd& ref, const Eigen::VectorXd& actual);

/// sum_i t_i |ref_i - act_i| dt over the N - 1 grid intervals.
double itae(const Eigen::VectorXd& t, const Eigen::VectorXd& omega_ref, const Eigen::VectorXd& omega);

/// sum_i u_i^2 dt over the N - 1 grid intervals.
double isu(const Eigen::VectorXd& t, const Eigen::VectorXd& u);

double total_variation(const Eigen::VectorXd& series);
double peak_abs(const Eigen::VectorXd& series);

struct WheelIndices {
    double itae = 0.0;
    double isu = 0.0;
    double control_tv = 0.0;
};

struct PerformanceReport {
    double opi_x = 0.0;
    double opi_y = 0.0;
    double opi_theta = 0.0;
    WheelIndices right;
    WheelIndices left;
    double peak_e_theta = 0.0;
};

PerformanceReport evaluate(const SimLog& log);

}  // namespace iadrc
