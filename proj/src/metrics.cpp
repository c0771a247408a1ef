#include "iadrc/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace iadrc {

namespace {

void require_same_length(Eigen::Index a, Eigen::Index b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string(what) + ": series length mismatch");
}

double grid_step(const Eigen::VectorXd& t) {
    if (t.size() < 2) return 0.0;
    return (t(t.size() - 1) - t(0)) / static_cast<double>(t.size() - 1);
}

}  // namespace

double opi(const Eigen::VectorXd& ref, const Eigen::VectorXd& actual) {
    require_same_length(ref.size(), actual.size(), "opi");
    if (ref.size() == 0) throw std::invalid_argument("opi: empty series");
    return (ref - actual).squaredNorm() / static_cast<double>(ref.size());
}

double itae(const Eigen::VectorXd& t, const Eigen::VectorXd& omega_ref, const Eigen::VectorXd& omega) {
    require_same_length(t.size(), omega_ref.size(), "itae");
    require_same_length(t.size(), omega.size(), "itae");
    const double dt = grid_step(t);
    double sum = 0.0;
    for (Eigen::Index i = 0; i + 1 < t.size(); ++i) sum += t(i) * std::abs(omega_ref(i) - omega(i)) * dt;
    return sum;
}

double isu(const Eigen::VectorXd& t, const Eigen::VectorXd& u) {
    require_same_length(t.size(), u.size(), "isu");
    const double dt = grid_step(t);
    double sum = 0.0;
    for (Eigen::Index i = 0; i + 1 < t.size(); ++i) sum += u(i) * u(i) * dt;
    return sum;
}

double total_variation(const Eigen::VectorXd& series) {
    if (series.size() < 2) return 0.0;
    return (series.tail(series.size() - 1) - series.head(series.size() - 1)).cwiseAbs().sum();
}

double peak_abs(const Eigen::VectorXd& series) {
    return series.size() == 0 ? 0.0 : series.cwiseAbs().maxCoeff();
}

PerformanceReport evaluate(const SimLog& log) {
    PerformanceReport r;
    r.opi_x = opi(log.pose_ref.x, log.pose.x);
    r.opi_y = opi(log.pose_ref.y, log.pose.y);
    r.opi_theta = opi(log.pose_ref.theta, log.pose.theta);
    for (auto [wheel, out] : {std::pair{&log.right, &r.right}, std::pair{&log.left, &r.left}}) {
        out->itae = itae(log.t, wheel->omega_ref, wheel->omega);
        out->isu = isu(log.t, wheel->u);
        out->control_tv = total_variation(wheel->u);
    }
    r.peak_e_theta = peak_abs(log.e_theta);
    return r;
}

}  // namespace iadrc
