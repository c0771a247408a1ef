#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "iadrc/adrc.hpp"
#include "iadrc/numerics.hpp"
#include "iadrc/plant.hpp"

namespace iadrc {

/// Piecewise-constant wheel-speed reference: each (t_start, value) holds until
/// the next entry. Zero before the first entry.
struct ReferenceSchedule {
    std::vector<std::pair<double, double>> steps{{0.0, 1.0}};

    static ReferenceSchedule constant(double value) { return {{{0.0, value}}}; }
    double at(double t) const;
    void validate() const;
};

/// Additive uniform noise on the observer's measured output, held constant
/// over `hold_step_s` intervals. Disabled when amplitude is 0.
struct MeasurementNoise {
    double amplitude = 0.0;
    std::uint64_t seed = 0;
    double hold_step_s = 1e-3;
};

struct Scenario {
    MotorParams motor;
    RobotParams robot;
    ReferenceSchedule ref_omega_r;
    ReferenceSchedule ref_omega_l;
    double duration_s = 100.0;
    DisturbanceProfile disturbance;
    double log_step_s = 0.01;
    IntegratorConfig integrator;
    Pose<double> initial_pose = Pose<double>::Zero();
    MotorWheelState<double> initial_motor_r = MotorWheelState<double>::Zero();
    MotorWheelState<double> initial_motor_l = MotorWheelState<double>::Zero();
    MeasurementNoise noise;

    void validate() const;

    /// Swaps the wheel roles: references exchanged, disturbance moved to the
    /// other wheel, initial heading and lateral offset negated.
    Scenario mirrored() const;
};

struct WheelLog {
    Eigen::VectorXd omega_ref;
    Eigen::VectorXd omega;
    Eigen::VectorXd i_a;
    Eigen::VectorXd u;
    Eigen::VectorXd xhat1;
    Eigen::VectorXd xhat2;
    Eigen::VectorXd xhat3;
    Eigen::VectorXd r1;
    Eigen::VectorXd r2;
    Eigen::VectorXd e0;
    Eigen::VectorXd e1;
    Eigen::VectorXd u0;
    Eigen::VectorXd d_comp;
    Eigen::VectorXd e_int;
    Eigen::VectorXd tau_ext;

    void resize(Eigen::Index n);
};

struct PoseSeries {
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    Eigen::VectorXd theta;
};

struct SimLog {
    Eigen::VectorXd t;
    WheelLog right;
    WheelLog left;
    PoseSeries pose;
    PoseSeries pose_ref;
    Eigen::VectorXd e_theta;  // theta_ref - theta

    Eigen::Index samples() const { return t.size(); }
    double log_step() const { return t.size() > 1 ? (t(t.size() - 1) - t(0)) / double(t.size() - 1) : 0.0; }
};

/// Failure inside a closed-loop run, tagged with the simulated time and the
/// subsystem whose state went bad.
class SimulationError : public std::runtime_error {
public:
    SimulationError(const std::string& what, double time, std::string subsystem)
        : std::runtime_error(what), time_(time), subsystem_(std::move(subsystem)) {}
    double time() const noexcept { return time_; }
    const std::string& subsystem() const noexcept { return subsystem_; }

private:
    double time_;
    std::string subsystem_;
};

/// Pose reached by the ideal robot driven at the reference wheel speeds.
PoseSeries reference_trajectory(const Scenario& scenario);

/// Simulates both wheel loops and the robot kinematics as one ODE
/// (per wheel: motor 2, observer 3, TD 2, SEF integral 1; plus pose 3).
SimLog run_closed_loop(const Scenario& scenario, const ControllerConfig& cfg);

/// Name of the subsystem owning entry `index` of the closed-loop state.
std::string closed_loop_subsystem(Eigen::Index index);

}  // namespace iadrc
