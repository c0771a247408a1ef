#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace iadrc {

/// Permanent-magnet DC motor with gearbox and wheel, referred to the wheel side.
struct MotorParams {
    double R_a = 0.1557;   // ohm
    double L_a = 0.82;     // H
    double k_b = 1.185;    // V s / rad
    double k_t = 1.1882;   // N m / A
    double n = 3.0;        // gear ratio
    double J_eq = 0.2752;  // kg m^2
    double B_eq = 0.3922;  // N m s / rad

    void validate() const {
        for (double v : {R_a, L_a, k_b, k_t, n, J_eq, B_eq})
            if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("motor parameters must be > 0");
    }
};

struct RobotParams {
    double D = 0.40;     // wheel track, m
    double r_w = 0.075;  // wheel radius, m

    void validate() const {
        if (!(D > 0.0) || !(r_w > 0.0)) throw std::invalid_argument("robot: D and r_w must be > 0");
    }
};

/// (omega_w, i_a): wheel angular velocity [rad/s], armature current [A].
template <typename Scalar>
using MotorWheelState = Eigen::Matrix<Scalar, 2, 1>;

/// (x, y, theta); theta is never wrapped.
template <typename Scalar>
using Pose = Eigen::Matrix<Scalar, 3, 1>;

/// Linear state-space form of one motor-wheel channel,
///   d/dt [omega, i_a] = A [omega, i_a] + b_u u + b_d d,   d = tau_ext / n.
/// The disturbance enters only the speed row, the voltage only the current row.
struct MotorModel {
    Eigen::Matrix2d A;
    Eigen::Vector2d b_u;
    Eigen::Vector2d b_d;

    explicit MotorModel(const MotorParams& p) {
        A << -p.B_eq / p.J_eq, p.k_t / (p.J_eq * p.n),
             -p.k_b * p.n / p.L_a, -p.R_a / p.L_a;
        b_u << 0.0, 1.0 / p.L_a;
        b_d << -1.0 / (p.J_eq * p.n), 0.0;
    }

    double b1() const { return b_d(0); }
    double b2() const { return b_u(1); }
};

template <typename Scalar>
MotorWheelState<Scalar> motor_derivatives(const MotorWheelState<Scalar>& s, Scalar u, Scalar tau_ext,
                                          const MotorParams& p) {
    const Scalar d = tau_ext / Scalar(p.n);
    const Scalar domega = -Scalar(p.B_eq / p.J_eq) * s(0) + Scalar(p.k_t / (p.J_eq * p.n)) * s(1) -
                          Scalar(1.0 / (p.J_eq * p.n)) * d;
    const Scalar di = -Scalar(p.k_b * p.n / p.L_a) * s(0) - Scalar(p.R_a / p.L_a) * s(1) +
                      Scalar(1.0 / p.L_a) * u;
    return {domega, di};
}

template <typename Scalar>
struct BodyVelocities {
    Scalar V_m;      // m/s
    Scalar omega_m;  // rad/s
};

template <typename Scalar>
BodyVelocities<Scalar> body_velocities(Scalar omega_wr, Scalar omega_wl, const RobotParams& p) {
    return {Scalar(p.r_w) * (omega_wr + omega_wl) / Scalar(2), Scalar(p.r_w) * (omega_wr - omega_wl) / Scalar(p.D)};
}

template <typename Scalar>
Pose<Scalar> kinematics_derivatives(const Pose<Scalar>& pose, Scalar V_m, Scalar omega_m) {
    using std::cos;
    using std::sin;
    return {V_m * cos(pose(2)), V_m * sin(pose(2)), omega_m};
}

enum class Wheel { right, left };
enum class DisturbanceTarget { right, left, both };

/// Constant torque pulse on [t_on, t_off).
struct DisturbanceProfile {
    double magnitude = 1.0;  // N m
    double t_on = 30.0;
    double t_off = 50.0;
    DisturbanceTarget target = DisturbanceTarget::right;

    void validate() const {
        if (!(t_on < t_off)) throw std::invalid_argument("disturbance: require t_on < t_off");
        if (!std::isfinite(magnitude)) throw std::invalid_argument("disturbance: magnitude must be finite");
    }
};

inline bool targets(DisturbanceTarget target, Wheel wheel) {
    return target == DisturbanceTarget::both ||
           (target == DisturbanceTarget::right && wheel == Wheel::right) ||
           (target == DisturbanceTarget::left && wheel == Wheel::left);
}

inline double disturbance_at(double t, const DisturbanceProfile& prof, Wheel wheel) {
    if (!targets(prof.target, wheel)) return 0.0;
    return (t >= prof.t_on && t < prof.t_off) ? prof.magnitude : 0.0;
}

}  // namespace iadrc
