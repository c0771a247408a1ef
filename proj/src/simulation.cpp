#include "iadrc/simulation.hpp"

#include <array>
#include <cmath>
#include <random>

namespace iadrc {

namespace {

constexpr Eigen::Index kWheelBlock = 8;
constexpr Eigen::Index kOmega = 0;
constexpr Eigen::Index kCurrent = 1;
constexpr Eigen::Index kXhat = 2;  // 3 entries
constexpr Eigen::Index kTd = 5;    // 2 entries
constexpr Eigen::Index kIntegral = 7;
constexpr Eigen::Index kPose = 2 * kWheelBlock;
constexpr Eigen::Index kStates = kPose + 3;

using LoopState = Eigen::Matrix<double, kStates, 1>;

constexpr Eigen::Index offset(Wheel w) { return w == Wheel::right ? 0 : kWheelBlock; }

class NoiseTable {
public:
    NoiseTable(const MeasurementNoise& noise, double duration, std::uint64_t stream)
        : amplitude_(noise.amplitude), hold_(noise.hold_step_s) {
        if (amplitude_ == 0.0) return;
        std::mt19937_64 gen(noise.seed * 2 + stream);
        const auto n = static_cast<std::size_t>(std::ceil(duration / hold_)) + 2;
        values_.resize(n);
        // 53 random mantissa bits mapped to [-1, 1)
        for (auto& v : values_) v = amplitude_ * (2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53) - 1.0);
    }

    double at(double t) const {
        if (values_.empty()) return 0.0;
        const auto k = static_cast<std::size_t>(std::max(0.0, std::floor(t / hold_)));
        return values_[std::min(k, values_.size() - 1)];
    }

private:
    double amplitude_;
    double hold_;
    std::vector<double> values_;
};

struct WheelSignals {
    ControlOutput<double> control;
    double r1;
    double r2;
    double reference;
};

class ClosedLoop {
public:
    ClosedLoop(const Scenario& s, const ControllerConfig& cfg)
        : scenario_(s),
          cfg_(cfg),
          td_gain_(td_output_gain(cfg.td)),
          noise_{NoiseTable(s.noise, s.duration_s, 0), NoiseTable(s.noise, s.duration_s, 1)} {}

    WheelSignals signals(double t, const LoopState& x, Wheel w) const {
        const Eigen::Index o = offset(w);
        const double ref = (w == Wheel::right ? scenario_.ref_omega_r : scenario_.ref_omega_l).at(t);
        const double r1 = td_gain_ * x(o + kTd);
        const double r2 = td_gain_ * x(o + kTd + 1);
        const ObserverState<double> obs = x.segment<3>(o + kXhat);
        return {adrc_control_step(r1, r2, obs, x(o + kIntegral), cfg_), r1, r2, ref};
    }

    double measured(double t, const LoopState& x, Wheel w) const {
        return x(offset(w) + kOmega) + noise_[w == Wheel::right ? 0 : 1].at(t);
    }

    LoopState operator()(double t, const LoopState& x) const {
        LoopState dx;
        for (Wheel w : {Wheel::right, Wheel::left}) {
            const Eigen::Index o = offset(w);
            const WheelSignals sig = signals(t, x, w);
            const double u = sig.control.u;

            const MotorWheelState<double> motor = x.segment<2>(o + kOmega);
            dx.segment<2>(o + kOmega) =
                motor_derivatives(motor, u, disturbance_at(t, scenario_.disturbance, w), scenario_.motor);

            const ObserverState<double> obs = x.segment<3>(o + kXhat);
            dx.segment<3>(o + kXhat) = eso_derivatives(obs, measured(t, x, w), u, cfg_.eso);

            const TdState<double> td = x.segment<2>(o + kTd);
            dx.segment<2>(o + kTd) = td_derivatives(td, sig.reference, cfg_.td);

            dx(o + kIntegral) = sig.control.e0;
        }
        const auto body = body_velocities(x(kOmega), x(kWheelBlock + kOmega), scenario_.robot);
        const Pose<double> pose = x.segment<3>(kPose);
        dx.segment<3>(kPose) = kinematics_derivatives(pose, body.V_m, body.omega_m);
        return dx;
    }

private:
    const Scenario& scenario_;
    const ControllerConfig& cfg_;
    double td_gain_;
    std::array<NoiseTable, 2> noise_;
};

void fill_wheel(WheelLog& log, Eigen::Index k, const ClosedLoop& loop, const Scenario& s, double t,
                const LoopState& x, Wheel w) {
    const Eigen::Index o = offset(w);
    const WheelSignals sig = loop.signals(t, x, w);
    log.omega_ref(k) = sig.reference;
    log.omega(k) = x(o + kOmega);
    log.i_a(k) = x(o + kCurrent);
    log.u(k) = sig.control.u;
    log.xhat1(k) = x(o + kXhat);
    log.xhat2(k) = x(o + kXhat + 1);
    log.xhat3(k) = x(o + kXhat + 2);
    log.r1(k) = sig.r1;
    log.r2(k) = sig.r2;
    log.e0(k) = sig.control.e0;
    log.e1(k) = sig.control.e1;
    log.u0(k) = sig.control.u0;
    log.d_comp(k) = sig.control.d_comp;
    log.e_int(k) = x(o + kIntegral);
    log.tau_ext(k) = disturbance_at(t, s.disturbance, w);
}

}  // namespace

double ReferenceSchedule::at(double t) const {
    double value = 0.0;
    for (const auto& [start, v] : steps) {
        if (t >= start) value = v;
        else break;
    }
    return value;
}

void ReferenceSchedule::validate() const {
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!std::isfinite(steps[i].first) || !std::isfinite(steps[i].second))
            throw std::invalid_argument("reference schedule: entries must be finite");
        if (i > 0 && !(steps[i].first > steps[i - 1].first))
            throw std::invalid_argument("reference schedule: start times must increase");
    }
}

void Scenario::validate() const {
    motor.validate();
    robot.validate();
    ref_omega_r.validate();
    ref_omega_l.validate();
    if (!(duration_s > 0.0)) throw std::invalid_argument("scenario: duration_s must be > 0");
    if (!(log_step_s > 0.0)) throw std::invalid_argument("scenario: log_step_s must be > 0");
    disturbance.validate();
    integrator.validate();
    if (noise.amplitude < 0.0 || !(noise.hold_step_s > 0.0))
        throw std::invalid_argument("scenario: noise amplitude must be >= 0 and hold step > 0");
}

Scenario Scenario::mirrored() const {
    Scenario m = *this;
    std::swap(m.ref_omega_r, m.ref_omega_l);
    std::swap(m.initial_motor_r, m.initial_motor_l);
    if (disturbance.target == DisturbanceTarget::right) m.disturbance.target = DisturbanceTarget::left;
    else if (disturbance.target == DisturbanceTarget::left) m.disturbance.target = DisturbanceTarget::right;
    m.initial_pose(1) = -initial_pose(1);
    m.initial_pose(2) = -initial_pose(2);
    return m;
}

void WheelLog::resize(Eigen::Index n) {
    for (Eigen::VectorXd* v : {&omega_ref, &omega, &i_a, &u, &xhat1, &xhat2, &xhat3, &r1, &r2, &e0, &e1,
                               &u0, &d_comp, &e_int, &tau_ext})
        v->resize(n);
}

std::string closed_loop_subsystem(Eigen::Index index) {
    if (index < 0) return "integrator";
    if (index >= kPose) return "pose";
    const std::string wheel = index < kWheelBlock ? "right " : "left ";
    const Eigen::Index local = index % kWheelBlock;
    if (local <= kCurrent) return wheel + "motor";
    if (local < kTd) return wheel + "observer";
    if (local < kIntegral) return wheel + "tracking differentiator";
    return wheel + "feedback integral";
}

PoseSeries reference_trajectory(const Scenario& scenario) {
    scenario.validate();
    auto field = [&](double t, const Pose<double>& pose) -> Pose<double> {
        const auto body =
            body_velocities(scenario.ref_omega_r.at(t), scenario.ref_omega_l.at(t), scenario.robot);
        return kinematics_derivatives(pose, body.V_m, body.omega_m);
    };
    const auto traj = integrate_logged(field, scenario.initial_pose, 0.0, scenario.duration_s,
                                       scenario.integrator, scenario.log_step_s);
    return {traj.states.col(0), traj.states.col(1), traj.states.col(2)};
}

SimLog run_closed_loop(const Scenario& scenario, const ControllerConfig& cfg) {
    scenario.validate();
    cfg.validate();

    const ClosedLoop loop(scenario, cfg);

    LoopState x0 = LoopState::Zero();
    for (Wheel w : {Wheel::right, Wheel::left}) {
        const Eigen::Index o = offset(w);
        x0.segment<2>(o + kOmega) = w == Wheel::right ? scenario.initial_motor_r : scenario.initial_motor_l;
        x0(o + kXhat) = loop.measured(0.0, x0, w);
    }
    x0.segment<3>(kPose) = scenario.initial_pose;

    Trajectory<double> traj;
    try {
        traj = integrate_logged(loop, x0, 0.0, scenario.duration_s, scenario.integrator, scenario.log_step_s);
    } catch (const IntegrationError& e) {
        const std::string subsystem = closed_loop_subsystem(e.index());
        throw SimulationError(std::string(e.what()) + " [" + subsystem + "]", e.time(), subsystem);
    }

    SimLog log;
    const Eigen::Index n = traj.samples();
    log.t = traj.times;
    log.right.resize(n);
    log.left.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const LoopState x = traj.states.row(k).transpose();
        fill_wheel(log.right, k, loop, scenario, log.t(k), x, Wheel::right);
        fill_wheel(log.left, k, loop, scenario, log.t(k), x, Wheel::left);
    }
    log.pose = {traj.states.col(kPose), traj.states.col(kPose + 1), traj.states.col(kPose + 2)};
    log.pose_ref = reference_trajectory(scenario);
    log.e_theta = log.pose_ref.theta - log.pose.theta;
    return log;
}

}  // namespace iadrc
