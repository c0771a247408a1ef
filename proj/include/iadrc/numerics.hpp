#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace iadrc {

template <typename Scalar>
using OdeState = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class IntegrationMethod { rk4_fixed, rk45_adaptive };

struct IntegratorConfig {
    IntegrationMethod method = IntegrationMethod::rk4_fixed;
    double step_s = 1e-3;  // fixed step, or initial step for rk45
    double abs_tol = 1e-8;
    double rel_tol = 1e-8;
    double min_step_s = 1e-12;
    double max_step_s = 0.1;

    void validate() const;
};

/// Raised when a vector field evaluation or an accepted step produces a
/// non-finite value.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double time, Eigen::Index index)
        : std::runtime_error(what), time_(time), index_(index) {}

    double time() const noexcept { return time_; }
    /// Offending state entry, or -1 when not tied to an entry.
    Eigen::Index index() const noexcept { return index_; }

private:
    double time_;
    Eigen::Index index_;
};

class StepUnderflowError : public IntegrationError {
public:
    using IntegrationError::IntegrationError;
};

inline void IntegratorConfig::validate() const {
    if (!(step_s > 0.0)) throw std::invalid_argument("integrator: step_s must be > 0");
    if (!(min_step_s > 0.0) || !(min_step_s <= max_step_s))
        throw std::invalid_argument("integrator: require 0 < min_step_s <= max_step_s");
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
        throw std::invalid_argument("integrator: tolerances must be > 0");
}

namespace detail {

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& v, double t, const char* where) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(static_cast<double>(v(i)))) {
            throw IntegrationError(std::string("non-finite ") + where + " at t=" + std::to_string(t) +
                                       " (entry " + std::to_string(i) + ")",
                                   t, i);
        }
    }
}

}  // namespace detail

/// Classical four-stage Runge-Kutta step. `f(t, x)` returns dx/dt.
template <typename State, typename Field>
State rk4_step(Field&& f, typename State::Scalar t, const State& x, typename State::Scalar h) {
    using Scalar = typename State::Scalar;
    const Scalar half = h / Scalar(2);

    const State k1 = f(t, x);
    detail::require_finite(k1, static_cast<double>(t), "stage evaluation");
    const State k2 = f(t + half, State(x + half * k1));
    detail::require_finite(k2, static_cast<double>(t), "stage evaluation");
    const State k3 = f(t + half, State(x + half * k2));
    detail::require_finite(k3, static_cast<double>(t), "stage evaluation");
    const State k4 = f(t + h, State(x + h * k3));
    detail::require_finite(k4, static_cast<double>(t), "stage evaluation");

    return x + (h / Scalar(6)) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
}

template <typename State>
struct Rk45Result {
    State state;
    typename State::Scalar error_estimate;  // scaled RMS norm; <= 1 means acceptable
    typename State::Scalar h_next;
};

namespace dopri {
// Dormand-Prince 5(4) tableau.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                        b6 = 11.0 / 84;
// fifth-order minus fourth-order weights
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace dopri

/// One Dormand-Prince 5(4) step with local extrapolation. The returned step
/// is the fifth-order solution; the caller decides acceptance from
/// `error_estimate`.
template <typename State, typename Field>
Rk45Result<State> rk45_step(Field&& f, typename State::Scalar t, const State& x,
                            typename State::Scalar h, const IntegratorConfig& cfg) {
    using Scalar = typename State::Scalar;
    using namespace dopri;
    const double td = static_cast<double>(t);

    const State k1 = f(t, x);
    detail::require_finite(k1, td, "stage evaluation");
    const State k2 = f(t + c2 * h, State(x + h * (a21 * k1)));
    detail::require_finite(k2, td, "stage evaluation");
    const State k3 = f(t + c3 * h, State(x + h * (a31 * k1 + a32 * k2)));
    detail::require_finite(k3, td, "stage evaluation");
    const State k4 = f(t + c4 * h, State(x + h * (a41 * k1 + a42 * k2 + a43 * k3)));
    detail::require_finite(k4, td, "stage evaluation");
    const State k5 = f(t + c5 * h, State(x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
    detail::require_finite(k5, td, "stage evaluation");
    const State k6 =
        f(t + h, State(x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
    detail::require_finite(k6, td, "stage evaluation");

    State next = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const State k7 = f(t + h, next);
    detail::require_finite(k7, td, "stage evaluation");

    const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    Scalar sum_sq(0);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        using std::abs;
        using std::max;
        const Scalar scale = Scalar(cfg.abs_tol) + Scalar(cfg.rel_tol) * max(abs(x(i)), abs(next(i)));
        const Scalar r = err(i) / scale;
        sum_sq += r * r;
    }
    const Scalar error = x.size() > 0 ? std::sqrt(sum_sq / Scalar(x.size())) : Scalar(0);

    Scalar factor = Scalar(5);
    if (error > Scalar(0)) {
        factor = std::clamp(Scalar(0.9) * std::pow(Scalar(1) / error, Scalar(0.2)), Scalar(0.2),
                            Scalar(5));
    }
    const Scalar h_next = std::min(h * factor, Scalar(cfg.max_step_s));
    if (h_next < Scalar(cfg.min_step_s)) {
        throw StepUnderflowError("step size underflow at t=" + std::to_string(td) +
                                     " (h_next=" + std::to_string(static_cast<double>(h_next)) + ")",
                                 td, -1);
    }
    return {std::move(next), error, h_next};
}

/// Uniformly sampled trajectory. Row k of `states` is the state at `times(k)`.
template <typename Scalar>
struct Trajectory {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> times;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> states;

    Eigen::Index samples() const { return times.size(); }
};

/// Uniform log grid t0, t0+dt, ..., t_end. The last sample is t_end even when
/// the span is not an exact multiple of dt.
inline Eigen::VectorXd log_grid(double t0, double t_end, double log_step_s) {
    if (!(log_step_s > 0.0)) throw std::invalid_argument("log_step_s must be > 0");
    if (t_end < t0) throw std::invalid_argument("t_end must be >= t0");
    const double span = t_end - t0;
    const auto intervals = static_cast<Eigen::Index>(std::ceil(span / log_step_s - 1e-9));
    Eigen::VectorXd grid(intervals + 1);
    for (Eigen::Index k = 0; k < intervals; ++k) grid(k) = t0 + static_cast<double>(k) * log_step_s;
    grid(intervals) = t_end;
    return grid;
}

/// Integrates `f` from `x0` and samples the solution on the uniform log grid.
/// Every log instant is an exact step boundary: fixed steps are shrunk evenly
/// to tile each log interval, adaptive steps are clipped at the next instant.
template <typename State, typename Field>
Trajectory<typename State::Scalar> integrate_logged(Field&& f, const State& x0, double t0,
                                                    double t_end, const IntegratorConfig& cfg,
                                                    double log_step_s) {
    using Scalar = typename State::Scalar;
    cfg.validate();
    const Eigen::VectorXd grid = log_grid(t0, t_end, log_step_s);

    Trajectory<Scalar> out;
    out.times = grid.cast<Scalar>();
    out.states.resize(grid.size(), x0.size());
    out.states.row(0) = x0.transpose();

    State x = x0;
    double h_adapt = std::min(cfg.step_s, cfg.max_step_s);
    for (Eigen::Index k = 0; k + 1 < grid.size(); ++k) {
        const double a = grid(k);
        const double b = grid(k + 1);
        if (cfg.method == IntegrationMethod::rk4_fixed) {
            const auto steps = static_cast<long>(std::max(1.0, std::ceil((b - a) / cfg.step_s - 1e-9)));
            const double h = (b - a) / static_cast<double>(steps);
            for (long s = 0; s < steps; ++s) {
                x = rk4_step(f, Scalar(a + static_cast<double>(s) * h), x, Scalar(h));
            }
        } else {
            double t = a;
            while (t < b) {
                const double remaining = b - t;
                const bool landing = h_adapt >= remaining;
                // Split a short tail evenly instead of leaving a sliver step.
                const double h = landing ? remaining
                                 : (remaining < 2.0 * h_adapt ? remaining / 2.0 : h_adapt);
                auto step = rk45_step(f, Scalar(t), x, Scalar(h), cfg);
                if (step.error_estimate <= Scalar(1)) {
                    x = std::move(step.state);
                    t = landing ? b : t + h;
                    if (h == h_adapt || static_cast<double>(step.h_next) < h_adapt) {
                        h_adapt = static_cast<double>(step.h_next);
                    }
                } else {
                    h_adapt = static_cast<double>(step.h_next);
                }
            }
        }
        detail::require_finite(x, b, "state");
        out.states.row(k + 1) = x.transpose();
    }
    return out;
}

/// First derivative by central difference, (s[i+1] - s[i-1]) / 2h.
template <typename Scalar>
Scalar central_difference(std::span<const Scalar> series, std::size_t index, Scalar h) {
    if (index < 1 || index + 1 >= series.size()) {
        throw std::out_of_range("central_difference: index " + std::to_string(index) +
                                " outside [1, len-2]");
    }
    return (series[index + 1] - series[index - 1]) / (Scalar(2) * h);
}

/// Second derivative, (s[i+1] - 2 s[i] + s[i-1]) / h^2. Interior points 2..len-3.
template <typename Scalar>
Scalar second_difference(std::span<const Scalar> series, std::size_t index, Scalar h) {
    if (index < 2 || index + 2 >= series.size()) {
        throw std::out_of_range("second_difference: index " + std::to_string(index) +
                                " outside [2, len-3]");
    }
    return (series[index + 1] - Scalar(2) * series[index] + series[index - 1]) / (h * h);
}

}  // namespace iadrc
