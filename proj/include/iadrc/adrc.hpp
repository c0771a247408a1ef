#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "iadrc/observers.hpp"
#include "iadrc/plant.hpp"
#include "iadrc/state_error_feedback.hpp"
#include "iadrc/tracking_differentiator.hpp"

namespace iadrc {

/// Second-order affine plant with a mismatched disturbance:
///   dx1/dt = f1(x1, x2) + b1 d
///   dx2/dt = f2(x1, x2) + b2 u,   y = x1
/// The partials of f1 are supplied analytically.
template <typename Scalar>
struct AffinePlant {
    using Fn = std::function<Scalar(Scalar, Scalar)>;
    Fn f1;
    Fn f2;
    Fn df1_dx1;
    Fn df1_dx2;
    Scalar b1{};
    Scalar b2{};
};

class DegenerateTransformError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Matched (canonical) form of an AffinePlant:
///   d^2 x1/dt^2 = f_hat(x1, x2) + b_hat (u + d_hat)
template <typename Scalar>
class CanonicalPlantForms {
public:
    explicit CanonicalPlantForms(AffinePlant<Scalar> plant) : plant_(std::move(plant)) {}

    Scalar f_hat(Scalar x1, Scalar x2) const {
        return plant_.df1_dx1(x1, x2) * plant_.f1(x1, x2) + plant_.df1_dx2(x1, x2) * plant_.f2(x1, x2);
    }

    Scalar b_hat(Scalar x1, Scalar x2) const { return plant_.b2 * plant_.df1_dx2(x1, x2); }

    /// Coefficients (c_d, c_ddot) with d_hat = c_d d + c_ddot d_dot.
    std::pair<Scalar, Scalar> d_hat_coeffs(Scalar x1, Scalar x2) const {
        const Scalar bh = b_hat(x1, x2);
        return {plant_.b1 * plant_.df1_dx1(x1, x2) / bh, plant_.b1 / bh};
    }

    Scalar d_hat(Scalar x1, Scalar x2, Scalar d, Scalar d_dot) const {
        const auto [c_d, c_ddot] = d_hat_coeffs(x1, x2);
        return c_d * d + c_ddot * d_dot;
    }

    const AffinePlant<Scalar>& plant() const { return plant_; }

private:
    AffinePlant<Scalar> plant_;
};

/// Builds the canonical forms and checks that b_hat does not vanish at any
/// probe point of the operating domain.
template <typename Scalar>
CanonicalPlantForms<Scalar> matched_transform(AffinePlant<Scalar> plant,
                                              std::span<const Eigen::Matrix<Scalar, 2, 1>> probes) {
    if (!plant.f1 || !plant.f2 || !plant.df1_dx1 || !plant.df1_dx2)
        throw std::invalid_argument("matched_transform: plant functions must be set");
    for (const auto& x : probes) {
        using std::abs;
        if (!(abs(plant.df1_dx2(x(0), x(1))) >= Scalar(1e-12)) || plant.b2 == Scalar(0)) {
            throw DegenerateTransformError("matched_transform: b_hat vanishes at x = (" +
                                           std::to_string(static_cast<double>(x(0))) + ", " +
                                           std::to_string(static_cast<double>(x(1))) + ")");
        }
    }
    return CanonicalPlantForms<Scalar>(std::move(plant));
}

/// The motor-wheel channel in AffinePlant form: x1 = omega_w, x2 = i_a, d = tau_ext / n.
inline AffinePlant<double> motor_affine_plant(const MotorParams& p) {
    const MotorModel m(p);
    const double a11 = m.A(0, 0), a12 = m.A(0, 1), a21 = m.A(1, 0), a22 = m.A(1, 1);
    AffinePlant<double> plant;
    plant.f1 = [a11, a12](double x1, double x2) { return a11 * x1 + a12 * x2; };
    plant.f2 = [a21, a22](double x1, double x2) { return a21 * x1 + a22 * x2; };
    plant.df1_dx1 = [a11](double, double) { return a11; };
    plant.df1_dx2 = [a12](double, double) { return a12; };
    plant.b1 = m.b1();
    plant.b2 = m.b2();
    return plant;
}

/// Canonical forms of the motor-wheel channel, probed on a grid covering
/// |omega| <= 50 rad/s, |i_a| <= 100 A.
CanonicalPlantForms<double> motor_canonical_forms(const MotorParams& p);

template <typename Scalar>
Scalar canonical_acceleration(Scalar x1, Scalar x2, Scalar u, Scalar d, Scalar d_dot,
                              const CanonicalPlantForms<Scalar>& forms) {
    return forms.f_hat(x1, x2) + forms.b_hat(x1, x2) * (u + forms.d_hat(x1, x2, d, d_dot));
}

enum class ControllerVariant { classical_adrc, improved_adrc };

std::string to_string(ControllerVariant v);

/// Full parameter bundle for one per-wheel controller.
struct ControllerConfig {
    ControllerVariant variant = ControllerVariant::improved_adrc;
    TdParams td = IntdParams{};
    SefParams sef = InlsefParams{};
    EsoParams eso = SmesoParams{};
    double b_hat = 1.0;
    // Ablation switch: when false the control law ignores xhat3.
    bool cancel_disturbance = true;

    void validate() const;

    /// Parameter sets of the reference experiment. The improved variant
    /// enables the INTD output normalization so the loop tracks at unity gain.
    static ControllerConfig classical(double b_hat);
    static ControllerConfig improved(double b_hat);
};

template <typename Scalar>
struct ControlOutput {
    Scalar u;       // V
    Scalar e0;
    Scalar e1;
    Scalar u0;      // feedback effort before disturbance cancellation
    Scalar d_comp;  // input-equivalent disturbance estimate, xhat3 / b_hat
};

/// u = (u0 - xhat3) / b_hat with u0 from the state error feedback.
template <typename Scalar>
ControlOutput<Scalar> adrc_control_step(Scalar r1, Scalar r2, const ObserverState<Scalar>& obs, Scalar e_int,
                                        const ControllerConfig& cfg) {
    const ErrorVector<Scalar> e{r1 - obs(0), r2 - obs(1), e_int};
    const Scalar u0 = sef_control(e, cfg.sef);
    const Scalar xhat3 = cfg.cancel_disturbance ? obs(2) : Scalar(0);
    const Scalar b_hat = Scalar(cfg.b_hat);
    return {(u0 - xhat3) / b_hat, e.e0, e.e1, u0, xhat3 / b_hat};
}

}  // namespace iadrc
