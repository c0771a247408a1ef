#pragma once

#include <cmath>
#include <stdexcept>
#include <variant>

#include <Eigen/Dense>

#include "iadrc/numerics.hpp"

namespace iadrc {

/// Improved nonlinear tracking differentiator (tanh form).
///
/// With constant input r0 the state settles at r1 = ((1 - alpha) / beta) r0,
/// so the raw output has DC gain (1 - alpha) / beta. `normalize_output`
/// rescales both outputs by beta / (1 - alpha) to give unity gain; the
/// dynamics themselves are unchanged.
struct IntdParams {
    double alpha = 0.4968;
    double beta = 2.1555;
    double gamma = 11.9554;
    double R = 16.8199;
    bool normalize_output = false;

    void validate() const {
        if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("INTD: require 0 < alpha < 1");
        if (!(beta > 1.0)) throw std::invalid_argument("INTD: require beta > 1");
        if (!(gamma > 0.0)) throw std::invalid_argument("INTD: require gamma > 0");
        if (!(R > 0.0)) throw std::invalid_argument("INTD: require R > 0");
    }

    double dc_gain() const { return (1.0 - alpha) / beta; }
    double output_gain() const { return normalize_output ? beta / (1.0 - alpha) : 1.0; }
};

/// Han's continuous time-optimal tracking differentiator.
struct HanTdParams {
    double R = 100.0;

    void validate() const {
        if (!(R > 0.0)) throw std::invalid_argument("Han TD: require R > 0");
    }
    double output_gain() const { return 1.0; }
};

using TdParams = std::variant<HanTdParams, IntdParams>;

/// (r1, r2): tracking signal and its derivative estimate.
template <typename Scalar>
using TdState = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
Scalar sign(Scalar v) {
    return static_cast<Scalar>((Scalar(0) < v) - (v < Scalar(0)));
}

template <typename Scalar>
TdState<Scalar> intd_derivatives(const TdState<Scalar>& s, Scalar r, const IntdParams& p) {
    using std::tanh;
    const Scalar R = Scalar(p.R);
    const Scalar arg = (Scalar(p.beta) * s(0) - (Scalar(1) - Scalar(p.alpha)) * r) / Scalar(p.gamma);
    return {s(1), -R * R * tanh(arg) - R * s(1)};
}

template <typename Scalar>
TdState<Scalar> han_td_derivatives(const TdState<Scalar>& s, Scalar r, const HanTdParams& p) {
    using std::abs;
    const Scalar R = Scalar(p.R);
    const Scalar switching = s(0) - r + s(1) * abs(s(1)) / (Scalar(2) * R);
    return {s(1), -R * sign(switching)};
}

template <typename Scalar>
TdState<Scalar> td_derivatives(const TdState<Scalar>& s, Scalar r, const TdParams& p) {
    return std::visit(
        [&](const auto& params) -> TdState<Scalar> {
            using P = std::decay_t<decltype(params)>;
            if constexpr (std::is_same_v<P, IntdParams>) {
                return intd_derivatives(s, r, params);
            } else {
                return han_td_derivatives(s, r, params);
            }
        },
        p);
}

inline double td_output_gain(const TdParams& p) {
    return std::visit([](const auto& params) { return params.output_gain(); }, p);
}

inline void validate(const TdParams& p) {
    std::visit([](const auto& params) { params.validate(); }, p);
}

struct TdTrack {
    Eigen::VectorXd r1;
    Eigen::VectorXd r2;
};

/// Runs a tracking differentiator over a uniformly sampled input, starting
/// from rest. The input is linearly interpolated between samples; outputs are
/// logged on the input grid (after the output gain, if any).
TdTrack td_track(const Eigen::VectorXd& input, double sample_step_s, const TdParams& p,
                 const IntegratorConfig& cfg);

}  // namespace iadrc
