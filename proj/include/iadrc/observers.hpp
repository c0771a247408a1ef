#pragma once

#include <cmath>
#include <stdexcept>
#include <variant>

#include <Eigen/Dense>

#include "iadrc/tracking_differentiator.hpp"  // sign()

namespace iadrc {

/// Sliding-mode extended state observer for a second-order plant.
/// beta1..beta3 multiply the innovation function in the three rows.
struct SmesoParams {
    double K_alpha = 0.6265;
    double alpha_obs = 0.8433;
    double K_beta = 0.5878;
    double beta_obs = 0.04078;
    double beta1 = 30.4;
    double beta2 = 513.4;
    double beta3 = 1570.8;
    double b_hat = 1.0;

    void validate() const {
        if (!(K_alpha > 0.0) || !(K_beta > 0.0)) throw std::invalid_argument("SMESO: K_alpha, K_beta must be > 0");
        if (!(alpha_obs > 0.0 && alpha_obs <= 1.0))
            throw std::invalid_argument("SMESO: require 0 < alpha <= 1");
        if (!(beta_obs >= 0.0)) throw std::invalid_argument("SMESO: require beta >= 0");
        if (!(beta1 > 0.0) || !(beta2 > 0.0) || !(beta3 > 0.0))
            throw std::invalid_argument("SMESO: observer gains must be > 0");
        if (b_hat == 0.0 || !std::isfinite(b_hat)) throw std::invalid_argument("SMESO: b_hat must be nonzero");
    }
};

struct LesoParams {
    double beta1 = 30.4;
    double beta2 = 523.4;
    double beta3 = 2970.8;
    double b_hat = 1.0;

    void validate() const {
        if (!(beta1 > 0.0) || !(beta2 > 0.0) || !(beta3 > 0.0))
            throw std::invalid_argument("LESO: observer gains must be > 0");
        if (b_hat == 0.0 || !std::isfinite(b_hat)) throw std::invalid_argument("LESO: b_hat must be nonzero");
    }
};

using EsoParams = std::variant<LesoParams, SmesoParams>;

/// (xhat1, xhat2, xhat3): output, output derivative, total disturbance.
template <typename Scalar>
using ObserverState = Eigen::Matrix<Scalar, 3, 1>;

/// Integrator-chain structure shared by both observers:
///   d/dt xhat = F xhat + B1 b_hat u + B2 g(y - xhat1)
template <typename Scalar>
struct EsoStructure {
    static Eigen::Matrix<Scalar, 3, 3> F() {
        Eigen::Matrix<Scalar, 3, 3> m = Eigen::Matrix<Scalar, 3, 3>::Zero();
        m(0, 1) = Scalar(1);
        m(1, 2) = Scalar(1);
        return m;
    }
    static ObserverState<Scalar> B1() { return {Scalar(0), Scalar(1), Scalar(0)}; }
};

template <typename Scalar>
Scalar smeso_gain(Scalar e_obs, const SmesoParams& p) {
    using std::abs;
    using std::pow;
    const Scalar mag = abs(e_obs);
    return Scalar(p.K_alpha) * pow(mag, Scalar(p.alpha_obs)) * sign(e_obs) +
           Scalar(p.K_beta) * pow(mag, Scalar(p.beta_obs)) * e_obs;
}

template <typename Scalar>
ObserverState<Scalar> smeso_derivatives(const ObserverState<Scalar>& s, Scalar y, Scalar u,
                                        const SmesoParams& p) {
    const Scalar g = smeso_gain(y - s(0), p);
    const ObserverState<Scalar> gains{Scalar(p.beta1), Scalar(p.beta2), Scalar(p.beta3)};
    return EsoStructure<Scalar>::F() * s + EsoStructure<Scalar>::B1() * (Scalar(p.b_hat) * u) + gains * g;
}

template <typename Scalar>
ObserverState<Scalar> leso_derivatives(const ObserverState<Scalar>& s, Scalar y, Scalar u,
                                       const LesoParams& p) {
    const Scalar e = y - s(0);
    const ObserverState<Scalar> gains{Scalar(p.beta1), Scalar(p.beta2), Scalar(p.beta3)};
    return EsoStructure<Scalar>::F() * s + EsoStructure<Scalar>::B1() * (Scalar(p.b_hat) * u) + gains * e;
}

template <typename Scalar>
ObserverState<Scalar> eso_derivatives(const ObserverState<Scalar>& s, Scalar y, Scalar u,
                                      const EsoParams& p) {
    return std::visit(
        [&](const auto& params) -> ObserverState<Scalar> {
            using P = std::decay_t<decltype(params)>;
            if constexpr (std::is_same_v<P, SmesoParams>) {
                return smeso_derivatives(s, y, u, params);
            } else {
                return leso_derivatives(s, y, u, params);
            }
        },
        p);
}

inline double eso_b_hat(const EsoParams& p) {
    return std::visit([](const auto& params) { return params.b_hat; }, p);
}

}  // namespace iadrc
