#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <variant>

#include "iadrc/tracking_differentiator.hpp"  // sign()

namespace iadrc {

/// Improved nonlinear state error feedback: sector-bounded nonlinear gains on
/// signed power-law errors, plus a saturated power-law integral term.
struct InlsefParams {
    double k11 = 144.6642;
    double k12 = 8.0475;
    double k21 = 25.5574;
    double k22 = 4.8814;
    double mu1 = 44.3160;
    double mu2 = 48.8179;
    double mu3 = 26.1493;  // accepted, not used by the integral term
    double alpha1 = 0.9675;
    double alpha2 = 1.4487;
    double alpha3 = 3.5032;
    double k3 = 0.5308;
    double delta = 3.8831;

    void validate() const {
        for (double g : {k11, k12, k21, k22, mu1, mu2, mu3, k3, delta})
            if (!(g > 0.0)) throw std::invalid_argument("INLSEF: gains, mu_i and delta must be > 0");
        for (double a : {alpha1, alpha2, alpha3})
            if (!(a > 0.0)) throw std::invalid_argument("INLSEF: exponents must be > 0");
    }
};

/// Han's fal-based nonlinear state error feedback.
struct FalNlsefParams {
    double alpha1 = 0.1726;
    double alpha2 = 0.8730;
    double delta1 = 0.4620;
    double delta2 = 0.24807;
    // k1, k2 are not published with the reference experiment. These values
    // reproduce its classical-ADRC startup lag (OPI_x) and control energy.
    double k1 = 3.25;
    double k2 = 0.75;

    void validate() const {
        if (!(delta1 > 0.0) || !(delta2 > 0.0))
            throw std::invalid_argument("fal NLSEF: delta1, delta2 must be > 0");
        if (!(alpha1 > 0.0) || !(alpha2 > 0.0))
            throw std::invalid_argument("fal NLSEF: exponents must be > 0");
        if (!(k1 > 0.0) || !(k2 > 0.0)) throw std::invalid_argument("fal NLSEF: k1, k2 must be > 0");
    }
};

using SefParams = std::variant<FalNlsefParams, InlsefParams>;

/// e0 = r1 - xhat1, e1 = r2 - xhat2, e_int = integral of e0.
template <typename Scalar>
struct ErrorVector {
    Scalar e0{};
    Scalar e1{};
    Scalar e_int{};
};

/// k_i1 + k_i2 / (1 + exp(mu_i e^2)); the fraction is exactly 0 once
/// mu_i e^2 exceeds 700.
template <typename Scalar>
Scalar nonlinear_gain(Scalar e, double ki1, double ki2, double mui) {
    using std::exp;
    const Scalar z = Scalar(mui) * e * e;
    if (z > Scalar(700)) return Scalar(ki1);
    return Scalar(ki1) + Scalar(ki2) / (Scalar(1) + exp(z));
}

/// |e|^alpha sign(e).
template <typename Scalar>
Scalar error_power(Scalar e, double alpha) {
    using std::abs;
    using std::pow;
    if (e == Scalar(0)) return Scalar(0);
    return pow(abs(e), Scalar(alpha)) * sign(e);
}

template <typename Scalar>
Scalar inlsef_integral_term(Scalar e_int, const InlsefParams& p) {
    const Scalar raw = Scalar(p.k3) * error_power(e_int, p.alpha3);
    return std::clamp(raw, Scalar(-p.delta), Scalar(p.delta));
}

template <typename Scalar>
Scalar inlsef_control(const ErrorVector<Scalar>& e, const InlsefParams& p) {
    return nonlinear_gain(e.e0, p.k11, p.k12, p.mu1) * error_power(e.e0, p.alpha1) +
           nonlinear_gain(e.e1, p.k21, p.k22, p.mu2) * error_power(e.e1, p.alpha2) +
           inlsef_integral_term(e.e_int, p);
}

/// Linear inside |e| <= delta, signed power law outside; continuous at the seam.
template <typename Scalar>
Scalar fal(Scalar e, double alpha, double delta) {
    using std::abs;
    using std::pow;
    if (abs(e) <= Scalar(delta)) return e / pow(Scalar(delta), Scalar(1) - Scalar(alpha));
    return pow(abs(e), Scalar(alpha)) * sign(e);
}

template <typename Scalar>
Scalar fal_nlsef_control(const ErrorVector<Scalar>& e, const FalNlsefParams& p) {
    return Scalar(p.k1) * fal(e.e0, p.alpha1, p.delta1) + Scalar(p.k2) * fal(e.e1, p.alpha2, p.delta2);
}

template <typename Scalar>
Scalar sef_control(const ErrorVector<Scalar>& e, const SefParams& p) {
    return std::visit(
        [&](const auto& params) -> Scalar {
            using P = std::decay_t<decltype(params)>;
            if constexpr (std::is_same_v<P, InlsefParams>) {
                return inlsef_control(e, params);
            } else {
                return fal_nlsef_control(e, params);
            }
        },
        p);
}

}  // namespace iadrc
