#include "iadrc/tracking_differentiator.hpp"

#include <algorithm>

namespace iadrc {

TdTrack td_track(const Eigen::VectorXd& input, double sample_step_s, const TdParams& p,
                 const IntegratorConfig& cfg) {
    validate(p);
    if (input.size() == 0) return {};
    if (!(sample_step_s > 0.0)) throw std::invalid_argument("td_track: sample step must be > 0");

    const Eigen::Index last = input.size() - 1;
    auto sample_at = [&](double t) {
        const double pos = t / sample_step_s;
        const auto k = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::floor(pos)), 0,
                                                std::max<Eigen::Index>(last - 1, 0));
        if (last == 0) return input(0);
        const double frac = std::clamp(pos - static_cast<double>(k), 0.0, 1.0);
        return input(k) + frac * (input(k + 1) - input(k));
    };

    auto field = [&](double t, const TdState<double>& s) -> TdState<double> {
        return td_derivatives(s, sample_at(t), p);
    };

    const double horizon = static_cast<double>(last) * sample_step_s;
    const auto traj =
        integrate_logged(field, TdState<double>::Zero().eval(), 0.0, horizon, cfg, sample_step_s);

    const double gain = td_output_gain(p);
    return {gain * traj.states.col(0), gain * traj.states.col(1)};
}

}  // namespace iadrc
