#include "iadrc/adrc.hpp"

namespace iadrc {

CanonicalPlantForms<double> motor_canonical_forms(const MotorParams& p) {
    p.validate();
    std::vector<Eigen::Vector2d> probes;
    for (double w : {-50.0, 0.0, 50.0})
        for (double i : {-100.0, 0.0, 100.0}) probes.emplace_back(w, i);
    return matched_transform(motor_affine_plant(p), std::span<const Eigen::Vector2d>(probes));
}

std::string to_string(ControllerVariant v) {
    return v == ControllerVariant::classical_adrc ? "adrc" : "iadrc";
}

void ControllerConfig::validate() const {
    if (b_hat == 0.0 || !std::isfinite(b_hat)) throw std::invalid_argument("controller: b_hat must be nonzero");
    iadrc::validate(td);
    std::visit([](const auto& p) { p.validate(); }, sef);
    std::visit([](const auto& p) { p.validate(); }, eso);

    const bool classical_parts = std::holds_alternative<HanTdParams>(td) &&
                                 std::holds_alternative<FalNlsefParams>(sef) &&
                                 std::holds_alternative<LesoParams>(eso);
    const bool improved_parts = std::holds_alternative<IntdParams>(td) &&
                                std::holds_alternative<InlsefParams>(sef) &&
                                std::holds_alternative<SmesoParams>(eso);
    if (variant == ControllerVariant::classical_adrc && !classical_parts)
        throw std::invalid_argument("controller: classical ADRC needs Han TD, fal NLSEF and LESO");
    if (variant == ControllerVariant::improved_adrc && !improved_parts)
        throw std::invalid_argument("controller: improved ADRC needs INTD, INLSEF and SMESO");
    if (eso_b_hat(eso) != b_hat)
        throw std::invalid_argument("controller: observer b_hat differs from controller b_hat");
}

ControllerConfig ControllerConfig::classical(double b_hat) {
    ControllerConfig cfg;
    cfg.variant = ControllerVariant::classical_adrc;
    cfg.td = HanTdParams{};
    cfg.sef = FalNlsefParams{};
    LesoParams leso;
    leso.b_hat = b_hat;
    cfg.eso = leso;
    cfg.b_hat = b_hat;
    return cfg;
}

ControllerConfig ControllerConfig::improved(double b_hat) {
    ControllerConfig cfg;
    cfg.variant = ControllerVariant::improved_adrc;
    IntdParams td;
    td.normalize_output = true;
    cfg.td = td;
    cfg.sef = InlsefParams{};
    SmesoParams smeso;
    smeso.b_hat = b_hat;
    cfg.eso = smeso;
    cfg.b_hat = b_hat;
    return cfg;
}

}  // namespace iadrc
