#include "iadrc/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace iadrc {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Shortest %g form that parses back to the same double.
std::string format_number(double v) {
    char buf[64];
    for (int digits = 1; digits <= 17; ++digits) {
        std::snprintf(buf, sizeof buf, "%.*g", digits, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

double parse_number(std::string_view text, const std::string& section, const std::string& key) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        throw ConfigError(section, key, "expected a finite number, got '" + std::string(text) + "'");
    return v;
}

bool parse_bool(std::string_view text, const std::string& section, const std::string& key) {
    const std::string t = lower(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError(section, key, "expected true/false, got '" + std::string(text) + "'");
}

ReferenceSchedule parse_schedule(std::string_view text, const std::string& section, const std::string& key) {
    ReferenceSchedule sched;
    sched.steps.clear();
    if (text.find(':') == std::string_view::npos) {
        sched.steps.emplace_back(0.0, parse_number(text, section, key));
        return sched;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto item = trim(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos));
        const auto colon = item.find(':');
        if (colon == std::string_view::npos)
            throw ConfigError(section, key, "schedule entries must be 't:value'");
        sched.steps.emplace_back(parse_number(trim(item.substr(0, colon)), section, key),
                                 parse_number(trim(item.substr(colon + 1)), section, key));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return sched;
}

std::string format_schedule(const ReferenceSchedule& s) {
    if (s.steps.size() == 1 && s.steps.front().first == 0.0) return format_number(s.steps.front().second);
    std::string out;
    for (const auto& [t, v] : s.steps) {
        if (!out.empty()) out += ", ";
        out += format_number(t) + ":" + format_number(v);
    }
    return out;
}

struct KeySpec {
    std::string section;
    std::string key;
    std::string unit;
    Provenance provenance;
    KeyScope scope;
    std::function<void(RunConfig&, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;
};

using Accessor = std::function<double&(RunConfig&)>;

KeySpec number(std::string section, std::string key, std::string unit, Provenance prov, KeyScope scope,
               Accessor acc) {
    KeySpec spec{section, key, std::move(unit), prov, scope, {}, {}};
    spec.set = [acc, section, key](RunConfig& c, std::string_view v) { acc(c) = parse_number(v, section, key); };
    spec.get = [acc](const RunConfig& c) { return format_number(acc(const_cast<RunConfig&>(c))); };
    return spec;
}

const std::vector<KeySpec>& schema() {
    using P = Provenance;
    using S = KeyScope;
    static const std::vector<KeySpec> specs = [] {
        std::vector<KeySpec> v;
        const std::string motor = "motor", robot = "robot", scen = "scenario", integ = "integrator",
                          td = "controller.td", sef = "controller.sef", eso = "controller.eso";

        v.push_back(number(motor, "r_a", "ohm", P::published, S::shared, [](RunConfig& c) -> double& { return c.scenario.motor.R_a; }));
        v.push_back(number(motor, "l_a", "H", P::published, S::shared, [](RunConfig& c) -> double& { return c.scenario.motor.L_a; }));
        v.push_back(number(motor, "k_b", "V*s/rad", P::published, S::shared, [](RunConfig& c) -> double& { return c.scenario.motor.k_b; }));
        v.push_back(number(motor, "k_t", "N*m/A", P::published, S::shared, [](RunConfig& c) -> double& { return c.scenario.motor.k_t; }));
        v.push_back(number(motor, "n", "-", P::published, S::shared, [](RunConfig& c) -> double& { return c.scenario.motor.n; }));
        v.push_back(number(motor, "j_eq", "kg*m^2", P::published, S::shared, [](RunConfig& c) -> double& { return c.scenario.motor.J_eq; }));
        v.push_back(number(motor, "b_eq", "N*m*s/rad", P::published, S::shared, [](RunConfig& c) -> double& { return c.scenario.motor.B_eq; }));

        v.push_back(number(robot, "d", "m", P::published, S::shared, [](RunConfig& c) -> double& { return c.scenario.robot.D; }));
        v.push_back(number(robot, "r_w", "m", P::published, S::shared, [](RunConfig& c) -> double& { return c.scenario.robot.r_w; }));

        for (auto [name, right] : {std::pair{"ref_omega_r", true}, std::pair{"ref_omega_l", false}}) {
            KeySpec s{scen, name, "rad/s", P::published, S::shared, {}, {}};
            s.set = [right, name = std::string(name), scen](RunConfig& c, std::string_view val) {
                (right ? c.scenario.ref_omega_r : c.scenario.ref_omega_l) = parse_schedule(val, scen, name);
            };
            s.get = [right](const RunConfig& c) {
                return format_schedule(right ? c.scenario.ref_omega_r : c.scenario.ref_omega_l);
            };
            v.push_back(std::move(s));
        }
        v.push_back(number(scen, "duration_s", "s", P::published, S::shared, [](RunConfig& c) -> double& { return c.scenario.duration_s; }));
        v.push_back(number(scen, "disturbance_magnitude", "N*m", P::unpublished, S::shared, [](RunConfig& c) -> double& { return c.scenario.disturbance.magnitude; }));
        v.push_back(number(scen, "disturbance_t_on", "s", P::published, S::shared, [](RunConfig& c) -> double& { return c.scenario.disturbance.t_on; }));
        v.push_back(number(scen, "disturbance_t_off", "s", P::published, S::shared, [](RunConfig& c) -> double& { return c.scenario.disturbance.t_off; }));
        {
            KeySpec s{scen, "disturbance_target", "right|left|both", P::published, S::shared, {}, {}};
            s.set = [scen](RunConfig& c, std::string_view val) {
                const std::string t = lower(val);
                if (t == "right") c.scenario.disturbance.target = DisturbanceTarget::right;
                else if (t == "left") c.scenario.disturbance.target = DisturbanceTarget::left;
                else if (t == "both") c.scenario.disturbance.target = DisturbanceTarget::both;
                else throw ConfigError(scen, "disturbance_target", "expected right, left or both");
            };
            s.get = [](const RunConfig& c) -> std::string {
                switch (c.scenario.disturbance.target) {
                    case DisturbanceTarget::right: return "right";
                    case DisturbanceTarget::left: return "left";
                    default: return "both";
                }
            };
            v.push_back(std::move(s));
        }
        v.push_back(number(scen, "log_step_s", "s", P::unpublished, S::shared, [](RunConfig& c) -> double& { return c.scenario.log_step_s; }));
        v.push_back(number(scen, "initial_x", "m", P::unpublished, S::shared, [](RunConfig& c) -> double& { return c.scenario.initial_pose(0); }));
        v.push_back(number(scen, "initial_y", "m", P::unpublished, S::shared, [](RunConfig& c) -> double& { return c.scenario.initial_pose(1); }));
        v.push_back(number(scen, "initial_theta", "rad", P::unpublished, S::shared, [](RunConfig& c) -> double& { return c.scenario.initial_pose(2); }));
        v.push_back(number(scen, "noise_amplitude", "rad/s", P::unpublished, S::shared, [](RunConfig& c) -> double& { return c.scenario.noise.amplitude; }));
        {
            KeySpec s{scen, "noise_seed", "-", P::unpublished, S::shared, {}, {}};
            s.set = [scen](RunConfig& c, std::string_view val) {
                std::uint64_t seed = 0;
                const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), seed);
                if (ec != std::errc() || ptr != val.data() + val.size())
                    throw ConfigError(scen, "noise_seed", "expected a non-negative integer");
                c.scenario.noise.seed = seed;
            };
            s.get = [](const RunConfig& c) { return std::to_string(c.scenario.noise.seed); };
            v.push_back(std::move(s));
        }

        {
            KeySpec s{integ, "method", "rk4_fixed|rk45_adaptive", P::unpublished, S::shared, {}, {}};
            s.set = [integ](RunConfig& c, std::string_view val) {
                const std::string t = lower(val);
                if (t == "rk4_fixed") c.scenario.integrator.method = IntegrationMethod::rk4_fixed;
                else if (t == "rk45_adaptive") c.scenario.integrator.method = IntegrationMethod::rk45_adaptive;
                else throw ConfigError(integ, "method", "expected rk4_fixed or rk45_adaptive");
            };
            s.get = [](const RunConfig& c) -> std::string {
                return c.scenario.integrator.method == IntegrationMethod::rk4_fixed ? "rk4_fixed" : "rk45_adaptive";
            };
            v.push_back(std::move(s));
        }
        v.push_back(number(integ, "step_s", "s", P::unpublished, S::shared, [](RunConfig& c) -> double& { return c.scenario.integrator.step_s; }));
        v.push_back(number(integ, "abs_tol", "-", P::unpublished, S::shared, [](RunConfig& c) -> double& { return c.scenario.integrator.abs_tol; }));
        v.push_back(number(integ, "rel_tol", "-", P::unpublished, S::shared, [](RunConfig& c) -> double& { return c.scenario.integrator.rel_tol; }));
        v.push_back(number(integ, "min_step_s", "s", P::unpublished, S::shared, [](RunConfig& c) -> double& { return c.scenario.integrator.min_step_s; }));
        v.push_back(number(integ, "max_step_s", "s", P::unpublished, S::shared, [](RunConfig& c) -> double& { return c.scenario.integrator.max_step_s; }));

        v.push_back(number(td, "alpha", "-", P::published, S::improved, [](RunConfig& c) -> double& { return c.intd.alpha; }));
        v.push_back(number(td, "beta", "-", P::published, S::improved, [](RunConfig& c) -> double& { return c.intd.beta; }));
        v.push_back(number(td, "gamma", "-", P::published, S::improved, [](RunConfig& c) -> double& { return c.intd.gamma; }));
        v.push_back(number(td, "r", "1/s", P::published, S::improved, [](RunConfig& c) -> double& { return c.intd.R; }));
        {
            KeySpec s{td, "normalize_output", "true|false", P::unpublished, S::improved, {}, {}};
            s.set = [td](RunConfig& c, std::string_view val) { c.intd.normalize_output = parse_bool(val, td, "normalize_output"); };
            s.get = [](const RunConfig& c) -> std::string { return c.intd.normalize_output ? "true" : "false"; };
            v.push_back(std::move(s));
        }
        v.push_back(number(td, "han_r", "1/s", P::published, S::classical, [](RunConfig& c) -> double& { return c.han_td.R; }));

        v.push_back(number(sef, "k11", "-", P::published, S::improved, [](RunConfig& c) -> double& { return c.inlsef.k11; }));
        v.push_back(number(sef, "k12", "-", P::published, S::improved, [](RunConfig& c) -> double& { return c.inlsef.k12; }));
        v.push_back(number(sef, "k21", "-", P::published, S::improved, [](RunConfig& c) -> double& { return c.inlsef.k21; }));
        v.push_back(number(sef, "k22", "-", P::published, S::improved, [](RunConfig& c) -> double& { return c.inlsef.k22; }));
        v.push_back(number(sef, "k3", "-", P::published, S::improved, [](RunConfig& c) -> double& { return c.inlsef.k3; }));
        v.push_back(number(sef, "delta", "-", P::published, S::improved, [](RunConfig& c) -> double& { return c.inlsef.delta; }));
        v.push_back(number(sef, "mu1", "-", P::published, S::improved, [](RunConfig& c) -> double& { return c.inlsef.mu1; }));
        v.push_back(number(sef, "mu2", "-", P::published, S::improved, [](RunConfig& c) -> double& { return c.inlsef.mu2; }));
        v.push_back(number(sef, "mu3", "-", P::published, S::improved, [](RunConfig& c) -> double& { return c.inlsef.mu3; }));
        v.push_back(number(sef, "alpha1", "-", P::published, S::improved, [](RunConfig& c) -> double& { return c.inlsef.alpha1; }));
        v.push_back(number(sef, "alpha2", "-", P::published, S::improved, [](RunConfig& c) -> double& { return c.inlsef.alpha2; }));
        v.push_back(number(sef, "alpha3", "-", P::published, S::improved, [](RunConfig& c) -> double& { return c.inlsef.alpha3; }));
        v.push_back(number(sef, "delta1", "-", P::published, S::classical, [](RunConfig& c) -> double& { return c.fal_nlsef.delta1; }));
        v.push_back(number(sef, "delta2", "-", P::published, S::classical, [](RunConfig& c) -> double& { return c.fal_nlsef.delta2; }));
        v.push_back(number(sef, "fal_alpha1", "-", P::published, S::classical, [](RunConfig& c) -> double& { return c.fal_nlsef.alpha1; }));
        v.push_back(number(sef, "fal_alpha2", "-", P::published, S::classical, [](RunConfig& c) -> double& { return c.fal_nlsef.alpha2; }));
        v.push_back(number(sef, "fal_k1", "-", P::unpublished, S::classical, [](RunConfig& c) -> double& { return c.fal_nlsef.k1; }));
        v.push_back(number(sef, "fal_k2", "-", P::unpublished, S::classical, [](RunConfig& c) -> double& { return c.fal_nlsef.k2; }));

        v.push_back(number(eso, "k_alpha", "-", P::published, S::improved, [](RunConfig& c) -> double& { return c.smeso.K_alpha; }));
        v.push_back(number(eso, "alpha", "-", P::published, S::improved, [](RunConfig& c) -> double& { return c.smeso.alpha_obs; }));
        v.push_back(number(eso, "k_beta", "-", P::published, S::improved, [](RunConfig& c) -> double& { return c.smeso.K_beta; }));
        v.push_back(number(eso, "beta", "-", P::published, S::improved, [](RunConfig& c) -> double& { return c.smeso.beta_obs; }));
        v.push_back(number(eso, "beta1", "1/s", P::published, S::improved, [](RunConfig& c) -> double& { return c.smeso.beta1; }));
        v.push_back(number(eso, "beta2", "1/s^2", P::published, S::improved, [](RunConfig& c) -> double& { return c.smeso.beta2; }));
        v.push_back(number(eso, "beta3", "1/s^3", P::published, S::improved, [](RunConfig& c) -> double& { return c.smeso.beta3; }));
        v.push_back(number(eso, "leso_beta1", "1/s", P::published, S::classical, [](RunConfig& c) -> double& { return c.leso.beta1; }));
        v.push_back(number(eso, "leso_beta2", "1/s^2", P::published, S::classical, [](RunConfig& c) -> double& { return c.leso.beta2; }));
        v.push_back(number(eso, "leso_beta3", "1/s^3", P::published, S::classical, [](RunConfig& c) -> double& { return c.leso.beta3; }));
        {
            KeySpec s{eso, "b_hat", "rad/s^2/V", P::derived, S::shared, {}, {}};
            s.set = [eso](RunConfig& c, std::string_view val) { c.b_hat_override = parse_number(val, eso, "b_hat"); };
            s.get = [](const RunConfig& c) {
                try {
                    return format_number(c.b_hat());
                } catch (const std::exception&) {
                    return std::string("invalid");
                }
            };
            v.push_back(std::move(s));
        }
        return v;
    }();
    return specs;
}

const KeySpec* find_spec(const std::string& section, const std::string& key) {
    for (const auto& s : schema())
        if (s.section == section && s.key == key) return &s;
    return nullptr;
}

bool known_section(const std::string& section) {
    return std::any_of(schema().begin(), schema().end(), [&](const KeySpec& s) { return s.section == section; });
}

const RunConfig& defaults() {
    static const RunConfig d;
    return d;
}

template <typename Fn>
void in_section(const std::string& section, Fn&& fn) {
    try {
        fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(section, "", e.what());
    }
}

}  // namespace

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::published: return "published-default";
        case Provenance::derived: return "derived";
        case Provenance::unpublished: return "unpublished-default";
        default: return "user-override";
    }
}

ConfigError::ConfigError(std::string section, std::string key, const std::string& message)
    : std::runtime_error("[" + section + "]" + (key.empty() ? "" : " " + key) + ": " + message),
      section_(std::move(section)),
      key_(std::move(key)) {}

RunConfig::RunConfig() {
    // Unity-gain INTD output for the reference experiment; see IntdParams.
    intd.normalize_output = true;
}

double RunConfig::b_hat() const {
    if (b_hat_override) return *b_hat_override;
    double value = 0.0;
    in_section("controller.eso", [&] { value = motor_canonical_forms(scenario.motor).b_hat(0.0, 0.0); });
    return value;
}

ControllerConfig RunConfig::controller(ControllerVariant variant) const {
    const KeyScope other = variant == ControllerVariant::classical_adrc ? KeyScope::improved : KeyScope::classical;
    for (const auto& s : schema()) {
        if (s.scope == other && overridden.count(s.section + "." + s.key)) {
            throw ConfigError(s.section, s.key,
                              "not used by the " + to_string(variant) + " controller (variant mismatch)");
        }
    }
    const double bh = b_hat();
    ControllerConfig cfg = variant == ControllerVariant::classical_adrc ? ControllerConfig::classical(bh)
                                                                        : ControllerConfig::improved(bh);
    if (variant == ControllerVariant::classical_adrc) {
        cfg.td = han_td;
        cfg.sef = fal_nlsef;
        LesoParams l = leso;
        l.b_hat = bh;
        cfg.eso = l;
    } else {
        cfg.td = intd;
        cfg.sef = inlsef;
        SmesoParams s = smeso;
        s.b_hat = bh;
        cfg.eso = s;
    }
    return cfg;
}

std::vector<ResolvedEntry> RunConfig::resolved() const {
    std::vector<ResolvedEntry> out;
    for (const auto& s : schema()) {
        const bool user = overridden.count(s.section + "." + s.key) > 0;
        out.push_back({s.section, s.key, s.get(*this), s.unit, user ? Provenance::user : s.provenance, s.scope});
    }
    return out;
}

void RunConfig::validate() const {
    in_section("motor", [&] { scenario.motor.validate(); });
    in_section("robot", [&] { scenario.robot.validate(); });
    in_section("integrator", [&] { scenario.integrator.validate(); });
    in_section("scenario", [&] { scenario.validate(); });
    in_section("controller.td", [&] {
        han_td.validate();
        intd.validate();
    });
    in_section("controller.sef", [&] {
        fal_nlsef.validate();
        inlsef.validate();
    });
    const double bh = b_hat();
    in_section("controller.eso", [&] {
        LesoParams l = leso;
        l.b_hat = bh;
        l.validate();
        SmesoParams s = smeso;
        s.b_hat = bh;
        s.validate();
    });
}

RunConfig parse_run_config(std::string_view text) {
    RunConfig cfg;
    std::string section;
    std::set<std::string> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(section, "", "line " + std::to_string(line_no) + ": malformed section header");
            section = lower(trim(line.substr(1, line.size() - 2)));
            if (!known_section(section)) throw ConfigError(section, "", "unknown section");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(section, "", "line " + std::to_string(line_no) + ": expected key = value");
        const std::string raw_key(trim(line.substr(0, eq)));
        const std::string key = lower(raw_key);
        const std::string_view value = trim(line.substr(eq + 1));
        if (section.empty()) throw ConfigError("", raw_key, "key outside of any section");

        const KeySpec* spec = find_spec(section, key);
        if (!spec) throw ConfigError(section, raw_key, "unknown key '" + raw_key + "'");
        if (!seen.insert(section + "." + key).second) throw ConfigError(section, raw_key, "duplicate key");
        spec->set(cfg, value);
        if (spec->get(cfg) != spec->get(defaults())) cfg.overridden.insert(section + "." + key);
    }
    cfg.validate();
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "", "cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

std::string default_config_text() {
    const RunConfig d;
    std::string out;
    std::string section;
    for (const auto& e : d.resolved()) {
        if (e.section != section) {
            if (!section.empty()) out += "\n";
            section = e.section;
            out += "[" + section + "]\n";
        }
        if (e.key == "b_hat") {
            out += "# b_hat = " + e.value + "  # derived from [motor] when omitted\n";
            continue;
        }
        out += e.key + " = " + e.value + "  # " + e.unit + ", " + to_string(e.provenance) + "\n";
    }
    return out;
}

}  // namespace iadrc
