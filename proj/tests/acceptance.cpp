// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.
//
// usage: acceptance <path to iadrc executable>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "iadrc/config.hpp"
#include "iadrc/metrics.hpp"
#include "iadrc/numerics.hpp"
#include "iadrc/observers.hpp"
#include "iadrc/simulation.hpp"
#include "iadrc/state_error_feedback.hpp"

using namespace iadrc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

struct Run {
    SimLog log;
    PerformanceReport report;
};

Run simulate(const Scenario& s, ControllerVariant v) {
    const ControllerConfig cfg = RunConfig{}.controller(v);
    Run r{run_closed_loop(s, cfg), {}};
    r.report = evaluate(r.log);
    return r;
}

Scenario reference_scenario(double magnitude) {
    Scenario s = RunConfig{}.scenario;
    s.disturbance.magnitude = magnitude;
    return s;
}

// Runs (ADRC, IADRC) for each disturbance magnitude concurrently.
std::map<double, std::pair<Run, Run>> reference_runs(const std::vector<double>& magnitudes) {
    std::vector<std::pair<double, std::pair<std::future<Run>, std::future<Run>>>> pending;
    for (double m : magnitudes) {
        pending.emplace_back(m, std::pair{std::async(std::launch::async, simulate, reference_scenario(m),
                                                     ControllerVariant::classical_adrc),
                                          std::async(std::launch::async, simulate, reference_scenario(m),
                                                     ControllerVariant::improved_adrc)});
    }
    std::map<double, std::pair<Run, Run>> out;
    for (auto& [m, f] : pending) out.emplace(m, std::pair{f.first.get(), f.second.get()});
    return out;
}

// --- AC1 -------------------------------------------------------------------

Outcome integrator_orders() {
    const auto t0 = Clock::now();
    using Vec = Eigen::VectorXd;
    auto decay = [](double, const Vec& y) -> Vec { return -y; };
    auto err = [&](double h, bool dopri) {
        IntegratorConfig cfg;
        cfg.min_step_s = 1e-15;
        Vec y = Vec::Ones(1);
        const int n = static_cast<int>(std::lround(1.0 / h));
        for (int i = 0; i < n; ++i) y = dopri ? rk45_step(decay, i * h, y, h, cfg).state : rk4_step(decay, i * h, y, h);
        return std::abs(y(0) - std::exp(-1.0));
    };
    const double rk4_ratio = err(0.1, false) / err(0.05, false);
    const double rk45_ratio = err(0.2, true) / err(0.1, true);

    IntegratorConfig adaptive;
    adaptive.method = IntegrationMethod::rk45_adaptive;
    adaptive.abs_tol = adaptive.rel_tol = 1e-8;
    adaptive.step_s = 0.01;
    const auto tr = integrate_logged(decay, Vec(Vec::Ones(1)), 0.0, 1.0, adaptive, 1.0);
    const double adaptive_err = std::abs(tr.states(1, 0) - std::exp(-1.0));
    const double elapsed = seconds_since(t0);

    const bool pass = rk4_ratio >= 12 && rk4_ratio <= 20 && rk45_ratio >= 24 && rk45_ratio <= 40 &&
                      adaptive_err < 1e-6 && elapsed < 1.0;
    return {pass, fmt("rk4 ratio %.3f, rk45 fixed ratio %.3f, adaptive |err| %.2e, %.3f s", rk4_ratio, rk45_ratio,
                      adaptive_err, elapsed)};
}

// --- AC2 -------------------------------------------------------------------

// Relative error is taken against the magnitude of the terms that cancel in
// the canonical form, since the acceleration itself is ~0 in steady state.
Outcome canonical_form_oracle(const Run& iadrc, const Scenario& s) {
    const SimLog& log = iadrc.log;
    const auto forms = motor_canonical_forms(s.motor);
    const double dt = log.log_step();
    const std::span<const double> omega(log.right.omega.data(), static_cast<std::size_t>(log.samples()));
    int good = 0, total = 0, good_plain = 0;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < log.samples(); ++k) {
        if (log.t(k) < 60.0 - 1e-9 || log.t(k) > 90.0 + 1e-9) continue;
        const double w = log.right.omega(k), i = log.right.i_a(k), u = log.right.u(k);
        const double d = log.right.tau_ext(k) / s.motor.n;
        const double ca = canonical_acceleration(w, i, u, d, 0.0, forms);
        const double fd = second_difference(omega, static_cast<std::size_t>(k), dt);
        const double scale = std::max(std::abs(ca), std::abs(forms.f_hat(w, i)) +
                                                        std::abs(forms.b_hat(w, i) * (u + forms.d_hat(w, i, d, 0.0))));
        const double rel = std::abs(fd - ca) / scale;
        worst = std::max(worst, rel);
        ++total;
        if (rel <= 1e-3) ++good;
        if (std::abs(fd - ca) <= 1e-3 * std::abs(ca)) ++good_plain;
    }
    const double frac = double(good) / total;
    return {frac >= 0.99, fmt("%d/%d points within 1e-3 (%.2f%%), worst %.2e; plain |ca|-relative %.2f%%", good,
                              total, 100 * frac, worst, 100.0 * good_plain / total)};
}

// --- AC3 -------------------------------------------------------------------

Outcome b_hat_value() {
    const double got = motor_canonical_forms(MotorParams{}).b_hat(0.0, 0.0);
    const double expected = (1.0 / 0.82) * (1.1882 / (0.2752 * 3.0));
    const double diff = std::abs(got - expected);
    return {diff <= 1e-12, fmt("b_hat %.13f, independent %.13f, |diff| %.1e", got, expected, diff)};
}

// --- AC4 -------------------------------------------------------------------

Outcome observer_convergence() {
    const auto t0 = Clock::now();
    using Vec5 = Eigen::Matrix<double, 5, 1>;
    const double F0 = 2.0, b = RunConfig{}.b_hat();
    std::string detail;
    bool pass = true;
    for (const auto& [name, eso] : {std::pair{"LESO", EsoParams{LesoParams{30.4, 523.4, 2970.8, b}}},
                                    std::pair{"SMESO", EsoParams{SmesoParams{.b_hat = b}}}}) {
        auto field = [&, eso = eso](double, const Vec5& s) -> Vec5 {
            Vec5 d;
            d << s(1), F0, eso_derivatives<double>(s.tail<3>(), s(0), 0.0, eso);
            return d;
        };
        IntegratorConfig cfg;
        cfg.step_s = 1e-4;
        const auto tr = integrate_logged(field, Vec5(Vec5::Zero()), 0.0, 10.0, cfg, 0.01);
        double worst = 0.0, entered = -1.0;
        for (Eigen::Index k = 0; k < tr.samples(); ++k) {
            const double e = std::abs(tr.states(k, 4) - F0);
            if (tr.times(k) >= 3.0) worst = std::max(worst, e);
            if (e >= 0.02 * F0) entered = -1.0;
            else if (entered < 0.0) entered = tr.times(k);
        }
        pass = pass && worst < 0.02 * F0;
        detail += fmt("%s max|xhat3-F0| on [3,10] %.2e (in band from %.2f s); ", name, worst, entered);
    }
    const double elapsed = seconds_since(t0);
    pass = pass && elapsed < 1.0;
    return {pass, detail + fmt("%.3f s", elapsed)};
}

// --- AC5 -------------------------------------------------------------------

Outcome chattering_direction(const std::map<double, std::pair<Run, Run>>& runs) {
    bool pass = true;
    std::string detail;
    for (const auto& [m, pair] : runs) {
        const double a = pair.first.report.right.control_tv, i = pair.second.report.right.control_tv;
        pass = pass && i < a;
        detail += fmt("M=%.1f: TV(u_r) adrc %.2f, iadrc %.2f, ratio %.3f; ", m, a, i, i / a);
    }
    return {pass, detail.substr(0, detail.size() - 2)};
}

// --- AC6 -------------------------------------------------------------------

Outcome index_directions(const Run& adrc, const Run& iadrc) {
    const auto& a = adrc.report;
    const auto& i = iadrc.report;
    const double isu_r = i.right.isu / a.right.isu, isu_l = i.left.isu / a.left.isu;
    const bool pass = i.right.itae < a.right.itae && i.left.itae < a.left.itae && i.opi_x < a.opi_x &&
                      i.opi_y < a.opi_y && i.opi_theta < a.opi_theta && std::abs(isu_r - 1) < 0.10 &&
                      std::abs(isu_l - 1) < 0.10 && i.peak_e_theta < a.peak_e_theta;
    return {pass, fmt("ITAE R %.3f->%.3f, L %.3f->%.3f; OPI x %.2e->%.2e, y %.2e->%.2e, theta %.2e->%.2e; "
                      "ISU ratio R %.4f, L %.4f; peak|e_theta| %.2e->%.2e",
                      a.right.itae, i.right.itae, a.left.itae, i.left.itae, a.opi_x, i.opi_x, a.opi_y, i.opi_y,
                      a.opi_theta, i.opi_theta, isu_r, isu_l, a.peak_e_theta, i.peak_e_theta)};
}

// --- AC7 -------------------------------------------------------------------

Outcome table_magnitudes(const Run& adrc) {
    const auto& a = adrc.report;
    auto in = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
    const bool x_ok = in(a.opi_x, 1e-4, 1e-2), y_ok = in(a.opi_y, 1e-4, 1e-2), th_ok = in(a.opi_theta, 1e-7, 1e-5);
    return {x_ok && y_ok && th_ok,
            fmt("adrc OPI_x %.3e [%s], OPI_y %.3e [%s], OPI_theta %.3e [%s]", a.opi_x, x_ok ? "in band" : "OUT",
                a.opi_y, y_ok ? "in band" : "OUT", a.opi_theta, th_ok ? "in band" : "OUT")};
}

// --- AC8 -------------------------------------------------------------------

Outcome tracking_band(const Run& adrc, const Run& iadrc, const Scenario& s) {
    bool pass = true;
    std::string detail;
    for (const auto& [name, run] : {std::pair{"adrc", &adrc}, std::pair{"iadrc", &iadrc}}) {
        const SimLog& log = run->log;
        double hold_worst = 0.0, reentry = -1.0;
        for (Eigen::Index k = 0; k < log.samples(); ++k) {
            const double t = log.t(k), e = std::abs(log.right.omega(k) - 1.0);
            if (t >= 20.0 && t < 30.0) hold_worst = std::max(hold_worst, e);
            if (t >= s.disturbance.t_off) {
                if (e >= 0.02) reentry = -1.0;
                else if (reentry < 0.0) reentry = t;
            }
        }
        const double after = reentry < 0.0 ? INFINITY : reentry - s.disturbance.t_off;
        pass = pass && hold_worst < 0.02 && after <= 5.0;
        detail += fmt("%s: max|w_r-1| on [20,30) %.2e, back in band %.2f s after removal; ", name, hold_worst, after);
    }
    return {pass, detail.substr(0, detail.size() - 2)};
}

// --- AC9 -------------------------------------------------------------------

Outcome algebraic_suite() {
    std::vector<std::string> failures;
    auto expect = [&](bool ok, const char* what) {
        if (!ok) failures.emplace_back(what);
    };

    const InlsefParams ip;
    const FalNlsefParams fp;
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    bool sector = true, odd = true;
    for (int n = 0; n < 100000; ++n) {
        const double e = dist(rng);
        for (auto [k1, k2, mu] : {std::tuple{ip.k11, ip.k12, ip.mu1}, std::tuple{ip.k21, ip.k22, ip.mu2}}) {
            const double k = nonlinear_gain(e, k1, k2, mu);
            sector = sector && k >= k1 && k <= k1 + k2 / 2 && (e == 0.0 || k < k1 + k2 / 2);
        }
        const ErrorVector<double> v{e, dist(rng), dist(rng)}, neg{-v.e0, -v.e1, -v.e_int};
        odd = odd && inlsef_control(neg, ip) == -inlsef_control(v, ip) &&
              fal_nlsef_control(neg, fp) == -fal_nlsef_control(v, fp);
    }
    expect(sector, "sector bound");
    expect(odd, "odd symmetry");

    bool seam = true;
    for (auto [a, d] : {std::pair{fp.alpha1, fp.delta1}, std::pair{fp.alpha2, fp.delta2}})
        for (double s : {1.0, -1.0})
            seam = seam && std::abs(fal(s * d, a, d) - fal(std::nextafter(s * d, s * 10), a, d)) < 1e-12;
    expect(seam, "fal seam");

    expect(smeso_gain(0.0, SmesoParams{}) == 0.0, "g(0) = 0");

    SmesoParams lin;
    lin.K_alpha = 0.0;
    lin.K_beta = 1.0;
    lin.beta_obs = 0.0;
    lin.beta1 = 30.4;
    lin.beta2 = 523.4;
    lin.beta3 = 2970.8;
    lin.b_hat = 1.7551;
    const LesoParams leso{30.4, 523.4, 2970.8, 1.7551};
    bool same = true;
    for (int n = 0; n < 10000; ++n) {
        const ObserverState<double> x(dist(rng), dist(rng), dist(rng));
        const double y = dist(rng), u = dist(rng);
        same = same && smeso_derivatives(x, y, u, lin) == leso_derivatives(x, y, u, leso);
    }
    expect(same, "SMESO(0,1,0) == LESO");

    double mirror = 0.0;
    const Scenario s = reference_scenario(1.0);
    for (auto v : {ControllerVariant::classical_adrc, ControllerVariant::improved_adrc}) {
        const auto cfg = RunConfig{}.controller(v);
        const SimLog a = run_closed_loop(s, cfg);
        const SimLog b = run_closed_loop(s.mirrored(), cfg);
        for (auto [p, q, sgn] : {std::tuple{&a.right.omega, &b.left.omega, 1.0}, {&a.left.omega, &b.right.omega, 1.0},
                                 {&a.right.u, &b.left.u, 1.0}, {&a.left.u, &b.right.u, 1.0},
                                 {&a.pose.x, &b.pose.x, 1.0}, {&a.pose.y, &b.pose.y, -1.0},
                                 {&a.pose.theta, &b.pose.theta, -1.0}})
            mirror = std::max(mirror, (*p - sgn * *q).cwiseAbs().maxCoeff());
    }
    expect(mirror <= 1e-9, "mirrored symmetry");

    std::string detail = fmt("1e5 samples; mirrored max diff %.1e", mirror);
    for (const auto& f : failures) detail += "; failed: " + f;
    return {failures.empty(), detail};
}

// --- AC10 ------------------------------------------------------------------

int shell(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism_and_csv(const std::string& cli) {
    const fs::path dir = fs::temp_directory_path() / "iadrc_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto quiet = " > " + (dir / "out.log").string() + " 2>&1";

    int rc = shell(cli + " run --controller iadrc --out " + (dir / "a.csv").string() + quiet);
    rc |= shell(cli + " run --controller iadrc --out " + (dir / "b.csv").string() + quiet);
    const std::string a = slurp(dir / "a.csv"), b = slurp(dir / "b.csv");
    const bool identical = rc == 0 && !a.empty() && a == b;

    bool zero_deltas = true;
    int deltas = 0;
    for (const char* pair : {"adrc,adrc", "iadrc,iadrc"}) {
        const fs::path report = dir / (std::string("same_") + pair[0] + ".txt");
        if (shell(cli + " compare --controllers " + pair + " --out " + report.string() + quiet) != 0) {
            zero_deltas = false;
            continue;
        }
        std::istringstream lines(slurp(report));
        std::string line;
        while (std::getline(lines, line)) {
            if (line.rfind("delta_percent.", 0) != 0) continue;
            ++deltas;
            const std::string value = line.substr(line.find(": ") + 2);
            zero_deltas = zero_deltas && (value == "0" || value == "n/a");
        }
    }
    zero_deltas = zero_deltas && deltas == 20;
    const auto rows = std::count(a.begin(), a.end(), '\n');
    return {identical && zero_deltas,
            fmt("repeated run byte-identical: %s (%ld lines); identical-config compare deltas all zero: %s",
                identical ? "yes" : "no", static_cast<long>(rows), zero_deltas ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <path to iadrc executable>\n", argv[0]);
        return 2;
    }
    const std::string cli = argv[1];

    const auto runs = reference_runs({0.5, 1.0, 2.0});
    const Run& adrc = runs.at(1.0).first;
    const Run& iadrc = runs.at(1.0).second;
    const Scenario scenario = reference_scenario(1.0);

    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"AC1 integrator orders", integrator_orders},
        {"AC2 canonical-form oracle", [&] { return canonical_form_oracle(iadrc, scenario); }},
        {"AC3 b_hat value", b_hat_value},
        {"AC4 observer convergence", observer_convergence},
        {"AC5 chattering direction", [&] { return chattering_direction(runs); }},
        {"AC6 index directions", [&] { return index_directions(adrc, iadrc); }},
        {"AC7 ADRC index magnitudes", [&] { return table_magnitudes(adrc); }},
        {"AC8 tracking band", [&] { return tracking_band(adrc, iadrc, scenario); }},
        {"AC9 algebraic invariants", algebraic_suite},
        {"AC10 determinism and CSV contract", [&] { return determinism_and_csv(cli); }},
    };

    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
