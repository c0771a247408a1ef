#include <cmath>
#include <vector>

#include <doctest.h>

#include "iadrc/numerics.hpp"

using namespace iadrc;
using Vec = Eigen::VectorXd;

namespace {

auto decay = [](double, const Vec& y) -> Vec { return -y; };

double rk4_error(double h) {
    Vec y = Vec::Ones(1);
    const int n = static_cast<int>(std::lround(1.0 / h));
    for (int i = 0; i < n; ++i) y = rk4_step(decay, i * h, y, h);
    return std::abs(y(0) - std::exp(-1.0));
}

double rk45_fixed_error(double h) {
    IntegratorConfig cfg;
    cfg.min_step_s = 1e-15;
    Vec y = Vec::Ones(1);
    const int n = static_cast<int>(std::lround(1.0 / h));
    for (int i = 0; i < n; ++i) y = rk45_step(decay, i * h, y, h, cfg).state;
    return std::abs(y(0) - std::exp(-1.0));
}

IntegratorConfig adaptive(double tol) {
    IntegratorConfig cfg;
    cfg.method = IntegrationMethod::rk45_adaptive;
    cfg.abs_tol = cfg.rel_tol = tol;
    cfg.step_s = 0.01;
    return cfg;
}

}  // namespace

TEST_SUITE("numerics") {

TEST_CASE("rk4 step examples") {
    auto zero = [](double, const Vec& x) -> Vec { return Vec::Zero(x.size()); };
    Vec x(2);
    x << 1.5, -2.0;
    CHECK(rk4_step(zero, 0.0, x, 0.1) == x);

    auto unit = [](double, const Vec& x) -> Vec { return Vec::Ones(x.size()); };
    CHECK(rk4_step(unit, 0.0, Vec(Vec::Zero(1)), 0.5)(0) == 0.5);

    CHECK(rk4_error(0.1) < 1e-5);
}

TEST_CASE("rk4 error ratio under step halving") {
    const double ratio = rk4_error(0.1) / rk4_error(0.05);
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
}

TEST_CASE("fixed-step rk45 error ratio under step halving") {
    const double ratio = rk45_fixed_error(0.2) / rk45_fixed_error(0.1);
    CHECK(ratio >= 24.0);
    CHECK(ratio <= 40.0);
}

TEST_CASE("rk45 step with a zero field") {
    auto zero = [](double, const Vec& x) -> Vec { return Vec::Zero(x.size()); };
    Vec x(3);
    x << 1.0, 2.0, 3.0;
    const auto r = rk45_step(zero, 0.0, x, 0.1, IntegratorConfig{});
    CHECK(r.error_estimate == 0.0);
    CHECK(r.state == x);
}

TEST_CASE("adaptive rk45 matches analytic solutions") {
    const auto traj = integrate_logged(decay, Vec(Vec::Ones(1)), 0.0, 1.0, adaptive(1e-8), 0.1);
    CHECK(std::abs(traj.states(traj.samples() - 1, 0) - std::exp(-1.0)) < 1e-6);
    for (Eigen::Index k = 0; k < traj.samples(); ++k)
        CHECK(std::abs(traj.states(k, 0) - std::exp(-traj.times(k))) < 1e-6);

    auto oscillator = [](double, const Vec& x) -> Vec {
        Vec d(2);
        d << x(1), -x(0);
        return d;
    };
    Vec x0(2);
    x0 << 1.0, 0.0;
    const double period = 2.0 * M_PI;
    const auto orbit = integrate_logged(oscillator, x0, 0.0, period, adaptive(1e-8), period / 4);
    CHECK((orbit.states.row(orbit.samples() - 1).transpose() - x0).norm() < 1e-5);
}

TEST_CASE("log grid") {
    const auto g = log_grid(0.0, 100.0, 0.01);
    CHECK(g.size() == 10001);
    CHECK(g(g.size() - 1) == 100.0);
    for (Eigen::Index i = 1; i < g.size(); ++i) {
        CHECK(g(i) > g(i - 1));
        CHECK(std::abs((g(i) - g(i - 1)) - 0.01) < 1e-12);
    }

    const auto single = integrate_logged(decay, Vec(Vec::Constant(1, 3.0)), 2.0, 2.0, IntegratorConfig{}, 0.1);
    CHECK(single.samples() == 1);
    CHECK(single.states(0, 0) == 3.0);
}

TEST_CASE("integration is deterministic") {
    for (auto method : {IntegrationMethod::rk4_fixed, IntegrationMethod::rk45_adaptive}) {
        IntegratorConfig cfg = adaptive(1e-9);
        cfg.method = method;
        const auto a = integrate_logged(decay, Vec(Vec::Ones(1)), 0.0, 3.0, cfg, 0.05);
        const auto b = integrate_logged(decay, Vec(Vec::Ones(1)), 0.0, 3.0, cfg, 0.05);
        CHECK(a.states == b.states);
        CHECK(a.times == b.times);
    }
}

TEST_CASE("non-finite states are reported") {
    auto blowup = [](double, const Vec& y) -> Vec { return y.array().square() * 1e300; };
    CHECK_THROWS_AS(integrate_logged(blowup, Vec(Vec::Constant(1, 1e10)), 0.0, 1.0, IntegratorConfig{}, 0.1),
                    IntegrationError);
}

TEST_CASE("step underflow is reported") {
    auto stiff = [](double t, const Vec& y) -> Vec { return Vec::Constant(1, t > 0.5 ? 1e12 * std::sin(1e9 * t) : -y(0)); };
    IntegratorConfig cfg = adaptive(1e-12);
    cfg.min_step_s = 1e-6;
    CHECK_THROWS_AS(integrate_logged(stiff, Vec(Vec::Ones(1)), 0.0, 1.0, cfg, 0.1), StepUnderflowError);
}

TEST_CASE("integrator config validation") {
    IntegratorConfig cfg;
    cfg.step_s = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = IntegratorConfig{};
    cfg.min_step_s = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = IntegratorConfig{};
    cfg.rel_tol = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("finite differences") {
    const double h = 0.01;
    std::vector<double> sq, cube, flat(7, 4.2);
    for (int i = -3; i <= 3; ++i) {
        const double t = 1.0 + i * h;
        sq.push_back(t * t);
        cube.push_back(t * t * t);
    }
    CHECK(std::abs(central_difference<double>(sq, 3, h) - 2.0) < 1e-9);
    CHECK(std::abs(second_difference<double>(cube, 3, h) - 6.0) < 1e-3);
    CHECK(central_difference<double>(flat, 3, h) == 0.0);
    CHECK(second_difference<double>(flat, 3, h) == 0.0);
    CHECK_THROWS_AS(central_difference<double>(sq, 0, h), std::out_of_range);
    CHECK_THROWS_AS(central_difference<double>(sq, 6, h), std::out_of_range);
    CHECK_THROWS_AS(second_difference<double>(sq, 1, h), std::out_of_range);
}

}
