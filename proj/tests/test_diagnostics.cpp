#include <doctest.h>

#include <cmath>
#include <numbers>

#include "riser/controller.hpp"
#include "riser/diagnostics.hpp"
#include "riser/simulation.hpp"

using namespace riser;
using std::numbers::pi;

namespace {

std::vector<TimeValue> series(double t0, double t1, int n, auto&& f)
{
    std::vector<TimeValue> out;
    for (int i = 0; i < n; ++i) {
        const double t = t0 + (t1 - t0) * i / (n - 1);
        out.push_back({t, f(t)});
    }
    return out;
}

State sine_velocity(const Grid& g)
{
    State s{Field(g.size()), Field(g.size()), 0.0};
    for (int i = 0; i < g.size(); ++i) s.v[i] = std::sin(pi * g.x(i));
    return s;
}

}  // namespace

TEST_CASE("energy functionals")
{
    ScenarioConfig cfg;
    cfg.params.m = 2;
    cfg.params.b = 1;
    cfg.params.a0 = 1;
    cfg.params.tension = ConstantProfile{-0.5};
    cfg.control = ControlConfig{4, 3.0, std::nullopt};
    cfg.grid_points = 401;
    const Discretization disc(cfg.params, cfg.control, cfg.grid_points);
    const auto constants = check_conditions(cfg.params, cfg.control);

    SUBCASE("zero state")
    {
        const auto r = energy_functionals(State{Field(401), Field(401), 0}, cfg, disc, constants);
        for (double v : {r.norm_v_sq, r.norm_uxx_sq, r.script_E, r.big_E, r.script_E1, r.W, r.dissipation}) {
            CHECK(v == 0.0);
        }
    }
    SUBCASE("velocity only")
    {
        const auto s = sine_velocity(disc.grid);
        const auto r = energy_functionals(s, cfg, disc, constants);
        CHECK(r.norm_v_sq == doctest::Approx(0.5).epsilon(1e-6));
        CHECK(r.script_E == doctest::Approx(0.5 * 2 * 0.5).epsilon(1e-6));
        CHECK(r.norm_sum == r.norm_v_sq);
        CHECK(r.big_E == r.script_E);  // no displacement, so no cross term
    }
}

TEST_CASE("dissipation rate")
{
    const Grid g(2001, 1.0);
    const auto s = sine_velocity(g);
    RiserParams p;
    p.b = 1;
    p.p = 1;
    // int_0^1 sin^3(pi x) dx = 4 / (3 pi)
    CHECK(dissipation(s, p, Mode::NonlinearDamping, g) == doctest::Approx(4.0 / (3.0 * pi)).epsilon(1e-6));
    p.b = 2;
    CHECK(dissipation(s, p, Mode::LinearDamping, g) == doctest::Approx(1.0).epsilon(1e-6));
    p.b = 0;
    CHECK(dissipation(s, p, Mode::LinearDamping, g) == 0.0);
}

TEST_CASE("energy balance residual")
{
    std::vector<EnergyReport> zero(5);
    for (int i = 0; i < 5; ++i) zero[i].t = i;
    const auto r0 = energy_balance_residual(zero);
    CHECK(r0.absolute);
    CHECK(r0.value == 0.0);

    // E(t) = e^{-t} with D = e^{-t}: exact balance up to trapezoid error.
    std::vector<EnergyReport> decay;
    for (int i = 0; i <= 1000; ++i) {
        EnergyReport e;
        e.t = i * 1e-3;
        e.script_E = std::exp(-e.t);
        e.dissipation = std::exp(-e.t);
        decay.push_back(e);
    }
    const auto r = energy_balance_residual(decay);
    CHECK_FALSE(r.absolute);
    CHECK(r.value < 1e-7);
}

TEST_CASE("decay fits")
{
    SUBCASE("pure exponential")
    {
        const auto s = series(0, 10, 101, [](double t) { return 5.0 * std::exp(-0.3 * t); });
        const auto f = fit_exponential(s, {0, 10});
        CHECK(f.rate == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(f.intercept == doctest::Approx(std::log(5.0)));
        CHECK(f.r_squared == doctest::Approx(1.0));
        CHECK(f.samples == 101);
        CHECK(std::isnan(f.claimed_rate));
    }
    SUBCASE("constant series")
    {
        const auto f = fit_exponential(series(0, 10, 11, [](double) { return 2.0; }), {0, 10});
        CHECK(f.rate == doctest::Approx(0.0));
        CHECK(f.r_squared == 1.0);
    }
    SUBCASE("oscillating envelope")
    {
        const auto s = series(0, 40, 801, [](double t) { return std::exp(-0.3 * t) * (2 + std::sin(t)); });
        const auto f = fit_exponential(s, {0, 40});
        CHECK(f.rate > 0.25);
        CHECK(f.rate < 0.35);
    }
    SUBCASE("power law")
    {
        const auto s = series(1, 100, 500, [](double t) { return 3.0 * std::pow(t, -2.0 / 3.0); });
        const auto f = fit_polynomial(s, {1, 100}, 1.0);
        CHECK(f.rate == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
        CHECK(f.claimed_rate == doctest::Approx(2.0 / 3.0));
        CHECK(f.alternative_rate == doctest::Approx(1.0 / 3.0));
        CHECK(f.kind == DecayKind::Polynomial);
    }
    SUBCASE("rate is unchanged by scaling")
    {
        const auto a = series(0, 5, 51, [](double t) { return std::exp(-0.7 * t) * (1 + 0.1 * t); });
        auto b = a;
        for (auto& s : b) s.value *= 1e-6;
        CHECK(fit_exponential(a, {0, 5}).rate == doctest::Approx(fit_exponential(b, {0, 5}).rate).epsilon(1e-12));
    }
    SUBCASE("failures")
    {
        const auto s = series(0, 10, 11, [](double t) { return t == 5 ? 0.0 : 1.0; });
        CHECK_THROWS_AS(fit_exponential(s, {0, 10}), FitError);
        CHECK_THROWS_AS(fit_exponential(s, {7.5, 7.9}), FitError);
        CHECK_THROWS_AS(fit_polynomial(series(0, 1, 5, [](double) { return 1.0; }), {0, 1}, 1.0), FitError);
    }
    CHECK(default_fit_window(5) == std::pair{1.0, 5.0});
    CHECK(default_fit_window(100) == std::pair{10.0, 100.0});
}

TEST_CASE("bounded product")
{
    const auto good = series(1, 100, 200, [](double t) { return std::pow(t, -2.0 / 3.0); });
    const auto b = bounded_product_check(good, 2.0 / 3.0, {1, 100});
    CHECK(b.is_bounded);
    CHECK(b.sup == doctest::Approx(1.0));

    const auto slow = series(1, 100, 200, [](double t) { return std::pow(t, -1.0 / 3.0); });
    CHECK_FALSE(bounded_product_check(slow, 2.0 / 3.0, {1, 100}).is_bounded);
}

TEST_CASE("monotonicity of a functional")
{
    std::vector<EnergyReport> s(4);
    const double vals[] = {1.0, 0.5, 0.5 + 1e-12, 0.6};
    for (int i = 0; i < 4; ++i) {
        s[i].t = i;
        s[i].script_E = vals[i];
    }
    const auto m = check_nonincreasing(std::span(s).first(3), &EnergyReport::script_E);
    CHECK(m.nonincreasing);
    const auto bad = check_nonincreasing(s, &EnergyReport::script_E);
    CHECK_FALSE(bad.nonincreasing);
    CHECK(bad.at_t == 3.0);
    CHECK(bad.worst_increase == doctest::Approx(0.1 - 1e-12));
}

TEST_CASE("norm series")
{
    std::vector<EnergyReport> s(2);
    s[1].t = 0.5;
    s[1].norm_sum = 3.0;
    const auto n = norm_series(s);
    REQUIRE(n.size() == 2);
    CHECK(n[1].t == 0.5);
    CHECK(n[1].value == 3.0);
}
