#include <doctest.h>

#include <cmath>
#include <numbers>

#include "riser/integrator.hpp"
#include "riser/simulation.hpp"

using namespace riser;
using std::numbers::pi;

namespace {

RiserParams beam(double L = 1.0)
{
    RiserParams p;
    p.m = 1;
    p.k = 1;
    p.L = L;
    p.a1 = 1;
    return p;
}

ControlConfig open_loop()
{
    ControlConfig c;
    c.n_volumes = 1;
    c.mu = 0;
    return c;
}

State sampled(const Grid& g, auto&& u, auto&& v)
{
    State s{Field(g.size()), Field(g.size()), 0.0};
    for (int i = 1; i + 1 < g.size(); ++i) {
        s.u[i] = u(g.x(i));
        s.v[i] = v(g.x(i));
    }
    return s;
}

double conservative_energy(const State& s, const SemiDiscreteSystem& sys)
{
    const auto& g = sys.grid();
    return 0.5 * sys.params().m * norm_sq(s.v, g) + 0.5 * inner_product(sys.stiffness(s.u), s.u, g);
}

auto bump(double L) { return [L](double x) { return x * x * (L - x) * (L - x); }; }
auto none() { return [](double) { return 0.0; }; }

}  // namespace

TEST_CASE("residual of the semi-discrete equation")
{
    const Grid g(21, 1.0);
    SUBCASE("zero state")
    {
        const SemiDiscreteSystem sys(beam(), open_loop(), 21, Mode::NonlinearDamping);
        for (double r : residual(State{Field(21), Field(21), 0}, Field(21), sys)) CHECK(r == 0.0);
    }
    SUBCASE("quartic displacement")
    {
        const SemiDiscreteSystem sys(beam(), open_loop(), 21, Mode::LinearDamping);
        const auto r = residual(sampled(g, bump(1.0), none()), Field(21), sys);
        for (int i = 2; i <= 18; ++i) CHECK(r[i] == doctest::Approx(24.0).epsilon(1e-9));
    }
    SUBCASE("linear damping only")
    {
        auto p = beam();
        p.b = 3;
        const SemiDiscreteSystem sys(p, open_loop(), 21, Mode::LinearDamping);
        const auto s = sampled(g, none(), [](double x) { return std::sin(pi * x); });
        const auto r = residual(s, Field(21), sys);
        for (int i = 1; i < 20; ++i) CHECK(r[i] == doctest::Approx(3.0 * std::sin(pi * g.x(i))));
    }
    SUBCASE("acceleration solves the equation")
    {
        auto p = beam();
        p.b = 0.7;
        p.gamma = 1.3;
        p.a0 = 1;
        p.tension = LinearProfile{-1.0, 0.5};
        ControlConfig c{3, 2.0, std::nullopt};
        const SemiDiscreteSystem sys(p, c, 21, Mode::NonlinearDamping);
        const auto s = sampled(g, bump(1.0), [](double x) { return std::sin(2 * pi * x); });
        for (double r : residual(s, sys.acceleration(s), sys)) CHECK(std::abs(r) < 1e-9);
    }
    CHECK_THROWS_AS(SemiDiscreteSystem(beam(), open_loop(), 21, Mode::SourceTerm), std::invalid_argument);
    CHECK_THROWS_AS(SemiDiscreteSystem(beam(), open_loop(), 21, Mode::LinearDamping, PowerSource{1, 2}),
                    std::invalid_argument);
}

TEST_CASE("equilibrium is preserved in every mode")
{
    auto p = beam();
    p.b = 1;
    p.gamma = 1;
    p.a0 = 0.5;
    p.tension = ConstantProfile{-0.5};
    ControlConfig c{4, 3.0, std::nullopt};
    for (Mode mode : {Mode::NonlinearDamping, Mode::LinearDamping, Mode::SourceTerm, Mode::Tracking}) {
        std::optional<SourceDescriptor> src;
        if (mode == Mode::SourceTerm) src = PowerSource{1.0, 2.0};
        const SemiDiscreteSystem sys(p, c, 17, mode, src);
        for (double dt : {1e-4, 0.1, 10.0}) {
            const auto s = step(State{Field(17), Field(17), 0}, sys, dt);
            for (int i = 0; i < 17; ++i) {
                CHECK(s.u[i] == 0.0);
                CHECK(s.v[i] == 0.0);
            }
        }
    }
}

TEST_CASE("conservative drift over one period")
{
    // First clamped-clamped mode: beta L = 4.7300407, omega = (beta L)^2 sqrt(k/m) / L^2.
    const int M = 41;
    const double omega = std::pow(4.7300407448627, 2);
    const double period = 2 * pi / omega;
    const SemiDiscreteSystem sys(beam(), open_loop(), M, Mode::LinearDamping);
    const double dx = sys.grid().dx();
    const double dt = dx * dx / 10.0;
    const NewmarkStepper stepper(sys, dt);
    State s = sampled(sys.grid(), bump(1.0), none());
    const double e0 = conservative_energy(s, sys);
    const int steps = static_cast<int>(std::ceil(period / dt));
    double drift = 0.0;
    for (int n = 0; n < steps; ++n) {
        s = stepper.step(s);
        drift = std::max(drift, std::abs(conservative_energy(s, sys) - e0) / e0);
    }
    CHECK(drift < 1e-6);

    SUBCASE("Coriolis does not change the energy")
    {
        auto p = beam();
        p.gamma = 5.0;
        const SemiDiscreteSystem gyro(p, open_loop(), M, Mode::LinearDamping);
        const NewmarkStepper st(gyro, 1e-3);
        State g = sampled(gyro.grid(), bump(1.0), [](double x) { return std::sin(pi * x); });
        const double g0 = conservative_energy(g, gyro);
        for (int n = 0; n < 500; ++n) g = st.step(g);
        CHECK(std::abs(conservative_energy(g, gyro) - g0) / g0 < 1e-10);
    }
}

TEST_CASE("linear modes give a linear update")
{
    auto p = beam(2.0);
    p.b = 0.8;
    p.gamma = 1.5;
    p.a0 = 1.0;
    p.tension = CosineProfile{-0.5, 0.4, 3};
    ControlConfig c{5, 4.0, std::nullopt};
    const SemiDiscreteSystem sys(p, c, 31, Mode::LinearDamping);
    const NewmarkStepper stepper(sys, 0.01);
    State s = sampled(sys.grid(), bump(2.0), [](double x) { return std::sin(pi * x); });
    State twice = s;
    for (auto* f : {&twice.u, &twice.v})
        for (double& x : *f) x *= 2.0;
    const auto a = stepper.step(s);
    const auto b = stepper.step(twice);
    for (int i = 0; i < 31; ++i) {
        CHECK(b.u[i] == doctest::Approx(2.0 * a.u[i]).epsilon(1e-13));
        CHECK(b.v[i] == doctest::Approx(2.0 * a.v[i]).epsilon(1e-13));
    }
    CHECK(stepper.last_iterations() == 1);
}

TEST_CASE("nonlinear damping converges by fixed point and fails loudly")
{
    auto p = beam();
    p.b = 1.0;
    p.p = 1.5;
    const SemiDiscreteSystem sys(p, open_loop(), 21, Mode::NonlinearDamping);
    const State s = sampled(sys.grid(), bump(1.0), [](double x) { return std::sin(pi * x); });
    const NewmarkStepper stepper(sys, 1e-3);
    const auto next = stepper.step(s);
    CHECK(stepper.last_iterations() > 1);
    CHECK(stepper.last_iterations() <= NewmarkStepper::kMaxIterations);
    // The end-of-step state satisfies the trapezoidal update with the damping at v_{n+1}.
    CHECK(std::isfinite(next.v[10]));

    p.b = 1e6;
    const SemiDiscreteSystem stiff(p, open_loop(), 21, Mode::NonlinearDamping);
    State fast = s;
    for (double& v : fast.v) v *= 100.0;
    CHECK_THROWS_AS(NewmarkStepper(stiff, 0.1).step(fast), StepFailure);
}

TEST_CASE("second-order convergence in space and time")
{
    auto p = beam();
    p.b = 0.5;
    p.gamma = 0.5;
    p.a0 = 1;
    p.tension = ConstantProfile{-1.0};
    const ControlConfig c{2, 3.0, std::nullopt};
    const double T = 0.05;
    auto run = [&](int M, double dt) {
        const SemiDiscreteSystem sys(p, c, M, Mode::LinearDamping);
        const NewmarkStepper stepper(sys, dt);
        State s = sampled(sys.grid(), [](double x) { return 0.5 * (1 - std::cos(2 * pi * x)); }, none());
        const int steps = static_cast<int>(std::lround(T / dt));
        for (int n = 0; n < steps; ++n) s = stepper.step(s);
        return s.u;
    };
    const auto ref = run(321, 0.05 / 400);
    auto err = [&](int M, double dt) {
        const auto u = run(M, dt);
        const int stride = 320 / (M - 1);
        double e = 0.0;
        for (int i = 0; i < M; ++i) e = std::max(e, std::abs(u[i] - ref[i * stride]));
        return e;
    };
    const double e1 = err(21, 0.05 / 25);
    const double e2 = err(41, 0.05 / 50);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("simulation bookkeeping")
{
    ScenarioConfig cfg;
    cfg.params = beam();
    cfg.params.b = 1;
    cfg.control = open_loop();
    cfg.grid_points = 21;
    cfg.dt = 0.01;
    cfg.t_final = 0.005;
    cfg.initial_u = BumpProfile{1.0};

    SUBCASE("horizon shorter than a step")
    {
        const auto traj = simulate(cfg);
        CHECK(traj.samples.size() == 1);
        CHECK(traj.steps_taken == 0);
    }
    SUBCASE("zero data stays zero")
    {
        cfg.initial_u = ZeroProfile{};
        cfg.t_final = 0.5;
        cfg.mode = Mode::NonlinearDamping;
        const auto traj = simulate(cfg);
        CHECK(traj.samples.size() == 51);
        for (const auto& s : traj.samples) CHECK(s.script_E == 0.0);
    }
    SUBCASE("tracking with identical data")
    {
        cfg.mode = Mode::Tracking;
        cfg.t_final = 0.5;
        cfg.control = ControlConfig{4, 5.0, std::nullopt};
        cfg.reference_initial = ReferenceInitial{BumpProfile{1.0}, ZeroProfile{}};
        const auto traj = simulate(cfg);
        for (const auto& s : traj.samples) CHECK(s.norm_sum == 0.0);
        REQUIRE(traj.final_reference);
        CHECK(traj.final_reference->u[10] != 0.0);
    }
    SUBCASE("sampling stride")
    {
        cfg.t_final = 1.0;
        cfg.sample_every = 10;
        const auto traj = simulate(cfg);
        CHECK(traj.samples.size() == 11);
        CHECK(traj.samples.back().t == doctest::Approx(1.0));
    }
}
