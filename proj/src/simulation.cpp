#include "riser/simulation.hpp"

#include <cmath>

#include "riser/io.hpp"

namespace riser {

namespace {

State sampled_state(const FieldDescriptor& u, const FieldDescriptor& v, const Grid& grid)
{
    State s{sample_field(u, grid), sample_field(v, grid), 0.0};
    // Clamped ends are imposed, not approximated.
    s.u.front() = s.u.back() = 0.0;
    s.v.front() = s.v.back() = 0.0;
    return s;
}

State difference(const State& a, const State& b)
{
    State d{a.u, a.v, a.t};
    for (std::size_t i = 0; i < d.u.size(); ++i) {
        d.u[i] -= b.u[i];
        d.v[i] -= b.v[i];
    }
    return d;
}

}  // namespace

InitialData initial_data(const ScenarioConfig& cfg, const Grid& grid)
{
    InitialData out;
    if (cfg.restart) {
        const auto dump = read_state_dump(*cfg.restart);
        if (static_cast<int>(dump.primary.u.size()) != grid.size()) {
            throw std::runtime_error("restart dump has " + std::to_string(dump.primary.u.size()) +
                                     " nodes, scenario grid has " + std::to_string(grid.size()));
        }
        if (cfg.mode == Mode::Tracking) {
            if (!dump.reference) throw std::runtime_error("restart dump lacks the tracking reference");
            out.reference = *dump.reference;
            out.state = difference(dump.primary, *dump.reference);
        } else {
            out.state = dump.primary;
        }
        return out;
    }
    State u = sampled_state(cfg.initial_u, cfg.initial_v, grid);
    if (cfg.mode == Mode::Tracking) {
        if (!cfg.reference_initial) throw std::invalid_argument("tracking mode needs reference_initial");
        State v = sampled_state(cfg.reference_initial->u, cfg.reference_initial->v, grid);
        out.state = difference(u, v);
        out.reference = std::move(v);
    } else {
        out.state = std::move(u);
    }
    return out;
}

Trajectory simulate(const ScenarioConfig& cfg, const SimulationOptions& options)
{
    const SemiDiscreteSystem sys(cfg);
    const auto& disc = sys.disc();

    Trajectory traj;
    traj.mode = cfg.mode;
    traj.constants = check_conditions(cfg.params, cfg.control);

    auto init = initial_data(cfg, disc.grid);
    State state = std::move(init.state);
    std::optional<State> reference = std::move(init.reference);
    const double t0 = state.t;

    auto record = [&](const State& s) {
        traj.samples.push_back(energy_functionals(s, cfg, disc, traj.constants));
        if (options.keep_snapshots) traj.snapshots.push_back(s);
    };
    record(state);

    long steps = 0;
    if (cfg.dt > 0.0 && cfg.t_final - t0 >= cfg.dt) {
        steps = static_cast<long>(std::floor((cfg.t_final - t0) / cfg.dt + 1e-9));
    }
    const NewmarkStepper stepper(sys, cfg.dt);
    const int stride = std::max(1, cfg.sample_every);
    try {
        for (long n = 1; n <= steps; ++n) {
            // In tracking mode the error w = u - v obeys the controlled equation
            // and the reference v the uncontrolled one; both share one factorization.
            if (reference) {
                *reference = stepper.step(*reference, false);
                reference->t = t0 + n * cfg.dt;
            }
            state = stepper.step(state, true);
            state.t = t0 + n * cfg.dt;
            traj.steps_taken = n;
            if (n % stride == 0) record(state);
        }
    } catch (const StepFailure& e) {
        traj.failed = true;
        traj.failure_time = e.time();
        traj.failure_residual = e.residual();
        traj.failure_message = e.what();
    }
    traj.final_state = state;
    traj.final_reference = reference;
    return traj;
}

}  // namespace riser
