#pragma once

#include <optional>
#include <string>
#include <vector>

#include "riser/controller.hpp"
#include "riser/diagnostics.hpp"
#include "riser/integrator.hpp"
#include "riser/scenario.hpp"

namespace riser {

struct SimulationOptions {
    bool keep_snapshots = false;
};

/// Diagnostic samples of one run.
///
/// In tracking mode `final_state` and the snapshots hold the error w = u - v
/// and `final_reference` the uncontrolled reference v; every diagnostic is
/// taken on w.
struct Trajectory {
    Mode mode = Mode::LinearDamping;
    ConditionReport constants;
    std::vector<EnergyReport> samples;
    std::vector<State> snapshots;
    State final_state;
    std::optional<State> final_reference;
    long steps_taken = 0;

    bool failed = false;
    double failure_time = 0.0;
    double failure_residual = 0.0;
    std::string failure_message;
};

/// Initial state (and tracking reference) built from the descriptors or a restart dump.
struct InitialData {
    State state;
    std::optional<State> reference;
};
InitialData initial_data(const ScenarioConfig& cfg, const Grid& grid);

/// Integrates the scenario; step failures stop the run and are recorded in the trajectory.
Trajectory simulate(const ScenarioConfig& cfg, const SimulationOptions& options = {});

}  // namespace riser
