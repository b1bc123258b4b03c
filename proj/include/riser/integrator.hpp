#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "riser/linalg.hpp"
#include "riser/scenario.hpp"
#include "riser/spatial.hpp"

namespace riser {

/// Grid, volumes and sampled tension shared by the integrator and diagnostics.
struct Discretization {
    Grid grid;
    VolumePartition partition;
    FiniteVolumeMap fv;
    TensionSamples tension;

    Discretization(const RiserParams& params, const ControlConfig& control, int grid_points);
};

/// A time step that could not be completed.
class StepFailure : public std::runtime_error {
public:
    StepFailure(double t, double residual, const std::string& what)
        : std::runtime_error(what), time_(t), residual_(residual)
    {
    }
    double time() const { return time_; }
    double residual() const { return residual_; }

private:
    double time_;
    double residual_;
};

/// Semi-discrete closed-loop riser equation on the interior nodes:
///
///   m a + k B4 u - T u + gamma D1 v + damping(v) + f(u) = -mu P A u
///
/// with damping(v) = b v |v|^p in nonlinear mode and b v otherwise.
class SemiDiscreteSystem {
public:
    SemiDiscreteSystem(const RiserParams& params, const ControlConfig& control, int grid_points, Mode mode,
                       std::optional<SourceDescriptor> source = std::nullopt);
    explicit SemiDiscreteSystem(const ScenarioConfig& cfg);

    const RiserParams& params() const { return params_; }
    const ControlConfig& control_config() const { return control_; }
    const Discretization& disc() const { return disc_; }
    const Grid& grid() const { return disc_.grid; }
    Mode mode() const { return mode_; }
    const std::optional<SourceDescriptor>& source_descriptor() const { return source_; }

    bool nonlinear_damping() const { return mode_ == Mode::NonlinearDamping; }
    bool has_source() const { return source_.has_value(); }
    /// Damping coefficient treated inside the linear implicit operator.
    double linear_damping() const { return nonlinear_damping() ? 0.0 : params_.b; }

    Field stiffness(std::span<const double> u) const;   // k B4 u - T u
    Field gyroscopic(std::span<const double> v) const;  // gamma D1 v
    Field damping(std::span<const double> v) const;
    Field nonlinear_damping_force(std::span<const double> v) const;  // zero outside nonlinear mode
    Field control(std::span<const double> u) const;     // -mu P A u
    Field source(std::span<const double> u) const;      // f(u), zero without a source

    /// Acceleration solving the equation at the given state (mass is diagonal).
    Field acceleration(const State& state, bool with_control = true) const;

private:
    RiserParams params_;
    ControlConfig control_;
    Mode mode_;
    std::optional<SourceDescriptor> source_;
    Discretization disc_;
};

/// m accel + k u_xxxx - [a u_x]_x + gamma v_x + damping(v) + f(u) - control(u), zero at boundary nodes.
Field residual(const State& state, std::span<const double> accel, const SemiDiscreteSystem& sys);

/// Newmark average-acceleration stepper.
///
/// Stiffness, Coriolis, linear damping and control are implicit. The banded
/// part is factored once; the rank-N control coupling is added through a
/// Woodbury correction with a factored N x N capacitance matrix. Nonlinear
/// damping and the source term are resolved by fixed-point iteration on the
/// end-of-step velocity.
class NewmarkStepper {
public:
    static constexpr double kTolerance = 1e-12;
    static constexpr int kMaxIterations = 50;

    NewmarkStepper(const SemiDiscreteSystem& sys, double dt);

    double dt() const { return dt_; }
    const SemiDiscreteSystem& system() const { return sys_; }

    /// Advances one step. With with_control = false the control block is
    /// dropped (the uncontrolled reference in tracking mode) while the
    /// banded factorization is reused.
    State step(const State& state, bool with_control = true) const;

    int last_iterations() const { return last_iterations_; }

private:
    void solve(std::vector<double>& rhs, bool with_control) const;

    SemiDiscreteSystem sys_;
    double dt_;
    int n_;  // interior unknowns
    BandedLU banded_;
    double control_scale_ = 0.0;
    std::vector<double> z_;  // B^{-1} P, n x N column-major
    std::optional<DenseLU> capacitance_;
    mutable int last_iterations_ = 0;
};

/// One step from a freshly built stepper.
State step(const State& state, const SemiDiscreteSystem& sys, double dt);

}  // namespace riser
