#include "riser/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "riser/controller.hpp"

namespace riser {

Discretization::Discretization(const RiserParams& params, const ControlConfig& control, int grid_points)
    : grid(grid_points, params.L),
      partition(control.n_volumes, params.L),
      fv(partition, grid),
      tension(sample_tension(params.tension, grid))
{
}

SemiDiscreteSystem::SemiDiscreteSystem(const RiserParams& params, const ControlConfig& control, int grid_points,
                                       Mode mode, std::optional<SourceDescriptor> source)
    : params_(params), control_(control), mode_(mode), source_(std::move(source)),
      disc_(params, control, grid_points)
{
    if (mode == Mode::SourceTerm && !source_) {
        throw std::invalid_argument("source-term mode needs a source descriptor");
    }
    if (mode != Mode::SourceTerm && source_) {
        throw std::invalid_argument("a source descriptor is only valid in source-term mode");
    }
}

SemiDiscreteSystem::SemiDiscreteSystem(const ScenarioConfig& cfg)
    : SemiDiscreteSystem(cfg.params, cfg.control, cfg.grid_points, cfg.mode, cfg.source)
{
}

Field SemiDiscreteSystem::stiffness(std::span<const double> u) const
{
    Field out = biharmonic_apply(u, grid());
    const Field t = tension_apply(disc_.tension.half, u, grid());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = params_.k * out[i] - t[i];
    }
    return out;
}

Field SemiDiscreteSystem::gyroscopic(std::span<const double> v) const
{
    Field out = first_derivative(v, grid());
    for (double& x : out) x *= params_.gamma;
    return out;
}

Field SemiDiscreteSystem::nonlinear_damping_force(std::span<const double> v) const
{
    Field out(v.size(), 0.0);
    if (!nonlinear_damping() || params_.b == 0.0) return out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        const double a = std::abs(v[i]);
        out[i] = a == 0.0 ? 0.0 : params_.b * v[i] * std::pow(a, params_.p);
    }
    return out;
}

Field SemiDiscreteSystem::damping(std::span<const double> v) const
{
    if (nonlinear_damping()) return nonlinear_damping_force(v);
    Field out(v.size(), 0.0);
    for (std::size_t i = 1; i + 1 < v.size(); ++i) out[i] = params_.b * v[i];
    return out;
}

Field SemiDiscreteSystem::control(std::span<const double> u) const
{
    if (control_.mu == 0.0) return Field(u.size(), 0.0);
    Field out = disc_.fv.inject(disc_.fv.averages(u));
    for (double& x : out) x *= -control_.mu;
    return out;
}

Field SemiDiscreteSystem::source(std::span<const double> u) const
{
    Field out(u.size(), 0.0);
    if (!source_) return out;
    for (std::size_t i = 1; i + 1 < u.size(); ++i) out[i] = source_value(*source_, u[i]);
    return out;
}

Field SemiDiscreteSystem::acceleration(const State& state, bool with_control) const
{
    const Field ku = stiffness(state.u);
    const Field gv = gyroscopic(state.v);
    const Field dv = damping(state.v);
    const Field fu = source(state.u);
    const Field cu = with_control ? control(state.u) : Field(state.u.size(), 0.0);
    Field a(state.u.size(), 0.0);
    for (std::size_t i = 1; i + 1 < a.size(); ++i) {
        a[i] = (cu[i] - ku[i] - gv[i] - dv[i] - fu[i]) / params_.m;
    }
    return a;
}

Field residual(const State& state, std::span<const double> accel, const SemiDiscreteSystem& sys)
{
    const int M = sys.grid().size();
    if (static_cast<int>(state.u.size()) != M || static_cast<int>(state.v.size()) != M ||
        static_cast<int>(accel.size()) != M) {
        throw ShapeError("residual: field length mismatch");
    }
    const Field ku = sys.stiffness(state.u);
    const Field gv = sys.gyroscopic(state.v);
    const Field dv = sys.damping(state.v);
    const Field fu = sys.source(state.u);
    const Field cu = sys.control(state.u);
    Field r(M, 0.0);
    for (int i = 1; i < M - 1; ++i) {
        r[i] = sys.params().m * accel[i] + ku[i] + gv[i] + dv[i] + fu[i] - cu[i];
    }
    return r;
}

NewmarkStepper::NewmarkStepper(const SemiDiscreteSystem& sys, double dt)
    : sys_(sys), dt_(dt), n_(sys.grid().size() - 2), banded_(sys.grid().size() - 2, 2, 2)
{
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");

    const auto& p = sys_.params();
    const auto& g = sys_.grid();
    const auto& a = sys_.disc().tension.half;
    const double dx = g.dx();
    const double dx2 = dx * dx;
    const double dx4 = dx2 * dx2;
    const double beta = 0.25 * dt * dt;  // coefficient of a_{n+1} in u_{n+1}
    const double half = 0.5 * dt;        // coefficient of a_{n+1} in v_{n+1}
    const double gyro = half * p.gamma / (2.0 * dx);

    // Interior unknown r corresponds to node i = r + 1.
    for (int r = 0; r < n_; ++r) {
        const int i = r + 1;
        const bool edge = (i == 1 || i == n_);
        const double b4_diag = (edge ? 7.0 : 6.0) / dx4;
        const double t_diag = -(a[i] + a[i - 1]) / dx2;
        banded_.set(r, r, p.m + half * sys_.linear_damping() + beta * (p.k * b4_diag - t_diag));
        if (r + 1 < n_) banded_.set(r, r + 1, gyro + beta * (-4.0 * p.k / dx4 - a[i] / dx2));
        if (r - 1 >= 0) banded_.set(r, r - 1, -gyro + beta * (-4.0 * p.k / dx4 - a[i - 1] / dx2));
        if (r + 2 < n_) banded_.set(r, r + 2, beta * p.k / dx4);
        if (r - 2 >= 0) banded_.set(r, r - 2, beta * p.k / dx4);
    }
    banded_.factor();

    const double mu = sys_.control_config().mu;
    if (mu != 0.0) {
        const auto& fv = sys_.disc().fv;
        const int N = fv.volumes();
        control_scale_ = beta * mu;
        // Injection columns P restricted to interior nodes.
        std::vector<double> node_weight(g.size(), 0.0);
        for (int k = 0; k < N; ++k)
            for (const auto& e : fv.row(k)) node_weight[e.node] += e.weight;
        z_.assign(static_cast<std::size_t>(n_) * N, 0.0);
        for (int k = 0; k < N; ++k) {
            for (const auto& e : fv.row(k)) {
                if (e.node == 0 || e.node == g.size() - 1) continue;
                z_[static_cast<std::size_t>(k) * n_ + (e.node - 1)] += e.weight / node_weight[e.node];
            }
        }
        banded_.solve(z_, N);
        // S = I + c A Z
        DenseLU cap(N);
        for (int j = 0; j < N; ++j) {
            for (int k = 0; k < N; ++k) {
                double s = 0.0;
                for (const auto& e : fv.row(k)) {
                    if (e.node == 0 || e.node == g.size() - 1) continue;
                    s += e.weight * z_[static_cast<std::size_t>(j) * n_ + (e.node - 1)];
                }
                cap(k, j) = (k == j ? 1.0 : 0.0) + control_scale_ * s / fv.h();
            }
        }
        cap.factor();
        capacitance_ = std::move(cap);
    }
}

void NewmarkStepper::solve(std::vector<double>& rhs, bool with_control) const
{
    banded_.solve(rhs);
    if (!with_control || !capacitance_) return;
    const auto& fv = sys_.disc().fv;
    const int N = fv.volumes();
    const int last = sys_.grid().size() - 1;
    std::vector<double> s(N, 0.0);
    for (int k = 0; k < N; ++k) {
        double acc = 0.0;
        for (const auto& e : fv.row(k)) {
            if (e.node == 0 || e.node == last) continue;
            acc += e.weight * rhs[e.node - 1];
        }
        s[k] = control_scale_ * acc / fv.h();
    }
    capacitance_->solve(s);
    for (int k = 0; k < N; ++k) {
        const double* zk = z_.data() + static_cast<std::size_t>(k) * n_;
        for (int r = 0; r < n_; ++r) rhs[r] -= zk[r] * s[k];
    }
}

State NewmarkStepper::step(const State& state, bool with_control) const
{
    const int M = sys_.grid().size();
    if (static_cast<int>(state.u.size()) != M || static_cast<int>(state.v.size()) != M) {
        throw ShapeError("step: state does not match grid");
    }
    const double dt = dt_;
    const double beta = 0.25 * dt * dt;
    const double half = 0.5 * dt;
    const double t_next = state.t + dt;

    const Field a_n = sys_.acceleration(state, with_control);
    Field pred_u(M, 0.0), pred_v(M, 0.0);
    for (int i = 1; i < M - 1; ++i) {
        pred_u[i] = state.u[i] + dt * state.v[i] + beta * a_n[i];
        pred_v[i] = state.v[i] + half * a_n[i];
    }

    // Linear part of -(C v + K u) evaluated at the predictors.
    Field base(M, 0.0);
    {
        const Field ku = sys_.stiffness(pred_u);
        const Field gv = sys_.gyroscopic(pred_v);
        const Field cu = with_control ? sys_.control(pred_u) : Field(M, 0.0);
        const double bl = sys_.linear_damping();
        for (int i = 1; i < M - 1; ++i) {
            base[i] = -ku[i] - gv[i] - bl * pred_v[i] + cu[i];
        }
    }

    const bool iterate = sys_.nonlinear_damping() || sys_.has_source();
    State next{Field(M, 0.0), Field(M, 0.0), t_next};
    Field a = a_n;
    std::vector<double> rhs(n_);
    double update = 0.0;
    last_iterations_ = 0;
    for (int it = 0; it < (iterate ? kMaxIterations : 1); ++it) {
        for (int i = 1; i < M - 1; ++i) {
            next.u[i] = pred_u[i] + beta * a[i];
            next.v[i] = pred_v[i] + half * a[i];
        }
        Field g = sys_.nonlinear_damping_force(next.v);
        Field f = sys_.source(next.u);
        for (int r = 0; r < n_; ++r) rhs[r] = base[r + 1] - g[r + 1] - f[r + 1];
        solve(rhs, with_control);
        ++last_iterations_;

        update = 0.0;
        double scale = 0.0;
        bool finite = true;
        for (int r = 0; r < n_; ++r) {
            const double v_new = pred_v[r + 1] + half * rhs[r];
            finite = finite && std::isfinite(v_new);  // std::max would swallow a NaN
            update = std::max(update, std::abs(v_new - next.v[r + 1]));
            scale = std::max(scale, std::abs(v_new));
            a[r + 1] = rhs[r];
        }
        if (!finite || !std::isfinite(update)) {
            throw StepFailure(t_next, update, "non-finite state at t = " + std::to_string(t_next));
        }
        if (!iterate || update <= kTolerance * scale) {
            for (int i = 1; i < M - 1; ++i) {
                next.u[i] = pred_u[i] + beta * a[i];
                next.v[i] = pred_v[i] + half * a[i];
            }
            return next;
        }
    }
    throw StepFailure(t_next, update,
                      "fixed-point iteration did not converge at t = " + std::to_string(t_next) +
                          ", last velocity update " + std::to_string(update));
}

State step(const State& state, const SemiDiscreteSystem& sys, double dt)
{
    return NewmarkStepper(sys, dt).step(state);
}

}  // namespace riser
