#include "riser/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "riser/simulation.hpp"

namespace riser {

double dissipation(const State& state, const RiserParams& params, Mode mode, const Grid& grid)
{
    if (params.b == 0.0) return 0.0;
    const double power = mode == Mode::NonlinearDamping ? params.p + 2.0 : 2.0;
    Field integrand(state.v.size());
    for (std::size_t i = 0; i < integrand.size(); ++i) {
        const double a = std::abs(state.v[i]);
        integrand[i] = power == 2.0 ? a * a : std::pow(a, power);
    }
    const Field ones(integrand.size(), 1.0);
    return params.b * inner_product(integrand, ones, grid);
}

EnergyReport energy_functionals(const State& state, const ScenarioConfig& cfg, const Discretization& disc,
                                const ConditionReport& constants)
{
    const auto& g = disc.grid;
    const auto& p = cfg.params;
    EnergyReport r;
    r.t = state.t;
    r.norm_v_sq = norm_sq(state.v, g);
    r.norm_uxx_sq = norm_sq(second_derivative_clamped(state.u, g), g);
    r.norm_u_sq = norm_sq(state.u, g);
    r.norm_sum = r.norm_v_sq + r.norm_uxx_sq;
    r.tension_energy = tension_energy(disc.tension.half, state.u, g);
    r.bn = b_n(state.u, disc.fv);
    if (cfg.mode == Mode::SourceTerm && cfg.source) {
        Field F(state.u.size());
        for (std::size_t i = 0; i < F.size(); ++i) F[i] = source_potential(*cfg.source, state.u[i]);
        r.source_energy = inner_product(F, Field(F.size(), 1.0), g);
    }
    const double mu = cfg.control.mu;
    const double h = cfg.control.h(p.L);
    const double uv = inner_product(state.u, state.v, g);
    const double delta = std::isfinite(constants.delta) ? constants.delta : 0.0;
    const double D0 = std::isfinite(constants.D0) ? constants.D0 : 0.0;
    const double eps = std::isfinite(constants.eps) ? constants.eps : 0.0;

    r.script_E = 0.5 * p.m * r.norm_v_sq + 0.5 * p.k * r.norm_uxx_sq + 0.5 * r.tension_energy +
                 0.5 * mu * h * r.bn + r.source_energy;
    r.big_E = r.script_E + delta * p.m * uv;
    r.script_E1 = p.m * r.norm_v_sq + delta * D0 * r.norm_uxx_sq + delta * r.tension_energy + delta * h * mu * r.bn;
    r.W = r.script_E + eps * p.m * uv + 0.5 * eps * p.b * r.norm_u_sq;
    r.dissipation = dissipation(state, p, cfg.mode, g);
    return r;
}

BalanceResidual energy_balance_residual(std::span<const EnergyReport> samples)
{
    BalanceResidual out;
    if (samples.empty()) return out;
    const double e0 = samples.front().script_E;
    double dissipated = 0.0;
    double worst = 0.0;
    for (std::size_t n = 1; n < samples.size(); ++n) {
        const auto& a = samples[n - 1];
        const auto& b = samples[n];
        dissipated += 0.5 * (b.t - a.t) * (a.dissipation + b.dissipation);
        worst = std::max(worst, std::abs(b.script_E - e0 + dissipated));
    }
    if (e0 == 0.0) {
        out.absolute = true;
        out.value = worst;
    } else {
        out.value = worst / std::abs(e0);
    }
    return out;
}

BalanceResidual energy_balance_residual(const Trajectory& traj) { return energy_balance_residual(traj.samples); }

std::string to_string(DecayKind kind) { return kind == DecayKind::Polynomial ? "polynomial" : "exponential"; }

std::pair<double, double> default_fit_window(double t_final)
{
    return {std::max(1.0, 0.1 * t_final), t_final};
}

namespace {

struct LineFit {
    double slope, intercept, r_squared;
    int n;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y)
{
    const int n = static_cast<int>(x.size());
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw FitError("fit window holds a single abscissa");
    const double slope = sxy / sxx;
    const double ss_res = std::max(0.0, syy - slope * sxy);
    // A flat series is fitted exactly by slope 0.
    const double r2 = syy <= 1e-28 * std::max(1.0, my * my) ? 1.0 : 1.0 - ss_res / syy;
    return {slope, my - slope * mx, r2, n};
}

template <class Transform>
LineFit fit_log(std::span<const TimeValue> series, std::pair<double, double> window, Transform tx)
{
    std::vector<double> x, y;
    for (const auto& s : series) {
        if (s.t < window.first || s.t > window.second) continue;
        if (!(s.value > 0.0) || !std::isfinite(s.value)) {
            throw FitError("nonpositive value " + std::to_string(s.value) + " at t = " + std::to_string(s.t));
        }
        x.push_back(tx(s.t));
        y.push_back(std::log(s.value));
    }
    if (x.size() < 2) throw FitError("fewer than two samples inside the fit window");
    return least_squares(x, y);
}

}  // namespace

DecayFit fit_exponential(std::span<const TimeValue> series, std::pair<double, double> window)
{
    const auto line = fit_log(series, window, [](double t) { return t; });
    DecayFit f;
    f.kind = DecayKind::Exponential;
    f.rate = -line.slope;
    f.intercept = line.intercept;
    f.r_squared = line.r_squared;
    f.window = window;
    f.samples = line.n;
    return f;
}

DecayFit fit_polynomial(std::span<const TimeValue> series, std::pair<double, double> window, double p)
{
    for (const auto& s : series) {
        if (s.t >= window.first && s.t <= window.second && !(s.t > 0.0)) {
            throw FitError("polynomial fit needs t > 0 inside the window");
        }
    }
    const auto line = fit_log(series, window, [](double t) { return std::log(t); });
    DecayFit f;
    f.kind = DecayKind::Polynomial;
    f.rate = -line.slope;
    f.intercept = line.intercept;
    f.r_squared = line.r_squared;
    f.window = window;
    f.samples = line.n;
    f.claimed_rate = (p + 1.0) / (p + 2.0);
    f.alternative_rate = p / (p + 2.0);
    return f;
}

BoundedProduct bounded_product_check(std::span<const TimeValue> series, double exponent,
                                     std::pair<double, double> window)
{
    BoundedProduct out;
    const double split = window.second - 0.25 * (window.second - window.first);
    for (const auto& s : series) {
        if (s.t < window.first || s.t > window.second) continue;
        const double prod = std::pow(s.t, exponent) * s.value;
        out.sup = std::max(out.sup, prod);
        if (s.t >= split) {
            out.tail_sup = std::max(out.tail_sup, prod);
        } else {
            out.head_sup = std::max(out.head_sup, prod);
        }
    }
    out.is_bounded = std::isfinite(out.sup) && out.tail_sup <= out.head_sup * (1.0 + 1e-9);
    return out;
}

Monotonicity check_nonincreasing(std::span<const EnergyReport> samples, double EnergyReport::*field, double tol)
{
    Monotonicity out;
    if (samples.empty()) return out;
    const double scale = std::abs(samples.front().*field);
    for (std::size_t n = 1; n < samples.size(); ++n) {
        const double rise = samples[n].*field - samples[n - 1].*field;
        const double rel = scale > 0.0 ? rise / scale : rise;
        if (rel > out.worst_increase) {
            out.worst_increase = rel;
            out.at_t = samples[n].t;
        }
    }
    out.nonincreasing = out.worst_increase <= tol;
    return out;
}

std::vector<TimeValue> norm_series(std::span<const EnergyReport> samples)
{
    std::vector<TimeValue> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back({s.t, s.norm_sum});
    return out;
}

}  // namespace riser
