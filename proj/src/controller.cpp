#include "riser/controller.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace riser {

Field feedback_term(std::span<const double> u, const ControlConfig& cfg, const VolumePartition& part,
                    const Grid& grid)
{
    if (cfg.n_volumes != part.size()) {
        throw std::invalid_argument("control config and partition disagree on N");
    }
    if (cfg.mu == 0.0) {
        if (static_cast<int>(u.size()) != grid.size()) throw ShapeError("feedback: field length mismatch");
        return Field(grid.size(), 0.0);
    }
    const FiniteVolumeMap fv(part, grid);
    Field out = fv.inject(fv.averages(u));
    for (double& x : out) x *= -cfg.mu;
    return out;
}

double b_n(std::span<const double> u, const FiniteVolumeMap& fv)
{
    double sum = 0.0;
    for (double a : fv.averages(u)) sum += a * a;
    return sum;
}

double b_n(std::span<const double> u, const VolumePartition& part, const Grid& grid)
{
    return b_n(u, FiniteVolumeMap(part, grid));
}

namespace {

void fill_common(ConditionReport& r, const RiserParams& p, const ControlConfig& cfg)
{
    r.lambda1 = first_dirichlet_eigenvalue(p.L);
    r.h = cfg.h(p.L);
    r.mu = cfg.mu;

    // delta = min{lambda1 sqrt(k) / (4 sqrt(m)), k lambda1 / gamma^2}
    const double first = r.lambda1 * std::sqrt(p.k) / (4.0 * std::sqrt(p.m));
    const double second = p.gamma == 0.0 ? ConditionReport::kInf : p.k * r.lambda1 / (p.gamma * p.gamma);
    r.delta = std::min(first, second);
    if (cfg.delta_override) {
        r.delta = *cfg.delta_override;
        r.delta_off_theorem = true;
        r.notes.push_back("delta overridden; off-theorem");
    }
    r.D0 = p.k - 0.5 * r.delta * p.gamma * p.gamma / r.lambda1;
    r.D1 = std::min(2.0, r.delta * r.D0 / (2.0 * (p.k + p.a1 / r.lambda1)));
    r.M0 = p.m * (r.delta + 1.0) + 0.5;
    if (p.b > 0.0) {
        r.eps = std::min(p.m * p.b / 2.0, p.b / (2.0 * p.m));
    }
}

void add_check(ConditionReport& r, std::string name, std::string quantity, double bound)
{
    const double value = quantity == "h" ? r.h : r.mu;
    const bool ok = quantity == "h" ? value <= bound : value >= bound;
    r.derivation_variant_flags.push_back({std::move(name), std::move(quantity), bound, value, ok});
}

void nonlinear_block(ConditionReport& r, const RiserParams& p)
{
    const double a0 = p.a0;
    const double sl = std::sqrt(r.lambda1);
    const bool delta_ok = r.delta > 0.0 && (p.gamma == 0.0 || r.delta < 2.0 * p.k * r.lambda1 / (p.gamma * p.gamma));
    r.applicable_nonlinear = delta_ok && r.D0 > 0.0;
    if (!r.applicable_nonlinear) {
        r.notes.push_back("nonlinear theorem inapplicable: delta violates 0 < delta < 2k lambda1/gamma^2");
        r.h_max_nonlinear = ConditionReport::kNaN;
        r.mu_min_nonlinear = ConditionReport::kNaN;
        r.satisfied_nonlinear = false;
        return;
    }
    if (a0 == 0.0) {
        r.h_max_nonlinear = ConditionReport::kInf;
        r.mu_min_nonlinear = 0.0;
    } else {
        r.h_max_nonlinear = sl * std::min({p.k / (2.0 * a0), p.k / std::sqrt(2.0 * a0), r.D0 / (2.0 * a0)});
        r.mu_min_nonlinear = a0 * a0 * std::max(1.0 / p.k, 1.0 / r.D0);

        // Intermediate conditions as they appear in the derivation.
        add_check(r, "E lower bound: h <= k sqrt(lambda1) / (2 a0)", "h", p.k * sl / (2.0 * a0));
        add_check(r, "E lower bound: mu >= a0^2 / (2k)", "mu", a0 * a0 / (2.0 * p.k));
        add_check(r, "script E lower bound: h^2 <= k^2 lambda1 / (2 a0)", "h",
                  std::sqrt(p.k * p.k * r.lambda1 / (2.0 * a0)));
        add_check(r, "script E lower bound: mu >= a0^2 / k", "mu", a0 * a0 / p.k);
        add_check(r, "script E1 lower bound: h^2 <= lambda1 D0^2 / (2 a0^2)", "h",
                  std::sqrt(r.lambda1 * r.D0 * r.D0 / (2.0 * a0 * a0)));
        add_check(r, "script E1 lower bound: mu >= a0^2 / D0", "mu", a0 * a0 / r.D0);
    }
    r.satisfied_nonlinear = r.h <= r.h_max_nonlinear && r.mu >= r.mu_min_nonlinear;
}

void linear_block(ConditionReport& r, const RiserParams& p)
{
    if (!(p.b > 0.0)) {
        r.applicable_linear = false;
        r.satisfied_linear = false;
        r.notes.push_back("linear theorem inapplicable: b must be positive");
        return;
    }
    r.applicable_linear = true;
    const double a0 = p.a0;
    const double k = p.k;
    const double second = k * std::sqrt(3.0 * r.lambda1 / 8.0);
    if (a0 == 0.0) {
        r.h_max_linear = second;
        r.mu_min_linear = 0.0;
    } else {
        r.h_max_linear = std::min((k / a0) * std::sqrt(r.lambda1 / 2.0), second);
        r.mu_min_linear = (a0 * a0 / k) * std::max(0.5, 2.0 / (r.eps * r.eps));

        add_check(r, "W lower bound: h^2 <= k^2 lambda1 / (2 a0^2)", "h",
                  std::sqrt(k * k * r.lambda1 / (2.0 * a0 * a0)));
        add_check(r, "W lower bound: mu >= a0^2 / k", "mu", a0 * a0 / k);
        add_check(r, "W decay: h <= eps k sqrt(3 lambda1 / (8 a0))", "h",
                  r.eps * k * std::sqrt(3.0 * r.lambda1 / (8.0 * a0)));
        add_check(r, "W decay: mu >= 2 a0^2 / (k eps^2)", "mu", 2.0 * a0 * a0 / (k * r.eps * r.eps));
    }
    r.satisfied_linear = r.h <= r.h_max_linear && r.mu >= r.mu_min_linear;
}

}  // namespace

ConditionReport check_conditions_nonlinear(const RiserParams& params, const ControlConfig& cfg)
{
    ConditionReport r;
    fill_common(r, params, cfg);
    nonlinear_block(r, params);
    if (params.a0 == 0.0) r.notes.push_back("no destabilizing tension; control optional");
    return r;
}

ConditionReport check_conditions_linear(const RiserParams& params, const ControlConfig& cfg)
{
    ConditionReport r;
    fill_common(r, params, cfg);
    linear_block(r, params);
    if (params.a0 == 0.0) r.notes.push_back("no destabilizing tension; control optional");
    return r;
}

ConditionReport check_conditions(const RiserParams& params, const ControlConfig& cfg)
{
    ConditionReport r;
    fill_common(r, params, cfg);
    nonlinear_block(r, params);
    linear_block(r, params);
    if (params.a0 == 0.0) r.notes.push_back("no destabilizing tension; control optional");
    return r;
}

bool theorem_satisfied(const ConditionReport& report, Mode mode)
{
    return mode == Mode::NonlinearDamping ? report.satisfied_nonlinear : report.satisfied_linear;
}

double instability_threshold(const RiserParams& params)
{
    return params.k - params.a0 * params.L * params.L / (std::numbers::pi * std::numbers::pi);
}

}  // namespace riser
