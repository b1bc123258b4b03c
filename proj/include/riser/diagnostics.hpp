#pragma once

#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "riser/controller.hpp"
#include "riser/integrator.hpp"
#include "riser/scenario.hpp"

namespace riser {

/// Energy and Lyapunov functionals sampled at one time level.
struct EnergyReport {
    double t = 0.0;
    double norm_v_sq = 0.0;    // ||u_t||^2
    double norm_uxx_sq = 0.0;  // ||u_xx||^2
    double norm_u_sq = 0.0;    // ||u||^2
    double norm_sum = 0.0;     // ||u_t||^2 + ||u_xx||^2
    double tension_energy = 0.0;
    double bn = 0.0;
    double source_energy = 0.0;  // int F(u), source-term mode only
    double script_E = 0.0;
    double big_E = 0.0;
    double script_E1 = 0.0;
    double W = 0.0;
    double dissipation = 0.0;
};

EnergyReport energy_functionals(const State& state, const ScenarioConfig& cfg, const Discretization& disc,
                                const ConditionReport& constants);

/// b int |u_t|^{p+2} in nonlinear mode, b int |u_t|^2 otherwise.
double dissipation(const State& state, const RiserParams& params, Mode mode, const Grid& grid);

struct Trajectory;

struct BalanceResidual {
    double value = 0.0;
    bool absolute = false;  // true when script_E(0) = 0
};

/// max_n |E(t_n) - E(0) + int_0^{t_n} D| / E(0), the time integral by trapezoid over samples.
BalanceResidual energy_balance_residual(const Trajectory& traj);
BalanceResidual energy_balance_residual(std::span<const EnergyReport> samples);

struct TimeValue {
    double t;
    double value;
};

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class DecayKind { Polynomial, Exponential };
std::string to_string(DecayKind kind);

struct DecayFit {
    DecayKind kind = DecayKind::Exponential;
    double rate = 0.0;
    double intercept = 0.0;
    std::pair<double, double> window{0.0, 0.0};
    double r_squared = 0.0;
    int samples = 0;
    /// (p+1)/(p+2) for polynomial fits; NaN for exponential ones, whose rate is not pinned.
    double claimed_rate = std::numeric_limits<double>::quiet_NaN();
    /// p/(p+2), the slowest term of the intermediate estimate.
    double alternative_rate = std::numeric_limits<double>::quiet_NaN();
    double D1 = std::numeric_limits<double>::quiet_NaN();
    double M0 = std::numeric_limits<double>::quiet_NaN();
};

/// [max(1, 0.1 t_final), t_final]
std::pair<double, double> default_fit_window(double t_final);

/// Least-squares slope of log(value) against t; rate = -slope.
DecayFit fit_exponential(std::span<const TimeValue> series, std::pair<double, double> window);

/// Least-squares slope of log(value) against log(t); rate = -slope.
DecayFit fit_polynomial(std::span<const TimeValue> series, std::pair<double, double> window, double p);

struct BoundedProduct {
    double sup = 0.0;
    double tail_sup = 0.0;
    double head_sup = 0.0;
    bool is_bounded = true;
};

/// sup of t^exponent * value over the window. Bounded when the sup over the
/// last quarter of the window does not exceed the sup over the rest of it.
BoundedProduct bounded_product_check(std::span<const TimeValue> series, double exponent,
                                     std::pair<double, double> window);

struct Monotonicity {
    bool nonincreasing = true;
    double worst_increase = 0.0;  // largest sample-to-sample rise, relative to |value(0)|
    double at_t = 0.0;
};

/// Sample-to-sample check of one functional; rises up to tol * |value(0)| are accepted.
Monotonicity check_nonincreasing(std::span<const EnergyReport> samples, double EnergyReport::*field,
                                 double tol = 1e-10);

/// (t, ||u_t||^2 + ||u_xx||^2) pairs.
std::vector<TimeValue> norm_series(std::span<const EnergyReport> samples);

}  // namespace riser
