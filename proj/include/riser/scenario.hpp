#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "riser/spatial.hpp"

namespace riser {

/// Raised for closed-form descriptors that cannot be parsed or evaluated.
class DescriptorError : public std::runtime_error {
public:
    DescriptorError(const std::string& field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(field)
    {
    }
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// ---- closed-form field descriptors ---------------------------------------

struct ZeroProfile {};
struct ConstantProfile {
    double value = 0.0;
};
/// sum_j c_j x^j
struct PolynomialProfile {
    std::vector<double> coefficients;
};
struct SineTerm {
    double amplitude = 1.0;
    int harmonic = 1;
};
/// sum A_n sin(n pi x / L)
struct SineProfile {
    std::vector<SineTerm> terms;
};
/// scale * x^2 (L - x)^2
struct BumpProfile {
    double scale = 1.0;
};
/// alpha + beta x
struct LinearProfile {
    double alpha = 0.0;
    double beta = 0.0;
};
/// mean + amplitude cos(n pi x / L)
struct CosineProfile {
    double mean = 0.0;
    double amplitude = 0.0;
    int harmonic = 1;
};
/// Raw node values; only meaningful on a grid with the same node count.
struct ArrayProfile {
    std::vector<double> values;
};

using FieldDescriptor = std::variant<ZeroProfile, ConstantProfile, PolynomialProfile, SineProfile,
                                     BumpProfile, LinearProfile, CosineProfile, ArrayProfile>;

std::string descriptor_tag(const FieldDescriptor& d);

/// True when the descriptor vanishes at x = 0 and x = L by construction.
bool vanishes_at_ends(const FieldDescriptor& d);

/// Pointwise value at x in [0, L]. Array descriptors have no pointwise form.
double evaluate(const FieldDescriptor& d, double x, double length);

/// Samples a descriptor on the grid. Descriptors that vanish at the ends by
/// construction get exact zeros on the two boundary nodes.
Field sample_field(const FieldDescriptor& d, const Grid& grid);

/// Tension a(x) at the nodes and at the M-1 cell midpoints.
struct TensionSamples {
    Field nodes;
    Field half;
};
TensionSamples sample_tension(const FieldDescriptor& d, const Grid& grid);

// ---- nonlinear source f(u) ------------------------------------------------

/// f(s) = c s |s|^q, F(s) = c |s|^{q+2} / (q+2)
struct PowerSource {
    double coefficient = 1.0;
    double exponent = 2.0;
};
/// f(s) = sum_j c_j s^j, F its antiderivative vanishing at 0
struct PolynomialSource {
    std::vector<double> coefficients;
};
using SourceDescriptor = std::variant<PowerSource, PolynomialSource>;

double source_value(const SourceDescriptor& s, double u);
double source_potential(const SourceDescriptor& s, double u);

// ---- scenario --------------------------------------------------------------

enum class Mode { NonlinearDamping, LinearDamping, SourceTerm, Tracking };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

struct RiserParams {
    double m = 1.0;      // mass line density
    double k = 1.0;      // flexural rigidity
    double b = 0.0;      // damping coefficient
    double gamma = 0.0;  // Coriolis parameter
    double p = 1.0;      // damping exponent (nonlinear mode)
    double L = 1.0;
    FieldDescriptor tension = ConstantProfile{0.0};
    double a0 = 0.0;  // -a0 <= a(x)
    double a1 = 1.0;  //        a(x) <= a1
};

struct ControlConfig {
    int n_volumes = 1;
    double mu = 0.0;
    /// Replaces the theorem's delta; reports carry an off-theorem flag when set.
    std::optional<double> delta_override;

    double h(double length) const { return length / n_volumes; }
};

struct State {
    Field u;
    Field v;
    double t = 0.0;
};

struct ReferenceInitial {
    FieldDescriptor u;
    FieldDescriptor v;
};

struct ScenarioConfig {
    RiserParams params;
    ControlConfig control;
    int grid_points = 101;
    double dt = 1e-3;
    double t_final = 1.0;
    FieldDescriptor initial_u = ZeroProfile{};
    FieldDescriptor initial_v = ZeroProfile{};
    Mode mode = Mode::LinearDamping;
    std::optional<SourceDescriptor> source;
    std::optional<ReferenceInitial> reference_initial;
    int sample_every = 1;
    std::optional<std::pair<double, double>> fit_window;
    std::optional<std::string> restart;  // binary state dump to start from
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Collects every violated scenario invariant; never modifies cfg.
ValidationReport validate_scenario(const ScenarioConfig& cfg);

/// Number of time steps between t = 0 and t_final.
long step_count(const ScenarioConfig& cfg);

}  // namespace riser
