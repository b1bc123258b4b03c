#include "riser/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace riser {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

double sine_sum(const std::vector<SineTerm>& terms, double x, double length)
{
    double sum = 0.0;
    for (const auto& t : terms) {
        sum += t.amplitude * std::sin(t.harmonic * std::numbers::pi * x / length);
    }
    return sum;
}

double horner(const std::vector<double>& c, double x)
{
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

}  // namespace

std::string descriptor_tag(const FieldDescriptor& d)
{
    return std::visit(overloaded{
                          [](const ZeroProfile&) { return std::string("zero"); },
                          [](const ConstantProfile&) { return std::string("constant"); },
                          [](const PolynomialProfile&) { return std::string("polynomial"); },
                          [](const SineProfile& s) {
                              return std::string(s.terms.size() == 1 ? "sine" : "sine_series");
                          },
                          [](const BumpProfile&) { return std::string("bump"); },
                          [](const LinearProfile&) { return std::string("linear"); },
                          [](const CosineProfile&) { return std::string("cosine"); },
                          [](const ArrayProfile&) { return std::string("array"); },
                      },
                      d);
}

bool vanishes_at_ends(const FieldDescriptor& d)
{
    return std::holds_alternative<ZeroProfile>(d) || std::holds_alternative<SineProfile>(d) ||
           std::holds_alternative<BumpProfile>(d);
}

double evaluate(const FieldDescriptor& d, double x, double length)
{
    return std::visit(overloaded{
                          [](const ZeroProfile&) { return 0.0; },
                          [](const ConstantProfile& c) { return c.value; },
                          [&](const PolynomialProfile& p) { return horner(p.coefficients, x); },
                          [&](const SineProfile& s) { return sine_sum(s.terms, x, length); },
                          [&](const BumpProfile& b) {
                              const double w = x * (length - x);
                              return b.scale * w * w;
                          },
                          [&](const LinearProfile& l) { return l.alpha + l.beta * x; },
                          [&](const CosineProfile& c) {
                              return c.mean +
                                     c.amplitude * std::cos(c.harmonic * std::numbers::pi * x / length);
                          },
                          [](const ArrayProfile&) -> double {
                              throw DescriptorError("array", "raw arrays have no pointwise value");
                          },
                      },
                      d);
}

Field sample_field(const FieldDescriptor& d, const Grid& grid)
{
    const int M = grid.size();
    if (const auto* arr = std::get_if<ArrayProfile>(&d)) {
        if (static_cast<int>(arr->values.size()) != M) {
            throw DescriptorError("array", "expected " + std::to_string(M) + " values, got " +
                                               std::to_string(arr->values.size()));
        }
        return arr->values;
    }
    Field out(M);
    for (int i = 0; i < M; ++i) {
        out[i] = evaluate(d, grid.x(i), grid.length());
    }
    if (vanishes_at_ends(d)) {
        out.front() = 0.0;
        out.back() = 0.0;
    }
    return out;
}

TensionSamples sample_tension(const FieldDescriptor& d, const Grid& grid)
{
    if (std::holds_alternative<ArrayProfile>(d)) {
        throw DescriptorError("tension", "tension must be a closed-form profile");
    }
    TensionSamples s;
    s.nodes = sample_field(d, grid);
    s.half.resize(grid.size() - 1);
    for (int i = 0; i + 1 < grid.size(); ++i) {
        const double xm = grid.length() * (2.0 * i + 1.0) / (2.0 * (grid.size() - 1));
        s.half[i] = evaluate(d, xm, grid.length());
    }
    return s;
}

double source_value(const SourceDescriptor& s, double u)
{
    return std::visit(overloaded{
                          [&](const PowerSource& p) {
                              return p.coefficient * u * std::pow(std::abs(u), p.exponent);
                          },
                          [&](const PolynomialSource& p) { return horner(p.coefficients, u); },
                      },
                      s);
}

double source_potential(const SourceDescriptor& s, double u)
{
    return std::visit(overloaded{
                          [&](const PowerSource& p) {
                              return p.coefficient * std::pow(std::abs(u), p.exponent + 2.0) /
                                     (p.exponent + 2.0);
                          },
                          [&](const PolynomialSource& p) {
                              std::vector<double> anti(p.coefficients.size() + 1, 0.0);
                              for (std::size_t j = 0; j < p.coefficients.size(); ++j) {
                                  anti[j + 1] = p.coefficients[j] / static_cast<double>(j + 1);
                              }
                              return horner(anti, u);
                          },
                      },
                      s);
}

std::string to_string(Mode mode)
{
    switch (mode) {
        case Mode::NonlinearDamping: return "nonlinear-damping";
        case Mode::LinearDamping: return "linear-damping";
        case Mode::SourceTerm: return "source-term";
        case Mode::Tracking: return "tracking";
    }
    return "unknown";
}

Mode parse_mode(const std::string& text)
{
    if (text == "nonlinear-damping") return Mode::NonlinearDamping;
    if (text == "linear-damping") return Mode::LinearDamping;
    if (text == "source-term") return Mode::SourceTerm;
    if (text == "tracking") return Mode::Tracking;
    throw DescriptorError("mode", "unknown mode '" + text + "'");
}

long step_count(const ScenarioConfig& cfg)
{
    if (!(cfg.dt > 0.0) || cfg.t_final < cfg.dt) return 0;
    return static_cast<long>(std::floor(cfg.t_final / cfg.dt + 1e-9));
}

namespace {

void check_boundary(const FieldDescriptor& d, const std::optional<Grid>& grid, const std::string& name,
                    std::vector<std::string>& out)
{
    if (const auto* arr = std::get_if<ArrayProfile>(&d)) {
        if (!grid) return;
        if (static_cast<int>(arr->values.size()) != grid->size()) {
            out.push_back(name + " array length must equal grid_points");
            return;
        }
        if (arr->values.front() != 0.0 || arr->values.back() != 0.0) {
            out.push_back(name + " must vanish at x=0 and x=L");
        }
        return;
    }
    if (vanishes_at_ends(d) || !grid) return;
    const double L = grid->length();
    double scale = 1.0;
    for (int i = 0; i < grid->size(); ++i) {
        scale = std::max(scale, std::abs(evaluate(d, grid->x(i), L)));
    }
    if (std::abs(evaluate(d, 0.0, L)) > 1e-12 * scale || std::abs(evaluate(d, L, L)) > 1e-12 * scale) {
        out.push_back(name + " must vanish at x=0 and x=L");
    }
}

}  // namespace

ValidationReport validate_scenario(const ScenarioConfig& cfg)
{
    ValidationReport r;
    auto& v = r.violations;
    const auto& p = cfg.params;

    if (!(p.m > 0.0)) v.push_back("m > 0");
    if (!(p.k > 0.0)) v.push_back("k > 0");
    if (!(p.L > 0.0)) v.push_back("L > 0");
    if (!(p.b >= 0.0)) v.push_back("b >= 0");
    if (!(p.a1 > 0.0)) v.push_back("a1 > 0");
    if (!(p.a0 >= 0.0)) v.push_back("a0 >= 0");
    if (!std::isfinite(p.gamma)) v.push_back("gamma finite");
    if (cfg.mode == Mode::NonlinearDamping && !(p.p >= 1.0)) v.push_back("p >= 1");

    if (cfg.control.n_volumes < 1) v.push_back("N >= 1");
    if (!(cfg.control.mu >= 0.0)) v.push_back("mu >= 0");
    if (cfg.control.delta_override && !(*cfg.control.delta_override > 0.0)) v.push_back("delta_override > 0");

    if (cfg.grid_points < Grid::kMinNodes) v.push_back("M >= 7");
    if (!(cfg.dt > 0.0)) v.push_back("dt > 0");
    if (!(cfg.t_final > cfg.dt)) v.push_back("t_final > dt");
    if (cfg.sample_every < 1) v.push_back("sample_every >= 1");
    if (cfg.fit_window && !(cfg.fit_window->first < cfg.fit_window->second)) {
        v.push_back("fit window lower bound < upper bound");
    }

    std::optional<Grid> grid;
    if (p.L > 0.0 && cfg.grid_points >= Grid::kMinNodes) {
        grid.emplace(cfg.grid_points, p.L);
    }
    if (grid && cfg.control.n_volumes > grid->size() - 1) v.push_back("volumes finer than grid");

    if (grid) {
        if (std::holds_alternative<ArrayProfile>(p.tension)) {
            v.push_back("tension must be a closed-form profile");
        } else {
            const auto ts = sample_tension(p.tension, *grid);
            const double tol = 1e-12 * std::max({1.0, std::abs(p.a0), std::abs(p.a1)});
            auto below = [&](double a) { return a < -p.a0 - tol; };
            auto above = [&](double a) { return a > p.a1 + tol; };
            if (std::ranges::any_of(ts.nodes, below) || std::ranges::any_of(ts.half, below)) {
                v.push_back("tension below -a0");
            }
            if (std::ranges::any_of(ts.nodes, above) || std::ranges::any_of(ts.half, above)) {
                v.push_back("tension above a1");
            }
        }
    }

    const bool tracking = cfg.mode == Mode::Tracking;
    for (const auto* d : {&cfg.initial_u, &cfg.initial_v}) {
        if (std::holds_alternative<ArrayProfile>(*d)) {
            v.push_back("array descriptors are only accepted for reference_initial");
        }
    }
    check_boundary(cfg.initial_u, grid, "initial_u", v);
    check_boundary(cfg.initial_v, grid, "initial_v", v);

    if (tracking) {
        if (!cfg.reference_initial) {
            v.push_back("tracking mode needs reference_initial");
        } else {
            check_boundary(cfg.reference_initial->u, grid, "reference_initial.u", v);
            check_boundary(cfg.reference_initial->v, grid, "reference_initial.v", v);
        }
    } else if (cfg.reference_initial) {
        v.push_back("reference_initial only valid in tracking mode");
    }

    if (cfg.mode == Mode::SourceTerm) {
        if (!cfg.source) {
            v.push_back("source-term mode needs a source");
        } else {
            const auto& s = *cfg.source;
            if (source_value(s, 0.0) != 0.0) v.push_back("source: f(0) = 0");
            bool potential_ok = true;
            bool growth_ok = true;
            for (int j = -2000; j <= 2000; ++j) {
                const double x = 0.005 * j;  // s in [-10, 10]
                const double F = source_potential(s, x);
                const double f = source_value(s, x);
                const double tol = 1e-12 * (1.0 + std::abs(F) + std::abs(f * x));
                if (F < -tol) potential_ok = false;
                if (f * x - F < -tol) growth_ok = false;
            }
            if (!potential_ok) v.push_back("source: F(s) >= 0");
            if (!growth_ok) v.push_back("source: f(s)s - F(s) >= 0");
        }
    } else if (cfg.source) {
        v.push_back("source only valid in source-term mode");
    }
    return r;
}

}  // namespace riser
