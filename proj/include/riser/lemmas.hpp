#pragma once

// Randomized property checks of the L2/H1 inequalities used by the stability
// analysis: finite-volume approximation, the finite-volume norm bound,
// Poincare and the clamped interpolation inequality.  All integrals use
// composite Gauss-Legendre quadrature with panels aligned to the volumes, and
// derivatives are analytic.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace riser {

enum class FamilyKind { SineSeries, ClampedPolynomial, Bump };

std::string to_string(FamilyKind kind);
FamilyKind parse_family(const std::string& name);
/// Clamped kinds also have vanishing end slopes.
bool is_clamped(FamilyKind kind);

struct TestFunctionFamily {
    FamilyKind kind = FamilyKind::SineSeries;
    double coefficient_bound = 1.0;
    int harmonic_cutoff = 16;  // sine harmonics, or polynomial degree of the clamped factor
    std::uint64_t seed = 1;
    double L = 1.0;
};

struct Jet {
    double f = 0.0, fx = 0.0, fxx = 0.0;
};

/// Closed-form test function with analytic first and second derivatives.
class TestFunction {
public:
    struct Bump {
        double amplitude, center, radius;  // amplitude * (1 - t^2)^4, t = (x - center)/radius
    };

    /// sum_n amplitudes[n-1] sin(n pi x / L)
    static TestFunction sine_series(std::vector<double> amplitudes, double L);
    /// s^2 (1-s)^2 q(s), s = x/L, with q given by ascending coefficients.
    static TestFunction clamped_polynomial(const std::vector<double>& q, double L);
    static TestFunction bumps(std::vector<Bump> bumps, double L);
    /// Not in any family; no boundary constraint.
    static TestFunction constant(double value, double L);

    Jet operator()(double x) const;
    double length() const { return L_; }

private:
    struct Sine {
        std::vector<double> a;
    };
    struct Poly {
        std::vector<double> c;  // ascending powers of s
    };
    struct Bumps {
        std::vector<Bump> b;
    };
    struct Constant {
        double value;
    };

    TestFunction(std::variant<Sine, Poly, Bumps, Constant> rep, double L) : rep_(std::move(rep)), L_(L) {}

    std::variant<Sine, Poly, Bumps, Constant> rep_;
    double L_;
};

/// Deterministic draw of `samples` functions from the family.
std::vector<TestFunction> generate(const TestFunctionFamily& family, int samples);

struct InequalitySides {
    double lhs = 0.0, rhs = 0.0;
};

/// ||phi - sum_k avg_k chi_k|| against h ||phi_x||.
InequalitySides fv_approximation_sides(const TestFunction& phi, int N);
/// ||phi||^2 against h sum_k avg_k^2 + h^2 ||phi_x||^2.
InequalitySides fv_norm_bound_sides(const TestFunction& phi, int N);
/// ||phi||^2 against ||phi_x||^2 / lambda_1.
InequalitySides poincare_sides(const TestFunction& phi);
/// ||phi_x||^2 against ||phi|| ||phi_xx||.
InequalitySides interpolation_sides(const TestFunction& phi);

/// Finite-volume averages of phi by quadrature.
std::vector<double> volume_averages(const TestFunction& phi, int N);

struct CheckSummary {
    std::string inequality;
    FamilyKind kind = FamilyKind::SineSeries;
    int N = 0;  // 0 when the inequality has no volume count
    int samples = 0;
    int violations = 0;
    double worst_margin = 0.0;  // min over samples of (rhs - lhs) / rhs
    double worst_ratio = 0.0;   // max over samples of lhs / rhs
    double tolerance = 1e-8;

    bool passed() const { return violations == 0; }
};

CheckSummary check_fv_approximation(const TestFunctionFamily& family, int N, int samples);
CheckSummary check_fv_norm_bound(const TestFunctionFamily& family, int N, int samples);
CheckSummary check_poincare(const TestFunctionFamily& family, int samples);
/// Throws std::invalid_argument for families that are not clamped.
CheckSummary check_interpolation(const TestFunctionFamily& family, int samples);

struct LemmaSuiteOptions {
    int samples = 1000;
    std::uint64_t seed = 1;
    std::vector<int> volume_counts = {1, 2, 4, 8, 16};
    double L = 1.0;
    int harmonic_cutoff = 16;
    double coefficient_bound = 1.0;
};

struct LemmaSuiteReport {
    std::vector<CheckSummary> checks;
    int violations = 0;
    double worst_margin = 0.0;
    double seconds = 0.0;

    bool passed() const { return violations == 0; }
};

/// Every family against every applicable inequality; each sample is
/// evaluated once and reused across volume counts.
LemmaSuiteReport run_lemma_suite(const LemmaSuiteOptions& options);

}  // namespace riser
