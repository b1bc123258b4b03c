#include "riser/lemmas.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

namespace riser {

std::string to_string(FamilyKind kind)
{
    switch (kind) {
    case FamilyKind::SineSeries: return "sine-series";
    case FamilyKind::ClampedPolynomial: return "clamped-polynomial";
    case FamilyKind::Bump: return "bump";
    }
    return "unknown";
}

FamilyKind parse_family(const std::string& name)
{
    if (name == "sine-series") return FamilyKind::SineSeries;
    if (name == "clamped-polynomial") return FamilyKind::ClampedPolynomial;
    if (name == "bump") return FamilyKind::Bump;
    throw std::invalid_argument("unknown test-function family '" + name + "'");
}

bool is_clamped(FamilyKind kind) { return kind != FamilyKind::SineSeries; }

// ---- test functions -------------------------------------------------------

TestFunction TestFunction::sine_series(std::vector<double> amplitudes, double L)
{
    return TestFunction(Sine{std::move(amplitudes)}, L);
}

TestFunction TestFunction::clamped_polynomial(const std::vector<double>& q, double L)
{
    // s^2 (1-s)^2 = s^2 - 2 s^3 + s^4
    static constexpr double w[] = {0.0, 0.0, 1.0, -2.0, 1.0};
    std::vector<double> c(q.size() + 4, 0.0);
    for (std::size_t i = 0; i < q.size(); ++i) {
        for (std::size_t j = 0; j < 5; ++j) c[i + j] += q[i] * w[j];
    }
    if (q.empty()) c.assign(1, 0.0);
    return TestFunction(Poly{std::move(c)}, L);
}

TestFunction TestFunction::bumps(std::vector<Bump> bumps, double L)
{
    for (const auto& b : bumps) {
        if (!(b.radius > 0.0) || b.center - b.radius < -1e-14 * L || b.center + b.radius > L * (1 + 1e-14)) {
            throw std::invalid_argument("bump support must lie inside [0, L]");
        }
    }
    return TestFunction(Bumps{std::move(bumps)}, L);
}

TestFunction TestFunction::constant(double value, double L) { return TestFunction(Constant{value}, L); }

Jet TestFunction::operator()(double x) const
{
    Jet j;
    if (const auto* s = std::get_if<Sine>(&rep_)) {
        const double k = std::numbers::pi / L_;
        const double s1 = std::sin(k * x), c1 = std::cos(k * x);
        double sn = s1, cn = c1;
        for (std::size_t n = 1; n <= s->a.size(); ++n) {
            const double a = s->a[n - 1];
            const double kn = k * static_cast<double>(n);
            j.f += a * sn;
            j.fx += a * kn * cn;
            j.fxx -= a * kn * kn * sn;
            const double next = sn * c1 + cn * s1;
            cn = cn * c1 - sn * s1;
            sn = next;
        }
    } else if (const auto* p = std::get_if<Poly>(&rep_)) {
        const double s = x / L_;
        double g = 0.0, g1 = 0.0, g2 = 0.0;
        for (std::size_t i = p->c.size(); i-- > 0;) {
            g2 = g2 * s + 2.0 * g1;
            g1 = g1 * s + g;
            g = g * s + p->c[i];
        }
        j = {g, g1 / L_, g2 / (L_ * L_)};
    } else if (const auto* b = std::get_if<Bumps>(&rep_)) {
        for (const auto& bump : b->b) {
            const double t = (x - bump.center) / bump.radius;
            if (std::abs(t) >= 1.0) continue;
            const double q = 1.0 - t * t;
            const double q2 = q * q;
            const double A = bump.amplitude, r = bump.radius;
            j.f += A * q2 * q2;
            j.fx += -8.0 * A * t * q2 * q / r;
            j.fxx += -8.0 * A * q2 * (1.0 - 7.0 * t * t) / (r * r);
        }
    } else {
        j.f = std::get<Constant>(rep_).value;
    }
    return j;
}

// ---- generation -----------------------------------------------------------

namespace {

class Uniform {
public:
    explicit Uniform(std::uint64_t seed) : rng_(seed) {}
    /// Uniform on [a, b) from the top 53 bits, independent of the library's distributions.
    double operator()(double a, double b) { return a + (b - a) * static_cast<double>(rng_() >> 11) * 0x1p-53; }
    int index(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }

private:
    std::mt19937_64 rng_;
};

TestFunction draw(FamilyKind kind, const TestFunctionFamily& fam, Uniform& u)
{
    const double B = fam.coefficient_bound;
    const double L = fam.L;
    const int cutoff = std::max(1, fam.harmonic_cutoff);
    switch (kind) {
    case FamilyKind::SineSeries: {
        std::vector<double> a(static_cast<std::size_t>(cutoff), 0.0);
        switch (u.index(4)) {
        case 0:
            for (auto& x : a) x = u(-B, B);
            break;
        case 1:
            for (std::size_t n = 0; n < a.size(); ++n) a[n] = u(-B, B) / static_cast<double>((n + 1) * (n + 1));
            break;
        case 2:
            // Near the first eigenfunction, where Poincare is sharp.
            a[0] = B;
            for (std::size_t n = 1; n < a.size(); ++n) a[n] = 1e-3 * u(-B, B);
            break;
        default:
            a[static_cast<std::size_t>(u.index(cutoff))] = u(0.1 * B, B);
            break;
        }
        return TestFunction::sine_series(std::move(a), L);
    }
    case FamilyKind::ClampedPolynomial: {
        const int degree = u.index(std::min(cutoff, 8) + 1);
        std::vector<double> q(static_cast<std::size_t>(degree + 1));
        for (auto& c : q) c = u(-B, B);
        return TestFunction::clamped_polynomial(q, L);
    }
    case FamilyKind::Bump: {
        const int count = 1 + u.index(4);
        std::vector<TestFunction::Bump> bumps;
        for (int i = 0; i < count; ++i) {
            const double r = u(0.02 * L, 0.5 * L);
            bumps.push_back({u(-B, B), u(r, L - r), r});
        }
        return TestFunction::bumps(std::move(bumps), L);
    }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

std::vector<TestFunction> generate(const TestFunctionFamily& family, int samples)
{
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    if (!(family.L > 0.0)) throw std::invalid_argument("family length must be > 0");
    Uniform u(family.seed);
    std::vector<TestFunction> out;
    out.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) out.push_back(draw(family.kind, family, u));
    return out;
}

// ---- quadrature -----------------------------------------------------------

namespace {

constexpr int kGaussPoints = 10;
constexpr int kMinPanels = 256;

struct GaussRule {
    double node[kGaussPoints], weight[kGaussPoints];
};

const GaussRule& gauss_rule()
{
    static const GaussRule rule = [] {
        GaussRule r{};
        const int n = kGaussPoints;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            r.node[i] = x;
            r.weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return r;
    }();
    return rule;
}

/// A test function tabulated at the quadrature points of `panels` equal panels.
struct Tabulated {
    int panels = 0;
    double L = 0.0;
    std::vector<double> w, f, fx, fxx;

    Tabulated(const TestFunction& phi, int panels_) : panels(panels_), L(phi.length())
    {
        const auto& g = gauss_rule();
        const double width = L / panels;
        const std::size_t n = static_cast<std::size_t>(panels) * kGaussPoints;
        w.resize(n);
        f.resize(n);
        fx.resize(n);
        fxx.resize(n);
        std::size_t idx = 0;
        for (int p = 0; p < panels; ++p) {
            const double mid = (p + 0.5) * width;
            for (int q = 0; q < kGaussPoints; ++q, ++idx) {
                const Jet j = phi(mid + 0.5 * width * g.node[q]);
                w[idx] = 0.5 * width * g.weight[q];
                f[idx] = j.f;
                fx[idx] = j.fx;
                fxx[idx] = j.fxx;
            }
        }
    }

    double integral(const std::vector<double>& a, const std::vector<double>& b) const
    {
        double s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * a[i] * b[i];
        return s;
    }

    std::vector<double> averages(int N) const
    {
        if (N < 1 || panels % N != 0) throw std::invalid_argument("panels not aligned with volumes");
        const double h = L / N;
        const std::size_t per = w.size() / static_cast<std::size_t>(N);
        std::vector<double> avg(static_cast<std::size_t>(N), 0.0);
        for (std::size_t k = 0; k < avg.size(); ++k) {
            double s = 0.0;
            for (std::size_t i = k * per; i < (k + 1) * per; ++i) s += w[i] * f[i];
            avg[k] = s / h;
        }
        return avg;
    }
};

int aligned_panels(int N)
{
    if (N < 1) throw std::invalid_argument("N must be >= 1");
    return N * ((kMinPanels + N - 1) / N);
}

InequalitySides fv_approximation(const Tabulated& t, int N)
{
    const auto avg = t.averages(N);
    const std::size_t per = t.w.size() / static_cast<std::size_t>(N);
    double err = 0.0;
    for (std::size_t i = 0; i < t.w.size(); ++i) {
        const double d = t.f[i] - avg[i / per];
        err += t.w[i] * d * d;
    }
    const double h = t.L / N;
    return {std::sqrt(err), h * std::sqrt(t.integral(t.fx, t.fx))};
}

InequalitySides fv_norm_bound(const Tabulated& t, int N)
{
    const auto avg = t.averages(N);
    const double h = t.L / N;
    double s = 0.0;
    for (double a : avg) s += a * a;
    return {t.integral(t.f, t.f), h * s + h * h * t.integral(t.fx, t.fx)};
}

InequalitySides poincare(const Tabulated& t)
{
    const double lambda1 = std::pow(std::numbers::pi / t.L, 2);
    return {t.integral(t.f, t.f), t.integral(t.fx, t.fx) / lambda1};
}

InequalitySides interpolation(const Tabulated& t)
{
    return {t.integral(t.fx, t.fx), std::sqrt(t.integral(t.f, t.f) * t.integral(t.fxx, t.fxx))};
}

/// Accumulates one inequality over samples.  `scale` sets an absolute floor
/// so that both sides vanishing up to rounding is not reported as a failure.
struct Accumulator {
    CheckSummary s;

    void add(InequalitySides sides, double scale)
    {
        const double floor = std::max(1e-13 * scale, std::numeric_limits<double>::min());
        const double denom = std::max(sides.rhs, floor);
        const double margin = (sides.rhs - sides.lhs) / denom;
        const double ratio = sides.lhs / denom;
        if (s.samples == 0) {
            s.worst_margin = margin;
            s.worst_ratio = ratio;
        } else {
            s.worst_margin = std::min(s.worst_margin, margin);
            s.worst_ratio = std::max(s.worst_ratio, ratio);
        }
        ++s.samples;
        if (margin < -s.tolerance) ++s.violations;
    }
};

Accumulator make(const char* name, FamilyKind kind, int N)
{
    Accumulator a;
    a.s.inequality = name;
    a.s.kind = kind;
    a.s.N = N;
    return a;
}

double l2_sq(const Tabulated& t) { return t.integral(t.f, t.f); }

}  // namespace

std::vector<double> volume_averages(const TestFunction& phi, int N) { return Tabulated(phi, aligned_panels(N)).averages(N); }

InequalitySides fv_approximation_sides(const TestFunction& phi, int N)
{
    return fv_approximation(Tabulated(phi, aligned_panels(N)), N);
}

InequalitySides fv_norm_bound_sides(const TestFunction& phi, int N)
{
    return fv_norm_bound(Tabulated(phi, aligned_panels(N)), N);
}

InequalitySides poincare_sides(const TestFunction& phi) { return poincare(Tabulated(phi, kMinPanels)); }

InequalitySides interpolation_sides(const TestFunction& phi) { return interpolation(Tabulated(phi, kMinPanels)); }

CheckSummary check_fv_approximation(const TestFunctionFamily& family, int N, int samples)
{
    auto acc = make("fv-approximation", family.kind, N);
    for (const auto& phi : generate(family, samples)) {
        const Tabulated t(phi, aligned_panels(N));
        acc.add(fv_approximation(t, N), std::sqrt(l2_sq(t)));
    }
    return acc.s;
}

CheckSummary check_fv_norm_bound(const TestFunctionFamily& family, int N, int samples)
{
    auto acc = make("fv-norm-bound", family.kind, N);
    for (const auto& phi : generate(family, samples)) {
        const Tabulated t(phi, aligned_panels(N));
        acc.add(fv_norm_bound(t, N), l2_sq(t));
    }
    return acc.s;
}

CheckSummary check_poincare(const TestFunctionFamily& family, int samples)
{
    auto acc = make("poincare", family.kind, 0);
    for (const auto& phi : generate(family, samples)) {
        const Tabulated t(phi, kMinPanels);
        acc.add(poincare(t), l2_sq(t));
    }
    return acc.s;
}

CheckSummary check_interpolation(const TestFunctionFamily& family, int samples)
{
    if (!is_clamped(family.kind)) {
        throw std::invalid_argument("interpolation check needs a clamped family, got " + to_string(family.kind));
    }
    auto acc = make("interpolation", family.kind, 0);
    for (const auto& phi : generate(family, samples)) {
        const Tabulated t(phi, kMinPanels);
        acc.add(interpolation(t), l2_sq(t));
    }
    return acc.s;
}

LemmaSuiteReport run_lemma_suite(const LemmaSuiteOptions& options)
{
    const auto start = std::chrono::steady_clock::now();
    int common = 1;
    for (int N : options.volume_counts) {
        if (N < 1) throw std::invalid_argument("volume counts must be >= 1");
        common = std::lcm(common, N);
        if (common > 1 << 16) throw std::invalid_argument("volume counts have too large a common multiple");
    }
    const int panels = common * ((kMinPanels + common - 1) / common);

    LemmaSuiteReport report;
    const FamilyKind kinds[] = {FamilyKind::SineSeries, FamilyKind::ClampedPolynomial, FamilyKind::Bump};
    for (std::size_t f = 0; f < std::size(kinds); ++f) {
        const FamilyKind kind = kinds[f];
        TestFunctionFamily family{kind, options.coefficient_bound, options.harmonic_cutoff, options.seed + f,
                                  options.L};

        auto poin = make("poincare", kind, 0);
        auto interp = make("interpolation", kind, 0);
        std::vector<Accumulator> approx, bound;
        for (int N : options.volume_counts) {
            approx.push_back(make("fv-approximation", kind, N));
            bound.push_back(make("fv-norm-bound", kind, N));
        }

        for (const auto& phi : generate(family, options.samples)) {
            const Tabulated t(phi, panels);
            const double n2 = l2_sq(t);
            poin.add(poincare(t), n2);
            if (is_clamped(kind)) interp.add(interpolation(t), n2);
            for (std::size_t i = 0; i < options.volume_counts.size(); ++i) {
                approx[i].add(fv_approximation(t, options.volume_counts[i]), std::sqrt(n2));
                bound[i].add(fv_norm_bound(t, options.volume_counts[i]), n2);
            }
        }

        report.checks.push_back(poin.s);
        if (is_clamped(kind)) report.checks.push_back(interp.s);
        for (auto& a : approx) report.checks.push_back(a.s);
        for (auto& b : bound) report.checks.push_back(b.s);
    }

    report.worst_margin = std::numeric_limits<double>::infinity();
    for (const auto& c : report.checks) {
        report.violations += c.violations;
        report.worst_margin = std::min(report.worst_margin, c.worst_margin);
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace riser
