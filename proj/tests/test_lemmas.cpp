#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "riser/lemmas.hpp"

using namespace riser;
using std::numbers::pi;

TEST_CASE("test functions and their derivatives")
{
    const auto s = TestFunction::sine_series({0.0, 1.0}, 1.0);
    const auto j = s(0.125);
    CHECK(j.f == doctest::Approx(std::sin(pi / 4)));
    CHECK(j.fx == doctest::Approx(2 * pi * std::cos(pi / 4)));
    CHECK(j.fxx == doctest::Approx(-4 * pi * pi * std::sin(pi / 4)));

    // s^2 (1-s)^2 on [0, 2]: f(1) = 1/16, f'(1) = 0, f''(1) = (2 - 12 s + 12 s^2) / L^2 = -1/4.
    const auto p = TestFunction::clamped_polynomial({1.0}, 2.0);
    CHECK(p(1.0).f == doctest::Approx(1.0 / 16.0));
    CHECK(p(1.0).fx == doctest::Approx(0.0));
    CHECK(p(1.0).fxx == doctest::Approx(-0.25));
    CHECK(p(0.0).f == 0.0);
    CHECK(p(0.0).fx == 0.0);

    const auto b = TestFunction::bumps({{2.0, 0.5, 0.25}}, 1.0);
    CHECK(b(0.5).f == doctest::Approx(2.0));
    CHECK(b(0.9).f == 0.0);

    CHECK(is_clamped(FamilyKind::Bump));
    CHECK_FALSE(is_clamped(FamilyKind::SineSeries));
    CHECK(parse_family(to_string(FamilyKind::ClampedPolynomial)) == FamilyKind::ClampedPolynomial);
    CHECK_THROWS(parse_family("gaussian"));
}

TEST_CASE("inequality sides on closed forms")
{
    const auto phi = TestFunction::sine_series({1.0}, 1.0);

    SUBCASE("volume averages of sin(pi x)")
    {
        const auto avg = volume_averages(phi, 2);
        CHECK(avg[0] == doctest::Approx(2 / pi).epsilon(1e-12));
        CHECK(avg[1] == doctest::Approx(2 / pi).epsilon(1e-12));
    }
    SUBCASE("finite-volume approximation with four volumes")
    {
        // ||phi - P phi||^2 = ||phi||^2 - h sum avg_k^2, avg_k = (cos(k pi/4) - cos((k+1) pi/4)) / (pi h).
        const double h = 0.25;
        double proj = 0.0;
        for (int k = 0; k < 4; ++k) {
            const double avg = (std::cos(k * pi / 4) - std::cos((k + 1) * pi / 4)) / (pi * h);
            proj += h * avg * avg;
        }
        const auto sides = fv_approximation_sides(phi, 4);
        CHECK(sides.lhs == doctest::Approx(std::sqrt(0.5 - proj)).epsilon(1e-10));
        CHECK(sides.rhs == doctest::Approx(h * pi / std::sqrt(2.0)).epsilon(1e-12));
        CHECK(sides.lhs < 0.5554);
    }
    SUBCASE("norm bound with two volumes")
    {
        const auto sides = fv_norm_bound_sides(phi, 2);
        CHECK(sides.lhs == doctest::Approx(0.5));
        CHECK(sides.rhs == doctest::Approx(4 / (pi * pi) + 0.25 * pi * pi / 2).epsilon(1e-12));
        CHECK(sides.rhs == doctest::Approx(1.6390).epsilon(1e-4));
    }
    SUBCASE("Poincare is sharp on the first mode")
    {
        const auto sides = poincare_sides(phi);
        CHECK(sides.lhs / sides.rhs == doctest::Approx(1.0).epsilon(1e-12));
        const auto second = poincare_sides(TestFunction::sine_series({0.0, 1.0}, 1.0));
        CHECK(second.lhs / second.rhs == doctest::Approx(0.25).epsilon(1e-12));
    }
    SUBCASE("interpolation on the clamped quartic")
    {
        // ||f'||^2 = 2/105, ||f|| = 1/sqrt(630), ||f''|| = sqrt(4/5).
        const auto sides = interpolation_sides(TestFunction::clamped_polynomial({1.0}, 1.0));
        CHECK(sides.lhs == doctest::Approx(2.0 / 105.0).epsilon(1e-12));
        CHECK(sides.rhs == doctest::Approx(std::sqrt(4.0 / 5.0 / 630.0)).epsilon(1e-12));
        CHECK(sides.lhs < sides.rhs);
    }
    SUBCASE("constants are reproduced exactly")
    {
        const auto c = TestFunction::constant(1.7, 1.0);
        CHECK(fv_approximation_sides(c, 3).lhs == doctest::Approx(0.0).scale(1.0));
    }
}

TEST_CASE("family checks")
{
    TestFunctionFamily fam;
    fam.kind = FamilyKind::ClampedPolynomial;
    fam.harmonic_cutoff = 6;
    fam.seed = 42;

    SUBCASE("generation is deterministic")
    {
        const auto a = generate(fam, 5);
        const auto b = generate(fam, 5);
        for (int i = 0; i < 5; ++i) CHECK(a[i](0.3).f == b[i](0.3).f);
        fam.seed = 43;
        CHECK(generate(fam, 1)[0](0.3).f != a[0](0.3).f);
    }
    SUBCASE("no violations on modest samples")
    {
        for (int N : {1, 4}) {
            CHECK(check_fv_approximation(fam, N, 50).passed());
            CHECK(check_fv_norm_bound(fam, N, 50).passed());
        }
        CHECK(check_poincare(fam, 50).passed());
        const auto interp = check_interpolation(fam, 50);
        CHECK(interp.passed());
        CHECK(interp.samples == 50);
        CHECK(interp.worst_ratio <= 1.0);
        CHECK(interp.worst_margin >= 0.0);
    }
    fam.kind = FamilyKind::SineSeries;
    CHECK_THROWS_AS(check_interpolation(fam, 10), std::invalid_argument);
}

TEST_CASE("suite report")
{
    LemmaSuiteOptions opt;
    opt.samples = 20;
    opt.volume_counts = {1, 3};
    const auto r = run_lemma_suite(opt);
    CHECK(r.passed());
    CHECK(r.violations == 0);
    // Three families for the two volume inequalities, Poincare, and two clamped families for interpolation.
    CHECK(r.checks.size() == 3 * 2 * 2 + 3 + 2);
    for (const auto& c : r.checks) CHECK(c.samples == 20);
}
