#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "riser/spatial.hpp"

using namespace riser;
using std::numbers::pi;

namespace {

Field sample(const Grid& g, auto&& f)
{
    Field u(g.size());
    for (int i = 0; i < g.size(); ++i) u[i] = f(g.x(i));
    return u;
}

/// Random field with zero end values (and zero ghost slope by construction of the stencil).
Field random_clamped(const Grid& g, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Field u(g.size());
    for (int i = 1; i + 1 < g.size(); ++i) u[i] = d(rng);
    return u;
}

}  // namespace

TEST_CASE("grid and partition geometry")
{
    const Grid g(11, 2.0);
    CHECK(g.dx() == doctest::Approx(0.2));
    CHECK(g.x(10) == 2.0);
    CHECK_THROWS_AS(Grid(6, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Grid(7, 0.0), std::invalid_argument);

    const VolumePartition part(3, 1.0);
    CHECK(part.h() * part.size() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(part.volume_of(0.0) == 0);
    CHECK(part.volume_of(1.0) == 2);  // last volume closed at L
    CHECK(part.volume_of(0.5) == 1);
}

TEST_CASE("biharmonic")
{
    SUBCASE("zero field")
    {
        const Grid g(9, 1.0);
        for (double v : biharmonic_apply(Field(9, 0.0), g)) CHECK(v == 0.0);
    }
    SUBCASE("quartic x^2(L-x)^2 gives 24 away from the ghost nodes")
    {
        for (int M : {9, 21, 101}) {
            const Grid g(M, 1.0);
            const auto u = sample(g, [](double x) { return x * x * (1 - x) * (1 - x); });
            const auto b = biharmonic_apply(u, g);
            CHECK(b.front() == 0.0);
            CHECK(b.back() == 0.0);
            for (int i = 2; i <= M - 3; ++i) CHECK(b[i] == doctest::Approx(24.0).epsilon(1e-9));
        }
    }
    SUBCASE("second-order convergence on a smooth clamped function")
    {
        // u = (1 - cos(2 pi x / L)) / 2 has u_x = 0 at both ends; u_xxxx = -(2pi/L)^4 cos(2 pi x/L) / 2.
        const double L = 1.0;
        auto err = [&](int M) {
            const Grid g(M, L);
            const auto u = sample(g, [&](double x) { return 0.5 * (1 - std::cos(2 * pi * x / L)); });
            const auto b = biharmonic_apply(u, g);
            double e = 0.0;
            for (int i = 1; i + 1 < M; ++i) {
                const double exact = -0.5 * std::pow(2 * pi / L, 4) * std::cos(2 * pi * g.x(i) / L);
                e = std::max(e, std::abs(b[i] - exact));
            }
            return e;
        };
        const double order = std::log2(err(41) / err(81));
        CHECK(order == doctest::Approx(2.0).epsilon(0.1));
    }
    SUBCASE("symmetric and positive")
    {
        const Grid g(31, 1.7);
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 20; ++trial) {
            const auto u = random_clamped(g, rng);
            const auto w = random_clamped(g, rng);
            const double uw = inner_product(biharmonic_apply(u, g), w, g);
            const double wu = inner_product(u, biharmonic_apply(w, g), g);
            CHECK(uw == doctest::Approx(wu).epsilon(1e-12));
            CHECK(inner_product(biharmonic_apply(u, g), u, g) > 0.0);
        }
    }
    CHECK_THROWS_AS(biharmonic_apply(Field(8, 0.0), Grid(9, 1.0)), ShapeError);
}

TEST_CASE("tension operator")
{
    const Grid g(41, 1.0);
    SUBCASE("constant coefficient factors out")
    {
        const auto u = sample(g, [](double x) { return std::sin(pi * x) * x; });
        const auto one = tension_apply(Field(40, 1.0), u, g);
        const auto three = tension_apply(Field(40, 3.0), u, g);
        for (int i = 0; i < g.size(); ++i) CHECK(three[i] == doctest::Approx(3.0 * one[i]));
    }
    SUBCASE("approximates u_xx at second order")
    {
        auto err = [](int M) {
            const Grid grid(M, 1.0);
            const auto u = sample(grid, [](double x) { return std::sin(pi * x); });
            const auto t = tension_apply(Field(M - 1, 1.0), u, grid);
            double e = 0.0;
            for (int i = 1; i + 1 < M; ++i) e = std::max(e, std::abs(t[i] + pi * pi * std::sin(pi * grid.x(i))));
            return e;
        };
        CHECK(std::log2(err(41) / err(81)) == doctest::Approx(2.0).epsilon(0.05));
    }
    SUBCASE("symmetric for variable coefficient")
    {
        Field a(40);
        for (int i = 0; i < 40; ++i) a[i] = 1.0 + 0.5 * std::cos(i * 0.3);
        std::mt19937_64 rng(3);
        const auto u = random_clamped(g, rng);
        const auto w = random_clamped(g, rng);
        CHECK(inner_product(tension_apply(a, u, g), w, g) ==
              doctest::Approx(inner_product(tension_apply(a, w, g), u, g)).epsilon(1e-12));
        // The energy is the negative of the quadratic form.
        CHECK(tension_energy(a, u, g) == doctest::Approx(-inner_product(tension_apply(a, u, g), u, g)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(tension_apply(Field(41, 1.0), Field(41, 0.0), g), ShapeError);
}

TEST_CASE("first derivative")
{
    const Grid g(21, 1.0);
    const auto parabola = sample(g, [](double x) { return x * (1 - x); });
    CHECK(first_derivative(parabola, g)[10] == doctest::Approx(0.0));
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const auto v = random_clamped(g, rng);
        CHECK(std::abs(inner_product(first_derivative(v, g), v, g)) < 1e-13);
    }
}

TEST_CASE("trapezoid inner product")
{
    const Grid g(101, 1.0);
    const Field one(101, 1.0);
    CHECK(inner_product(one, one, g) == doctest::Approx(1.0));
    const auto s1 = sample(g, [](double x) { return std::sin(pi * x); });
    const auto s2 = sample(g, [](double x) { return std::sin(2 * pi * x); });
    CHECK(std::abs(inner_product(s1, s1, g) - 0.5) < 1e-4);
    CHECK(std::abs(inner_product(s1, s2, g)) < 1e-12);
}

TEST_CASE("finite-volume averages and injection")
{
    SUBCASE("means of x on two volumes")
    {
        const Grid g(11, 1.0);
        const auto avg = fv_averages(sample(g, [](double x) { return x; }), VolumePartition(2, 1.0), g);
        CHECK(avg[0] == doctest::Approx(0.25));
        CHECK(avg[1] == doctest::Approx(0.75));
    }
    SUBCASE("constants are reproduced on unaligned grids")
    {
        const Grid g(23, 1.3);
        for (double a : fv_averages(Field(23, 2.5), VolumePartition(5, 1.3), g)) CHECK(a == doctest::Approx(2.5));
    }
    SUBCASE("sin(2 pi x) on two volumes approaches +-2/pi")
    {
        const Grid g(2001, 1.0);
        const auto avg = fv_averages(sample(g, [](double x) { return std::sin(2 * pi * x); }), VolumePartition(2, 1.0), g);
        // int_0^{1/2} sin(2 pi x) dx = 1/pi, divided by h = 1/2.
        CHECK(avg[0] == doctest::Approx(2 / pi).epsilon(1e-6));
        CHECK(avg[1] == doctest::Approx(-2 / pi).epsilon(1e-6));
    }
    SUBCASE("injection")
    {
        const Grid g(11, 1.0);
        const VolumePartition part(2, 1.0);
        for (double v : fv_inject(std::vector<double>{0.0, 0.0}, part, g)) CHECK(v == 0.0);
        for (double v : fv_inject(std::vector<double>{3.0}, VolumePartition(1, 1.0), g)) CHECK(v == doctest::Approx(3.0));
        const auto f = fv_inject(std::vector<double>{1.0, 5.0}, part, g);
        CHECK(f[2] == 1.0);
        CHECK(f[5] == doctest::Approx(3.0));  // node on the interior boundary takes the mean
        CHECK(f[8] == 5.0);
    }
    SUBCASE("round trip when volume boundaries fall on half-nodes")
    {
        const Grid g(22, 1.0);  // 21 cells, boundary at 10.5 cells
        const VolumePartition part(2, 1.0);
        const std::vector<double> w{0.3, -1.2};
        const auto back = fv_averages(fv_inject(w, part, g), part, g);
        for (int k = 0; k < 2; ++k) CHECK(back[k] == doctest::Approx(w[k]).epsilon(1e-14));
    }
    SUBCASE("averaging is the adjoint of injection")
    {
        const Grid g(37, 2.0);
        const VolumePartition part(5, 2.0);
        std::mt19937_64 rng(5);
        const auto u = random_clamped(g, rng);
        const std::vector<double> w{1.0, -2.0, 0.5, 0.25, 3.0};
        const auto avg = fv_averages(u, part, g);
        double lhs = 0.0;
        for (int k = 0; k < 5; ++k) lhs += part.h() * avg[k] * w[k];
        CHECK(lhs == doctest::Approx(inner_product(fv_inject(w, part, g), u, g)).epsilon(1e-13));
    }
    CHECK_THROWS_WITH_AS(FiniteVolumeMap(VolumePartition(11, 1.0), Grid(11, 1.0)), "volumes finer than grid",
                         std::invalid_argument);
    CHECK_THROWS_AS(fv_inject(std::vector<double>{1.0}, VolumePartition(2, 1.0), Grid(11, 1.0)), ShapeError);
}

TEST_CASE("Dirichlet eigenvalue")
{
    CHECK(first_dirichlet_eigenvalue(pi) == doctest::Approx(1.0));
    CHECK(first_dirichlet_eigenvalue(1.0) == doctest::Approx(pi * pi));
    // The discrete eigenvalue is (4/dx^2) sin^2(pi dx / 2L); compare against that closed form.
    for (int M : {11, 41}) {
        const Grid g(M, 1.0);
        const double exact = 4.0 / (g.dx() * g.dx()) * std::pow(std::sin(pi * g.dx() / 2.0), 2);
        CHECK(discrete_dirichlet_eigenvalue(g) == doctest::Approx(exact).epsilon(1e-12));
    }
}
