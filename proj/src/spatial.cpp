#include "riser/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace riser {

namespace {

void require_length(std::span<const double> f, const Grid& grid, const char* what)
{
    if (static_cast<int>(f.size()) != grid.size()) {
        throw ShapeError(std::string(what) + ": field length " + std::to_string(f.size()) +
                         " does not match grid size " + std::to_string(grid.size()));
    }
}

}  // namespace

Grid::Grid(int nodes, double length) : nodes_(nodes), length_(length), dx_(0.0)
{
    if (nodes < kMinNodes) {
        throw std::invalid_argument("grid needs at least " + std::to_string(kMinNodes) + " nodes");
    }
    if (!(length > 0.0)) {
        throw std::invalid_argument("grid length must be positive");
    }
    dx_ = length / (nodes - 1);
}

double Grid::x(int i) const
{
    // Scaled from L so that the last node is exactly L.
    return length_ * i / (nodes_ - 1);
}

VolumePartition::VolumePartition(int volumes, double length) : volumes_(volumes), length_(length)
{
    if (volumes < 1) {
        throw std::invalid_argument("volume count must be a positive integer");
    }
    if (!(length > 0.0)) {
        throw std::invalid_argument("partition length must be positive");
    }
}

double VolumePartition::lower(int k) const { return length_ * k / volumes_; }

double VolumePartition::upper(int k) const { return length_ * (k + 1) / volumes_; }

int VolumePartition::volume_of(double x) const
{
    const int k = static_cast<int>(std::floor(x * volumes_ / length_));
    return std::clamp(k, 0, volumes_ - 1);
}

FiniteVolumeMap::FiniteVolumeMap(const VolumePartition& part, const Grid& grid)
    : nodes_(grid.size()), h_(part.h()), rows_(part.size()), node_weight_(grid.size(), 0.0)
{
    if (part.size() > grid.size() - 1) {
        throw std::invalid_argument("volumes finer than grid");
    }
    if (std::abs(part.length() - grid.length()) > 1e-12 * grid.length()) {
        throw std::invalid_argument("partition and grid lengths differ");
    }
    const double L = grid.length();
    const int cells = grid.size() - 1;
    for (int i = 0; i < grid.size(); ++i) {
        const double lo = std::max(0.0, L * (2.0 * i - 1.0) / (2.0 * cells));
        const double hi = std::min(L, L * (2.0 * i + 1.0) / (2.0 * cells));
        node_weight_[i] = hi - lo;
        const int k_lo = part.volume_of(lo);
        const int k_hi = part.volume_of(hi);
        for (int k = k_lo; k <= k_hi; ++k) {
            const double overlap = std::min(hi, part.upper(k)) - std::max(lo, part.lower(k));
            if (overlap > 0.0) {
                rows_[k].push_back({i, overlap});
            }
        }
    }
}

std::vector<double> FiniteVolumeMap::averages(std::span<const double> u) const
{
    if (static_cast<int>(u.size()) != nodes_) {
        throw ShapeError("fv averages: field length does not match grid");
    }
    std::vector<double> ubar(rows_.size(), 0.0);
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        double sum = 0.0;
        for (const auto& e : rows_[k]) {
            sum += e.weight * u[e.node];
        }
        ubar[k] = sum / h_;
    }
    return ubar;
}

Field FiniteVolumeMap::inject(std::span<const double> ubar) const
{
    if (ubar.size() != rows_.size()) {
        throw ShapeError("fv inject: expected " + std::to_string(rows_.size()) + " volume values");
    }
    Field out(nodes_, 0.0);
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        for (const auto& e : rows_[k]) {
            out[e.node] += e.weight * ubar[k];
        }
    }
    for (int i = 0; i < nodes_; ++i) {
        out[i] /= node_weight_[i];
    }
    return out;
}

Field biharmonic_apply(std::span<const double> u, const Grid& grid)
{
    require_length(u, grid, "biharmonic");
    const int M = grid.size();
    const double inv = 1.0 / std::pow(grid.dx(), 4);
    auto at = [&](int j) {
        if (j < 0) return u[-j];             // u_{-1} = u_1
        if (j > M - 1) return u[2 * (M - 1) - j];  // u_M = u_{M-2}
        return u[j];
    };
    Field out(M, 0.0);
    for (int i = 1; i < M - 1; ++i) {
        out[i] = (at(i - 2) - 4.0 * at(i - 1) + 6.0 * at(i) - 4.0 * at(i + 1) + at(i + 2)) * inv;
    }
    return out;
}

Field tension_apply(std::span<const double> a_half, std::span<const double> u, const Grid& grid)
{
    require_length(u, grid, "tension");
    if (static_cast<int>(a_half.size()) != grid.size() - 1) {
        throw ShapeError("tension: expected M-1 half-node coefficients");
    }
    const int M = grid.size();
    const double inv = 1.0 / (grid.dx() * grid.dx());
    Field out(M, 0.0);
    for (int i = 1; i < M - 1; ++i) {
        out[i] = (a_half[i] * (u[i + 1] - u[i]) - a_half[i - 1] * (u[i] - u[i - 1])) * inv;
    }
    return out;
}

Field first_derivative(std::span<const double> v, const Grid& grid)
{
    require_length(v, grid, "first derivative");
    const int M = grid.size();
    const double inv = 0.5 / grid.dx();
    Field out(M, 0.0);
    for (int i = 1; i < M - 1; ++i) {
        out[i] = (v[i + 1] - v[i - 1]) * inv;
    }
    return out;
}

Field second_derivative_clamped(std::span<const double> u, const Grid& grid)
{
    require_length(u, grid, "second derivative");
    const int M = grid.size();
    const double inv = 1.0 / (grid.dx() * grid.dx());
    Field out(M, 0.0);
    out[0] = (2.0 * u[1] - 2.0 * u[0]) * inv;
    out[M - 1] = (2.0 * u[M - 2] - 2.0 * u[M - 1]) * inv;
    for (int i = 1; i < M - 1; ++i) {
        out[i] = (u[i - 1] - 2.0 * u[i] + u[i + 1]) * inv;
    }
    return out;
}

double inner_product(std::span<const double> f, std::span<const double> g, const Grid& grid)
{
    require_length(f, grid, "inner product");
    require_length(g, grid, "inner product");
    const int M = grid.size();
    double sum = 0.5 * (f[0] * g[0] + f[M - 1] * g[M - 1]);
    for (int i = 1; i < M - 1; ++i) {
        sum += f[i] * g[i];
    }
    return sum * grid.dx();
}

double norm_sq(std::span<const double> f, const Grid& grid) { return inner_product(f, f, grid); }

double tension_energy(std::span<const double> a_half, std::span<const double> u, const Grid& grid)
{
    require_length(u, grid, "tension energy");
    if (static_cast<int>(a_half.size()) != grid.size() - 1) {
        throw ShapeError("tension energy: expected M-1 half-node coefficients");
    }
    double sum = 0.0;
    for (int i = 0; i + 1 < grid.size(); ++i) {
        const double du = u[i + 1] - u[i];
        sum += a_half[i] * du * du;
    }
    return sum / grid.dx();
}

std::vector<double> fv_averages(std::span<const double> u, const VolumePartition& part, const Grid& grid)
{
    require_length(u, grid, "fv averages");
    return FiniteVolumeMap(part, grid).averages(u);
}

Field fv_inject(std::span<const double> ubar, const VolumePartition& part, const Grid& grid)
{
    return FiniteVolumeMap(part, grid).inject(ubar);
}

double first_dirichlet_eigenvalue(double length)
{
    const double r = std::numbers::pi / length;
    return r * r;
}

double discrete_dirichlet_eigenvalue(const Grid& grid)
{
    // Inverse iteration with a Thomas solve on tridiag(-1, 2, -1)/dx^2.
    const int n = grid.size() - 2;
    const double s = 1.0 / (grid.dx() * grid.dx());
    std::vector<double> x(n, 1.0), y(n), c(n), d(n);
    double lambda = 0.0;
    for (int iter = 0; iter < 500; ++iter) {
        // forward sweep
        c[0] = -s / (2.0 * s);
        d[0] = x[0] / (2.0 * s);
        for (int i = 1; i < n; ++i) {
            const double denom = 2.0 * s + s * c[i - 1];
            c[i] = -s / denom;
            d[i] = (x[i] + s * d[i - 1]) / denom;
        }
        y[n - 1] = d[n - 1];
        for (int i = n - 2; i >= 0; --i) {
            y[i] = d[i] - c[i] * y[i + 1];
        }
        double yy = 0.0, xy = 0.0;
        for (int i = 0; i < n; ++i) {
            yy += y[i] * y[i];
            xy += x[i] * y[i];
        }
        const double next = xy / yy;  // Rayleigh quotient estimate
        const double norm = std::sqrt(yy);
        for (int i = 0; i < n; ++i) {
            x[i] = y[i] / norm;
        }
        if (iter > 0 && std::abs(next - lambda) <= 1e-15 * next) {
            return next;
        }
        lambda = next;
    }
    return lambda;
}

}  // namespace riser
