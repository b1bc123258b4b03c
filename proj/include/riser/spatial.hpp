#pragma once

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace riser {

using Field = std::vector<double>;

/// Thrown when operands of a spatial operator do not match the grid.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Uniform node grid x_i = i*dx on [0, L], i = 0..M-1.
class Grid {
public:
    static constexpr int kMinNodes = 7;

    Grid(int nodes, double length);

    int size() const { return nodes_; }
    double length() const { return length_; }
    double dx() const { return dx_; }
    double x(int i) const;

private:
    int nodes_;
    double length_;
    double dx_;
};

/// Partition of [0, L] into N equal volumes J_k = [(k-1)h, kh), the last one closed.
class VolumePartition {
public:
    VolumePartition(int volumes, double length);

    int size() const { return volumes_; }
    double length() const { return length_; }
    double h() const { return length_ / volumes_; }
    double lower(int k) const;  // 0-based volume index
    double upper(int k) const;
    int volume_of(double x) const;

private:
    int volumes_;
    double length_;
};

/// Sparse quadrature weights tying grid nodes to finite volumes.
///
/// Node i carries the trapezoid weight W_i = |[x_i - dx/2, x_i + dx/2] ∩ [0, L]|.
/// That dual cell is split between the volumes it overlaps in proportion to
/// the overlap length, q_{ki}. Averages are (1/h) sum_i q_{ki} u_i and the
/// injection gives node i the value sum_k (q_{ki}/W_i) ubar_k, which makes
/// inject the adjoint of average under the trapezoid inner product.
class FiniteVolumeMap {
public:
    struct Entry {
        int node;
        double weight;
    };

    FiniteVolumeMap(const VolumePartition& part, const Grid& grid);

    int volumes() const { return static_cast<int>(rows_.size()); }
    int nodes() const { return nodes_; }
    double h() const { return h_; }
    const std::vector<Entry>& row(int k) const { return rows_[k]; }

    std::vector<double> averages(std::span<const double> u) const;
    Field inject(std::span<const double> ubar) const;

private:
    int nodes_;
    double h_;
    std::vector<std::vector<Entry>> rows_;
    std::vector<double> node_weight_;
};

// Discrete operators. Boundary nodes are Dirichlet rows and return 0.

/// Fourth difference with clamped ghosts u_{-1} = u_1, u_M = u_{M-2}.
Field biharmonic_apply(std::span<const double> u, const Grid& grid);

/// Flux form (a_{i+1/2}(u_{i+1}-u_i) - a_{i-1/2}(u_i-u_{i-1})) / dx^2.
Field tension_apply(std::span<const double> a_half, std::span<const double> u, const Grid& grid);

/// Central difference (v_{i+1} - v_{i-1}) / (2dx).
Field first_derivative(std::span<const double> v, const Grid& grid);

/// Second difference with clamped ghosts, defined on every node
/// (boundary value 2u_1/dx^2). Its trapezoid norm is ||u_xx||^2 and
/// biharmonic_apply is this operator applied twice.
Field second_derivative_clamped(std::span<const double> u, const Grid& grid);

/// Composite trapezoid approximation of (f, g) on [0, L].
double inner_product(std::span<const double> f, std::span<const double> g, const Grid& grid);
double norm_sq(std::span<const double> f, const Grid& grid);

/// Midpoint sum of int a u_x^2 matching the quadratic form of tension_apply.
double tension_energy(std::span<const double> a_half, std::span<const double> u, const Grid& grid);

std::vector<double> fv_averages(std::span<const double> u, const VolumePartition& part, const Grid& grid);
Field fv_inject(std::span<const double> ubar, const VolumePartition& part, const Grid& grid);

/// lambda_1 = (pi/L)^2 of -d^2/dx^2 with Dirichlet conditions.
double first_dirichlet_eigenvalue(double length);

/// Smallest eigenvalue of the (M-2)x(M-2) Dirichlet second-difference matrix,
/// found by inverse iteration. Used for convergence checks only.
double discrete_dirichlet_eigenvalue(const Grid& grid);

}  // namespace riser
