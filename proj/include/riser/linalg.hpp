#pragma once

#include <span>
#include <vector>

namespace riser {

/// LU factorization of a general banded matrix (LAPACK dgbtrf storage).
class BandedLU {
public:
    BandedLU(int n, int lower, int upper);

    int size() const { return n_; }
    /// Sets A(i, j); |i - j| must lie within the band. Call before factor().
    void set(int i, int j, double value);
    void factor();
    /// Solves A X = B in place for nrhs column-major right-hand sides.
    void solve(std::span<double> rhs, int nrhs = 1) const;

private:
    int n_, kl_, ku_, ldab_;
    std::vector<double> ab_;
    std::vector<int> ipiv_;
    bool factored_ = false;
};

/// Dense LU with partial pivoting (LAPACK dgetrf).
class DenseLU {
public:
    explicit DenseLU(int n);

    int size() const { return n_; }
    double& operator()(int i, int j) { return a_[i + static_cast<std::size_t>(j) * n_]; }
    void factor();
    void solve(std::span<double> rhs) const;

private:
    int n_;
    std::vector<double> a_;
    std::vector<int> ipiv_;
    bool factored_ = false;
};

}  // namespace riser
