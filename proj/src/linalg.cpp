#include "riser/linalg.hpp"

#include <stdexcept>
#include <string>

extern "C" {
void dgbtrf_(const int* m, const int* n, const int* kl, const int* ku, double* ab, const int* ldab, int* ipiv,
             int* info);
void dgbtrs_(const char* trans, const int* n, const int* kl, const int* ku, const int* nrhs, const double* ab,
             const int* ldab, const int* ipiv, double* b, const int* ldb, int* info);
void dgetrf_(const int* m, const int* n, double* a, const int* lda, int* ipiv, int* info);
void dgetrs_(const char* trans, const int* n, const int* nrhs, const double* a, const int* lda, const int* ipiv,
             double* b, const int* ldb, int* info);
}

namespace riser {

BandedLU::BandedLU(int n, int lower, int upper)
    : n_(n), kl_(lower), ku_(upper), ldab_(2 * lower + upper + 1),
      ab_(static_cast<std::size_t>(ldab_) * n, 0.0), ipiv_(n, 0)
{
    if (n < 1 || lower < 0 || upper < 0) throw std::invalid_argument("banded matrix: bad shape");
}

void BandedLU::set(int i, int j, double value)
{
    if (i - j > kl_ || j - i > ku_ || i < 0 || j < 0 || i >= n_ || j >= n_) {
        throw std::out_of_range("banded matrix: entry outside band");
    }
    // A(i,j) lives in row kl+ku+i-j of column j.
    ab_[static_cast<std::size_t>(kl_ + ku_ + i - j) + static_cast<std::size_t>(j) * ldab_] = value;
    factored_ = false;
}

void BandedLU::factor()
{
    int info = 0;
    dgbtrf_(&n_, &n_, &kl_, &ku_, ab_.data(), &ldab_, ipiv_.data(), &info);
    if (info != 0) {
        throw std::runtime_error("banded LU failed, info = " + std::to_string(info));
    }
    factored_ = true;
}

void BandedLU::solve(std::span<double> rhs, int nrhs) const
{
    if (!factored_) throw std::logic_error("banded matrix not factored");
    if (static_cast<int>(rhs.size()) != n_ * nrhs) throw std::invalid_argument("banded solve: rhs size");
    const char trans = 'N';
    int info = 0;
    dgbtrs_(&trans, &n_, &kl_, &ku_, &nrhs, ab_.data(), &ldab_, ipiv_.data(), rhs.data(), &n_, &info);
    if (info != 0) throw std::runtime_error("banded solve failed, info = " + std::to_string(info));
}

DenseLU::DenseLU(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0), ipiv_(n, 0) {}

void DenseLU::factor()
{
    int info = 0;
    dgetrf_(&n_, &n_, a_.data(), &n_, ipiv_.data(), &info);
    if (info != 0) throw std::runtime_error("dense LU failed, info = " + std::to_string(info));
    factored_ = true;
}

void DenseLU::solve(std::span<double> rhs) const
{
    if (!factored_) throw std::logic_error("dense matrix not factored");
    if (static_cast<int>(rhs.size()) != n_) throw std::invalid_argument("dense solve: rhs size");
    const char trans = 'N';
    const int nrhs = 1;
    int info = 0;
    dgetrs_(&trans, &n_, &nrhs, a_.data(), &n_, ipiv_.data(), rhs.data(), &n_, &info);
    if (info != 0) throw std::runtime_error("dense solve failed, info = " + std::to_string(info));
}

}  // namespace riser
