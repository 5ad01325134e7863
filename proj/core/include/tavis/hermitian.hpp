#pragma once

// Dense complex matrices of dimension <= 4 and a cyclic Jacobi eigensolver
// for the Hermitian case.

#include <array>
#include <complex>
#include <cstddef>

namespace tavis {

using cplx = std::complex<double>;

struct SmallMatrix {
    static constexpr int kMaxDim = 4;

    int dim = 0;
    std::array<cplx, kMaxDim * kMaxDim> m{};

    SmallMatrix() = default;
    explicit SmallMatrix(int d);

    static SmallMatrix identity(int d);

    cplx& operator()(int i, int j) { return m[static_cast<std::size_t>(i * kMaxDim + j)]; }
    const cplx& operator()(int i, int j) const {
        return m[static_cast<std::size_t>(i * kMaxDim + j)];
    }

    SmallMatrix adjoint() const;
    double frobenius_norm() const;
    // sqrt of the summed |a_ij|^2 over i != j.
    double off_diagonal_norm() const;
    // max |A - A^dagger|.
    double hermiticity_error() const;
    // max |A^dagger A - 1|.
    double unitarity_error() const;
};

SmallMatrix operator*(const SmallMatrix& a, const SmallMatrix& b);

struct EigenSystem {
    std::array<double, SmallMatrix::kMaxDim> values{};
    SmallMatrix vectors;  // columns are eigenvectors
};

// Cyclic complex Jacobi iteration. Stops once the off-diagonal norm drops
// below tol * ||A||_F. Eigenvalues are sorted ascending.
EigenSystem jacobi_eigensolve(const SmallMatrix& a, double tol = 1e-14);

}  // namespace tavis
