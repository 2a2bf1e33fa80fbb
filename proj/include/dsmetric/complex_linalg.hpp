#pragma once

#include <complex>
#include <vector>

namespace dsmetric {

using cplx = std::complex<double>;

// Dense column-count-checked complex matrix, row major. Everything here works
// on the small systems of this library (state dimensions of a handful), so
// the algorithms favour clarity over blocking.
struct ComplexMatrix {
    int rows = 0, cols = 0;
    std::vector<cplx> a;

    ComplexMatrix() = default;
    ComplexMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    static ComplexMatrix identity(int n);

    cplx& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const cplx& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    ComplexMatrix adjoint() const;
    double frobenius() const;
    bool finite() const;

    friend ComplexMatrix operator*(const ComplexMatrix& A, const ComplexMatrix& B);
    friend ComplexMatrix operator+(const ComplexMatrix& A, const ComplexMatrix& B);
    friend ComplexMatrix operator-(const ComplexMatrix& A, const ComplexMatrix& B);
};

// determinant by LU with partial pivoting
cplx det(const ComplexMatrix& A);

// solves A X = B, square A
ComplexMatrix solve(const ComplexMatrix& A, const ComplexMatrix& B);

// lower Cholesky factor of a Hermitian positive definite matrix; throws if a
// pivot is not strictly positive
ComplexMatrix cholesky(const ComplexMatrix& H);

// all eigenvalues of a Hermitian matrix, ascending (cyclic complex Jacobi)
std::vector<double> hermitian_eigenvalues(ComplexMatrix H);

// monic characteristic polynomial coefficients, highest power first
// (Faddeev-LeVerrier)
std::vector<cplx> char_poly(const ComplexMatrix& A);

// largest singular value
double spectral_norm(const ComplexMatrix& A);

}  // namespace dsmetric
