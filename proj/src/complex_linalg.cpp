#include "dsmetric/complex_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dsmetric {

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix R(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) R(j, i) = std::conj((*this)(i, j));
    return R;
}

double ComplexMatrix::frobenius() const {
    double s = 0.0;
    for (const cplx& v : a) s += std::norm(v);
    return std::sqrt(s);
}

bool ComplexMatrix::finite() const {
    for (const cplx& v : a)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

ComplexMatrix operator*(const ComplexMatrix& A, const ComplexMatrix& B) {
    if (A.cols != B.rows) throw std::invalid_argument("matrix product: shape mismatch");
    ComplexMatrix C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            const cplx aik = A(i, k);
            if (aik == cplx{}) continue;
            for (int j = 0; j < B.cols; ++j) C(i, j) += aik * B(k, j);
        }
    return C;
}

ComplexMatrix operator+(const ComplexMatrix& A, const ComplexMatrix& B) {
    if (A.rows != B.rows || A.cols != B.cols) throw std::invalid_argument("matrix sum: shape mismatch");
    ComplexMatrix C = A;
    for (size_t i = 0; i < C.a.size(); ++i) C.a[i] += B.a[i];
    return C;
}

ComplexMatrix operator-(const ComplexMatrix& A, const ComplexMatrix& B) {
    if (A.rows != B.rows || A.cols != B.cols) throw std::invalid_argument("matrix diff: shape mismatch");
    ComplexMatrix C = A;
    for (size_t i = 0; i < C.a.size(); ++i) C.a[i] -= B.a[i];
    return C;
}

namespace {

// in-place LU with partial pivoting; returns permutation sign, 0 if singular
int lu_decompose(ComplexMatrix& M, std::vector<int>& piv) {
    const int n = M.rows;
    piv.resize(n);
    for (int i = 0; i < n; ++i) piv[i] = i;
    int sign = 1;
    for (int k = 0; k < n; ++k) {
        int imax = k;
        double amax = std::abs(M(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::abs(M(i, k));
            if (v > amax) { amax = v; imax = i; }
        }
        if (amax == 0.0) return 0;
        if (imax != k) {
            for (int j = 0; j < n; ++j) std::swap(M(k, j), M(imax, j));
            std::swap(piv[k], piv[imax]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            M(i, k) /= M(k, k);
            const cplx lik = M(i, k);
            for (int j = k + 1; j < n; ++j) M(i, j) -= lik * M(k, j);
        }
    }
    return sign;
}

}  // namespace

cplx det(const ComplexMatrix& A) {
    if (A.rows != A.cols) throw std::invalid_argument("det: square matrix required");
    if (A.rows == 0) return 1.0;
    ComplexMatrix M = A;
    std::vector<int> piv;
    const int sign = lu_decompose(M, piv);
    if (sign == 0) return 0.0;
    cplx d = static_cast<double>(sign);
    for (int i = 0; i < M.rows; ++i) d *= M(i, i);
    return d;
}

ComplexMatrix solve(const ComplexMatrix& A, const ComplexMatrix& B) {
    if (A.rows != A.cols) throw std::invalid_argument("solve: square matrix required");
    if (A.rows != B.rows) throw std::invalid_argument("solve: shape mismatch");
    ComplexMatrix M = A;
    std::vector<int> piv;
    if (lu_decompose(M, piv) == 0) throw std::runtime_error("solve: singular matrix");
    const int n = A.rows, m = B.cols;
    ComplexMatrix X(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) X(i, j) = B(piv[i], j);
    for (int k = 0; k < n; ++k)  // forward, unit lower
        for (int i = k + 1; i < n; ++i) {
            const cplx lik = M(i, k);
            if (lik == cplx{}) continue;
            for (int j = 0; j < m; ++j) X(i, j) -= lik * X(k, j);
        }
    for (int k = n - 1; k >= 0; --k) {  // backward
        for (int j = 0; j < m; ++j) X(k, j) /= M(k, k);
        for (int i = 0; i < k; ++i) {
            const cplx uik = M(i, k);
            if (uik == cplx{}) continue;
            for (int j = 0; j < m; ++j) X(i, j) -= uik * X(k, j);
        }
    }
    return X;
}

ComplexMatrix cholesky(const ComplexMatrix& H) {
    if (H.rows != H.cols) throw std::invalid_argument("cholesky: square matrix required");
    const int n = H.rows;
    ComplexMatrix L(n, n);
    for (int j = 0; j < n; ++j) {
        double d = H(j, j).real();
        for (int k = 0; k < j; ++k) d -= std::norm(L(j, k));
        if (!(d > 0.0)) throw std::runtime_error("cholesky: matrix not positive definite");
        L(j, j) = std::sqrt(d);
        for (int i = j + 1; i < n; ++i) {
            cplx s = H(i, j);
            for (int k = 0; k < j; ++k) s -= L(i, k) * std::conj(L(j, k));
            L(i, j) = s / L(j, j).real();
        }
    }
    return L;
}

std::vector<double> hermitian_eigenvalues(ComplexMatrix H) {
    if (H.rows != H.cols) throw std::invalid_argument("hermitian_eigenvalues: square matrix required");
    const int n = H.rows;
    if (n == 0) return {};
    const double scale = H.frobenius();
    const double tol = 1e-14 * (scale > 0 ? scale : 1.0);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::norm(H(p, q));
        if (std::sqrt(off) < tol) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                const cplx hpq = H(p, q);
                const double apq = std::abs(hpq);
                if (apq <= tol / n) continue;
                const cplx phase = hpq / apq;  // e^{i arg}
                const double app = H(p, p).real(), aqq = H(q, q).real();
                // rotation R = [[c, -conj(s)],[s, c]] on columns (p,q); the
                // smaller root of t^2 - 2*tau*t - 1 = 0 zeroes H'(p,q)
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau == 0.0) ? 1.0
                                              : -(tau > 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const cplx s = t * c * std::conj(phase);
                for (int k = 0; k < n; ++k) {
                    const cplx hk_p = H(k, p), hk_q = H(k, q);
                    H(k, p) = c * hk_p + s * hk_q;
                    H(k, q) = -std::conj(s) * hk_p + c * hk_q;
                }
                for (int k = 0; k < n; ++k) {
                    const cplx hp_k = H(p, k), hq_k = H(q, k);
                    H(p, k) = c * hp_k + std::conj(s) * hq_k;
                    H(q, k) = -s * hp_k + c * hq_k;
                }
                H(p, q) = 0.0;
                H(q, p) = 0.0;
            }
    }
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = H(i, i).real();
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::vector<cplx> char_poly(const ComplexMatrix& A) {
    if (A.rows != A.cols) throw std::invalid_argument("char_poly: square matrix required");
    const int n = A.rows;
    std::vector<cplx> c(static_cast<size_t>(n) + 1);
    c[0] = 1.0;
    ComplexMatrix M = A;
    for (int k = 1; k <= n; ++k) {
        cplx tr = 0.0;
        for (int i = 0; i < n; ++i) tr += M(i, i);
        c[k] = -tr / static_cast<double>(k);
        if (k == n) break;
        for (int i = 0; i < n; ++i) M(i, i) += c[k];
        M = A * M;
    }
    return c;
}

double spectral_norm(const ComplexMatrix& A) {
    const ComplexMatrix H = A.adjoint() * A;
    const std::vector<double> ev = hermitian_eigenvalues(H);
    const double top = ev.empty() ? 0.0 : ev.back();
    return std::sqrt(std::max(0.0, top));
}

}  // namespace dsmetric
