#pragma once

#include <vector>

#include "dsmetric/complex_linalg.hpp"
#include "dsmetric/metric_core.hpp"
#include "dsmetric/trajectories.hpp"

namespace dsmetric {

// (state transition, observation) pair of a linear system
struct LinearSystem {
    ComplexMatrix A;  // q x q
    ComplexMatrix C;  // r x q
};

// roots of the AR/characteristic equation split against the unit circle
struct RootPartition {
    std::vector<cplx> P;  // |root| > 1
    std::vector<cplx> Q;  // |root| = 1 (within unit_tol)
    std::vector<cplx> R;  // |root| < 1
    double unit_tol = 1e-9;
};

// companion realization: first row a_1..a_q, unit subdiagonal, C = e_1^T
LinearSystem ar_companion(const ARModel& model);

// all complex roots by Durand-Kerner iteration; coefficients highest power
// first, leading coefficient nonzero
std::vector<cplx> poly_roots(const std::vector<cplx>& coeffs);

// classification against |root| = 1 +- unit_tol; roots in the ambiguity band
// (unit_tol, 10*unit_tol) away from the circle are an error, not a guess
RootPartition partition_roots(const std::vector<cplx>& roots, double unit_tol = 1e-9);

// closed-form A_q of two AR root lists: the Blaschke-type product over the P
// and R sets when |P1|=|P2|, |R1|=|R2| and Q1=Q2 (multisets within unit_tol),
// zero otherwise; roots within each list must be distinct
double ar_closed_form_Aq(const std::vector<cplx>& roots1, const std::vector<cplx>& roots2,
                         double unit_tol = 1e-9);

// unique solution of X = Qm + A1^* X A2 by fixed-point iteration
// (requires rho(A1) * rho(A2) < 1)
ComplexMatrix stein_solve(const ComplexMatrix& A1, const ComplexMatrix& A2, const ComplexMatrix& Qm);

double spectral_radius(const ComplexMatrix& A);

struct SubspaceAngles {
    double distance = 0.0;      // -sum log cos^2(theta_i)
    std::vector<double> cos2;   // descending
    double product_cos2() const;
};

// subspace angles between the observability ranges via Stein-equation
// Gramians; systems must be stable (rho < 1) and observable
SubspaceAngles subspace_angle_distance(const LinearSystem& s1, const LinearSystem& s2);

struct DiscountedValue {
    cplx value{0.0, 0.0};
    double tail_bound = 0.0;  // geometric bound on the truncated tail
};

// trace kernel  sum_{t=1..T} e^{-lambda t} <y1_t, y2_t>  and determinant
// kernel det( sum_{t=1..T} e^{-lambda t} y1_t y2_t^* ); both need
// e^{-lambda} |A1| |A2| < 1
DiscountedValue binet_cauchy_trace(const LinearSystem& s1, const LinearSystem& s2,
                                   const std::vector<cplx>& x01, const std::vector<cplx>& x02,
                                   double lambda, long T);
DiscountedValue binet_cauchy_det(const LinearSystem& s1, const LinearSystem& s2,
                                 const std::vector<cplx>& x01, const std::vector<cplx>& x02,
                                 double lambda, long T);

struct ClosedFormCheck {
    double estimate = 0.0;     // A_q from trajectories at the given horizon
    double closed_form = 0.0;  // product of cos^2 subspace angles
    double gap = 0.0;
    AngleResult detail;
};

// estimates A_q from trajectories seeded with the standard basis (N = q) and
// compares against the subspace-angle product; synchronous coupling, which is
// the form that identity holds for
ClosedFormCheck angle_vs_closed_form_check(const LinearSystem& s1, const LinearSystem& s2, long t_max);

}  // namespace dsmetric
