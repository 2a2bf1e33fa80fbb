#include "dsmetric/linear_analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dsmetric {

LinearSystem ar_companion(const ARModel& model) {
    const int q = model.order();
    if (q < 1) throw std::invalid_argument("ar_companion: empty coefficient list");
    if (model.coeffs.back() == 0.0) throw std::invalid_argument("ar_companion: a_q must be nonzero");
    LinearSystem s;
    s.A = ComplexMatrix(q, q);
    for (int j = 0; j < q; ++j) s.A(0, j) = model.coeffs[static_cast<size_t>(j)];
    for (int i = 1; i < q; ++i) s.A(i, i - 1) = 1.0;
    s.C = ComplexMatrix(1, q);
    s.C(0, 0) = 1.0;
    return s;
}

std::vector<cplx> poly_roots(const std::vector<cplx>& coeffs) {
    if (coeffs.size() < 2) throw std::invalid_argument("poly_roots: degree must be >= 1");
    if (std::abs(coeffs[0]) == 0.0) throw std::invalid_argument("poly_roots: leading coefficient is zero");
    const int n = static_cast<int>(coeffs.size()) - 1;

    std::vector<cplx> monic(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) monic[i] = coeffs[i] / coeffs[0];
    auto eval = [&](cplx x) {
        cplx v = monic[0];
        for (int i = 1; i <= n; ++i) v = v * x + monic[static_cast<size_t>(i)];
        return v;
    };

    std::vector<cplx> w(static_cast<size_t>(n));
    const cplx seed{0.4, 0.9};  // customary non-real seed, not a root of unity
    cplx p = 1.0;
    for (int i = 0; i < n; ++i) {
        p *= seed;
        w[static_cast<size_t>(i)] = p;
    }

    double resid = 0.0;
    for (int iter = 0; iter < 500; ++iter) {
        resid = 0.0;
        for (int i = 0; i < n; ++i) {
            cplx denom = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != i) denom *= w[static_cast<size_t>(i)] - w[static_cast<size_t>(j)];
            const cplx pv = eval(w[static_cast<size_t>(i)]);
            resid = std::max(resid, std::abs(pv));
            if (std::abs(denom) == 0.0) {
                // collided iterates; nudge and continue
                w[static_cast<size_t>(i)] += cplx{1e-8, 1e-8};
                continue;
            }
            w[static_cast<size_t>(i)] -= pv / denom;
        }
        if (resid <= 1e-12) return w;
    }
    // final residual check after the last update round
    resid = 0.0;
    for (int i = 0; i < n; ++i) resid = std::max(resid, std::abs(eval(w[static_cast<size_t>(i)])));
    if (resid <= 1e-12) return w;
    throw std::runtime_error("poly_roots: Durand-Kerner did not converge (residual " +
                             std::to_string(resid) + " after 500 iterations)");
}

RootPartition partition_roots(const std::vector<cplx>& roots, double unit_tol) {
    if (!(unit_tol > 0.0)) throw std::invalid_argument("partition_roots: unit_tol must be positive");
    RootPartition part;
    part.unit_tol = unit_tol;
    for (const cplx& g : roots) {
        const double d = std::abs(std::abs(g) - 1.0);
        if (d <= unit_tol) {
            part.Q.push_back(g);
        } else if (d < 10.0 * unit_tol) {
            throw std::runtime_error("partition_roots: root with ||root|-1| = " + std::to_string(d) +
                                     " sits in the ambiguity band around the unit circle");
        } else if (std::abs(g) > 1.0) {
            part.P.push_back(g);
        } else {
            part.R.push_back(g);
        }
    }
    return part;
}

namespace {

void require_distinct(const std::vector<cplx>& roots, const char* which) {
    for (size_t i = 0; i < roots.size(); ++i)
        for (size_t j = i + 1; j < roots.size(); ++j)
            if (std::abs(roots[i] - roots[j]) <= 1e-8)
                throw std::invalid_argument(std::string("ar_closed_form_Aq: repeated roots in ") + which);
}

// multiset equality within tol, greedy matching
bool multiset_match(std::vector<cplx> a, std::vector<cplx> b, double tol) {
    if (a.size() != b.size()) return false;
    for (const cplx& x : a) {
        double best = tol;
        size_t pick = b.size();
        for (size_t j = 0; j < b.size(); ++j) {
            const double d = std::abs(x - b[j]);
            if (d <= best) {
                best = d;
                pick = j;
            }
        }
        if (pick == b.size()) return false;
        b.erase(b.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return true;
}

// Blaschke-type block: prod_{a,b in X}(1-a conj b) * prod_{a,b in Y}(1-a conj b)
//                      / prod_{a in X, b in Y} |1 - a conj b|^2
double blaschke_block(const std::vector<cplx>& x, const std::vector<cplx>& y) {
    cplx num = 1.0;
    for (const cplx& a : x)
        for (const cplx& b : x) num *= 1.0 - a * std::conj(b);
    for (const cplx& a : y)
        for (const cplx& b : y) num *= 1.0 - a * std::conj(b);
    double den = 1.0;
    for (const cplx& a : x)
        for (const cplx& b : y) den *= std::norm(1.0 - a * std::conj(b));
    if (den == 0.0) throw std::runtime_error("ar_closed_form_Aq: degenerate root configuration");
    return num.real() / den;
}

}  // namespace

double ar_closed_form_Aq(const std::vector<cplx>& roots1, const std::vector<cplx>& roots2,
                         double unit_tol) {
    require_distinct(roots1, "the first list");
    require_distinct(roots2, "the second list");
    const RootPartition p1 = partition_roots(roots1, unit_tol);
    const RootPartition p2 = partition_roots(roots2, unit_tol);
    if (p1.P.size() != p2.P.size() || p1.R.size() != p2.R.size()) return 0.0;
    if (!multiset_match(p1.Q, p2.Q, unit_tol)) return 0.0;
    const double a = blaschke_block(p1.P, p2.P) * blaschke_block(p1.R, p2.R);
    if (a > 1.0 + 1e-9 || a < -1e-9)
        throw std::runtime_error("ar_closed_form_Aq: value " + std::to_string(a) + " left [0,1]");
    return std::min(std::max(a, 0.0), 1.0);
}

double spectral_radius(const ComplexMatrix& A) {
    if (A.rows != A.cols) throw std::invalid_argument("spectral_radius: square matrix required");
    if (A.rows == 0) return 0.0;
    double r = 0.0;
    for (const cplx& g : poly_roots(char_poly(A))) r = std::max(r, std::abs(g));
    return r;
}

ComplexMatrix stein_solve(const ComplexMatrix& A1, const ComplexMatrix& A2, const ComplexMatrix& Qm) {
    const int q = A1.rows;
    if (A1.cols != q || A2.rows != A2.cols || Qm.rows != q || Qm.cols != A2.rows)
        throw std::invalid_argument("stein_solve: shape mismatch");
    const double rho = spectral_radius(A1) * spectral_radius(A2);
    if (!(rho < 1.0))
        throw std::invalid_argument("stein_solve: rho(A1)*rho(A2) = " + std::to_string(rho) +
                                    " must be < 1");
    const ComplexMatrix A1h = A1.adjoint();
    ComplexMatrix x = Qm;
    for (long iter = 0; iter < 1000000; ++iter) {
        const ComplexMatrix next = Qm + A1h * x * A2;
        const double delta = (next - x).frobenius();
        x = next;
        if (delta <= 1e-13 * x.frobenius()) {  // <=, so a zero fixed point terminates
            const double resid = (x - Qm - A1h * x * A2).frobenius();
            if (resid > 1e-12 * (1.0 + x.frobenius()))
                throw std::runtime_error("stein_solve: residual " + std::to_string(resid) +
                                         " above tolerance");
            return x;
        }
    }
    throw std::runtime_error("stein_solve: fixed-point iteration did not converge");
}

double SubspaceAngles::product_cos2() const {
    double p = 1.0;
    for (double c : cos2) p *= c;
    return p;
}

SubspaceAngles subspace_angle_distance(const LinearSystem& s1, const LinearSystem& s2) {
    if (s1.A.rows != s1.A.cols || s2.A.rows != s2.A.cols)
        throw std::invalid_argument("subspace_angle_distance: square state matrices required");
    for (const LinearSystem* s : {&s1, &s2}) {
        const double rho = spectral_radius(s->A);
        if (!(rho < 1.0))
            throw std::invalid_argument("subspace_angle_distance: unstable system (rho = " +
                                        std::to_string(rho) + ")");
    }

    const ComplexMatrix g11 = stein_solve(s1.A, s1.A, s1.C.adjoint() * s1.C);
    const ComplexMatrix g22 = stein_solve(s2.A, s2.A, s2.C.adjoint() * s2.C);
    const ComplexMatrix g12 = stein_solve(s1.A, s2.A, s1.C.adjoint() * s2.C);

    for (const ComplexMatrix* g : {&g11, &g22}) {
        const std::vector<double> ev = hermitian_eigenvalues(*g);
        if (!(ev.front() > 0.0) || ev.back() / ev.front() > 1e12)
            throw std::invalid_argument(
                "subspace_angle_distance: system not observable (singular or ill-conditioned "
                "observability Gramian)");
    }

    // cos^2 are the eigenvalues of G11^-1 G12 G22^-1 G21, computed as the
    // Hermitian spectrum of M M^* with M = L1^-1 G12 L2^-*
    const ComplexMatrix l1 = cholesky(g11);
    const ComplexMatrix l2 = cholesky(g22);
    const ComplexMatrix z = solve(l1, g12);                       // L1^-1 G12
    const ComplexMatrix mt = solve(l2, z.adjoint());              // L2^-1 G12^* L1^-*
    const ComplexMatrix h = mt.adjoint() * mt;                    // M M^*
    std::vector<double> cos2 = hermitian_eigenvalues(h);
    std::sort(cos2.rbegin(), cos2.rend());

    SubspaceAngles out;
    double dist = 0.0;
    for (double& c : cos2) {
        if (c > 1.0 + 1e-9 || c < -1e-9)
            throw std::runtime_error("subspace_angle_distance: cos^2 value " + std::to_string(c) +
                                     " left [0,1]");
        c = std::min(std::max(c, 0.0), 1.0);
        dist -= std::log(c);  // +inf if some angle is exactly 90 degrees
    }
    out.cos2 = std::move(cos2);
    out.distance = dist;
    return out;
}

namespace {

std::vector<cplx> observe(const LinearSystem& s, const std::vector<cplx>& x0, long t_steps,
                          std::vector<std::vector<cplx>>& ys) {
    // y_t = C A^t x0 for t = 1..t_steps (Binet-Cauchy sums start at t = 1)
    std::vector<cplx> x = x0;
    ys.assign(static_cast<size_t>(t_steps), {});
    for (long t = 1; t <= t_steps; ++t) {
        std::vector<cplx> nx(static_cast<size_t>(s.A.rows), cplx{});
        for (int i = 0; i < s.A.rows; ++i)
            for (int j = 0; j < s.A.cols; ++j) nx[static_cast<size_t>(i)] += s.A(i, j) * x[static_cast<size_t>(j)];
        x = std::move(nx);
        std::vector<cplx> y(static_cast<size_t>(s.C.rows), cplx{});
        for (int i = 0; i < s.C.rows; ++i)
            for (int j = 0; j < s.C.cols; ++j) y[static_cast<size_t>(i)] += s.C(i, j) * x[static_cast<size_t>(j)];
        ys[static_cast<size_t>(t - 1)] = std::move(y);
    }
    return x;
}

double vec_norm(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const cplx& z : v) s += std::norm(z);
    return std::sqrt(s);
}

void check_discount(const LinearSystem& s1, const LinearSystem& s2, const std::vector<cplx>& x01,
                    const std::vector<cplx>& x02, double lambda, long T, double& contraction) {
    if (static_cast<int>(x01.size()) != s1.A.rows || static_cast<int>(x02.size()) != s2.A.rows)
        throw std::invalid_argument("binet_cauchy: initial value dimension mismatch");
    if (s1.C.rows != s2.C.rows) throw std::invalid_argument("binet_cauchy: observation dimension mismatch");
    if (T < 1) throw std::invalid_argument("binet_cauchy: T must be >= 1");
    contraction = std::exp(-lambda) * spectral_norm(s1.A) * spectral_norm(s2.A);
    if (!(contraction < 1.0))
        throw std::invalid_argument("binet_cauchy: e^-lambda |A1| |A2| = " + std::to_string(contraction) +
                                    " must be < 1");
}

}  // namespace

DiscountedValue binet_cauchy_trace(const LinearSystem& s1, const LinearSystem& s2,
                                   const std::vector<cplx>& x01, const std::vector<cplx>& x02,
                                   double lambda, long T) {
    double contraction;
    check_discount(s1, s2, x01, x02, lambda, T, contraction);
    std::vector<std::vector<cplx>> y1, y2;
    observe(s1, x01, T, y1);
    observe(s2, x02, T, y2);
    cplx acc = 0.0;
    for (long t = 1; t <= T; ++t) {
        cplx inner = 0.0;
        const auto& a = y1[static_cast<size_t>(t - 1)];
        const auto& b = y2[static_cast<size_t>(t - 1)];
        for (size_t i = 0; i < a.size(); ++i) inner += std::conj(a[i]) * b[i];
        acc += std::exp(-lambda * static_cast<double>(t)) * inner;
    }
    DiscountedValue out;
    out.value = acc;
    const double lead = spectral_norm(s1.C) * spectral_norm(s2.C) * vec_norm(x01) * vec_norm(x02);
    out.tail_bound = lead * std::pow(contraction, static_cast<double>(T + 1)) / (1.0 - contraction);
    return out;
}

DiscountedValue binet_cauchy_det(const LinearSystem& s1, const LinearSystem& s2,
                                 const std::vector<cplx>& x01, const std::vector<cplx>& x02,
                                 double lambda, long T) {
    double contraction;
    check_discount(s1, s2, x01, x02, lambda, T, contraction);
    std::vector<std::vector<cplx>> y1, y2;
    observe(s1, x01, T, y1);
    observe(s2, x02, T, y2);
    const int r = s1.C.rows;
    ComplexMatrix sum(r, r);
    for (long t = 1; t <= T; ++t) {
        const double w = std::exp(-lambda * static_cast<double>(t));
        const auto& a = y1[static_cast<size_t>(t - 1)];
        const auto& b = y2[static_cast<size_t>(t - 1)];
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j)
                sum(i, j) += w * a[static_cast<size_t>(i)] * std::conj(b[static_cast<size_t>(j)]);
    }
    DiscountedValue out;
    out.value = det(sum);
    const double lead = spectral_norm(s1.C) * spectral_norm(s2.C) * vec_norm(x01) * vec_norm(x02);
    const double tail = lead * std::pow(contraction, static_cast<double>(T + 1)) / (1.0 - contraction);
    // first-order determinant perturbation bound
    const double base = sum.frobenius();
    out.tail_bound = static_cast<double>(r) * tail * std::pow(base + tail, r - 1);
    return out;
}

ClosedFormCheck angle_vs_closed_form_check(const LinearSystem& s1, const LinearSystem& s2, long t_max) {
    const SubspaceAngles angles = subspace_angle_distance(s1, s2);  // validates stability/observability
    const int q = s1.A.rows;
    if (s2.A.rows != q)
        throw std::invalid_argument("angle_vs_closed_form_check: state dimensions differ");

    std::vector<std::vector<cplx>> basis(static_cast<size_t>(q), std::vector<cplx>(static_cast<size_t>(q), cplx{}));
    for (int i = 0; i < q; ++i) basis[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1.0;
    const TrajectorySet d1 = linear_simulate(s1.A, s1.C, basis, t_max);
    const TrajectorySet d2 = linear_simulate(s2.A, s2.C, basis, t_max);

    ClosedFormCheck out;
    out.detail = estimate_Am(d1, d2, q, AngleSchedule::geometric(std::min<long>(16, t_max), t_max),
                             KernelSpec::linear(), TimeCoupling::synchronous);
    out.estimate = out.detail.final_value;
    out.closed_form = angles.product_cos2();
    out.gap = std::abs(out.estimate - out.closed_form);
    return out;
}

}  // namespace dsmetric
