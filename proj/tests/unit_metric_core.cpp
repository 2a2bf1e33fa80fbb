#include <doctest.h>

#include <cmath>

#include "dsmetric/complex_linalg.hpp"
#include "dsmetric/metric_core.hpp"
#include "test_util.hpp"

using namespace dsmetric;
using testutil::close_rel;
using testutil::random_set;
using testutil::scalar_set;

TEST_CASE("K_m^T hand-computed values") {
    const KernelSpec lin = KernelSpec::linear();

    // m=1, N=1, D1=D2=(1,2): 1*1 + 2*2 = 5
    const TrajectorySet d = scalar_set({{1.0, 2.0}});
    CHECK(kernel_KmT(d, d, 1, 2, lin).real() == doctest::Approx(5.0));

    // m=1, D1=(1,2), D2=(1,3): 1 + 6 = 7
    const TrajectorySet d2 = scalar_set({{1.0, 3.0}});
    CHECK(kernel_KmT(d, d2, 1, 2, lin).real() == doctest::Approx(7.0));

    // m=2, N=2, T=1, orthonormal t=0 observables: det I = 1
    TrajectorySet basis;
    basis.name = "basis";
    basis.sequences = {{Observable(std::vector<cplx>{1.0, 0.0})},
                       {Observable(std::vector<cplx>{0.0, 1.0})}};
    CHECK(kernel_KmT(basis, basis, 2, 1, lin).real() == doctest::Approx(1.0));

    // szego singleton: [[1/(1-0.81)]]
    const KernelSpec sz = KernelSpec::szego();
    TrajectorySet z9;
    z9.name = "z9";
    z9.sequences = {{Observable(cplx{0.9, 0.0})}};
    CHECK(kernel_KmT(z9, z9, 1, 1, sz).real() == doctest::Approx(5.263157894736842));
}

TEST_CASE("K_m^T precondition errors") {
    const KernelSpec lin = KernelSpec::linear();
    const TrajectorySet a = scalar_set({{1.0, 2.0}});
    const TrajectorySet b = scalar_set({{1.0, 2.0}, {3.0, 4.0}});
    CHECK_THROWS(kernel_KmT(a, b, 1, 2, lin));      // N mismatch
    CHECK_THROWS(kernel_KmT(b, b, 3, 2, lin));      // m > N
    CHECK_THROWS(kernel_KmT(a, a, 1, 3, lin));      // T too large
    CHECK_THROWS(kernel_KmT(b, b, 1, 0, lin));      // T < 1
    Lcg64 rng(1);
    const TrajectorySet big = random_set(rng, 4, 2, 1, true);
    CHECK_THROWS(kernel_KmT(big, big, 4, 2, lin));  // m > 3 unsupported
}

TEST_CASE("oracle equivalence: grid K_m^T matches the wedge expansion") {
    // linear-kernel draws keep dim >= m: with dim < m the determinants are an
    // exact zero (rank-deficient Gram blocks) and both paths return only
    // rounding noise, checked separately below
    Lcg64 rng(101);
    int done = 0;
    for (const KernelKind kind : {KernelKind::linear, KernelKind::gaussian, KernelKind::szego}) {
        const KernelSpec spec{kind, 0.8};
        for (int trial = 0; trial < 40; ++trial) {
            const int m = 1 + static_cast<int>(rng.below(3));
            const int n = m + static_cast<int>(rng.below(static_cast<std::uint64_t>(5 - m)));
            const long T = 1 + static_cast<long>(rng.below(5));
            const int dim = kind == KernelKind::szego
                                ? 1
                                : (kind == KernelKind::linear
                                       ? m + static_cast<int>(rng.below(static_cast<std::uint64_t>(4 - m)))
                                       : 1 + static_cast<int>(rng.below(3)));
            const TrajectorySet d1 = random_set(rng, n, T, dim, true);
            const TrajectorySet d2 = random_set(rng, n, T, dim, true);
            const cplx main = kernel_KmT(d1, d2, m, T, spec);
            const cplx oracle = wedge_oracle_KmT(d1, d2, m, T, spec);
            CHECK(close_rel(main, oracle, 1e-10));
            ++done;
        }
    }
    CHECK(done == 120);
}

TEST_CASE("rank-deficient linear case: both evaluators agree the value is zero") {
    Lcg64 rng(102);
    const KernelSpec lin = KernelSpec::linear();
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 2 + static_cast<int>(rng.below(2));
        const int dim = m - 1;  // observable dimension below the wedge degree
        const TrajectorySet d1 = random_set(rng, m, 4, dim, true);
        const TrajectorySet d2 = random_set(rng, m, 4, dim, true);
        CHECK(std::abs(kernel_KmT(d1, d2, m, 4, lin)) < 1e-12);
        CHECK(std::abs(wedge_oracle_KmT(d1, d2, m, 4, lin)) < 1e-12);
    }
}

TEST_CASE("wedge oracle size guard") {
    Lcg64 rng(7);
    const TrajectorySet d = random_set(rng, 2, 8, 1, true);
    CHECK_THROWS(wedge_oracle_KmT(d, d, 1, 8, KernelSpec::szego()));
}

TEST_CASE("parallel, serial and wide evaluators agree") {
    Lcg64 rng(103);
    for (const TimeCoupling coupling : {TimeCoupling::grid, TimeCoupling::synchronous}) {
        for (int trial = 0; trial < 20; ++trial) {
            const int m = 1 + static_cast<int>(rng.below(2));
            const int n = m + static_cast<int>(rng.below(2));
            const long T = 3 + static_cast<long>(rng.below(40));
            const TrajectorySet d1 = random_set(rng, n, T, 2, false);
            const TrajectorySet d2 = random_set(rng, n, T, 2, false);
            const KernelSpec lin = KernelSpec::linear();
            const cplx par = kernel_KmT(d1, d2, m, T, lin, coupling);
            const cplx ser = kernel_KmT_serial(d1, d2, m, T, lin, coupling);
            CHECK(close_rel(par, ser, 1e-12));
        }
    }
}

TEST_CASE("results are bit-identical across worker counts") {
    Lcg64 rng(107);
    const TrajectorySet d1 = random_set(rng, 3, 60, 2, false);
    const TrajectorySet d2 = random_set(rng, 3, 60, 2, false);
    const KernelSpec lin = KernelSpec::linear();
    const int dflt = max_worker_count();
    set_worker_count(1);
    const cplx one = kernel_KmT(d1, d2, 2, 60, lin);
    set_worker_count(2);
    const cplx two = kernel_KmT(d1, d2, 2, 60, lin);
    set_worker_count(4);
    const cplx four = kernel_KmT(d1, d2, 2, 60, lin);
    set_worker_count(dflt);
    CHECK(one == two);
    CHECK(one == four);
}

TEST_CASE("hermitian symmetry of K and symmetry of the angle") {
    Lcg64 rng(109);
    for (int trial = 0; trial < 30; ++trial) {
        const int m = 1 + static_cast<int>(rng.below(2));
        const TrajectorySet d1 = random_set(rng, 2, 6, 1, true);
        const TrajectorySet d2 = random_set(rng, 2, 6, 1, true);
        const KernelSpec sz = KernelSpec::szego();
        const cplx k12 = kernel_KmT(d1, d2, m, 6, sz);
        const cplx k21 = kernel_KmT(d2, d1, m, 6, sz);
        CHECK(close_rel(k12, std::conj(k21), 1e-12));
        const double a12 = angle_AmT(d1, d2, m, 6, sz);
        const double a21 = angle_AmT(d2, d1, m, 6, sz);
        CHECK(a12 == doctest::Approx(a21).epsilon(1e-12));
    }
}

TEST_CASE("diagonal K is real, non-negative and non-decreasing in T") {
    Lcg64 rng(113);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 1 + static_cast<int>(rng.below(2));
        const int n = m + static_cast<int>(rng.below(2));
        const TrajectorySet d = random_set(rng, n, 8, 2, true);
        const KernelSpec spec =
            trial % 2 ? KernelSpec::linear() : KernelSpec::gaussian(0.7);
        double prev = 0.0;
        for (long T = 1; T <= 8; ++T) {
            const cplx k = kernel_KmT(d, d, m, T, spec);
            CHECK(std::abs(k.imag()) <= 1e-10 * (1.0 + std::abs(k.real())));
            CHECK(k.real() >= prev - 1e-10 * (1.0 + std::abs(k.real())));
            prev = k.real();
        }
        CHECK(prev >= 0.0);
    }
}

TEST_CASE("Cauchy-Schwarz keeps the angle in [0,1]") {
    Lcg64 rng(127);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 1 + static_cast<int>(rng.below(2));
        const int n = m;
        const TrajectorySet d1 = random_set(rng, n, 5, 2, true);
        const TrajectorySet d2 = random_set(rng, n, 5, 2, true);
        const KernelSpec spec = trial % 2 ? KernelSpec::linear() : KernelSpec::gaussian(0.9);
        const double a = angle_AmT(d1, d2, m, 5, spec);
        CHECK(a >= 0.0);
        CHECK(a <= 1.0);
    }
}

TEST_CASE("angle branch rules") {
    const KernelSpec lin = KernelSpec::linear();

    // identical data: exactly 1
    Lcg64 rng(131);
    const TrajectorySet d = random_set(rng, 2, 5, 2, false);
    CHECK(angle_AmT(d, d, 2, 5, lin) == 1.0);

    // all-zero observables on both sides: the 0/0 limit is 1
    const TrajectorySet z = scalar_set({{0.0, 0.0, 0.0}});
    CHECK(angle_AmT(z, z, 1, 3, lin) == 1.0);

    // orthogonal data: K12 = 0 with positive diagonals
    TrajectorySet ex, ey;
    ex.name = "ex";
    ey.name = "ey";
    ex.sequences = {{Observable(std::vector<cplx>{1.0, 0.0}), Observable(std::vector<cplx>{2.0, 0.0})}};
    ey.sequences = {{Observable(std::vector<cplx>{0.0, 1.0}), Observable(std::vector<cplx>{0.0, -1.0})}};
    CHECK(angle_AmT(ex, ey, 1, 2, lin) == 0.0);

    // one degenerate side: 0
    const TrajectorySet nz = scalar_set({{1.0, 2.0, 1.0}});
    CHECK(angle_AmT(z, nz, 1, 3, lin) == 0.0);
}

TEST_CASE("estimate_Am modes and convergence flags") {
    const KernelSpec lin = KernelSpec::linear();
    Lcg64 rng(137);
    const TrajectorySet d = random_set(rng, 1, 64, 2, false);

    AngleSchedule sched = AngleSchedule::geometric(4, 64);
    const AngleResult self = estimate_Am(d, d, 1, sched, lin);
    CHECK(self.final_value == 1.0);
    CHECK(self.converged);
    CHECK(self.trace.front().first == 4);
    CHECK(self.trace.back().first == 64);

    // cesaro mean of a constant-1 sequence is 1
    sched.mode = AngleSchedule::Mode::cesaro;
    const AngleResult ces = estimate_Am(d, d, 1, sched, lin);
    CHECK(ces.final_value == doctest::Approx(1.0));
    CHECK(ces.converged);

    // insufficient data for the schedule
    CHECK_THROWS(estimate_Am(d, d, 1, AngleSchedule::geometric(4, 100), lin));
}

TEST_CASE("estimate against a decaying vs constant pair approaches the direct-sum value") {
    // f1(x) = 0.5 x vs f2(x) = x from x0 = 1, m=1, linear kernel:
    // K12^T = sum 0.5^t -> 2, K11^T -> 4/3, K22^T = T, so A^T ~ 3/T -> 0
    const long T = 4096;
    std::vector<double> a(T), b(T, 1.0);
    double v = 1.0;
    for (long t = 0; t < T; ++t) {
        a[static_cast<size_t>(t)] = v;
        v *= 0.5;
    }
    const TrajectorySet d1 = scalar_set({a});
    const TrajectorySet d2 = scalar_set({b});
    const AngleResult r = estimate_Am(d1, d2, 1, AngleSchedule::geometric(16, T), KernelSpec::linear());
    const double expected = 4.0 / (4.0 / 3.0) / static_cast<double>(T);  // |K12|^2/(K11 K22)
    CHECK(r.final_value == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("metric distance") {
    CHECK(metric_distance(1.0) == 0.0);
    CHECK(metric_distance(0.0) == 1.0);
    CHECK(metric_distance(0.75) == doctest::Approx(0.5));
    CHECK(metric_distance(1.0 + 0.5e-9) == 0.0);
    CHECK_THROWS(metric_distance(1.1));
    CHECK_THROWS(metric_distance(-0.1));
}

TEST_CASE("pairwise matrices: hermitian gram, unit diagonal angles, PSD") {
    Lcg64 rng(139);
    std::vector<TrajectorySet> sets;
    for (int i = 0; i < 4; ++i) sets.push_back(random_set(rng, 2, 5, 1, true));
    const KernelSpec sz = KernelSpec::szego();

    const auto gram = pairwise_gram(sets, 2, 5, sz);
    ComplexMatrix h(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            h(i, j) = gram[static_cast<size_t>(i)][static_cast<size_t>(j)];
            CHECK(close_rel(gram[static_cast<size_t>(i)][static_cast<size_t>(j)],
                            std::conj(gram[static_cast<size_t>(j)][static_cast<size_t>(i)]), 1e-12));
        }
    const auto ev = hermitian_eigenvalues(h);
    CHECK(ev.front() >= -1e-8 * std::max(1e-30, ev.back()));

    const auto ang = pairwise_angles(sets, 2, 5, sz);
    for (int i = 0; i < 4; ++i) {
        CHECK(ang[static_cast<size_t>(i)][static_cast<size_t>(i)] == 1.0);
        for (int j = 0; j < 4; ++j) {
            CHECK(ang[static_cast<size_t>(i)][static_cast<size_t>(j)] ==
                  ang[static_cast<size_t>(j)][static_cast<size_t>(i)]);
        }
    }
}

TEST_CASE("fixed-T pseudo-metric: symmetry, zero self-distance, triangle inequality") {
    Lcg64 rng(149);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 1 + static_cast<int>(rng.below(2));
        std::vector<TrajectorySet> tri;
        for (int i = 0; i < 3; ++i) tri.push_back(random_set(rng, m, 4, 2, true));
        const KernelSpec spec = trial % 2 ? KernelSpec::linear() : KernelSpec::gaussian(0.8);
        const auto ang = pairwise_angles(tri, m, 4, spec);
        double dist[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) dist[i][j] = metric_distance(ang[static_cast<size_t>(i)][static_cast<size_t>(j)]);
        for (int i = 0; i < 3; ++i) {
            CHECK(dist[i][i] == 0.0);
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    CHECK(dist[i][j] <= dist[i][k] + dist[k][j] + 1e-8);
        }
    }
}

TEST_CASE("grid and synchronous couplings coincide at m=1 and differ at m=2") {
    Lcg64 rng(151);
    const TrajectorySet d1 = random_set(rng, 2, 6, 2, false);
    const TrajectorySet d2 = random_set(rng, 2, 6, 2, false);
    const KernelSpec lin = KernelSpec::linear();
    CHECK(close_rel(kernel_KmT(d1, d2, 1, 6, lin, TimeCoupling::grid),
                    kernel_KmT(d1, d2, 1, 6, lin, TimeCoupling::synchronous), 1e-12));
    const cplx g = kernel_KmT(d1, d2, 2, 6, lin, TimeCoupling::grid);
    const cplx s = kernel_KmT(d1, d2, 2, 6, lin, TimeCoupling::synchronous);
    CHECK(std::abs(g - s) > 1e-6 * (std::abs(g) + std::abs(s)));
}

TEST_CASE("scaled trajectories reproduce plain results where both are representable") {
    // same dynamics, one trajectory forced through the scaled representation
    ComplexMatrix a(1, 1);
    a(0, 0) = 1.01;
    const ComplexMatrix c = ComplexMatrix::identity(1);
    const long T = 500;
    const TrajectorySet plain = linear_simulate(a, c, {{cplx{1.0, 0.0}}}, T);

    TrajectorySet scaled = plain;
    for (auto& seq : scaled.sequences)
        for (Observable& ob : seq) {
            // shift mantissa by 2^-300 and record the scale: value unchanged
            for (cplx& v : ob.values) v = {std::ldexp(v.real(), -300), std::ldexp(v.imag(), -300)};
            ob.scale2 += 300;
        }
    const KernelSpec lin = KernelSpec::linear();
    const ScaledComplex kp = kernel_KmT_wide(plain, plain, 1, T, lin);
    const ScaledComplex ks = kernel_KmT_wide(scaled, scaled, 1, T, lin);
    CHECK(kp.fold() == ks.fold());
}
