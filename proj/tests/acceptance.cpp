// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerances in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "dsmetric/complex_linalg.hpp"
#include "dsmetric/eval.hpp"
#include "dsmetric/linear_analytic.hpp"
#include "dsmetric/metric_core.hpp"
#include "dsmetric/pipeline.hpp"
#include "dsmetric/rng.hpp"
#include "dsmetric/rotation_oracle.hpp"
#include "dsmetric/traj_io.hpp"
#include "dsmetric/trajectories.hpp"

using namespace dsmetric;

namespace {

struct Outcome {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

std::vector<Outcome> g_results;

template <typename F>
void run_criterion(const std::string& name, F&& body) {
    Outcome o;
    o.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        o.detail = body();
        o.pass = true;
    } catch (const std::exception& e) {
        o.detail = e.what();
        o.pass = false;
    }
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    g_results.push_back(o);
}

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::runtime_error(msg);
}

std::string fmt(double v) { return format_g17(v); }

TrajectorySet random_disk_set(Lcg64& rng, int n_seq, long T, int dim) {
    TrajectorySet ts;
    ts.name = "random";
    for (int s = 0; s < n_seq; ++s) {
        std::vector<Observable> seq;
        for (long t = 0; t < T; ++t) {
            std::vector<cplx> v(static_cast<size_t>(dim));
            for (int i = 0; i < dim; ++i)
                v[static_cast<size_t>(i)] = std::polar(0.85 * rng.uniform(), rng.uniform(0.0, 6.283185307179586));
            seq.emplace_back(std::move(v));
        }
        ts.sequences.push_back(std::move(seq));
    }
    return ts;
}

TrajectorySet rotation_pair_system(double modulus, const AngleClass& angle, cplx z0, long T) {
    // two-sequence system (orbit and its one-step shift), the m=2 setup
    return rotation_orbit({modulus, angle, z0, {0, 1}}, T);
}

// ---------------------------------------------------------------------------
std::string criterion1_oracle_equivalence() {
    // linear-kernel draws keep the observable dimension >= m; below that the
    // determinants are an exact zero (rank-deficient Gram blocks) and a
    // relative comparison of two rounding-noise evaluations is meaningless --
    // those cases are asserted to be zero on both paths instead
    Lcg64 rng(20240801);
    int instances = 0;
    double worst = 0.0;
    for (const KernelKind kind : {KernelKind::linear, KernelKind::gaussian, KernelKind::szego}) {
        const KernelSpec spec{kind, 0.8};
        for (int trial = 0; trial < 70; ++trial) {
            const int m = 1 + static_cast<int>(rng.below(3));
            const int n = m + static_cast<int>(rng.below(static_cast<std::uint64_t>(5 - m)));
            const long T = 1 + static_cast<long>(rng.below(5));
            const int dim = kind == KernelKind::szego
                                ? 1
                                : (kind == KernelKind::linear
                                       ? m + static_cast<int>(rng.below(static_cast<std::uint64_t>(4 - m)))
                                       : 1 + static_cast<int>(rng.below(3)));
            const TrajectorySet d1 = random_disk_set(rng, n, T, dim);
            const TrajectorySet d2 = random_disk_set(rng, n, T, dim);
            const cplx main = kernel_KmT(d1, d2, m, T, spec);
            const cplx oracle = wedge_oracle_KmT(d1, d2, m, T, spec);
            const double rel = std::abs(main - oracle) / std::max({std::abs(main), std::abs(oracle), 1e-300});
            worst = std::max(worst, rel);
            ++instances;
        }
    }
    for (int trial = 0; trial < 10; ++trial) {  // degenerate linear draws
        const int m = 2 + static_cast<int>(rng.below(2));
        const TrajectorySet d1 = random_disk_set(rng, m, 4, m - 1);
        const TrajectorySet d2 = random_disk_set(rng, m, 4, m - 1);
        require(std::abs(kernel_KmT(d1, d2, m, 4, KernelSpec::linear())) < 1e-12 &&
                    std::abs(wedge_oracle_KmT(d1, d2, m, 4, KernelSpec::linear())) < 1e-12,
                "rank-deficient case not zero");
        ++instances;
    }
    require(instances >= 200, "fewer than 200 instances");
    require(worst <= 1e-10, "worst relative gap " + fmt(worst) + " exceeds 1e-10");
    return std::to_string(instances) + " instances, worst relative gap " + fmt(worst);
}

// ---------------------------------------------------------------------------
std::string criterion2_rotation_a1() {
    const KernelSpec sz = KernelSpec::szego();
    const cplx z0{0.9, 0.0};
    std::string detail;

    // (a) rational relative angle q=4, direct, T=2000
    {
        const TrajectorySet d1 = rotation_orbit({1.0, AngleClass::rational(1, 4), z0, {0}}, 2000);
        const TrajectorySet d2 = rotation_orbit({1.0, AngleClass::rational(0, 1), z0, {0}}, 2000);
        const AngleResult r = estimate_Am(d1, d2, 1, AngleSchedule::geometric(16, 2000), sz);
        const double closed = analytic_A1(1.0, 1.0, AngleClass::rational(1, 4), z0, z0);
        require(std::abs(r.final_value - closed) <= 1e-2,
                "(a) estimate " + fmt(r.final_value) + " vs closed form " + fmt(closed));
        require(std::abs(r.final_value - 0.111285) <= 1e-2, "(a) estimate vs quoted value");
        detail += "(a) " + fmt(r.final_value) + " vs " + fmt(closed);
    }
    // (b) irrational relative angle (golden ratio), cesaro, T=2000
    {
        const AngleClass golden = AngleClass::irrational(0.6180339887498949, "golden");
        const TrajectorySet d1 = rotation_orbit({1.0, golden, z0, {0}}, 2000);
        const TrajectorySet d2 = rotation_orbit({1.0, AngleClass::rational(0, 1), z0, {0}}, 2000);
        AngleSchedule sched = AngleSchedule::geometric(16, 2000, AngleSchedule::Mode::cesaro);
        const AngleResult r = estimate_Am(d1, d2, 1, sched, sz);
        require(std::abs(r.final_value - 0.0361) <= 2e-2,
                "(b) cesaro estimate " + fmt(r.final_value) + " vs 0.0361");
        detail += "; (b) " + fmt(r.final_value) + " vs 0.0361";
    }
    // (c) both moduli < 1: limit 1 (T=20000: the approach is ~C/T with C~12)
    {
        const TrajectorySet d1 = rotation_orbit({0.9, AngleClass::rational(1, 3), z0, {0}}, 20000);
        const TrajectorySet d2 = rotation_orbit({0.3, AngleClass::rational(1, 4), z0, {0}}, 20000);
        const AngleResult r = estimate_Am(d1, d2, 1, AngleSchedule::geometric(16, 20000), sz);
        require(std::abs(r.final_value - 1.0) <= 1e-3,
                "(c) estimate " + fmt(r.final_value) + " vs 1");
        detail += "; (c) " + fmt(r.final_value) + " vs 1";
    }
    return detail;
}

// ---------------------------------------------------------------------------
std::string criterion3_rotation_a2() {
    const KernelSpec sz = KernelSpec::szego();
    const long T = 2000;
    std::string detail;

    // mixed unit/contracting pairs: limit exactly 0
    {
        const struct {
            double mod1, mod2;
            AngleClass a1, a2;
        } mixed[2] = {{1.0, 0.9, AngleClass::rational(1, 4), AngleClass::rational(1, 3)},
                      {1.0, 0.3, AngleClass::irrational(0.6180339887498949), AngleClass::rational(1, 4)}};
        for (const auto& mx : mixed) {
            const TrajectorySet d1 = rotation_pair_system(mx.mod1, mx.a1, {0.9, 0.0}, T);
            const TrajectorySet d2 = rotation_pair_system(mx.mod2, mx.a2, {0.9, 0.0}, T);
            const AngleResult r = estimate_Am(d1, d2, 2, AngleSchedule::geometric(16, T), sz);
            const A2Branch br = analytic_A2_exact_branches({mx.mod1, mx.a1}, {mx.mod2, mx.a2},
                                                           {0.9, 0.0}, {0.9, 0.0});
            require(br.kind == A2Branch::Kind::zero, "branch table disagrees");
            require(r.final_value < 1e-3, "mixed-pair estimate " + fmt(r.final_value) + " not < 1e-3");
            detail += "mixed " + fmt(r.final_value) + "; ";
        }
    }
    // both contracting, small initial values: leading term 0.87515...
    {
        const cplx z{0.05, 0.0};
        const TrajectorySet d1 = rotation_pair_system(0.5, AngleClass::rational(0, 1), z, T);
        const TrajectorySet d2 = rotation_pair_system(0.25, AngleClass::rational(0, 1), z, T);
        const AngleResult r = estimate_Am(d1, d2, 2, AngleSchedule::geometric(16, T), sz);
        const A2Branch br = analytic_A2_exact_branches({0.5, AngleClass::rational(0, 1)},
                                                       {0.25, AngleClass::rational(0, 1)}, z, z);
        require(br.kind == A2Branch::Kind::leading_term, "branch table disagrees");
        require(std::abs(r.final_value - br.value) <= 5e-3,
                "contracting estimate " + fmt(r.final_value) + " vs leading term " + fmt(br.value));
        detail += "contracting " + fmt(r.final_value) + " vs " + fmt(br.value);
    }
    return detail;
}

// ---------------------------------------------------------------------------
LinearSystem random_stable_system(Lcg64& rng, int q, int r) {
    while (true) {
        ComplexMatrix a(q, q), c(r, q);
        for (auto& v : a.a) v = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        for (auto& v : c.a) v = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        const double rho = spectral_radius(a);
        if (rho == 0.0) continue;
        const double f = rng.uniform(0.3, 0.85) / rho;
        for (auto& v : a.a) v *= f;
        LinearSystem s{a, c};
        try {
            subspace_angle_distance(s, s);
            return s;
        } catch (...) {
        }
    }
}

std::string criterion4_linear_consistency() {
    Lcg64 rng(424242);
    double worst_gap = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int q = 1 + static_cast<int>(rng.below(3));
        const int r = 1 + static_cast<int>(rng.below(2));
        const LinearSystem s1 = random_stable_system(rng, q, r);
        const LinearSystem s2 = random_stable_system(rng, q, r);
        const ClosedFormCheck chk = angle_vs_closed_form_check(s1, s2, 2000);
        worst_gap = std::max(worst_gap, chk.gap);
        require(chk.gap < 1e-3, "estimate/closed-form gap " + fmt(chk.gap) + " at q=" + std::to_string(q));
    }

    // subspace-angle product vs the AR closed form, and the scalar witness
    double worst_ar = 0.0;
    int ar_pairs = 0;
    while (ar_pairs < 20) {
        const int q = 1 + static_cast<int>(rng.below(3));
        auto gen_roots = [&](std::vector<cplx>& out) {
            out.clear();
            if (q >= 2 && rng.below(2) == 0) {
                const cplx zz = std::polar(rng.uniform(0.2, 0.85), rng.uniform(0.1, 3.0));
                out.push_back(zz);
                out.push_back(std::conj(zz));
                for (int i = 2; i < q; ++i) out.emplace_back(rng.uniform(-0.85, 0.85), 0.0);
            } else {
                for (int i = 0; i < q; ++i) out.emplace_back(rng.uniform(-0.85, 0.85), 0.0);
            }
        };
        std::vector<cplx> roots1, roots2;
        gen_roots(roots1);
        gen_roots(roots2);
        auto coeffs_of = [](const std::vector<cplx>& roots) {
            std::vector<cplx> poly{1.0};
            for (const cplx& root : roots) {
                std::vector<cplx> next(poly.size() + 1, cplx{});
                for (size_t i = 0; i < poly.size(); ++i) {
                    next[i] += poly[i];
                    next[i + 1] -= poly[i] * root;
                }
                poly = std::move(next);
            }
            std::vector<double> coeffs;
            for (size_t i = 1; i < poly.size(); ++i) coeffs.push_back(-poly[i].real());
            return coeffs;
        };
        const std::vector<double> co1 = coeffs_of(roots1), co2 = coeffs_of(roots2);
        if (co1.back() == 0.0 || co2.back() == 0.0) continue;
        try {
            const double closed = ar_closed_form_Aq(roots1, roots2);
            const double angles =
                subspace_angle_distance(ar_companion(ARModel{co1}), ar_companion(ARModel{co2}))
                    .product_cos2();
            const double gap = std::abs(closed - angles);
            worst_ar = std::max(worst_ar, gap);
            require(gap < 1e-8, "AR closed form vs subspace product gap " + fmt(gap));
            ++ar_pairs;
        } catch (const std::runtime_error&) {
            continue;  // repeated-root draw
        }
    }

    const double witness = ar_closed_form_Aq({cplx{0.5, 0.0}}, {cplx{0.25, 0.0}});
    require(std::abs(witness - 0.9183673469) < 1e-9, "scalar witness " + fmt(witness));
    return "20 linear pairs (worst gap " + fmt(worst_gap) + "), 20 AR pairs (worst gap " +
           fmt(worst_ar) + "), witness " + fmt(witness);
}

// ---------------------------------------------------------------------------
std::string criterion5_phase_transition() {
    const long T = 1000000;
    ComplexMatrix c1 = ComplexMatrix::identity(1);
    auto scalar_system = [&](double a) {
        ComplexMatrix m(1, 1);
        m(0, 0) = a;
        return m;
    };
    const std::vector<std::vector<cplx>> x0{{cplx{1.0, 0.0}}};
    const TrajectorySet grow = linear_simulate(scalar_system(1.01), c1, x0, T);
    const TrajectorySet flat = linear_simulate(scalar_system(1.00), c1, x0, T);
    const TrajectorySet decay = linear_simulate(scalar_system(0.99), c1, x0, T);

    const KernelSpec lin = KernelSpec::linear();
    const AngleSchedule sched = AngleSchedule::geometric(16, T);
    std::string detail = "A1:";
    const TrajectorySet* sets[3] = {&grow, &flat, &decay};
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const AngleResult r = estimate_Am(*sets[i], *sets[j], 1, sched, lin);
            require(r.final_value <= 1e-3,
                    "pair (" + std::to_string(i) + "," + std::to_string(j) + ") A=" + fmt(r.final_value));
            detail += " " + fmt(r.final_value);
        }

    // the discounted trace kernel cannot tell the same systems apart
    const LinearSystem sys[3] = {{scalar_system(1.01), c1}, {scalar_system(1.00), c1},
                                 {scalar_system(0.99), c1}};
    const std::vector<cplx> x0v{cplx{1.0, 0.0}};
    detail += "; binet cosines:";
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const double kij = binet_cauchy_trace(sys[i], sys[j], x0v, x0v, 1.0, 100).value.real();
            const double kii = binet_cauchy_trace(sys[i], sys[i], x0v, x0v, 1.0, 100).value.real();
            const double kjj = binet_cauchy_trace(sys[j], sys[j], x0v, x0v, 1.0, 100).value.real();
            const double cosine = kij / std::sqrt(kii * kjj);
            require(cosine > 0.99, "cosine " + fmt(cosine) + " not > 0.99");
            detail += " " + fmt(cosine);
        }
    return detail;
}

// ---------------------------------------------------------------------------
std::string criterion6_pseudo_metric_psd() {
    Lcg64 rng(606060);
    double worst_violation = 0.0, worst_eig = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 1 + static_cast<int>(rng.below(2));
        const KernelSpec spec = trial % 3 == 0   ? KernelSpec::linear()
                                : trial % 3 == 1 ? KernelSpec::gaussian(0.8)
                                                 : KernelSpec::szego();
        const int dim = spec.kind == KernelKind::szego ? 1 : 2;
        std::vector<TrajectorySet> tri;
        for (int i = 0; i < 3; ++i) tri.push_back(random_disk_set(rng, m, 4, dim));

        const auto ang = pairwise_angles(tri, m, 4, spec);
        double dist[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                dist[i][j] = metric_distance(ang[static_cast<size_t>(i)][static_cast<size_t>(j)]);
        for (int i = 0; i < 3; ++i) {
            require(dist[i][i] == 0.0, "nonzero self-distance");
            for (int j = 0; j < 3; ++j) {
                require(dist[i][j] == dist[j][i], "asymmetric distance");
                for (int k = 0; k < 3; ++k)
                    worst_violation = std::max(worst_violation, dist[i][j] - dist[i][k] - dist[k][j]);
            }
        }

        const auto gram = pairwise_gram(tri, m, 4, spec);
        ComplexMatrix h(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) h(i, j) = gram[static_cast<size_t>(i)][static_cast<size_t>(j)];
        const auto ev = hermitian_eigenvalues(h);
        worst_eig = std::max(worst_eig, -ev.front() / std::max(1e-300, ev.back()));
    }
    require(worst_violation <= 1e-8, "triangle violation " + fmt(worst_violation));
    require(worst_eig <= 1e-8, "gram eigenvalue ratio " + fmt(worst_eig));
    return "100 triples; worst triangle slack " + fmt(worst_violation) + ", worst negative-eig ratio " +
           fmt(worst_eig);
}

// ---------------------------------------------------------------------------
std::string criterion7_monotonicity() {
    Lcg64 rng(707070);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 1 + static_cast<int>(rng.below(2));
        const KernelSpec spec = trial % 3 == 0   ? KernelSpec::linear()
                                : trial % 3 == 1 ? KernelSpec::gaussian(0.7)
                                                 : KernelSpec::szego();
        const int dim = spec.kind == KernelKind::szego ? 1 : 2;
        const TrajectorySet d = random_disk_set(rng, m + static_cast<int>(rng.below(2)), 6, dim);
        double prev = 0.0;
        for (long T = 1; T <= 6; ++T) {
            const cplx k = kernel_KmT(d, d, m, T, spec);
            require(k.real() >= prev - 1e-10 * (1.0 + std::abs(k.real())),
                    "diagonal K decreased at T=" + std::to_string(T));
            prev = k.real();
        }
        require(prev >= 0.0, "negative diagonal K");
    }
    return "100 random datasets, all diagonal sequences non-negative and non-decreasing";
}

// ---------------------------------------------------------------------------
std::string criterion8_classification() {
    // seeded synthetic corpus: 3 rotation classes x 20 series, noise-free
    Lcg64 rng(19937);
    std::string ucr;
    const double turns[3] = {0.25, 1.0 / 3.0, 0.6180339887498949};
    const long len = 120;
    for (int cls = 0; cls < 3; ++cls)
        for (int s = 0; s < 20; ++s) {
            ucr += std::to_string(cls + 1);
            const double phase = rng.uniform(0.0, 1.0);
            for (long t = 0; t < len; ++t) {
                const double v = 0.9 * std::cos(6.283185307179586 * (turns[cls] * static_cast<double>(t) + phase));
                ucr += ',' + format_g17(v);
            }
            ucr += '\n';
        }
    const auto dir = std::filesystem::temp_directory_path() / "dsmetric_acceptance";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "rotation_corpus.ucr").string();
    write_text_file(path, ucr);

    ClassifyConfig cfg;
    cfg.ucr_path = path;
    cfg.kernel = {"gaussian", "auto"};
    cfg.m = 2;
    cfg.schedule.tmax = 100;
    cfg.embed_dim = 2;
    cfg.embed_lag = 1;
    cfg.k = 3;
    cfg.folds = 10;
    cfg.trials = 10;
    cfg.seed = 7;
    const ClassifyOutputs first = run_classify(cfg);
    require(first.mean_error == 0.0, "mean error " + fmt(first.mean_error) + " not 0.00");
    const ClassifyOutputs second = run_classify(cfg);
    require(first.report_json == second.report_json && first.distances_csv == second.distances_csv,
            "rerun not byte-identical");

    // UCR format conformance: the bundled fixture runs through the same pipeline
    ClassifyConfig fx;
    fx.ucr_path = std::string(DSMETRIC_TEST_DATA) + "/sample.ucr";
    fx.kernel = {"gaussian", "auto"};
    fx.m = 1;
    fx.schedule.tmax = 16;
    fx.k = 1;
    fx.folds = 2;
    fx.trials = 2;
    fx.seed = 3;
    const ClassifyOutputs fxout = run_classify(fx);
    require(!fxout.report_json.empty(), "fixture run produced no report");
    return "mean error 0.00 over 10x10-fold CV; rerun byte-identical; fixture ok (error " +
           fmt(fxout.mean_error) + ")";
}

}  // namespace

int main() {
    run_criterion("1 oracle equivalence (grid vs wedge expansion)", criterion1_oracle_equivalence);
    run_criterion("2 rotation A1 reproduction", criterion2_rotation_a1);
    run_criterion("3 rotation A2 exact branches", criterion3_rotation_a2);
    run_criterion("4 linear-system consistency", criterion4_linear_consistency);
    run_criterion("5 phase-transition discrimination", criterion5_phase_transition);
    run_criterion("6 pseudo-metric and PSD properties", criterion6_pseudo_metric_psd);
    run_criterion("7 diagonal monotonicity", criterion7_monotonicity);
    run_criterion("8 end-to-end classification", criterion8_classification);

    int failures = 0;
    for (const Outcome& o : g_results) {
        std::printf("[%s] criterion %-48s (%6.1fs) %s\n", o.pass ? "PASS" : "FAIL", o.name.c_str(),
                    o.seconds, o.detail.c_str());
        failures += o.pass ? 0 : 1;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
