// Benchmark of the OpenMP K_m^T kernel against the serial reference, on the
// m=2 Szego rotation workload (the T^2 grid that dominates real runs).
// Usage: bench_kmt [--smoke]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "dsmetric/metric_core.hpp"
#include "dsmetric/trajectories.hpp"

using namespace dsmetric;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    const bool smoke = argc > 1 && std::strcmp(argv[1], "--smoke") == 0;
    const KernelSpec sz = KernelSpec::szego();
    const int default_workers = max_worker_count();

    std::vector<long> horizons = smoke ? std::vector<long>{64, 128} : std::vector<long>{256, 512, 1024, 2048};
    std::printf("%8s %12s %12s %9s %12s\n", "T", "serial[s]", "parallel[s]", "speedup", "rel.diff");
    bool ok = true;
    for (long T : horizons) {
        const RotationSpec s1{1.0, AngleClass::rational(1, 3), {0.9, 0.0}, {0, 1}};
        const RotationSpec s2{0.9, AngleClass::rational(1, 4), {0.9, 0.0}, {0, 1}};
        const TrajectorySet d1 = rotation_orbit(s1, T);
        const TrajectorySet d2 = rotation_orbit(s2, T);

        auto t0 = clock_type::now();
        const cplx ser = kernel_KmT_serial(d1, d2, 2, T, sz);
        const double ts = seconds_since(t0);

        t0 = clock_type::now();
        const cplx par = kernel_KmT(d1, d2, 2, T, sz);
        const double tp = seconds_since(t0);

        const double rel = std::abs(par - ser) / std::max(1e-300, std::abs(ser));
        ok = ok && rel < 1e-12;
        std::printf("%8ld %12.4f %12.4f %8.2fx %12.3e\n", T, ts, tp, ts / std::max(1e-9, tp), rel);

        // worker-count independence, bit for bit
        set_worker_count(1);
        const cplx one = kernel_KmT(d1, d2, 2, T, sz);
        set_worker_count(default_workers);
        if (one != par) {
            std::printf("worker-count dependence detected at T=%ld\n", T);
            ok = false;
        }
    }
    if (!ok) {
        std::printf("FAIL: serial/parallel disagreement\n");
        return 1;
    }
    std::printf("serial and parallel evaluators agree; results independent of worker count\n");
    return 0;
}
